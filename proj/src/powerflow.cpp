#include "flexagg/powerflow.hpp"

#include "flexagg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace flexagg {

namespace {

using Complex = std::complex<double>;

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

const char* to_string(SolveStatus status) noexcept {
    switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::non_convergence: return "non_convergence";
    case SolveStatus::singular_jacobian: return "singular_jacobian";
    }
    return "unknown";
}

PowerFlowSolver::PowerFlowSolver(const GridModel& grid, SolverOptions options)
    : grid_(grid), options_(options), s_base_mva_(grid.transformer.s_rated_mva) {
    const int n_bus = static_cast<int>(grid_.buses.size());
    if (n_bus != grid_.n_nodes() + 2 || grid_.lines.size() != grid_.ders.size())
        throw InvalidArgument("grid model is not a radial chain with one DER per node");
    for (std::size_t k = 0; k < grid_.lines.size(); ++k) {
        const auto& line = grid_.lines[k];
        if (line.from_bus != static_cast<int>(k) + 1 || line.to_bus != static_cast<int>(k) + 2)
            throw InvalidArgument("grid lines must form the chain lv bus -> node 1 -> ... -> node N");
        line.params.validate();
    }
    grid_.transformer.validate();

    const double freq = grid_.spec.frequency_hz;
    const auto& tr = grid_.transformer;

    // Series and shunt elements in per-unit on the system base.
    lines_.reserve(grid_.lines.size());
    for (const auto& line : grid_.lines) {
        const double vn = grid_.buses[line.to_bus].vn_kv;
        const double z_base = vn * vn / s_base_mva_;
        const double km = line.length_m / 1000.0;
        const Complex z{line.params.r_ohm_per_km * km / z_base, line.params.x_ohm_per_km * km / z_base};
        LineBranch br;
        br.zero_impedance = (z == Complex{});
        br.series_y = br.zero_impedance ? Complex{} : 1.0 / z;
        const double b_total = 2.0 * std::numbers::pi * freq * line.params.c_nf_per_km * 1e-9 * km * z_base;
        br.shunt_half = Complex{0.0, b_total / 2.0};
        lines_.push_back(br);
    }

    {
        // Short-circuit impedance on the rated base, referred to the LV bus
        // voltage and converted to the system base.
        const double vn_lv = grid_.buses[GridModel::lv_bus].vn_kv;
        const double ratio = tr.v_lv_kv / vn_lv;
        const double to_sys = s_base_mva_ / tr.s_rated_mva * ratio * ratio;
        const double r = tr.vkr_percent / 100.0;
        const double x = std::sqrt(std::max(0.0, tr.vk_percent * tr.vk_percent -
                                                     tr.vkr_percent * tr.vkr_percent)) / 100.0;
        const Complex z = Complex{r, x} * to_sys;
        trafo_.zero_impedance = (z == Complex{});
        trafo_.z_half = z / 2.0;
        const double g = tr.pfe_kw / 1000.0 / tr.s_rated_mva;
        const double y_abs = tr.i0_percent / 100.0;
        const double b = std::sqrt(std::max(0.0, y_abs * y_abs - g * g));
        trafo_.y_mag = Complex{g, -b} / to_sys;
    }

    // Merge buses joined by zero-impedance branches.
    std::vector<int> parent(n_bus);
    std::iota(parent.begin(), parent.end(), 0);
    auto unite = [&](int a, int b) { parent[find_root(parent, a)] = find_root(parent, b); };
    if (trafo_.zero_impedance) unite(GridModel::slack_bus, GridModel::lv_bus);
    for (std::size_t k = 0; k < lines_.size(); ++k)
        if (lines_[k].zero_impedance) unite(grid_.lines[k].from_bus, grid_.lines[k].to_bus);

    node_of_bus_.assign(n_bus, -1);
    std::vector<int> node_of_root(n_bus, -1);
    for (int b = 0; b < n_bus; ++b) {
        const int root = find_root(parent, b);
        if (node_of_root[root] < 0) node_of_root[root] = n_nodes_++;
        node_of_bus_[b] = node_of_root[root];
    }
    slack_node_ = node_of_bus_[GridModel::slack_bus];
    pq_index_of_node_.assign(n_nodes_, -1);
    for (int n = 0; n < n_nodes_; ++n) {
        if (n == slack_node_) continue;
        pq_index_of_node_[n] = static_cast<int>(pq_nodes_.size());
        pq_nodes_.push_back(n);
    }

    ybus_ = Eigen::MatrixXcd::Zero(n_nodes_, n_nodes_);
    for (std::size_t k = 0; k < lines_.size(); ++k) {
        const int f = node_of_bus_[grid_.lines[k].from_bus];
        const int t = node_of_bus_[grid_.lines[k].to_bus];
        const auto& br = lines_[k];
        ybus_(f, f) += br.series_y + br.shunt_half;
        ybus_(t, t) += br.series_y + br.shunt_half;
        ybus_(f, t) -= br.series_y;
        ybus_(t, f) -= br.series_y;
    }
    {
        const int h = node_of_bus_[GridModel::slack_bus];
        const int l = node_of_bus_[GridModel::lv_bus];
        if (trafo_.zero_impedance) {
            ybus_(h, h) += trafo_.y_mag;
        } else {
            // Kron reduction of the T's internal node.
            const Complex y1 = 1.0 / trafo_.z_half;
            const Complex y2 = y1;
            const Complex sum = y1 + y2 + trafo_.y_mag;
            ybus_(h, h) += y1 - y1 * y1 / sum;
            ybus_(l, l) += y2 - y2 * y2 / sum;
            ybus_(h, l) -= y1 * y2 / sum;
            ybus_(l, h) -= y1 * y2 / sum;
        }
    }
}

PowerFlowResult PowerFlowSolver::solve(const ControlScenario& scenario) const {
    return solve(std::span<const Setpoint>(scenario.setpoints));
}

PowerFlowResult PowerFlowSolver::solve(std::span<const Setpoint> setpoints) const {
    if (setpoints.size() != grid_.ders.size())
        throw InvalidArgument("scenario has " + std::to_string(setpoints.size()) +
                              " setpoints, grid has " + std::to_string(grid_.ders.size()) + " DERs");

    const int n_pq = static_cast<int>(pq_nodes_.size());
    const double kw_to_pu = 1.0 / (1000.0 * s_base_mva_);

    Eigen::VectorXcd s_spec = Eigen::VectorXcd::Zero(n_nodes_);
    for (std::size_t j = 0; j < setpoints.size(); ++j) {
        const int node = node_of_bus_[GridModel::bus_of_node(grid_.ders[j].node_index)];
        s_spec(node) += Complex{setpoints[j].p_kw, setpoints[j].q_kvar} * kw_to_pu;
    }

    Eigen::VectorXd vm = Eigen::VectorXd::Ones(n_nodes_);
    Eigen::VectorXd va = Eigen::VectorXd::Zero(n_nodes_);
    vm(slack_node_) = grid_.spec.slack_voltage_pu;

    Eigen::VectorXcd v(n_nodes_);
    Eigen::VectorXcd current(n_nodes_);
    Eigen::VectorXd mismatch(2 * n_pq);

    auto evaluate = [&]() {
        for (int n = 0; n < n_nodes_; ++n) v(n) = std::polar(vm(n), va(n));
        current = ybus_ * v;
        double worst = 0.0;
        for (int i = 0; i < n_pq; ++i) {
            const int n = pq_nodes_[i];
            const Complex s_calc = v(n) * std::conj(current(n));
            const Complex d = s_calc - s_spec(n);
            mismatch(i) = d.real();
            mismatch(n_pq + i) = d.imag();
            worst = std::max({worst, std::abs(d.real()), std::abs(d.imag())});
        }
        return worst;
    };

    PowerFlowResult out;
    double worst = evaluate();
    Eigen::MatrixXd jac(2 * n_pq, 2 * n_pq);
    while (std::isfinite(worst) && worst > options_.tolerance_pu &&
           out.iterations < options_.max_iterations) {
        // dS/dVa = j diag(V) conj(diag(I) - Y diag(V))
        // dS/dVm = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
        for (int i = 0; i < n_pq; ++i) {
            const int r = pq_nodes_[i];
            for (int k = 0; k < n_pq; ++k) {
                const int c = pq_nodes_[k];
                const Complex y = ybus_(r, c);
                const Complex unit_c = v(c) / vm(c);
                Complex ds_dva = -Complex{0.0, 1.0} * v(r) * std::conj(y * v(c));
                Complex ds_dvm = v(r) * std::conj(y * unit_c);
                if (r == c) {
                    ds_dva += Complex{0.0, 1.0} * v(r) * std::conj(current(r));
                    ds_dvm += std::conj(current(r)) * unit_c;
                }
                jac(i, k) = ds_dva.real();
                jac(i, n_pq + k) = ds_dvm.real();
                jac(n_pq + i, k) = ds_dva.imag();
                jac(n_pq + i, n_pq + k) = ds_dvm.imag();
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        if (!(lu.rcond() >= options_.min_rcond)) {
            out.status = SolveStatus::singular_jacobian;
            out.max_mismatch_pu = worst;
            break;
        }
        const Eigen::VectorXd dx = lu.solve(mismatch);
        for (int i = 0; i < n_pq; ++i) {
            va(pq_nodes_[i]) -= dx(i);
            vm(pq_nodes_[i]) -= dx(n_pq + i);
        }
        ++out.iterations;
        worst = evaluate();
    }
    if (out.status == SolveStatus::singular_jacobian) return out;

    out.max_mismatch_pu = worst;
    out.status = (std::isfinite(worst) && worst <= options_.tolerance_pu) ? SolveStatus::converged
                                                                          : SolveStatus::non_convergence;
    if (!out.converged()) return out;

    const int n_bus = static_cast<int>(grid_.buses.size());
    std::vector<Complex> v_bus(n_bus);
    out.v_mag_pu.resize(n_bus);
    out.v_ang_rad.resize(n_bus);
    for (int b = 0; b < n_bus; ++b) {
        const int n = node_of_bus_[b];
        v_bus[b] = v(n);
        out.v_mag_pu[b] = vm(n);
        out.v_ang_rad[b] = va(n);
    }

    const Complex s_slack = v(slack_node_) * std::conj(current(slack_node_)) - s_spec(slack_node_);
    out.p_ipf_kw = -s_slack.real() * 1000.0 * s_base_mva_;
    out.q_ipf_kvar = -s_slack.imag() * 1000.0 * s_base_mva_;

    compute_branch_flows(v_bus, setpoints, out);
    return out;
}

void PowerFlowSolver::compute_branch_flows(const std::vector<Complex>& v,
                                           std::span<const Setpoint> setpoints,
                                           PowerFlowResult& out) const {
    // Backward sweep along the chain using KCL, so that branches collapsed
    // into one electrical node still get their current.
    const double kva_per_pu = 1000.0 * s_base_mva_;
    const int n_bus = static_cast<int>(v.size());
    std::vector<Complex> i_injected(n_bus);
    for (std::size_t j = 0; j < setpoints.size(); ++j) {
        const int b = GridModel::bus_of_node(grid_.ders[j].node_index);
        const Complex s = Complex{setpoints[j].p_kw, setpoints[j].q_kvar} / kva_per_pu;
        i_injected[b] += std::conj(s / v[b]);
    }

    const std::size_t n_lines = lines_.size();
    out.line_loading_pct.assign(n_lines, 0.0);
    out.line_current_ka.assign(n_lines, 0.0);
    Complex s_loss{};
    Complex downstream{};  // current drawn by the next line's from end
    for (std::size_t k = n_lines; k-- > 0;) {
        const auto& line = grid_.lines[k];
        const auto& br = lines_[k];
        const Complex v_f = v[line.from_bus];
        const Complex v_t = v[line.to_bus];
        const Complex i_to = downstream - i_injected[line.to_bus];  // arriving at to bus
        const Complex i_series = i_to + v_t * br.shunt_half;
        const Complex i_from = i_series + v_f * br.shunt_half;  // entering at from bus
        s_loss += v_f * std::conj(i_from) - v_t * std::conj(i_to);

        const double vn = grid_.buses[line.to_bus].vn_kv;
        const double i_base_ka = s_base_mva_ / (std::sqrt(3.0) * vn);
        const double i_max = std::max(std::abs(i_from), std::abs(i_to)) * i_base_ka;
        out.line_current_ka[k] = i_max;
        out.line_loading_pct[k] = i_max / line.params.i_max_ka * 100.0;
        downstream = i_from;
    }

    const Complex v_hv = v[GridModel::slack_bus];
    const Complex v_lv = v[GridModel::lv_bus];
    const Complex i_lv = downstream - i_injected[GridModel::lv_bus];
    const Complex v_mid = v_lv + i_lv * trafo_.z_half;
    const Complex i_hv = i_lv + v_mid * trafo_.y_mag;
    const Complex s_hv = v_hv * std::conj(i_hv);
    const Complex s_lv = v_lv * std::conj(i_lv);
    s_loss += s_hv - s_lv;
    out.trafo_loading_pct =
        std::max(std::abs(s_hv), std::abs(s_lv)) * s_base_mva_ / grid_.transformer.s_rated_mva * 100.0;

    out.p_loss_kw = -s_loss.real() * kva_per_pu;
    out.q_loss_kvar = -s_loss.imag() * kva_per_pu;
}

PowerFlowResult solve(const GridModel& grid, const ControlScenario& scenario) {
    return PowerFlowSolver(grid).solve(scenario);
}

AggregateLimits aggregate_limits(const GridModel& grid) {
    double p = 0.0;
    double s = 0.0;
    for (const auto& der : grid.ders) {
        p += der.p_inst_kw;
        s += der.s_max_kva;
    }
    return {{-p, p}, {-s, s}};
}

}  // namespace flexagg
