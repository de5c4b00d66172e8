#pragma once

// Balanced AC power flow for a radial feeder.
//
// Full Newton-Raphson in polar coordinates on the bus admittance matrix.
// Per-unit system: S_base = transformer rating, V_base = bus nominal voltage.
// Lines are pi equivalents; the transformer is a T equivalent (series
// impedance split evenly, magnetizing branch in the middle). Branches with
// zero series impedance collapse their terminal buses into one electrical
// node.
//
// Sign convention: DER injections are generator-positive; p_ipf/q_ipf are
// the power leaving the feeder into the upstream MV grid; p_loss/q_loss are
// the (negative) network consumption, so that
//     p_ipf = sum(p_der) + p_loss.

#include "flexagg/grid_model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flexagg {

struct Setpoint {
    double p_kw = 0.0;
    double q_kvar = 0.0;
};

struct ControlScenario {
    std::int64_t scenario_id = 0;
    std::vector<Setpoint> setpoints;  // one per DER, DER order
};

enum class SolveStatus { converged, non_convergence, singular_jacobian };

const char* to_string(SolveStatus status) noexcept;

struct PowerFlowResult {
    SolveStatus status = SolveStatus::non_convergence;
    int iterations = 0;
    double max_mismatch_pu = 0.0;
    std::vector<double> v_mag_pu;    // per bus
    std::vector<double> v_ang_rad;   // per bus
    std::vector<double> line_loading_pct;  // per line, max of both ends
    std::vector<double> line_current_ka;   // per line, max of both ends
    double trafo_loading_pct = 0.0;
    double p_ipf_kw = 0.0;
    double q_ipf_kvar = 0.0;
    double p_loss_kw = 0.0;
    double q_loss_kvar = 0.0;

    bool converged() const noexcept { return status == SolveStatus::converged; }
};

struct SolverOptions {
    double tolerance_pu = 1e-10;
    int max_iterations = 30;
    /// Reciprocal condition estimate below which the Jacobian is declared singular.
    double min_rcond = 1e-14;
};

/// Precomputed network admittances for one grid. Immutable after
/// construction; solve() is const and may be called concurrently.
class PowerFlowSolver {
public:
    explicit PowerFlowSolver(const GridModel& grid, SolverOptions options = {});

    /// Throws InvalidArgument when the scenario length does not match the
    /// DER count. Numerical failures are reported through the result status.
    PowerFlowResult solve(const ControlScenario& scenario) const;

    PowerFlowResult solve(std::span<const Setpoint> setpoints) const;

    const GridModel& grid() const noexcept { return grid_; }
    double s_base_mva() const noexcept { return s_base_mva_; }

private:
    using Complex = std::complex<double>;

    struct LineBranch {
        Complex series_y;   // 0 when merged
        Complex shunt_half; // per end
        bool zero_impedance = false;
    };

    struct TrafoBranch {
        Complex z_half;     // each leg of the T
        Complex y_mag;
        bool zero_impedance = false;
    };

    void compute_branch_flows(const std::vector<Complex>& v, std::span<const Setpoint> setpoints,
                              PowerFlowResult& out) const;

    GridModel grid_;
    SolverOptions options_;
    double s_base_mva_ = 0.0;
    std::vector<LineBranch> lines_;
    TrafoBranch trafo_;

    // Electrical nodes after merging zero-impedance branches.
    std::vector<int> node_of_bus_;
    int n_nodes_ = 0;
    int slack_node_ = 0;
    std::vector<int> pq_nodes_;            // non-slack nodes, ordered
    std::vector<int> pq_index_of_node_;    // -1 for slack
    Eigen::MatrixXcd ybus_;
};

/// Convenience wrapper that builds the solver for a single call.
PowerFlowResult solve(const GridModel& grid, const ControlScenario& scenario);

struct AggregateLimits {
    Interval p_kw;
    Interval q_kvar;
};

/// Box spanned by the summed DER ranges (no grid or inverter constraints).
AggregateLimits aggregate_limits(const GridModel& grid);

}  // namespace flexagg
