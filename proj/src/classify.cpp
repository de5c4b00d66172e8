#include "flexagg/classify.hpp"

#include "flexagg/error.hpp"

#include <cmath>

namespace flexagg {

const char* to_string(GridClass c) noexcept {
    switch (c) {
    case GridClass::feasible: return "feasible";
    case GridClass::voltage_only: return "voltage_only";
    case GridClass::overload_only: return "overload_only";
    case GridClass::both: return "both";
    }
    return "unknown";
}

const char* to_string(FullClass c) noexcept {
    switch (c) {
    case FullClass::feasible: return "feasible";
    case FullClass::grid_only: return "grid_only";
    case FullClass::inverter_only: return "inverter_only";
    case FullClass::both: return "both";
    }
    return "unknown";
}

GridClass parse_grid_class(const std::string& token) {
    for (auto c : all_grid_classes)
        if (token == to_string(c)) return c;
    throw InvalidArgument("unknown grid class '" + token + "'");
}

FullClass parse_full_class(const std::string& token) {
    for (auto c : all_full_classes)
        if (token == to_string(c)) return c;
    throw InvalidArgument("unknown full class '" + token + "'");
}

GridClass FeasibilityLabel::grid_class() const noexcept {
    if (volt_ok && line_ok) return GridClass::feasible;
    if (line_ok) return GridClass::voltage_only;
    if (volt_ok) return GridClass::overload_only;
    return GridClass::both;
}

FullClass FeasibilityLabel::full_class() const noexcept {
    const bool grid_ok = volt_ok && line_ok;
    if (grid_ok && inverter_ok) return FullClass::feasible;
    if (inverter_ok) return FullClass::grid_only;
    if (grid_ok) return FullClass::inverter_only;
    return FullClass::both;
}

GridCheck check_grid(const PowerFlowResult& result, Interval band, ClassifyOptions options) {
    if (!result.converged()) throw InvalidArgument("cannot classify a non-converged power flow");
    GridCheck out{true, true};
    for (std::size_t b = GridModel::lv_bus; b < result.v_mag_pu.size(); ++b)
        if (!band.contains(result.v_mag_pu[b])) out.volt_ok = false;
    for (double loading : result.line_loading_pct)
        if (loading > 100.0) out.line_ok = false;
    if (options.trafo_loading_is_constraint && result.trafo_loading_pct > 100.0) out.line_ok = false;
    return out;
}

bool check_inverters(std::span<const Setpoint> setpoints, std::span<const DerUnit> ders) {
    if (setpoints.size() != ders.size())
        throw InvalidArgument("setpoint count does not match DER count");
    for (std::size_t j = 0; j < ders.size(); ++j) {
        const auto& sp = setpoints[j];
        const double s = ders[j].s_max_kva;
        if (sp.p_kw * sp.p_kw + sp.q_kvar * sp.q_kvar > s * s) return false;
    }
    return true;
}

FeasibilityLabel classify(const ControlScenario& scenario, const PowerFlowResult& result,
                          const GridModel& grid, ClassifyOptions options) {
    const auto g = check_grid(result, grid.spec.voltage_band, options);
    return {g.volt_ok, g.line_ok, check_inverters(scenario.setpoints, grid.ders)};
}

double feasibility_collapse_estimate(double per_inverter_violation, int n) {
    if (!(per_inverter_violation >= 0.0 && per_inverter_violation <= 1.0))
        throw InvalidArgument("violation fraction must lie in [0, 1]");
    if (n < 1) throw InvalidArgument("inverter count must be >= 1");
    return std::pow(1.0 - per_inverter_violation, n);
}

}  // namespace flexagg
