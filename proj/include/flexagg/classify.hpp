#pragma once

// Feasibility labels for solved samples.
//
// Grid scheme: voltage band and line loading only.
// Full scheme: grid constraints plus every inverter circle.
// All bounds are closed.

#include "flexagg/grid_model.hpp"
#include "flexagg/powerflow.hpp"

#include <span>
#include <string>
#include <vector>

namespace flexagg {

enum class GridClass { feasible, voltage_only, overload_only, both };
enum class FullClass { feasible, grid_only, inverter_only, both };

const char* to_string(GridClass c) noexcept;
const char* to_string(FullClass c) noexcept;
GridClass parse_grid_class(const std::string& token);
FullClass parse_full_class(const std::string& token);

inline constexpr GridClass all_grid_classes[] = {GridClass::feasible, GridClass::voltage_only,
                                                 GridClass::overload_only, GridClass::both};
inline constexpr FullClass all_full_classes[] = {FullClass::feasible, FullClass::grid_only,
                                                 FullClass::inverter_only, FullClass::both};

struct FeasibilityLabel {
    bool volt_ok = false;
    bool line_ok = false;
    bool inverter_ok = false;

    GridClass grid_class() const noexcept;
    FullClass full_class() const noexcept;

    friend bool operator==(const FeasibilityLabel&, const FeasibilityLabel&) = default;
};

struct ClassifyOptions {
    /// Off by default: only line loading counts as overload.
    bool trafo_loading_is_constraint = false;
};

struct GridCheck {
    bool volt_ok = false;
    bool line_ok = false;
};

/// Voltage check covers every LV bus (index >= 1); the MV slack is exempt.
/// Throws InvalidArgument for a non-converged result.
GridCheck check_grid(const PowerFlowResult& result, Interval band, ClassifyOptions options = {});

/// Throws InvalidArgument when the lengths differ.
bool check_inverters(std::span<const Setpoint> setpoints, std::span<const DerUnit> ders);

FeasibilityLabel classify(const ControlScenario& scenario, const PowerFlowResult& result,
                          const GridModel& grid, ClassifyOptions options = {});

/// Probability that n independent inverters all pass when each one
/// violates with the given probability: (1 - fraction)^n.
double feasibility_collapse_estimate(double per_inverter_violation, int n);

struct SampleRecord {
    ControlScenario scenario;
    PowerFlowResult result;
    FeasibilityLabel label;
};

}  // namespace flexagg
