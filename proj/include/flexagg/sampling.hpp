#pragma once

#include "flexagg/grid_model.hpp"
#include "flexagg/powerflow.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace flexagg {

enum class SamplingStrategy { naive, successive };

const char* to_string(SamplingStrategy s) noexcept;
SamplingStrategy parse_sampling_strategy(const std::string& name);

struct SamplerConfig {
    int sample_size = 2500;
    std::uint64_t seed = 20210611;
    SamplingStrategy strategy = SamplingStrategy::naive;
    /// Redraw cap per DER for the successive strategy.
    int max_redraws = 10000;
    /// 0 or 1 runs serially; the output does not depend on this value.
    int workers = 1;

    void validate() const;
};

/// Independent uniform draws from each DER's P and Q box ranges.
ControlScenario draw_naive(const GridModel& grid, std::uint64_t seed, std::int64_t scenario_id);

/// Per-DER joint rejection against the inverter circle p^2 + q^2 <= s_max^2.
/// Throws RejectionBudgetExceeded when a DER exhausts max_redraws. When
/// `redraws` is given it receives the number of rejected pairs.
ControlScenario draw_successive(const GridModel& grid, std::uint64_t seed,
                                std::int64_t scenario_id, int max_redraws = 10000,
                                std::uint64_t* redraws = nullptr);

std::vector<ControlScenario> sample_naive(const GridModel& grid, const SamplerConfig& cfg);
std::vector<ControlScenario> sample_successive(const GridModel& grid, const SamplerConfig& cfg);

/// Dispatches on cfg.strategy.
std::vector<ControlScenario> sample(const GridModel& grid, const SamplerConfig& cfg);

/// Wide CSV: scenario_id, der<j>_p_kw, der<j>_q_kvar for j = 1..N.
void write_scenarios_csv(std::ostream& os, const std::vector<ControlScenario>& scenarios,
                         int n_ders);

}  // namespace flexagg
