#include "flexagg/sampling.hpp"

#include "flexagg/csv.hpp"
#include "flexagg/error.hpp"
#include "flexagg/parallel.hpp"
#include "flexagg/rng.hpp"

#include <ostream>

namespace flexagg {

namespace {

StreamKey key(std::uint64_t seed, std::int64_t scenario, std::size_t der, Axis axis) {
    return {seed, static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(der), axis};
}

template <typename Draw>
std::vector<ControlScenario> generate(const SamplerConfig& cfg, Draw&& draw) {
    cfg.validate();
    std::vector<ControlScenario> out(static_cast<std::size_t>(cfg.sample_size));
    parallel_for(out.size(), cfg.workers,
                 [&](std::size_t i) { out[i] = draw(static_cast<std::int64_t>(i)); });
    return out;
}

}  // namespace

const char* to_string(SamplingStrategy s) noexcept {
    return s == SamplingStrategy::naive ? "naive" : "successive";
}

SamplingStrategy parse_sampling_strategy(const std::string& name) {
    if (name == "naive") return SamplingStrategy::naive;
    if (name == "successive") return SamplingStrategy::successive;
    throw InvalidArgument("unknown sampling strategy '" + name + "' (expected naive|successive)");
}

void SamplerConfig::validate() const {
    if (sample_size < 1) throw InvalidArgument("sample_size must be >= 1");
    if (max_redraws < 1) throw InvalidArgument("max_redraws must be >= 1");
}

ControlScenario draw_naive(const GridModel& grid, std::uint64_t seed, std::int64_t scenario_id) {
    ControlScenario sc;
    sc.scenario_id = scenario_id;
    sc.setpoints.reserve(grid.ders.size());
    for (std::size_t j = 0; j < grid.ders.size(); ++j) {
        const auto& der = grid.ders[j];
        const CounterRng p_rng(key(seed, scenario_id, j, Axis::p));
        const CounterRng q_rng(key(seed, scenario_id, j, Axis::q));
        sc.setpoints.push_back({p_rng.uniform(der.p_range_kw.lo, der.p_range_kw.hi, 0),
                                q_rng.uniform(der.q_range_kvar.lo, der.q_range_kvar.hi, 0)});
    }
    return sc;
}

ControlScenario draw_successive(const GridModel& grid, std::uint64_t seed,
                                std::int64_t scenario_id, int max_redraws, std::uint64_t* redraws) {
    ControlScenario sc;
    sc.scenario_id = scenario_id;
    sc.setpoints.reserve(grid.ders.size());
    for (std::size_t j = 0; j < grid.ders.size(); ++j) {
        const auto& der = grid.ders[j];
        const CounterRng p_rng(key(seed, scenario_id, j, Axis::p));
        const CounterRng q_rng(key(seed, scenario_id, j, Axis::q));
        const double s2 = der.s_max_kva * der.s_max_kva;
        bool accepted = false;
        // Draw 0 is the naive draw; redraws use the following counters.
        for (std::uint64_t draw = 0; draw <= static_cast<std::uint64_t>(max_redraws); ++draw) {
            const double p = p_rng.uniform(der.p_range_kw.lo, der.p_range_kw.hi, draw);
            const double q = q_rng.uniform(der.q_range_kvar.lo, der.q_range_kvar.hi, draw);
            if (p * p + q * q <= s2) {
                sc.setpoints.push_back({p, q});
                if (redraws) *redraws += draw;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw RejectionBudgetExceeded("DER " + std::to_string(j + 1) + " of scenario " +
                                          std::to_string(scenario_id) + " found no setpoint inside its "
                                          "inverter circle after " + std::to_string(max_redraws) +
                                          " redraws");
    }
    return sc;
}

std::vector<ControlScenario> sample_naive(const GridModel& grid, const SamplerConfig& cfg) {
    return generate(cfg, [&](std::int64_t i) { return draw_naive(grid, cfg.seed, i); });
}

std::vector<ControlScenario> sample_successive(const GridModel& grid, const SamplerConfig& cfg) {
    return generate(cfg,
                    [&](std::int64_t i) { return draw_successive(grid, cfg.seed, i, cfg.max_redraws); });
}

std::vector<ControlScenario> sample(const GridModel& grid, const SamplerConfig& cfg) {
    return cfg.strategy == SamplingStrategy::naive ? sample_naive(grid, cfg)
                                                   : sample_successive(grid, cfg);
}

void write_scenarios_csv(std::ostream& os, const std::vector<ControlScenario>& scenarios,
                         int n_ders) {
    os << "scenario_id";
    for (int j = 1; j <= n_ders; ++j) os << ",der" << j << "_p_kw,der" << j << "_q_kvar";
    os << '\n';
    for (const auto& sc : scenarios) {
        if (static_cast<int>(sc.setpoints.size()) != n_ders)
            throw InvalidArgument("scenario " + std::to_string(sc.scenario_id) + " has wrong DER count");
        os << sc.scenario_id;
        for (const auto& sp : sc.setpoints)
            os << ',' << csv::format_number(sp.p_kw) << ',' << csv::format_number(sp.q_kvar);
        os << '\n';
    }
}

}  // namespace flexagg
