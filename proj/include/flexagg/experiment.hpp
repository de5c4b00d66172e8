#pragma once

// End-to-end study: build each feeder, sample setpoints, solve, classify
// and summarize. Output is a pure function of the configuration; the
// worker count only changes wall time.

#include "flexagg/classify.hpp"
#include "flexagg/grid_model.hpp"
#include "flexagg/powerflow.hpp"
#include "flexagg/sampling.hpp"
#include "flexagg/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace flexagg {

struct ExperimentConfig {
    std::vector<FeederSpec> feeders = canonical_feeder_specs();
    SamplerConfig sampler;
    int workers = 0;  // <= 0: one per hardware thread
    std::filesystem::path output_dir = "out";
    int histogram_bins = 50;
    ClassifyOptions classify;
    SolverOptions solver;

    void validate() const;
};

struct UnclassifiedSample {
    ControlScenario scenario;
    SolveStatus status = SolveStatus::non_convergence;
};

struct ClassCounts {
    std::size_t grid[4] = {0, 0, 0, 0};  // indexed by GridClass
    std::size_t full[4] = {0, 0, 0, 0};  // indexed by FullClass
    std::size_t inverter_ok = 0;         // over all scenarios, solved or not
};

struct FeederResult {
    GridModel grid;
    std::vector<SampleRecord> records;  // converged samples, ascending scenario_id
    std::vector<UnclassifiedSample> unclassified;
    std::size_t sample_size = 0;

    BatesParams predicted;
    EmpiricalDensity density;      // raw P_IPF
    double p_ipf_mean_kw = 0.0;
    double p_ipf_std_kw = 0.0;
    double ks_statistic = 1.0;     // mean-shifted P_IPF against `predicted`
    ClassCounts counts;
    double coverage_grid = 0.0;    // hull(grid-feasible IPFs) / aggregate box
    double coverage_full = 0.0;    // hull(fully feasible IPFs) / aggregate box

    double grid_feasible_fraction() const;
    double full_feasible_fraction() const;
    double inverter_ok_fraction() const;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<FeederResult> feeders;

    /// Index of the feeder with the given node count; throws when absent.
    std::size_t index_of(int n_nodes) const;
};

/// Runs one feeder. Throws on invalid input; per-sample solver failures are
/// collected into `unclassified`.
FeederResult run_feeder(const FeederSpec& spec, const ExperimentConfig& config);

/// Computes every feeder without touching the filesystem.
ExperimentResult run_study(const ExperimentConfig& config);

/// output_dir/feeder_N<k>/{samples.csv, density.csv, summary.txt} and the
/// figure set fig2_N<k>.svg, fig3_N<k>.svg, fig4.svg. Throws IoError.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& output_dir);

/// run_study followed by write_artifacts into config.output_dir.
ExperimentResult run(const ExperimentConfig& config);

std::string samples_csv(const FeederResult& feeder);
std::string density_csv(const FeederResult& feeder);
std::string summary_text(const FeederResult& feeder);

/// Rebuilds the plot-relevant part of a result from a previous run's CSVs.
ExperimentResult load_artifacts(const ExperimentConfig& config, const std::filesystem::path& dir);

std::filesystem::path feeder_dir(const std::filesystem::path& root, int n_nodes);

}  // namespace flexagg
