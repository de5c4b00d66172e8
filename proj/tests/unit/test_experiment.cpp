#include <catch_amalgamated.hpp>

#include "flexagg/csv.hpp"
#include "flexagg/error.hpp"
#include "flexagg/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace flexagg;
using Catch::Approx;

namespace {

ExperimentConfig small_config(int samples, int workers) {
    ExperimentConfig cfg;
    cfg.feeders = {canonical_feeder_spec(1), canonical_feeder_spec(3), canonical_feeder_spec(9)};
    cfg.sampler.sample_size = samples;
    cfg.workers = workers;
    cfg.histogram_bins = 20;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("flexagg_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("record accounting and class counts", "[experiment]") {
    const auto result = run_study(small_config(300, 1));
    REQUIRE(result.feeders.size() == 3);
    for (const auto& f : result.feeders) {
        CHECK(f.sample_size == 300);
        CHECK(f.records.size() + f.unclassified.size() == 300);
        std::size_t grid_total = 0, full_total = 0;
        for (auto n : f.counts.grid) grid_total += n;
        for (auto n : f.counts.full) full_total += n;
        CHECK(grid_total == f.records.size());
        CHECK(full_total == f.records.size());
        CHECK(f.counts.full[0] <= f.counts.grid[0]);
        for (std::size_t i = 1; i < f.records.size(); ++i)
            CHECK(f.records[i - 1].scenario.scenario_id < f.records[i].scenario.scenario_id);
        CHECK(f.predicted.n == f.grid.n_nodes());
        CHECK(f.density.bins() == 20);
        CHECK(f.coverage_grid >= 0.0);
        CHECK(f.coverage_grid <= 1.0);
        CHECK(f.coverage_full <= f.coverage_grid + 1e-12);
        CHECK(f.ks_statistic < 0.2);
    }
    CHECK(result.index_of(9) == 2);
    CHECK_THROWS_AS(result.index_of(27), InvalidArgument);
}

TEST_CASE("study output does not depend on the worker count", "[experiment]") {
    const auto a = run_study(small_config(200, 1));
    const auto b = run_study(small_config(200, 3));
    for (std::size_t i = 0; i < a.feeders.size(); ++i) {
        CHECK(samples_csv(a.feeders[i]) == samples_csv(b.feeders[i]));
        CHECK(density_csv(a.feeders[i]) == density_csv(b.feeders[i]));
        CHECK(summary_text(a.feeders[i]) == summary_text(b.feeders[i]));
    }
}

TEST_CASE("artifacts are written and reload for plotting", "[experiment]") {
    auto cfg = small_config(120, 2);
    cfg.output_dir = scratch_dir("artifacts");
    const auto result = run(cfg);
    for (int n : {1, 3, 9}) {
        const auto dir = feeder_dir(cfg.output_dir, n);
        CHECK(std::filesystem::exists(dir / "samples.csv"));
        CHECK(std::filesystem::exists(dir / "density.csv"));
        CHECK(std::filesystem::exists(dir / "summary.txt"));
        CHECK(std::filesystem::exists(cfg.output_dir / ("fig2_N" + std::to_string(n) + ".svg")));
        CHECK(std::filesystem::exists(cfg.output_dir / ("fig3_N" + std::to_string(n) + ".svg")));
    }
    CHECK(std::filesystem::exists(cfg.output_dir / "fig4.svg"));

    const auto table = csv::read_file(feeder_dir(cfg.output_dir, 3) / "samples.csv");
    CHECK(table.header == std::vector<std::string>{"scenario_id", "p_ipf_kw", "q_ipf_kvar", "min_v_pu",
                                                  "max_v_pu", "max_line_loading_pct", "volt_ok",
                                                  "line_ok", "inverter_ok", "grid_class", "full_class"});
    CHECK(table.rows.size() == result.feeders[1].records.size());

    const auto reloaded = load_artifacts(cfg, cfg.output_dir);
    REQUIRE(reloaded.feeders.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& orig = result.feeders[i];
        const auto& back = reloaded.feeders[i];
        REQUIRE(back.records.size() == orig.records.size());
        for (std::size_t k = 0; k < orig.records.size(); ++k) {
            CHECK(back.records[k].label == orig.records[k].label);
            CHECK(back.records[k].result.p_ipf_kw == Approx(orig.records[k].result.p_ipf_kw).epsilon(1e-5));
        }
        CHECK(back.density.bins() == orig.density.bins());
    }
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("identical configurations write identical files", "[experiment]") {
    auto cfg = small_config(80, 1);
    cfg.output_dir = scratch_dir("det_a");
    run(cfg);
    auto cfg2 = small_config(80, 4);
    cfg2.output_dir = scratch_dir("det_b");
    run(cfg2);
    for (const auto& entry : std::filesystem::recursive_directory_iterator(cfg.output_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(entry.path(), cfg.output_dir);
        INFO(rel.string());
        CHECK(slurp(entry.path()) == slurp(cfg2.output_dir / rel));
    }
    std::filesystem::remove_all(cfg.output_dir);
    std::filesystem::remove_all(cfg2.output_dir);
}

TEST_CASE("non-converging samples are reported separately", "[experiment]") {
    auto cfg = small_config(50, 1);
    cfg.feeders = {canonical_feeder_spec(3)};
    cfg.solver.max_iterations = 1;
    const auto result = run_study(cfg);
    const auto& f = result.feeders[0];
    CHECK(f.records.empty());
    CHECK(f.unclassified.size() == 50);
    CHECK(summary_text(f).find("unclassified: 50") != std::string::npos);
}

TEST_CASE("invalid experiment configuration", "[experiment]") {
    ExperimentConfig cfg;
    cfg.feeders.clear();
    CHECK_THROWS_AS(run_study(cfg), InvalidArgument);
    cfg = small_config(10, 1);
    cfg.histogram_bins = 0;
    CHECK_THROWS_AS(run_study(cfg), InvalidArgument);
    cfg = small_config(10, 1);
    CHECK_THROWS_AS(load_artifacts(cfg, "/nonexistent/flexagg"), IoError);
}
