// Command-line front end: describe, sample, run, solve-one, plot.

#include "flexagg/config.hpp"
#include "flexagg/csv.hpp"
#include "flexagg/error.hpp"
#include "flexagg/experiment.hpp"
#include "flexagg/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace flexagg;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::string workers;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_sampling, bool with_out) {
    cmd->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    if (with_sampling) {
        cmd->add_option("--seed", o.seed, "Sampler seed (u64)");
        cmd->add_option("--samples", o.samples, "Samples per feeder")->check(CLI::PositiveNumber);
        cmd->add_option("--workers", o.workers, "Worker threads: <n> or auto");
    }
    if (with_out) cmd->add_option("--out", o.out_dir, "Output directory");
}

ExperimentConfig resolve_config(const CommonOptions& o) {
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (o.seed) cfg.sampler.seed = *o.seed;
    if (o.samples) cfg.sampler.sample_size = *o.samples;
    if (!o.workers.empty()) {
        if (o.workers == "auto") {
            cfg.workers = 0;
        } else {
            try {
                std::size_t used = 0;
                cfg.workers = std::stoi(o.workers, &used);
                if (used != o.workers.size() || cfg.workers < 1) throw std::invalid_argument("workers");
            } catch (const std::exception&) {
                throw InvalidArgument("--workers expects a positive integer or 'auto'");
            }
        }
    }
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    cfg.validate();
    return cfg;
}

// Without --nodes the feeder is the one whose DER count matches the
// setpoint list; without a configuration file any node count is accepted.
FeederSpec select_feeder(const ExperimentConfig& cfg, bool from_file, std::optional<int> nodes,
                         std::size_t n_setpoints) {
    const int n = nodes ? *nodes : static_cast<int>(n_setpoints);
    for (const auto& f : cfg.feeders)
        if (f.n_nodes == n) return f;
    if (!from_file && n >= 1) return canonical_feeder_spec(n);
    throw InvalidArgument("no feeder with " + std::to_string(n) + " nodes in the configuration");
}

std::vector<Setpoint> parse_setpoints(const std::string& text) {
    const auto fields = csv::split_record(text);
    if (fields.size() % 2 != 0)
        throw InvalidArgument("setpoints must be comma-separated kW,kvar pairs");
    std::vector<Setpoint> out;
    for (std::size_t i = 0; i < fields.size(); i += 2)
        out.push_back({csv::parse_double(fields[i]), csv::parse_double(fields[i + 1])});
    return out;
}

int cmd_describe(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    std::vector<FeederTableRow> rows;
    for (const auto& f : cfg.feeders) rows.push_back(describe(f));
    std::cout << format_feeder_table(rows);
    return 0;
}

int cmd_sample(const CommonOptions& o, const std::string& strategy) {
    auto cfg = resolve_config(o);
    if (!strategy.empty()) cfg.sampler.strategy = parse_sampling_strategy(strategy);
    cfg.sampler.workers = cfg.workers;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError(cfg.output_dir.string(), ec.message());
    for (const auto& spec : cfg.feeders) {
        const auto grid = build_grid(spec);
        const auto scenarios = sample(grid, cfg.sampler);
        std::ostringstream os;
        write_scenarios_csv(os, scenarios, grid.n_nodes());
        const auto path = cfg.output_dir / ("scenarios_N" + std::to_string(spec.n_nodes) + ".csv");
        csv::write_text_file(path, os.str());
        std::cout << "wrote " << path.string() << " (" << scenarios.size() << " scenarios)\n";
    }
    return 0;
}

int cmd_run(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = run(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%6s %10s %12s %10s %10s %10s %10s %10s\n", "N", "classified", "unclassified", "KS",
                "std_kW", "grid_feas", "full_feas", "coverage");
    for (const auto& f : result.feeders)
        std::printf("%6d %10zu %12zu %10.4f %10.3f %10.4f %10.4f %10.4f\n", f.grid.n_nodes(),
                    f.records.size(), f.unclassified.size(), f.ks_statistic, f.p_ipf_std_kw,
                    f.grid_feasible_fraction(), f.full_feasible_fraction(), f.coverage_grid);
    std::printf("artifacts in %s (%.2f s)\n", cfg.output_dir.string().c_str(), secs);
    return 0;
}

int cmd_solve_one(const CommonOptions& o, std::optional<int> nodes, const std::string& setpoints) {
    const auto cfg = resolve_config(o);
    ControlScenario sc;
    sc.setpoints = parse_setpoints(setpoints);
    const auto grid = build_grid(select_feeder(cfg, !o.config_path.empty(), nodes, sc.setpoints.size()));
    const PowerFlowSolver solver(grid, cfg.solver);
    const auto r = solver.solve(sc);

    std::printf("status        %s\n", to_string(r.status));
    std::printf("iterations    %d\n", r.iterations);
    std::printf("mismatch_pu   %.3e\n", r.max_mismatch_pu);
    if (r.converged()) {
        const auto label = classify(sc, r, grid, cfg.classify);
        std::printf("p_ipf_kw      %.6f\n", r.p_ipf_kw);
        std::printf("q_ipf_kvar    %.6f\n", r.q_ipf_kvar);
        std::printf("p_loss_kw     %.6f\n", r.p_loss_kw);
        std::printf("q_loss_kvar   %.6f\n", r.q_loss_kvar);
        std::printf("trafo_loading %.3f %%\n", r.trafo_loading_pct);
        std::printf("%5s %12s %12s\n", "bus", "v_mag_pu", "v_ang_deg");
        for (std::size_t b = 0; b < r.v_mag_pu.size(); ++b)
            std::printf("%5zu %12.6f %12.6f\n", b, r.v_mag_pu[b], r.v_ang_rad[b] * 180.0 / 3.14159265358979323846);
        std::printf("%5s %12s %12s\n", "line", "current_ka", "loading_pct");
        for (std::size_t k = 0; k < r.line_loading_pct.size(); ++k)
            std::printf("%5zu %12.6f %12.3f\n", k + 1, r.line_current_ka[k], r.line_loading_pct[k]);
        std::printf("classes       grid=%s full=%s\n", to_string(label.grid_class()), to_string(label.full_class()));
    }

    nlohmann::ordered_json j;
    j["status"] = to_string(r.status);
    j["iterations"] = r.iterations;
    if (r.converged()) {
        const auto label = classify(sc, r, grid, cfg.classify);
        j["p_ipf_kw"] = r.p_ipf_kw;
        j["q_ipf_kvar"] = r.q_ipf_kvar;
        j["p_loss_kw"] = r.p_loss_kw;
        j["q_loss_kvar"] = r.q_loss_kvar;
        j["v_mag_pu"] = r.v_mag_pu;
        j["v_ang_rad"] = r.v_ang_rad;
        j["line_loading_pct"] = r.line_loading_pct;
        j["trafo_loading_pct"] = r.trafo_loading_pct;
        j["volt_ok"] = label.volt_ok;
        j["line_ok"] = label.line_ok;
        j["inverter_ok"] = label.inverter_ok;
        j["grid_class"] = to_string(label.grid_class());
        j["full_class"] = to_string(label.full_class());
    }
    std::cout << j.dump() << '\n';
    return r.converged() ? 0 : 3;
}

int cmd_plot(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto result = load_artifacts(cfg, cfg.output_dir);
    for (std::size_t i = 0; i < result.feeders.size(); ++i) {
        const std::string tag = "_N" + std::to_string(result.feeders[i].grid.n_nodes()) + ".svg";
        csv::write_text_file(cfg.output_dir / ("fig2" + tag),
                             render(result, make_plot_spec(result, PlotKind::scatter_grid, i)));
        csv::write_text_file(cfg.output_dir / ("fig3" + tag),
                             render(result, make_plot_spec(result, PlotKind::scatter_full, i)));
    }
    csv::write_text_file(cfg.output_dir / "fig4.svg",
                         render(result, make_plot_spec(result, PlotKind::density, std::nullopt)));
    std::cout << "rendered figures into " << cfg.output_dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo flexibility aggregation on synthetic LV feeders"};
    app.require_subcommand(1);

    CommonOptions describe_opts, sample_opts, run_opts, solve_opts, plot_opts;
    auto* describe_cmd = app.add_subcommand("describe", "Print the feeder configuration table");
    add_common(describe_cmd, describe_opts, false, false);

    std::string strategy;
    auto* sample_cmd = app.add_subcommand("sample", "Write DER setpoint scenarios as CSV");
    add_common(sample_cmd, sample_opts, true, true);
    sample_cmd->add_option("--strategy", strategy, "naive or successive");

    auto* run_cmd = app.add_subcommand("run", "Run the full study and write all artifacts");
    add_common(run_cmd, run_opts, true, true);

    std::optional<int> nodes;
    std::string setpoints;
    auto* solve_cmd = app.add_subcommand("solve-one", "Solve one scenario given as kW,kvar pairs");
    add_common(solve_cmd, solve_opts, false, false);
    solve_cmd->add_option("--nodes", nodes, "Feeder node count (default: number of setpoint pairs)");
    solve_cmd->add_option("setpoints", setpoints, "p1,q1,p2,q2,... in kW/kvar")->required();

    auto* plot_cmd = app.add_subcommand("plot", "Re-render figures from a previous run directory");
    add_common(plot_cmd, plot_opts, false, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*describe_cmd) return cmd_describe(describe_opts);
        if (*sample_cmd) return cmd_sample(sample_opts, strategy);
        if (*run_cmd) return cmd_run(run_opts);
        if (*solve_cmd) return cmd_solve_one(solve_opts, nodes, setpoints);
        if (*plot_cmd) return cmd_plot(plot_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
