#include "flexagg/experiment.hpp"

#include "flexagg/csv.hpp"
#include "flexagg/error.hpp"
#include "flexagg/geometry.hpp"
#include "flexagg/parallel.hpp"
#include "flexagg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace flexagg {

namespace {

double fraction(std::size_t count, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

std::string fmt_full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <typename Pred>
double coverage(const FeederResult& f, Pred feasible) {
    std::vector<Point2> pts;
    for (const auto& rec : f.records)
        if (feasible(rec.label)) pts.push_back({rec.result.p_ipf_kw, rec.result.q_ipf_kvar});
    const auto limits = aggregate_limits(f.grid);
    return convex_hull_area(pts) / (limits.p_kw.width() * limits.q_kvar.width());
}

void finish_statistics(FeederResult& out, int bins) {
    out.counts = {};
    for (const auto& rec : out.records) {
        ++out.counts.grid[static_cast<int>(rec.label.grid_class())];
        ++out.counts.full[static_cast<int>(rec.label.full_class())];
        if (rec.label.inverter_ok) ++out.counts.inverter_ok;
    }
    for (const auto& u : out.unclassified)
        if (check_inverters(u.scenario.setpoints, out.grid.ders)) ++out.counts.inverter_ok;

    out.predicted = predicted_ipf_distribution(out.grid);
    std::vector<double> p;
    p.reserve(out.records.size());
    for (const auto& rec : out.records) p.push_back(rec.result.p_ipf_kw);
    if (p.size() >= 2) {
        out.p_ipf_mean_kw = mean(p);
        out.p_ipf_std_kw = stddev(p);
        // Shift the sample so that its mean matches the loss-free prediction.
        const double shift = out.predicted.mean() - out.p_ipf_mean_kw;
        std::vector<double> shifted(p);
        for (double& v : shifted) v += shift;
        out.ks_statistic = ks_distance(shifted, out.predicted);
        const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
        if (*hi > *lo) out.density = frequency_density(p, bins);
    }
    out.coverage_grid = coverage(out, [](const FeasibilityLabel& l) { return l.volt_ok && l.line_ok; });
    out.coverage_full = coverage(out, [](const FeasibilityLabel& l) {
        return l.full_class() == FullClass::feasible;
    });
}

}  // namespace

void ExperimentConfig::validate() const {
    if (feeders.empty()) throw InvalidArgument("configuration needs at least one feeder");
    for (const auto& f : feeders) f.validate();
    sampler.validate();
    if (histogram_bins < 1) throw InvalidArgument("histogram_bins must be >= 1");
    if (!(solver.tolerance_pu > 0.0) || solver.max_iterations < 1)
        throw InvalidArgument("solver tolerance must be > 0 and max_iterations >= 1");
}

double FeederResult::grid_feasible_fraction() const {
    return fraction(counts.grid[static_cast<int>(GridClass::feasible)], records.size());
}

double FeederResult::full_feasible_fraction() const {
    return fraction(counts.full[static_cast<int>(FullClass::feasible)], records.size());
}

double FeederResult::inverter_ok_fraction() const { return fraction(counts.inverter_ok, sample_size); }

std::size_t ExperimentResult::index_of(int n_nodes) const {
    for (std::size_t i = 0; i < feeders.size(); ++i)
        if (feeders[i].grid.n_nodes() == n_nodes) return i;
    throw InvalidArgument("no feeder with " + std::to_string(n_nodes) + " nodes");
}

FeederResult run_feeder(const FeederSpec& spec, const ExperimentConfig& config) {
    FeederResult out;
    out.grid = build_grid(spec);
    out.sample_size = static_cast<std::size_t>(config.sampler.sample_size);

    SamplerConfig sampler = config.sampler;
    sampler.workers = resolve_workers(config.workers);
    auto scenarios = sample(out.grid, sampler);

    const PowerFlowSolver solver(out.grid, config.solver);
    std::vector<PowerFlowResult> results(scenarios.size());
    parallel_for(scenarios.size(), sampler.workers,
                 [&](std::size_t i) { results[i] = solver.solve(scenarios[i]); });

    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (results[i].converged()) {
            const auto label = classify(scenarios[i], results[i], out.grid, config.classify);
            out.records.push_back({std::move(scenarios[i]), std::move(results[i]), label});
        } else {
            out.unclassified.push_back({std::move(scenarios[i]), results[i].status});
        }
    }
    finish_statistics(out, config.histogram_bins);
    return out;
}

ExperimentResult run_study(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    for (const auto& spec : config.feeders) result.feeders.push_back(run_feeder(spec, config));
    return result;
}

std::filesystem::path feeder_dir(const std::filesystem::path& root, int n_nodes) {
    return root / ("feeder_N" + std::to_string(n_nodes));
}

std::string samples_csv(const FeederResult& feeder) {
    std::ostringstream os;
    os << "scenario_id,p_ipf_kw,q_ipf_kvar,min_v_pu,max_v_pu,max_line_loading_pct,volt_ok,line_ok,"
          "inverter_ok,grid_class,full_class\n";
    for (const auto& rec : feeder.records) {
        const auto& r = rec.result;
        // Voltage extremes over the LV buses, the ones subject to the band.
        double vmin = 0.0, vmax = 0.0;
        if (r.v_mag_pu.size() > 1) {
            const auto [lo, hi] = std::minmax_element(r.v_mag_pu.begin() + 1, r.v_mag_pu.end());
            vmin = *lo;
            vmax = *hi;
        }
        const double loading =
            r.line_loading_pct.empty() ? 0.0 : *std::max_element(r.line_loading_pct.begin(), r.line_loading_pct.end());
        os << rec.scenario.scenario_id << ',' << csv::format_number(r.p_ipf_kw) << ','
           << csv::format_number(r.q_ipf_kvar) << ',' << csv::format_number(vmin) << ','
           << csv::format_number(vmax) << ',' << csv::format_number(loading) << ','
           << csv::format_bool(rec.label.volt_ok) << ',' << csv::format_bool(rec.label.line_ok) << ','
           << csv::format_bool(rec.label.inverter_ok) << ',' << to_string(rec.label.grid_class()) << ','
           << to_string(rec.label.full_class()) << '\n';
    }
    return os.str();
}

std::string density_csv(const FeederResult& feeder) {
    std::ostringstream os;
    os << "bin_left_kw,bin_right_kw,empirical_density,bates_density\n";
    const auto& d = feeder.density;
    for (std::size_t i = 0; i < d.bins(); ++i) {
        const double l = d.bin_edges[i];
        const double r = d.bin_edges[i + 1];
        // Bin average of the predicted density, comparable with the histogram.
        const double bates = (bates_cdf(r, feeder.predicted) - bates_cdf(l, feeder.predicted)) / (r - l);
        os << csv::format_number(l) << ',' << csv::format_number(r) << ','
           << csv::format_number(d.densities[i]) << ',' << csv::format_number(bates) << '\n';
    }
    return os.str();
}

std::string summary_text(const FeederResult& f) {
    std::ostringstream os;
    const auto limits = aggregate_limits(f.grid);
    os << "n_nodes: " << f.grid.n_nodes() << '\n'
       << "sample_size: " << f.sample_size << '\n'
       << "classified: " << f.records.size() << '\n'
       << "unclassified: " << f.unclassified.size() << '\n';
    for (const auto& u : f.unclassified)
        os << "unclassified_scenario: " << u.scenario.scenario_id << ' ' << to_string(u.status) << '\n';
    os << "aggregate_p_kw: " << fmt_full(limits.p_kw.lo) << ' ' << fmt_full(limits.p_kw.hi) << '\n'
       << "aggregate_q_kvar: " << fmt_full(limits.q_kvar.lo) << ' ' << fmt_full(limits.q_kvar.hi) << '\n'
       << "predicted_bates: n=" << f.predicted.n << " a=" << fmt_full(f.predicted.a)
       << " b=" << fmt_full(f.predicted.b) << '\n'
       << "predicted_std_kw: " << fmt_full(std::sqrt(f.predicted.variance())) << '\n'
       << "p_ipf_mean_kw: " << fmt_full(f.p_ipf_mean_kw) << '\n'
       << "p_ipf_std_kw: " << fmt_full(f.p_ipf_std_kw) << '\n'
       << "ks_statistic_mean_shifted: " << fmt_full(f.ks_statistic) << '\n'
       << "empirical_peak_density: " << fmt_full(f.density.peak()) << '\n';
    for (auto c : all_grid_classes)
        os << "grid_class_" << to_string(c) << ": " << f.counts.grid[static_cast<int>(c)] << '\n';
    for (auto c : all_full_classes)
        os << "full_class_" << to_string(c) << ": " << f.counts.full[static_cast<int>(c)] << '\n';
    os << "grid_feasible_fraction: " << fmt_full(f.grid_feasible_fraction()) << '\n'
       << "full_feasible_fraction: " << fmt_full(f.full_feasible_fraction()) << '\n'
       << "inverter_ok_fraction: " << fmt_full(f.inverter_ok_fraction()) << '\n'
       << "coverage_grid_feasible: " << fmt_full(f.coverage_grid) << '\n'
       << "coverage_full_feasible: " << fmt_full(f.coverage_full) << '\n';
    return os.str();
}

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw IoError(output_dir.string(), ec.message());
    for (std::size_t i = 0; i < result.feeders.size(); ++i) {
        const auto& f = result.feeders[i];
        const auto dir = feeder_dir(output_dir, f.grid.n_nodes());
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError(dir.string(), ec.message());
        csv::write_text_file(dir / "samples.csv", samples_csv(f));
        csv::write_text_file(dir / "density.csv", density_csv(f));
        csv::write_text_file(dir / "summary.txt", summary_text(f));
        const std::string tag = "_N" + std::to_string(f.grid.n_nodes()) + ".svg";
        csv::write_text_file(output_dir / ("fig2" + tag),
                             render(result, make_plot_spec(result, PlotKind::scatter_grid, i)));
        csv::write_text_file(output_dir / ("fig3" + tag),
                             render(result, make_plot_spec(result, PlotKind::scatter_full, i)));
    }
    csv::write_text_file(output_dir / "fig4.svg",
                         render(result, make_plot_spec(result, PlotKind::density, std::nullopt)));
}

ExperimentResult run(const ExperimentConfig& config) {
    auto result = run_study(config);
    write_artifacts(result, config.output_dir);
    return result;
}

ExperimentResult load_artifacts(const ExperimentConfig& config, const std::filesystem::path& dir) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    for (const auto& spec : config.feeders) {
        FeederResult f;
        f.grid = build_grid(spec);
        f.predicted = predicted_ipf_distribution(f.grid);
        const auto fdir = feeder_dir(dir, spec.n_nodes);

        const auto samples = csv::read_file(fdir / "samples.csv");
        const auto c_id = samples.column("scenario_id");
        const auto c_p = samples.column("p_ipf_kw");
        const auto c_q = samples.column("q_ipf_kvar");
        const auto c_v = samples.column("volt_ok");
        const auto c_l = samples.column("line_ok");
        const auto c_i = samples.column("inverter_ok");
        for (const auto& row : samples.rows) {
            SampleRecord rec;
            rec.scenario.scenario_id = std::stoll(row[c_id]);
            rec.result.status = SolveStatus::converged;
            rec.result.p_ipf_kw = csv::parse_double(row[c_p]);
            rec.result.q_ipf_kvar = csv::parse_double(row[c_q]);
            rec.label = {row[c_v] == "true", row[c_l] == "true", row[c_i] == "true"};
            f.records.push_back(std::move(rec));
        }

        const auto density = csv::read_file(fdir / "density.csv");
        const auto c_left = density.column("bin_left_kw");
        const auto c_right = density.column("bin_right_kw");
        const auto c_dens = density.column("empirical_density");
        for (const auto& row : density.rows) {
            if (f.density.bin_edges.empty()) f.density.bin_edges.push_back(csv::parse_double(row[c_left]));
            f.density.bin_edges.push_back(csv::parse_double(row[c_right]));
            f.density.densities.push_back(csv::parse_double(row[c_dens]));
        }
        f.density.sample_count = f.records.size();
        f.sample_size = f.records.size();
        result.feeders.push_back(std::move(f));
    }
    return result;
}

}  // namespace flexagg
