#include "flexagg/report.hpp"

#include "flexagg/error.hpp"
#include "flexagg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace flexagg {

namespace {

constexpr double margin_left = 70.0;
constexpr double margin_right = 170.0;
constexpr double margin_top = 40.0;
constexpr double margin_bottom = 55.0;
constexpr double marker_radius = 1.6;

Interval padded(Interval r, double fraction) {
    const double pad = (r.hi - r.lo) * fraction;
    return {r.lo - pad, r.hi + pad};
}

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

std::string tick_label(double v, double step) {
    char buf[32];
    const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
    std::snprintf(buf, sizeof buf, "%.*f", decimals, std::abs(v) < step * 1e-9 ? 0.0 : v);
    return buf;
}

void draw_axes(svg::Document& doc, const PlotFrame& f, const std::string& x_label,
               const std::string& y_label) {
    const svg::Style axis{"none", "#000000", 1.0};
    const svg::Style grid_line{"none", "#e0e0e0", 0.5};
    const double x0 = std::min(f.x.px_lo, f.x.px_hi);
    const double x1 = std::max(f.x.px_lo, f.x.px_hi);
    const double y0 = std::min(f.y.px_lo, f.y.px_hi);
    const double y1 = std::max(f.y.px_lo, f.y.px_hi);

    const double xs = nice_step(f.x.data.width(), 6);
    for (double v = std::ceil(f.x.data.lo / xs) * xs; v <= f.x.data.hi + xs * 1e-9; v += xs) {
        const double px = f.x.to_px(v);
        doc.line(px, y0, px, y1, grid_line);
        doc.line(px, y1, px, y1 + 5.0, axis);
        doc.text(px, y1 + 18.0, tick_label(v, xs), 11.0, "middle");
    }
    const double ys = nice_step(f.y.data.width(), 6);
    for (double v = std::ceil(f.y.data.lo / ys) * ys; v <= f.y.data.hi + ys * 1e-9; v += ys) {
        const double py = f.y.to_px(v);
        doc.line(x0, py, x1, py, grid_line);
        doc.line(x0 - 5.0, py, x0, py, axis);
        doc.text(x0 - 8.0, py + 4.0, tick_label(v, ys), 11.0, "end");
    }
    doc.rect(x0, y0, x1 - x0, y1 - y0, axis);
    doc.text(0.5 * (x0 + x1), y1 + 40.0, x_label, 13.0, "middle");
    doc.text(14.0, 0.5 * (y0 + y1), y_label, 13.0, "start");
}

void legend_entry(svg::Document& doc, double x, double y, const std::string& color,
                  const std::string& label) {
    doc.rect(x, y - 8.0, 10.0, 10.0, {color, "none"});
    doc.text(x + 16.0, y + 1.0, label, 11.0);
}

std::string title_for(const FeederResult& f, const char* what) {
    return "N = " + std::to_string(f.grid.n_nodes()) + " DERs: " + what;
}

void draw_grey_rect(svg::Document& doc, const PlotFrame& f, const PlotSpec& spec) {
    const auto& r = spec.grey_rect;
    const double xa = f.x.to_px(r.p_kw.lo);
    const double xb = f.x.to_px(r.p_kw.hi);
    const double ya = f.y.to_px(r.q_kvar.lo);
    const double yb = f.y.to_px(r.q_kvar.hi);
    doc.rect(std::min(xa, xb), std::min(ya, yb), std::abs(xb - xa), std::abs(yb - ya),
             {spec.palette.grey_area, "none"}, "aggregate-limits");
}

std::string render_scatter(const ExperimentResult& result, const PlotSpec& spec) {
    const auto& feeder = result.feeders.at(*spec.feeder_index);
    const PlotFrame f = plot_frame(spec);
    const bool full = spec.kind == PlotKind::scatter_full;

    svg::Document doc(spec.width_px, spec.height_px);
    doc.rect(0, 0, spec.width_px, spec.height_px, {"#ffffff", "none"});
    doc.text(margin_left, 24.0,
             title_for(feeder, full ? "grid and inverter constraints" : "grid constraints"), 14.0);
    draw_grey_rect(doc, f, spec);
    draw_axes(doc, f, "P_IPF (kW)", "Q_IPF (kvar)");

    // Paint order: double violations first, feasible last (on top).
    auto draw_class = [&](auto cls, const char* name, const std::string& color) {
        doc.begin_group(std::string("class-") + name);
        const svg::Style style{color, "none"};
        for (const auto& rec : feeder.records) {
            const bool match = full ? rec.label.full_class() == static_cast<FullClass>(cls)
                                    : rec.label.grid_class() == static_cast<GridClass>(cls);
            if (!match) continue;
            doc.circle(f.x.to_px(rec.result.p_ipf_kw), f.y.to_px(rec.result.q_ipf_kvar), marker_radius,
                       style, "marker");
        }
        doc.end_group();
    };
    if (full) {
        for (auto c : {FullClass::both, FullClass::inverter_only, FullClass::grid_only, FullClass::feasible})
            draw_class(c, to_string(c), spec.palette.color(c));
    } else {
        for (auto c : {GridClass::both, GridClass::overload_only, GridClass::voltage_only, GridClass::feasible})
            draw_class(c, to_string(c), spec.palette.color(c));
    }

    const double lx = spec.width_px - margin_right + 15.0;
    double ly = margin_top + 10.0;
    doc.begin_group("legend");
    if (full) {
        const char* labels[] = {"feasible", "grid violation", "inverter violation", "grid + inverter"};
        for (auto c : all_full_classes) {
            legend_entry(doc, lx, ly, spec.palette.color(c), labels[static_cast<int>(c)]);
            ly += 18.0;
        }
    } else {
        const char* labels[] = {"feasible", "voltage band", "line overload", "voltage + overload"};
        for (auto c : all_grid_classes) {
            legend_entry(doc, lx, ly, spec.palette.color(c), labels[static_cast<int>(c)]);
            ly += 18.0;
        }
    }
    legend_entry(doc, lx, ly, spec.palette.grey_area, "aggregate DER limits");
    doc.end_group();
    return doc.str();
}

const char* series_colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string render_density(const ExperimentResult& result, const PlotSpec& spec) {
    const PlotFrame f = plot_frame(spec);
    svg::Document doc(spec.width_px, spec.height_px);
    doc.rect(0, 0, spec.width_px, spec.height_px, {"#ffffff", "none"});
    doc.text(margin_left, 24.0, "Frequency density of P_IPF vs. Bates prediction", 14.0);
    draw_axes(doc, f, "P_IPF (kW)", "density (1/kW)");

    std::vector<std::size_t> which;
    if (spec.feeder_index)
        which.push_back(*spec.feeder_index);
    else
        for (std::size_t i = 0; i < result.feeders.size(); ++i) which.push_back(i);

    const double lx = spec.width_px - margin_right + 15.0;
    double ly = margin_top + 10.0;
    for (std::size_t idx : which) {
        const auto& feeder = result.feeders[idx];
        const std::string color = series_colors[idx % std::size(series_colors)];
        const std::string tag = "N" + std::to_string(feeder.grid.n_nodes());
        doc.begin_group("density-" + tag);

        // Empirical histogram as a solid step line.
        std::vector<double> steps;
        const auto& d = feeder.density;
        for (std::size_t i = 0; i < d.bins(); ++i) {
            const double y = f.y.to_px(d.densities[i]);
            if (i == 0) steps.insert(steps.end(), {f.x.to_px(d.bin_edges[0]), f.y.to_px(0.0)});
            steps.insert(steps.end(), {f.x.to_px(d.bin_edges[i]), y, f.x.to_px(d.bin_edges[i + 1]), y});
        }
        if (!steps.empty()) steps.insert(steps.end(), {f.x.to_px(d.bin_edges.back()), f.y.to_px(0.0)});
        doc.polyline(steps, {"none", color, 1.5}, "empirical");

        // Bates prediction, dashed.
        std::vector<double> curve;
        constexpr int samples = 400;
        const auto& bp = feeder.predicted;
        for (int i = 0; i <= samples; ++i) {
            const double x = bp.a + (bp.b - bp.a) * i / samples;
            curve.push_back(f.x.to_px(x));
            curve.push_back(f.y.to_px(std::min(bates_pdf(x, bp), spec.y_range.hi)));
        }
        doc.polyline(curve, {"none", color, 1.5, "6,4"}, "bates");
        doc.end_group();

        legend_entry(doc, lx, ly, color, "N = " + std::to_string(feeder.grid.n_nodes()));
        ly += 18.0;
    }
    doc.text(lx, ly + 6.0, "solid: sample", 11.0);
    doc.text(lx, ly + 22.0, "dashed: Bates", 11.0);
    return doc.str();
}

}  // namespace

double AxisTransform::to_px(double v) const noexcept {
    const double t = (v - data.lo) / (data.hi - data.lo);
    return flip ? px_hi - t * (px_hi - px_lo) : px_lo + t * (px_hi - px_lo);
}

double AxisTransform::from_px(double px) const noexcept {
    const double t = flip ? (px_hi - px) / (px_hi - px_lo) : (px - px_lo) / (px_hi - px_lo);
    return data.lo + t * (data.hi - data.lo);
}

PlotFrame plot_frame(const PlotSpec& spec) {
    PlotFrame f;
    f.x = {spec.x_range, margin_left, spec.width_px - margin_right, false};
    f.y = {spec.y_range, margin_top, spec.height_px - margin_bottom, true};
    return f;
}

PlotSpec make_plot_spec(const ExperimentResult& result, PlotKind kind,
                        std::optional<std::size_t> feeder_index) {
    if (feeder_index && *feeder_index >= result.feeders.size())
        throw InvalidArgument("unknown feeder index " + std::to_string(*feeder_index));
    if (kind != PlotKind::density && !feeder_index)
        throw InvalidArgument("scatter plots need a feeder index");

    PlotSpec spec;
    spec.kind = kind;
    spec.feeder_index = feeder_index;

    std::vector<std::size_t> which;
    if (feeder_index)
        which.push_back(*feeder_index);
    else
        for (std::size_t i = 0; i < result.feeders.size(); ++i) which.push_back(i);

    bool first = true;
    Interval x{}, y{};
    for (std::size_t idx : which) {
        const auto& feeder = result.feeders[idx];
        const auto limits = aggregate_limits(feeder.grid);
        spec.grey_rect = first ? limits
                               : AggregateLimits{hull(spec.grey_rect.p_kw, limits.p_kw),
                                                 hull(spec.grey_rect.q_kvar, limits.q_kvar)};
        if (first) {
            x = limits.p_kw;
            y = kind == PlotKind::density ? Interval{0.0, 0.0} : limits.q_kvar;
            first = false;
        }
        x = hull(x, limits.p_kw);
        if (kind == PlotKind::density) {
            if (!feeder.density.bin_edges.empty())
                x = hull(x, {feeder.density.bin_edges.front(), feeder.density.bin_edges.back()});
            const double bates_peak = bates_pdf(feeder.predicted.mean(), feeder.predicted);
            y.hi = std::max({y.hi, feeder.density.peak(), bates_peak});
        } else {
            y = hull(y, limits.q_kvar);
            for (const auto& rec : feeder.records) {
                x = hull(x, {rec.result.p_ipf_kw, rec.result.p_ipf_kw});
                y = hull(y, {rec.result.q_ipf_kvar, rec.result.q_ipf_kvar});
            }
        }
    }
    spec.x_range = padded(x, 0.05);
    if (kind == PlotKind::density) {
        if (!(y.hi > 0.0)) y.hi = 1.0;
        spec.y_range = {0.0, y.hi * 1.1};
    } else {
        spec.y_range = padded(y, 0.05);
    }
    return spec;
}

std::string render(const ExperimentResult& result, const PlotSpec& spec) {
    if (spec.feeder_index && *spec.feeder_index >= result.feeders.size())
        throw InvalidArgument("unknown feeder index " + std::to_string(*spec.feeder_index));
    if (!(spec.x_range.hi > spec.x_range.lo && spec.y_range.hi > spec.y_range.lo))
        throw InvalidArgument("plot axis ranges must be non-empty");
    switch (spec.kind) {
    case PlotKind::scatter_grid:
    case PlotKind::scatter_full:
        if (!spec.feeder_index) throw InvalidArgument("scatter plots need a feeder index");
        if (spec.x_range.lo > spec.grey_rect.p_kw.lo || spec.x_range.hi < spec.grey_rect.p_kw.hi ||
            spec.y_range.lo > spec.grey_rect.q_kvar.lo || spec.y_range.hi < spec.grey_rect.q_kvar.hi)
            throw InvalidArgument("scatter axis ranges must enclose the aggregate limits");
        return render_scatter(result, spec);
    case PlotKind::density: return render_density(result, spec);
    }
    throw InvalidArgument("unknown plot kind");
}

}  // namespace flexagg
