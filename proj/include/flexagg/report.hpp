#pragma once

// SVG figures: IPF scatter classified by grid constraints, scatter
// classified by grid and inverter constraints, and the P_IPF frequency
// density against the Bates prediction.

#include "flexagg/experiment.hpp"

#include <array>
#include <optional>
#include <string>

namespace flexagg {

enum class PlotKind { scatter_grid, scatter_full, density };

struct Palette {
    // Indexed by GridClass / FullClass.
    std::array<std::string, 4> grid{"#2ca02c", "#ff7f0e", "#1f77b4", "#d62728"};
    std::array<std::string, 4> full{"#2ca02c", "#ff7f0e", "#1f77b4", "#d62728"};
    std::string grey_area = "#d9d9d9";

    const std::string& color(GridClass c) const { return grid[static_cast<std::size_t>(c)]; }
    const std::string& color(FullClass c) const { return full[static_cast<std::size_t>(c)]; }
};

struct PlotSpec {
    PlotKind kind = PlotKind::scatter_grid;
    /// Required for scatter plots; for the density plot an empty value
    /// overlays every feeder.
    std::optional<std::size_t> feeder_index;
    Interval x_range;  // kW
    Interval y_range;  // kvar for scatter, 1/kW for density
    Palette palette;
    AggregateLimits grey_rect;
    double width_px = 640.0;
    double height_px = 480.0;
};

/// Affine data-to-pixel map for one axis; `flip` maps lo to the far end.
struct AxisTransform {
    Interval data;
    double px_lo = 0.0;
    double px_hi = 1.0;
    bool flip = false;

    double to_px(double v) const noexcept;
    double from_px(double px) const noexcept;
};

/// Default axis ranges: data extent and grey rectangle, padded by 5 %.
PlotSpec make_plot_spec(const ExperimentResult& result, PlotKind kind,
                        std::optional<std::size_t> feeder_index);

/// Throws InvalidArgument for an unknown feeder index or a scatter plot
/// without one.
std::string render(const ExperimentResult& result, const PlotSpec& spec);

struct PlotFrame {
    AxisTransform x;
    AxisTransform y;
};

/// Plot-area transforms used by render() for the given spec.
PlotFrame plot_frame(const PlotSpec& spec);

}  // namespace flexagg
