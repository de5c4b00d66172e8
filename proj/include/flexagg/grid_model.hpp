#pragma once

// Synthetic 0.4 kV radial feeders.
//
// Every feeder of the family shares the total installed DER power and the
// average transformer-node distance; only the node count changes. Nodes are
// equally spaced, so for N nodes and mean distance d the segment length is
// 2d/(N+1) and the feeder length 2dN/(N+1).

#include <string>
#include <vector>

namespace flexagg {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

struct LineParams {
    double r_ohm_per_km = 0.208;
    double x_ohm_per_km = 0.080;
    double c_nf_per_km = 261.0;
    double i_max_ka = 0.270;
    std::string type_name = "NAYY 4x150 SE";

    void validate() const;
};

struct TrafoParams {
    double s_rated_mva = 0.4;
    double v_hv_kv = 20.0;
    double v_lv_kv = 0.4;
    double vk_percent = 6.0;
    double vkr_percent = 1.425;
    double pfe_kw = 1.35;
    double i0_percent = 0.3375;
    std::string type_name = "0.4 MVA 20/0.4 kV";

    void validate() const;
};

struct FeederSpec {
    int n_nodes = 1;
    double total_installed_p_kw = 200.0;
    double avg_trafo_node_dist_m = 400.0;
    double cos_phi = 0.9;
    Interval voltage_band{0.9, 1.1};
    LineParams line;
    TrafoParams trafo;
    double slack_voltage_pu = 1.0;
    double frequency_hz = 50.0;

    /// Throws InvalidArgument naming the first violated invariant.
    void validate() const;
};

struct DerUnit {
    int node_index = 0;  // 1-based position along the feeder
    double p_inst_kw = 0.0;
    double s_max_kva = 0.0;
    Interval p_range_kw;
    Interval q_range_kvar;
};

enum class BusKind { slack_mv, transformer_lv, feeder_node };

struct Bus {
    BusKind kind = BusKind::feeder_node;
    double vn_kv = 0.4;
    double distance_m = 0.0;  // from the transformer LV terminal
};

struct Line {
    int from_bus = 0;
    int to_bus = 0;
    double length_m = 0.0;
    LineParams params;
};

/// Realized feeder. Bus 0 is the MV slack, bus 1 the transformer LV bus and
/// buses 2..N+1 the feeder nodes in distance order; line k joins bus k+1 to
/// bus k+2. DER j sits on bus j+1.
struct GridModel {
    FeederSpec spec;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    TrafoParams transformer;
    std::vector<DerUnit> ders;

    int n_nodes() const noexcept { return static_cast<int>(ders.size()); }
    static constexpr int slack_bus = 0;
    static constexpr int lv_bus = 1;
    static int bus_of_node(int node_index) noexcept { return node_index + 1; }
};

struct DerSizing {
    double p_inst_kw = 0.0;
    double s_max_kva = 0.0;
};

double line_length_m(const FeederSpec& spec);
double feeder_length_m(const FeederSpec& spec);

/// Mean distance of N equally spaced nodes from the transformer.
double avg_trafo_node_distance_m(int n_nodes, double line_length_m);

DerSizing per_der_power(const FeederSpec& spec);

GridModel build_grid(const FeederSpec& spec);

FeederSpec canonical_feeder_spec(int n_nodes);

/// N = 1, 3, 9, 27 with the canonical cable, transformer and DER sizing.
std::vector<FeederSpec> canonical_feeder_specs();

/// One row of the feeder configuration table, values at full precision.
struct FeederTableRow {
    int n_ders = 0;
    double p_inst_der_kw = 0.0;
    double s_max_der_kva = 0.0;
    double feeder_length_m = 0.0;
    double line_length_m = 0.0;
    std::string line_type;
    Interval voltage_band;
    std::string trafo_type;
};

FeederTableRow describe(const FeederSpec& spec);

/// Aligned text table; lengths rounded to whole meters, powers to 0.1.
std::string format_feeder_table(const std::vector<FeederTableRow>& rows);

}  // namespace flexagg
