#include "flexagg/grid_model.hpp"

#include "flexagg/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace flexagg {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(what);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    // "-0" after rounding reads badly in a table.
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

}  // namespace

void LineParams::validate() const {
    require(r_ohm_per_km >= 0.0, "line r_ohm_per_km must be >= 0");
    require(x_ohm_per_km >= 0.0, "line x_ohm_per_km must be >= 0");
    require(c_nf_per_km >= 0.0, "line c_nf_per_km must be >= 0");
    require(i_max_ka > 0.0, "line i_max_ka must be > 0");
}

void TrafoParams::validate() const {
    require(s_rated_mva > 0.0, "trafo s_rated_mva must be > 0");
    require(v_hv_kv > 0.0 && v_lv_kv > 0.0, "trafo rated voltages must be > 0");
    require(vkr_percent >= 0.0, "trafo vkr_percent must be >= 0");
    require(vk_percent >= vkr_percent, "trafo vk_percent must be >= vkr_percent");
    require(pfe_kw >= 0.0 && i0_percent >= 0.0, "trafo no-load parameters must be >= 0");
}

void FeederSpec::validate() const {
    require(n_nodes >= 1, "n_nodes must be >= 1");
    require(total_installed_p_kw > 0.0, "total_installed_p_kw must be > 0");
    require(avg_trafo_node_dist_m > 0.0, "avg_trafo_node_dist_m must be > 0");
    require(cos_phi > 0.0 && cos_phi <= 1.0, "cos_phi must lie in (0, 1]");
    require(voltage_band.lo > 0.0 && voltage_band.lo < voltage_band.hi,
            "voltage band must satisfy 0 < v_min < v_max");
    require(slack_voltage_pu > 0.0, "slack_voltage_pu must be > 0");
    require(frequency_hz > 0.0, "frequency_hz must be > 0");
    line.validate();
    trafo.validate();
}

double line_length_m(const FeederSpec& spec) {
    spec.validate();
    return spec.avg_trafo_node_dist_m * 2.0 / (spec.n_nodes + 1.0);
}

double feeder_length_m(const FeederSpec& spec) {
    spec.validate();
    const double n = spec.n_nodes;
    return spec.avg_trafo_node_dist_m * 2.0 * n / (n + 1.0);
}

double avg_trafo_node_distance_m(int n_nodes, double line_length) {
    if (n_nodes < 1) throw InvalidArgument("n_nodes must be >= 1");
    return line_length * (n_nodes + 1.0) / 2.0;
}

DerSizing per_der_power(const FeederSpec& spec) {
    spec.validate();
    DerSizing out;
    out.p_inst_kw = spec.total_installed_p_kw / spec.n_nodes;
    out.s_max_kva = out.p_inst_kw / spec.cos_phi;
    return out;
}

GridModel build_grid(const FeederSpec& spec) {
    spec.validate();
    GridModel grid;
    grid.spec = spec;
    grid.transformer = spec.trafo;

    const double segment = line_length_m(spec);
    const auto sizing = per_der_power(spec);

    grid.buses.push_back({BusKind::slack_mv, spec.trafo.v_hv_kv, 0.0});
    grid.buses.push_back({BusKind::transformer_lv, spec.trafo.v_lv_kv, 0.0});
    for (int j = 1; j <= spec.n_nodes; ++j) {
        grid.buses.push_back({BusKind::feeder_node, spec.trafo.v_lv_kv, segment * j});
        grid.lines.push_back({GridModel::bus_of_node(j - 1), GridModel::bus_of_node(j), segment,
                              spec.line});
        DerUnit der;
        der.node_index = j;
        der.p_inst_kw = sizing.p_inst_kw;
        der.s_max_kva = sizing.s_max_kva;
        der.p_range_kw = {-sizing.p_inst_kw, sizing.p_inst_kw};
        der.q_range_kvar = {-sizing.s_max_kva, sizing.s_max_kva};
        grid.ders.push_back(der);
    }
    return grid;
}

FeederSpec canonical_feeder_spec(int n_nodes) {
    FeederSpec spec;
    spec.n_nodes = n_nodes;
    spec.validate();
    return spec;
}

std::vector<FeederSpec> canonical_feeder_specs() {
    std::vector<FeederSpec> out;
    for (int n : {1, 3, 9, 27}) out.push_back(canonical_feeder_spec(n));
    return out;
}

FeederTableRow describe(const FeederSpec& spec) {
    const auto sizing = per_der_power(spec);
    FeederTableRow row;
    row.n_ders = spec.n_nodes;
    row.p_inst_der_kw = sizing.p_inst_kw;
    row.s_max_der_kva = sizing.s_max_kva;
    row.feeder_length_m = feeder_length_m(spec);
    row.line_length_m = line_length_m(spec);
    row.line_type = spec.line.type_name;
    row.voltage_band = spec.voltage_band;
    row.trafo_type = spec.trafo.type_name;
    return row;
}

std::string format_feeder_table(const std::vector<FeederTableRow>& rows) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%7s  %16s  %17s  %17s  %15s  %-14s  %-17s  %s\n", "# DERs",
                  "P_inst,DER (kW)", "|S|max,DER (kVA)", "Feeder Length (m)", "Line Length (m)",
                  "Line Type", "Voltage Band (pu)", "Trafo Type");
    os << buf;
    for (const auto& r : rows) {
        char lo[32], hi[32];
        std::snprintf(lo, sizeof lo, "%g", r.voltage_band.lo);
        std::snprintf(hi, sizeof hi, "%g", r.voltage_band.hi);
        const std::string band = std::string(lo) + "-" + hi;
        std::snprintf(buf, sizeof buf, "%7d  %16s  %17s  %17s  %15s  %-14s  %-17s  %s\n", r.n_ders,
                      fixed(r.p_inst_der_kw, 1).c_str(), fixed(r.s_max_der_kva, 1).c_str(),
                      fixed(r.feeder_length_m, 0).c_str(), fixed(r.line_length_m, 0).c_str(),
                      r.line_type.c_str(), band.c_str(), r.trafo_type.c_str());
        os << buf;
    }
    return os.str();
}

}  // namespace flexagg
