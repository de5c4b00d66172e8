#include <catch_amalgamated.hpp>

#include "flexagg/error.hpp"
#include "flexagg/grid_model.hpp"

#include <cmath>
#include <numeric>

using namespace flexagg;
using Catch::Approx;

TEST_CASE("line length follows the equal mean-distance rule", "[grid]") {
    CHECK(line_length_m(canonical_feeder_spec(1)) == Approx(400.0).epsilon(1e-15));
    CHECK(line_length_m(canonical_feeder_spec(3)) == Approx(200.0).epsilon(1e-15));
    CHECK(line_length_m(canonical_feeder_spec(27)) == Approx(400.0 / 14.0).epsilon(1e-15));
    CHECK(std::lround(line_length_m(canonical_feeder_spec(27))) == 29);
}

TEST_CASE("feeder length", "[grid]") {
    CHECK(feeder_length_m(canonical_feeder_spec(1)) == Approx(400.0));
    CHECK(feeder_length_m(canonical_feeder_spec(9)) == Approx(720.0));
    CHECK(feeder_length_m(canonical_feeder_spec(27)) == Approx(10800.0 / 14.0));
    CHECK(std::lround(feeder_length_m(canonical_feeder_spec(27))) == 771);
}

TEST_CASE("average transformer-node distance", "[grid]") {
    CHECK(avg_trafo_node_distance_m(1, 400.0) == Approx(400.0));
    // Brute-force mean of the node distances l, 2l, ..., Nl.
    for (auto [n, l] : {std::pair{3, 200.0}, std::pair{9, 80.0}}) {
        double sum = 0.0;
        for (int j = 1; j <= n; ++j) sum += l * j;
        CHECK(avg_trafo_node_distance_m(n, l) == Approx(sum / n));
        CHECK(avg_trafo_node_distance_m(n, l) == Approx(400.0));
    }
    CHECK_THROWS_AS(avg_trafo_node_distance_m(0, 1.0), InvalidArgument);
}

TEST_CASE("per-DER sizing", "[grid]") {
    auto s = per_der_power(canonical_feeder_spec(3));
    CHECK(s.p_inst_kw == Approx(200.0 / 3.0));
    CHECK(s.s_max_kva == Approx(200.0 / 3.0 / 0.9));
    s = per_der_power(canonical_feeder_spec(1));
    CHECK(s.p_inst_kw == Approx(200.0));
    CHECK(s.s_max_kva == Approx(222.2222222222));
    s = per_der_power(canonical_feeder_spec(27));
    CHECK(std::round(s.p_inst_kw * 10) / 10 == Approx(7.4));
    CHECK(std::round(s.s_max_kva * 10) / 10 == Approx(8.2));
}

TEST_CASE("build_grid realizes the radial chain", "[grid]") {
    const auto grid = build_grid(canonical_feeder_spec(9));
    REQUIRE(grid.buses.size() == 11);
    REQUIRE(grid.lines.size() == 9);
    REQUIRE(grid.ders.size() == 9);
    CHECK(grid.buses[0].kind == BusKind::slack_mv);
    CHECK(grid.buses[0].vn_kv == 20.0);
    CHECK(grid.buses[1].kind == BusKind::transformer_lv);
    for (std::size_t k = 0; k < grid.lines.size(); ++k) {
        CHECK(grid.lines[k].from_bus == static_cast<int>(k) + 1);
        CHECK(grid.lines[k].to_bus == static_cast<int>(k) + 2);
        CHECK(grid.lines[k].length_m == Approx(80.0));
        CHECK(grid.lines[k].params.type_name == "NAYY 4x150 SE");
    }
    for (const auto& der : grid.ders) {
        CHECK(der.p_inst_kw == Approx(200.0 / 9.0));
        CHECK(der.s_max_kva == Approx(der.p_inst_kw / 0.9));
        CHECK(der.p_range_kw.lo == -der.p_inst_kw);
        CHECK(der.p_range_kw.hi == der.p_inst_kw);
        CHECK(der.q_range_kvar.lo == -der.s_max_kva);
        CHECK(der.q_range_kvar.hi == der.s_max_kva);
    }
    CHECK(grid.buses.back().distance_m == Approx(720.0));

    const auto minimal = build_grid(canonical_feeder_spec(1));
    CHECK(minimal.buses.size() == 3);
    CHECK(minimal.lines.size() == 1);
    CHECK(minimal.ders.size() == 1);
}

TEST_CASE("invalid specs are rejected", "[grid]") {
    auto spec = canonical_feeder_spec(3);
    spec.n_nodes = 0;
    CHECK_THROWS_AS(build_grid(spec), InvalidArgument);
    spec = canonical_feeder_spec(3);
    spec.cos_phi = 1.2;
    CHECK_THROWS_AS(build_grid(spec), InvalidArgument);
    spec = canonical_feeder_spec(3);
    spec.voltage_band = {1.1, 0.9};
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
    spec = canonical_feeder_spec(3);
    spec.trafo.vkr_percent = 7.0;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
    spec = canonical_feeder_spec(3);
    spec.line.i_max_ka = 0.0;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("geometric identities hold for every node count", "[grid][property]") {
    double previous_length = 0.0;
    for (int n = 1; n <= 200; ++n) {
        auto spec = canonical_feeder_spec(n);
        spec.avg_trafo_node_dist_m = 137.5 + n;  // vary the scale as well
        const double l = line_length_m(spec);
        CHECK(feeder_length_m(spec) == Approx(n * l).epsilon(1e-14));
        CHECK(avg_trafo_node_distance_m(n, l) == Approx(spec.avg_trafo_node_dist_m).epsilon(1e-14));

        const auto grid = build_grid(spec);
        const double total = std::accumulate(grid.ders.begin(), grid.ders.end(), 0.0,
                                             [](double acc, const DerUnit& d) { return acc + d.p_inst_kw; });
        CHECK(std::abs(total - spec.total_installed_p_kw) <= 1e-9 * spec.total_installed_p_kw);

        auto fixed_scale = canonical_feeder_spec(n);
        const double lf = feeder_length_m(fixed_scale);
        CHECK(lf > previous_length);
        CHECK(lf < 2.0 * fixed_scale.avg_trafo_node_dist_m);
        previous_length = lf;
    }
}

TEST_CASE("feeder table rounds like the published configuration", "[grid]") {
    std::vector<FeederTableRow> rows;
    for (const auto& s : canonical_feeder_specs()) rows.push_back(describe(s));
    const auto text = format_feeder_table(rows);
    CHECK(text.find("200.0") != std::string::npos);
    CHECK(text.find("222.2") != std::string::npos);
    CHECK(text.find("0.9-1.1") != std::string::npos);
    CHECK(text.find("0.4 MVA 20/0.4 kV") != std::string::npos);
}
