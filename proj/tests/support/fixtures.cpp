#include "fixtures.hpp"

#include "flexagg/csv.hpp"

#include <string>

namespace flexagg::fixtures {

std::filesystem::path fixture_dir() { return FLEXAGG_FIXTURE_DIR; }
std::filesystem::path data_dir() { return FLEXAGG_DATA_DIR; }

std::vector<ReferenceCase> load_reference(int n_nodes) {
    const auto table = csv::read_file(fixture_dir() / ("pf_reference_N" + std::to_string(n_nodes) + ".csv"));
    std::vector<ReferenceCase> out;
    for (const auto& row : table.rows) {
        ReferenceCase c;
        c.scenario.scenario_id = std::stoll(row[table.column("scenario_id")]);
        for (int j = 1; j <= n_nodes; ++j) {
            const auto sj = std::to_string(j);
            c.scenario.setpoints.push_back({csv::parse_double(row[table.column("der" + sj + "_p_kw")]),
                                            csv::parse_double(row[table.column("der" + sj + "_q_kvar")])});
        }
        c.p_ipf_kw = csv::parse_double(row[table.column("p_ipf_kw")]);
        c.q_ipf_kvar = csv::parse_double(row[table.column("q_ipf_kvar")]);
        for (int b = 0; b < n_nodes + 2; ++b)
            c.v_mag_pu.push_back(csv::parse_double(row[table.column("vm_pu_" + std::to_string(b))]));
        c.max_line_loading_pct = csv::parse_double(row[table.column("max_line_loading_pct")]);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace flexagg::fixtures
