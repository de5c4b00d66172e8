#pragma once

#include "flexagg/powerflow.hpp"

#include <filesystem>
#include <vector>

namespace flexagg::fixtures {

std::filesystem::path fixture_dir();
std::filesystem::path data_dir();

/// One solved scenario from the external reference power-flow tool.
struct ReferenceCase {
    ControlScenario scenario;
    double p_ipf_kw = 0.0;
    double q_ipf_kvar = 0.0;
    std::vector<double> v_mag_pu;  // bus order: MV, LV, node 1..N
    double max_line_loading_pct = 0.0;
};

std::vector<ReferenceCase> load_reference(int n_nodes);

}  // namespace flexagg::fixtures
