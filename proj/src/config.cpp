#include "flexagg/config.hpp"

#include "flexagg/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace flexagg {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void apply_line(const json& j, LineParams& line) {
    reject_unknown(j, {"type_name", "r_ohm_per_km", "x_ohm_per_km", "c_nf_per_km", "i_max_ka"}, "line");
    read(j, "type_name", line.type_name);
    read(j, "r_ohm_per_km", line.r_ohm_per_km);
    read(j, "x_ohm_per_km", line.x_ohm_per_km);
    read(j, "c_nf_per_km", line.c_nf_per_km);
    read(j, "i_max_ka", line.i_max_ka);
}

void apply_trafo(const json& j, TrafoParams& trafo) {
    reject_unknown(j, {"type_name", "s_rated_mva", "v_hv_kv", "v_lv_kv", "vk_percent", "vkr_percent",
                       "pfe_kw", "i0_percent"},
                   "trafo");
    read(j, "type_name", trafo.type_name);
    read(j, "s_rated_mva", trafo.s_rated_mva);
    read(j, "v_hv_kv", trafo.v_hv_kv);
    read(j, "v_lv_kv", trafo.v_lv_kv);
    read(j, "vk_percent", trafo.vk_percent);
    read(j, "vkr_percent", trafo.vkr_percent);
    read(j, "pfe_kw", trafo.pfe_kw);
    read(j, "i0_percent", trafo.i0_percent);
}

const std::set<std::string> feeder_keys = {
    "n_nodes", "total_installed_p_kw", "avg_trafo_node_dist_m", "cos_phi", "v_min_pu", "v_max_pu",
    "slack_voltage_pu", "frequency_hz", "line", "trafo"};

// Applies feeder keys (except n_nodes) found in j onto spec.
void apply_feeder(const json& j, FeederSpec& spec) {
    read(j, "total_installed_p_kw", spec.total_installed_p_kw);
    read(j, "avg_trafo_node_dist_m", spec.avg_trafo_node_dist_m);
    read(j, "cos_phi", spec.cos_phi);
    read(j, "v_min_pu", spec.voltage_band.lo);
    read(j, "v_max_pu", spec.voltage_band.hi);
    read(j, "slack_voltage_pu", spec.slack_voltage_pu);
    read(j, "frequency_hz", spec.frequency_hz);
    if (j.contains("line")) apply_line(j.at("line"), spec.line);
    if (j.contains("trafo")) apply_trafo(j.at("trafo"), spec.trafo);
}

ExperimentConfig from_json(const json& root) {
    if (!root.is_object()) throw InvalidArgument("configuration root must be an object");
    std::set<std::string> allowed = feeder_keys;
    allowed.insert({"feeders", "sampler", "workers", "output_dir", "histogram_bins",
                    "trafo_loading_is_constraint", "solver"});
    reject_unknown(root, allowed, "configuration");

    ExperimentConfig cfg;
    FeederSpec shared;
    apply_feeder(root, shared);

    std::vector<int> node_counts;
    if (root.contains("n_nodes")) {
        const auto& n = root.at("n_nodes");
        if (n.is_array())
            node_counts = n.get<std::vector<int>>();
        else
            node_counts = {n.get<int>()};
    }

    if (root.contains("feeders") && !node_counts.empty())
        throw InvalidArgument("use either top-level n_nodes or a feeders list, not both");

    cfg.feeders.clear();
    if (root.contains("feeders")) {
        for (const auto& entry : root.at("feeders")) {
            reject_unknown(entry, feeder_keys, "feeders entry");
            if (!entry.contains("n_nodes")) throw InvalidArgument("feeders entry without n_nodes");
            FeederSpec spec = shared;
            spec.n_nodes = entry.at("n_nodes").get<int>();
            apply_feeder(entry, spec);
            cfg.feeders.push_back(spec);
        }
    } else {
        if (node_counts.empty()) node_counts = {1, 3, 9, 27};
        for (int n : node_counts) {
            FeederSpec spec = shared;
            spec.n_nodes = n;
            cfg.feeders.push_back(spec);
        }
    }

    if (root.contains("sampler")) {
        const auto& s = root.at("sampler");
        reject_unknown(s, {"sample_size", "seed", "strategy", "max_redraws"}, "sampler");
        read(s, "sample_size", cfg.sampler.sample_size);
        read(s, "seed", cfg.sampler.seed);
        read(s, "max_redraws", cfg.sampler.max_redraws);
        if (s.contains("strategy"))
            cfg.sampler.strategy = parse_sampling_strategy(s.at("strategy").get<std::string>());
    }
    if (root.contains("workers")) {
        const auto& w = root.at("workers");
        if (w.is_string()) {
            if (w.get<std::string>() != "auto") throw InvalidArgument("workers must be an integer or \"auto\"");
            cfg.workers = 0;
        } else {
            cfg.workers = w.get<int>();
            if (cfg.workers < 1) throw InvalidArgument("workers must be >= 1 or \"auto\"");
        }
    }
    if (root.contains("output_dir")) cfg.output_dir = root.at("output_dir").get<std::string>();
    read(root, "histogram_bins", cfg.histogram_bins);
    read(root, "trafo_loading_is_constraint", cfg.classify.trafo_loading_is_constraint);
    if (root.contains("solver")) {
        const auto& s = root.at("solver");
        reject_unknown(s, {"tolerance_pu", "max_iterations"}, "solver");
        read(s, "tolerance_pu", cfg.solver.tolerance_pu);
        read(s, "max_iterations", cfg.solver.max_iterations);
    }
    cfg.validate();
    return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("configuration is not valid JSON: ") + e.what());
    }
    try {
        return from_json(root);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("configuration has a wrongly typed value: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open configuration");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

}  // namespace flexagg
