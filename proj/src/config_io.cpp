#include "evc/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace evc {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
}

template <typename T>
T get_field(const json& obj, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("config: missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: key '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_field_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: key '" + key + "' has the wrong type");
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig scenario_from_json(const json& obj) {
    ScenarioConfig cfg;
    cfg.num_files = get_field_or<int>(obj, "F", 0);
    cfg.packets_per_file = get_field<int>(obj, "n");
    cfg.num_servers = get_field<int>(obj, "K");
    cfg.capacities_mb = get_field<std::vector<double>>(obj, "capacities_mb");
    cfg.duration_s = get_field<double>(obj, "T_d_s");
    cfg.backhaul_rate_mbps = get_field<double>(obj, "R_bk_mbps");
    cfg.total_requests = get_field<double>(obj, "total_requests");
    cfg.theta = get_field<double>(obj, "theta");
    if (!obj.contains("classes") || !obj.at("classes").is_array())
        throw ConfigError("config: key 'classes' must be a list");
    for (const json& c : obj.at("classes")) {
        ClassSpec cs;
        cs.count = get_field<int>(c, "count");
        cs.r_min = get_field<double>(c, "r_min");
        cs.r_max = get_field<double>(c, "r_max");
        cs.c1 = get_field<double>(c, "c1");
        cs.c2 = get_field<double>(c, "c2");
        cs.c3 = get_field<double>(c, "c3");
        cs.c4 = get_field<double>(c, "c4");
        cs.v = get_field<double>(c, "v");
        cfg.classes.push_back(cs);
    }
    if (obj.contains("file_classes"))
        cfg.file_classes = get_field<std::vector<int>>(obj, "file_classes");
    return cfg;
}

HarnessOptions options_from_json(const json& obj) {
    HarnessOptions opt;
    opt.seed = get_field_or<uint64_t>(obj, "seed", opt.seed);
    opt.n_starts = get_field_or<int>(obj, "n_starts", opt.n_starts);
    opt.branch_starts = get_field_or<int>(obj, "branch_starts", opt.branch_starts);
    opt.tol_constraint = get_field_or<double>(obj, "tol_constraint", opt.tol_constraint);
    opt.tol_grad = get_field_or<double>(obj, "tol_grad", opt.tol_grad);
    opt.max_inner_iters = get_field_or<long>(obj, "max_inner_iters", opt.max_inner_iters);
    opt.smoothing_eps = get_field_or<double>(obj, "smoothing_eps", opt.smoothing_eps);
    opt.greedy_step_mbps = get_field_or<double>(obj, "greedy_step_mbps", 0.0);
    opt.ecst_rate_divisor = get_field_or<int>(obj, "ecst_rate_divisor", 0);
    return opt;
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
    return scenario_from_json(parse_json(text));
}

ScenarioConfig load_scenario_config(const std::string& path) {
    return parse_scenario_config(slurp(path));
}

SweepSpec parse_sweep_spec(const std::string& text) {
    const json obj = parse_json(text);
    SweepSpec spec;
    if (!obj.contains("scenario"))
        throw ConfigError("config: missing key 'scenario'");
    spec.scenario = scenario_from_json(obj.at("scenario"));
    spec.axis = axis_from_name(get_field<std::string>(obj, "axis"));
    spec.values = get_field<std::vector<double>>(obj, "values");
    spec.schemes = get_field<std::vector<std::string>>(obj, "schemes");
    if (obj.contains("capacity_vectors"))
        spec.capacity_vectors =
            get_field<std::vector<std::vector<double>>>(obj, "capacity_vectors");
    if (obj.contains("options")) spec.options = options_from_json(obj.at("options"));
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    return parse_sweep_spec(slurp(path));
}

}  // namespace evc
