#include "lucas/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lucas {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("config: missing required key \"" + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config: key \"" + key + "\" must be a number");
    return v.get<double>();
}

double optional_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config: key \"" + key + "\" must be a number");
    return v.get<double>();
}

void require_positive(double v, const std::string& key) {
    if (!std::isfinite(v) || !(v > 0.0))
        throw ConfigError("config: key \"" + key + "\" must be positive and finite");
}

const std::set<std::string>& sweepable_names() {
    static const std::set<std::string> names = {"beta", "sigma", "rho",   "delta", "gamma",
                                               "pi",   "theta", "k0",    "h0"};
    return names;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

    static const std::set<std::string> known = {
        "beta",   "sigma",       "rho",        "delta",           "gamma",
        "pi",     "theta",       "k0",         "h0",              "horizon",
        "output_step", "compare_horizon", "tolerances", "output_dir", "sweep"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError("config: unknown key \"" + key + "\"");
    }

    RunConfig cfg;
    cfg.params.beta = require_number(j, "beta");
    cfg.params.sigma = require_number(j, "sigma");
    cfg.params.rho = require_number(j, "rho");
    cfg.params.delta = require_number(j, "delta");
    cfg.params.gamma = require_number(j, "gamma");
    cfg.params.pi = require_number(j, "pi");
    cfg.params.theta = require_number(j, "theta");
    cfg.endowment.k0 = require_number(j, "k0");
    cfg.endowment.h0 = require_number(j, "h0");

    cfg.horizon = optional_number(j, "horizon", cfg.horizon);
    cfg.output_step = optional_number(j, "output_step", cfg.output_step);
    cfg.compare_horizon = optional_number(j, "compare_horizon", cfg.compare_horizon);
    require_positive(cfg.horizon, "horizon");
    require_positive(cfg.output_step, "output_step");
    if (!std::isfinite(cfg.compare_horizon) || cfg.compare_horizon < 0.0)
        throw ConfigError("config: key \"compare_horizon\" must be >= 0 and finite");

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("config: \"tolerances\" must be an object");
        static const std::set<std::string> tol_known = {"ode_rel_tol", "ode_abs_tol",
                                                        "quad_tol", "root_tol", "max_steps"};
        for (const auto& [key, value] : t.items()) {
            (void)value;
            if (!tol_known.count(key))
                throw ConfigError("config: unknown tolerance key \"" + key + "\"");
        }
        cfg.tolerances.ode_rel_tol =
            optional_number(t, "ode_rel_tol", cfg.tolerances.ode_rel_tol);
        cfg.tolerances.ode_abs_tol =
            optional_number(t, "ode_abs_tol", cfg.tolerances.ode_abs_tol);
        cfg.tolerances.quad_tol = optional_number(t, "quad_tol", cfg.tolerances.quad_tol);
        cfg.tolerances.root_tol = optional_number(t, "root_tol", cfg.tolerances.root_tol);
        require_positive(cfg.tolerances.ode_rel_tol, "tolerances.ode_rel_tol");
        require_positive(cfg.tolerances.ode_abs_tol, "tolerances.ode_abs_tol");
        require_positive(cfg.tolerances.quad_tol, "tolerances.quad_tol");
        require_positive(cfg.tolerances.root_tol, "tolerances.root_tol");
        const double steps =
            optional_number(t, "max_steps", static_cast<double>(cfg.tolerances.max_steps));
        if (!(steps >= 1.0) || steps != std::floor(steps) || steps > 1e12)
            throw ConfigError("config: \"tolerances.max_steps\" must be a positive integer");
        cfg.tolerances.max_steps = static_cast<long>(steps);
    }

    if (j.contains("output_dir")) {
        const auto& v = j.at("output_dir");
        if (!v.is_string()) throw ConfigError("config: \"output_dir\" must be a string");
        cfg.output_dir = v.get<std::string>();
        if (cfg.output_dir.empty())
            throw ConfigError("config: \"output_dir\" must not be empty");
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (!s.is_object()) throw ConfigError("config: \"sweep\" must be an object");
        for (const auto& [key, values] : s.items()) {
            if (!sweepable_names().count(key))
                throw ConfigError("config: cannot sweep over unknown parameter \"" + key +
                                  "\"");
            if (!values.is_array() || values.empty())
                throw ConfigError("config: sweep values for \"" + key +
                                  "\" must be a non-empty array");
            std::vector<double> list;
            for (const auto& v : values) {
                if (!v.is_number())
                    throw ConfigError("config: sweep values for \"" + key +
                                      "\" must be numbers");
                const double x = v.get<double>();
                if (!std::isfinite(x))
                    throw ConfigError("config: sweep values for \"" + key +
                                      "\" must be finite");
                list.push_back(x);
            }
            cfg.sweep.emplace(key, std::move(list));
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\" for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ConfigError("config: failed reading \"" + path + "\"");
    return parse_config(buffer.str());
}

}  // namespace lucas
