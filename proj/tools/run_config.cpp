#include "run_config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "eitcool/config_io.hpp"
#include "eitcool/rate_model.hpp"

namespace eitcool::cli {

namespace {

using nlohmann::json;

Layer layer_from_string(const std::string& s) {
    if (s == "spectrum") return Layer::spectrum;
    if (s == "rate") return Layer::rate;
    if (s == "master") return Layer::master;
    if (s == "mc") return Layer::mc;
    throw InvalidParameter("layer", "expected one of spectrum|rate|master|mc");
}

LdOrder ld_order_from_string(const std::string& s) {
    if (s == "1" || s == "first") return LdOrder::first;
    if (s == "2" || s == "second") return LdOrder::second;
    if (s == "exact") return LdOrder::exact;
    throw InvalidParameter("sim.ld_order", "expected 1|2|exact");
}

RecoilModel recoil_from_string(const std::string& s) {
    if (s == "none") return RecoilModel::none;
    if (s == "lamb-dicke-2nd") return RecoilModel::lamb_dicke_2nd;
    if (s == "exact") return RecoilModel::exact;
    throw InvalidParameter("sim.recoil_model", "expected none|lamb-dicke-2nd|exact");
}

bool is_params_key(const std::string& key) {
    static const char* names[] = {"gamma",   "gamma_g", "gamma_r", "omega_g",
                                  "omega_r", "delta_g", "delta_r", "nu",
                                  "eta",     "eta_g",   "eta_r",   "alpha"};
    for (const char* n : names)
        if (key == n) return true;
    return false;
}

double to_number(const std::string& key, const json& v) {
    if (!v.is_number()) throw InvalidParameter(key, "expected a numeric value");
    return v.get<double>();
}

double parse_number(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InvalidParameter(key, "expected a numeric value, got '" + v + "'");
    }
}

struct Builder {
    std::map<std::string, double> params;
    RunConfig cfg;

    void apply_sweep(const std::string& key, const json& v) {
        if (!cfg.sweep) cfg.sweep.emplace();
        SweepSpec& s = *cfg.sweep;
        if (key == "variable") {
            s.variable = v.get<std::string>();
        } else if (key == "start") {
            s.start = to_number("sweep.start", v);
        } else if (key == "stop") {
            s.stop = to_number("sweep.stop", v);
        } else if (key == "n_points") {
            s.n_points = static_cast<int>(to_number("sweep.n_points", v));
        } else if (key == "scale") {
            const std::string sc = v.get<std::string>();
            if (sc != "linear" && sc != "log")
                throw InvalidParameter("sweep.scale", "expected linear|log");
            s.log_scale = (sc == "log");
        } else {
            throw InvalidParameter("sweep." + key, "unknown sweep key");
        }
    }

    void apply_sim(const std::string& key, const json& v) {
        SimConfig& s = cfg.sim;
        if (key == "n_max")
            s.n_max = static_cast<int>(to_number("sim.n_max", v));
        else if (key == "rate_n_max")
            s.rate_n_max = static_cast<int>(to_number("sim.rate_n_max", v));
        else if (key == "ld_order")
            s.ld_order = v.is_string() ? ld_order_from_string(v.get<std::string>())
                                       : ld_order_from_string(std::to_string(
                                             static_cast<int>(to_number(key, v))));
        else if (key == "recoil_model")
            s.recoil = recoil_from_string(v.get<std::string>());
        else if (key == "n_traj")
            s.n_traj = static_cast<int>(to_number("sim.n_traj", v));
        else if (key == "seed")
            s.seed = static_cast<std::uint64_t>(to_number("sim.seed", v));
        else if (key == "t_end") {
            s.t_end = to_number("sim.t_end", v);
            if (s.t_end <= 0.0)
                throw InvalidParameter("sim.t_end", "must be > 0");
        }
        else if (key == "n_times")
            s.n_times = static_cast<int>(to_number("sim.n_times", v));
        else if (key == "initial_n_mean")
            s.initial_n_mean = to_number("sim.initial_n_mean", v);
        else if (key == "tail_tol")
            s.tail_tol = to_number("sim.tail_tol", v);
        else if (key == "eta_emission")
            s.eta_emission = to_number("sim.eta_emission", v);
        else
            throw InvalidParameter("sim." + key, "unknown sim key");
    }

    void apply_output(const std::string& key, const json& v) {
        if (key == "path") {
            cfg.output.path = v.get<std::string>();
        } else if (key == "format") {
            const std::string f = v.get<std::string>();
            if (f == "csv")
                cfg.output.format = Format::csv;
            else if (f == "json")
                cfg.output.format = Format::json;
            else
                throw InvalidParameter("output.format", "expected csv|json");
        } else {
            throw InvalidParameter("output." + key, "unknown output key");
        }
    }

    void apply(const std::string& key, const json& v) {
        if (is_params_key(key)) {
            params[key] = to_number(key, v);
        } else if (key == "layer") {
            cfg.layer = layer_from_string(v.get<std::string>());
        } else if (key.rfind("sweep.", 0) == 0) {
            apply_sweep(key.substr(6), v);
        } else if (key.rfind("sim.", 0) == 0) {
            apply_sim(key.substr(4), v);
        } else if (key.rfind("output.", 0) == 0) {
            apply_output(key.substr(7), v);
        } else {
            throw InvalidParameter(key, "unknown configuration key");
        }
    }
};

}  // namespace

RunConfig load_run_config(const std::string& config_path,
                          const std::vector<std::string>& overrides) {
    Builder b;

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot open config file: " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        json j;
        try {
            j = json::parse(buf.str());
        } catch (const json::exception& e) {
            throw InvalidParameter("config", std::string("JSON parse failure: ") + e.what());
        }
        if (!j.is_object()) throw InvalidParameter("config", "expected a JSON object");
        for (const auto& [key, value] : j.items()) {
            if ((key == "sweep" || key == "sim" || key == "output") && value.is_object()) {
                for (const auto& [k2, v2] : value.items()) b.apply(key + "." + k2, v2);
            } else {
                b.apply(key, value);
            }
        }
    }

    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("--set", "expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        // Route strings to string-typed keys, numbers elsewhere.
        if (key == "layer" || key == "sweep.variable" || key == "sweep.scale" ||
            key == "sim.recoil_model" || key == "output.path" || key == "output.format" ||
            key == "sim.ld_order") {
            b.apply(key, json(value));
        } else {
            b.apply(key, json(parse_number(key, value)));
        }
    }

    b.cfg.params = resolve_params(b.params);

    if (b.cfg.sweep) {
        const SweepSpec& s = *b.cfg.sweep;
        if (s.variable.empty() || !is_params_key(s.variable))
            throw InvalidParameter("sweep.variable",
                                   "must name a parameter field, got '" + s.variable + "'");
        if (s.n_points < 1) throw InvalidParameter("sweep.n_points", "must be >= 1");
        if (s.log_scale && (s.start <= 0.0 || s.stop <= 0.0))
            throw InvalidParameter("sweep.scale", "log scale needs positive bounds");
    }
    if (b.cfg.sim.n_times < 2) throw InvalidParameter("sim.n_times", "must be >= 2");
    if (b.cfg.sim.n_traj < 1) throw InvalidParameter("sim.n_traj", "must be >= 1");
    return b.cfg;
}

std::vector<double> time_grid(const LambdaParams& p, const SimConfig& sim) {
    double t_end = sim.t_end;
    if (t_end < 0.0) {
        const double w = cooling_rate(p);
        if (w <= 0.0)
            throw InvalidParameter("sim.t_end",
                                   "no cooling at these parameters; set t_end explicitly");
        t_end = 11.0 / w;
    }
    if (t_end <= 0.0) throw InvalidParameter("sim.t_end", "must be > 0");
    std::vector<double> grid(static_cast<std::size_t>(sim.n_times));
    for (int i = 0; i < sim.n_times; ++i)
        grid[static_cast<std::size_t>(i)] = t_end * i / (sim.n_times - 1);
    return grid;
}

}  // namespace eitcool::cli
