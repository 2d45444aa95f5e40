#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eitcool/config_io.hpp"

namespace eitcool {

namespace {

using FieldPtr = double LambdaParams::*;

const std::vector<std::pair<std::string, FieldPtr>>& field_table() {
    static const std::vector<std::pair<std::string, FieldPtr>> table = {
        {"gamma", &LambdaParams::gamma},     {"gamma_g", &LambdaParams::gamma_g},
        {"gamma_r", &LambdaParams::gamma_r}, {"omega_g", &LambdaParams::omega_g},
        {"omega_r", &LambdaParams::omega_r}, {"delta_g", &LambdaParams::delta_g},
        {"delta_r", &LambdaParams::delta_r}, {"nu", &LambdaParams::nu},
        {"eta", &LambdaParams::eta},         {"eta_g", &LambdaParams::eta_g},
        {"eta_r", &LambdaParams::eta_r},     {"alpha", &LambdaParams::alpha},
    };
    return table;
}

}  // namespace

LambdaParams resolve_params(const std::map<std::string, double>& given) {
    LambdaParams p;
    const auto has = [&](const char* k) { return given.count(k) > 0; };

    for (const auto& [key, value] : given) {
        bool known = false;
        for (const auto& [name, ptr] : field_table())
            if (key == name) {
                p.*ptr = value;
                known = true;
                break;
            }
        if (!known) throw InvalidParameter(key, "unknown parameter field");
    }

    if (has("gamma")) {
        if (!has("gamma_g") && !has("gamma_r")) {
            p.gamma_g = p.gamma / 2.0;
            p.gamma_r = p.gamma / 2.0;
        } else if (has("gamma_g") && !has("gamma_r")) {
            p.gamma_r = p.gamma - p.gamma_g;
        } else if (!has("gamma_g") && has("gamma_r")) {
            p.gamma_g = p.gamma - p.gamma_r;
        }
    } else if (has("gamma_g") || has("gamma_r")) {
        if (has("gamma_g") && has("gamma_r")) {
            p.gamma = p.gamma_g + p.gamma_r;
        } else if (has("gamma_g")) {
            p.gamma_r = p.gamma - p.gamma_g;
        } else {
            p.gamma_g = p.gamma - p.gamma_r;
        }
    }

    if (has("eta")) {
        if (!has("eta_g") && !has("eta_r")) {
            p.eta_g = p.eta;
            p.eta_r = 0.0;
        } else if (has("eta_g") && !has("eta_r")) {
            p.eta_r = p.eta_g - p.eta;
        } else if (!has("eta_g") && has("eta_r")) {
            p.eta_g = p.eta_r + p.eta;
        }
    } else if (has("eta_g") || has("eta_r")) {
        if (!has("eta_g")) p.eta_g = 0.0;
        if (!has("eta_r")) p.eta_r = 0.0;
        p.eta = std::abs(p.eta_g - p.eta_r);
    }
    return p;
}

LambdaParams params_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter("config", std::string("JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameter("config", "expected a JSON object");
    std::map<std::string, double> given;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number())
            throw InvalidParameter(key, "expected a numeric value");
        given[key] = value.get<double>();
    }
    return resolve_params(given);
}

LambdaParams params_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open parameter file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return params_from_json(buffer.str());
}

std::string params_to_json(const LambdaParams& p) {
    nlohmann::ordered_json j;
    for (const auto& [name, ptr] : field_table()) j[name] = p.*ptr;
    return j.dump(2);
}

}  // namespace eitcool
