// run_config.hpp — CLI run configuration: parameter set, layer selection,
// sweep and simulation settings, output targets. Loaded from a JSON config
// file with repeatable --set key=value overrides (flags win).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eitcool/params.hpp"
#include "eitcool/quantum.hpp"

namespace eitcool::cli {

enum class Layer { spectrum, rate, master, mc };
enum class Format { csv, json };

struct SweepSpec {
    std::string variable;
    double start = 0.0;
    double stop = 0.0;
    int n_points = 0;
    bool log_scale = false;
};

struct SimConfig {
    int n_max = 15;        // quantum-layer Fock truncation
    int rate_n_max = 60;   // rate-layer truncation
    LdOrder ld_order = LdOrder::second;
    RecoilModel recoil = RecoilModel::lamb_dicke_2nd;
    int n_traj = 500;
    std::uint64_t seed = 1;
    double t_end = -1.0;   // < 0: auto, 11 / W from the rate model
    int n_times = 61;
    double initial_n_mean = 2.0;
    double tail_tol = 1e-6;
    double eta_emission = -1.0;  // < 0: use params.eta
};

struct OutputConfig {
    std::string path;  // empty: subcommand default
    Format format = Format::csv;
};

struct RunConfig {
    LambdaParams params;
    Layer layer = Layer::rate;
    std::optional<SweepSpec> sweep;
    SimConfig sim;
    OutputConfig output;
};

// Parses the JSON config file (if any) and applies --set overrides. Both
// accept flat parameter keys (e.g. eta=0.2) and dotted section keys
// (sim.n_max=20, sweep.variable=delta_g, layer=mc, output.path=out.csv).
RunConfig load_run_config(const std::string& config_path,
                          const std::vector<std::string>& overrides);

// Grid helper shared by the cool/spectrum commands.
std::vector<double> time_grid(const LambdaParams& p, const SimConfig& sim);

}  // namespace eitcool::cli
