// eitcool — simulation toolkit for ground-state cooling of a trapped ion by
// electromagnetically induced transparency. Subcommands cover the absorption
// spectrum of the driven Lambda system, rate-equation sweeps, cooling runs at
// three model levels (rate equation, Lindblad master equation, quantum-jump
// Monte Carlo), and the comparison against conventional sideband cooling.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eitcool/config_io.hpp"
#include "eitcool/quantum.hpp"
#include "eitcool/rate_model.hpp"
#include "eitcool/spectrum.hpp"
#include "run_config.hpp"
#include "table.hpp"

namespace {

using namespace eitcool;
using namespace eitcool::cli;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_path;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON configuration file");
    cmd->add_option("--set", args.overrides, "key=value override (repeatable; wins over --config)")
        ->take_all();
    cmd->add_option("--output", args.output_path, "output file path");
    cmd->add_option("--format", args.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", args.seed, "random seed for trajectory runs")
        ->each([&args](const std::string&) { args.seed_given = true; });
}

RunConfig make_config(const CommonArgs& args) {
    RunConfig cfg = load_run_config(args.config_path, args.overrides);
    if (!args.output_path.empty()) cfg.output.path = args.output_path;
    if (args.format == "csv") cfg.output.format = Format::csv;
    if (args.format == "json") cfg.output.format = Format::json;
    if (args.seed_given) cfg.sim.seed = args.seed;
    return cfg;
}

std::string with_suffix(const std::string& base, const std::string& suffix,
                        const std::string& ext) {
    const auto dot = base.rfind('.');
    const auto slash = base.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + suffix + ext;
    return base.substr(0, dot) + suffix + ext;
}

void echo_warnings(const LambdaParams& p, double initial_n_mean) {
    for (const auto& w : validate(p, initial_n_mean))
        std::cerr << "warning: " << w << "\n";
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& cfg) {
    echo_warnings(cfg.params, cfg.sim.initial_n_mean);
    double lo = cfg.params.delta_r - cfg.params.gamma;
    double hi = cfg.params.delta_r + cfg.params.gamma;
    int n = 801;
    if (cfg.sweep) {
        if (cfg.sweep->variable != "delta_g")
            throw InvalidParameter("sweep.variable",
                                   "spectrum scans sweep delta_g; got '" +
                                       cfg.sweep->variable + "'");
        lo = cfg.sweep->start;
        hi = cfg.sweep->stop;
        n = cfg.sweep->n_points;
    }
    const auto scan = spectrum_scan(cfg.params, lo, hi, n);

    Table t;
    t.columns = {"delta_g", "scatter_rate", "rho_ee", "rho_gg", "rho_rr"};
    std::size_t imin = 0;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const auto& pt = scan[i];
        t.add_row({Table::cell(pt.delta_g), Table::cell(pt.scatter_rate),
                   Table::cell(pt.rho_ee), Table::cell(pt.rho_gg),
                   Table::cell(pt.rho_rr)});
        if (pt.scatter_rate < scan[imin].scatter_rate) imin = i;
    }
    const std::string path =
        cfg.output.path.empty() ? std::string("spectrum.csv") : cfg.output.path;
    t.write_file(path, cfg.output.format == Format::json);

    std::cout << "dark resonance at delta_g = " << Table::cell(scan[imin].delta_g)
              << " (scatter rate " << Table::cell(scan[imin].scatter_rate) << ")\n";
    if (std::abs(cfg.params.delta_g - cfg.params.delta_r) <
        1e-12 * std::max(1.0, std::abs(cfg.params.delta_r))) {
        const auto w = sideband_weights(cfg.params);
        std::cout << "sideband weights (carrier, red, blue) = " << Table::cell(w.carrier)
                  << ", " << Table::cell(w.red) << ", " << Table::cell(w.blue) << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

// --------------------------------------------------------------- rate-sweep

int cmd_rate_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw InvalidParameter("sweep", "rate-sweep needs a sweep section");
    const SweepSpec& s = *cfg.sweep;

    Table t;
    t.columns = {"sweep_var", "a_plus", "a_minus", "n_s", "w", "status"};
    double best_ns = std::numeric_limits<double>::infinity();
    double best_var = 0.0;
    for (int i = 0; i < s.n_points; ++i) {
        const double frac =
            s.n_points == 1 ? 0.0 : static_cast<double>(i) / (s.n_points - 1);
        const double value = s.log_scale
                                 ? s.start * std::pow(s.stop / s.start, frac)
                                 : s.start + (s.stop - s.start) * frac;
        LambdaParams p = cfg.params;
        if (s.variable == "gamma") p.gamma = value;
        else if (s.variable == "gamma_g") p.gamma_g = value;
        else if (s.variable == "gamma_r") p.gamma_r = value;
        else if (s.variable == "omega_g") p.omega_g = value;
        else if (s.variable == "omega_r") p.omega_r = value;
        else if (s.variable == "nu") p.nu = value;
        else if (s.variable == "eta") { p.eta = value; p.eta_g = value; p.eta_r = 0.0; }
        else if (s.variable == "eta_g") p.eta_g = value;
        else if (s.variable == "eta_r") p.eta_r = value;
        else if (s.variable == "alpha") p.alpha = value;
        else if (s.variable == "delta_g" || s.variable == "delta_r") {
            // The rate model lives on the two-photon-resonance line, so a
            // detuning sweep moves the common detuning.
            p.delta_g = value;
            p.delta_r = value;
        }

        const auto c = rate_coefficients(p);
        const double w = p.eta * p.eta * (c.a_minus - c.a_plus);
        std::string ns_cell, status = "ok";
        try {
            const double ns = steady_state_mean_n(p);
            ns_cell = Table::cell(ns);
            if (ns < best_ns) {
                best_ns = ns;
                best_var = value;
            }
        } catch (const DivergenceError&) {
            status = c.a_plus >= c.a_minus && w < 0.0 ? "heating" : "pole";
            if (c.a_plus == c.a_minus) status = "pole";
        }
        t.add_row({Table::cell(value), Table::cell(c.a_plus), Table::cell(c.a_minus),
                   ns_cell, Table::cell(w), status});
    }
    const std::string path =
        cfg.output.path.empty() ? std::string("rate_sweep.csv") : cfg.output.path;
    t.write_file(path, cfg.output.format == Format::json);
    if (std::isfinite(best_ns))
        std::cout << "minimum n_s = " << Table::cell(best_ns) << " at " << s.variable
                  << " = " << Table::cell(best_var) << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

// --------------------------------------------------------------------- cool

void print_fit_report(const char* label, std::span<const double> t,
                      std::span<const double> n, const LambdaParams& p) {
    const FitResult f = fit_cooling(t, n);
    std::cout << label << " fit:   W = " << Table::cell(f.w)
              << "  n_s = " << Table::cell(f.n_s) << "  n0 = " << Table::cell(f.n0)
              << (f.converged ? "" : "  [fit unreliable]") << "\n";
    try {
        std::cout << "rate model: W = " << Table::cell(cooling_rate(p))
                  << "  n_s = " << Table::cell(steady_state_mean_n(p)) << "\n";
    } catch (const DivergenceError& e) {
        std::cout << "rate model: " << e.what() << "\n";
    }
}

int cmd_cool(const RunConfig& cfg) {
    if (cfg.layer == Layer::spectrum)
        throw InvalidParameter("layer", "cool runs need layer rate|master|mc");
    echo_warnings(cfg.params, cfg.sim.initial_n_mean);
    const std::vector<double> grid = time_grid(cfg.params, cfg.sim);
    const std::string base =
        cfg.output.path.empty() ? std::string("cool.csv") : cfg.output.path;
    const bool json = cfg.output.format == Format::json;
    const std::string pn_path = with_suffix(base, "_pn", json ? ".json" : ".csv");

    Table series, dist;
    if (cfg.layer == Layer::rate) {
        const auto p0 =
            PopulationDistribution::thermal(cfg.sim.initial_n_mean, cfg.sim.rate_n_max);
        EvolveOptions opts;
        opts.tail_tol = cfg.sim.tail_tol;
        const auto states = evolve_populations(cfg.params, p0, grid, opts);
        std::vector<double> n_of_t(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) n_of_t[i] = states[i].mean_n();

        series.columns = {"t", "n_mean"};
        for (std::size_t i = 0; i < grid.size(); ++i)
            series.add_row({Table::cell(grid[i]), Table::cell(n_of_t[i])});
        dist.columns = {"n", "p"};
        const auto& fin = states.back();
        for (int n = 0; n <= fin.n_max(); ++n)
            dist.add_row({Table::cell(n), Table::cell(fin.p[static_cast<std::size_t>(n)])});
        series.write_file(base, json);
        dist.write_file(pn_path, json);
        std::cout << "final n_mean = " << Table::cell(n_of_t.back())
                  << "  P(0) = " << Table::cell(fin.p[0]) << "\n";
        print_fit_report("rate layer", grid, n_of_t, cfg.params);
    } else if (cfg.layer == Layer::master) {
        SimOptions opts{cfg.sim.n_max, cfg.sim.ld_order, cfg.sim.recoil,
                        cfg.sim.eta_emission, cfg.sim.tail_tol};
        const auto rho0 =
            DensityOperator::thermal_g(cfg.sim.initial_n_mean, cfg.sim.n_max);
        const MasterResult r = evolve_master(cfg.params, rho0, grid, opts);
        series.columns = {"t", "n_mean", "pop_g", "pop_r", "pop_e"};
        for (std::size_t i = 0; i < grid.size(); ++i)
            series.add_row({Table::cell(grid[i]), Table::cell(r.n_mean[i]),
                            Table::cell(r.pops[i][0]), Table::cell(r.pops[i][1]),
                            Table::cell(r.pops[i][2])});
        dist.columns = {"n", "p_final"};
        for (std::size_t n = 0; n < r.final_pn.p.size(); ++n)
            dist.add_row({Table::cell(static_cast<double>(n)), Table::cell(r.final_pn.p[n])});
        series.write_file(base, json);
        dist.write_file(pn_path, json);
        std::cout << "final n_mean = " << Table::cell(r.n_mean.back())
                  << "  P(0) = " << Table::cell(r.final_pn.p[0])
                  << "  max trace error = " << Table::cell(r.max_trace_error) << "\n";
        print_fit_report("master layer", grid, r.n_mean, cfg.params);
    } else {
        SimOptions opts{cfg.sim.n_max, cfg.sim.ld_order, cfg.sim.recoil,
                        cfg.sim.eta_emission, cfg.sim.tail_tol};
        const EnsembleResult r =
            run_trajectories(cfg.params, ThermalInit{cfg.sim.initial_n_mean}, grid,
                             cfg.sim.n_traj, cfg.sim.seed, opts);
        series.columns = {"t", "n_mean", "n_stderr", "pop_g", "pop_r", "pop_e"};
        for (std::size_t i = 0; i < grid.size(); ++i)
            series.add_row({Table::cell(grid[i]), Table::cell(r.n_mean[i]),
                            Table::cell(r.n_mean_stderr[i]), Table::cell(r.pops[i][0]),
                            Table::cell(r.pops[i][1]), Table::cell(r.pops[i][2])});
        dist.columns = {"n", "p_final"};
        for (std::size_t n = 0; n < r.final_pn.p.size(); ++n)
            dist.add_row({Table::cell(static_cast<double>(n)), Table::cell(r.final_pn.p[n])});
        series.write_file(base, json);
        dist.write_file(pn_path, json);

        nlohmann::ordered_json meta;
        meta["seed"] = r.seed;
        meta["n_traj"] = r.n_traj;
        meta["total_jumps"] = r.total_jumps;
        meta["params"] = nlohmann::ordered_json::parse(params_to_json(cfg.params));
        meta["sim"] = {{"n_max", cfg.sim.n_max},
                       {"n_times", cfg.sim.n_times},
                       {"initial_n_mean", cfg.sim.initial_n_mean}};
        meta["timestamp"] =
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        const std::string meta_path = with_suffix(base, "_meta", ".json");
        std::ofstream mo(meta_path);
        if (!mo) throw IoError("cannot open output file: " + meta_path);
        mo << meta.dump(2) << "\n";

        std::cout << "final n_mean = " << Table::cell(r.n_mean.back()) << " +- "
                  << Table::cell(r.n_mean_stderr.back())
                  << "  P(0) = " << Table::cell(r.final_pn.p[0]) << "\n";
        print_fit_report("mc layer", grid, r.n_mean, cfg.params);
    }
    std::cout << "wrote " << base << "\n";
    return 0;
}

// --------------------------------------------------------------- compare-sc

int cmd_compare_sc(const RunConfig& cfg, double alpha, double phi_deg) {
    const double phi = phi_deg * M_PI / 180.0;
    const LambdaParams& p = cfg.params;
    const auto eit = rate_coefficients(p);
    const auto matched = sc_matched(p);
    const auto sc = sc_rate_coefficients(p, matched.gamma_sc, matched.omega_sc, phi, alpha);

    const double ns_eit = eit.a_plus / (eit.a_minus - eit.a_plus);
    const double ns_sc_direct = sc.a_plus / (sc.a_minus - sc.a_plus);
    const double carrier_term = sc.a_plus - eit.a_plus;
    const double ns_sc_additive = ns_eit + carrier_term / (eit.a_minus - eit.a_plus);
    const double identity_err =
        std::abs(ns_sc_direct - ns_sc_additive) / std::max(ns_sc_direct, 1e-300);
    if (identity_err > 1e-12)
        throw DivergenceError("internal identity check failed: " +
                              std::to_string(identity_err));

    std::cout << "EIT coefficients:      A+ = " << Table::cell(eit.a_plus)
              << "  A- = " << Table::cell(eit.a_minus) << "\n"
              << "sideband coefficients: A+ = " << Table::cell(sc.a_plus)
              << "  A- = " << Table::cell(sc.a_minus)
              << "  (gamma_sc = " << Table::cell(matched.gamma_sc)
              << ", omega_sc = " << Table::cell(matched.omega_sc) << ")\n"
              << "steady states:         EIT n_s = " << Table::cell(ns_eit)
              << "  SC n_s = " << Table::cell(ns_sc_direct) << "\n"
              << "narrow-line ratio:     n_EIT/n_SC = "
              << Table::cell(eit_vs_sc_ratio(alpha, phi)) << "\n"
              << "identity check:        " << Table::cell(identity_err) << "\n";
    return 0;
}

// ----------------------------------------------------------------- validate

int cmd_validate(const RunConfig& cfg) {
    const auto warnings = validate(cfg.params, cfg.sim.initial_n_mean);
    std::cout << params_to_json(cfg.params) << "\n";
    for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
    if (warnings.empty()) std::cout << "parameters valid, no warnings\n";
    return 0;
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("EITCOOL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT ground-state cooling simulator"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, sweep_args, cool_args, sc_args, validate_args;
    double alpha = 0.4;
    double phi_deg = 54.735610317245346;  // cos^2(phi) = 1/3

    add_common(app.add_subcommand("spectrum",
                                  "scan the cooling-laser absorption spectrum"),
               spectrum_args);
    add_common(app.add_subcommand("rate-sweep",
                                  "sweep rate-equation coefficients and the cooling limit"),
               sweep_args);
    add_common(app.add_subcommand("cool", "run a cooling simulation (rate|master|mc)"),
               cool_args);
    auto* sc_cmd = app.add_subcommand("compare-sc",
                                      "compare against conventional sideband cooling");
    add_common(sc_cmd, sc_args);
    sc_cmd->add_option("--alpha", alpha, "second angular emission moment");
    sc_cmd->add_option("--phi-deg", phi_deg, "angle between beam and motional axis");
    add_common(app.add_subcommand("validate", "check a parameter set"), validate_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    apply_thread_cap();
    try {
        if (app.got_subcommand("spectrum")) return cmd_spectrum(make_config(spectrum_args));
        if (app.got_subcommand("rate-sweep")) return cmd_rate_sweep(make_config(sweep_args));
        if (app.got_subcommand("cool")) return cmd_cool(make_config(cool_args));
        if (app.got_subcommand("compare-sc"))
            return cmd_compare_sc(make_config(sc_args), alpha, phi_deg);
        if (app.got_subcommand("validate")) return cmd_validate(make_config(validate_args));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
