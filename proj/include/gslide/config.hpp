// config.hpp — run configuration: strict JSON schema with Table-defaults,
// scenario construction, round-trip serialization and the run manifest.

#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gslide/experiments.hpp"

namespace gslide {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct AxesConfig {
    std::vector<double> suppression{0.5, 0.9, 0.99};
    std::vector<double> gamma_r_ev{1e-8, 1e-6, 1e-4, 1e-2};
    int n_min = 2;
    int n_max = 6;
    std::vector<double> tau_l_s{2.5e-10, 2.5e-9, 2.5e-8};
    std::vector<double> r_nn_m{8e-10, 1e-9, 1.2e-9};
    std::vector<double> temps_k{300.0};
    std::vector<double> theta_eq_rad;   // empty: filled at run time
    std::vector<double> theta_zen_rad;  // empty: filled at run time

    bool operator==(const AxesConfig&) const = default;
};

struct RunConfig {
    // ring
    int n_sites = 0;  // required
    std::string mode = "guide_slide";
    double omega_a_ev = 1.8;
    double tau_l_s = 2.5e-9;
    double r_nn_m = 1e-9;
    double theta_eq_rad = M_PI / 2.0;
    double theta_zen_rad = M_PI / 4.0;
    // trap
    bool trap_enabled = true;
    std::string trap_mode = "incoherent";
    double gamma_x_ev = 1e-2;
    double c_x_ev = 1e-4;
    // environment
    double t_opt_k = 5800.0;
    double t_vib_k = 300.0;
    double suppression = 0.99;
    bool bandgap = true;
    std::string phonon_model = "ohmic";
    double phonon_multiplier = 1e3;
    double lambda_ev = 5e-3;
    double omega_crit_ev = 90e-3;
    // heat engine
    std::string reinit = "ladder";
    double gamma_r_ev = 1e-2;
    LoadScan load_scan;
    // ensembles
    DisorderSpec disorder;
    int trials = 100;
    // studies
    AxesConfig axes;
    bool optimize_angles = false;
    int angle_grid = 16;
    // execution
    std::uint64_t seed = 1;
    int workers = 0;  // 0: environment variable or 1
    std::string out_dir = "results";
    // solver tolerance overrides
    SteadyStateOptions solver;

    bool operator==(const RunConfig& o) const {
        auto scan_eq = [](const LoadScan& a, const LoadScan& b) {
            return a.gamma_min == b.gamma_min && a.gamma_max == b.gamma_max &&
                   a.points == b.points && a.refine_rel == b.refine_rel;
        };
        auto dis_eq = [](const DisorderSpec& a, const DisorderSpec& b) {
            return a.fraction == b.fraction && a.seed == b.seed && a.omega_a == b.omega_a &&
                   a.tau_l == b.tau_l && a.positions == b.positions && a.angles == b.angles;
        };
        auto sol_eq = [](const SteadyStateOptions& a, const SteadyStateOptions& b) {
            return a.kernel_tol == b.kernel_tol && a.residual_rel_tol == b.residual_rel_tol &&
                   a.trace_tol == b.trace_tol && a.herm_tol == b.herm_tol &&
                   a.negativity_tol == b.negativity_tol &&
                   a.condition_limit == b.condition_limit &&
                   a.force_degenerate == b.force_degenerate;
        };
        return n_sites == o.n_sites && mode == o.mode && omega_a_ev == o.omega_a_ev &&
               tau_l_s == o.tau_l_s && r_nn_m == o.r_nn_m && theta_eq_rad == o.theta_eq_rad &&
               theta_zen_rad == o.theta_zen_rad && trap_enabled == o.trap_enabled &&
               trap_mode == o.trap_mode && gamma_x_ev == o.gamma_x_ev && c_x_ev == o.c_x_ev &&
               t_opt_k == o.t_opt_k && t_vib_k == o.t_vib_k && suppression == o.suppression &&
               bandgap == o.bandgap && phonon_model == o.phonon_model &&
               phonon_multiplier == o.phonon_multiplier && lambda_ev == o.lambda_ev &&
               omega_crit_ev == o.omega_crit_ev && reinit == o.reinit &&
               gamma_r_ev == o.gamma_r_ev && scan_eq(load_scan, o.load_scan) &&
               dis_eq(disorder, o.disorder) && trials == o.trials && axes == o.axes &&
               optimize_angles == o.optimize_angles && angle_grid == o.angle_grid &&
               seed == o.seed && workers == o.workers && out_dir == o.out_dir &&
               sol_eq(solver, o.solver);
    }
};

namespace detail {

inline void require_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& scope) {
    if (!j.is_object()) throw ConfigError("config: " + scope + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + scope + key + "'");
}

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

inline void read_choice(const Json& j, const char* key, std::string& out,
                        const std::set<std::string>& allowed) {
    read_field(j, key, out);
    if (!allowed.count(out))
        throw ConfigError(std::string("config: field '") + key + "' has invalid value '" +
                          out + "'");
}

}  // namespace detail

inline RunConfig parse_config_json(const Json& j) {
    detail::require_keys(
        j,
        {"n_sites",      "mode",          "omega_a_ev",      "tau_l_s",
         "r_nn_m",       "theta_eq_rad",  "theta_zen_rad",   "trap",
         "environment",  "reinit",        "gamma_r_ev",      "load_scan",
         "disorder",     "trials",        "axes",            "optimize_angles",
         "angle_grid",   "seed",          "workers",         "out_dir",
         "solver"},
        "");
    RunConfig c;
    if (!j.contains("n_sites"))
        throw ConfigError("config: required field 'n_sites' is missing");
    detail::read_field(j, "n_sites", c.n_sites);
    if (c.n_sites < 1) throw ConfigError("config: 'n_sites' must be >= 1");
    detail::read_choice(j, "mode", c.mode, {"guide_slide", "parallel"});
    detail::read_field(j, "omega_a_ev", c.omega_a_ev);
    detail::read_field(j, "tau_l_s", c.tau_l_s);
    detail::read_field(j, "r_nn_m", c.r_nn_m);
    detail::read_field(j, "theta_eq_rad", c.theta_eq_rad);
    detail::read_field(j, "theta_zen_rad", c.theta_zen_rad);

    if (j.contains("trap")) {
        const Json& t = j.at("trap");
        detail::require_keys(t, {"enabled", "mode", "gamma_x_ev", "c_x_ev"}, "trap.");
        detail::read_field(t, "enabled", c.trap_enabled);
        detail::read_choice(t, "mode", c.trap_mode, {"incoherent", "coherent"});
        detail::read_field(t, "gamma_x_ev", c.gamma_x_ev);
        detail::read_field(t, "c_x_ev", c.c_x_ev);
    }
    if (j.contains("environment")) {
        const Json& e = j.at("environment");
        detail::require_keys(e,
                             {"t_opt_k", "t_vib_k", "suppression", "bandgap", "phonon_model",
                              "phonon_multiplier", "lambda_ev", "omega_crit_ev"},
                             "environment.");
        detail::read_field(e, "t_opt_k", c.t_opt_k);
        detail::read_field(e, "t_vib_k", c.t_vib_k);
        detail::read_field(e, "suppression", c.suppression);
        detail::read_field(e, "bandgap", c.bandgap);
        detail::read_choice(e, "phonon_model", c.phonon_model, {"ohmic", "superohmic"});
        detail::read_field(e, "phonon_multiplier", c.phonon_multiplier);
        detail::read_field(e, "lambda_ev", c.lambda_ev);
        detail::read_field(e, "omega_crit_ev", c.omega_crit_ev);
    }
    detail::read_choice(j, "reinit", c.reinit, {"ladder", "site", "none"});
    detail::read_field(j, "gamma_r_ev", c.gamma_r_ev);
    if (j.contains("load_scan")) {
        const Json& s = j.at("load_scan");
        detail::require_keys(s, {"gamma_min_ev", "gamma_max_ev", "points", "refine_rel"},
                             "load_scan.");
        detail::read_field(s, "gamma_min_ev", c.load_scan.gamma_min);
        detail::read_field(s, "gamma_max_ev", c.load_scan.gamma_max);
        detail::read_field(s, "points", c.load_scan.points);
        detail::read_field(s, "refine_rel", c.load_scan.refine_rel);
    }
    if (j.contains("disorder")) {
        const Json& d = j.at("disorder");
        detail::require_keys(d, {"fraction", "targets"}, "disorder.");
        detail::read_field(d, "fraction", c.disorder.fraction);
        if (c.disorder.fraction < 0.0 || c.disorder.fraction >= 1.0)
            throw ConfigError("config: 'disorder.fraction' must be in [0, 1)");
        if (d.contains("targets")) {
            std::vector<std::string> targets;
            detail::read_field(d, "targets", targets);
            c.disorder.omega_a = c.disorder.tau_l = false;
            c.disorder.positions = c.disorder.angles = false;
            for (const std::string& t : targets) {
                if (t == "omega_a")
                    c.disorder.omega_a = true;
                else if (t == "tau_l")
                    c.disorder.tau_l = true;
                else if (t == "positions")
                    c.disorder.positions = true;
                else if (t == "angles")
                    c.disorder.angles = true;
                else
                    throw ConfigError("config: unknown disorder target '" + t + "'");
            }
        }
    }
    detail::read_field(j, "trials", c.trials);
    if (c.trials < 1) throw ConfigError("config: 'trials' must be >= 1");
    if (j.contains("axes")) {
        const Json& a = j.at("axes");
        detail::require_keys(a,
                             {"suppression", "gamma_r_ev", "n_min", "n_max", "tau_l_s",
                              "r_nn_m", "temps_k", "theta_eq_rad", "theta_zen_rad"},
                             "axes.");
        detail::read_field(a, "suppression", c.axes.suppression);
        detail::read_field(a, "gamma_r_ev", c.axes.gamma_r_ev);
        detail::read_field(a, "n_min", c.axes.n_min);
        detail::read_field(a, "n_max", c.axes.n_max);
        detail::read_field(a, "tau_l_s", c.axes.tau_l_s);
        detail::read_field(a, "r_nn_m", c.axes.r_nn_m);
        detail::read_field(a, "temps_k", c.axes.temps_k);
        detail::read_field(a, "theta_eq_rad", c.axes.theta_eq_rad);
        detail::read_field(a, "theta_zen_rad", c.axes.theta_zen_rad);
    }
    detail::read_field(j, "optimize_angles", c.optimize_angles);
    detail::read_field(j, "angle_grid", c.angle_grid);
    detail::read_field(j, "seed", c.seed);
    detail::read_field(j, "workers", c.workers);
    detail::read_field(j, "out_dir", c.out_dir);
    if (j.contains("solver")) {
        const Json& s = j.at("solver");
        detail::require_keys(s,
                             {"kernel_tol", "residual_rel_tol", "trace_tol", "herm_tol",
                              "negativity_tol", "condition_limit", "force_degenerate"},
                             "solver.");
        detail::read_field(s, "kernel_tol", c.solver.kernel_tol);
        detail::read_field(s, "residual_rel_tol", c.solver.residual_rel_tol);
        detail::read_field(s, "trace_tol", c.solver.trace_tol);
        detail::read_field(s, "herm_tol", c.solver.herm_tol);
        detail::read_field(s, "negativity_tol", c.solver.negativity_tol);
        detail::read_field(s, "condition_limit", c.solver.condition_limit);
        detail::read_field(s, "force_degenerate", c.solver.force_degenerate);
    }
    return c;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError("config: invalid JSON in '" + path + "': " + e.what());
    }
    return parse_config_json(j);
}

inline Json serialize_config(const RunConfig& c) {
    Json j;
    j["n_sites"] = c.n_sites;
    j["mode"] = c.mode;
    j["omega_a_ev"] = c.omega_a_ev;
    j["tau_l_s"] = c.tau_l_s;
    j["r_nn_m"] = c.r_nn_m;
    j["theta_eq_rad"] = c.theta_eq_rad;
    j["theta_zen_rad"] = c.theta_zen_rad;
    j["trap"] = {{"enabled", c.trap_enabled},
                 {"mode", c.trap_mode},
                 {"gamma_x_ev", c.gamma_x_ev},
                 {"c_x_ev", c.c_x_ev}};
    j["environment"] = {{"t_opt_k", c.t_opt_k},
                        {"t_vib_k", c.t_vib_k},
                        {"suppression", c.suppression},
                        {"bandgap", c.bandgap},
                        {"phonon_model", c.phonon_model},
                        {"phonon_multiplier", c.phonon_multiplier},
                        {"lambda_ev", c.lambda_ev},
                        {"omega_crit_ev", c.omega_crit_ev}};
    j["reinit"] = c.reinit;
    j["gamma_r_ev"] = c.gamma_r_ev;
    j["load_scan"] = {{"gamma_min_ev", c.load_scan.gamma_min},
                      {"gamma_max_ev", c.load_scan.gamma_max},
                      {"points", c.load_scan.points},
                      {"refine_rel", c.load_scan.refine_rel}};
    std::vector<std::string> targets;
    if (c.disorder.omega_a) targets.push_back("omega_a");
    if (c.disorder.tau_l) targets.push_back("tau_l");
    if (c.disorder.positions) targets.push_back("positions");
    if (c.disorder.angles) targets.push_back("angles");
    j["disorder"] = {{"fraction", c.disorder.fraction}, {"targets", targets}};
    j["trials"] = c.trials;
    j["axes"] = {{"suppression", c.axes.suppression},
                 {"gamma_r_ev", c.axes.gamma_r_ev},
                 {"n_min", c.axes.n_min},
                 {"n_max", c.axes.n_max},
                 {"tau_l_s", c.axes.tau_l_s},
                 {"r_nn_m", c.axes.r_nn_m},
                 {"temps_k", c.axes.temps_k},
                 {"theta_eq_rad", c.axes.theta_eq_rad},
                 {"theta_zen_rad", c.axes.theta_zen_rad}};
    j["optimize_angles"] = c.optimize_angles;
    j["angle_grid"] = c.angle_grid;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir;
    j["solver"] = {{"kernel_tol", c.solver.kernel_tol},
                   {"residual_rel_tol", c.solver.residual_rel_tol},
                   {"trace_tol", c.solver.trace_tol},
                   {"herm_tol", c.solver.herm_tol},
                   {"negativity_tol", c.solver.negativity_tol},
                   {"condition_limit", c.solver.condition_limit},
                   {"force_degenerate", c.solver.force_degenerate}};
    return j;
}

inline Scenario to_scenario(const RunConfig& c) {
    Scenario sc;
    std::optional<TrapSpec> trap;
    if (c.trap_enabled) {
        TrapSpec t;
        t.mode = c.trap_mode == "coherent" ? TrapMode::coherent : TrapMode::incoherent;
        t.gamma_x = c.gamma_x_ev;
        t.c_x = c.c_x_ev;
        trap = t;
    }
    sc.ring = make_ring(c.n_sites, c.omega_a_ev, c.tau_l_s, c.r_nn_m, c.theta_eq_rad,
                        c.theta_zen_rad, trap);
    sc.mode = c.mode == "parallel" ? RingMode::parallel : RingMode::guide_slide;
    sc.env.t_opt = c.t_opt_k;
    sc.env.t_vib = c.t_vib_k;
    sc.env.suppression = c.suppression;
    sc.env.bandgap = c.bandgap;
    sc.env.phonon_model =
        c.phonon_model == "superohmic" ? PhononModel::superohmic : PhononModel::ohmic;
    sc.env.phonon_multiplier = c.phonon_multiplier;
    sc.env.lambda = c.lambda_ev;
    sc.env.omega_crit = c.omega_crit_ev;
    sc.reinit = c.reinit == "site" ? ReinitScheme::site
                : c.reinit == "none" ? ReinitScheme::none
                                     : ReinitScheme::ladder;
    sc.gamma_r = c.gamma_r_ev;
    return sc;
}

// FNV-1a over the canonical serialized form: stable artifact fingerprint.
inline std::uint64_t config_hash(const RunConfig& c) {
    const std::string s = serialize_config(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace gslide
