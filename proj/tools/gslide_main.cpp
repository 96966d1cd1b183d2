// gslide — steady-state photocell studies for guide-slide absorber rings.
//
// Subcommands: solve, grid, scaling, phasemap, spectrum, ensemble, angles.
// Each run writes <subcommand>.csv, <subcommand>.svg and manifest.json into
// the output directory; failures write error.json and exit nonzero.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gslide/config.hpp"
#include "gslide/csv.hpp"
#include "gslide/svg.hpp"

namespace {

using namespace gslide;

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    std::optional<std::string> n_range;
    std::optional<std::vector<double>> suppression;
    std::optional<std::vector<double>> gamma_r;
    std::optional<std::vector<double>> temps;
};

int resolve_workers(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("GSLIDE_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

void apply_overrides(RunConfig& cfg, const CliOverrides& cli) {
    if (cli.seed) cfg.seed = *cli.seed;
    if (cli.workers) cfg.workers = *cli.workers;
    if (cli.out_dir) cfg.out_dir = *cli.out_dir;
    if (cli.suppression) cfg.axes.suppression = *cli.suppression;
    if (cli.gamma_r) cfg.axes.gamma_r_ev = *cli.gamma_r;
    if (cli.temps) cfg.axes.temps_k = *cli.temps;
    if (cli.n_range) {
        const std::string& s = *cli.n_range;
        const auto dots = s.find("..");
        try {
            if (dots == std::string::npos) {
                cfg.axes.n_min = cfg.axes.n_max = std::stoi(s);
            } else {
                cfg.axes.n_min = std::stoi(s.substr(0, dots));
                cfg.axes.n_max = std::stoi(s.substr(dots + 2));
            }
        } catch (const std::exception&) {
            throw ConfigError("cli: --n expects N or MIN..MAX, got '" + s + "'");
        }
        if (cfg.axes.n_min < 2 || cfg.axes.n_max < cfg.axes.n_min)
            throw ConfigError("cli: --n range must satisfy 2 <= min <= max");
    }
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << body;
}

void write_manifest(const std::filesystem::path& dir, const std::string& subcommand,
                    const RunConfig& cfg, int workers, double wall_s,
                    const std::vector<std::string>& artifacts, const SweepResult& result) {
    Json m;
    m["subcommand"] = subcommand;
    m["config_hash"] = hash_hex(config_hash(cfg));
    m["seed"] = cfg.seed;
    m["workers"] = workers;
    m["wall_time_s"] = wall_s;
    m["versions"] = {
        {"gslide", "1.0.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"cli11", CLI11_VERSION}};
    m["artifacts"] = artifacts;
    m["config"] = serialize_config(cfg);
    Json stats = Json::object();
    for (const auto& [k, v] : result.meta) stats[k] = v;
    m["statistics"] = stats;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::string csv_string(const SweepResult& result) {
    std::ostringstream out;
    write_csv(out, result);
    return out.str();
}

// Unique sorted values of one CSV column, for heatmap axes.
std::vector<double> axis_values(const SweepResult& r, int col) {
    std::vector<double> v;
    for (const auto& row : r.rows) v.push_back(row[col]);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string heatmap_from(const SweepResult& r, int x_col, int y_col, int v_col,
                         const std::string& x_label, const std::string& y_label,
                         const std::string& title,
                         const std::function<bool(const std::vector<double>&)>& keep) {
    std::vector<double> xs, ys;
    std::vector<std::vector<double>> grid;
    {
        SweepResult kept;
        for (const auto& row : r.rows)
            if (keep(row)) kept.rows.push_back(row);
        if (kept.rows.empty()) throw std::runtime_error("plot: empty result set");
        xs = axis_values(kept, x_col);
        ys = axis_values(kept, y_col);
        grid.assign(ys.size(), std::vector<double>(xs.size(), 0.0));
        for (const auto& row : kept.rows) {
            const auto ix = std::lower_bound(xs.begin(), xs.end(), row[x_col]) - xs.begin();
            const auto iy = std::lower_bound(ys.begin(), ys.end(), row[y_col]) - ys.begin();
            grid[iy][ix] = row[v_col];
        }
    }
    return svg_heatmap(xs, ys, grid, x_label, y_label, title);
}

std::string render_plot(const std::string& sub, const SweepResult& r,
                        const RunConfig& cfg) {
    if (r.rows.empty()) throw std::runtime_error("plot: empty result set");
    auto all = [](const std::vector<double>&) { return true; };
    if (sub == "solve") {
        const auto& row = r.rows.front();
        return svg_grouped_bars({"steady state"}, {"P_in", "P_out", "P_net"},
                                {{row[4], row[3], row[5]}}, "optimized working point (W)");
    }
    if (sub == "grid")
        return heatmap_from(r, 1, 0, 7, "gamma_r (eV)", "suppression",
                            "net power (W), negative masked", all);
    if (sub == "scaling") {
        bool any_power = false;
        for (const auto& row : r.rows)
            if (row[8] != 0.0) any_power = true;
        std::vector<std::string> groups;
        std::vector<std::vector<double>> vals;
        for (const auto& row : r.rows) {
            if (any_power && row[8] == 0.0) continue;
            groups.push_back("N=" + std::to_string(static_cast<int>(row[0])));
            if (any_power)
                vals.push_back({row[6], row[5], row[7]});
            else
                vals.push_back({row[1], row[2], row[3], row[4]});
        }
        if (groups.empty()) throw std::runtime_error("plot: empty result set");
        return any_power
                   ? svg_grouped_bars(groups, {"P_in/site", "P_out/site", "P_net/site"},
                                      vals, "per-site power vs ring size (W)")
                   : svg_grouped_bars(groups, {"GS", "parallel", "Dicke", "independent"},
                                      vals, "collective strength vs ring size");
    }
    if (sub == "phasemap") {
        const double t0 = cfg.axes.temps_k.empty() ? 300.0 : cfg.axes.temps_k.front();
        return heatmap_from(r, 1, 0, 5, "r_nn (m)", "tau_l (s)",
                            "net power (W) at T_vib = " + detail::short_num(t0) +
                                " K, negative masked",
                            [t0](const std::vector<double>& row) { return row[2] == t0; });
    }
    if (sub == "angles")
        return heatmap_from(r, 1, 0, 2, "theta_zen (rad)", "theta_eq (rad)",
                            "net power (W), negative masked", all);
    if (sub == "spectrum") {
        std::vector<double> v, w;
        std::vector<int> cls;
        for (const auto& row : r.rows) {
            v.push_back(row[0]);
            w.push_back(row[1]);
            cls.push_back(static_cast<int>(row[2]));
        }
        return svg_histogram(v, w, cls, {"good optical", "bad optical", "other", "phonon"},
                             48, "transition frequency (eV)", "transition spectrum");
    }
    if (sub == "ensemble") {
        std::vector<double> v;
        std::vector<double> w;
        std::vector<int> cls;
        for (const auto& row : r.rows) {
            if (row[1] == 0.0) continue;
            v.push_back(row[2]);
            w.push_back(1.0);
            cls.push_back(0);
        }
        if (v.empty()) throw std::runtime_error("plot: empty result set");
        return svg_histogram(v, w, cls, {r.columns[2]}, 32, r.columns[2],
                             "disorder ensemble");
    }
    throw std::logic_error("plot: unknown subcommand '" + sub + "'");
}

// Per-trial disorder metrics: collective target strength, whether the single
// strongest upward transition out of the BTTS still lands on the TTTS, and
// the enhanced transition frequency. Hamiltonian-only, no steady state.
std::vector<double> disorder_metrics(const Scenario& sc) {
    Eigenbasis b = diagonalize(build_hamiltonian(sc.ring, coupling(sc.ring)));
    identify_ladder(b, ladder_convention(sc.mode));
    const TargetTransition t = target_transition(b);
    const TransitionTable table = transition_table(b, sc.ring);
    double best = -1.0;
    int best_upper = -1;
    for (const auto& e : table.entries)
        if (e.lower == t.btts && e.strength > best) {
            best = e.strength;
            best_upper = e.upper;
        }
    return {target_strength(t, table), best_upper == t.ttts ? 1.0 : 0.0, t.omega_good};
}

SweepResult run_study(const std::string& sub, const RunConfig& cfg, int workers) {
    const Scenario sc = to_scenario(cfg);
    if (sub == "solve") {
        SweepResult r;
        r.columns = {"gamma_t_star_ev", "current_a", "voltage_v", "p_out_w",
                     "p_in_w",          "p_net_w",   "pop_alpha", "pop_beta",
                     "unimodal"};
        const PowerReport p = Model(sc).optimize(cfg.load_scan);
        r.rows.push_back({p.gamma_t_star, p.current_a, p.voltage_v, p.p_out, p.p_in,
                          p.p_net, p.pop_alpha, p.pop_beta, p.unimodal ? 1.0 : 0.0});
        return r;
    }
    if (sub == "grid")
        return grid_power(sc, cfg.axes.suppression, cfg.axes.gamma_r_ev, cfg.load_scan,
                          workers);
    if (sub == "scaling")
        return scaling_study(sc, cfg.axes.n_min, cfg.axes.n_max, {}, cfg.load_scan,
                             workers);
    if (sub == "phasemap")
        return phase_map(sc, cfg.axes.tau_l_s, cfg.axes.r_nn_m, cfg.axes.temps_k,
                         cfg.optimize_angles, cfg.load_scan, workers, cfg.angle_grid);
    if (sub == "spectrum") return spectrum_histogram(sc);
    if (sub == "ensemble") {
        DisorderSpec d = cfg.disorder;
        d.seed = cfg.seed;
        return ensemble(sc, d, cfg.trials,
                        {"target_strength", "btts_link_strongest", "omega_good_ev"},
                        disorder_metrics, workers);
    }
    if (sub == "angles") {
        std::vector<double> eq = cfg.axes.theta_eq_rad;
        std::vector<double> zen = cfg.axes.theta_zen_rad;
        if (eq.empty())
            for (int i = 0; i < cfg.angle_grid; ++i)
                eq.push_back(2.0 * M_PI * i / cfg.angle_grid);
        if (zen.empty())
            for (int i = 0; i < cfg.angle_grid; ++i)
                zen.push_back(M_PI / 2.0 * i / (cfg.angle_grid - 1));
        SweepResult r = angle_scan(sc, eq, zen, cfg.load_scan, workers);
        if (cfg.optimize_angles) {
            const AngleOptimum a = optimize_angles(sc, cfg.load_scan, cfg.angle_grid, 1);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", a.theta_eq);
            r.meta["opt_theta_eq"] = buf;
            std::snprintf(buf, sizeof(buf), "%.17g", a.theta_zen);
            r.meta["opt_theta_zen"] = buf;
            std::snprintf(buf, sizeof(buf), "%.17g", a.p_net);
            r.meta["opt_p_net_w"] = buf;
        }
        return r;
    }
    throw std::logic_error("run: unknown subcommand '" + sub + "'");
}

int run(const std::string& sub, const CliOverrides& cli) {
    std::filesystem::path out_dir = cli.out_dir.value_or("results");
    try {
        RunConfig cfg = parse_config(cli.config_path);
        apply_overrides(cfg, cli);
        out_dir = cfg.out_dir;
        std::filesystem::create_directories(out_dir);
        const int workers = resolve_workers(cfg);

        const auto t0 = std::chrono::steady_clock::now();
        const SweepResult result = run_study(sub, cfg, workers);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const std::string svg = render_plot(sub, result, cfg);
        write_text(out_dir / (sub + ".csv"), csv_string(result));
        write_text(out_dir / (sub + ".svg"), svg);
        write_manifest(out_dir, sub, cfg, workers, wall, {sub + ".csv", sub + ".svg"},
                       result);
        return 0;
    } catch (const std::exception& e) {
        Json err;
        err["subcommand"] = sub;
        err["error"] = e.what();
        std::cerr << "gslide " << sub << ": " << e.what() << "\n";
        try {
            std::filesystem::create_directories(out_dir);
            write_text(out_dir / "error.json", err.dump(2) + "\n");
        } catch (const std::exception&) {
            // error record is best-effort
        }
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state photocell studies for guide-slide absorber rings"};
    app.require_subcommand(1);

    CliOverrides cli;
    std::vector<CLI::App*> subs;
    for (const char* name : {"solve", "grid", "scaling", "phasemap", "spectrum",
                             "ensemble", "angles"}) {
        CLI::App* s = app.add_subcommand(name);
        s->add_option("--config", cli.config_path, "run configuration (JSON)")->required();
        s->add_option("--seed", cli.seed, "override the base random seed");
        s->add_option("--workers", cli.workers,
                      "worker threads (default: GSLIDE_WORKERS or 1)");
        s->add_option("--out", cli.out_dir, "output directory");
        subs.push_back(s);
    }
    auto* scaling = app.get_subcommand("scaling");
    scaling->add_option("--n", cli.n_range, "ring size range MIN..MAX");
    auto* grid = app.get_subcommand("grid");
    grid->add_option("--suppression", cli.suppression, "suppression axis values")
        ->delimiter(',');
    grid->add_option("--gamma-r", cli.gamma_r, "reinitialisation rate axis (eV)")
        ->delimiter(',');
    app.get_subcommand("phasemap")
        ->add_option("--temps", cli.temps, "vibrational temperatures (K)")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    for (CLI::App* s : subs)
        if (s->parsed()) return run(s->get_name(), cli);
    return 1;
}
