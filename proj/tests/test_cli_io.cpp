#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gslide/config.hpp"
#include "gslide/csv.hpp"
#include "gslide/svg.hpp"

using namespace gslide;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gslide_test_" + std::to_string(std::rand()) +
                std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const TempDir& dir, const Json& j) {
    const fs::path p = dir.path / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

// Built CLI binary; tests/ and the binary share the build tree.
fs::path cli_binary() {
    const fs::path p = fs::path(GSLIDE_CLI_PATH);
    REQUIRE(fs::exists(p));
    return p;
}

int run_cli(const std::string& args) {
    return std::system((cli_binary().string() + " " + args + " > /dev/null 2>&1").c_str());
}

}  // namespace

TEST_CASE("config: n_sites is required, minimal config gets defaults") {
    CHECK_THROWS_WITH(parse_config_json(Json::object()),
                      Catch::Matchers::ContainsSubstring("n_sites"));
    const RunConfig c = parse_config_json(Json{{"n_sites", 5}});
    CHECK(c.n_sites == 5);
    CHECK(c.omega_a_ev == 1.8);
    CHECK(c.tau_l_s == 2.5e-9);
    CHECK(c.r_nn_m == 1e-9);
    CHECK(c.theta_eq_rad == M_PI / 2.0);
    CHECK(c.theta_zen_rad == M_PI / 4.0);
    CHECK(c.suppression == 0.99);
    CHECK(c.gamma_r_ev == 1e-2);
    CHECK(c.gamma_x_ev == 1e-2);
    CHECK(c.t_opt_k == 5800.0);
    CHECK(c.t_vib_k == 300.0);
    CHECK(c.mode == "guide_slide");
    CHECK(c.reinit == "ladder");
}

TEST_CASE("config: strict mode rejects unknown keys with their path") {
    CHECK_THROWS_WITH(parse_config_json(Json{{"n_sites", 3}, {"bogus", 1}}),
                      Catch::Matchers::ContainsSubstring("bogus"));
    CHECK_THROWS_WITH(
        parse_config_json(Json{{"n_sites", 3}, {"environment", Json{{"t_optical", 1.0}}}}),
        Catch::Matchers::ContainsSubstring("environment.t_optical"));
    CHECK_THROWS_WITH(parse_config_json(Json{{"n_sites", 3}, {"mode", "diagonal"}}),
                      Catch::Matchers::ContainsSubstring("mode"));
    CHECK_THROWS_WITH(parse_config_json(Json{{"n_sites", "five"}}),
                      Catch::Matchers::ContainsSubstring("wrong type"));
    CHECK_THROWS_WITH(
        parse_config_json(Json{{"n_sites", 3}, {"disorder", Json{{"fraction", 1.5}}}}),
        Catch::Matchers::ContainsSubstring("fraction"));
}

TEST_CASE("config: parse(serialize(c)) == c") {
    RunConfig c = parse_config_json(Json{{"n_sites", 4}});
    c.mode = "parallel";
    c.trap_mode = "coherent";
    c.suppression = 0.999;
    c.phonon_model = "superohmic";
    c.lambda_ev = 0.02;
    c.omega_crit_ev = 0.025;
    c.reinit = "site";
    c.disorder.fraction = 0.05;
    c.disorder.positions = false;
    c.trials = 17;
    c.axes.n_min = 3;
    c.axes.n_max = 5;
    c.axes.theta_eq_rad = {0.0, 1.0};
    c.optimize_angles = true;
    c.seed = 123456789012345ull;
    c.workers = 3;
    c.out_dir = "elsewhere";
    c.solver.residual_rel_tol = 1e-7;
    c.load_scan.points = 12;
    const RunConfig back = parse_config_json(serialize_config(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
    c.seed += 1;
    CHECK(config_hash(back) != config_hash(c));
}

TEST_CASE("config: to_scenario maps modes and environment") {
    RunConfig c = parse_config_json(Json{{"n_sites", 4}});
    c.mode = "parallel";
    c.reinit = "none";
    c.trap_enabled = false;
    const Scenario sc = to_scenario(c);
    CHECK(sc.mode == RingMode::parallel);
    CHECK(sc.reinit == ReinitScheme::none);
    CHECK(!sc.ring.trap.has_value());
    CHECK(sc.ring.n_sites == 4);
    CHECK(sc.env.suppression == 0.99);
}

TEST_CASE("svg: empty inputs are rejected, output is self-contained") {
    CHECK_THROWS_AS(svg_heatmap({}, {}, {}, "x", "y", "t"), std::invalid_argument);
    CHECK_THROWS_AS(svg_grouped_bars({}, {}, {}, "t"), std::invalid_argument);
    CHECK_THROWS_AS(svg_histogram({}, {}, {}, {"a"}, 8, "x", "t"), std::invalid_argument);
    const std::string svg =
        svg_heatmap({1.0, 2.0}, {0.5}, {{-1.0, 3.0}}, "x", "y", "map");
    CHECK(svg.rfind("<svg xmlns=", 0) == 0);
    CHECK(svg.find("href") == std::string::npos);      // no external assets
    CHECK(svg.find("\"white\"") != std::string::npos); // masked negative cell
}

TEST_CASE("cli: solve writes csv, svg and a complete manifest") {
    TempDir dir;
    const fs::path cfg = write_config(
        dir, Json{{"n_sites", 3}, {"seed", 5}, {"out_dir", (dir.path / "out").string()}});
    REQUIRE(run_cli("solve --config " + cfg.string()) == 0);
    const std::string csv = slurp(dir.path / "out" / "solve.csv");
    CHECK(csv.rfind("gamma_t_star_ev,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row
    CHECK(slurp(dir.path / "out" / "solve.svg").rfind("<svg", 0) == 0);

    const Json m = Json::parse(slurp(dir.path / "out" / "manifest.json"));
    CHECK(m.at("subcommand") == "solve");
    CHECK(m.at("seed") == 5);
    CHECK(m.at("config_hash").get<std::string>().size() == 16);
    CHECK(m.at("wall_time_s").get<double>() > 0.0);
    CHECK(m.at("versions").contains("eigen"));
    const RunConfig round = parse_config_json(m.at("config"));
    CHECK(round.n_sites == 3);
}

TEST_CASE("cli: identical config and seed, different workers -> identical CSV") {
    TempDir dir;
    Json base{{"n_sites", 3},
              {"seed", 9},
              {"trials", 8},
              {"disorder", Json{{"fraction", 0.05}}}};
    base["out_dir"] = (dir.path / "a").string();
    const fs::path cfg_a = dir.path / "a.json";
    std::ofstream(cfg_a) << base.dump();
    base["out_dir"] = (dir.path / "b").string();
    base["workers"] = 4;
    const fs::path cfg_b = dir.path / "b.json";
    std::ofstream(cfg_b) << base.dump();

    REQUIRE(run_cli("ensemble --config " + cfg_a.string() + " --workers 1") == 0);
    REQUIRE(run_cli("ensemble --config " + cfg_b.string()) == 0);
    CHECK(slurp(dir.path / "a" / "ensemble.csv") == slurp(dir.path / "b" / "ensemble.csv"));
}

TEST_CASE("cli: axis overrides reach the study") {
    TempDir dir;
    const fs::path cfg = write_config(
        dir, Json{{"n_sites", 2}, {"out_dir", (dir.path / "out").string()}});
    REQUIRE(run_cli("grid --config " + cfg.string() +
                    " --suppression 0.9 --gamma-r 1e-4,1e-2") == 0);
    std::istringstream csv(slurp(dir.path / "out" / "grid.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("suppression,gamma_r_ev", 0) == 0);
    int rows = 0;
    while (std::getline(csv, line)) {
        CHECK(line.rfind("0.9,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("cli: failures exit nonzero and leave a machine-readable record") {
    TempDir dir;
    CHECK(run_cli("solve --config " + (dir.path / "missing.json").string() + " --out " +
                  (dir.path / "err").string()) != 0);
    const Json err = Json::parse(slurp(dir.path / "err" / "error.json"));
    CHECK(err.at("subcommand") == "solve");
    CHECK(err.at("error").get<std::string>().find("missing.json") != std::string::npos);

    const fs::path bad = write_config(dir, Json{{"n_sites", 3}, {"bogus", 1}});
    CHECK(run_cli("solve --config " + bad.string() + " --out " +
                  (dir.path / "err2").string()) != 0);
    const Json err2 = Json::parse(slurp(dir.path / "err2" / "error.json"));
    CHECK(err2.at("error").get<std::string>().find("bogus") != std::string::npos);
}
