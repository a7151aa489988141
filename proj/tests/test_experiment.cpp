#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mcvd/errors.hpp"
#include "mcvd/experiment.hpp"
#include "mcvd/reference.hpp"

using namespace mcvd;
using reference::kMilli;

namespace {

std::string data(const std::string& name) { return std::string(MCVD_TEST_DATA) + "/" + name; }

std::string to_csv(const Experiment& e, const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_csv(os, e, rows);
    return os.str();
}

CsvTable parse(const std::string& text) {
    std::istringstream is(text);
    return read_csv(is);
}

}  // namespace

TEST_CASE("every preset is valid") {
    const auto names = preset_names();
    CHECK(names.size() == 7);
    for (const auto& n : names) {
        CAPTURE(n);
        const Experiment e = preset(n);
        CHECK(e.name == n);
        CHECK_NOTHROW(e.validate());
        CHECK(e.network.size() == 3);
        CHECK(!e.points().empty());
    }
    CHECK_THROWS_AS(preset("fig99"), ConfigError);

    const Experiment m = preset("mode-fig4b");
    CHECK(m.medium == Medium::MODE);
    CHECK(m.network.channel.diffusion_coefficient == 4.5e-9);
    const auto pts = m.points();
    CHECK(pts.front() == doctest::Approx(1 * kMilli));
    CHECK(pts.back() == doctest::Approx(20 * kMilli));
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
    CHECK(preset("iui-fig7").points() == std::vector<double>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("log spacing") {
    const auto v = log_space(1, 100, 3);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1);
    CHECK(v[1] == doctest::Approx(10));
    CHECK(v[2] == 100);
    CHECK(log_space(5, 5, 1) == std::vector<double>{5});
    CHECK_THROWS_AS(log_space(0, 1, 3), ConfigError);
    CHECK_THROWS_AS(log_space(2, 1, 3), ConfigError);
}

TEST_CASE("configuration documents") {
    const Experiment base = preset("mode-fig4b");
    const Experiment e = apply_config(base, R"({
        "name": "x", "medium": "SDE", "memory": 4, "moment_mode": "corrected",
        "schemes": ["STSN", "DTDN"],
        "bounds": {"t_max_ms": 6, "psi_t_ms": 0.01, "psi_a": 50, "upper_a": 700, "budget": 300},
        "transmitters_um": [[10, 20, 30], [40, 50, 60]],
        "receiver_radius_um": 30,
        "sweep": {"variable": "Q", "grid": [100, 200]},
        "solver": {"coord_tol": 1e-6, "scan_points": 8}
    })");
    CHECK(e.name == "x");
    CHECK(e.medium == Medium::SDE);
    CHECK(e.network.channel.diffusion_coefficient == 4.87e-9);
    CHECK(e.memory == 4);
    CHECK(e.mode == MomentMode::CorrectedMixture);
    CHECK(e.schemes == std::vector<Scheme>{Scheme::STSN, Scheme::DTDN});
    CHECK(e.bounds.t_max == doctest::Approx(6e-3));
    CHECK(e.bounds.psi_t == doctest::Approx(1e-5));
    CHECK(e.bounds.budget == 300);
    CHECK(e.network.size() == 2);
    CHECK(e.network.layout.positions[1].y == doctest::Approx(50e-6));
    CHECK(e.network.channel.receiver_radius == doctest::Approx(30e-6));
    CHECK(e.sweep_variable() == SweepVariable::Budget);
    CHECK(e.points() == std::vector<double>{100, 200});
    CHECK(e.solver.coord_tol == 1e-6);
    CHECK(e.solver.scan_points == 8);
    CHECK(apply_config(base, R"({"solver": {"line_search": "gradient_bisection"}})").solver.line_search ==
          LineSearch::GradientBisection);

    const Experiment ls = apply_config(base, R"({"sweep": {"variable": "T_max", "log_space": {"from": 1, "to": 10, "points": 2}}})");
    CHECK(ls.points()[1] == doctest::Approx(10 * kMilli));

    const Experiment from_preset = apply_config(base, R"({"preset": "iui-fig7", "memory": 2})");
    CHECK(from_preset.name == "iui-fig7");
    CHECK(from_preset.sweep_variable() == SweepVariable::Memory);

    const Experiment cleared = apply_config(base, R"({"sweep": null})");
    CHECK(cleared.points().size() == 1);
}

TEST_CASE("configuration errors") {
    const Experiment base = preset("mode-fig4b");
    CHECK_THROWS_AS(apply_config(base, "{"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"unknown": 1})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"medium": "water"})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"moment_mode": "exactish"})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"schemes": ["ABCD"]})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"sweep": {"variable": "Z", "grid": []}})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"sim": {"leak": "sometimes"}})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"transmitters_um": [[1, 2]]})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"memory": "three"})"), ConfigError);
    CHECK_THROWS_AS(load_config(data("bad_key.json"), std::nullopt), ConfigError);
    CHECK_THROWS_AS(load_config(data("missing.json"), std::nullopt), ConfigError);

    const Experiment infeasible = load_config(data("infeasible.json"), std::nullopt);
    CHECK_THROWS_AS(infeasible.validate(), ConfigError);
    const Experiment dup = apply_config(base, R"({"schemes": ["STSN", "STSN"]})");
    CHECK_THROWS_AS(dup.validate(), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"solver": {"line_search": "newton"}})"), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"solver": {"coord_tol": 0}})").validate(), ConfigError);
    CHECK_THROWS_AS(apply_config(base, R"({"solver": {"max_1d_iters": 0}})").validate(), ConfigError);
    const Experiment bad_u = apply_config(base, R"({"sweep": {"variable": "U", "grid": [1.5]}})");
    CHECK_THROWS_AS(bad_u.validate(), ConfigError);
    const Experiment bad_t = apply_config(base, R"({"sweep": {"variable": "T_max", "grid": [4.5, 0.001]}})");
    CHECK_THROWS_AS(bad_t.validate(), ConfigError);
}

TEST_CASE("an empty sweep grid yields one row at the base point") {
    const Experiment e = apply_config(preset("mode-fig4b"), R"({"sweep": {"variable": "T_max", "grid": []}})");
    const auto rows = run_experiment(e, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sweep_value == doctest::Approx(4.5 * kMilli));
    CHECK(rows[0].schemes.size() == 4);
}

TEST_CASE("csv round trip") {
    Experiment e = apply_config(preset("mode-fig4b"), R"({"sweep": {"variable": "T_max", "grid": [3, 7]},
                                                         "sim": {"frames": 500}})");
    e.sim->config.seed = 3;
    const auto rows = run_experiment(e, 1);
    const std::string text = to_csv(e, rows);
    CHECK(text.rfind(std::string(kCsvVersionLine) + "\n", 0) == 0);
    const CsvTable t = parse(text);
    CHECK(t.comments.size() == 3);
    CHECK(t.columns.front() == "T_max_s");
    REQUIRE(t.rows.size() == 2);
    for (Scheme s : e.schemes) {
        const std::string k(to_string(s));
        for (const char* suffix : {"_G", "_ber_3", "_t_1_s", "_A_2", "_Aint_1", "_G_int", "_alpha", "_beta", "_gamma",
                                   "_complexity", "_complexity_actual", "_warning", "_clamped", "_sim_G", "_sim_G_se",
                                   "_sim_ber_1", "_sim_ber_se_3"}) {
            CAPTURE(suffix);
            CHECK(t.column(k + suffix).has_value());
        }
    }
    const std::size_t g = *t.column("DTDN_G");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(t.rows[i][0] == rows[i].sweep_value);
        CHECK(t.rows[i][g] == rows[i].schemes[3].solution.objective);
    }
    const std::size_t sim_g = *t.column("STSN_sim_G");
    CHECK(t.rows[0][sim_g] >= 0.0);
    CHECK(t.rows[0][sim_g] <= 1.0);
}

TEST_CASE("csv reader rejects malformed input with the line number") {
    auto fails_at = [](const std::string& text, const std::string& where) {
        try {
            parse(text);
        } catch (const ConfigError& e) {
            return std::string(e.what()).find(where) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_at("", "line 1"));
    CHECK(fails_at("a,b\n1,2\n", "line 1"));
    CHECK(fails_at("# mcvd-csv v1\na,b\n1,2\n1\n", "line 4"));
    CHECK(fails_at("# mcvd-csv v1\na,b\n1,x\n", "line 3"));
    CHECK(fails_at("# mcvd-csv v1\n# only comments\n", "missing header"));
    const CsvTable ok = parse("# mcvd-csv v1\r\na,b\r\n1,2.5e-3\r\n");
    CHECK(ok.rows.at(0).at(1) == 2.5e-3);
    CHECK_FALSE(ok.column("c").has_value());
}

TEST_CASE("plot script") {
    const CsvTable t = parse("# mcvd-csv v1\nT_max_s,STSN_G,DTSN_G,DTSN_sim_G,DTSN_sim_G_se\n0.001,0.1,0.05,0.06,0.01\n");
    const std::string s = plot_script(t, "out/run.csv");
    CHECK(s.find("set logscale y") != std::string::npos);
    CHECK(s.find("set logscale x") != std::string::npos);
    CHECK(s.find("set output 'out/run.svg'") != std::string::npos);
    CHECK(s.find("using 1:2 with linespoints title 'STSN'") != std::string::npos);
    CHECK(s.find("using 1:3 with linespoints title 'DTSN'") != std::string::npos);
    CHECK(s.find("using 1:4:5 with yerrorbars") != std::string::npos);

    const CsvTable q = parse("# mcvd-csv v1\nQ_molecules,STSN_G\n300,0.1\n");
    CHECK(plot_script(q, "q.csv").find("set logscale x") == std::string::npos);
    CHECK_THROWS_AS(plot_script(parse("# mcvd-csv v1\nx,y\n1,2\n"), "x.csv"), ConfigError);
}

TEST_CASE("small configuration reproduces the stored output") {
    Experiment e = load_config(data("small.json"), std::nullopt);
    REQUIRE(e.sim.has_value());
    e.sim->config.seed = 1;
    const CsvTable now = parse(to_csv(e, run_experiment(e, 1)));

    std::ifstream in(std::string(MCVD_GOLDEN_DIR) + "/small.csv");
    REQUIRE_MESSAGE(in.good(), "stored output tests/golden/small.csv is missing");
    const CsvTable stored = read_csv(in);
    CHECK(now.comments == stored.comments);
    REQUIRE(now.columns == stored.columns);
    REQUIRE(now.rows.size() == stored.rows.size());
    for (std::size_t i = 0; i < now.rows.size(); ++i) {
        for (std::size_t c = 0; c < now.columns.size(); ++c) {
            CAPTURE(now.columns[c]);
            const double a = now.rows[i][c];
            const double b = stored.rows[i][c];
            CHECK(std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-300);
        }
    }
}

TEST_CASE("results do not depend on the thread count") {
    Experiment e = load_config(data("small.json"), std::nullopt);
    e.sim->config.seed = 5;
    CHECK(to_csv(e, run_experiment(e, 1)) == to_csv(e, run_experiment(e, 3)));
}
