#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "casimir/config.hpp"

using namespace casimir;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("minimal configurations parse") {
    ParseResult r = parse_config("scenario = parabolic_plane\nmu0 = 0\nd = 1\n");
    REQUIRE(r.ok);
    CHECK(r.spec.scenario.kind == GeometryScenario::Kind::ParabolicPlane);
    CHECK(r.spec.scenario.pose.d == 1.0);
    CHECK(!r.spec.sweep.has_value());
    CHECK(!r.spec.temperature.has_value());
    CHECK(r.spec.output_path == "-");

    r = parse_config(
        "scenario = parabolic_parabolic\nmu0 = 0.5\nmu0_bar = 0.3\nd = 2\n"
        "d_x = 0.4\ntheta = 0.1\ntheta_bar = -0.2\n");
    REQUIRE(r.ok);
    CHECK(r.spec.scenario.kind == GeometryScenario::Kind::ParabolicParabolic);
    CHECK(r.spec.scenario.pose.d_x == 0.4);

    r = parse_config(
        "scenario = interior_ordinary\nmu0 = 2\nradius = 0.5\nr0 = 0.2\n"
        "theta0 = 1.0\nnu_max = 10\nell_max = 8\n");
    REQUIRE(r.ok);
    CHECK(r.spec.truncation.nu_max == 10);
    CHECK(r.spec.truncation.ell_max == 8);
}

TEST_CASE("comments, blank lines, and overrides") {
    ParseResult r = parse_config(
        "# a comment\n\nscenario = parabolic_plane\nmu0 = 0\nd = 1\n"
        "temperature = 0.5\nclassical = true\nchannels = false\n"
        "q_nodes = 32\noutput = out.csv\n");
    REQUIRE(r.ok);
    CHECK(r.spec.temperature.value() == 0.5);
    CHECK(r.spec.classical);
    CHECK(!r.spec.emit_channels);
    CHECK(r.spec.truncation.q_nodes == 32);
    CHECK(r.spec.output_path == "out.csv");
}

TEST_CASE("every problem is reported, with line and field") {
    ParseResult r = parse_config(
        "scenario = parabolic_plane\n"  // line 1, fine
        "mu0 = zebra\n"                 // line 2, not a number
        "banana = 3\n"                  // line 3, unknown key
        "no equals here\n"              // line 4, grammar
        "d = 1\n");
    CHECK(!r.ok);
    REQUIRE(r.errors.size() == 3);
    bool saw_num = false, saw_key = false, saw_grammar = false;
    for (const ConfigError& e : r.errors) {
        if (e.line == 2 && e.field == "mu0") saw_num = true;
        if (e.line == 3 && e.field == "banana") saw_key = true;
        if (e.line == 4) saw_grammar = true;
    }
    CHECK(saw_num);
    CHECK(saw_key);
    CHECK(saw_grammar);

    // missing scenario is an error too
    r = parse_config("d = 1\n");
    CHECK(!r.ok);
    REQUIRE(!r.errors.empty());
    CHECK(r.errors[0].field == "scenario");

    // invalid geometry caught at parse time
    r = parse_config("scenario = parabolic_plane\nmu0 = 0\nd = -2\n");
    CHECK(!r.ok);
}

TEST_CASE("sweep grids") {
    ParseResult r = parse_config(
        "scenario = parabolic_plane\nmu0 = 1\nd = 1\nsweep = theta\n"
        "sweep_min = 0\nsweep_max = 1\nsweep_points = 5\n");
    REQUIRE(r.ok);
    REQUIRE(r.spec.sweep.has_value());
    CHECK(r.spec.sweep->param == SweepParameter::TiltAngle);
    REQUIRE(r.spec.sweep->grid.size() == 5);
    CHECK(r.spec.sweep->grid.front() == 0.0);
    CHECK(r.spec.sweep->grid.back() == 1.0);
    CHECK(r.spec.sweep->grid[2] == doctest::Approx(0.5));

    // log-spaced grid
    r = parse_config(
        "scenario = parabolic_plane\nmu0 = 1\nd = 2\nsweep = H_over_R\n"
        "sweep_min = 0.01\nsweep_max = 1\nsweep_points = 3\nsweep_log = true\n");
    REQUIRE(r.ok);
    REQUIRE(r.spec.sweep->grid.size() == 3);
    CHECK(r.spec.sweep->grid[1] == doctest::Approx(0.1));

    // explicit value list
    r = parse_config(
        "scenario = parabolic_plane\nmu0 = 1\nd = 1\nsweep = theta\n"
        "sweep_values = 0, 0.25, 0.7\n");
    REQUIRE(r.ok);
    REQUIRE(r.spec.sweep->grid.size() == 3);
    CHECK(r.spec.sweep->grid[1] == 0.25);

    // non-monotone grids are rejected
    r = parse_config(
        "scenario = parabolic_plane\nmu0 = 1\nd = 1\nsweep = theta\n"
        "sweep_values = 0, 0.5, 0.25\n");
    CHECK(!r.ok);

    // sweep parameter must match the scenario
    r = parse_config(
        "scenario = parabolic_parabolic\nmu0 = 0\nmu0_bar = 0\nd = 1\n"
        "sweep = H_over_R\nsweep_min = 0.1\nsweep_max = 1\n");
    CHECK(!r.ok);
}

TEST_CASE("example configurations parse for every scenario kind") {
    for (GeometryScenario::Kind k :
         {GeometryScenario::Kind::ParabolicPlane,
          GeometryScenario::Kind::ParabolicParabolic,
          GeometryScenario::Kind::ParabolicOrdinary,
          GeometryScenario::Kind::InteriorParabolicParabolic,
          GeometryScenario::Kind::InteriorOrdinary}) {
        std::string text = example_config(k);
        ParseResult r = parse_config(text);
        CHECK(r.ok);
        if (r.ok) CHECK(r.spec.scenario.kind == k);
    }
}

TEST_CASE("run emits the documented CSV header and is deterministic") {
    ParseResult r = parse_config(
        "scenario = parabolic_plane\nmu0 = 0\nd = 1\nsweep = theta\n"
        "sweep_values = 0, 0.3\nnu_max = 8\nq_nodes = 16\n");
    REQUIRE(r.ok);
    RunSpec spec = r.spec;
    spec.output_path = "run_a.csv";
    REQUIRE(run(spec) == 0);
    spec.output_path = "run_b.csv";
    REQUIRE(run(spec) == 0);

    std::string a = slurp("run_a.csv"), b = slurp("run_b.csv");
    CHECK(a == b);  // reruns are byte-identical
    std::string header = a.substr(0, a.find('\n'));
    CHECK(header ==
          "sweep parameter, energy value, Dirichlet part, Neumann part, "
          "trunc_error, quad_error");
    // one row per sweep point
    int rows = 0;
    for (char c : a)
        if (c == '\n') ++rows;
    CHECK(rows == 3);
    std::remove("run_a.csv");
    std::remove("run_b.csv");
}
