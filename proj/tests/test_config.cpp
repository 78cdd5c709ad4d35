#include <doctest.h>

#include "hypflow/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

using namespace hypflow;

TEST_CASE("presets select the right data and stopping regime") {
    ScenarioConfig e = ScenarioConfig::preset(Scenario::euler);
    CHECK(e.scenario == Scenario::euler);
    CHECK(e.omega0.amplitude == 1.0);
    CHECK(e.rho0.amplitude == 0.0);
    CHECK(e.sampling_by_time);
    CHECK(e.integ_t_end == 50.0);

    ScenarioConfig b = ScenarioConfig::preset(Scenario::boussinesq);
    CHECK(b.scenario == Scenario::boussinesq);
    CHECK(b.omega0.amplitude == 0.0);
    CHECK(b.rho0.amplitude == 10.0);
    CHECK(b.rho0.x1_radius < 1.0); // concentrated forcing drives the vorticity integral
    CHECK(b.integ_phi_threshold > 1000.0);
    CHECK(b.grid_zmin < -1000.0);

    CHECK_NOTHROW(e.validate());
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("serialize -> parse round trip is the identity") {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::boussinesq);
    cfg.snapshot_times = {0.25, 1.0, 2.75};
    cfg.integ_tol = 3.5e-9;
    cfg.out_dir = "some/dir";

    std::string text = serialize_config(cfg);
    ScenarioConfig back = parse_config_text(text);
    CHECK(serialize_config(back) == text);

    // the automatic zmax / B survive the trip as "auto"
    CHECK(std::isnan(back.grid_zmax));
    CHECK(std::isnan(back.fronts_B));
    CHECK(back.snapshot_times.size() == 3);
    CHECK(back.snapshot_times[2] == 2.75);
    CHECK(back.out_dir == "some/dir");

    // explicit values survive too
    cfg.grid_zmax = 4.5;
    cfg.fronts_B = 9.0;
    back = parse_config_text(serialize_config(cfg));
    CHECK(back.grid_zmax == 4.5);
    CHECK(back.fronts_B == 9.0);
}

TEST_CASE("parse: comments, blanks, overrides, result.* tolerance") {
    std::string text =
        "# a comment\n"
        "scenario = euler\n"
        "\n"
        "grid.n_z1 = 512\n"
        "integ.t_end = 7.5   # trailing comment\n"
        "result.status = blow_up\n"
        "result.steps_accepted = 123\n";
    ScenarioConfig cfg = parse_config_text(text);
    CHECK(cfg.scenario == Scenario::euler);
    CHECK(cfg.grid_n_z1 == 512);
    CHECK(cfg.integ_t_end == 7.5);
    // untouched keys keep the euler preset values
    CHECK(cfg.omega0.amplitude == 1.0);

    // scenario override: same text, boussinesq base
    ScenarioConfig over = parse_config_text(text, "boussinesq");
    CHECK(over.scenario == Scenario::boussinesq);
    CHECK(over.grid_n_z1 == 512);
    CHECK(over.rho0.amplitude == ScenarioConfig::preset(Scenario::boussinesq).rho0.amplitude);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_config_text("no_such.key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("grid.n_z1 = 12abc\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("grid.n_z1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("scenario = vortex\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("", "vortex"), std::invalid_argument);
}

TEST_CASE("validate aggregates all violations") {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::euler);
    cfg.grid_n_z1 = 1;
    cfg.integ_tol = -1.0;
    try {
        cfg.validate();
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("n_z1") != std::string::npos);
        CHECK(msg.find("tol") != std::string::npos);
    }
}

TEST_CASE("scenario presets forbid the other field") {
    // transport scenario with a density is inconsistent
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::euler);
    cfg.rho0.amplitude = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    ScenarioConfig b = ScenarioConfig::preset(Scenario::boussinesq);
    b.omega0.amplitude = 0.5;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("resolved grid and front band") {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::euler);
    Grid1D g = cfg.make_grid();
    InitialData data = cfg.make_data();
    CHECK(g.zmin == cfg.grid_zmin);
    CHECK(g.zmax == doctest::Approx(data.strip().z1_max + 1.0).epsilon(1e-14));
    CHECK(g.n == cfg.grid_n_z1);

    CHECK(cfg.resolved_B(data.strip()) ==
          doctest::Approx(std::max(1.0, data.strip().K) + 5.0).epsilon(1e-14));
    cfg.fronts_B = 12.0;
    CHECK(cfg.resolved_B(data.strip()) == 12.0);

    cfg.grid_zmax = 6.0;
    g = cfg.make_grid();
    CHECK(g.zmax == 6.0);
}

TEST_CASE("format_g17 round trips doubles") {
    const double vals[] = {0.1, 1.0 / 3.0, 2.5e-300, 6.02e23, -0.0};
    for (double v : vals) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}
