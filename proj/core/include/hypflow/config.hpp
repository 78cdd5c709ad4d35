#pragma once

// Scenario configuration: a flat key=value text format with dotted keys
// (e.g. grid.n_z1=2048).  A `scenario` key selects a preset whose defaults
// the remaining keys override; serialization always emits the full resolved
// key set with 17 significant digits so a written config (or run manifest)
// reproduces the run exactly.

#include "hypflow/initial_data.hpp"
#include "hypflow/quadrature.hpp"

#include <limits>
#include <string>
#include <vector>

namespace hypflow {

enum class Scenario { euler, boussinesq, custom };

const char* to_string(Scenario s);
const char* to_string(WeightKind k);

// Product-bump parameters for one field; amplitude 0 means the field is absent.
struct FieldParams {
    double amplitude = 0.0;
    double x1_center = 2.0;
    double x1_radius = 1.0;
    double x2_center = 0.0;
    double x2_radius = 2.0;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::custom;
    WeightKind kernel = WeightKind::sech;

    FieldParams omega0;
    FieldParams rho0;

    // grid.*  (zmax = NaN requests the automatic right edge z1_max + 1)
    double grid_zmin = -40.0;
    double grid_zmax = std::numeric_limits<double>::quiet_NaN();
    int grid_n_z1 = 2048;
    int grid_n_u = 257;

    // integ.*
    double integ_tol = 1e-8;
    double integ_dt_min = 1e-10;
    double integ_dt_init = 1e-3;
    double integ_phi_threshold = 50.0;
    double integ_t_end = 1.0;
    long integ_max_steps = 2000000;

    // sampling.*
    bool sampling_by_time = false; // false: every N accepted steps
    long sampling_every_steps = 1;
    double sampling_dt = 0.5;

    // fronts.*  (B = NaN requests the automatic max(1, K) + 5)
    double fronts_B = std::numeric_limits<double>::quiet_NaN();

    // snapshots.*
    std::vector<double> snapshot_times;
    double snap_z2_min = -10.0;
    double snap_z2_max = 10.0;
    int snap_n_z2 = 81;
    int snap_n_z1 = 257;

    // picard.*
    double picard_t_end = 0.5;
    int picard_n_time = 256;
    int picard_max_iter = 40;
    double picard_gap_tol = 1e-9;
    double picard_ceiling = 1e6;

    // out.*
    std::string out_dir = "out";

    static ScenarioConfig preset(Scenario s);

    // Throws std::invalid_argument listing every violated invariant.
    void validate() const;

    InitialData make_data() const;
    Grid1D make_grid() const;                       // resolves the auto zmax
    double resolved_B(const SupportStrip& s) const; // resolves the auto B
};

// Parse config text. scenario_override, when nonempty, replaces the file's
// scenario (the corresponding preset is the base; all other keys still apply).
// Keys under result.* are ignored, so a run manifest parses as a config.
// Unknown keys throw std::invalid_argument.
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::string& scenario_override = "");

ScenarioConfig load_config_file(const std::string& path,
                                const std::string& scenario_override = "");

// Full resolved key set, one key=value per line, doubles at 17 significant
// digits.
std::string serialize_config(const ScenarioConfig& cfg);

// Lossless double formatting (%.17g).
std::string format_g17(double v);

} // namespace hypflow
