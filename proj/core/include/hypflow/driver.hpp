#pragma once

// File-producing front end: run a configured scenario into a directory
// (series table, snapshot blocks, reproducible manifest), compare runs across
// refinement levels, and cross-check the evolver against the fixed-point
// solver on a short window.

#include "hypflow/diagnostics.hpp"
#include "hypflow/evolver.hpp"
#include "hypflow/picard.hpp"

#include <span>
#include <string>
#include <vector>

namespace hypflow {

struct RunOutputs {
    RunResult result;
    BlowupEstimate tb;
    FrontLawReport front_law;
    MonotonicityReport monotonicity;
    std::string dir;
    std::string series_path;
    std::string manifest_path;
    std::vector<std::string> snapshot_paths;
};

// Execute the run and write series.csv, snapshot_<k>.csv, manifest.txt under
// out_dir.  The manifest echoes the full config (so it can be re-run as one)
// plus result.* keys for the stop status, estimates, and check summaries.
RunOutputs run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                        const RunOptions& opts = {});

struct RefineLevel {
    double factor = 1.0;
    bool ok = false;
    std::string status; // stop kind, or the error text when !ok
    double t_stop = 0.0;
    double phi_left_final = 0.0;
    BlowupEstimate tb;
    std::string dir;
};

struct RefinePair {
    int a = 0, b = 0;
    double t_hi = 0.0;    // compared on [0, t_hi], the earlier of the two stops
    double sup_diff = 0.0; // sup |phi_left_a - phi_left_b| over that window
};

struct RefineReport {
    std::vector<RefineLevel> levels;
    std::vector<RefinePair> pairs;
    std::string table_path;
};

// Rerun the scenario with n_z1 and n_u scaled by each factor and the step
// tolerance by factor^-2, each level into out_dir/level_<k>; a level that
// throws is recorded with its error text and excluded from the pairs.
RefineReport refine_compare(const ScenarioConfig& cfg, std::span<const double> levels,
                            const std::string& out_dir);

struct PicardAgreement {
    double phi_discrepancy = 0.0;
    int times_compared = 0; // phase profiles captured before the evolver stopped
    IterationReport report;
    AprioriChecks checks;
    std::string report_path;
};

// Run both solvers on matched grids over [0, T_window] and report the sup
// discrepancy of the phase.  Divergence of the iteration is a report, not an
// error.
PicardAgreement picard_validate(const ScenarioConfig& cfg, double T_window,
                                const std::string& out_dir);

} // namespace hypflow
