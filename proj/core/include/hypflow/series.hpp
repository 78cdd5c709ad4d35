#pragma once

// Time-series records emitted by a run.  SeriesRow carries exactly the
// columns of the output table; AuxRow carries the extra per-sample channels
// the lemma-level checks consume (kept out of the table to hold its schema
// fixed).

#include <optional>
#include <vector>

namespace hypflow {

struct SeriesRow {
    double t = 0.0;
    double phi_left = 0.0;               // phase at the left grid edge
    double sup_omega = 0.0;              // ||omega(.,t)||_inf
    double bkm = 0.0;                    // Int_0^t sup_omega, step-trapezoid
    std::optional<double> F1;            // forward front (H = -B), if on grid
    std::optional<double> F2;            // rightmost root of H = 0, if on grid
    double delta = 0.0;                  // min x1 over support trajectories
    std::optional<double> gamma_est;     // min Omega over the driven left set
    double tail_bound = 0.0;             // bound on the neglected left tail
};

using DiagnosticsSeries = std::vector<SeriesRow>;

struct AuxRow {
    double omega_left = 0.0;             // Omega at the left grid edge
    double mem_left = 0.0;               // I at the left grid edge
    std::optional<double> omega_at_F1;   // Omega interpolated at F1
    double dh_min_all = 0.0;             // min over cells of discrete dH/dz1
    double dh_max_all = 0.0;             // max over cells
    std::optional<double> dh_min_left_F1; // min over cells left of F1
    std::optional<double> h_at_Zs;       // H at the axis-mass threshold Z1/Z2
    std::optional<double> phi_min_f2win; // min phi over [F2, F2+1]
    long omega_z1_violations = 0;        // cells where Omega increases in z1
};

} // namespace hypflow
