#pragma once

// The fixed-point construction behind short-time existence, run as an
// independent second solver on a space-time grid:
//
//     omega_n from Phi_{n-1} via the solution formula,
//     Omega_n = the weighted nonlocal integral of omega_n,
//     Phi_n   = 2 * Int_0^t Omega_n ds   (trapezoid in time),
//
// together with the a-priori monitors of the existence proof: running
// suprema M_n (vorticity), L_n (phase), Gamma_n (drive), and the
// iterate-gap norms whose decay certifies convergence.

#include "hypflow/quadrature.hpp"

#include <span>
#include <string>
#include <vector>

namespace hypflow {

struct PicardGrids {
    Grid1D z;
    int n_u = 33;
    int n_time = 256; // time steps on [0, T] (nodes = n_time + 1)
};

struct SpaceTimeField {
    Grid1D z;
    std::vector<double> t; // time nodes
    std::vector<double> v; // row-major [k * z.n + i]

    double at(int k, int i) const { return v[static_cast<size_t>(k) * z.n + i]; }
};

struct IterationRecord {
    // Running-sup time profiles over iterates m <= n (one entry per time node).
    std::vector<double> M;     // sup |omega_m|
    std::vector<double> L;     // sup |Phi_m|
    std::vector<double> Gamma; // sup |Omega_m|
    double M_T = 0.0, L_T = 0.0, Gamma_T = 0.0;
    double omega_gap = 0.0; // G_n at the left edge, max over sampled slices
    double phi_gap = 0.0;   // sup |Phi_n - Phi_{n-1}|
    double fitted_C = 0.0;  // Gamma_T / ((1 + L_{n-1,T}) M_T)
};

struct IterationReport {
    std::vector<IterationRecord> iterations;
    bool converged = false;
    bool diverged = false; // M_n passed the ceiling
    int iterations_used = 0;
    double dt = 0.0;  // time-grid spacing (monitor tolerances scale with it)
    std::string note; // sup norms are over the truncated grid, not the half-plane
};

struct PicardResult {
    SpaceTimeField phi;
    SpaceTimeField mem; // I = Int_0^t e^{phi/2} ds of the returned phi
    IterationReport report;
};

// Iterate until sup |Phi_n - Phi_{n-1}| <= gap_tol, max_iter is exhausted, or
// sup |omega_n| exceeds ceiling (divergence: the window T was too ambitious).
PicardResult picard_solve(const InitialData& data, Weight weight, double T,
                          const PicardGrids& grids, int max_iter, double gap_tol,
                          double ceiling = 1e6);

// Gap profile of two omega iterates sampled on the same z1 x z2 grid
// (row-major, n_z1 x n_z2): per-line sup of |a - b|, then running sup from
// the right (the gap at z1 bounds everything to its right).
std::vector<double> iterate_gap(std::span<const double> omega_n,
                                std::span<const double> omega_prev, int n_z1, int n_z2);

struct AprioriChecks {
    bool lcon_ok = true;      // L_n(t) <= 2 Int_0^t Gamma_n at every node
    double lcon_worst = 0.0;  // most positive L_n(t) - 2 Int Gamma_n seen
    bool c_stable = true;     // fitted C within 20% over the last three iterations
    double c_spread = 0.0;    // relative spread behind that flag
};

AprioriChecks apriori_monitor(const IterationReport& report);

} // namespace hypflow
