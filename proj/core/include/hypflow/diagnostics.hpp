#pragma once

// Lemma-level observables of a state: exact reconstruction of omega/rho from
// the solution formulas, sup-norms by per-line maximization, front positions
// from the profile H = z1 + phi, the support-distance delta from boundary
// trajectories, and the fitted growth laws.

#include "hypflow/evolver.hpp"
#include "hypflow/interp.hpp"

#include <optional>
#include <span>

namespace hypflow {

struct FrontParams {
    double B = 6.0;  // forward-front threshold (H = -B), >= max(1, K)
    double K = 1.0;  // strip constant of the data
    double Z1 = std::numeric_limits<double>::quiet_NaN(); // omega0 mass threshold
    double Z2 = std::numeric_limits<double>::quiet_NaN(); // f1 mass threshold
};

FrontParams make_front_params(const InitialData& data, double B);

struct Fronts {
    std::optional<double> F1; // smallest root of H = -B
    std::optional<double> F2; // largest root of H = 0
};

// Roots located by scanning for bracketing nodes + linear interpolation.
Fronts find_fronts(const Grid1D& grid, std::span<const double> phi, double B);

// ---------------------------------------------------------------------------
// Pointwise reconstruction via the solution formulas; phi/mem are read
// off-grid through monotone cubic interpolation and held constant beyond the
// grid edges (tail_flagged reports whether any query needed that extension).
class FieldReconstructor {
public:
    FieldReconstructor(const InitialData& data, const Grid1D& grid, const SolverState& state);

    double rho_z(double z1, double z2) const;   // rho0(z1, z2 - phi)
    double omega_z(double z1, double z2) const; // omega0 + f1 * I at the label
    double rho_x(double x1, double x2) const;
    double omega_x(double x1, double x2) const;

    double phi_at(double z1) const;
    double mem_at(double z1) const;
    bool tail_flagged() const { return tail_flag_; }

private:
    void note_tail(double z1) const;

    const InitialData* data_;
    double zmin_, zmax_;
    MonotoneCubic phi_, mem_;
    mutable bool tail_flag_ = false;
};

// ---------------------------------------------------------------------------
// Per-sample observables computed during a run.
class DiagnosticsEngine {
public:
    DiagnosticsEngine(const NonlocalOmega& op, FrontParams fp);

    const FrontParams& front_params() const { return fp_; }

    // sup over grid lines of the per-line maximum of |omega0 + f1*I| over the
    // section (exact factorization for single-field data; scan otherwise).
    double sup_norm_omega(std::span<const double> mem) const;
    double sup_norm_omega(const SolverState& state) const { return sup_norm_omega(state.mem); }

    // Full series + aux row; omega is the Omega profile at the state.
    void row(const SolverState& state, std::span<const double> omega, double bkm,
             SeriesRow& out, AuxRow& aux) const;

    double z_threshold() const { return z_threshold_; }

private:
    const NonlocalOmega* op_;
    FrontParams fp_;
    bool mixed_ = false;
    double z_threshold_;          // Z1 for omega0-bearing data, else Z2
    double sup_transport_ = 0.0;  // sup over lines of max omega0 (Euler path)
    std::vector<double> traj_x1_; // support-boundary samples: initial x1
    std::vector<double> traj_z1_; // and their conserved labels log(x1*x2)
};

// ---------------------------------------------------------------------------
struct FrontLawReport {
    bool t0_found = false;
    double t0 = 0.0;           // first sample with F1 defined and H(Z) >= 0
    bool slope_in_range = true; // dH <= 1+tol everywhere, positive left of F1
    double slope_tol = 1e-6;
    double eps_meas = 0.0;     // max over samples of 1 - min dH left of F1
    double eps_paper = 0.0;    // (1/gamma + t0) e^{K-B} with measured gamma
    bool gamma_positive = false;
    double gamma_min = 0.0, gamma_max = 0.0; // over samples past t0
    bool tail_ok = true;       // Omega(left) - Omega(F1) <= e^{K-B}/(1-eps)
    double tail_margin = 0.0;  // worst ratio of the two sides
    long lemma41_checked = 0;  // samples with F2 <= min(-10, Z2) examined
    bool lemma41_ok = true;    // phi >= |F2|/2 on [F2, F2+1] at those samples
};

FrontLawReport front_law_checks(const RunResult& r, double slope_tol = 1e-6);

// ---------------------------------------------------------------------------
struct MonotonicityReport {
    long phi_left_drops = 0;   // phi_left decreasing between samples
    long mem_left_drops = 0;   // I at the left edge decreasing
    long bkm_drops = 0;
    long f2_increases = 0;     // F2 moving right between samples
    long omega_z1_violations = 0;

    long total() const {
        return phi_left_drops + mem_left_drops + bkm_drops + f2_increases + omega_z1_violations;
    }
};

MonotonicityReport monotonicity_suite(const RunResult& r);

// ---------------------------------------------------------------------------
enum class FitQuantity { phi_left, inv_delta, grad_proxy };

struct GrowthFit {
    double rate = 0.0;
    double quality = 0.0; // R^2 of the fit
};

// phi_left is fitted linearly in t; inv_delta and grad_proxy (the same
// quantity, 1/delta) log-linearly. Needs >= 10 samples in [t_lo, t_hi].
GrowthFit growth_fit(const DiagnosticsSeries& series, FitQuantity q, double t_lo, double t_hi);

} // namespace hypflow
