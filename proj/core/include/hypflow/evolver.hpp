#pragma once

// Time advancement of the reduced system
//
//     d(phi)/dt = 2 * Omega[phi, mem],     d(mem)/dt = e^{phi/2},
//
// with an embedded Dormand-Prince 5(4) pair under mixed absolute/relative
// error control.  The right-hand side has no explicit time dependence, so
// steps remain meaningful even after t stops changing in double precision
// near blow-up; the run loop exploits that to push the phase far beyond the
// point where physical time saturates.

#include "hypflow/config.hpp"
#include "hypflow/quadrature.hpp"
#include "hypflow/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hypflow {

struct SolverState {
    double t = 0.0;
    std::vector<double> phi;
    std::vector<double> mem; // I(z1,t) = Int_0^t e^{phi/2} ds

    static SolverState zero(int n) { return {0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

enum class StopKind { time_reached, phi_threshold, step_collapse, front_hit_left_edge };

const char* to_string(StopKind k);

struct StopStatus {
    StopKind kind = StopKind::time_reached;
    double t = 0.0;        // time of the trigger
    double phi_left = 0.0; // phase at the left edge when triggered
    double value = 0.0;    // triggering value (threshold, dt, or F2)

    bool is_blowup() const { return kind != StopKind::time_reached; }
};

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4), FSAL, infinity-norm error control with per-component
// scale atol + rtol*|y| (atol = rtol = tol).
class Dp54 {
public:
    explicit Dp54(size_t dim) : dim_(dim) {
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_})
            v->assign(dim_, 0.0);
    }

    void reset() { have_k1_ = false; }

    // Derivative at the last accepted state (FSAL stage), valid after a step
    // returning true.
    const std::vector<double>& derivative() const { return k1_; }

    // One attempted step of size dt. On acceptance y/t are advanced and true
    // is returned; either way dt is updated to the proposed next size.
    template <class Rhs>
    bool step(Rhs&& rhs, std::vector<double>& y, double& t, double& dt, double tol) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        if (!have_k1_) {
            rhs(t, y.data(), k1_.data());
            have_k1_ = true;
        }
        auto stage = [&](const std::vector<double>& coeffs_y, double c, std::vector<double>& k) {
            rhs(t + c * dt, coeffs_y.data(), k.data());
        };
        for (size_t i = 0; i < dim_; ++i) ytmp_[i] = y[i] + dt * a21 * k1_[i];
        stage(ytmp_, c2, k2_);
        for (size_t i = 0; i < dim_; ++i) ytmp_[i] = y[i] + dt * (a31 * k1_[i] + a32 * k2_[i]);
        stage(ytmp_, c3, k3_);
        for (size_t i = 0; i < dim_; ++i)
            ytmp_[i] = y[i] + dt * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        stage(ytmp_, c4, k4_);
        for (size_t i = 0; i < dim_; ++i)
            ytmp_[i] = y[i] + dt * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        stage(ytmp_, c5, k5_);
        for (size_t i = 0; i < dim_; ++i)
            ytmp_[i] = y[i] + dt * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                    a65 * k5_[i]);
        stage(ytmp_, 1.0, k6_);
        for (size_t i = 0; i < dim_; ++i)
            ynew_[i] = y[i] + dt * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                    b6 * k6_[i]);
        rhs(t + dt, ynew_.data(), k7_.data());

        double err = 0.0;
        for (size_t i = 0; i < dim_; ++i) {
            const double e = dt * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                   e6 * k6_[i] + e7 * k7_[i]);
            const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            err = std::max(err, std::abs(e) / scale);
        }

        const bool accept = err <= 1.0;
        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, accept ? 5.0 : 1.0);
        if (accept) {
            y.swap(ynew_);
            k1_.swap(k7_); // FSAL
            t += dt;
        }
        dt *= factor;
        return accept;
    }

private:
    size_t dim_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
    bool have_k1_ = false;
};

// ---------------------------------------------------------------------------
// Right-hand side bound to a grid/data/weight triple. The flat layout is
// y = [phi | mem].
class ReducedSystem {
public:
    ReducedSystem(const InitialData& data, Weight weight, Grid1D grid, int n_u)
        : op_(data, weight, grid, n_u), n_(grid.n), scratch_(grid.n) {}

    const NonlocalOmega& op() const { return op_; }
    int n() const { return n_; }
    size_t dim() const { return 2 * static_cast<size_t>(n_); }

    void operator()(double /*t*/, const double* y, double* dy) const;

private:
    NonlocalOmega op_;
    int n_;
    mutable std::vector<double> scratch_;
};

// ---------------------------------------------------------------------------
struct Snapshot {
    double t = 0.0;
    std::vector<double> z1; // n1 values
    std::vector<double> z2; // n2 values
    std::vector<double> omega; // row-major n1 x n2
    std::vector<double> rho;
};

struct RunResult {
    DiagnosticsSeries series;
    std::vector<AuxRow> aux;       // aligned with series
    StopStatus status;
    SolverState state;             // final state
    std::vector<double> omega_final;
    std::vector<Snapshot> snapshots;
    // Phase profiles captured at requested times (for cross-method checks).
    std::vector<double> capture_times;
    std::vector<std::vector<double>> captured_phi;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long tail_warnings = 0;        // samples where the tail bound was loud
    double B = 0.0;                // resolved front threshold
    double K = 0.0;                // strip constant of the data
    double Z_threshold = 0.0;      // axis-mass threshold used (Z1 or Z2), NaN if none
};

struct RunOptions {
    std::vector<double> capture_times; // sorted times at which to save phi
};

// Advance the configured scenario until t_end or a stop condition fires.
RunResult run(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Blow-up time from the recorded series: least-squares reciprocal-linear fit
// of 1/phi_left over the final decade of its growth.
struct BlowupEstimate {
    bool declined = true;  // true when the run did not end in a blow-up status
    double Tb = 0.0;
    std::string method;    // "reciprocal_linear" or "last_step"
    double uncertainty = 0.0;
};

BlowupEstimate estimate_blowup_time(const DiagnosticsSeries& series, const StopStatus& status);

} // namespace hypflow
