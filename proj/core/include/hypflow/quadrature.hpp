#pragma once

// The nonlocal part of the reduced dynamics: for a state (phi, mem) on a
// uniform z1-grid,
//
//     W(z1)     = Int [ omega0(z1,u) + f1(z1,u)*mem(z1) ] * w(u + phi(z1)) du
//     Omega(z1) = prefactor * Int_{z1}^{Zmax} W
//
// where u = z2 - phi is the Lagrangian label, the u-integral runs over the
// fixed compact section of the initial-data support on the line z1, and the
// weight w is sech (prefactor 1/4) or sech^2 (prefactor 1/8).  The u-integral
// uses composite Simpson on per-line nodes fixed at construction; the
// z1-integral is a reverse cumulative trapezoid.

#include "hypflow/initial_data.hpp"

#include <span>
#include <vector>

namespace hypflow {

enum class WeightKind { sech, sech_squared };

struct Weight {
    WeightKind kind = WeightKind::sech;

    double prefactor() const { return kind == WeightKind::sech ? 0.25 : 0.125; }

    // Overflow-safe evaluation via m = e^{-|z2|}: sech = 2m/(1+m^2).
    double operator()(double z2) const;
};

struct Grid1D {
    double zmin = 0.0;
    double zmax = 0.0;
    int n = 0;
    double h = 0.0;

    static Grid1D uniform(double zmin, double zmax, int n);
    double node(int i) const { return zmin + h * i; }
};

// Composite Simpson nodes/weights on [lo, hi] (node count forced odd, >= 3).
struct SimpsonRule {
    double lo = 0.0, hi = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    static SimpsonRule make(double lo, double hi, int n);
};

// sum_j weights[j] * f[j] * w(nodes[j] + shift): the section integral of a
// sampled integrand against the shifted weight.  Exposed for oracle tests and
// for the shift-covariance property.
double weighted_section_integral(const SimpsonRule& rule, std::span<const double> f,
                                 const Weight& w, double shift);

class NonlocalOmega {
public:
    NonlocalOmega(const InitialData& data, Weight weight, Grid1D grid, int n_u);

    const Grid1D& grid() const { return grid_; }
    const Weight& weight() const { return weight_; }
    const InitialData& data() const { return data_; }
    int n_u() const { return n_u_; }

    // W over the grid for the given state arrays (sizes must equal grid().n).
    void inner_profile_W(std::span<const double> phi, std::span<const double> mem,
                         std::span<double> W) const;

    // Omega = prefactor * reverse cumulative trapezoid of W; Omega[n-1] = 0.
    void omega_profile(std::span<const double> W, std::span<double> omega) const;

    // Convenience: both passes; scratch must hold grid().n values.
    void omega(std::span<const double> phi, std::span<const double> mem,
               std::span<double> omega_out, std::span<double> scratch) const;

    // Per-line maxima of the data profiles over the section, from a 4x-refined
    // node scan polished by golden-section search.  sup-norm diagnostics build
    // on these (for separable states sup_u |omega0 + f1*I| factorizes).
    const std::vector<double>& line_max_omega0() const { return line_max_omega0_; }
    const std::vector<double>& line_max_f1() const { return line_max_f1_; }

    // Per-line maximum of |omega0 + f1*mem| over the section by the same
    // refined scan (the non-separable case needs the combination per line).
    double line_max_combined(int i, double mem) const;

    // Section bounds of line i (false when the line misses the support).
    bool line_section(int i, double& lo, double& hi) const;

    // Bound on the neglected z1 < Zmin contribution to Omega:
    // 2 * sup_omega * e^{Zmin + K + sup_phi}.
    double tail_bound(double sup_omega, double sup_phi) const;

private:
    struct Line {
        bool empty = true;
        double d_min = 0.0, d_max = 0.0;   // d = z1 - u over the section
        std::vector<double> a;             // simpson_weight * omega0(z1,u_j)
        std::vector<double> b;             // simpson_weight * f1(z1,u_j)
        std::vector<double> epd;           // e^{+d_j}
        std::vector<double> emd;           // e^{-d_j}
    };

    double line_accumulate(const Line& line, double H, double mem) const;

    InitialData data_;
    Weight weight_;
    Grid1D grid_;
    int n_u_;
    std::vector<Line> lines_;
    std::vector<double> line_max_omega0_;
    std::vector<double> line_max_f1_;
};

} // namespace hypflow
