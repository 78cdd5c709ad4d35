#pragma once

// Admissible initial data: smooth compactly supported product bumps on the
// quadrant, kept a positive distance from the x2-axis in x1 but allowed to
// touch the x1-axis (the density must not vanish there).  Evaluation is
// offered in both frames together with the derived forcing profile
//
//     f1(z1,z2) = e^{(z2-z1)/2} * rho0(z1,z2)  ( = rho0/x1 ),
//
// and the per-line z2-masses that certify the constants c(omega0), c(rho0)
// and the thresholds Z1/Z2 used by the front diagnostics.

#include "hypflow/coords.hpp"

#include <vector>

namespace hypflow {

// C-infinity bump: amplitude * exp(-s^2/(1-s^2)) with s = (x-center)/radius
// for |s| < 1, identically 0 outside.
struct BumpProfile {
    double center = 0.0;
    double radius = 1.0;
    double amplitude = 0.0;

    double operator()(double x) const;
};

// Separable field a(x1)*b(x2), or the zero field.
struct ProductField {
    bool zero = true;
    BumpProfile fx1;
    BumpProfile fx2;

    double operator()(double x1, double x2) const;
};

enum class Field { omega0, rho0, f1 };
enum class Frame { x, z };

// Finite-difference summary of a field snapshot on a uniform x-frame grid:
// C1-norm estimate, measure of the sampled support, and 1/min x1 over the
// support samples. empty_support flags an all-zero snapshot.
struct KnComponents {
    double cn_estimate = 0.0;
    double support_measure = 0.0;
    double inv_delta = 0.0;
    bool empty_support = true;
};

// values is row-major over (i1, i2): values[i1*n2 + i2] = f(x1_0 + i1*dx1,
// x2_0 + i2*dx2).
KnComponents kn_components(const std::vector<double>& values, int n1, int n2,
                           double x1_0, double dx1, double x2_0, double dx2);

class InitialData {
public:
    // omega0 == 0; rho0(x) = bump((x1-2)/1) * q(x2/2) with q the unit bump,
    // so the support box is [1,3] x [0,2] and rho0(x1,0) > 0 on (1,3).
    static InitialData boussinesq_default();

    // rho0 == 0; omega0 of the same product form with sup |omega0| = 1.
    static InitialData euler_default();

    // General constructor; validates nonnegativity/support geometry.  rho0's
    // x2-factor must be positive at x2 = 0 when rho0 is present.
    static InitialData make(const ProductField& omega0, const ProductField& rho0);

    double omega0_x(double x1, double x2) const;
    double rho0_x(double x1, double x2) const;
    double omega0_z(double z1, double z2) const;
    double rho0_z(double z1, double z2) const;
    double f1_z(double z1, double z2) const;

    // Frame-dispatched evaluation: (a,b) = (x1,x2) or (z1,z2). f1 is only
    // defined in the z-frame (its x-frame counterpart is rho0/x1, also served).
    double eval(Field f, Frame fr, double a, double b) const;

    bool has_omega0() const { return !omega0_.zero; }
    bool has_rho0() const { return !rho0_.zero; }
    const ProductField& omega0() const { return omega0_; }
    const ProductField& rho0() const { return rho0_; }
    const SupportStrip& strip() const { return strip_; }
    double sup_omega0() const; // exact: product of factor amplitudes
    double sup_f1() const;     // scan-based bound of sup f1 (compact support)

    // z2-integral of omega0~ or f1 along the vertical line z1 (composite
    // Simpson over the section; nodes forced odd). Field::rho0 is not a mass
    // the theory uses; only omega0|f1 are accepted.
    double axis_mass(Field f, double z1, int nodes = 257) const;

    // Limit of axis_mass as z1 -> -infinity, computed in the x-frame:
    //   omega0: 2*Int omega0(x1,0)/x1 dx1,   f1: 2*Int rho0(x1,0)/x1^2 dx1.
    double axis_mass_limit(Field f, int nodes = 257) const;

    // Certified lower bounds (half the axis-mass limit), positive only when
    // the corresponding field touches the x1-axis.
    double c_omega() const;
    double c_rho() const;

    // Largest z1 below which axis_mass stays >= the certified bound
    // (Field::omega0 -> Z1, Field::f1 -> Z2), located by scan + bisection.
    double mass_threshold(Field f) const;

private:
    InitialData() = default;

    ProductField omega0_;
    ProductField rho0_;
    SupportStrip strip_;
};

} // namespace hypflow
