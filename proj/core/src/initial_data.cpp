#include "hypflow/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypflow {

double BumpProfile::operator()(double x) const {
    const double s = (x - center) / radius;
    const double q = 1.0 - s * s;
    if (!(q > 0.0)) return 0.0;
    return amplitude * std::exp(-s * s / q);
}

double ProductField::operator()(double x1, double x2) const {
    if (zero) return 0.0;
    return fx1(x1) * fx2(x2);
}

namespace {

// Support box of a product field on the quadrant: the x1-factor interval
// intersected with x1 > 0, the x2-factor interval intersected with x2 >= 0.
struct Box {
    double x1_lo, x1_hi, x2_hi;
};

Box field_box(const ProductField& f) {
    return {f.fx1.center - f.fx1.radius, f.fx1.center + f.fx1.radius,
            f.fx2.center + f.fx2.radius};
}

// Composite Simpson with an odd node count.
template <class F>
double simpson(F&& f, double a, double b, int nodes) {
    if (nodes < 3) nodes = 3;
    if (nodes % 2 == 0) ++nodes;
    const int n = nodes - 1;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

InitialData InitialData::make(const ProductField& omega0, const ProductField& rho0) {
    for (const ProductField* f : {&omega0, &rho0}) {
        if (f->zero) continue;
        if (!(f->fx1.radius > 0) || !(f->fx2.radius > 0))
            throw std::invalid_argument("InitialData: bump radii must be > 0");
        if (!(f->fx1.amplitude >= 0) || !(f->fx2.amplitude >= 0))
            throw std::invalid_argument("InitialData: bump amplitudes must be >= 0 (fields are nonnegative)");
        if (!(f->fx1.center - f->fx1.radius > 0))
            throw std::invalid_argument("InitialData: support must keep a positive distance from the x2-axis");
    }
    if (!rho0.zero && !(rho0(rho0.fx1.center, 0.0) > 0))
        throw std::invalid_argument("InitialData: rho0 must be positive somewhere on the x1-axis");

    InitialData d;
    d.omega0_ = omega0;
    d.rho0_ = rho0;

    // Joint support box of both fields; zero data keeps a nominal box so the
    // quadrature machinery stays well-defined (all integrands vanish on it).
    double x1_lo = 1e300, x1_hi = -1e300, x2_hi = 0.0;
    for (const ProductField* f : {&omega0, &rho0}) {
        if (f->zero) continue;
        const Box b = field_box(*f);
        x1_lo = std::min(x1_lo, b.x1_lo);
        x1_hi = std::max(x1_hi, b.x1_hi);
        x2_hi = std::max(x2_hi, b.x2_hi);
    }
    if (omega0.zero && rho0.zero) {
        x1_lo = 1.0;
        x1_hi = 2.0;
        x2_hi = 1.0;
    }
    d.strip_ = SupportStrip::from_box(x1_lo, x1_hi, x2_hi);
    return d;
}

InitialData InitialData::boussinesq_default() {
    ProductField rho0;
    rho0.zero = false;
    rho0.fx1 = {2.0, 1.0, 1.0};
    rho0.fx2 = {0.0, 2.0, 1.0};
    return make(ProductField{}, rho0);
}

InitialData InitialData::euler_default() {
    ProductField om0;
    om0.zero = false;
    om0.fx1 = {2.0, 1.0, 1.0};
    om0.fx2 = {0.0, 2.0, 1.0};
    return make(om0, ProductField{});
}

double InitialData::omega0_x(double x1, double x2) const { return omega0_(x1, x2); }
double InitialData::rho0_x(double x1, double x2) const { return rho0_(x1, x2); }

// The z-frame evaluators gate on the support section first: points outside
// map to 0 without touching z_to_x, which keeps them total even for the huge
// |z2| arguments the reconstruction formulas produce.

double InitialData::omega0_z(double z1, double z2) const {
    double lo, hi;
    if (omega0_.zero || !strip_.section(z1, lo, hi) || z2 < lo || z2 > hi) return 0.0;
    const PointX p = z_to_x({z1, z2});
    return omega0_(p.x1, p.x2);
}

double InitialData::rho0_z(double z1, double z2) const {
    double lo, hi;
    if (rho0_.zero || !strip_.section(z1, lo, hi) || z2 < lo || z2 > hi) return 0.0;
    const PointX p = z_to_x({z1, z2});
    return rho0_(p.x1, p.x2);
}

double InitialData::f1_z(double z1, double z2) const {
    double lo, hi;
    if (rho0_.zero || !strip_.section(z1, lo, hi) || z2 < lo || z2 > hi) return 0.0;
    const PointX p = z_to_x({z1, z2});
    return rho0_(p.x1, p.x2) / p.x1; // e^{(z2-z1)/2} = 1/x1
}

double InitialData::eval(Field f, Frame fr, double a, double b) const {
    if (fr == Frame::z) {
        switch (f) {
        case Field::omega0: return omega0_z(a, b);
        case Field::rho0: return rho0_z(a, b);
        case Field::f1: return f1_z(a, b);
        }
    }
    switch (f) {
    case Field::omega0: return omega0_(a, b);
    case Field::rho0: return rho0_(a, b);
    case Field::f1: return a > 0 ? rho0_(a, b) / a : 0.0;
    }
    return 0.0;
}

double InitialData::sup_omega0() const {
    if (omega0_.zero) return 0.0;
    return omega0_.fx1.amplitude * omega0_.fx2.amplitude;
}

double InitialData::sup_f1() const {
    if (rho0_.zero) return 0.0;
    // f1 = rho0/x1; scan the support box (the maximizer in x1 is not at the
    // bump center because of the 1/x1 factor).
    const Box b = field_box(rho0_);
    const double x1_lo = std::max(b.x1_lo, 1e-12);
    double best = 0.0;
    const int n = 4097;
    for (int i = 0; i <= n; ++i) {
        const double x1 = x1_lo + (b.x1_hi - x1_lo) * i / n;
        if (x1 <= 0) continue;
        best = std::max(best, rho0_.fx1(x1) / x1);
    }
    double best2 = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x2 = b.x2_hi * i / n;
        best2 = std::max(best2, rho0_.fx2(x2));
    }
    return best * best2;
}

double InitialData::axis_mass(Field f, double z1, int nodes) const {
    if (f == Field::rho0)
        throw std::invalid_argument("axis_mass: only omega0 and f1 have certified line masses");
    double lo, hi;
    if (!strip_.section(z1, lo, hi)) return 0.0;
    if (f == Field::omega0 && omega0_.zero) return 0.0;
    if (f == Field::f1 && rho0_.zero) return 0.0;
    auto integrand = [&](double u) {
        return f == Field::omega0 ? omega0_z(z1, u) : f1_z(z1, u);
    };
    return simpson(integrand, lo, hi, nodes);
}

double InitialData::axis_mass_limit(Field f, int nodes) const {
    if (f == Field::rho0)
        throw std::invalid_argument("axis_mass_limit: only omega0 and f1 have certified line masses");
    const ProductField& pf = (f == Field::omega0) ? omega0_ : rho0_;
    if (pf.zero) return 0.0;
    const Box b = field_box(pf);
    const double lo = std::max(b.x1_lo, 1e-12);
    // Substituting z2 = z1 - 2 log x1 sends dz2 -> 2 dx1/x1 and, for f1, the
    // extra e^{(z2-z1)/2} factor -> 1/x1; letting z1 -> -inf puts x2 -> 0.
    auto integrand = [&](double x1) {
        const double v = pf(x1, 0.0);
        return f == Field::omega0 ? 2.0 * v / x1 : 2.0 * v / (x1 * x1);
    };
    return simpson(integrand, lo, b.x1_hi, nodes);
}

double InitialData::c_omega() const { return 0.5 * axis_mass_limit(Field::omega0); }
double InitialData::c_rho() const { return 0.5 * axis_mass_limit(Field::f1); }

double InitialData::mass_threshold(Field f) const {
    const double c = (f == Field::omega0) ? c_omega() : c_rho();
    if (!(c > 0))
        throw std::invalid_argument("mass_threshold: field has no axis mass (does not touch the x1-axis)");
    // The mass decays to 0 at z1_max and tends to its positive limit on the
    // left; scan right-to-left for the first point at or above c, then refine.
    const double right = strip_.z1_max;
    const double left = right - 40.0;
    const int n = 4000;
    const double h = (right - left) / n;
    int i = n;
    while (i >= 0 && axis_mass(f, left + i * h) < c) --i;
    if (i < 0)
        throw std::runtime_error("mass_threshold: axis mass never reaches its certified bound");
    if (i == n) return right;
    double a = left + i * h, b = a + h; // mass(a) >= c > mass(b)
    for (int k = 0; k < 60; ++k) {
        const double m = 0.5 * (a + b);
        (axis_mass(f, m) >= c ? a : b) = m;
    }
    return a;
}

KnComponents kn_components(const std::vector<double>& values, int n1, int n2,
                           double x1_0, double dx1, double x2_0, double dx2) {
    (void)x2_0;
    if (n1 < 2 || n2 < 2 || values.size() != static_cast<size_t>(n1) * n2)
        throw std::invalid_argument("kn_components: grid shape mismatch");
    KnComponents k;
    double sup = 0.0, sup_grad = 0.0, min_x1 = 0.0;
    long support_cells = 0;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const double v = values[static_cast<size_t>(i) * n2 + j];
            if (v != 0.0) {
                ++support_cells;
                const double x1 = x1_0 + i * dx1;
                if (k.empty_support || x1 < min_x1) min_x1 = x1;
                k.empty_support = false;
            }
            sup = std::max(sup, std::abs(v));
            if (i + 1 < n1)
                sup_grad = std::max(sup_grad,
                                    std::abs(values[static_cast<size_t>(i + 1) * n2 + j] - v) / dx1);
            if (j + 1 < n2)
                sup_grad = std::max(sup_grad,
                                    std::abs(values[static_cast<size_t>(i) * n2 + j + 1] - v) / dx2);
        }
    }
    k.cn_estimate = sup + sup_grad;
    if (!k.empty_support) {
        k.support_measure = static_cast<double>(support_cells) * dx1 * dx2;
        k.inv_delta = min_x1 > 0 ? 1.0 / min_x1 : 0.0;
    }
    return k;
}

} // namespace hypflow
