#include "hypflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypflow {

double Weight::operator()(double z2) const {
    const double m = std::exp(-std::abs(z2));
    const double s = 2.0 * m / (1.0 + m * m);
    return kind == WeightKind::sech ? s : s * s;
}

Grid1D Grid1D::uniform(double zmin, double zmax, int n) {
    if (!(zmin < zmax) || n < 2)
        throw std::invalid_argument("Grid1D::uniform: need zmin < zmax and n >= 2");
    Grid1D g;
    g.zmin = zmin;
    g.zmax = zmax;
    g.n = n;
    g.h = (zmax - zmin) / (n - 1);
    return g;
}

SimpsonRule SimpsonRule::make(double lo, double hi, int n) {
    if (!(hi >= lo)) throw std::invalid_argument("SimpsonRule::make: need hi >= lo");
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n;
    SimpsonRule r;
    r.lo = lo;
    r.hi = hi;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double h = (hi - lo) / (n - 1);
    for (int j = 0; j < n; ++j) {
        r.nodes[j] = lo + h * j;
        r.weights[j] = (j == 0 || j == n - 1) ? h / 3.0 : (j % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    }
    return r;
}

double weighted_section_integral(const SimpsonRule& rule, std::span<const double> f,
                                 const Weight& w, double shift) {
    if (f.size() != rule.nodes.size())
        throw std::invalid_argument("weighted_section_integral: integrand size mismatch");
    double acc = 0.0;
    for (size_t j = 0; j < f.size(); ++j)
        acc += rule.weights[j] * f[j] * w(rule.nodes[j] + shift);
    return acc;
}

namespace {

// Golden-section maximization of a unimodal bracket.
template <class F>
double golden_max(F&& f, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

// Max of g over the rule's section: 4x-refined node scan + golden polish
// around the discrete argmax.
template <class F>
double section_max(F&& g, double lo, double hi, int n_u) {
    const int n = 4 * (n_u - 1) + 1;
    const double h = (hi - lo) / (n - 1);
    double best = 0.0;
    int arg = 0;
    for (int j = 0; j < n; ++j) {
        const double v = g(lo + h * j);
        if (v > best) {
            best = v;
            arg = j;
        }
    }
    const double a = std::max(lo, lo + h * (arg - 1));
    const double b = std::min(hi, lo + h * (arg + 1));
    return std::max(best, golden_max(g, a, b));
}

} // namespace

NonlocalOmega::NonlocalOmega(const InitialData& data, Weight weight, Grid1D grid, int n_u)
    : data_(data), weight_(weight), grid_(grid), n_u_(n_u) {
    if (n_u_ < 3) n_u_ = 3;
    if (n_u_ % 2 == 0) ++n_u_;
    if (grid_.zmax < data_.strip().z1_max)
        throw std::invalid_argument("NonlocalOmega: grid must cover the support (zmax >= z1_max)");

    lines_.resize(grid_.n);
    line_max_omega0_.assign(grid_.n, 0.0);
    line_max_f1_.assign(grid_.n, 0.0);
    for (int i = 0; i < grid_.n; ++i) {
        const double z1 = grid_.node(i);
        double lo, hi;
        if (!data_.strip().section(z1, lo, hi) || !(hi > lo)) continue;
        Line& line = lines_[i];
        line.empty = false;
        line.d_min = z1 - hi;
        line.d_max = z1 - lo;
        const SimpsonRule rule = SimpsonRule::make(lo, hi, n_u_);
        const int m = static_cast<int>(rule.nodes.size());
        line.a.resize(m);
        line.b.resize(m);
        line.epd.resize(m);
        line.emd.resize(m);
        for (int j = 0; j < m; ++j) {
            const double u = rule.nodes[j];
            const double d = z1 - u;
            line.a[j] = rule.weights[j] * data_.omega0_z(z1, u);
            line.b[j] = rule.weights[j] * data_.f1_z(z1, u);
            line.epd[j] = std::exp(d);
            line.emd[j] = std::exp(-d);
        }
        line_max_omega0_[i] =
            section_max([&](double u) { return data_.omega0_z(z1, u); }, lo, hi, n_u_);
        line_max_f1_[i] =
            section_max([&](double u) { return data_.f1_z(z1, u); }, lo, hi, n_u_);
    }
}

bool NonlocalOmega::line_section(int i, double& lo, double& hi) const {
    return data_.strip().section(grid_.node(i), lo, hi) && lo < hi;
}

double NonlocalOmega::line_max_combined(int i, double mem) const {
    double lo, hi;
    if (!line_section(i, lo, hi)) return 0.0;
    const double z1 = grid_.node(i);
    auto g = [&](double u) { return std::abs(data_.omega0_z(z1, u) + data_.f1_z(z1, u) * mem); };
    return section_max(g, lo, hi, n_u_);
}

double NonlocalOmega::line_accumulate(const Line& line, double H, double mem) const {
    // s = u + phi = H - d; m = e^{-|s|} built from one exp of H per line.
    const size_t m = line.a.size();
    const bool squared = weight_.kind == WeightKind::sech_squared;
    double acc = 0.0;
    auto add = [&](size_t j, double em) {
        double w = 2.0 * em / (1.0 + em * em);
        if (squared) w *= w;
        acc += (line.a[j] + line.b[j] * mem) * w;
    };
    if (H >= line.d_max) {
        const double E = std::exp(-H);
        for (size_t j = 0; j < m; ++j) add(j, E * line.epd[j]);
    } else if (H <= line.d_min) {
        const double E = std::exp(H);
        for (size_t j = 0; j < m; ++j) add(j, E * line.emd[j]);
    } else {
        const double En = std::exp(-H), Ep = std::exp(H);
        for (size_t j = 0; j < m; ++j)
            add(j, std::min(En * line.epd[j], Ep * line.emd[j]));
    }
    return acc;
}

void NonlocalOmega::inner_profile_W(std::span<const double> phi, std::span<const double> mem,
                                    std::span<double> W) const {
    const size_t n = static_cast<size_t>(grid_.n);
    if (phi.size() != n || mem.size() != n || W.size() != n)
        throw std::invalid_argument("inner_profile_W: state arrays must match the grid");
    // Lines whose weight argument exceeds this in magnitude everywhere
    // contribute below the double underflow range even against e^{phi/2}-sized
    // memory factors (see tail_bound); skip them outright.
    constexpr double arg_cut = 1500.0;
    for (size_t i = 0; i < n; ++i) {
        const Line& line = lines_[i];
        if (line.empty) {
            W[i] = 0.0;
            continue;
        }
        const double H = grid_.node(static_cast<int>(i)) + phi[i];
        if (H - line.d_max > arg_cut || line.d_min - H > arg_cut) {
            W[i] = 0.0;
            continue;
        }
        W[i] = line_accumulate(line, H, mem[i]);
    }
}

void NonlocalOmega::omega_profile(std::span<const double> W, std::span<double> omega) const {
    const size_t n = static_cast<size_t>(grid_.n);
    if (W.size() != n || omega.size() != n)
        throw std::invalid_argument("omega_profile: array sizes must match the grid");
    const double c = weight_.prefactor() * 0.5 * grid_.h;
    omega[n - 1] = 0.0;
    for (size_t i = n - 1; i-- > 0;)
        omega[i] = omega[i + 1] + c * (W[i] + W[i + 1]);
}

void NonlocalOmega::omega(std::span<const double> phi, std::span<const double> mem,
                          std::span<double> omega_out, std::span<double> scratch) const {
    inner_profile_W(phi, mem, scratch);
    omega_profile(scratch, omega_out);
}

double NonlocalOmega::tail_bound(double sup_omega, double sup_phi) const {
    if (!(sup_omega > 0)) return 0.0;
    const double log_bound = std::log(2.0 * sup_omega) + grid_.zmin + data_.strip().K + sup_phi;
    if (log_bound > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_bound);
}

} // namespace hypflow
