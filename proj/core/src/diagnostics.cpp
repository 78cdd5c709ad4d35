#include "hypflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear interpolation of nodal values at z, clamped to the grid range.
double interp_at(const Grid1D& g, std::span<const double> y, double z) {
    if (z <= g.zmin) return y.front();
    if (z >= g.zmax) return y.back();
    const double s = (z - g.zmin) / g.h;
    const int i = std::min(static_cast<int>(s), g.n - 2);
    const double a = s - i;
    return y[i] * (1.0 - a) + y[i + 1] * a;
}

} // namespace

FrontParams make_front_params(const InitialData& data, double B) {
    FrontParams fp;
    fp.B = B;
    fp.K = data.strip().K;
    if (!(B >= std::max(1.0, fp.K)))
        throw std::invalid_argument("front threshold B must satisfy B >= max(1, K)");
    if (data.has_omega0()) fp.Z1 = data.mass_threshold(Field::omega0);
    if (data.has_rho0()) fp.Z2 = data.mass_threshold(Field::f1);
    return fp;
}

Fronts find_fronts(const Grid1D& grid, std::span<const double> phi, double B) {
    Fronts fr;
    const int n = grid.n;
    auto H = [&](int i) { return grid.node(i) + phi[i]; };
    for (int i = 0; i + 1 < n; ++i) { // first upward crossing of -B
        const double a = H(i) + B, b = H(i + 1) + B;
        if (a == 0.0) {
            fr.F1 = grid.node(i);
            break;
        }
        if (a < 0.0 && b >= 0.0) {
            fr.F1 = grid.node(i) + grid.h * (-a) / (b - a);
            break;
        }
    }
    for (int i = n - 2; i >= 0; --i) { // last crossing of 0
        const double a = H(i), b = H(i + 1);
        if (b == 0.0) {
            fr.F2 = grid.node(i + 1);
            break;
        }
        if (a <= 0.0 && b > 0.0) {
            fr.F2 = a == 0.0 ? grid.node(i) : grid.node(i) + grid.h * (-a) / (b - a);
            break;
        }
    }
    return fr;
}

// ---------------------------------------------------------------------------
FieldReconstructor::FieldReconstructor(const InitialData& data, const Grid1D& grid,
                                       const SolverState& state)
    : data_(&data), zmin_(grid.zmin), zmax_(grid.zmax),
      phi_(grid.zmin, grid.h, state.phi), mem_(grid.zmin, grid.h, state.mem) {}

void FieldReconstructor::note_tail(double z1) const {
    if (!(z1 >= zmin_) || z1 > zmax_) tail_flag_ = true;
}

double FieldReconstructor::phi_at(double z1) const {
    note_tail(z1);
    return phi_(z1);
}

double FieldReconstructor::mem_at(double z1) const {
    note_tail(z1);
    return mem_(z1);
}

double FieldReconstructor::rho_z(double z1, double z2) const {
    return data_->rho0_z(z1, z2 - phi_at(z1));
}

double FieldReconstructor::omega_z(double z1, double z2) const {
    const double u = z2 - phi_at(z1);
    return data_->omega0_z(z1, u) + data_->f1_z(z1, u) * mem_(z1);
}

double FieldReconstructor::rho_x(double x1, double x2) const {
    if (!(x1 > 0.0)) throw std::domain_error("rho_x: x1 must be > 0");
    if (!(x2 >= 0.0)) throw std::domain_error("rho_x: x2 must be >= 0");
    const double e = std::exp(0.5 * phi_at(std::log(x1 * x2)));
    return data_->rho0_x(x1 * e, x2 / e);
}

double FieldReconstructor::omega_x(double x1, double x2) const {
    if (!(x1 > 0.0)) throw std::domain_error("omega_x: x1 must be > 0");
    if (!(x2 >= 0.0)) throw std::domain_error("omega_x: x2 must be >= 0");
    const double z1 = std::log(x1 * x2);
    const double e = std::exp(0.5 * phi_at(z1));
    const double X1 = x1 * e, X2 = x2 / e;
    // The x-frame memory factor is e^{-phi/2} * I (the time integral of
    // e^{-(phi(t)-phi(s))/2}); together with 1/x1 it multiplies rho0.
    return data_->omega0_x(X1, X2) + data_->rho0_x(X1, X2) / x1 * (mem_(z1) / e);
}

// ---------------------------------------------------------------------------
DiagnosticsEngine::DiagnosticsEngine(const NonlocalOmega& op, FrontParams fp)
    : op_(&op), fp_(fp) {
    const InitialData& d = op.data();
    mixed_ = d.has_omega0() && d.has_rho0();
    z_threshold_ = d.has_omega0() ? fp.Z1 : fp.Z2;
    if (!d.has_rho0())
        for (double v : op.line_max_omega0()) sup_transport_ = std::max(sup_transport_, v);

    // Boundary samples of the support box; each moves on x1(t) = x1(0)
    // e^{-phi(z1(0),t)/2} with the conserved label z1(0) = log(x1(0) x2(0)).
    const SupportStrip& s = d.strip();
    const int m = 33;
    auto add = [&](double x1, double x2) {
        traj_x1_.push_back(x1);
        traj_z1_.push_back(std::log(x1 * x2)); // -inf on the axis, clamped at use
    };
    for (int j = 0; j < m; ++j) {
        const double a = j / static_cast<double>(m - 1);
        const double x1 = s.x1_min + a * (s.x1_max - s.x1_min);
        add(x1, 0.0);
        add(x1, s.x2_max);
        const double x2 = a * s.x2_max;
        add(s.x1_min, x2);
        add(s.x1_max, x2);
    }
}

double DiagnosticsEngine::sup_norm_omega(std::span<const double> mem) const {
    const int n = op_->grid().n;
    const InitialData& d = op_->data();
    if (!d.has_rho0()) return sup_transport_; // pure transport: constant in t
    double best = 0.0;
    if (!d.has_omega0()) {
        const std::vector<double>& lf = op_->line_max_f1();
        for (int i = 0; i < n; ++i) best = std::max(best, lf[i] * mem[i]);
        return best;
    }
    for (int i = 0; i < n; ++i) best = std::max(best, op_->line_max_combined(i, mem[i]));
    return best;
}

void DiagnosticsEngine::row(const SolverState& state, std::span<const double> omega, double bkm,
                            SeriesRow& out, AuxRow& aux) const {
    const Grid1D& g = op_->grid();
    const int n = g.n;
    const std::vector<double>& phi = state.phi;

    out = SeriesRow{};
    aux = AuxRow{};

    out.t = state.t;
    out.phi_left = phi[0];
    out.sup_omega = sup_norm_omega(state);
    out.bkm = bkm;

    const Fronts fr = find_fronts(g, phi, fp_.B);
    out.F1 = fr.F1;
    out.F2 = fr.F2;

    const MonotoneCubic hat(g.zmin, g.h, phi);
    double delta = kInf;
    for (size_t k = 0; k < traj_x1_.size(); ++k)
        delta = std::min(delta, traj_x1_[k] * std::exp(-0.5 * hat(traj_z1_[k])));
    out.delta = delta;

    if (!std::isnan(z_threshold_)) {
        double gmin = kInf;
        bool any = false;
        for (int i = 0; i < n; ++i) {
            const double z = g.node(i);
            if (z > z_threshold_) break;
            if (z + phi[i] <= -fp_.B) {
                gmin = std::min(gmin, omega[i]);
                any = true;
            }
        }
        if (any) out.gamma_est = gmin;
    }

    out.tail_bound = op_->tail_bound(out.sup_omega, phi[0]);

    aux.omega_left = omega[0];
    aux.mem_left = state.mem[0];

    double dmin = kInf, dmax = -kInf;
    std::optional<double> dmin_left;
    for (int i = 0; i + 1 < n; ++i) {
        const double dh = 1.0 + (phi[i + 1] - phi[i]) / g.h;
        dmin = std::min(dmin, dh);
        dmax = std::max(dmax, dh);
        if (fr.F1 && g.node(i + 1) <= *fr.F1) dmin_left = dmin_left ? std::min(*dmin_left, dh) : dh;
    }
    aux.dh_min_all = dmin;
    aux.dh_max_all = dmax;
    aux.dh_min_left_F1 = dmin_left;

    if (fr.F1) aux.omega_at_F1 = interp_at(g, omega, *fr.F1);
    if (!std::isnan(z_threshold_) && z_threshold_ >= g.zmin && z_threshold_ <= g.zmax)
        aux.h_at_Zs = z_threshold_ + interp_at(g, phi, z_threshold_);
    if (fr.F2) {
        const double lo = *fr.F2, hi = std::min(*fr.F2 + 1.0, g.zmax);
        double pmin = std::min(interp_at(g, phi, lo), interp_at(g, phi, hi));
        const int i0 = std::max(0, static_cast<int>(std::ceil((lo - g.zmin) / g.h - 1e-12)));
        const int i1 = std::min(n - 1, static_cast<int>(std::floor((hi - g.zmin) / g.h + 1e-12)));
        for (int i = i0; i <= i1; ++i) pmin = std::min(pmin, phi[i]);
        aux.phi_min_f2win = pmin;
    }

    long viol = 0;
    for (int i = 0; i + 1 < n; ++i)
        if (omega[i + 1] > omega[i]) ++viol;
    aux.omega_z1_violations = viol;
}

// ---------------------------------------------------------------------------
FrontLawReport front_law_checks(const RunResult& r, double slope_tol) {
    FrontLawReport rep;
    rep.slope_tol = slope_tol;
    const DiagnosticsSeries& S = r.series;
    const std::vector<AuxRow>& A = r.aux;
    const double ekb = std::exp(r.K - r.B);

    size_t s0 = S.size();
    for (size_t k = 0; k < S.size(); ++k)
        if (S[k].F1 && A[k].h_at_Zs && *A[k].h_at_Zs >= 0.0) {
            s0 = k;
            break;
        }
    rep.t0_found = s0 < S.size();
    if (!rep.t0_found) return rep;
    rep.t0 = S[s0].t;

    double eps = 0.0;
    bool slope_ok = true, gpos = true, gany = false;
    double gmin = kInf, gmax = -kInf;
    for (size_t k = s0; k < S.size(); ++k) {
        if (A[k].dh_min_left_F1) {
            eps = std::max(eps, 1.0 - *A[k].dh_min_left_F1);
            if (!(*A[k].dh_min_left_F1 > 0.0)) slope_ok = false;
        }
        if (A[k].dh_max_all > 1.0 + slope_tol) slope_ok = false;
        if (S[k].gamma_est) {
            gany = true;
            gmin = std::min(gmin, *S[k].gamma_est);
            gmax = std::max(gmax, *S[k].gamma_est);
            if (!(*S[k].gamma_est > 0.0)) gpos = false;
        } else {
            gpos = false;
        }
    }
    rep.eps_meas = eps;
    rep.slope_in_range = slope_ok;
    rep.gamma_positive = gany && gpos;
    rep.gamma_min = gany ? gmin : 0.0;
    rep.gamma_max = gany ? gmax : 0.0;
    if (gany && gmin > 0.0) rep.eps_paper = (1.0 / gmin + rep.t0) * ekb;

    if (eps < 1.0) {
        const double rhs = ekb / (1.0 - eps) * (1.0 + slope_tol);
        for (size_t k = s0; k < S.size(); ++k) {
            if (!A[k].omega_at_F1) continue;
            const double lhs = A[k].omega_left - *A[k].omega_at_F1;
            rep.tail_margin = std::max(rep.tail_margin, lhs / rhs);
            if (lhs > rhs) rep.tail_ok = false;
        }
    } else {
        rep.tail_ok = false;
    }

    double gate = -10.0;
    if (!std::isnan(r.Z_threshold)) gate = std::min(gate, r.Z_threshold);
    for (size_t k = 0; k < S.size(); ++k) {
        if (!S[k].F2 || !A[k].phi_min_f2win || *S[k].F2 > gate) continue;
        ++rep.lemma41_checked;
        if (*A[k].phi_min_f2win < 0.5 * std::abs(*S[k].F2)) rep.lemma41_ok = false;
    }
    return rep;
}

MonotonicityReport monotonicity_suite(const RunResult& r) {
    MonotonicityReport rep;
    const DiagnosticsSeries& S = r.series;
    const std::vector<AuxRow>& A = r.aux;
    auto slack = [](double v) { return 1e-12 * std::max(1.0, std::abs(v)); };
    for (size_t k = 0; k + 1 < S.size(); ++k) {
        if (S[k + 1].phi_left < S[k].phi_left - slack(S[k].phi_left)) ++rep.phi_left_drops;
        if (A[k + 1].mem_left < A[k].mem_left - slack(A[k].mem_left)) ++rep.mem_left_drops;
        if (S[k + 1].bkm < S[k].bkm) ++rep.bkm_drops;
        if (S[k].F2 && S[k + 1].F2 &&
            *S[k + 1].F2 > *S[k].F2 + 1e-9 * std::max(1.0, std::abs(*S[k].F2)))
            ++rep.f2_increases;
    }
    for (const AuxRow& a : A) rep.omega_z1_violations += a.omega_z1_violations;
    return rep;
}

GrowthFit growth_fit(const DiagnosticsSeries& series, FitQuantity q, double t_lo, double t_hi) {
    std::vector<double> ts, vs;
    for (const SeriesRow& s : series) {
        if (s.t < t_lo || s.t > t_hi) continue;
        if (q == FitQuantity::phi_left) {
            vs.push_back(s.phi_left);
        } else { // inv_delta and grad_proxy are both fitted as log(1/delta)
            if (!(s.delta > 0.0)) continue;
            vs.push_back(-std::log(s.delta));
        }
        ts.push_back(s.t);
    }
    if (ts.size() < 10)
        throw std::invalid_argument("growth_fit needs at least 10 samples in [t_lo, t_hi]");

    const size_t m = ts.size();
    double tbar = 0.0, vbar = 0.0;
    for (size_t k = 0; k < m; ++k) {
        tbar += ts[k];
        vbar += vs[k];
    }
    tbar /= m;
    vbar /= m;
    double stt = 0.0, stv = 0.0, svv = 0.0;
    for (size_t k = 0; k < m; ++k) {
        stt += (ts[k] - tbar) * (ts[k] - tbar);
        stv += (ts[k] - tbar) * (vs[k] - vbar);
        svv += (vs[k] - vbar) * (vs[k] - vbar);
    }
    GrowthFit fit;
    fit.rate = stt > 0.0 ? stv / stt : 0.0;
    fit.quality = svv > 0.0 ? (stv * stv) / (stt * svv) : 1.0;
    return fit;
}

} // namespace hypflow
