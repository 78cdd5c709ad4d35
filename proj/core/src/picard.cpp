#include "hypflow/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypflow {

namespace {

// sup_z |omega0(z) + f1(z) * mem(z1)| for one time slice, factorized by which
// data profiles are present (the shift by phi does not move line suprema).
double slice_sup_omega(const NonlocalOmega& op, std::span<const double> mem) {
    const InitialData& d = op.data();
    const int n = op.grid().n;
    double sup = 0.0;
    if (!d.has_rho0()) {
        for (double v : op.line_max_omega0()) sup = std::max(sup, v);
    } else if (!d.has_omega0()) {
        const auto& f1 = op.line_max_f1();
        for (int i = 0; i < n; ++i) sup = std::max(sup, f1[i] * std::abs(mem[i]));
    } else {
        for (int i = 0; i < n; ++i) sup = std::max(sup, op.line_max_combined(i, mem[i]));
    }
    return sup;
}

} // namespace

std::vector<double> iterate_gap(std::span<const double> omega_n,
                                std::span<const double> omega_prev, int n_z1, int n_z2) {
    if (n_z1 < 1 || n_z2 < 1)
        throw std::invalid_argument("iterate_gap: grid sizes must be positive");
    const size_t need = static_cast<size_t>(n_z1) * n_z2;
    if (omega_n.size() != need || omega_prev.size() != need)
        throw std::invalid_argument("iterate_gap: iterate shapes do not match the grid");

    std::vector<double> g(n_z1, 0.0);
    for (int i = 0; i < n_z1; ++i) {
        const size_t base = static_cast<size_t>(i) * n_z2;
        double m = 0.0;
        for (int j = 0; j < n_z2; ++j)
            m = std::max(m, std::abs(omega_n[base + j] - omega_prev[base + j]));
        g[i] = m;
    }
    for (int i = n_z1 - 2; i >= 0; --i) g[i] = std::max(g[i], g[i + 1]);
    return g;
}

PicardResult picard_solve(const InitialData& data, Weight weight, double T,
                          const PicardGrids& grids, int max_iter, double gap_tol,
                          double ceiling) {
    if (!(T > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
    if (grids.n_time < 1) throw std::invalid_argument("picard_solve: n_time must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
    if (!(gap_tol > 0.0)) throw std::invalid_argument("picard_solve: gap_tol must be positive");
    if (!(ceiling > 0.0)) throw std::invalid_argument("picard_solve: ceiling must be positive");

    NonlocalOmega op(data, weight, grids.z, grids.n_u);
    const int n = grids.z.n;
    const int K = grids.n_time + 1;
    const double dt = T / grids.n_time;
    const size_t total = static_cast<size_t>(K) * n;

    PicardResult out;
    out.report.dt = dt;
    out.report.note =
        "gap and sup norms are taken over the truncated grid, not the full half-plane";

    std::vector<double> t_nodes(K);
    for (int k = 0; k < K; ++k) t_nodes[k] = (k == K - 1) ? T : dt * k;

    // Seed Phi_0 = 0, I_0 = 0, so the zeroth iterate is the initial data.
    std::vector<double> phi_prev(total, 0.0), mem_prev(total, 0.0);
    std::vector<double> phi_prev2(total, 0.0), mem_prev2(total, 0.0);
    std::vector<double> phi_cur(total, 0.0), mem_cur(total, 0.0);
    std::vector<double> omega_field(total, 0.0);
    std::vector<double> scratch(n), line_gap(n);

    std::vector<double> M_run(K, 0.0), L_run(K, 0.0), Gam_run(K, 0.0);
    const int gap_stride = 8;

    auto row = [&](std::vector<double>& f, int k) {
        return std::span<double>(f.data() + static_cast<size_t>(k) * n, n);
    };
    auto crow = [&](const std::vector<double>& f, int k) {
        return std::span<const double>(f.data() + static_cast<size_t>(k) * n, n);
    };

    for (int it = 1; it <= max_iter; ++it) {
        out.report.iterations_used = it;

        // I_n = Int_0^t e^{Phi_{n-1}/2} ds, trapezoid per column.
        for (int i = 0; i < n; ++i) mem_cur[i] = 0.0;
        for (int k = 1; k < K; ++k) {
            const size_t r = static_cast<size_t>(k) * n, p = r - n;
            for (int i = 0; i < n; ++i)
                mem_cur[r + i] = mem_cur[p + i] + 0.5 * dt * (std::exp(0.5 * phi_prev[p + i]) +
                                                              std::exp(0.5 * phi_prev[r + i]));
        }

        // Omega_n slice by slice, then Phi_n = 2 Int_0^t Omega_n ds.
        for (int k = 0; k < K; ++k)
            op.omega(crow(phi_prev, k), crow(mem_cur, k), row(omega_field, k), scratch);
        for (int i = 0; i < n; ++i) phi_cur[i] = 0.0;
        for (int k = 1; k < K; ++k) {
            const size_t r = static_cast<size_t>(k) * n, p = r - n;
            for (int i = 0; i < n; ++i)
                phi_cur[r + i] = phi_cur[p + i] + dt * (omega_field[p + i] + omega_field[r + i]);
        }

        IterationRecord rec;

        // Running suprema over iterates m <= n, per time node.
        double phi_gap = 0.0;
        for (int k = 0; k < K; ++k) {
            const size_t r = static_cast<size_t>(k) * n;
            double gam = 0.0, lsl = 0.0;
            for (int i = 0; i < n; ++i) {
                gam = std::max(gam, std::abs(omega_field[r + i]));
                lsl = std::max(lsl, std::abs(phi_cur[r + i]));
                phi_gap = std::max(phi_gap, std::abs(phi_cur[r + i] - phi_prev[r + i]));
            }
            M_run[k] = std::max(M_run[k], slice_sup_omega(op, crow(mem_cur, k)));
            L_run[k] = std::max(L_run[k], lsl);
            Gam_run[k] = std::max(Gam_run[k], gam);
        }
        rec.M = M_run;
        rec.L = L_run;
        rec.Gamma = Gam_run;
        rec.M_T = M_run[K - 1];
        rec.L_T = L_run[K - 1];
        rec.Gamma_T = Gam_run[K - 1];
        rec.phi_gap = phi_gap;

        // Gap of the omega iterates on sampled slices: pointwise sup over the
        // section images of both shifts, per line, then running sup from the
        // right; the norm is the left-edge value.
        double omega_gap = 0.0;
        for (int k = 0; k < K; k = (k + gap_stride < K || k == K - 1) ? k + gap_stride : K - 1) {
            const size_t r = static_cast<size_t>(k) * n;
            for (int i = 0; i < n; ++i) {
                double lo = 0.0, hi = 0.0, g = 0.0;
                if (op.line_section(i, lo, hi)) {
                    const double z1 = grids.z.node(i);
                    const double pa = phi_prev[r + i], pb = phi_prev2[r + i];
                    const double ia = mem_cur[r + i], ib = mem_prev[r + i];
                    const double du = (hi - lo) / (op.n_u() - 1);
                    auto val = [&](double z2, double p, double m) {
                        return data.omega0_z(z1, z2 - p) + data.f1_z(z1, z2 - p) * m;
                    };
                    for (int j = 0; j < op.n_u(); ++j) {
                        const double u = lo + du * j;
                        for (double z2 : {u + pa, u + pb})
                            g = std::max(g, std::abs(val(z2, pa, ia) - val(z2, pb, ib)));
                    }
                }
                line_gap[i] = g;
            }
            for (int i = n - 2; i >= 0; --i) line_gap[i] = std::max(line_gap[i], line_gap[i + 1]);
            omega_gap = std::max(omega_gap, line_gap[0]);
        }
        rec.omega_gap = omega_gap;

        const double l_prev_T =
            out.report.iterations.empty() ? 0.0 : out.report.iterations.back().L_T;
        const double denom = (1.0 + l_prev_T) * rec.M_T;
        rec.fitted_C = denom > 0.0 ? rec.Gamma_T / denom : 0.0;

        out.report.iterations.push_back(std::move(rec));

        if (M_run[K - 1] > ceiling) {
            out.report.diverged = true;
            break;
        }
        if (phi_gap <= gap_tol) {
            out.report.converged = true;
            break;
        }
        if (it == max_iter) break;

        std::swap(phi_prev2, phi_prev);
        std::swap(mem_prev2, mem_prev);
        std::swap(phi_prev, phi_cur);
        std::swap(mem_prev, mem_cur);
    }

    // Memory integral of the returned phase (self-consistent, one more pass).
    std::vector<double> mem_final(total, 0.0);
    for (int k = 1; k < K; ++k) {
        const size_t r = static_cast<size_t>(k) * n, p = r - n;
        for (int i = 0; i < n; ++i)
            mem_final[r + i] = mem_final[p + i] + 0.5 * dt * (std::exp(0.5 * phi_cur[p + i]) +
                                                              std::exp(0.5 * phi_cur[r + i]));
    }

    out.phi = SpaceTimeField{grids.z, t_nodes, std::move(phi_cur)};
    out.mem = SpaceTimeField{grids.z, std::move(t_nodes), std::move(mem_final)};
    return out;
}

AprioriChecks apriori_monitor(const IterationReport& report) {
    AprioriChecks out;
    const double dt = report.dt;
    for (const auto& rec : report.iterations) {
        const int K = static_cast<int>(rec.L.size());
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            if (k > 0) acc += 0.5 * dt * (rec.Gamma[k - 1] + rec.Gamma[k]);
            const double slack = rec.L[k] - 2.0 * acc;
            out.lcon_worst = std::max(out.lcon_worst, slack);
            if (slack > 1e-12 * (1.0 + std::abs(rec.L[k]))) out.lcon_ok = false;
        }
    }
    const auto& its = report.iterations;
    if (its.size() >= 3) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (size_t m = its.size() - 3; m < its.size(); ++m) {
            lo = std::min(lo, its[m].fitted_C);
            hi = std::max(hi, its[m].fitted_C);
        }
        out.c_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
        out.c_stable = out.c_spread <= 0.2;
    }
    return out;
}

} // namespace hypflow
