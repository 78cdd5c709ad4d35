#include <doctest.h>

#include "hypflow/picard.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hypflow;

namespace {

PicardGrids small_grids(InitialData const& data, double zmin, int n, int n_u, int n_time) {
    PicardGrids g;
    g.z = Grid1D::uniform(zmin, data.strip().z1_max + 1.0, n);
    g.n_u = n_u;
    g.n_time = n_time;
    return g;
}

} // namespace

TEST_CASE("zero data converges in one iteration with mem = t") {
    ProductField none;
    InitialData data = InitialData::make(none, none);
    PicardGrids g = small_grids(data, -8.0, 33, 17, 16);

    PicardResult pr = picard_solve(data, Weight{}, 1.0, g, 10, 1e-12);
    CHECK(pr.report.converged);
    CHECK_FALSE(pr.report.diverged);
    CHECK(pr.report.iterations_used == 1);
    REQUIRE(pr.report.iterations.size() == 1);
    CHECK(pr.report.iterations[0].phi_gap == 0.0);
    CHECK(pr.report.iterations[0].M_T == 0.0);

    const int K = static_cast<int>(pr.phi.t.size());
    REQUIRE(K == g.n_time + 1);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < g.z.n; ++i) {
            CHECK(pr.phi.at(k, i) == 0.0);
            CHECK(pr.mem.at(k, i) == doctest::Approx(pr.phi.t[k]).epsilon(1e-12));
        }
    CHECK(pr.phi.t.back() == 1.0);
}

TEST_CASE("the first iterate reproduces the explicit formula") {
    InitialData data = InitialData::boussinesq_default();
    PicardGrids g = small_grids(data, -15.0, 129, 33, 32);
    const double T = 0.4;

    PicardResult pr = picard_solve(data, Weight{}, T, g, 1, 1e-300);
    CHECK(pr.report.iterations_used == 1);
    CHECK_FALSE(pr.report.converged);

    // manual first iterate: I_1 = t, Omega_1 per slice from (phi = 0, mem = t),
    // Phi_1 = 2 * time-trapezoid of Omega_1
    NonlocalOmega op(data, Weight{}, g.z, g.n_u);
    const int n = g.z.n;
    const int K = g.n_time + 1;
    std::vector<double> zeros(n, 0.0), mem(n), om_prev(n), om_cur(n), scratch(n);
    std::vector<double> phi_manual(static_cast<size_t>(K) * n, 0.0);
    op.omega(zeros, zeros, om_prev, scratch);
    for (int k = 1; k < K; ++k) {
        const double tk = pr.phi.t[k], dt = tk - pr.phi.t[k - 1];
        std::fill(mem.begin(), mem.end(), tk);
        op.omega(zeros, mem, om_cur, scratch);
        for (int i = 0; i < n; ++i)
            phi_manual[static_cast<size_t>(k) * n + i] =
                phi_manual[static_cast<size_t>(k - 1) * n + i] +
                dt * (om_prev[i] + om_cur[i]);
        om_prev = om_cur;
    }
    double worst = 0.0;
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < n; ++i)
            worst = std::max(worst,
                             std::abs(pr.phi.at(k, i) - phi_manual[static_cast<size_t>(k) * n + i]));
    CHECK(worst <= 1e-13);

    // omega_1 - omega_0 = f1 * I, so the recorded gap is about sup(f1) * T
    const double expected_gap = data.sup_f1() * T;
    CHECK(pr.report.iterations[0].omega_gap ==
          doctest::Approx(expected_gap).epsilon(0.05));
}

TEST_CASE("iteration converges on a short window with healthy monitors") {
    InitialData data = InitialData::boussinesq_default();
    PicardGrids g = small_grids(data, -20.0, 257, 33, 64);

    PicardResult pr = picard_solve(data, Weight{}, 0.3, g, 30, 1e-10);
    const IterationReport& rep = pr.report;
    REQUIRE(rep.converged);
    CHECK_FALSE(rep.diverged);
    REQUIRE(rep.iterations.size() >= 3);
    CHECK(rep.iterations.back().phi_gap <= 1e-10);

    // running monitors are nondecreasing in the iteration index
    for (size_t m = 1; m < rep.iterations.size(); ++m) {
        CHECK(rep.iterations[m].M_T >= rep.iterations[m - 1].M_T);
        CHECK(rep.iterations[m].L_T >= rep.iterations[m - 1].L_T);
        CHECK(rep.iterations[m].Gamma_T >= rep.iterations[m - 1].Gamma_T);
    }
    // within an iteration the running profiles are nondecreasing in time
    const IterationRecord& last = rep.iterations.back();
    for (size_t k = 1; k < last.M.size(); ++k) {
        CHECK(last.M[k] >= last.M[k - 1]);
        CHECK(last.L[k] >= last.L[k - 1]);
        CHECK(last.Gamma[k] >= last.Gamma[k - 1]);
    }
    // gaps eventually decrease (contraction)
    const size_t nit = rep.iterations.size();
    CHECK(rep.iterations[nit - 1].omega_gap < rep.iterations[nit - 2].omega_gap);
    CHECK(rep.iterations[nit - 1].phi_gap < rep.iterations[nit - 2].phi_gap);
    CHECK(rep.iterations[nit - 1].phi_gap < rep.iterations[0].phi_gap);

    AprioriChecks checks = apriori_monitor(rep);
    CHECK(checks.lcon_ok);
    CHECK(checks.c_stable);
    CHECK(checks.c_spread <= 0.2);
}

TEST_CASE("a tiny ceiling reports divergence instead of throwing") {
    InitialData data = InitialData::boussinesq_default();
    PicardGrids g = small_grids(data, -10.0, 65, 17, 16);
    PicardResult pr = picard_solve(data, Weight{}, 2.0, g, 20, 1e-10, 1e-3);
    CHECK(pr.report.diverged);
    CHECK_FALSE(pr.report.converged);
    CHECK(pr.report.iterations_used >= 1);
    CHECK_FALSE(pr.report.note.empty());
}

TEST_CASE("iterate_gap: per-line sup, then running sup from the right") {
    std::vector<double> prev(12, 0.0);
    std::vector<double> cur = {
        1.0, 0.0, 0.0,  // line 0: gap 1
        0.0, 0.0, 0.0,  // line 1: gap 0
        0.0, -3.0, 0.0, // line 2: gap 3
        0.0, 0.0, 0.5,  // line 3: gap 0.5
    };
    std::vector<double> G = iterate_gap(cur, prev, 4, 3);
    REQUIRE(G.size() == 4);
    CHECK(G[0] == 3.0);
    CHECK(G[1] == 3.0);
    CHECK(G[2] == 3.0);
    CHECK(G[3] == 0.5);

    CHECK_THROWS_AS(iterate_gap(cur, prev, 4, 2), std::invalid_argument);
    std::vector<double> short_prev(11, 0.0);
    CHECK_THROWS_AS(iterate_gap(cur, short_prev, 4, 3), std::invalid_argument);
}

TEST_CASE("picard_solve validates its arguments") {
    InitialData data = InitialData::boussinesq_default();
    PicardGrids g = small_grids(data, -10.0, 65, 17, 16);
    CHECK_THROWS_AS(picard_solve(data, Weight{}, -1.0, g, 10, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(picard_solve(data, Weight{}, 0.5, g, 0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(picard_solve(data, Weight{}, 0.5, g, 10, -1e-9), std::invalid_argument);
    CHECK_THROWS_AS(picard_solve(data, Weight{}, 0.5, g, 10, 1e-9, -1.0), std::invalid_argument);
    PicardGrids bad = g;
    bad.n_time = 0;
    CHECK_THROWS_AS(picard_solve(data, Weight{}, 0.5, bad, 10, 1e-9), std::invalid_argument);
}
