// Hot-path microbenchmarks: the weighted section integrals (W), the cumulative
// Omega profile, the full right-hand side, one adaptive step, and the sup-norm
// scan that dominates per-sample diagnostics.

#include "hypflow/diagnostics.hpp"
#include "hypflow/evolver.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace hypflow;

namespace {

struct Setup {
    InitialData data;
    Grid1D grid;
    NonlocalOmega op;
    std::vector<double> phi, mem, out, scratch;

    Setup()
        : data(InitialData::boussinesq_default()),
          grid(Grid1D::uniform(-200.0, data.strip().z1_max + 1.0, 1024)),
          op(data, Weight{}, grid, 33) {
        phi.resize(grid.n);
        mem.resize(grid.n);
        out.resize(grid.n);
        scratch.resize(grid.n);
        for (int i = 0; i < grid.n; ++i) {
            phi[i] = std::min(5.0, std::max(0.0, 0.2 * (grid.zmax - grid.node(i))));
            mem[i] = 0.5 * phi[i];
        }
    }
};

Setup& setup() {
    static Setup s;
    return s;
}

void BM_inner_profile_W(benchmark::State& state) {
    Setup& s = setup();
    for (auto _ : state) {
        s.op.inner_profile_W(s.phi, s.mem, s.scratch);
        benchmark::DoNotOptimize(s.scratch.data());
    }
}
BENCHMARK(BM_inner_profile_W);

void BM_omega(benchmark::State& state) {
    Setup& s = setup();
    for (auto _ : state) {
        s.op.omega(s.phi, s.mem, s.out, s.scratch);
        benchmark::DoNotOptimize(s.out.data());
    }
}
BENCHMARK(BM_omega);

void BM_rhs(benchmark::State& state) {
    Setup& s = setup();
    ReducedSystem sys(s.data, Weight{}, s.grid, 33);
    std::vector<double> y(sys.dim()), dy(sys.dim());
    std::copy(s.phi.begin(), s.phi.end(), y.begin());
    std::copy(s.mem.begin(), s.mem.end(), y.begin() + s.grid.n);
    for (auto _ : state) {
        sys(0.0, y.data(), dy.data());
        benchmark::DoNotOptimize(dy.data());
    }
}
BENCHMARK(BM_rhs);

void BM_step(benchmark::State& state) {
    Setup& s = setup();
    ReducedSystem sys(s.data, Weight{}, s.grid, 33);
    std::vector<double> y0(sys.dim());
    std::copy(s.phi.begin(), s.phi.end(), y0.begin());
    std::copy(s.mem.begin(), s.mem.end(), y0.begin() + s.grid.n);
    Dp54 stepper(sys.dim());
    for (auto _ : state) {
        std::vector<double> y = y0;
        double t = 0.0, dt = 1e-3;
        stepper.reset();
        benchmark::DoNotOptimize(stepper.step(sys, y, t, dt, 1e-8));
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_step);

void BM_sup_norm(benchmark::State& state) {
    Setup& s = setup();
    DiagnosticsEngine engine(s.op, make_front_params(s.data, 6.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(engine.sup_norm_omega(s.mem));
}
BENCHMARK(BM_sup_norm);

} // namespace

BENCHMARK_MAIN();
