#include "hypflow/evolver.hpp"

#include "hypflow/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace hypflow {

const char* to_string(StopKind k) {
    switch (k) {
    case StopKind::time_reached: return "time_reached";
    case StopKind::phi_threshold: return "phi_threshold";
    case StopKind::step_collapse: return "step_collapse";
    case StopKind::front_hit_left_edge: return "front_hit_left_edge";
    }
    return "?";
}

void ReducedSystem::operator()(double, const double* y, double* dy) const {
    const int n = n_;
    for (int i = 0; i < 2 * n; ++i)
        if (!std::isfinite(y[i]))
            throw std::runtime_error(std::string("non-finite ") + (i < n ? "phi" : "mem") +
                                     " at node " + std::to_string(i % n));
    std::span<const double> phi(y, n), mem(y + n, n);
    std::span<double> dphi(dy, n);
    op_.omega(phi, mem, dphi, scratch_);
    for (int i = 0; i < n; ++i) dy[i] *= 2.0;
    for (int i = 0; i < n; ++i) dy[n + i] = std::exp(0.5 * phi[i]);
}

namespace {

// A step is forced to land exactly on these times.
struct Target {
    double t = 0.0;
    bool sample = false, snap = false, capture = false;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

RunResult run(const ScenarioConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const InitialData data = cfg.make_data();
    const Grid1D grid = cfg.make_grid();
    const Weight weight{cfg.kernel};
    ReducedSystem sys(data, weight, grid, cfg.grid_n_u);
    const double B = cfg.resolved_B(data.strip());
    const FrontParams fp = make_front_params(data, B);
    const DiagnosticsEngine engine(sys.op(), fp);

    const int n = grid.n;
    RunResult r;
    r.B = B;
    r.K = fp.K;
    r.Z_threshold = engine.z_threshold();
    r.state = SolverState::zero(n);

    const double t_end = cfg.integ_t_end;
    if (t_end <= 0.0) {
        r.status = {StopKind::time_reached, 0.0, 0.0, 0.0};
        return r;
    }

    std::vector<Target> targets;
    auto upsert = [&](double tt) -> Target& {
        for (Target& g : targets)
            if (g.t == tt) return g;
        targets.push_back({tt});
        return targets.back();
    };
    if (cfg.sampling_by_time) {
        for (long k = 1; k * cfg.sampling_dt < t_end; ++k) upsert(k * cfg.sampling_dt).sample = true;
        upsert(t_end).sample = true;
    }
    for (double tt : cfg.snapshot_times)
        if (tt >= 0.0 && tt <= t_end) upsert(tt).snap = true;
    for (double tt : opts.capture_times)
        if (tt >= 0.0 && tt <= t_end) upsert(tt).capture = true;
    upsert(t_end);
    std::sort(targets.begin(), targets.end(),
              [](const Target& a, const Target& b) { return a.t < b.t; });

    std::vector<double> y(2 * static_cast<size_t>(n), 0.0), y_prev(y), rhs0(y);
    double t = 0.0, dt = cfg.integ_dt_init;
    const double tol = cfg.integ_tol;
    Dp54 stepper(y.size());

    double bkm = 0.0;
    double sup_prev = engine.sup_norm_omega(std::span<const double>(y).subspan(n, n));

    auto current_state = [&](double tt) {
        SolverState s;
        s.t = tt;
        s.phi.assign(y.begin(), y.begin() + n);
        s.mem.assign(y.begin() + n, y.end());
        return s;
    };
    auto half = [&](const std::vector<double>& deriv) {
        std::vector<double> om(n);
        for (int i = 0; i < n; ++i) om[i] = 0.5 * deriv[i]; // dphi = 2 Omega
        return om;
    };
    auto record_row = [&](double tt, const std::vector<double>& omega) {
        SeriesRow row;
        AuxRow aux;
        engine.row(current_state(tt), omega, bkm, row, aux);
        if (row.tail_bound > 1e-6 * aux.omega_left && row.tail_bound > 0.0) ++r.tail_warnings;
        r.series.push_back(row);
        r.aux.push_back(aux);
    };
    auto record_snapshot = [&](double tt) {
        const SolverState s = current_state(tt);
        const FieldReconstructor rec(data, grid, s);
        Snapshot sn;
        sn.t = tt;
        sn.z1.resize(cfg.snap_n_z1);
        sn.z2.resize(cfg.snap_n_z2);
        for (int i = 0; i < cfg.snap_n_z1; ++i)
            sn.z1[i] = grid.zmin + (grid.zmax - grid.zmin) * i / double(cfg.snap_n_z1 - 1);
        for (int j = 0; j < cfg.snap_n_z2; ++j)
            sn.z2[j] = cfg.snap_z2_min +
                       (cfg.snap_z2_max - cfg.snap_z2_min) * j / double(cfg.snap_n_z2 - 1);
        sn.omega.resize(sn.z1.size() * sn.z2.size());
        sn.rho.resize(sn.omega.size());
        for (size_t i = 0; i < sn.z1.size(); ++i)
            for (size_t j = 0; j < sn.z2.size(); ++j) {
                sn.omega[i * sn.z2.size() + j] = rec.omega_z(sn.z1[i], sn.z2[j]);
                sn.rho[i * sn.z2.size() + j] = rec.rho_z(sn.z1[i], sn.z2[j]);
            }
        r.snapshots.push_back(std::move(sn));
    };
    auto capture_phi = [&](double tt) {
        r.capture_times.push_back(tt);
        r.captured_phi.emplace_back(y.begin(), y.begin() + n);
    };
    // Accepted steps must not break the structural laws: the phase and memory
    // grow in t, and the slope of H = z1 + phi stays at or below 1.
    const double dphi_cap = 10.0 * tol * grid.h;
    auto check_step = [&](double tt) {
        for (int i = 0; i < n; ++i) {
            if (y[i] < y_prev[i] - 10.0 * tol * (1.0 + std::abs(y_prev[i])))
                throw std::runtime_error("phase decreased at node " + std::to_string(i) +
                                         " (t = " + format_g17(tt) + ")");
            if (y[n + i] < y_prev[n + i] - 10.0 * tol * (1.0 + std::abs(y_prev[n + i])))
                throw std::runtime_error("memory decreased at node " + std::to_string(i) +
                                         " (t = " + format_g17(tt) + ")");
        }
        for (int i = 0; i + 1 < n; ++i)
            if (y[i + 1] - y[i] > dphi_cap)
                throw std::runtime_error("H slope above 1 at node " + std::to_string(i) +
                                         " (t = " + format_g17(tt) + ")");
    };

    size_t tgt = 0;
    sys(0.0, y.data(), rhs0.data());
    record_row(0.0, half(rhs0));
    while (tgt < targets.size() && targets[tgt].t <= 0.0) {
        if (targets[tgt].snap) record_snapshot(0.0);
        if (targets[tgt].capture) capture_phi(0.0);
        ++tgt;
    }

    long attempts = 0, steps_since_sample = 0;
    bool stopped = false;
    while (!stopped) {
        if (attempts >= cfg.integ_max_steps)
            throw std::runtime_error("step budget exhausted at t = " + format_g17(t));
        if (dt < cfg.integ_dt_min || !(dt > 0.0)) {
            r.status = {StopKind::step_collapse, t, y[0], dt};
            break;
        }
        const double target_t = tgt < targets.size() ? targets[tgt].t : t_end;
        const double gap = target_t - t;
        if (!(gap > 0.0)) { // fully consumed target (defensive)
            ++tgt;
            continue;
        }
        const bool clipped = dt >= gap;
        const double dt_try = clipped ? gap : dt;
        double dt_io = dt_try;
        ++attempts;
        bool ok = false;
        const double t_before = t;
        try {
            ok = stepper.step(sys, y, t, dt_io, tol);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(e.what()) + " (during step at t = " +
                                     format_g17(t_before) + ")");
        }
        if (!ok) {
            ++r.steps_rejected;
            dt = dt_io;
            continue;
        }
        ++r.steps_accepted;
        if (clipped) {
            t = target_t; // land exactly; keep the working proposal unless
            const double factor = dt_io / dt_try; // the clipped step struggled
            dt = factor < 1.0 ? dt_io : std::max(dt, dt_io);
        } else {
            dt = dt_io;
        }
        check_step(t);

        const double sup_now = engine.sup_norm_omega(std::span<const double>(y).subspan(n, n));
        bkm += 0.5 * (sup_prev + sup_now) * dt_try; // actual step size: t may saturate
        sup_prev = sup_now;

        bool sampled = false;
        while (tgt < targets.size() && targets[tgt].t <= t) {
            const Target g = targets[tgt];
            if (g.sample) {
                record_row(t, half(stepper.derivative()));
                sampled = true;
            }
            if (g.snap) record_snapshot(t);
            if (g.capture) capture_phi(t);
            ++tgt;
        }
        if (!cfg.sampling_by_time && ++steps_since_sample >= cfg.sampling_every_steps) {
            steps_since_sample = 0;
            if (!sampled) {
                record_row(t, half(stepper.derivative()));
                sampled = true;
            }
        }

        if (t >= t_end) {
            r.status = {StopKind::time_reached, t, y[0], t};
            stopped = true;
        } else if (y[0] >= cfg.integ_phi_threshold) {
            r.status = {StopKind::phi_threshold, t, y[0], y[0]};
            stopped = true;
        } else if (n > 5 && grid.node(5) + y[5] >= 0.0) {
            const Fronts fr = find_fronts(grid, std::span<const double>(y.data(), n), B);
            r.status = {StopKind::front_hit_left_edge, t, y[0], fr.F2 ? *fr.F2 : grid.zmin};
            stopped = true;
        }
        if (stopped && !sampled) record_row(t, half(stepper.derivative()));
    }

    r.state = current_state(t);
    r.omega_final = half(r.steps_accepted > 0 ? stepper.derivative() : rhs0);
    return r;
}

BlowupEstimate estimate_blowup_time(const DiagnosticsSeries& series, const StopStatus& status) {
    BlowupEstimate est;
    est.uncertainty = kInf;
    if (!status.is_blowup() || series.empty()) {
        est.declined = true;
        est.method = "declined";
        return est;
    }
    est.declined = false;
    const double t_last = series.back().t;
    auto last_step = [&] {
        est.Tb = t_last;
        est.method = "last_step";
        est.uncertainty = kInf;
        return est;
    };

    const double phi_end = series.back().phi_left;
    std::vector<double> ts, vs; // final decade of growth, reciprocal ordinate
    for (const SeriesRow& s : series)
        if (s.phi_left > 0.0 && s.phi_left >= 0.1 * phi_end) {
            ts.push_back(s.t);
            vs.push_back(1.0 / s.phi_left);
        }
    if (ts.size() < 3) return last_step();

    double tbar = 0.0, vbar = 0.0;
    for (size_t k = 0; k < ts.size(); ++k) {
        tbar += ts[k];
        vbar += vs[k];
    }
    tbar /= ts.size();
    vbar /= ts.size();
    double stt = 0.0, stv = 0.0;
    for (size_t k = 0; k < ts.size(); ++k) {
        stt += (ts[k] - tbar) * (ts[k] - tbar);
        stv += (ts[k] - tbar) * (vs[k] - vbar);
    }
    if (!(stt > 0.0)) return last_step(); // time frozen in double precision
    const double b = stv / stt;
    const double a = vbar - b * tbar;
    if (!(b < 0.0)) return last_step();
    const double tb = -a / b;
    if (!std::isfinite(tb) || tb <= 0.0) return last_step();
    est.Tb = tb;
    est.method = "reciprocal_linear";
    est.uncertainty = std::abs(tb - t_last);
    return est;
}

} // namespace hypflow
