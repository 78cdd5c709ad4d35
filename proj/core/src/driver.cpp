#include "hypflow/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace hypflow {

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot open output file: " + p.string());
    return f;
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_g17(*v) : std::string();
}

void write_series_csv(const fs::path& p, const DiagnosticsSeries& rows) {
    auto f = open_out(p);
    f << "t,phi_left,sup_omega,bkm,F1,F2,delta,gamma_est,tail_bound\n";
    for (const auto& r : rows)
        f << format_g17(r.t) << ',' << format_g17(r.phi_left) << ',' << format_g17(r.sup_omega)
          << ',' << format_g17(r.bkm) << ',' << opt_field(r.F1) << ',' << opt_field(r.F2) << ','
          << format_g17(r.delta) << ',' << opt_field(r.gamma_est) << ','
          << format_g17(r.tail_bound) << '\n';
}

void write_snapshot_csv(const fs::path& p, const Snapshot& s) {
    auto f = open_out(p);
    f << "z1,z2,omega,rho\n";
    const size_t n2 = s.z2.size();
    for (size_t i = 0; i < s.z1.size(); ++i)
        for (size_t j = 0; j < n2; ++j)
            f << format_g17(s.z1[i]) << ',' << format_g17(s.z2[j]) << ','
              << format_g17(s.omega[i * n2 + j]) << ',' << format_g17(s.rho[i * n2 + j]) << '\n';
}

std::string manifest_text(const ScenarioConfig& cfg, const RunOutputs& out) {
    std::ostringstream m;
    m << serialize_config(cfg);
    auto put = [&](const char* k, const std::string& v) {
        m << "result." << k << '=' << v << '\n';
    };
    auto putd = [&](const char* k, double v) { put(k, format_g17(v)); };
    auto putl = [&](const char* k, long v) { put(k, std::to_string(v)); };
    auto putb = [&](const char* k, bool v) { put(k, v ? "1" : "0"); };

    const RunResult& r = out.result;
    double tail_max = 0.0;
    for (const auto& row : r.series) tail_max = std::max(tail_max, row.tail_bound);

    put("status", to_string(r.status.kind));
    putb("is_blowup", r.status.is_blowup());
    putd("stop_t", r.status.t);
    putd("stop_phi_left", r.status.phi_left);
    putd("stop_value", r.status.value);
    putl("steps_accepted", r.steps_accepted);
    putl("steps_rejected", r.steps_rejected);
    putl("rows", static_cast<long>(r.series.size()));
    putl("snapshots", static_cast<long>(r.snapshots.size()));
    putl("tail_warnings", r.tail_warnings);
    putd("tail_bound_max", tail_max);
    putd("B", r.B);
    putd("K", r.K);
    putd("Z_threshold", r.Z_threshold);
    putb("tb_declined", out.tb.declined);
    putd("tb", out.tb.Tb);
    put("tb_method", out.tb.method);
    putd("tb_uncertainty", out.tb.uncertainty);
    putb("front_t0_found", out.front_law.t0_found);
    putd("front_t0", out.front_law.t0);
    putb("front_slope_in_range", out.front_law.slope_in_range);
    putd("front_eps_meas", out.front_law.eps_meas);
    putd("front_eps_paper", out.front_law.eps_paper);
    putb("front_gamma_positive", out.front_law.gamma_positive);
    putd("front_gamma_min", out.front_law.gamma_min);
    putd("front_gamma_max", out.front_law.gamma_max);
    putb("front_tail_ok", out.front_law.tail_ok);
    putd("front_tail_margin", out.front_law.tail_margin);
    putl("front_lemma41_checked", out.front_law.lemma41_checked);
    putb("front_lemma41_ok", out.front_law.lemma41_ok);
    putl("mono_phi_left_drops", out.monotonicity.phi_left_drops);
    putl("mono_mem_left_drops", out.monotonicity.mem_left_drops);
    putl("mono_bkm_drops", out.monotonicity.bkm_drops);
    putl("mono_f2_increases", out.monotonicity.f2_increases);
    putl("mono_omega_z1_violations", out.monotonicity.omega_z1_violations);
    putl("mono_total", out.monotonicity.total());
    return m.str();
}

// phi_left(t) with clamped linear interpolation; rows that share a saturated
// time collapse to the last recorded value there.
class SeriesInterp {
public:
    explicit SeriesInterp(const DiagnosticsSeries& rows) {
        for (const auto& r : rows) {
            if (!t_.empty() && !(r.t > t_.back())) {
                v_.back() = r.phi_left;
                continue;
            }
            t_.push_back(r.t);
            v_.push_back(r.phi_left);
        }
    }

    double t_max() const { return t_.empty() ? 0.0 : t_.back(); }

    double operator()(double t) const {
        if (t_.empty()) return 0.0;
        if (t <= t_.front()) return v_.front();
        if (t >= t_.back()) return v_.back();
        const auto it = std::upper_bound(t_.begin(), t_.end(), t);
        const size_t j = static_cast<size_t>(it - t_.begin());
        const double w = (t - t_[j - 1]) / (t_[j] - t_[j - 1]);
        return v_[j - 1] + w * (v_[j] - v_[j - 1]);
    }

private:
    std::vector<double> t_, v_;
};

ScenarioConfig scaled_level(const ScenarioConfig& base, double f) {
    ScenarioConfig c = base;
    c.grid_n_z1 = std::max(3, static_cast<int>(std::lround(base.grid_n_z1 * f)));
    c.grid_n_u = std::max(3, static_cast<int>(std::lround(base.grid_n_u * f)));
    c.integ_tol = base.integ_tol / (f * f);
    return c;
}

} // namespace

RunOutputs run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                        const RunOptions& opts) {
    RunOutputs out;
    out.result = run(cfg, opts);
    out.tb = estimate_blowup_time(out.result.series, out.result.status);
    out.front_law = front_law_checks(out.result);
    out.monotonicity = monotonicity_suite(out.result);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    out.dir = dir.string();

    const fs::path series = dir / "series.csv";
    write_series_csv(series, out.result.series);
    out.series_path = series.string();

    for (size_t k = 0; k < out.result.snapshots.size(); ++k) {
        const fs::path snap = dir / ("snapshot_" + std::to_string(k) + ".csv");
        write_snapshot_csv(snap, out.result.snapshots[k]);
        out.snapshot_paths.push_back(snap.string());
    }

    const fs::path manifest = dir / "manifest.txt";
    open_out(manifest) << manifest_text(cfg, out);
    out.manifest_path = manifest.string();
    return out;
}

RefineReport refine_compare(const ScenarioConfig& cfg, std::span<const double> levels,
                            const std::string& out_dir) {
    if (levels.size() < 2)
        throw std::invalid_argument("refine_compare: need at least two levels");
    for (double f : levels)
        if (!(f > 0.0)) throw std::invalid_argument("refine_compare: factors must be positive");

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    RefineReport report;
    std::vector<SeriesInterp> interps;
    std::vector<bool> have(levels.size(), false);

    for (size_t k = 0; k < levels.size(); ++k) {
        RefineLevel lvl;
        lvl.factor = levels[k];
        lvl.dir = (dir / ("level_" + std::to_string(k))).string();
        try {
            const RunOutputs ro = run_scenario(scaled_level(cfg, levels[k]), lvl.dir);
            lvl.ok = true;
            lvl.status = to_string(ro.result.status.kind);
            lvl.t_stop = ro.result.status.t;
            lvl.phi_left_final = ro.result.status.phi_left;
            lvl.tb = ro.tb;
            interps.emplace_back(ro.result.series);
            have[k] = true;
        } catch (const std::exception& e) {
            lvl.status = e.what();
            interps.emplace_back(DiagnosticsSeries{});
        }
        report.levels.push_back(std::move(lvl));
    }

    for (size_t a = 0; a < levels.size(); ++a)
        for (size_t b = a + 1; b < levels.size(); ++b) {
            if (!have[a] || !have[b]) continue;
            RefinePair pr;
            pr.a = static_cast<int>(a);
            pr.b = static_cast<int>(b);
            pr.t_hi = std::min(interps[a].t_max(), interps[b].t_max());
            const int m = 400;
            for (int j = 0; j <= m; ++j) {
                const double t = pr.t_hi * j / m;
                pr.sup_diff = std::max(pr.sup_diff, std::abs(interps[a](t) - interps[b](t)));
            }
            report.pairs.push_back(pr);
        }

    const fs::path table = dir / "comparison.csv";
    auto f = open_out(table);
    f << "level,factor,ok,status,t_stop,phi_left_final,tb,tb_method,tb_uncertainty\n";
    for (size_t k = 0; k < report.levels.size(); ++k) {
        const auto& l = report.levels[k];
        f << k << ',' << format_g17(l.factor) << ',' << (l.ok ? 1 : 0) << ",\"" << l.status
          << "\"," << format_g17(l.t_stop) << ',' << format_g17(l.phi_left_final) << ','
          << format_g17(l.tb.Tb) << ',' << l.tb.method << ',' << format_g17(l.tb.uncertainty)
          << '\n';
    }
    f << "\nlevel_a,level_b,t_hi,sup_phi_left_diff\n";
    for (const auto& p : report.pairs)
        f << p.a << ',' << p.b << ',' << format_g17(p.t_hi) << ',' << format_g17(p.sup_diff)
          << '\n';
    report.table_path = table.string();
    return report;
}

PicardAgreement picard_validate(const ScenarioConfig& cfg, double T_window,
                                const std::string& out_dir) {
    if (!(T_window > 0.0))
        throw std::invalid_argument("picard_validate: T_window must be positive");
    cfg.validate();

    PicardGrids grids{cfg.make_grid(), cfg.grid_n_u, cfg.picard_n_time};
    const double dt = T_window / grids.n_time;
    std::vector<double> nodes(grids.n_time + 1);
    for (size_t k = 0; k < nodes.size(); ++k)
        nodes[k] = (k + 1 == nodes.size()) ? T_window : dt * static_cast<double>(k);

    ScenarioConfig ecfg = cfg;
    ecfg.integ_t_end = T_window;
    RunOptions opts;
    opts.capture_times = nodes;
    const RunResult er = run(ecfg, opts);

    PicardAgreement out;
    const PicardResult pr = picard_solve(cfg.make_data(), Weight{cfg.kernel}, T_window, grids,
                                         cfg.picard_max_iter, cfg.picard_gap_tol,
                                         cfg.picard_ceiling);
    out.report = pr.report;
    out.checks = apriori_monitor(pr.report);

    out.times_compared = static_cast<int>(er.captured_phi.size());
    for (int k = 0; k < out.times_compared; ++k)
        for (int i = 0; i < grids.z.n; ++i)
            out.phi_discrepancy =
                std::max(out.phi_discrepancy, std::abs(er.captured_phi[k][i] - pr.phi.at(k, i)));

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const fs::path path = dir / "picard_report.txt";
    auto f = open_out(path);
    f << "phi_discrepancy=" << format_g17(out.phi_discrepancy) << '\n'
      << "times_compared=" << out.times_compared << '\n'
      << "times_requested=" << nodes.size() << '\n'
      << "converged=" << (pr.report.converged ? 1 : 0) << '\n'
      << "diverged=" << (pr.report.diverged ? 1 : 0) << '\n'
      << "iterations_used=" << pr.report.iterations_used << '\n'
      << "note=" << pr.report.note << '\n';
    for (size_t n = 0; n < pr.report.iterations.size(); ++n) {
        const auto& it = pr.report.iterations[n];
        const std::string p = "iter." + std::to_string(n + 1) + ".";
        f << p << "M_T=" << format_g17(it.M_T) << '\n'
          << p << "L_T=" << format_g17(it.L_T) << '\n'
          << p << "Gamma_T=" << format_g17(it.Gamma_T) << '\n'
          << p << "omega_gap=" << format_g17(it.omega_gap) << '\n'
          << p << "phi_gap=" << format_g17(it.phi_gap) << '\n'
          << p << "fitted_C=" << format_g17(it.fitted_C) << '\n';
    }
    f << "apriori.lcon_ok=" << (out.checks.lcon_ok ? 1 : 0) << '\n'
      << "apriori.lcon_worst=" << format_g17(out.checks.lcon_worst) << '\n'
      << "apriori.c_stable=" << (out.checks.c_stable ? 1 : 0) << '\n'
      << "apriori.c_spread=" << format_g17(out.checks.c_spread) << '\n';
    out.report_path = path.string();
    return out;
}

} // namespace hypflow
