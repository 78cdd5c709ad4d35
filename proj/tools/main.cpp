#include "hypflow/driver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

hypflow::ScenarioConfig resolve_config(const std::string& path, const std::string& scenario) {
    if (!path.empty()) return hypflow::load_config_file(path, scenario);
    if (!scenario.empty()) return hypflow::parse_config_text("", scenario);
    throw std::invalid_argument("provide --config and/or --scenario");
}

// returns by value: call sites take .c_str() per argument, so several uses
// can share one printf without aliasing a common buffer
std::string g17(double v) {
    return hypflow::format_g17(v);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver for the reduced hyperbolic Boussinesq/Euler system"};
    app.require_subcommand(1);

    std::string config_path, scenario, out_dir;
    double T_window = 0.0;
    std::vector<double> levels{1.0, 2.0};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "config file, key=value lines (a run manifest also parses)");
        sub->add_option("--scenario", scenario, "preset override: euler | boussinesq | custom");
        sub->add_option("--out", out_dir, "output directory (default: the config's out.dir)");
    };

    CLI::App* cmd_run =
        app.add_subcommand("run", "advance one configured scenario and write its outputs");
    add_common(cmd_run);

    CLI::App* cmd_refine =
        app.add_subcommand("refine", "rerun at scaled resolution/tolerance and compare");
    add_common(cmd_refine);
    cmd_refine->add_option("--levels", levels, "refinement factors (default 1,2)")
        ->delimiter(',');

    CLI::App* cmd_picard = app.add_subcommand(
        "picard-validate", "cross-check the evolver against the fixed-point iteration");
    add_common(cmd_picard);
    cmd_picard->add_option("--T", T_window, "window length (default: the config's picard.t_end)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // bad usage is a validation error
    }

    try {
        const hypflow::ScenarioConfig cfg = resolve_config(config_path, scenario);
        const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;

        if (cmd_run->parsed()) {
            const hypflow::RunOutputs out = hypflow::run_scenario(cfg, dir);
            std::printf("status=%s\n", hypflow::to_string(out.result.status.kind));
            std::printf("is_blowup=%d\n", out.result.status.is_blowup() ? 1 : 0);
            std::printf("stop_t=%s\n", g17(out.result.status.t).c_str());
            std::printf("stop_phi_left=%s\n", g17(out.result.status.phi_left).c_str());
            if (!out.tb.declined) {
                std::printf("tb=%s\n", g17(out.tb.Tb).c_str());
                std::printf("tb_method=%s\n", out.tb.method.c_str());
            }
            std::printf("series=%s\n", out.series_path.c_str());
            std::printf("manifest=%s\n", out.manifest_path.c_str());
        } else if (cmd_refine->parsed()) {
            const hypflow::RefineReport rep = hypflow::refine_compare(cfg, levels, dir);
            for (size_t k = 0; k < rep.levels.size(); ++k) {
                const auto& l = rep.levels[k];
                std::printf("level=%zu factor=%s ok=%d status=\"%s\" t_stop=%s tb=%s\n", k,
                            g17(l.factor).c_str(), l.ok ? 1 : 0, l.status.c_str(),
                            g17(l.t_stop).c_str(), g17(l.tb.Tb).c_str());
            }
            for (const auto& p : rep.pairs)
                std::printf("pair=%d:%d t_hi=%s sup_phi_left_diff=%s\n", p.a, p.b, g17(p.t_hi).c_str(),
                            g17(p.sup_diff).c_str());
            std::printf("table=%s\n", rep.table_path.c_str());
        } else {
            const double T = T_window > 0.0 ? T_window : cfg.picard_t_end;
            const hypflow::PicardAgreement ag = hypflow::picard_validate(cfg, T, dir);
            std::printf("phi_discrepancy=%s\n", g17(ag.phi_discrepancy).c_str());
            std::printf("times_compared=%d\n", ag.times_compared);
            std::printf("converged=%d\n", ag.report.converged ? 1 : 0);
            std::printf("diverged=%d\n", ag.report.diverged ? 1 : 0);
            std::printf("iterations_used=%d\n", ag.report.iterations_used);
            std::printf("report=%s\n", ag.report_path.c_str());
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
