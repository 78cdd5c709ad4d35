#include "hypflow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hypflow {

const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::euler: return "euler";
    case Scenario::boussinesq: return "boussinesq";
    case Scenario::custom: return "custom";
    }
    return "?";
}

const char* to_string(WeightKind k) {
    return k == WeightKind::sech ? "sech" : "sech_squared";
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ScenarioConfig ScenarioConfig::preset(Scenario s) {
    ScenarioConfig c;
    c.scenario = s;
    switch (s) {
    case Scenario::euler:
        // Bounded-drive regime: the phase grows linearly at rate ~4, so the
        // window must be deeper than rate * t_end plus the front threshold for
        // the fronts to stay on-grid through t = 50.
        c.omega0.amplitude = 1.0;
        c.grid_zmin = -220.0;
        c.grid_n_z1 = 5513;
        c.integ_t_end = 50.0;
        c.integ_phi_threshold = 500.0; // runaway guard, above the linear ceiling
        c.sampling_by_time = true;
        c.sampling_dt = 0.5;
        break;
    case Scenario::boussinesq:
        // Blow-up demonstration: a deep window and a high phase threshold let
        // the front run far while staying clear of the left edge; stepping
        // continues on the autonomous system after physical time saturates.
        // The memory state grows like e^{phi/2}/sqrt(amplitude), so the phase
        // threshold must stay below ~1419 + log(amplitude) to avoid overflow.
        // Amplitude rescales time (blow-up arrives ~sqrt(amplitude) faster)
        // but leaves the vorticity integral at fixed phase unchanged; what
        // sets that integral's growth per unit phase is the forcing width:
        // a narrow bump concentrates sup |omega| relative to the integrated
        // drive, so the integral clears 1e3 well inside the overflow bound.
        c.rho0.amplitude = 10.0;
        c.rho0.x1_radius = 0.3;
        c.grid_zmin = -1400.0;
        c.grid_n_z1 = 5613;
        c.grid_n_u = 33;
        c.integ_t_end = 100.0;
        c.integ_phi_threshold = 1300.0;
        c.integ_dt_min = 0.0;
        c.sampling_by_time = false;
        c.sampling_every_steps = 1;
        break;
    case Scenario::custom:
        break;
    }
    return c;
}

InitialData ScenarioConfig::make_data() const {
    auto field = [](const FieldParams& p) {
        ProductField f;
        if (p.amplitude > 0.0) {
            f.zero = false;
            f.fx1 = {p.x1_center, p.x1_radius, p.amplitude};
            f.fx2 = {p.x2_center, p.x2_radius, 1.0};
        }
        return f;
    };
    return InitialData::make(field(omega0), field(rho0));
}

Grid1D ScenarioConfig::make_grid() const {
    double zmax = grid_zmax;
    if (std::isnan(zmax)) zmax = make_data().strip().z1_max + 1.0;
    return Grid1D::uniform(grid_zmin, zmax, grid_n_z1);
}

double ScenarioConfig::resolved_B(const SupportStrip& s) const {
    if (!std::isnan(fronts_B)) return fronts_B;
    return std::max(1.0, s.K) + 5.0;
}

void ScenarioConfig::validate() const {
    std::vector<std::string> bad;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };

    if (scenario == Scenario::euler) {
        require(rho0.amplitude == 0.0, "euler scenario forces rho0 = 0 (data.rho0.amplitude must be 0)");
        require(omega0.amplitude > 0.0, "euler scenario needs nonzero omega0");
    }
    if (scenario == Scenario::boussinesq) {
        require(omega0.amplitude == 0.0, "boussinesq scenario forces omega0 = 0 (data.omega0.amplitude must be 0)");
        require(rho0.amplitude > 0.0, "boussinesq scenario needs nonzero rho0");
        require(std::abs(rho0.x2_center) < rho0.x2_radius,
                "boussinesq scenario needs rho0 positive on the x1-axis (|x2_center| < x2_radius)");
    }
    for (const FieldParams* p : {&omega0, &rho0}) {
        if (p->amplitude == 0.0) continue;
        require(p->amplitude > 0.0, "bump amplitudes must be >= 0");
        require(p->x1_radius > 0.0 && p->x2_radius > 0.0, "bump radii must be > 0");
        require(p->x1_center - p->x1_radius > 0.0,
                "support must keep a positive distance from the x2-axis (x1_center - x1_radius > 0)");
    }
    require(grid_n_z1 >= 2, "grid.n_z1 must be >= 2");
    require(grid_n_u >= 3, "grid.n_u must be >= 3");
    require(integ_tol > 0.0, "integ.tol must be > 0");
    require(integ_dt_min >= 0.0, "integ.dt_min must be >= 0");
    require(integ_dt_init > 0.0, "integ.dt_init must be > 0");
    require(integ_phi_threshold > 0.0, "integ.phi_threshold must be > 0");
    require(integ_t_end >= 0.0, "integ.t_end must be >= 0");
    require(integ_max_steps > 0, "integ.max_steps must be > 0");
    require(sampling_every_steps >= 1, "sampling.every_steps must be >= 1");
    require(sampling_dt > 0.0, "sampling.dt must be > 0");
    require(snap_n_z2 >= 2 && snap_n_z1 >= 2, "snapshots grid sizes must be >= 2");
    require(snap_z2_min < snap_z2_max, "snapshots.z2_min must be < snapshots.z2_max");
    require(picard_t_end > 0.0, "picard.t_end must be > 0");
    require(picard_n_time >= 1, "picard.n_time must be >= 1");
    require(picard_max_iter >= 1, "picard.max_iter must be >= 1");
    require(picard_gap_tol > 0.0, "picard.gap_tol must be > 0");
    require(picard_ceiling > 0.0, "picard.ceiling must be > 0");
    if (!std::isnan(fronts_B)) require(fronts_B >= 1.0, "fronts.B must be >= 1");

    if (omega0.amplitude > 0.0 || rho0.amplitude > 0.0) {
        try {
            const double z1_max = make_data().strip().z1_max;
            require(grid_zmin < z1_max, "grid.zmin must lie left of the support");
            if (!std::isnan(grid_zmax))
                require(grid_zmax >= z1_max, "grid.zmax must cover the support (>= z1_max)");
        } catch (const std::exception& e) {
            bad.push_back(e.what());
        }
    }

    if (!bad.empty()) {
        std::string msg = "invalid config:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw std::invalid_argument(msg);
    }
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": cannot parse number '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": trailing characters in '" + v + "'");
    return x;
}

long parse_long(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long x;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": cannot parse integer '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": trailing characters in '" + v + "'");
    return x;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Scenario parse_scenario(const std::string& v) {
    if (v == "euler") return Scenario::euler;
    if (v == "boussinesq") return Scenario::boussinesq;
    if (v == "custom") return Scenario::custom;
    throw std::invalid_argument("unknown scenario '" + v + "' (euler|boussinesq|custom)");
}

bool apply_field_key(FieldParams& p, const std::string& sub, const std::string& key,
                     const std::string& v) {
    if (sub == "amplitude") p.amplitude = parse_double(key, v);
    else if (sub == "x1_center") p.x1_center = parse_double(key, v);
    else if (sub == "x1_radius") p.x1_radius = parse_double(key, v);
    else if (sub == "x2_center") p.x2_center = parse_double(key, v);
    else if (sub == "x2_radius") p.x2_radius = parse_double(key, v);
    else return false;
    return true;
}

void apply_key(ScenarioConfig& c, const std::string& key, const std::string& v) {
    if (key == "kernel") {
        if (v == "sech") c.kernel = WeightKind::sech;
        else if (v == "sech_squared") c.kernel = WeightKind::sech_squared;
        else throw std::invalid_argument("unknown kernel '" + v + "' (sech|sech_squared)");
        return;
    }
    if (key.rfind("data.omega0.", 0) == 0) {
        if (apply_field_key(c.omega0, key.substr(12), key, v)) return;
    }
    if (key.rfind("data.rho0.", 0) == 0) {
        if (apply_field_key(c.rho0, key.substr(10), key, v)) return;
    }
    if (key == "grid.zmin") { c.grid_zmin = parse_double(key, v); return; }
    if (key == "grid.zmax") {
        c.grid_zmax = (v == "auto") ? std::numeric_limits<double>::quiet_NaN() : parse_double(key, v);
        return;
    }
    if (key == "grid.n_z1") { c.grid_n_z1 = static_cast<int>(parse_long(key, v)); return; }
    if (key == "grid.n_u") { c.grid_n_u = static_cast<int>(parse_long(key, v)); return; }
    if (key == "integ.tol") { c.integ_tol = parse_double(key, v); return; }
    if (key == "integ.dt_min") { c.integ_dt_min = parse_double(key, v); return; }
    if (key == "integ.dt_init") { c.integ_dt_init = parse_double(key, v); return; }
    if (key == "integ.phi_threshold") { c.integ_phi_threshold = parse_double(key, v); return; }
    if (key == "integ.t_end") { c.integ_t_end = parse_double(key, v); return; }
    if (key == "integ.max_steps") { c.integ_max_steps = parse_long(key, v); return; }
    if (key == "sampling.mode") {
        if (v == "steps") c.sampling_by_time = false;
        else if (v == "time") c.sampling_by_time = true;
        else throw std::invalid_argument("unknown sampling.mode '" + v + "' (steps|time)");
        return;
    }
    if (key == "sampling.every_steps") { c.sampling_every_steps = parse_long(key, v); return; }
    if (key == "sampling.dt") { c.sampling_dt = parse_double(key, v); return; }
    if (key == "fronts.B") {
        c.fronts_B = (v == "auto") ? std::numeric_limits<double>::quiet_NaN() : parse_double(key, v);
        return;
    }
    if (key == "snapshots.times") {
        c.snapshot_times.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) c.snapshot_times.push_back(parse_double(key, item));
        }
        return;
    }
    if (key == "snapshots.z2_min") { c.snap_z2_min = parse_double(key, v); return; }
    if (key == "snapshots.z2_max") { c.snap_z2_max = parse_double(key, v); return; }
    if (key == "snapshots.n_z2") { c.snap_n_z2 = static_cast<int>(parse_long(key, v)); return; }
    if (key == "snapshots.n_z1") { c.snap_n_z1 = static_cast<int>(parse_long(key, v)); return; }
    if (key == "picard.t_end") { c.picard_t_end = parse_double(key, v); return; }
    if (key == "picard.n_time") { c.picard_n_time = static_cast<int>(parse_long(key, v)); return; }
    if (key == "picard.max_iter") { c.picard_max_iter = static_cast<int>(parse_long(key, v)); return; }
    if (key == "picard.gap_tol") { c.picard_gap_tol = parse_double(key, v); return; }
    if (key == "picard.ceiling") { c.picard_ceiling = parse_double(key, v); return; }
    if (key == "out.dir") { c.out_dir = v; return; }
    throw std::invalid_argument("unknown config key '" + key + "'");
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& scenario_override) {
    // First pass: find the scenario to seed the preset.
    std::vector<std::pair<std::string, std::string>> kvs;
    std::stringstream ss(text);
    std::string line;
    std::string scen = scenario_override;
    while (std::getline(ss, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line without '=': '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.rfind("result.", 0) == 0) continue; // manifest echo, not input
        if (key == "scenario") {
            if (scenario_override.empty()) scen = val;
            continue;
        }
        kvs.emplace_back(key, val);
    }
    ScenarioConfig c = ScenarioConfig::preset(scen.empty() ? Scenario::custom : parse_scenario(scen));
    for (const auto& [k, v] : kvs) apply_key(c, k, v);
    return c;
}

ScenarioConfig load_config_file(const std::string& path, const std::string& scenario_override) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), scenario_override);
}

std::string serialize_config(const ScenarioConfig& c) {
    std::string s;
    auto put = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    auto putd = [&](const std::string& k, double v) { put(k, format_g17(v)); };
    auto puti = [&](const std::string& k, long v) { put(k, std::to_string(v)); };

    put("scenario", to_string(c.scenario));
    put("kernel", to_string(c.kernel));
    for (const auto& [name, p] : {std::pair<const char*, const FieldParams*>{"omega0", &c.omega0},
                                  {"rho0", &c.rho0}}) {
        const std::string pre = std::string("data.") + name + ".";
        putd(pre + "amplitude", p->amplitude);
        putd(pre + "x1_center", p->x1_center);
        putd(pre + "x1_radius", p->x1_radius);
        putd(pre + "x2_center", p->x2_center);
        putd(pre + "x2_radius", p->x2_radius);
    }
    putd("grid.zmin", c.grid_zmin);
    if (std::isnan(c.grid_zmax)) put("grid.zmax", "auto");
    else putd("grid.zmax", c.grid_zmax);
    puti("grid.n_z1", c.grid_n_z1);
    puti("grid.n_u", c.grid_n_u);
    putd("integ.tol", c.integ_tol);
    putd("integ.dt_min", c.integ_dt_min);
    putd("integ.dt_init", c.integ_dt_init);
    putd("integ.phi_threshold", c.integ_phi_threshold);
    putd("integ.t_end", c.integ_t_end);
    puti("integ.max_steps", c.integ_max_steps);
    put("sampling.mode", c.sampling_by_time ? "time" : "steps");
    puti("sampling.every_steps", c.sampling_every_steps);
    putd("sampling.dt", c.sampling_dt);
    if (std::isnan(c.fronts_B)) put("fronts.B", "auto");
    else putd("fronts.B", c.fronts_B);
    std::string times;
    for (size_t i = 0; i < c.snapshot_times.size(); ++i) {
        if (i) times += ",";
        times += format_g17(c.snapshot_times[i]);
    }
    put("snapshots.times", times);
    putd("snapshots.z2_min", c.snap_z2_min);
    putd("snapshots.z2_max", c.snap_z2_max);
    puti("snapshots.n_z2", c.snap_n_z2);
    puti("snapshots.n_z1", c.snap_n_z1);
    putd("picard.t_end", c.picard_t_end);
    puti("picard.n_time", c.picard_n_time);
    puti("picard.max_iter", c.picard_max_iter);
    putd("picard.gap_tol", c.picard_gap_tol);
    putd("picard.ceiling", c.picard_ceiling);
    put("out.dir", c.out_dir);
    return s;
}

} // namespace hypflow
