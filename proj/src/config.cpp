#include "casimir/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace casimir {

namespace {

struct KeyVal {
    std::string value;
    int line = 0;
    bool used = false;
};

const char* known_keys[] = {
    "scenario",   "mu0",         "mu0_bar",    "radius",      "d",
    "d_x",        "theta",       "theta_bar",  "lambda0",     "mu0_off",
    "r0",         "theta0",      "nu_max",     "ell_max",     "q_nodes",
    "kx_tolerance", "logdet_tolerance", "temperature", "classical",
    "sweep",      "sweep_min",   "sweep_max",  "sweep_points", "sweep_log",
    "sweep_values", "output",    "channels",   "convergence_report",
};

bool is_known(const std::string& k) {
    for (const char* s : known_keys)
        if (k == s) return true;
    return false;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class Parser {
public:
    explicit Parser(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            size_t eq = t.find('=');
            if (eq == std::string::npos) {
                errors.push_back({ln, "", "expected `key = value`"});
                continue;
            }
            std::string k = trim(t.substr(0, eq)), v = trim(t.substr(eq + 1));
            if (k.empty()) {
                errors.push_back({ln, "", "empty key"});
                continue;
            }
            if (!is_known(k)) {
                errors.push_back({ln, k, "unknown key"});
                continue;
            }
            if (kv.count(k)) errors.push_back({ln, k, "duplicate key"});
            kv[k] = {v, ln, false};
        }
    }

    bool has(const std::string& k) { return kv.count(k) > 0; }

    std::string str(const std::string& k, const std::string& def = "") {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        it->second.used = true;
        return it->second.value;
    }

    double num(const std::string& k, double def) {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        it->second.used = true;
        try {
            size_t pos = 0;
            double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            errors.push_back({it->second.line, k, "not a number: " + it->second.value});
            return def;
        }
    }

    bool flag(const std::string& k, bool def) {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        it->second.used = true;
        const std::string& v = it->second.value;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        errors.push_back({it->second.line, k, "expected true/false"});
        return def;
    }

    void fail(const std::string& field, const std::string& msg) {
        int ln = kv.count(field) ? kv[field].line : 0;
        errors.push_back({ln, field, msg});
    }

    std::map<std::string, KeyVal> kv;
    std::vector<ConfigError> errors;
};

std::vector<double> make_grid(Parser& p) {
    std::vector<double> grid;
    if (p.has("sweep_values")) {
        std::istringstream in(p.str("sweep_values"));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                grid.push_back(std::stod(trim(tok)));
            } catch (...) {
                p.fail("sweep_values", "not a number: " + tok);
                return {};
            }
        }
    } else {
        double lo = p.num("sweep_min", 0.0), hi = p.num("sweep_max", 1.0);
        int n = int(p.num("sweep_points", 11));
        bool logspace = p.flag("sweep_log", false);
        if (n < 2) {
            p.fail("sweep_points", "need at least 2 points");
            return {};
        }
        if (logspace && (lo <= 0.0 || hi <= 0.0)) {
            p.fail("sweep_log", "log grid needs positive bounds");
            return {};
        }
        for (int i = 0; i < n; ++i) {
            double f = double(i) / (n - 1);
            grid.push_back(logspace ? lo * std::pow(hi / lo, f)
                                    : lo + (hi - lo) * f);
        }
    }
    if (grid.size() >= 2) {
        bool inc = grid[1] > grid[0];
        for (size_t i = 1; i < grid.size(); ++i)
            if (grid[i] == grid[i - 1] || (grid[i] > grid[i - 1]) != inc) {
                p.fail("sweep", "grid must be strictly monotone");
                break;
            }
    }
    return grid;
}

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult res;
    Parser p(text);

    std::string kind = p.str("scenario");
    GeometryScenario sc;
    Pose pose{p.num("d", 1.0), p.num("d_x", 0.0), p.num("theta", 0.0),
              p.num("theta_bar", 0.0)};
    if (kind == "parabolic_plane") {
        sc = GeometryScenario::parabolic_plane({p.num("mu0", 0.0)}, pose);
    } else if (kind == "parabolic_parabolic") {
        sc = GeometryScenario::parabolic_parabolic({p.num("mu0", 0.0)},
                                                   {p.num("mu0_bar", 0.0)}, pose);
    } else if (kind == "parabolic_ordinary") {
        sc = GeometryScenario::parabolic_ordinary({p.num("mu0", 0.0)},
                                                  {p.num("radius", 0.0)}, pose);
    } else if (kind == "interior_parabolic") {
        sc = GeometryScenario::interior_parabolic(
            {p.num("mu0", 1.0)}, {p.num("mu0_bar", 0.0)},
            {p.num("lambda0", 0.0), p.num("mu0_off", 0.0)});
    } else if (kind == "interior_ordinary") {
        sc = GeometryScenario::interior_ordinary(
            {p.num("mu0", 1.0)}, {p.num("radius", 0.0)},
            {p.num("r0", 0.0), p.num("theta0", 0.0)});
    } else if (kind.empty()) {
        p.fail("scenario", "missing required key");
    } else {
        p.fail("scenario", "unknown scenario: " + kind);
    }

    Truncation t;
    t.nu_max = int(p.num("nu_max", t.nu_max));
    t.ell_max = int(p.num("ell_max", t.ell_max));
    t.q_nodes = int(p.num("q_nodes", t.q_nodes));
    t.kx_tolerance = p.num("kx_tolerance", t.kx_tolerance);
    t.logdet_tolerance = p.num("logdet_tolerance", t.logdet_tolerance);

    RunSpec spec;
    spec.scenario = sc;
    spec.truncation = t;
    if (p.has("temperature")) spec.temperature = p.num("temperature", 0.0);
    spec.classical = p.flag("classical", false);
    spec.output_path = p.str("output", "-");
    spec.emit_channels = p.flag("channels", true);
    spec.convergence_report = p.flag("convergence_report", false);

    if (p.has("sweep")) {
        std::string sw = p.str("sweep");
        SweepSpec ss;
        bool sweep_ok = true;
        if (sw == "theta") ss.param = SweepParameter::TiltAngle;
        else if (sw == "H_over_R") ss.param = SweepParameter::GapOverRadius;
        else if (sw == "dx_over_d") ss.param = SweepParameter::OffsetRatio;
        else if (sw == "temperature") ss.param = SweepParameter::Temperature;
        else { p.fail("sweep", "unknown sweep parameter: " + sw); sweep_ok = false; }
        if (sweep_ok) {
            ss.grid = make_grid(p);
            // sweep parameter must belong to the scenario
            if (ss.param == SweepParameter::GapOverRadius &&
                sc.kind != GeometryScenario::Kind::ParabolicPlane)
                p.fail("sweep", "H_over_R sweep needs scenario = parabolic_plane");
            if (ss.param == SweepParameter::OffsetRatio &&
                sc.kind != GeometryScenario::Kind::ParabolicParabolic)
                p.fail("sweep", "dx_over_d sweep needs scenario = parabolic_parabolic");
            if ((ss.param == SweepParameter::TiltAngle ||
                 ss.param == SweepParameter::OffsetRatio) &&
                (sc.kind == GeometryScenario::Kind::InteriorParabolicParabolic ||
                 sc.kind == GeometryScenario::Kind::InteriorOrdinary))
                p.fail("sweep", "sweep parameter does not apply to interior scenarios");
            spec.sweep = ss;
        }
    }

    // scenario/truncation invariants reported with field context
    if (p.errors.empty()) {
        try {
            spec.truncation.validate();
        } catch (const std::exception& e) {
            p.fail("nu_max", e.what());
        }
        try {
            spec.scenario.validate();
        } catch (const std::exception& e) {
            p.fail("d", e.what());
        }
    }

    res.errors = p.errors;
    res.ok = p.errors.empty();
    if (res.ok) res.spec = spec;
    return res;
}

namespace {

// applies a sweep value, returns the length scale whose square multiplies
// the emitted energy
GeometryScenario apply_sweep(const RunSpec& spec, SweepParameter param, double g,
                             double& scale, double& temperature) {
    GeometryScenario sc = spec.scenario;
    temperature = spec.temperature.value_or(0.0);
    switch (param) {
        case SweepParameter::TiltAngle:
            sc.pose.theta = g;
            scale = sc.pose.d - 0.5 * sc.outer.mu0 * sc.outer.mu0;
            break;
        case SweepParameter::GapOverRadius: {
            double R = sc.outer.mu0 * sc.outer.mu0;
            scale = g * R;
            sc.pose.d = scale + 0.5 * R;
            break;
        }
        case SweepParameter::OffsetRatio:
            sc.pose.d_x = g * sc.pose.d;
            scale = sc.pose.d;
            break;
        case SweepParameter::Temperature:
            scale = sc.pose.d - 0.5 * sc.outer.mu0 * sc.outer.mu0;
            temperature = g / scale;  // grid is k_B T H/(hbar c)
            break;
    }
    return sc;
}

void write_convergence_report(std::ostream& out, const GeometryScenario& sc,
                              const Truncation& t, double temperature, bool classical) {
    out << "convergence report\n==================\n\n";
    out << "truncation stepping (nu_max -> value):\n";
    for (int nm : {t.nu_max / 2, 3 * t.nu_max / 4, t.nu_max}) {
        if (nm < 2) continue;
        Truncation tt = t;
        tt.nu_max = nm;
        EnergyResult e = (temperature > 0.0)
                             ? energy_finite_temperature(sc, temperature, tt,
                                                         classical ? 0 : -1)
                             : energy_zero_temperature(sc, tt);
        char buf[128];
        std::snprintf(buf, sizeof buf, "  nu_max=%3d  value=% .12g\n", nm, e.value);
        out << buf;
    }
    out << "\nquadrature stepping (q_nodes -> value):\n";
    for (int qn : {t.q_nodes / 2, t.q_nodes, 2 * t.q_nodes}) {
        if (qn < 4) continue;
        Truncation tt = t;
        tt.q_nodes = qn;
        EnergyResult e = (temperature > 0.0)
                             ? energy_finite_temperature(sc, temperature, tt,
                                                         classical ? 0 : -1)
                             : energy_zero_temperature(sc, tt);
        char buf[128];
        std::snprintf(buf, sizeof buf, "  q_nodes=%4d value=% .12g\n", qn, e.value);
        out << buf;
    }
}

}  // namespace

int run(const RunSpec& spec) {
    std::ostringstream csv;
    csv << "sweep parameter, energy value, Dirichlet part, Neumann part, "
           "trunc_error, quad_error\n";

    std::vector<double> grid;
    SweepParameter param = SweepParameter::TiltAngle;
    if (spec.sweep) {
        grid = spec.sweep->grid;
        param = spec.sweep->param;
    }

    auto emit_row = [&](double g, const EnergyResult& e, double scale) {
        double s2 = scale * scale;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.12g, %.12g, %.12g, %.12g, %.3g, %.3g\n", g,
                      e.value * s2, spec.emit_channels ? e.dirichlet * s2 : 0.0,
                      spec.emit_channels ? e.neumann * s2 : 0.0, e.trunc_error * s2,
                      e.quad_error * s2);
        csv << buf;
    };

    try {
        if (grid.empty()) {
            double scale = 1.0;
            double temperature = spec.temperature.value_or(0.0);
            EnergyResult e =
                (temperature > 0.0)
                    ? energy_finite_temperature(spec.scenario, temperature,
                                                spec.truncation, spec.classical ? 0 : -1)
                    : energy_zero_temperature(spec.scenario, spec.truncation);
            emit_row(0.0, e, scale);
        } else {
            for (double g : grid) {  // fixed sweep order keeps output byte-identical
                double scale = 1.0, temperature = 0.0;
                GeometryScenario sc = apply_sweep(spec, param, g, scale, temperature);
                bool finite_t =
                    (param == SweepParameter::Temperature) || temperature > 0.0;
                EnergyResult e =
                    finite_t ? energy_finite_temperature(sc, temperature,
                                                         spec.truncation,
                                                         spec.classical ? 0 : -1)
                             : energy_zero_temperature(sc, spec.truncation);
                if (!std::isfinite(e.value) || !std::isfinite(e.trunc_error) ||
                    !std::isfinite(e.quad_error))
                    throw std::runtime_error("non-finite result in sweep row");
                emit_row(g, e, scale);
            }
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "numerical failure: %s\n", ex.what());
        return 3;
    }

    if (spec.output_path == "-") {
        std::fputs(csv.str().c_str(), stdout);
    } else {
        std::ofstream out(spec.output_path);
        if (!out) {
            std::fprintf(stderr, "cannot open output: %s\n", spec.output_path.c_str());
            return 3;
        }
        out << csv.str();
    }

    if (spec.convergence_report) {
        std::string rp = (spec.output_path == "-") ? "convergence_report.txt"
                                                   : spec.output_path + ".report.txt";
        std::ofstream rep(rp);
        double scale = 1.0, temperature = spec.temperature.value_or(0.0);
        GeometryScenario sc = spec.scenario;
        if (!grid.empty()) sc = apply_sweep(spec, param, grid.front(), scale, temperature);
        try {
            write_convergence_report(rep, sc, spec.truncation, temperature,
                                     spec.classical);
        } catch (const std::exception& ex) {
            rep << "report failed: " << ex.what() << "\n";
        }
    }
    return 0;
}

std::string example_config(GeometryScenario::Kind kind) {
    switch (kind) {
        case GeometryScenario::Kind::ParabolicPlane:
            return "scenario = parabolic_plane\nmu0 = 0\nd = 1\ntheta = 0\n"
                   "nu_max = 24\nq_nodes = 64\noutput = -\n";
        case GeometryScenario::Kind::ParabolicParabolic:
            return "scenario = parabolic_parabolic\nmu0 = 0\nmu0_bar = 0\nd = 1\n"
                   "d_x = 0\ntheta = 0\ntheta_bar = 0\nnu_max = 24\noutput = -\n";
        case GeometryScenario::Kind::ParabolicOrdinary:
            return "scenario = parabolic_ordinary\nmu0 = 0\nradius = 0.25\nd = 1\n"
                   "nu_max = 24\nell_max = 24\noutput = -\n";
        case GeometryScenario::Kind::InteriorParabolicParabolic:
            return "scenario = interior_parabolic\nmu0 = 2\nmu0_bar = 1\n"
                   "lambda0 = 0\nmu0_off = 0\nnu_max = 16\noutput = -\n";
        default:
            return "scenario = interior_ordinary\nmu0 = 2.8284271247461903\n"
                   "radius = 1\nr0 = 0\ntheta0 = 0\nnu_max = 16\nell_max = 12\n"
                   "output = -\n";
    }
}

}  // namespace casimir
