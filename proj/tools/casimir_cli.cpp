// Batch driver: parse a run configuration, compute Casimir interaction
// energies, emit CSV.  Exit codes: 0 success, 2 config error, 3 numerical
// failure.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "casimir/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Casimir interaction energies for parabolic cylinder geometries"};

    std::string config_path;
    int nu_max = -1, q_nodes = -1;
    double temperature = -1.0;
    bool classical = false, channels = false, convergence = false, show_example = false;

    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--nu-max", nu_max, "override partial-wave truncation");
    app.add_option("--q-nodes", q_nodes, "override spectral quadrature nodes");
    app.add_option("--temperature", temperature, "k_B T L/(hbar c), > 0 for finite T");
    app.add_flag("--classical", classical, "lowest Matsubara frequency only");
    app.add_flag("--channels", channels, "emit Dirichlet/Neumann breakdown");
    app.add_flag("--convergence-report", convergence, "write a sidecar convergence table");
    app.add_flag("--example", show_example, "print an example configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    if (show_example) {
        std::fputs(casimir::example_config(
                       casimir::GeometryScenario::Kind::ParabolicPlane).c_str(),
                   stdout);
        return 0;
    }

    if (config_path.empty()) {
        std::fprintf(stderr, "error: --config is required (try --example)\n");
        return 2;
    }
    std::ifstream in(config_path);
    if (!in) {
        std::fprintf(stderr, "error: cannot read config: %s\n", config_path.c_str());
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    casimir::ParseResult parsed = casimir::parse_config(buf.str());
    if (!parsed.ok) {
        for (const auto& e : parsed.errors)
            std::fprintf(stderr, "config error (line %d, %s): %s\n", e.line,
                         e.field.empty() ? "-" : e.field.c_str(), e.message.c_str());
        return 2;
    }

    casimir::RunSpec spec = parsed.spec;
    // command line wins over config values
    if (nu_max > 0) spec.truncation.nu_max = nu_max;
    if (q_nodes > 0) spec.truncation.q_nodes = q_nodes;
    if (temperature >= 0.0) spec.temperature = temperature;
    if (classical) spec.classical = true;
    if (channels) spec.emit_channels = true;
    if (convergence) spec.convergence_report = true;

    try {
        spec.truncation.validate();
        spec.scenario.validate();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    return casimir::run(spec);
}
