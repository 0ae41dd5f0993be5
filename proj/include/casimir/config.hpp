#pragma once

// Key-value run configuration and the batch driver behind the command line
// tool: parse, validate, sweep, and emit CSV datasets.

#include <optional>
#include <string>
#include <vector>

#include "casimir/energy.hpp"

namespace casimir {

struct SweepSpec {
    SweepParameter param = SweepParameter::TiltAngle;
    std::vector<double> grid;  // strictly monotone
};

struct RunSpec {
    GeometryScenario scenario;
    std::optional<SweepSpec> sweep;
    Truncation truncation;
    std::optional<double> temperature;  // k_B T L_unit/(hbar c)
    bool classical = false;             // lowest Matsubara frequency only
    std::string output_path = "-";      // "-" = stdout
    bool emit_channels = true;
    bool convergence_report = false;
};

struct ConfigError {
    int line = 0;  // 0 when not tied to a line
    std::string field;
    std::string message;
};

// parses the flat `key = value` grammar; on failure returns every
// validation problem found, not just the first
struct ParseResult {
    bool ok = false;
    RunSpec spec;
    std::vector<ConfigError> errors;
};
ParseResult parse_config(const std::string& text);

// runs the spec and writes the CSV (and optional sidecar report);
// returns 0 on success, 3 on numerical failure
int run(const RunSpec& spec);

// documented example configuration, one per scenario kind
std::string example_config(GeometryScenario::Kind kind);

}  // namespace casimir
