#pragma once

#include "sscfem/assembly.hpp"
#include "sscfem/model.hpp"
#include "sscfem/simulate.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sscfem {

/// Problem and experiment settings read from a flat `key = value` file. Unset optional
/// entries fall back to preset defaults.
struct RunConfig {
    std::string problem = "bounded-follower";  // bounded-follower | simple-particle | custom
    std::optional<double> sigma;
    std::optional<double> c1;
    double alpha = 0.0;
    std::optional<double> x0;

    // custom problems only
    double state_lo = 0.0;
    double state_hi = 1.0;
    double control_lo = -1.0;
    double control_hi = 1.0;
    std::string drift = "identity-in-u";
    std::string diffusion = "constant:1";
    std::string running_cost = "x-squared";
    std::string singular_cost_left = "constant:0";
    std::string singular_cost_right = "constant:0";
    std::string boundary_left = "reflect-right";
    std::string boundary_right = "reflect-left";

    int n_level = 3;
    int m = 3;
    std::optional<int> k_m;
    double l = 10.0;
    std::optional<bool> refine_midpoint;
    std::optional<std::pair<int, int>> sweep;  // n_level = m = i for i in [first, second]

    std::string outdir = "out";
    bool oracle = false;
    bool mc = false;
    SimConfig sim;
    int repetitions = 10;
    unsigned threads = 0;
    bool quiet = false;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
/// Throws ConfigError when the file cannot be read or parsed.
RunConfig load_config(const std::string& path);
/// Every field as `key = value`, %.17g for reals; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);
/// Sets one key from its text form, as a line of the file would.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

struct Diagnostic {
    enum class Severity { Warning, Error };
    Severity severity = Severity::Error;
    std::string message;
};

std::vector<Diagnostic> validate_config(const RunConfig& config);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

ControlProblem make_problem(const RunConfig& config);
/// One discretization per sweep entry (or the single configured one).
std::vector<DiscretizationConfig> discretizations(const RunConfig& config);

std::pair<int, int> parse_range(std::string_view text);

} // namespace sscfem
