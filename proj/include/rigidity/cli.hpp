#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rigidity {

/// Every setting of a command-line run. The flat text form has one
/// `section.key = value` line per field.
struct RunConfig {
    struct GeometryConfig {
        std::string kind = "sphere";
        int n = 3;
        int N = 400;

        bool operator==(const GeometryConfig&) const = default;
    } geometry;
    struct ParamsConfig {
        double p = 2.0;
        double q = 4.0;
        double lambda = 0.0;

        bool operator==(const ParamsConfig&) const = default;
    } params;
    struct SolverConfig {
        double res_tol = 1e-9;
        double class_tol = 1e-6;
        int max_iter = 200;
        /// Negative selects 1e-8 max(max|u'|, 1e-2).
        double eps = -1.0;
        bool frozen_jacobian = false;

        bool operator==(const SolverConfig&) const = default;
    } solver;
    struct FlowConfig {
        double t_end = 5.0;
        double dt0 = 1e-4;
        double mass_tol = 1e-6;
        bool log_space = false;

        bool operator==(const FlowConfig&) const = default;
    } flow;
    struct OutputConfig {
        /// Empty: print to standard output only.
        std::string dir;
        std::string formats = "json,csv";

        bool operator==(const OutputConfig&) const = default;
    } output;
    std::uint64_t seed = 20240611;

    bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` text, one line per field, exact for every double.
std::string format_config(const RunConfig& config);

/// Applies the lines of `text` on top of `base`. Blank lines and lines
/// starting with '#' are skipped. Throws ConfigError for unknown keys or
/// malformed values.
RunConfig parse_config(const std::string& text, RunConfig base = {});

/// Runs one subcommand: constants, certificate, verify, solve, scan, flow,
/// lambda1, lambda-star or interp-check. Returns 0 on success, 1 when a
/// verdict fails and 2 on a usage or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rigidity
