#pragma once

#include "sewedflow/flow.hpp"

#include <optional>
#include <ostream>
#include <string>

namespace sewedflow {

struct RunConfig {
    std::string command;      ///< families|validate|simulate|return-map|chi|classify|time|synthesize
    std::string system_spec;  ///< inline JSON or path
    std::string set_spec;     ///< synthesize only
    double x0 = -0.5;
    std::optional<int> n_crossings;
    std::optional<int> grid;
    std::optional<double> half_width;
    double tol = default_crossing_tol;
    double window = 1.0;
    std::string format;  ///< csv|json, empty for the command's default
    std::string out;     ///< empty for the output stream
    int k = 2;
    int probes = 40;
    int resolution = 100;
    int samples = 32;
};

/// Exit status: 0 success, 1 usage or spec error, 2 failed verification.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand first) and calls run. --window beats
/// SEWEDFLOW_WINDOW, which beats the default 1.0.
int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sewedflow
