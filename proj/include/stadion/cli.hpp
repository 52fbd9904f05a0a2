#ifndef STADION_CLI_HPP
#define STADION_CLI_HPP

// Command-line front end: argument parsing, report formatting and the
// parameter scans. Reports are JSON documents, tables and point clouds CSV.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stadion/tolerances.hpp"

namespace stadion::cli {

inline constexpr const char* kSchemaVersion = "1";

struct Range {
    double lo = 0;
    double hi = 0;
    int steps = 21;

    /// steps points from lo to hi inclusive (lo alone when steps == 1).
    std::vector<double> grid() const;
};

struct JobSpec {
    std::string command;
    int n = 0;
    double a = 0;
    double h = 0;
    double c = 1;
    int q = 4;
    int n_max = 4;
    Range a_range;
    Range h_range;
    bool h_scan = false;
    int seeds = 100;
    int iterations = 1000;
    int skip = 0;
    std::uint64_t rng_seed = 1;
    bool oracle = true;
    int workers = 0;
    std::string out;
    ToleranceSet tol;
};

/// Runs one command and writes its output to `out` (or the --out file).
/// Returns the process exit code: 0, or the numeric error code of the
/// failure.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

/// Parses argv (including the program name) and runs the command.
int run_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf "%.9g" rendering.
std::string format9(double x);

} // namespace stadion::cli

#endif
