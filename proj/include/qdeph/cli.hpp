#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdeph::cli {

inline constexpr int kExitPassed = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitSpecError = 2;

enum class OutputFormat { json, csv };

struct RunConfig {
    std::string command;  // check-axioms | channel | equivalence | qfi | scaling
    std::optional<std::string> input_path;
    double tol = 1e-10;
    std::uint64_t seed = 42;
    OutputFormat output = OutputFormat::json;
    std::optional<std::string> out_path;

    // subcommand options
    std::size_t dim = 2;
    std::string basis = "computational";  // computational | haar
    std::size_t n_max = 6;
    std::vector<double> gammas{0.0};
    std::optional<double> phi;
    std::optional<double> gamma;
    std::string protocol = "ghz_parallel";
    std::size_t n = 1;
};

/// Parses `args` (without the program name) and runs the subcommand.
/// Returns 0 when every check passes, 1 on a failed check, 2 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an already-parsed configuration.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace qdeph::cli
