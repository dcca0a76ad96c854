#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/records.hpp"

namespace ergo::tools {

/// Bad command line or out-of-range request; maps to exit code 2.
class UsageError : public InputError {
public:
    using InputError::InputError;
};

enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
    std::string command;
    std::string model = "ising";
    std::vector<std::size_t> n_list;
    std::optional<std::size_t> n_min;
    std::optional<std::size_t> n_max;
    std::optional<double> geom;
    double block_fraction = 0.5;
    double gamma = 1.0;
    double log_gamma = 2.3;
    std::uint64_t seed = 42;
    std::string output = "-";
    RecordFormat format = RecordFormat::csv;
    bool paper_grid = false;
    std::string suite = "all";
    std::string kind = "shared";
    std::string input;
    std::size_t jobs = 0;  // 0: hardware concurrency
};

/// Sizes a scan runs over, ascending and unique. `fallback` is used when no
/// list or range is given. `step` spaces a plain n-min..n-max range.
std::vector<std::size_t> resolve_sizes(const RunConfig& cfg, const std::vector<std::size_t>& fallback,
                                       std::size_t step = 2);

/// Block length for a chain of n sites from the configured fraction.
std::size_t block_length(const RunConfig& cfg, std::size_t n);

std::vector<ScanRecord> ff_scan(const RunConfig& cfg);
std::vector<ScanRecord> spin_scan(const RunConfig& cfg);

int cmd_ff_scan(const RunConfig& cfg, std::ostream& out);
int cmd_spin_scan(const RunConfig& cfg, std::ostream& out);
int cmd_predict(const RunConfig& cfg, std::ostream& out);
int cmd_fit(const RunConfig& cfg, std::istream& in, std::ostream& out);
int cmd_check(const RunConfig& cfg, std::ostream& out);

/// Parses argv, runs the command and maps errors onto exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergo::tools
