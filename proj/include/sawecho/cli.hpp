#pragma once

// Command-line front end: argument handling, CSV/JSON export and the
// verification suite. Kept in the library so tests can drive it directly.

#include "sawecho/echo.hpp"
#include "sawecho/study.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sawecho::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, usage_error = 1, verify_failure = 2, io_error = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "a..b", "a..b:step" or a comma separated list of t_r values.
std::vector<int> parse_grid(const std::string& text);

/// Comma separated lists.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// %.17g, so every double round-trips exactly.
std::string format_double(double x);

/// One row per record; the first column is named `time_column`.
void write_records_csv(std::ostream& os, const std::vector<EchoRecord>& records, const std::string& time_column);

/// Long format over a study: nq,epsilon,t_e,E_mean,...,f_std.
void write_study_csv(std::ostream& os, const std::vector<StudyPoint>& points);

/// Parses the long format back into per-(nq, epsilon) curves and fits them.
std::vector<StudyPoint> read_study_csv(std::istream& is, double threshold);

struct CheckResult {
    std::string name;
    bool pass = false;
    double deviation = 0;
    std::string detail;
};

struct VerifyOptions {
    /// Test-only: negate every gate phase before the unitary comparison.
    bool flip_phase_sign = false;
};

std::vector<CheckResult> run_verify(const VerifyOptions& options = {});

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sawecho::cli
