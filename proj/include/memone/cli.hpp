// Command-line front end: `utility`, `best-response` and `experiment`.
//
// Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical degeneracy under --strict.

#ifndef MEMONE_CLI_HPP
#define MEMONE_CLI_HPP

#include "memone/game.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace memone::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitDegenerate = 4;

/// CSV layouts and the JSON summary carry this version.
inline constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a,b,c,d" with every entry a probability.
Eigen::Vector4d parse_probability_vector(const std::string& text);
/// "R,P,S,T" satisfying the dilemma inequalities.
PayoffValues parse_payoffs(const std::string& text);

/// One strategy per line as four comma-separated decimals. Blank lines and
/// lines starting with '#' are skipped.
std::vector<MemoryOneStrategy> parse_opponents(std::istream& in);
std::vector<MemoryOneStrategy> read_opponents_file(const std::filesystem::path& path);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(const std::string& value);
std::string csv_row(const std::vector<std::string>& fields);

/// Round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace memone::cli

#endif  // MEMONE_CLI_HPP
