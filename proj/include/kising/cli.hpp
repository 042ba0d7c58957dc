#pragma once

// Command-line front end: run configuration, parsing and the batch driver.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace kising::cli {

enum class Mode { evolve, period, deviation, spectrum, verify };
enum class Format { csv, json };

std::string to_string(Mode m);
std::string to_string(Format f);

/// Inclusive range first, first+step, ..., <= last.
struct SizeRange {
  int first = 0;
  int last = 0;
  int step = 1;

  std::vector<int> values() const;
  std::string str() const;
};

struct RunConfig {
  Mode mode = Mode::evolve;
  SizeRange n_qubits;
  double coupling = 0.5;
  double tau = 0.0;  // set to pi/4 by the parser
  double theta0 = 0.0;
  double phi0 = 0.0;
  long long n_max = 48;
  double tol = 1e-9;
  int q_max = 48;
  unsigned threads = 0;  // 0 = all cores
  std::string out;       // empty = stdout
  Format format = Format::csv;
  std::string config_path;
  /// Keys given both in the config file and as flags: {"key": {"file": .., "flag": ..}}.
  nlohmann::json overridden = nlohmann::json::object();
};

/// Bad flags, bad config file, or a run that cannot start. Exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates "pi/4", "-3*pi/4", "2.5", "(1+pi)/2", "1e-9" and the like.
double parse_number_expression(const std::string& text);

SizeRange parse_size_range(const std::string& text);

/// Flags (without the program name), with an optional --config file whose
/// values the flags override.
RunConfig parse_config(const std::vector<std::string>& args);

/// Resolved configuration in the same flat key space as the config file.
nlohmann::json to_json(const RunConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one configuration, writing data to `out` or config.out. Errors are
/// thrown; see main_entry for the exit-status mapping.
int run(const RunConfig& config, std::ostream& out);

/// Full program: parse, run, map failures to exit codes with a JSON error
/// record on `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf("%.12g").
std::string format_number(double v);

}  // namespace kising::cli
