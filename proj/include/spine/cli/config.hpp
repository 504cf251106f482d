#pragma once

#include "spine/montecarlo.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace spine::cli {

/// Bad user input: unknown keys, malformed numbers, violated invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  montecarlo::HeadDims head = Ball{1.0};
  double eps = 0.1;
  double neck_len = 1.0;
  montecarlo::StartPoint start = montecarlo::HeadCenter{};
  montecarlo::WalkConfig walk;
  OutputFormat output_format = OutputFormat::csv;
  std::string output_path;  // empty: standard output

  /// Checks every module-level invariant that can be checked without running.
  void validate() const;
  [[nodiscard]] montecarlo::SweepSpec sweep_spec(bool run_monte_carlo) const;
};

/// Flat key=value text with [geometry], [walk] and [run] sections. Blank
/// lines and lines starting with '#' or ';' are ignored.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies one `section.key = value` assignment. Throws ConfigError for
/// unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Every setting in a fixed order as `section.key` -> value text. Numbers use
/// the shortest representation that round-trips.
std::map<std::string, std::string> settings(const RunConfig& cfg);

/// Config file text equivalent to `cfg`; parse_config inverts it exactly.
std::string canonical_text(const RunConfig& cfg);

/// FNV-1a 64-bit hash of canonical_text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Parses "x,y,z" (or the token head-center) into a start point.
montecarlo::StartPoint parse_start(const std::string& text);
double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_count(const std::string& text, const std::string& what);

/// Axis and values of a `--vary` specification such as eps=0.1:0.01:-0.01.
struct VarySpec {
  montecarlo::SweepAxis axis;
  std::vector<double> values;
};

/// Parses `name=start:stop:step` (inclusive stop) or `name=v1,v2,...`; name is
/// eps or L. Empty lists are rejected.
VarySpec parse_vary(const std::string& text);

std::string version_string();

}  // namespace spine::cli
