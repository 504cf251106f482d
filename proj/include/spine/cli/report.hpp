#pragma once

#include "spine/cli/config.hpp"
#include "spine/montecarlo.hpp"

#include <map>
#include <string>
#include <vector>

namespace spine::cli {

/// Fixed CSV column order; the first five are the stable schema.
inline constexpr const char* kTableColumns = "param,u_mc,u_mc_stderr,u_asym,rel_err,valid,dt,note";

struct TableRow {
  double param = 0.0;
  double u_mc = 0.0;
  double u_mc_stderr = 0.0;
  double u_asym = 0.0;
  double rel_err = 0.0;
  bool valid = true;
  double dt = 0.0;  // NaN when no simulation ran
  std::string note;

  bool operator==(const TableRow&) const = default;
};

struct Provenance {
  std::string version;
  std::string vary;  // "eps" or "L"
  std::string config_hash;
  std::map<std::string, std::string> settings;  // section.key -> value

  bool operator==(const Provenance&) const = default;
};

struct Table {
  Provenance provenance;
  std::vector<TableRow> rows;
};

Table make_table(const RunConfig& cfg, montecarlo::SweepAxis axis,
                 const std::vector<montecarlo::SweepRecord>& records);

/// CSV with '#'-prefixed provenance lines: version, vary axis, seed, dt,
/// particles, config hash and every `config.section.key` setting.
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

Table parse_csv(const std::string& text);
Table parse_json(const std::string& text);

/// Rebuilds the run configuration recorded in a provenance header.
RunConfig config_from_provenance(const Provenance& prov);

/// Writes `text` to `path`, or to standard output when path is empty.
/// Throws std::runtime_error naming the path on failure.
void write_output(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace spine::cli
