#include "spine/cli/report.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace spine::cli {

namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{}", v); }

double parse_field(const std::string& s) {
  if (s == "nan" || s == "-nan" || s.empty()) return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("table: malformed number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

Table make_table(const RunConfig& cfg, montecarlo::SweepAxis axis,
                 const std::vector<montecarlo::SweepRecord>& records) {
  Table t;
  t.provenance.version = version_string();
  t.provenance.vary = axis == montecarlo::SweepAxis::eps ? "eps" : "L";
  t.provenance.config_hash = config_hash(cfg);
  t.provenance.settings = settings(cfg);
  for (const auto& r : records) {
    TableRow row;
    row.param = r.param;
    row.u_mc = r.u_mc;
    row.u_mc_stderr = r.u_mc_stderr;
    row.u_asym = r.u_asym;
    row.rel_err = r.rel_err;
    row.valid = r.valid;
    row.dt = r.mc ? r.mc->dt : std::nan("");
    row.note = r.note;
    for (char& c : row.note) {
      if (c == ',' || c == '\n') c = ';';
    }
    t.rows.push_back(row);
  }
  return t;
}

std::string to_csv(const Table& table) {
  const auto& p = table.provenance;
  std::string out;
  out += "# version=" + p.version + "\n";
  out += "# vary=" + p.vary + "\n";
  out += "# seed=" + p.settings.at("walk.seed") + "\n";
  out += "# dt=" + p.settings.at("walk.dt") + "\n";
  out += "# particles=" + p.settings.at("walk.particles") + "\n";
  out += "# config_hash=" + p.config_hash + "\n";
  for (const auto& [k, v] : p.settings) out += "# config." + k + "=" + v + "\n";
  out += std::string(kTableColumns) + "\n";
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", num(r.param), num(r.u_mc), num(r.u_mc_stderr),
                       num(r.u_asym), num(r.rel_err), r.valid ? 1 : 0, num(r.dt), r.note);
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key.rfind("config.", 0) == 0) {
        t.provenance.settings[key.substr(7)] = value;
      } else if (key == "version") {
        t.provenance.version = value;
      } else if (key == "vary") {
        t.provenance.vary = value;
      } else if (key == "config_hash") {
        t.provenance.config_hash = value;
      }
      continue;
    }
    if (columns.empty()) {
      columns = split(line, ',');
      continue;
    }
    const auto f = split(line, ',');
    TableRow row;
    for (std::size_t i = 0; i < columns.size() && i < f.size(); ++i) {
      const auto& c = columns[i];
      if (c == "param" || c == "eps" || c == "L") {
        row.param = parse_field(f[i]);
      } else if (c == "u_mc" || c == "u") {
        row.u_mc = parse_field(f[i]);
      } else if (c == "u_mc_stderr") {
        row.u_mc_stderr = parse_field(f[i]);
      } else if (c == "u_asym") {
        row.u_asym = parse_field(f[i]);
      } else if (c == "rel_err") {
        row.rel_err = parse_field(f[i]);
      } else if (c == "valid") {
        row.valid = f[i] == "1";
      } else if (c == "dt") {
        row.dt = parse_field(f[i]);
      } else if (c == "note") {
        row.note = f[i];
      }
    }
    t.rows.push_back(row);
  }
  if (columns.empty()) throw ConfigError("table: no header row found");
  return t;
}

std::string to_json(const Table& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"param", r.param},
                    {"u_mc", number_or_null(r.u_mc)},
                    {"u_mc_stderr", number_or_null(r.u_mc_stderr)},
                    {"u_asym", number_or_null(r.u_asym)},
                    {"rel_err", number_or_null(r.rel_err)},
                    {"valid", r.valid},
                    {"dt", number_or_null(r.dt)},
                    {"note", r.note}});
  }
  const auto& p = table.provenance;
  json prov{{"version", p.version},
            {"vary", p.vary},
            {"seed", p.settings.at("walk.seed")},
            {"dt", p.settings.at("walk.dt")},
            {"particles", p.settings.at("walk.particles")},
            {"config_hash", p.config_hash},
            {"config", p.settings}};
  return json{{"provenance", prov}, {"rows", rows}}.dump(2) + "\n";
}

Table parse_json(const std::string& text) {
  const json j = json::parse(text);
  Table t;
  const auto& p = j.at("provenance");
  t.provenance.version = p.at("version").get<std::string>();
  t.provenance.vary = p.at("vary").get<std::string>();
  t.provenance.config_hash = p.at("config_hash").get<std::string>();
  t.provenance.settings = p.at("config").get<std::map<std::string, std::string>>();
  for (const auto& r : j.at("rows")) {
    TableRow row;
    row.param = r.at("param").get<double>();
    row.u_mc = number_from(r.at("u_mc"));
    row.u_mc_stderr = number_from(r.at("u_mc_stderr"));
    row.u_asym = number_from(r.at("u_asym"));
    row.rel_err = number_from(r.at("rel_err"));
    row.valid = r.at("valid").get<bool>();
    row.dt = number_from(r.at("dt"));
    row.note = r.at("note").get<std::string>();
    t.rows.push_back(row);
  }
  return t;
}

RunConfig config_from_provenance(const Provenance& prov) {
  RunConfig cfg;
  // The head kind has to be known before its dimensions are applied.
  if (const auto it = prov.settings.find("geometry.head"); it != prov.settings.end()) {
    apply_setting(cfg, it->first, it->second);
  }
  for (const auto& [k, v] : prov.settings) {
    if (k != "geometry.head") apply_setting(cfg, k, v);
  }
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spine::cli
