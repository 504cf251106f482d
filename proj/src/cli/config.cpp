#include "spine/cli/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef SPINE_VERSION
#define SPINE_VERSION "0.0.0"
#endif
#ifndef SPINE_GIT_DESCRIBE
#define SPINE_GIT_DESCRIBE "unknown"
#endif

namespace spine::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string num(double v) { return fmt::format("{}", v); }

montecarlo::StepControl parse_control(const std::string& v) {
  if (v == "fixed") return montecarlo::StepControl::fixed;
  if (v == "adaptive") return montecarlo::StepControl::adaptive;
  throw ConfigError("walk.step_control must be fixed or adaptive, got '" + v + "'");
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    // Accept integral values written in exponent form, e.g. 1e5.
    const double d = parse_double(t, what);
    if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
      throw ConfigError(what + ": expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

montecarlo::StartPoint parse_start(const std::string& text) {
  const std::string t = trim(text);
  if (t == "head-center") return montecarlo::HeadCenter{};
  std::stringstream ss(t);
  std::string item;
  std::vector<double> xs;
  while (std::getline(ss, item, ',')) xs.push_back(parse_double(item, "start point"));
  if (xs.size() != 3) throw ConfigError("start point must be x,y,z or head-center");
  return Vec3(xs[0], xs[1], xs[2]);
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  auto& w = cfg.walk;
  if (key == "geometry.head") {
    if (value == "ball") {
      if (!std::holds_alternative<Ball>(cfg.head)) cfg.head = Ball{1.0};
    } else if (value == "ellipsoid") {
      if (!std::holds_alternative<Ellipsoid>(cfg.head)) cfg.head = Ellipsoid{};
    } else {
      throw ConfigError("geometry.head must be ball or ellipsoid, got '" + value + "'");
    }
  } else if (key == "geometry.radius") {
    cfg.head = Ball{parse_double(value, key)};
  } else if (key == "geometry.a" || key == "geometry.b" || key == "geometry.c") {
    Ellipsoid e = std::holds_alternative<Ellipsoid>(cfg.head) ? std::get<Ellipsoid>(cfg.head)
                                                               : Ellipsoid{};
    const double v = parse_double(value, key);
    (key == "geometry.a" ? e.a : key == "geometry.b" ? e.b : e.c) = v;
    cfg.head = e;
  } else if (key == "geometry.eps") {
    cfg.eps = parse_double(value, key);
  } else if (key == "geometry.neck_length") {
    cfg.neck_len = parse_double(value, key);
  } else if (key == "walk.dt") {
    w.dt = parse_double(value, key);
  } else if (key == "walk.particles") {
    w.particles = parse_count(value, key);
  } else if (key == "walk.max_steps") {
    w.max_steps = parse_count(value, key);
  } else if (key == "walk.seed") {
    w.seed = parse_count(value, key);
  } else if (key == "walk.workers") {
    w.workers = static_cast<unsigned>(parse_count(value, key));
  } else if (key == "walk.step_control") {
    w.control = parse_control(value);
  } else if (key == "walk.max_dt") {
    w.max_dt = parse_double(value, key);
  } else if (key == "walk.ramp") {
    w.ramp = parse_double(value, key);
  } else if (key == "run.start") {
    cfg.start = parse_start(value);
  } else if (key == "run.format") {
    if (value == "csv") {
      cfg.output_format = OutputFormat::csv;
    } else if (value == "json") {
      cfg.output_format = OutputFormat::json;
    } else {
      throw ConfigError("run.format must be csv or json, got '" + value + "'");
    }
  } else if (key == "run.output") {
    cfg.output_path = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(fmt::format("line {}: malformed section", lineno));
      section = trim(t.substr(1, t.size() - 2));
      if (section != "geometry" && section != "walk" && section != "run") {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", lineno, section));
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key=value", lineno));
    if (section.empty()) throw ConfigError(fmt::format("line {}: key outside a section", lineno));
    apply_setting(cfg, section + "." + trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void RunConfig::validate() const {
  try {
    const SpineDomain domain = montecarlo::make_flush_domain(head, eps, neck_len);
    const Vec3 p = montecarlo::resolve_start(domain, start);
    if (!domain.contains(p)) throw ConfigError("start point is not inside the spine");
    walk.validate(domain.resolution_length());
    asymptotics::AsymptoticParams::from_domain(domain);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

montecarlo::SweepSpec RunConfig::sweep_spec(bool run_monte_carlo) const {
  montecarlo::SweepSpec s;
  s.head = head;
  s.eps = eps;
  s.neck_len = neck_len;
  s.start = start;
  s.walk = walk;
  s.run_monte_carlo = run_monte_carlo;
  return s;
}

std::map<std::string, std::string> settings(const RunConfig& cfg) {
  std::map<std::string, std::string> out;
  if (const auto* b = std::get_if<Ball>(&cfg.head)) {
    out["geometry.head"] = "ball";
    out["geometry.radius"] = num(b->radius);
  } else {
    const auto& e = std::get<Ellipsoid>(cfg.head);
    out["geometry.head"] = "ellipsoid";
    out["geometry.a"] = num(e.a);
    out["geometry.b"] = num(e.b);
    out["geometry.c"] = num(e.c);
  }
  out["geometry.eps"] = num(cfg.eps);
  out["geometry.neck_length"] = num(cfg.neck_len);
  const auto& w = cfg.walk;
  out["walk.dt"] = num(w.dt);
  out["walk.particles"] = std::to_string(w.particles);
  out["walk.max_steps"] = std::to_string(w.max_steps);
  out["walk.seed"] = std::to_string(w.seed);
  out["walk.workers"] = std::to_string(w.workers);
  out["walk.step_control"] = w.control == montecarlo::StepControl::fixed ? "fixed" : "adaptive";
  out["walk.max_dt"] = num(w.max_dt);
  out["walk.ramp"] = num(w.ramp);
  if (std::holds_alternative<montecarlo::HeadCenter>(cfg.start)) {
    out["run.start"] = "head-center";
  } else {
    const Vec3& p = std::get<Vec3>(cfg.start);
    out["run.start"] = fmt::format("{},{},{}", p.x(), p.y(), p.z());
  }
  out["run.format"] = cfg.output_format == OutputFormat::csv ? "csv" : "json";
  out["run.output"] = cfg.output_path;
  return out;
}

std::string canonical_text(const RunConfig& cfg) {
  std::string text;
  std::string section;
  // geometry.head must precede the shape dimensions; std::map order puts
  // "geometry.a" first, so emit it explicitly.
  const auto all = settings(cfg);
  for (const char* sec : {"geometry", "walk", "run"}) {
    text += fmt::format("[{}]\n", sec);
    const std::string prefix = std::string(sec) + ".";
    if (std::string(sec) == "geometry") text += "head=" + all.at("geometry.head") + "\n";
    for (const auto& [k, v] : all) {
      if (k.rfind(prefix, 0) != 0 || k == "geometry.head") continue;
      text += k.substr(prefix.size()) + "=" + v + "\n";
    }
  }
  return text;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

VarySpec parse_vary(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("--vary expects name=values, e.g. eps=0.1:0.01:-0.01");
  const std::string name = trim(text.substr(0, eq));
  const std::string body = trim(text.substr(eq + 1));
  VarySpec spec{};
  if (name == "eps") {
    spec.axis = montecarlo::SweepAxis::eps;
  } else if (name == "L" || name == "neck_length") {
    spec.axis = montecarlo::SweepAxis::neck_len;
  } else {
    throw ConfigError("--vary axis must be eps or L, got '" + name + "'");
  }
  if (body.empty()) throw ConfigError("--vary list is empty");
  if (body.find(':') != std::string::npos) {
    std::stringstream ss(body);
    std::string item;
    std::vector<double> parts;
    while (std::getline(ss, item, ':')) parts.push_back(parse_double(item, "--vary range"));
    if (parts.size() != 3) throw ConfigError("--vary range must be start:stop:step");
    const double start = parts[0];
    const double stop = parts[1];
    const double step = parts[2];
    if (step == 0.0 || (stop - start) / step < -1e-9) {
      throw ConfigError("--vary range step does not reach the stop value");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      // Snap to 12 decimals so that 0.1 - 0.01 prints as 0.09.
      spec.values.push_back(std::round((start + i * step) * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!trim(item).empty()) spec.values.push_back(parse_double(item, "--vary value"));
    }
  }
  if (spec.values.empty()) throw ConfigError("--vary list is empty");
  return spec;
}

std::string version_string() { return fmt::format("spine-nep {} ({})", SPINE_VERSION, SPINE_GIT_DESCRIBE); }

}  // namespace spine::cli
