// spine-nep: mean first passage times in a dendritic spine (ball head + thin
// neck) from the asymptotic expansion, singular quadrature and Monte Carlo.

#include "spine/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace spine;
using namespace spine::cli;

// CLI flag -> config key. Flags override values read with --config.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option*, std::string>> bindings;

  void bind(CLI::App& app, const std::string& flag, const std::string& key,
            const std::string& help) {
    auto* opt = app.add_option(flag, values[key], help);
    bindings.emplace_back(opt, key);
  }

  void apply(RunConfig& cfg) const {
    // head kind first so that dimensions land on the right shape
    for (const auto& [opt, key] : bindings) {
      if (key == "geometry.head" && opt->count() > 0) apply_setting(cfg, key, values.at(key));
    }
    for (const auto& [opt, key] : bindings) {
      if (key != "geometry.head" && opt->count() > 0) apply_setting(cfg, key, values.at(key));
    }
  }
};

void add_geometry(CLI::App& app, Overrides& o) {
  o.bind(app, "--head", "geometry.head", "Head shape: ball or ellipsoid");
  o.bind(app, "--head-radius", "geometry.radius", "Ball head radius");
  o.bind(app, "--axis-a", "geometry.a", "Ellipsoid semi-axis along the neck");
  o.bind(app, "--axis-b", "geometry.b", "Ellipsoid semi-axis b");
  o.bind(app, "--axis-c", "geometry.c", "Ellipsoid semi-axis c");
  o.bind(app, "--eps", "geometry.eps", "Neck radius");
  o.bind(app, "--neck-length", "geometry.neck_length", "Neck length L");
}

void add_walk(CLI::App& app, Overrides& o) {
  o.bind(app, "--dt", "walk.dt", "Time step (0: (eps/10)^2)");
  o.bind(app, "--particles", "walk.particles", "Number of walkers");
  o.bind(app, "--max-steps", "walk.max_steps", "Step cap per walker");
  o.bind(app, "--seed", "walk.seed", "Base seed");
  o.bind(app, "--workers", "walk.workers", "Worker threads");
  o.bind(app, "--step-control", "walk.step_control", "fixed or adaptive");
  o.bind(app, "--max-dt", "walk.max_dt", "Adaptive: largest time step");
  o.bind(app, "--ramp", "walk.ramp", "Adaptive: step growth per unit distance");
  o.bind(app, "--start", "run.start", "Start point x,y,z or head-center");
}

void add_output(CLI::App& app, Overrides& o) {
  o.bind(app, "--format", "run.format", "csv or json");
  o.bind(app, "--output", "run.output", "Output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Narrow escape from a dendritic spine: asymptotics, quadrature, Monte Carlo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);

  Overrides o;

  auto* constants = app.add_subcommand("constants", "Quadrature constants M, 16pi/3 and the 4pi bound");
  ConstantsOptions copts;
  constants->add_option("--level", copts.level, "Quadrature refinement level")
      ->check(CLI::PositiveNumber);
  constants->add_option("--samples", copts.samples, "Bound samples")->check(CLI::PositiveNumber);

  auto* asym = app.add_subcommand("asymptotic", "Evaluate the MFPT expansion");
  add_geometry(*asym, o);
  std::string at_text;
  std::string convention_text = "geometric";
  asym->add_option("--at", at_text, "Evaluation point x,y,z (default: head center)");
  asym->add_option("--convention", convention_text, "Head-center distance: geometric or unit")
      ->check(CLI::IsMember({"geometric", "unit"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo MFPT for one spine");
  add_geometry(*simulate, o);
  add_walk(*simulate, o);
  add_output(*simulate, o);

  auto* table = app.add_subcommand("table", "Sweep eps or L, comparing Monte Carlo and expansion");
  add_geometry(*table, o);
  add_walk(*table, o);
  add_output(*table, o);
  std::string vary_text;
  bool asymptotic_only = false;
  table->add_option("--vary", vary_text, "eps=start:stop:step | L=start:stop:step | eps=v1,v2")
      ->required();
  table->add_flag("--asymptotic-only", asymptotic_only, "Skip Monte Carlo");

  auto* fit = app.add_subcommand("fit", "Fit u against a quadratic in 1/eps");
  std::string input_path;
  std::string column_text = "u_mc";
  fit->add_option("--input", input_path, "CSV or JSON table")->required();
  fit->add_option("--column", column_text, "Column to fit: u_mc or u_asym")
      ->check(CLI::IsMember({"u_mc", "u_asym"}));
  add_output(*fit, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    o.apply(cfg);

    if (constants->parsed()) {
      std::cout << cmd_constants(copts).dump(2) << "\n";
      return kExitOk;
    }
    if (asym->parsed()) {
      std::optional<Vec3> at;
      if (!at_text.empty()) {
        const auto p = parse_start(at_text);
        if (std::holds_alternative<Vec3>(p)) at = std::get<Vec3>(p);
      }
      const auto conv = convention_text == "unit" ? asymptotics::CenterDistance::unit
                                                  : asymptotics::CenterDistance::geometric;
      std::cout << cmd_asymptotic(cfg, at, conv).dump(2) << "\n";
      return kExitOk;
    }
    if (simulate->parsed()) {
      const auto rep = cmd_simulate(cfg);
      write_output(cfg.output_path, rep.body.dump(2) + "\n");
      return rep.valid ? kExitOk : kExitInvalidResult;
    }
    if (table->parsed()) {
      const VarySpec vary = parse_vary(vary_text);
      const Table t = cmd_table(cfg, vary, !asymptotic_only);
      write_output(cfg.output_path,
                   cfg.output_format == OutputFormat::csv ? to_csv(t) : to_json(t));
      for (const auto& r : t.rows) {
        if (!r.valid) return kExitInvalidResult;
      }
      return kExitOk;
    }
    if (fit->parsed()) {
      const std::string text = read_file(input_path);
      const auto first = text.find_first_not_of(" \t\r\n");
      const Table t = first != std::string::npos && text[first] == '{' ? parse_json(text)
                                                                       : parse_csv(text);
      const FitResult r =
          cmd_fit(t, column_text == "u_asym" ? FitColumn::u_asym : FitColumn::u_mc);
      write_output(cfg.output_path, to_json(r).dump(2) + "\n");
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
