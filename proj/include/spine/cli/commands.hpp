#pragma once

#include "spine/asymptotics.hpp"
#include "spine/cli/config.hpp"
#include "spine/cli/fit.hpp"
#include "spine/cli/report.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace spine::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitInvalidResult = 3 };

struct ConstantsOptions {
  int level = 256;     // quadrature refinement
  int samples = 2001;  // single-layer bound samples
};

/// M by quadrature against 8/3, the disk self-interaction integral in closed
/// form and by quadrature against 16 pi / 3, and the 4 pi single-layer bound.
nlohmann::json cmd_constants(const ConstantsOptions& opts = {});

/// Expansion terms and u_eps at `at` (default: head center, geometric distance).
nlohmann::json cmd_asymptotic(const RunConfig& cfg, const std::optional<Vec3>& at,
                              asymptotics::CenterDistance convention);

struct SimulateReport {
  nlohmann::json body;
  bool valid = true;
};

SimulateReport cmd_simulate(const RunConfig& cfg);

/// Sweep over `vary`; with run_monte_carlo false only the expansion column is filled.
Table cmd_table(const RunConfig& cfg, const VarySpec& vary, bool run_monte_carlo);

enum class FitColumn { u_mc, u_asym };

/// Fits the chosen column of a table against 1/eps; invalid rows are skipped.
FitResult cmd_fit(const Table& table, FitColumn column);

nlohmann::json to_json(const FitResult& fit);

}  // namespace spine::cli
