#pragma once

#include "spine/asymptotics.hpp"
#include "spine/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spine::montecarlo {

enum class StepControl {
  fixed,     // every step uses dt
  adaptive,  // step length grows with distance from the fine features
};

/// Controls for the reflected Brownian walkers. The diffusion coefficient is 1
/// (Delta u = -1), so each step has per-axis variance 2 dt.
struct WalkConfig {
  double dt = 0.0;  // <= 0 selects (resolution / 10)^2 at run start
  std::uint64_t particles = 100000;
  std::uint64_t max_steps = 4000000000ULL;
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  StepControl control = StepControl::fixed;
  // Adaptive stepping: the step length is
  //   clamp(ramp * feature_distance(x), sqrt(2 dt), sqrt(2 max_dt)).
  double max_dt = 0.0;  // <= 0 selects (0.05 * head size)^2 / 2
  double ramp = 0.1;

  /// dt actually used for a domain whose smallest feature is `resolution`.
  [[nodiscard]] double resolved_dt(double resolution) const;
  /// Throws DomainError unless sqrt(2 dt) < resolution / 2 and counts are sane.
  void validate(double resolution) const;
};

struct FirstPassageResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t absorbed = 0;
  std::uint64_t censored = 0;
  std::uint64_t total_steps = 0;
  double dt = 0.0;  // fine time step used
  bool valid = true;              // censored fraction <= 10%
  bool censoring_warning = false;  // censored fraction > 0.1%

  [[nodiscard]] double censored_fraction() const;
};

/// Per-particle outcome, exposed for tests of the walker itself.
struct WalkOutcome {
  double time = 0.0;
  std::uint64_t steps = 0;
  bool absorbed = false;
};

/// Estimates u(start) = E[exit time] for reflected Brownian motion with unit
/// diffusivity. Particle i draws from its own engine seeded by (seed, i), and
/// statistics are accumulated in particle order, so the result is
/// bit-identical for any worker count. Throws DomainError when `start` is not
/// interior or the configuration is invalid.
template <class Domain>
FirstPassageResult simulate_mfpt(const Domain& domain, const Vec3& start, const WalkConfig& cfg);

/// Runs particle `index` of a simulation on its own.
template <class Domain>
WalkOutcome walk_particle(const Domain& domain, const Vec3& start, const WalkConfig& cfg,
                          std::uint64_t index);

/// Head dimensions for a spine family; the head center is recomputed for
/// each neck radius so that the junction stays flush.
using HeadDims = std::variant<Ball, Ellipsoid>;

SpineDomain make_flush_domain(const HeadDims& head, double eps, double neck_len);

struct HeadCenter {};
using StartPoint = std::variant<HeadCenter, Vec3>;

Vec3 resolve_start(const SpineDomain& domain, const StartPoint& start);

enum class SweepAxis { eps, neck_len };

struct SweepSpec {
  HeadDims head = Ball{1.0};
  double eps = 0.1;
  double neck_len = 1.0;
  StartPoint start = HeadCenter{};
  WalkConfig walk;
  bool run_monte_carlo = true;
  double m_const = asymptotics::kDiskM;
};

struct SweepRecord {
  double param = 0.0;
  double u_mc = 0.0;
  double u_mc_stderr = 0.0;
  double u_asym = 0.0;
  double rel_err = 0.0;  // (u_asym - u_mc) / u_mc
  bool valid = true;
  std::string note;
  std::optional<FirstPassageResult> mc;
};

/// One record per value of the swept parameter. Rows whose simulation fails
/// are kept and marked invalid.
std::vector<SweepRecord> sweep(const SweepSpec& spec, SweepAxis axis,
                               const std::vector<double>& values);

}  // namespace spine::montecarlo
