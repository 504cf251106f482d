#include "spine/montecarlo.hpp"

#include "spine/quadrature.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace spine::montecarlo {

namespace {

using Engine = std::mt19937_64;

// Skip the bridge test when the crossing probability is below exp(-40).
constexpr double kBridgeCutoff = 40.0;

Engine particle_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

struct StepSizer {
  double dt_fine;
  double sigma_fine;
  double sigma_max;
  double ramp;
  bool adaptive;
};

template <class Domain>
StepSizer make_sizer(const Domain& domain, const WalkConfig& cfg) {
  StepSizer s{};
  s.dt_fine = cfg.resolved_dt(domain.resolution_length());
  s.sigma_fine = std::sqrt(2.0 * s.dt_fine);
  s.adaptive = cfg.control == StepControl::adaptive;
  s.ramp = cfg.ramp;
  double max_dt = cfg.max_dt;
  if (max_dt <= 0.0) {
    const double sigma = 0.05 * domain.bulk_length();
    max_dt = 0.5 * sigma * sigma;
  }
  s.sigma_max = std::max(s.sigma_fine, std::sqrt(2.0 * max_dt));
  return s;
}

template <class Domain>
WalkOutcome run_walk(const Domain& domain, Vec3 x, const WalkConfig& cfg, const StepSizer& sizer,
                     Engine& engine) {
  boost::random::normal_distribution<double> normal;
  boost::random::uniform_01<double> uniform;
  WalkOutcome out;
  double elapsed = 0.0;
  while (out.steps < cfg.max_steps) {
    double sigma = sizer.sigma_fine;
    double dt = sizer.dt_fine;
    if (sizer.adaptive) {
      sigma = std::clamp(sizer.ramp * domain.feature_distance(x), sizer.sigma_fine,
                         sizer.sigma_max);
      dt = 0.5 * sigma * sigma;
    }
    const double n0 = normal(engine);
    const double n1 = normal(engine);
    const double n2 = normal(engine);
    const Vec3 proposal = x + sigma * Vec3(n0, n1, n2);
    ++out.steps;
    elapsed += dt;
    const StepOutcome step = domain.classify_step(x, proposal);
    if (step.kind == BoundaryClass::absorbing) {
      out.absorbed = true;
      break;
    }
    // The path may have touched the absorbing surface between two interior
    // samples; the Brownian bridge gives the probability exp(-2 a b / sigma^2).
    const double a = domain.absorbing_distance(x);
    if (a < kNoAbsorber) {
      const double b = domain.absorbing_distance(step.point);
      const double exponent = 2.0 * a * b / (sigma * sigma);
      if (exponent < kBridgeCutoff && uniform(engine) < std::exp(-exponent)) {
        out.absorbed = true;
        break;
      }
    }
    x = step.point;
  }
  out.time = elapsed;
  return out;
}

}  // namespace

double WalkConfig::resolved_dt(double resolution) const {
  if (dt > 0.0) return dt;
  const double h = resolution / 10.0;
  return h * h;
}

void WalkConfig::validate(double resolution) const {
  const double step_dt = resolved_dt(resolution);
  if (!std::isfinite(step_dt) || !(step_dt > 0.0)) throw DomainError("dt must be positive");
  if (!(std::sqrt(2.0 * step_dt) < resolution / 2.0)) {
    throw DomainError("time step too coarse: sqrt(2 dt) must be below half the neck radius");
  }
  if (particles < 1) throw DomainError("at least one particle is required");
  if (max_steps < 1) throw DomainError("max_steps must be positive");
  if (control == StepControl::adaptive) {
    if (!(ramp > 0.0) || !std::isfinite(ramp)) throw DomainError("adaptive ramp must be positive");
    if (max_dt > 0.0 && max_dt < step_dt) throw DomainError("max_dt must not be below dt");
  }
}

double FirstPassageResult::censored_fraction() const {
  const auto total = absorbed + censored;
  return total == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(total);
}

template <class Domain>
WalkOutcome walk_particle(const Domain& domain, const Vec3& start, const WalkConfig& cfg,
                          std::uint64_t index) {
  Engine engine = particle_engine(cfg.seed, index);
  return run_walk(domain, start, cfg, make_sizer(domain, cfg), engine);
}

template <class Domain>
FirstPassageResult simulate_mfpt(const Domain& domain, const Vec3& start, const WalkConfig& cfg) {
  if (!start.allFinite() || !domain.contains(start)) {
    throw DomainError("simulate_mfpt: start point is not interior");
  }
  cfg.validate(domain.resolution_length());
  const StepSizer sizer = make_sizer(domain, cfg);

  const std::uint64_t n = cfg.particles;
  std::vector<WalkOutcome> outcomes(n);
  const auto worker_body = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Engine engine = particle_engine(cfg.seed, i);
      outcomes[i] = run_walk(domain, start, cfg, sizer, engine);
    }
  };

  const std::uint64_t workers = std::clamp<std::uint64_t>(cfg.workers, 1, n);
  if (workers == 1) {
    worker_body(0, n);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker_body, n * w / workers, n * (w + 1) / workers);
    }
  }

  FirstPassageResult result;
  result.dt = sizer.dt_fine;
  quadrature::CompensatedSum sum;
  for (const auto& o : outcomes) {
    result.total_steps += o.steps;
    if (o.absorbed) {
      ++result.absorbed;
      sum.add(o.time);
    } else {
      ++result.censored;
    }
  }
  if (result.absorbed > 0) {
    result.mean = sum.value() / static_cast<double>(result.absorbed);
    quadrature::CompensatedSum sq;
    for (const auto& o : outcomes) {
      if (!o.absorbed) continue;
      const double d = o.time - result.mean;
      sq.add(d * d);
    }
    if (result.absorbed > 1) {
      const double var = sq.value() / static_cast<double>(result.absorbed - 1);
      result.std_error = std::sqrt(var / static_cast<double>(result.absorbed));
    }
  }
  const double censored = result.censored_fraction();
  result.valid = result.absorbed > 0 && censored <= 0.1;
  result.censoring_warning = censored > 1e-3;
  return result;
}

template FirstPassageResult simulate_mfpt(const SpineDomain&, const Vec3&, const WalkConfig&);
template FirstPassageResult simulate_mfpt(const AbsorbingBall&, const Vec3&, const WalkConfig&);
template FirstPassageResult simulate_mfpt(const CappedNeck&, const Vec3&, const WalkConfig&);
template WalkOutcome walk_particle(const SpineDomain&, const Vec3&, const WalkConfig&,
                                   std::uint64_t);
template WalkOutcome walk_particle(const AbsorbingBall&, const Vec3&, const WalkConfig&,
                                   std::uint64_t);
template WalkOutcome walk_particle(const CappedNeck&, const Vec3&, const WalkConfig&,
                                   std::uint64_t);

SpineDomain make_flush_domain(const HeadDims& head, double eps, double neck_len) {
  const HeadShape shape = std::visit(
      [eps](const auto& h) {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return HeadShape::flush_ball(h.radius, eps);
        } else {
          return HeadShape::flush_ellipsoid(h.a, h.b, h.c, eps);
        }
      },
      head);
  return {shape, eps, neck_len};
}

Vec3 resolve_start(const SpineDomain& domain, const StartPoint& start) {
  if (std::holds_alternative<HeadCenter>(start)) return domain.head_center();
  return std::get<Vec3>(start);
}

std::vector<SweepRecord> sweep(const SweepSpec& spec, SweepAxis axis,
                               const std::vector<double>& values) {
  if (values.empty()) throw DomainError("sweep: parameter list is empty");
  for (double v : values) {
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("sweep: values must be positive");
  }
  std::vector<SweepRecord> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SweepRecord row;
    row.param = v;
    const double eps = axis == SweepAxis::eps ? v : spec.eps;
    const double neck_len = axis == SweepAxis::neck_len ? v : spec.neck_len;
    try {
      const SpineDomain domain = make_flush_domain(spec.head, eps, neck_len);
      const Vec3 start = resolve_start(domain, spec.start);
      row.u_asym = asymptotics::eval_u_eps(
          asymptotics::AsymptoticParams::from_domain(domain, spec.m_const), start);
      if (spec.run_monte_carlo) {
        const FirstPassageResult mc = simulate_mfpt(domain, start, spec.walk);
        row.mc = mc;
        row.u_mc = mc.mean;
        row.u_mc_stderr = mc.std_error;
        row.rel_err = (row.u_asym - row.u_mc) / row.u_mc;
        if (!mc.valid) {
          row.valid = false;
          row.note = "censored fraction above 10%";
        } else if (mc.censoring_warning) {
          row.note = "censored fraction above 0.1%";
        }
      } else {
        row.u_mc = std::nan("");
        row.u_mc_stderr = std::nan("");
        row.rel_err = std::nan("");
      }
    } catch (const std::exception& e) {
      row.valid = false;
      row.note = e.what();
      row.u_mc = row.u_mc_stderr = row.rel_err = std::nan("");
      if (row.u_asym == 0.0) row.u_asym = std::nan("");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spine::montecarlo
