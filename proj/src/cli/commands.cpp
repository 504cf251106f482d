#include "spine/cli/commands.hpp"

#include "spine/montecarlo.hpp"
#include "spine/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace spine::cli {

namespace {

using nlohmann::json;
namespace q = spine::quadrature;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

json cmd_constants(const ConstantsOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const q::QuadratureGrid grid = q::QuadratureGrid::at_level(opts.level);
  const double m_quad = q::constant_M(grid);
  const q::DiskIntegralPieces closed = q::disk_integral_pieces();
  const q::DiskIntegralPieces quad = q::disk_integral_quadrature();
  const q::BoundCheck bound = q::check_single_layer_bound(grid, opts.samples);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double exact_total = 16.0 * std::numbers::pi / 3.0;

  return json{
      {"M_quadrature", m_quad},
      {"M_exact", asymptotics::kDiskM},
      {"M_abs_error", std::abs(m_quad - asymptotics::kDiskM)},
      {"M_from_disk_integral", closed.total / (2.0 * std::numbers::pi)},
      {"disk_integral_total", closed.total},
      {"disk_integral_exact", exact_total},
      {"disk_integral_total_abs_error", std::abs(closed.total - exact_total)},
      {"disk_integral_first_piece", closed.inner_disk},
      {"disk_integral_quadrature", quad.total},
      {"disk_integral_quadrature_abs_error", std::abs(quad.total - exact_total)},
      {"disk_integral_pieces",
       {{"closed", {closed.inner_disk, closed.near_band, closed.far_band}},
        {"quadrature", {quad.inner_disk, quad.near_band, quad.far_band}}}},
      {"single_layer_bound",
       {{"bound", bound.bound},
        {"max_sample", bound.max_value},
        {"argmax", {bound.argmax.x(), bound.argmax.y()}},
        {"center_value", bound.center_value},
        {"samples", opts.samples},
        {"within_bound", bound.max_value <= bound.bound}}},
      {"refinement_level", opts.level},
      {"seconds", seconds}};
}

json cmd_asymptotic(const RunConfig& cfg, const std::optional<Vec3>& at,
                    asymptotics::CenterDistance convention) {
  const SpineDomain domain = montecarlo::make_flush_domain(cfg.head, cfg.eps, cfg.neck_len);
  const auto params = asymptotics::AsymptoticParams::from_domain(domain);
  double u = 0.0;
  Vec3 x = domain.head_center();
  if (at) {
    x = *at;
    u = asymptotics::eval_u_eps(params, x);
  } else {
    u = asymptotics::eval_u_eps_at_center(domain, convention);
    if (convention == asymptotics::CenterDistance::unit) {
      x = -domain.head().semi_axes().x() * Vec3::UnitX();
    }
  }
  const double dist = (x - params.x_star).norm();
  json j{{"params", params},
         {"x", vec_json(x)},
         {"distance_to_x_star", dist},
         {"leading_term", asymptotics::leading_term(params)},
         {"second_term", asymptotics::second_term(params)},
         {"constant_term", params.robin.beta / params.robin.alpha},
         {"far_field_term", -params.head_volume / (2.0 * std::numbers::pi * dist)},
         {"u_eps", u},
         {"alpha_eps", params.alpha_eps()}};
  if (params.outside_comfort_zone()) {
    j["warning"] = "alpha*eps exceeds 0.1; the expansion assumes alpha*eps << 1";
  }
  return j;
}

SimulateReport cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  const SpineDomain domain = montecarlo::make_flush_domain(cfg.head, cfg.eps, cfg.neck_len);
  const Vec3 start = montecarlo::resolve_start(domain, cfg.start);
  const auto t0 = std::chrono::steady_clock::now();
  const montecarlo::FirstPassageResult r = montecarlo::simulate_mfpt(domain, start, cfg.walk);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  SimulateReport rep;
  rep.valid = r.valid;
  rep.body = json{{"version", version_string()},
                  {"config_hash", config_hash(cfg)},
                  {"config", settings(cfg)},
                  {"start", vec_json(start)},
                  {"mean", r.mean},
                  {"stderr", r.std_error},
                  {"absorbed", r.absorbed},
                  {"censored", r.censored},
                  {"total_steps", r.total_steps},
                  {"dt", r.dt},
                  {"valid", r.valid},
                  {"censoring_warning", r.censoring_warning},
                  {"seconds", seconds}};
  try {
    const auto params = asymptotics::AsymptoticParams::from_domain(domain);
    const double u_asym = asymptotics::eval_u_eps(params, start);
    rep.body["u_asym"] = u_asym;
    rep.body["rel_err"] = (u_asym - r.mean) / r.mean;
  } catch (const DomainError&) {
    rep.body["u_asym"] = nullptr;
  }
  return rep;
}

Table cmd_table(const RunConfig& cfg, const VarySpec& vary, bool run_monte_carlo) {
  if (vary.values.empty()) throw ConfigError("--vary list is empty");
  const auto records = montecarlo::sweep(cfg.sweep_spec(run_monte_carlo), vary.axis, vary.values);
  return make_table(cfg, vary.axis, records);
}

FitResult cmd_fit(const Table& table, FitColumn column) {
  std::vector<double> eps;
  std::vector<double> u;
  for (const auto& r : table.rows) {
    const double v = column == FitColumn::u_mc ? r.u_mc : r.u_asym;
    if (!r.valid || !std::isfinite(v)) continue;
    eps.push_back(r.param);
    u.push_back(v);
  }
  return fit_inverse_quadratic(eps, u);
}

json to_json(const FitResult& fit) {
  return json{{"a2", fit.a2}, {"a1", fit.a1}, {"a0", fit.a0}, {"residual_norm", fit.residual_norm}};
}

}  // namespace spine::cli
