#include "spine/asymptotics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

namespace spine::asymptotics {

namespace {
constexpr double kPi = std::numbers::pi;
}

RobinParams robin_from_neck(double neck_len) {
  if (!std::isfinite(neck_len) || !(neck_len > 0.0)) {
    throw DomainError("robin_from_neck: neck length must be positive");
  }
  return {1.0 / neck_len, neck_len / 2.0};
}

AsymptoticParams AsymptoticParams::from_domain(const SpineDomain& domain, double m_const) {
  AsymptoticParams p{domain.head_volume(), domain.eps(), domain.neck_len(), m_const,
                     domain.x_star(), robin_from_neck(domain.neck_len())};
  p.validate();
  return p;
}

void AsymptoticParams::validate() const {
  if (!(head_volume > 0.0) || !std::isfinite(head_volume)) {
    throw DomainError("head volume must be positive");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  if (!(neck_len > 0.0) || !std::isfinite(neck_len)) {
    throw DomainError("neck length must be positive");
  }
  if (!(m_const > 0.0)) throw DomainError("M must be positive");
  if (!(robin.alpha > 0.0) || !(robin.beta > 0.0)) {
    throw DomainError("Robin coefficients must be positive");
  }
  if (alpha_eps() >= 1.0) throw DomainError("alpha * eps must be well below 1");
}

void to_json(nlohmann::json& j, const AsymptoticParams& p) {
  j = nlohmann::json{{"head_volume", p.head_volume},
                     {"eps", p.eps},
                     {"neck_len", p.neck_len},
                     {"m_const", p.m_const},
                     {"x_star", {p.x_star.x(), p.x_star.y(), p.x_star.z()}},
                     {"alpha", p.robin.alpha},
                     {"beta", p.robin.beta}};
}

void from_json(const nlohmann::json& j, AsymptoticParams& p) {
  j.at("head_volume").get_to(p.head_volume);
  j.at("eps").get_to(p.eps);
  j.at("neck_len").get_to(p.neck_len);
  j.at("m_const").get_to(p.m_const);
  const auto& xs = j.at("x_star");
  p.x_star = Vec3(xs.at(0).get<double>(), xs.at(1).get<double>(), xs.at(2).get<double>());
  j.at("alpha").get_to(p.robin.alpha);
  j.at("beta").get_to(p.robin.beta);
}

double leading_term(const AsymptoticParams& params) {
  return params.head_volume * params.neck_len / (kPi * params.eps * params.eps);
}

double second_term(const AsymptoticParams& params) {
  return params.head_volume * params.m_const / (kPi * kPi * params.eps);
}

double eval_u_eps(const AsymptoticParams& params, const Vec3& x) {
  if (!x.allFinite()) throw InvalidInput("eval_u_eps: non-finite evaluation point");
  const double dist = (x - params.x_star).norm();
  if (dist == 0.0) throw SingularityError("eval_u_eps: evaluation point equals x*");
  if (dist <= params.eps) {
    throw DomainError("eval_u_eps: evaluation point must stay farther than eps from x*");
  }
  const double constant = params.robin.beta / params.robin.alpha;
  return leading_term(params) + second_term(params) + constant -
         params.head_volume / (2.0 * kPi * dist);
}

double eval_u_eps_at_center(const SpineDomain& domain, CenterDistance convention,
                            double m_const) {
  const auto params = AsymptoticParams::from_domain(domain, m_const);
  Vec3 x = domain.head_center();
  if (convention == CenterDistance::unit) {
    // Same direction from x*, at distance equal to the head radius along the axis.
    x = -domain.head().semi_axes().x() * Vec3::UnitX();
  }
  return eval_u_eps(params, x);
}

double flux_leading(const AsymptoticParams& params) {
  return -params.head_volume / (kPi * params.eps * params.eps);
}

double eval_flux(const AsymptoticParams& params, const Vec2& x_on_gamma, double L_one_value) {
  if (x_on_gamma.norm() > params.eps * (1.0 + 1e-12)) {
    throw DomainError("eval_flux: point lies outside the junction disk");
  }
  const double correction = params.robin.alpha * params.head_volume /
                            (kPi * kPi * params.eps) * (params.m_const - kPi * L_one_value);
  return flux_leading(params) - correction;
}

double neck_profile(double neck_len, double slope, double x1) {
  if (!(x1 >= 0.0) || x1 > neck_len) throw DomainError("neck_profile: x1 outside [0, L]");
  return -0.5 * x1 * x1 + slope * x1 + 0.5 * neck_len * neck_len - slope * neck_len;
}

double neck_profile_slope(double neck_len, double slope, double x1) {
  if (!(x1 >= 0.0) || x1 > neck_len) throw DomainError("neck_profile: x1 outside [0, L]");
  return -x1 + slope;
}

double g_ball(double radius, const Vec3& center, const Vec3& x) {
  const double r2 = (x - center).squaredNorm();
  if (r2 > radius * radius * (1.0 + 1e-12)) throw DomainError("g_ball: point outside the ball");
  return (radius * radius - r2) / 6.0;
}

}  // namespace spine::asymptotics
