#pragma once

#include "spine/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace spine::asymptotics {

/// Closed-form value of M for a disk-shaped junction.
inline constexpr double kDiskM = 8.0 / 3.0;

class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Robin data dU/dnu + alpha U = beta on the junction.
struct RobinParams {
  double alpha;  // 1/length
  double beta;   // length
};

/// Replaces a neck of length L by a Robin condition: alpha = 1/L, beta = L/2.
RobinParams robin_from_neck(double neck_len);

/// How the distance from the head center to the junction point is taken.
enum class CenterDistance {
  geometric,  // sqrt(R^2 - eps^2), the actual center of a flush ball
  unit,       // |x - x*| = R, the head radius
};

struct AsymptoticParams {
  double head_volume;
  double eps;
  double neck_len;
  double m_const = kDiskM;
  Vec3 x_star = Vec3::Zero();
  RobinParams robin;

  /// Parameters for a spine domain, with the Robin data taken from its neck.
  static AsymptoticParams from_domain(const SpineDomain& domain, double m_const = kDiskM);

  /// alpha * eps, the small parameter of the expansion.
  [[nodiscard]] double alpha_eps() const { return robin.alpha * eps; }
  /// True when alpha * eps exceeds the soft threshold 0.1.
  [[nodiscard]] bool outside_comfort_zone() const { return alpha_eps() > 0.1; }

  /// Throws DomainError when any invariant fails (including alpha * eps >= 1).
  void validate() const;
};

void to_json(nlohmann::json& j, const AsymptoticParams& p);
void from_json(const nlohmann::json& j, AsymptoticParams& p);

/// |Omega_h| L / (pi eps^2).
double leading_term(const AsymptoticParams& params);

/// Second-order term |Omega_h| M / (pi^2 eps).
double second_term(const AsymptoticParams& params);

/// Two-term-plus-constant MFPT expansion at head point x:
///   |Omega_h| L/(pi eps^2) + |Omega_h| M/(pi^2 eps) + L^2/2 - |Omega_h|/(2 pi |x - x*|).
/// Requires |x - x*| > eps; x == x* raises SingularityError.
double eval_u_eps(const AsymptoticParams& params, const Vec3& x);

/// eval_u_eps at the head center of `domain` under the given distance convention.
double eval_u_eps_at_center(const SpineDomain& domain, CenterDistance convention,
                            double m_const = kDiskM);

/// Normal derivative of the MFPT on the junction:
///   -|Omega_h|/(pi eps^2) - alpha |Omega_h|/(pi^2 eps) * (M - pi L1),
/// with L1 = L[1](x/eps) supplied by the caller.
double eval_flux(const AsymptoticParams& params, const Vec2& x_on_gamma, double L_one_value);

/// Leading flux term alone; its integral over the junction is -|Omega_h|.
double flux_leading(const AsymptoticParams& params);

/// One-dimensional neck solution u(x1) = -x1^2/2 + C x1 + L^2/2 - C L.
double neck_profile(double neck_len, double slope, double x1);

/// Derivative of neck_profile with respect to x1.
double neck_profile_slope(double neck_len, double slope, double x1);

/// (R^2 - |x - center|^2) / 6: solves Delta g = -1 in the ball with
/// dg/dnu = -R/3 and zero boundary mean.
double g_ball(double radius, const Vec3& center, const Vec3& x);

}  // namespace spine::asymptotics
