#include "spine/asymptotics.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

using namespace spine;
using namespace spine::asymptotics;

namespace {

constexpr double kPi = std::numbers::pi;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// Reference u_eps at the head center of a unit ball, L = 1.
constexpr std::array<std::pair<double, double>, 10> kEpsRows{{{0.10, 144.48},
                                                              {0.09, 177.01},
                                                              {0.08, 222.31},
                                                              {0.07, 288.11},
                                                              {0.06, 389.07},
                                                              {0.05, 555.80},
                                                              {0.04, 861.46},
                                                              {0.03, 1519.04},
                                                              {0.02, 3389.75},
                                                              {0.01, 13446.34}}};

// Reference u_eps at the head center of a unit ball, eps = 0.05.
constexpr std::array<std::pair<double, double>, 10> kLengthRows{{{1.0, 555.80},
                                                                 {2.0, 1090.63},
                                                                 {3.0, 1626.47},
                                                                 {4.0, 2163.30},
                                                                 {5.0, 2701.13},
                                                                 {6.0, 3239.97},
                                                                 {7.0, 3779.80},
                                                                 {8.0, 4320.63},
                                                                 {9.0, 4862.47},
                                                                 {10.0, 5405.30}}};

AsymptoticParams unit_ball(double eps, double neck_len) {
  return AsymptoticParams::from_domain(SpineDomain::with_ball_head(1.0, eps, neck_len));
}

}  // namespace

TEST_CASE("robin data from the neck") {
  const auto r = robin_from_neck(2.0);
  CHECK(r.alpha == 0.5);
  CHECK(r.beta == 1.0);
  CHECK_THROWS_AS(robin_from_neck(0.0), DomainError);
}

TEST_CASE("u_eps reproduces the eps sweep at the head center") {
  for (const auto& [eps, expected] : kEpsRows) {
    const auto d = SpineDomain::with_ball_head(1.0, eps, 1.0);
    CAPTURE(eps);
    CHECK(std::abs(round2(eval_u_eps_at_center(d, CenterDistance::unit)) - expected) < 0.01 + 1e-9);
    CHECK(std::abs(round2(eval_u_eps_at_center(d, CenterDistance::geometric)) - expected) <
          0.01 + 1e-9);
  }
}

TEST_CASE("u_eps reproduces the neck length sweep at the head center") {
  for (const auto& [len, expected] : kLengthRows) {
    const auto d = SpineDomain::with_ball_head(1.0, 0.05, len);
    CAPTURE(len);
    CHECK(std::abs(round2(eval_u_eps_at_center(d, CenterDistance::unit)) - expected) < 0.01 + 1e-9);
  }
}

TEST_CASE("expansion coefficients in 1/eps") {
  const auto p = unit_ball(0.1, 1.0);
  CHECK(leading_term(p) * 0.01 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(second_term(p) * 0.1 == doctest::Approx(32.0 / (9.0 * kPi)).epsilon(1e-14));
  CHECK(32.0 / (9.0 * kPi) == doctest::Approx(1.13).epsilon(5e-3));
  CHECK(leading_term(p) == doctest::Approx(133.33).epsilon(1e-4));
}

TEST_CASE("property: exact decomposition into the four terms") {
  for (const double eps : {0.01, 0.03, 0.1}) {
    for (const double len : {0.5, 1.0, 7.0}) {
      const auto p = unit_ball(eps, len);
      const Vec3 x(-1.3, 0.2, -0.1);
      const double far = -p.head_volume / (2.0 * kPi * x.norm());
      const double sum = leading_term(p) + second_term(p) + len * len / 2.0 + far;
      CHECK(std::abs(eval_u_eps(p, x) - sum) <= 1e-12 * std::abs(sum));
      CHECK(p.robin.beta / p.robin.alpha == doctest::Approx(len * len / 2.0));
    }
  }
}

TEST_CASE("property: u_eps decreases in eps and increases in L and |x - x*|") {
  const Vec3 x(-1.0, 0.0, 0.0);
  double previous = INFINITY;
  for (double eps = 0.01; eps <= 0.3; eps += 0.01) {
    const double u = eval_u_eps(unit_ball(eps, 1.0), x);
    CHECK(u < previous);
    previous = u;
  }
  previous = -INFINITY;
  for (double len = 0.5; len <= 10.0; len += 0.5) {
    const double u = eval_u_eps(unit_ball(0.05, len), x);
    CHECK(u > previous);
    previous = u;
  }
  const auto p = unit_ball(0.05, 1.0);
  CHECK(eval_u_eps(p, Vec3(-0.5, 0.0, 0.0)) < eval_u_eps(p, Vec3(-1.5, 0.0, 0.0)));
}

TEST_CASE("u_eps near the junction is rejected") {
  const auto p = unit_ball(0.05, 1.0);
  CHECK_THROWS_AS(eval_u_eps(p, Vec3::Zero()), SingularityError);
  CHECK_THROWS_AS(eval_u_eps(p, Vec3(-0.04, 0.0, 0.0)), DomainError);
  CHECK_NOTHROW(eval_u_eps(p, Vec3(-0.06, 0.0, 0.0)));
}

TEST_CASE("parameter validation") {
  auto p = unit_ball(0.05, 1.0);
  CHECK_NOTHROW(p.validate());
  CHECK_FALSE(p.outside_comfort_zone());
  CHECK(unit_ball(0.2, 1.0).outside_comfort_zone());
  p.robin.alpha = 1.0 / 0.04;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("json round trip of parameters") {
  const auto p = unit_ball(0.07, 3.0);
  const nlohmann::json j = p;
  const auto q = j.get<AsymptoticParams>();
  CHECK(q.head_volume == p.head_volume);
  CHECK(q.eps == p.eps);
  CHECK(q.neck_len == p.neck_len);
  CHECK(q.m_const == p.m_const);
  CHECK(q.x_star == p.x_star);
  CHECK(q.robin.alpha == p.robin.alpha);
  CHECK(q.robin.beta == p.robin.beta);
}

TEST_CASE("flux: leading term integrates to minus the head volume") {
  const auto p = unit_ball(0.05, 1.0);
  CHECK(flux_leading(p) * kPi * p.eps * p.eps == doctest::Approx(-p.head_volume).epsilon(1e-14));
}

TEST_CASE("flux: the correction integrates to zero over the junction") {
  // With L1 = L[1](x/eps) = (2/pi) E(|x|/eps), the integral of M - pi L1 over
  // the disk vanishes because the integral of L1 is M.
  const auto p = unit_ball(0.05, 1.0);
  constexpr int kRings = 4000;
  double total = 0.0;
  for (int i = 0; i < kRings; ++i) {
    const double s = (i + 0.5) / kRings;
    const double area = 2.0 * kPi * s / kRings * p.eps * p.eps;
    const double l_one = 2.0 / kPi * std::comp_ellint_2(s);
    total += area * eval_flux(p, Vec2(s * p.eps, 0.0), l_one);
  }
  CHECK(total == doctest::Approx(-p.head_volume).epsilon(1e-6));
  CHECK_THROWS_AS(eval_flux(p, Vec2(0.06, 0.0), 1.0), DomainError);
}

TEST_CASE("neck profile solves the neck problem with the Robin closure") {
  const double len = 1.0;
  const double slope = 7.5;
  CHECK(neck_profile(len, slope, len) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(neck_profile_slope(len, slope, 0.0) == doctest::Approx(slope));
  const double h = 1e-4;
  for (const double x : {0.2, 0.5, 0.8}) {
    const double second = (neck_profile(len, slope, x + h) - 2.0 * neck_profile(len, slope, x) +
                           neck_profile(len, slope, x - h)) /
                          (h * h);
    CHECK(second == doctest::Approx(-1.0).epsilon(1e-5));
  }
  // u'(0) + alpha u(0) = beta with alpha = 1/L, beta = L/2, for any slope
  for (const double l : {0.5, 1.0, 4.0}) {
    const auto r = robin_from_neck(l);
    for (const double c : {-3.0, 0.0, 11.0}) {
      CHECK(neck_profile_slope(l, c, 0.0) + r.alpha * neck_profile(l, c, 0.0) ==
            doctest::Approx(r.beta));
    }
  }
  CHECK_THROWS_AS(neck_profile(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("junction value consistent with the neck profile") {
  // 133.83 is the leading term plus the neck constant at eps = 0.1.
  const auto p = unit_ball(0.1, 1.0);
  const double c = -p.head_volume / (kPi * p.eps * p.eps);
  CHECK(neck_profile(1.0, c, 0.0) == doctest::Approx(leading_term(p) + 0.5));
  CHECK(round2(neck_profile(1.0, c, 0.0)) == doctest::Approx(133.83));
}

TEST_CASE("ball head solution: Laplacian, flux and mean") {
  const Vec3 center(-0.9, 0.0, 0.0);
  const double radius = 1.0;
  const Vec3 x(-0.6, 0.2, -0.3);
  const double h = 1e-3;
  double lap = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 e = h * Vec3::Unit(k);
    lap += (g_ball(radius, center, x + e) - 2.0 * g_ball(radius, center, x) +
            g_ball(radius, center, x - e)) /
           (h * h);
  }
  CHECK(lap == doctest::Approx(-1.0).epsilon(1e-8));
  const Vec3 n = Vec3(0.6, 0.0, 0.8);
  // one-sided second-order difference, exact for the quadratic g
  const double dn = (3.0 * g_ball(radius, center, center + n) -
                     4.0 * g_ball(radius, center, center + (1.0 - h) * n) +
                     g_ball(radius, center, center + (1.0 - 2.0 * h) * n)) /
                    (2.0 * h);
  CHECK(dn == doctest::Approx(-radius / 3.0).epsilon(1e-8));
  CHECK(g_ball(radius, center, center + n) == doctest::Approx(0.0));
}
