#include "spine/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spine::quadrature {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(int n, const char* what) {
  if (n < 1) throw DomainError(std::string(what) + " must be at least 1");
}

}  // namespace

QuadratureGrid::QuadratureGrid(int radial, int angular, int inner_angular)
    : radial_(radial), angular_(angular), inner_angular_(inner_angular) {
  require_positive(radial, "radial refinement");
  require_positive(angular, "angular refinement");
  require_positive(inner_angular, "inner angular refinement");
  const double dr = 1.0 / radial_;
  const double dtheta = 2.0 * kPi / angular_;
  nodes_.reserve(static_cast<std::size_t>(radial_) * angular_);
  for (int i = 0; i < radial_; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < angular_; ++j) {
      const double theta = (j + 0.5) * dtheta;
      nodes_.push_back({Vec2(r * std::cos(theta), r * std::sin(theta)), r * dr * dtheta});
    }
  }
}

double QuadratureGrid::total_weight() const {
  CompensatedSum s;
  for (const auto& n : nodes_) s.add(n.weight);
  return s.value();
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    carry_ += (sum_ - t) + v;
  } else {
    carry_ += (v - t) + sum_;
  }
  sum_ = t;
}

CompensatedSum& CompensatedSum::operator+=(const CompensatedSum& other) {
  add(other.sum_);
  add(other.carry_);
  return *this;
}

double chord_to_circle(const Vec2& x, double theta) {
  const double b = x.x() * std::cos(theta) + x.y() * std::sin(theta);
  const double c = std::max(0.0, 1.0 - x.squaredNorm());
  const double root = std::sqrt(b * b + c);
  // r solves r^2 + 2 b r - c = 0; pick the cancellation-free branch.
  return b > 0.0 ? c / (b + root) : root - b;
}

double apply_L_one(const QuadratureGrid& grid, const Vec2& x) {
  if (!x.allFinite() || x.squaredNorm() > 1.0 + 1e-14) {
    throw DomainError("apply_L_one: point lies outside the closed unit disk");
  }
  const int n = grid.inner_angular();
  const double dtheta = 2.0 * kPi / n;
  CompensatedSum s;
  for (int k = 0; k < n; ++k) s.add(chord_to_circle(x, (k + 0.5) * dtheta));
  return s.value() / n;
}

CompensatedSum partial_M(const QuadratureGrid& grid, std::size_t begin, std::size_t end) {
  const auto& nodes = grid.nodes();
  end = std::min(end, nodes.size());
  CompensatedSum s;
  for (std::size_t i = begin; i < end; ++i) {
    s.add(nodes[i].weight * apply_L_one(grid, nodes[i].point));
  }
  return s;
}

double constant_M(const QuadratureGrid& grid) {
  return partial_M(grid, 0, grid.nodes().size()).value();
}

double constant_M_swapped(const QuadratureGrid& grid) {
  // Kernel symmetry lets the source point play the role of the polar center.
  const auto& nodes = grid.nodes();
  CompensatedSum s;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    s.add(it->weight * apply_L_one(grid, it->point));
  }
  return s.value();
}

DiskIntegralPieces disk_integral_pieces() {
  const double sqrt3 = std::sqrt(3.0);
  DiskIntegralPieces p{};
  p.inner_disk = 2.0 * kPi * kPi / 3.0;
  p.near_band = 4.0 / 3.0 + kPi / 6.0 - 0.75 * sqrt3;
  p.far_band = -kPi / 3.0 + 0.75 * sqrt3;
  p.total = p.inner_disk + 4.0 * kPi * (p.near_band + p.far_band);
  return p;
}

double disk_integral_total() { return disk_integral_pieces().total; }

DiskIntegralPieces disk_integral_quadrature(double tolerance) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned kDepth = 15;

  // s * angle subtended at distance r from a point at radius s.
  const auto arc = [](double s, double r) {
    if (s <= 0.0 || r <= 0.0) return 0.0;
    const double c = std::clamp((s * s + r * r - 1.0) / (2.0 * s * r), -1.0, 1.0);
    return s * std::acos(c);
  };
  const auto nested = [&](double r_lo, double r_hi, auto s_lo, auto s_hi) {
    return gauss_kronrod<double, 31>::integrate(
        [&](double r) {
          const double a = s_lo(r);
          const double b = s_hi(r);
          if (b <= a) return 0.0;
          return gauss_kronrod<double, 31>::integrate([&](double s) { return arc(s, r); }, a, b,
                                                      kDepth, tolerance);
        },
        r_lo, r_hi, kDepth, tolerance);
  };

  DiskIntegralPieces p{};
  p.inner_disk = gauss_kronrod<double, 31>::integrate(
      [](double s) { return 2.0 * kPi * s * 2.0 * kPi * (1.0 - s); }, 0.0, 1.0, kDepth,
      tolerance);
  p.near_band = nested(
      0.0, 1.0, [](double r) { return 1.0 - r; }, [](double) { return 1.0; });
  p.far_band = nested(
      1.0, 2.0, [](double r) { return r - 1.0; }, [](double) { return 1.0; });
  p.total = p.inner_disk + 4.0 * kPi * (p.near_band + p.far_band);
  return p;
}

BoundCheck check_single_layer_bound(const QuadratureGrid& grid, int samples) {
  if (samples < 1) throw DomainError("check_single_layer_bound needs at least one sample");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  BoundCheck out{};
  out.bound = 4.0 * kPi;
  out.center_value = 2.0 * kPi * apply_L_one(grid, Vec2::Zero());
  out.max_value = out.center_value;
  out.argmax = Vec2::Zero();
  for (int k = 1; k < samples; ++k) {
    const double radius = std::sqrt(static_cast<double>(k) / (samples - 1));
    const Vec2 x(radius * std::cos(k * golden), radius * std::sin(k * golden));
    const double v = 2.0 * kPi * apply_L_one(grid, x);
    if (v > out.max_value) {
      out.max_value = v;
      out.argmax = x;
    }
  }
  return out;
}

}  // namespace spine::quadrature
