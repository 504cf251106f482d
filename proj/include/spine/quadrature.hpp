#pragma once

#include "spine/geometry.hpp"

#include <cstddef>
#include <vector>

namespace spine::quadrature {

struct Node {
  Vec2 point;
  double weight;
};

/// Tensor polar midpoint grid over the unit disk. `inner_angular` sets the
/// number of directions used for the singular inner integral at each node.
class QuadratureGrid {
 public:
  static constexpr int kDefaultLevel = 256;

  explicit QuadratureGrid(int radial = kDefaultLevel, int angular = kDefaultLevel,
                          int inner_angular = kDefaultLevel);

  /// Grid with `level` radial and angular rings and `level` inner directions.
  static QuadratureGrid at_level(int level) { return QuadratureGrid(level, level, level); }

  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] int refinement_level() const { return radial_; }
  [[nodiscard]] int inner_angular() const { return inner_angular_; }
  [[nodiscard]] double total_weight() const;

 private:
  int radial_;
  int angular_;
  int inner_angular_;
  std::vector<Node> nodes_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  [[nodiscard]] double value() const { return sum_ + carry_; }
  CompensatedSum& operator+=(const CompensatedSum& other);

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Distance from x (|x| <= 1) to the unit circle along direction theta.
double chord_to_circle(const Vec2& x, double theta);

/// L[1](x) = (1/2pi) * integral over the unit disk of |x - z|^-1 dz.
///
/// The inner integral runs in polar coordinates centered at x, where the
/// Jacobian cancels the kernel and only the boundary distance remains.
/// Throws DomainError when |x| > 1.
double apply_L_one(const QuadratureGrid& grid, const Vec2& x);

/// M = integral over the disk of L[1](x) dx; converges to 8/3.
double constant_M(const QuadratureGrid& grid);

/// Double integral of (2 pi |x - z|)^-1 with the outer sum taken over the
/// nodes in `[begin, end)` of the grid. Partial sums over a partition add up
/// to constant_M.
CompensatedSum partial_M(const QuadratureGrid& grid, std::size_t begin, std::size_t end);

/// Same double integral with the integration order swapped: the outer loop
/// runs over the source points z in reverse node order.
double constant_M_swapped(const QuadratureGrid& grid);

/// Closed-form pieces of the disk self-interaction integral
/// I = integral over disk x disk of |x - y|^-1 dx dy = 16 pi / 3.
struct DiskIntegralPieces {
  double inner_disk;     // r <= 1 - s part: 2 pi^2 / 3
  double near_band;      // 4/3 + pi/6 - (3/4) sqrt 3
  double far_band;       // -pi/3 + (3/4) sqrt 3
  double total;          // inner_disk + 4 pi (near_band + far_band)
};

DiskIntegralPieces disk_integral_pieces();
double disk_integral_total();

/// Independent evaluation of the same pieces by nested adaptive
/// Gauss-Kronrod quadrature of the (s, r) arccos representation.
DiskIntegralPieces disk_integral_quadrature(double tolerance = 1e-7);

struct BoundCheck {
  double max_value;   // max over samples of integral |x - z|^-1 dz
  Vec2 argmax;
  double center_value;
  double bound;       // 4 pi
};

/// Samples the unscaled single-layer integral at `samples` points of the disk
/// (the center first, then a sunflower spiral reaching the rim) and returns the
/// maximum together with the 4 pi bound. Requires samples >= 1.
BoundCheck check_single_layer_bound(const QuadratureGrid& grid, int samples);

}  // namespace spine::quadrature
