#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace spine {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for malformed input such as non-finite coordinates.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Ball {
  double radius = 1.0;
};

struct Ellipsoid {
  double a = 1.0;  // semi-axis along the neck direction x1
  double b = 1.0;
  double c = 1.0;
};

/// Head of the spine. The head region is the shape intersected with the
/// half space x1 <= 0; the neck attaches on the junction plane x1 = 0.
struct HeadShape {
  std::variant<Ball, Ellipsoid> shape;
  Vec3 center = Vec3::Zero();

  /// Semi-axes (x1, x2, x3) of the shape.
  [[nodiscard]] Vec3 semi_axes() const;
  [[nodiscard]] std::string name() const;

  /// Places a ball so that the junction plane cuts a disk of radius exactly eps.
  static HeadShape flush_ball(double radius, double eps);
  /// Places an ellipsoid so that the smaller semi-axis of its junction cut is eps.
  static HeadShape flush_ellipsoid(double a, double b, double c, double eps);
};

enum class BoundaryClass { interior, reflecting, absorbing };

struct StepOutcome {
  BoundaryClass kind = BoundaryClass::interior;
  Vec3 point = Vec3::Zero();
};

inline constexpr double kNoAbsorber = std::numeric_limits<double>::infinity();

/// Composite spine: head plus a cylindrical neck of radius eps along +x1,
/// junction point at the origin, absorbing disk at x1 = neck_len.
///
/// Immutable after construction; all member functions are pure.
class SpineDomain {
 public:
  SpineDomain(HeadShape head, double eps, double neck_len);

  static SpineDomain with_ball_head(double radius, double eps, double neck_len);

  [[nodiscard]] const HeadShape& head() const { return head_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double neck_len() const { return neck_len_; }
  [[nodiscard]] Vec3 x_star() const { return Vec3::Zero(); }
  [[nodiscard]] Vec3 axis() const { return Vec3::UnitX(); }

  [[nodiscard]] bool contains(const Vec3& p) const;
  [[nodiscard]] bool in_neck(const Vec3& p) const;

  /// Resolves one walker step. `from` must be interior.
  ///
  /// Interior destinations are returned unchanged. A step leaving through the
  /// disk x1 = L inside the neck is absorbed at the crossing point. Otherwise
  /// the step is specularly reflected off the first boundary surface it
  /// crosses, repeating for up to 8 bounces before falling back to a point
  /// pulled back along the original step.
  [[nodiscard]] StepOutcome classify_step(const Vec3& from, const Vec3& to) const;

  /// Full head shape volume (the cap beyond the junction plane is not removed).
  [[nodiscard]] double head_volume() const;

  /// Distance to the absorbing disk along the neck axis for neck points,
  /// kNoAbsorber elsewhere.
  [[nodiscard]] double absorbing_distance(const Vec3& p) const;
  /// Distance to the junction disk; zero inside the neck.
  [[nodiscard]] double feature_distance(const Vec3& p) const;
  /// Smallest geometric length the walker must resolve (the neck radius).
  [[nodiscard]] double resolution_length() const { return eps_; }
  /// Length scale of the bulk (smallest head semi-axis).
  [[nodiscard]] double bulk_length() const { return head_.semi_axes().minCoeff(); }
  /// Head center, the default evaluation point.
  [[nodiscard]] Vec3 head_center() const { return head_.center; }

 private:
  HeadShape head_;
  Vec3 inv_axes_;
  double eps_;
  double neck_len_;
};

/// Calibration domain: ball with a fully absorbing surface.
class AbsorbingBall {
 public:
  explicit AbsorbingBall(double radius, Vec3 center = Vec3::Zero());

  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] const Vec3& center() const { return center_; }

  [[nodiscard]] bool contains(const Vec3& p) const;
  [[nodiscard]] StepOutcome classify_step(const Vec3& from, const Vec3& to) const;
  [[nodiscard]] double absorbing_distance(const Vec3& p) const;
  [[nodiscard]] double feature_distance(const Vec3& p) const { return absorbing_distance(p); }
  [[nodiscard]] double resolution_length() const { return radius_; }
  [[nodiscard]] double bulk_length() const { return radius_; }

 private:
  double radius_;
  Vec3 center_;
};

/// Calibration domain: cylinder 0 <= x1 <= L of radius eps, reflecting wall
/// and cap at x1 = 0, absorbing disk at x1 = L.
class CappedNeck {
 public:
  CappedNeck(double eps, double neck_len);

  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double neck_len() const { return neck_len_; }

  [[nodiscard]] bool contains(const Vec3& p) const;
  [[nodiscard]] StepOutcome classify_step(const Vec3& from, const Vec3& to) const;
  [[nodiscard]] double absorbing_distance(const Vec3& p) const;
  [[nodiscard]] double feature_distance(const Vec3& p) const;
  [[nodiscard]] double resolution_length() const { return eps_; }
  [[nodiscard]] double bulk_length() const { return eps_; }

 private:
  double eps_;
  double neck_len_;
};

}  // namespace spine
