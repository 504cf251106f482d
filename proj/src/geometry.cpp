#include "spine/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace spine {

namespace {

constexpr int kMaxBounces = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Face { none, head_surface, head_plane, neck_wall, neck_base, neck_end };

// Parameter interval [lo, hi] of a line p + t*dir inside a convex piece;
// hi_face is the surface through which the line leaves at t = hi.
struct Span {
  double lo = -kInf;
  double hi = kInf;
  Face hi_face = Face::none;

  [[nodiscard]] bool empty() const { return lo > hi; }

  void clip_hi(double t, Face f) {
    if (t < hi) {
      hi = t;
      hi_face = f;
    }
  }
  void clip_lo(double t) { lo = std::max(lo, t); }
  void make_empty() {
    lo = kInf;
    hi = -kInf;
  }
};

// Roots of a t^2 + 2 b t + c = 0 with a > 0, or false when there are none.
bool quadratic_roots(double a, double b, double c, double& t0, double& t1) {
  const double disc = b * b - a * c;
  if (disc < 0.0) return false;
  const double q = -(b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) {
    t0 = t1 = 0.0;
    return true;
  }
  t0 = q / a;
  t1 = c / q;
  if (t0 > t1) std::swap(t0, t1);
  return true;
}

// Restricts `span` to the ellipsoid |(x - center) * inv_axes| <= 1.
void clip_ellipsoid(Span& span, const Vec3& p, const Vec3& dir, const Vec3& center,
                    const Vec3& inv_axes, Face face) {
  const Vec3 u = (p - center).cwiseProduct(inv_axes);
  const Vec3 v = dir.cwiseProduct(inv_axes);
  double t0 = 0.0;
  double t1 = 0.0;
  if (!quadratic_roots(v.squaredNorm(), u.dot(v), u.squaredNorm() - 1.0, t0, t1)) {
    span.make_empty();
    return;
  }
  span.clip_lo(t0);
  span.clip_hi(t1, face);
}

// Restricts `span` to the infinite cylinder x2^2 + x3^2 <= radius^2.
void clip_cylinder(Span& span, const Vec3& p, const Vec3& dir, double radius) {
  const double a = dir.y() * dir.y() + dir.z() * dir.z();
  const double c = p.y() * p.y() + p.z() * p.z() - radius * radius;
  if (a == 0.0) {
    if (c > 0.0) span.make_empty();
    return;
  }
  double t0 = 0.0;
  double t1 = 0.0;
  if (!quadratic_roots(a, p.y() * dir.y() + p.z() * dir.z(), c, t0, t1)) {
    span.make_empty();
    return;
  }
  span.clip_lo(t0);
  span.clip_hi(t1, Face::neck_wall);
}

// Restricts `span` to x1 <= bound.
void clip_x1_below(Span& span, const Vec3& p, const Vec3& dir, double bound, Face face) {
  if (dir.x() > 0.0) {
    span.clip_hi((bound - p.x()) / dir.x(), face);
  } else if (dir.x() < 0.0) {
    span.clip_lo((bound - p.x()) / dir.x());
  } else if (p.x() > bound) {
    span.make_empty();
  }
}

// Restricts `span` to x1 >= bound.
void clip_x1_above(Span& span, const Vec3& p, const Vec3& dir, double bound, Face face) {
  if (dir.x() < 0.0) {
    span.clip_hi((bound - p.x()) / dir.x(), face);
  } else if (dir.x() > 0.0) {
    span.clip_lo((bound - p.x()) / dir.x());
  } else if (p.x() < bound) {
    span.make_empty();
  }
}

struct HeadPiece {
  Vec3 center;
  Vec3 inv_axes;
};

struct NeckPiece {
  double radius;
  double length;
};

// Union of at most one head piece and one neck piece; the shared engine
// behind every domain's step resolution.
struct PieceSet {
  const HeadPiece* head = nullptr;
  const NeckPiece* neck = nullptr;

  [[nodiscard]] std::array<Span, 2> spans(const Vec3& p, const Vec3& dir) const {
    std::array<Span, 2> out{};
    out[0].make_empty();
    out[1].make_empty();
    if (head != nullptr) {
      Span s;
      clip_ellipsoid(s, p, dir, head->center, head->inv_axes, Face::head_surface);
      clip_x1_below(s, p, dir, 0.0, Face::head_plane);
      out[0] = s;
    }
    if (neck != nullptr) {
      Span s;
      clip_cylinder(s, p, dir, neck->radius);
      clip_x1_above(s, p, dir, 0.0, Face::neck_base);
      clip_x1_below(s, p, dir, neck->length, Face::neck_end);
      out[1] = s;
    }
    return out;
  }

  // First parameter t > 0 at which the ray p + t*dir leaves the union, with
  // the face it leaves through. Face::none means p is not inside the union.
  [[nodiscard]] std::pair<double, Face> first_exit(const Vec3& p, const Vec3& dir) const {
    const double tol = 1e-12 * (1.0 + p.norm());
    const auto s = spans(p, dir);
    std::array<bool, 2> used{false, false};
    double end = -kInf;
    Face face = Face::none;
    for (int i = 0; i < 2; ++i) {
      if (s[i].empty() || s[i].lo > tol || s[i].hi <= tol) continue;
      used[i] = true;
      const bool tie = std::abs(s[i].hi - end) <= tol;
      if (s[i].hi > end + tol || (tie && s[i].hi_face == Face::neck_wall)) {
        end = s[i].hi;
        face = s[i].hi_face;
      }
    }
    if (face == Face::none) return {0.0, Face::none};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int i = 0; i < 2; ++i) {
        if (used[i] || s[i].empty()) continue;
        if (s[i].lo <= end + tol && s[i].hi > end + tol) {
          used[i] = true;
          end = s[i].hi;
          face = s[i].hi_face;
          grew = true;
        }
      }
    }
    return {end, face};
  }

  [[nodiscard]] Vec3 normal(Face face, const Vec3& e) const {
    switch (face) {
      case Face::head_surface: {
        const Vec3 inv2 = head->inv_axes.cwiseProduct(head->inv_axes);
        return (e - head->center).cwiseProduct(inv2).normalized();
      }
      case Face::head_plane:
        return Vec3::UnitX();
      case Face::neck_wall: {
        const double rho = std::hypot(e.y(), e.z());
        return Vec3(0.0, e.y() / rho, e.z() / rho);
      }
      case Face::neck_base:
        return -Vec3::UnitX();
      default:
        return Vec3::UnitX();
    }
  }
};

void require_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw InvalidInput(std::string(what) + " has non-finite coordinates");
}

// `clear(a, b)`: the whole segment a -> b lies in the domain, not only b.
// A step that cuts a corner is reflected like any other exit.
template <class Clear>
StepOutcome resolve_step(const PieceSet& pieces, const Clear& clear, const Vec3& from,
                         const Vec3& to) {
  require_finite(from, "step origin");
  require_finite(to, "step destination");
  if (clear(from, to)) return {BoundaryClass::interior, to};

  Vec3 start = from;
  Vec3 end = to;
  Vec3 fallback = from;
  for (int bounce = 0; bounce < kMaxBounces; ++bounce) {
    const Vec3 d = end - start;
    const double len = d.norm();
    if (len == 0.0) break;
    const Vec3 dir = d / len;
    const auto [t, face] = pieces.first_exit(start, dir);
    if (face == Face::none || t >= len) break;
    const Vec3 e = start + t * dir;
    if (bounce == 0) fallback = from + (1.0 - 1e-3) * (e - from);
    if (face == Face::neck_end) {
      Vec3 hit = e;
      hit.x() = pieces.neck->length;
      return {BoundaryClass::absorbing, hit};
    }
    const Vec3 n = pieces.normal(face, e);
    end -= 2.0 * (end - e).dot(n) * n;
    start = e;
    if (clear(start, end)) return {BoundaryClass::reflecting, end};
  }
  return {BoundaryClass::reflecting, fallback};
}

}  // namespace

// ---------------------------------------------------------------------------
// HeadShape

Vec3 HeadShape::semi_axes() const {
  return std::visit(
      [](const auto& s) -> Vec3 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return Vec3::Constant(s.radius);
        } else {
          return Vec3(s.a, s.b, s.c);
        }
      },
      shape);
}

std::string HeadShape::name() const {
  return std::holds_alternative<Ball>(shape) ? "ball" : "ellipsoid";
}

HeadShape HeadShape::flush_ball(double radius, double eps) {
  if (!(radius > 0.0) || !(eps > 0.0) || eps > radius) {
    throw DomainError("ball head needs radius > 0 and 0 < eps <= radius");
  }
  return {Ball{radius}, Vec3(-std::sqrt(radius * radius - eps * eps), 0.0, 0.0)};
}

HeadShape HeadShape::flush_ellipsoid(double a, double b, double c, double eps) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(eps > 0.0)) {
    throw DomainError("ellipsoid head needs positive semi-axes and eps > 0");
  }
  const double m = std::min(b, c);
  if (eps > m) throw DomainError("ellipsoid cross-section is narrower than the neck");
  return {Ellipsoid{a, b, c}, Vec3(-a * std::sqrt(1.0 - (eps * eps) / (m * m)), 0.0, 0.0)};
}

// ---------------------------------------------------------------------------
// SpineDomain

SpineDomain::SpineDomain(HeadShape head, double eps, double neck_len)
    : head_(std::move(head)), eps_(eps), neck_len_(neck_len) {
  if (!std::isfinite(eps) || !(eps > 0.0)) throw DomainError("neck radius eps must be positive");
  if (!std::isfinite(neck_len) || !(neck_len > eps)) {
    throw DomainError("neck length must exceed the neck radius");
  }
  require_finite(head_.center, "head center");
  const Vec3 axes = head_.semi_axes();
  if (!axes.allFinite() || axes.minCoeff() <= 0.0) {
    throw DomainError("head semi-axes must be positive");
  }
  if (head_.center.y() != 0.0 || head_.center.z() != 0.0) {
    throw DomainError("head center must lie on the neck axis");
  }
  // Semi-axes of the ellipse cut by the junction plane x1 = 0.
  const double h = head_.center.x() / axes.x();
  if (head_.center.x() >= 0.0 || h * h >= 1.0) {
    throw DomainError("junction plane must cut the head with the head on the x1 <= 0 side");
  }
  const double cut = std::min(axes.y(), axes.z()) * std::sqrt(1.0 - h * h);
  if (cut < eps * (1.0 - 1e-12)) {
    throw DomainError("junction cut of the head is smaller than the neck radius");
  }
  inv_axes_ = axes.cwiseInverse();
}

SpineDomain SpineDomain::with_ball_head(double radius, double eps, double neck_len) {
  return {HeadShape::flush_ball(radius, eps), eps, neck_len};
}

bool SpineDomain::in_neck(const Vec3& p) const {
  return p.x() >= 0.0 && p.x() < neck_len_ && p.y() * p.y() + p.z() * p.z() < eps_ * eps_;
}

bool SpineDomain::contains(const Vec3& p) const {
  if (p.x() < 0.0) {
    return (p - head_.center).cwiseProduct(inv_axes_).squaredNorm() < 1.0;
  }
  return in_neck(p);
}

StepOutcome SpineDomain::classify_step(const Vec3& from, const Vec3& to) const {
  const HeadPiece head{head_.center, inv_axes_};
  const NeckPiece neck{eps_, neck_len_};
  const PieceSet pieces{&head, &neck};
  // Head and neck are convex; a segment between interior points leaves the
  // domain only by crossing the junction plane outside the neck disk.
  const auto clear = [this](const Vec3& a, const Vec3& b) {
    if (!contains(b)) return false;
    if ((a.x() < 0.0) == (b.x() < 0.0)) return true;
    const double t = a.x() / (a.x() - b.x());
    const Vec3 cross = a + t * (b - a);
    return cross.y() * cross.y() + cross.z() * cross.z() < eps_ * eps_;
  };
  return resolve_step(pieces, clear, from, to);
}

double SpineDomain::head_volume() const {
  const Vec3 axes = head_.semi_axes();
  return 4.0 * std::numbers::pi / 3.0 * axes.prod();
}

double SpineDomain::absorbing_distance(const Vec3& p) const {
  return in_neck(p) ? neck_len_ - p.x() : kNoAbsorber;
}

double SpineDomain::feature_distance(const Vec3& p) const {
  if (p.x() >= 0.0) return 0.0;
  const double radial = std::max(0.0, std::sqrt(p.y() * p.y() + p.z() * p.z()) - eps_);
  return std::sqrt(p.x() * p.x() + radial * radial);
}

// ---------------------------------------------------------------------------
// AbsorbingBall

AbsorbingBall::AbsorbingBall(double radius, Vec3 center) : radius_(radius), center_(center) {
  if (!std::isfinite(radius) || !(radius > 0.0)) throw DomainError("ball radius must be positive");
  require_finite(center_, "ball center");
}

bool AbsorbingBall::contains(const Vec3& p) const {
  return (p - center_).squaredNorm() < radius_ * radius_;
}

StepOutcome AbsorbingBall::classify_step(const Vec3& from, const Vec3& to) const {
  require_finite(from, "step origin");
  require_finite(to, "step destination");
  if (contains(to)) return {BoundaryClass::interior, to};
  const Vec3 d = to - from;
  Span s;
  clip_ellipsoid(s, from, d, center_, Vec3::Constant(1.0 / radius_), Face::head_surface);
  const double t = s.empty() ? 0.0 : std::clamp(s.hi, 0.0, 1.0);
  return {BoundaryClass::absorbing, from + t * d};
}

double AbsorbingBall::absorbing_distance(const Vec3& p) const {
  return std::max(0.0, radius_ - (p - center_).norm());
}

// ---------------------------------------------------------------------------
// CappedNeck

CappedNeck::CappedNeck(double eps, double neck_len) : eps_(eps), neck_len_(neck_len) {
  if (!std::isfinite(eps) || !(eps > 0.0)) throw DomainError("neck radius eps must be positive");
  if (!std::isfinite(neck_len) || !(neck_len > 0.0)) {
    throw DomainError("neck length must be positive");
  }
}

bool CappedNeck::contains(const Vec3& p) const {
  return p.x() >= 0.0 && p.x() < neck_len_ && p.y() * p.y() + p.z() * p.z() < eps_ * eps_;
}

StepOutcome CappedNeck::classify_step(const Vec3& from, const Vec3& to) const {
  const NeckPiece neck{eps_, neck_len_};
  const PieceSet pieces{nullptr, &neck};
  return resolve_step(
      pieces, [this](const Vec3& /*a*/, const Vec3& b) { return contains(b); }, from, to);
}

double CappedNeck::absorbing_distance(const Vec3& p) const {
  return std::max(0.0, neck_len_ - p.x());
}

double CappedNeck::feature_distance(const Vec3& /*p*/) const { return 0.0; }

}  // namespace spine
