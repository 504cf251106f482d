#include "spine/cli/fit.hpp"

#include "spine/cli/config.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace spine::cli {

FitResult fit_inverse_quadratic(const std::vector<double>& eps, const std::vector<double>& u) {
  if (eps.size() != u.size()) throw ConfigError("fit: eps and u columns differ in length");
  std::set<double> distinct;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!std::isfinite(eps[i]) || !(eps[i] > 0.0) || !std::isfinite(u[i])) {
      throw ConfigError("fit: eps must be positive and all values finite");
    }
    distinct.insert(eps[i]);
  }
  if (distinct.size() < 3) {
    throw ConfigError("fit: rank-deficient design, need at least three distinct eps values");
  }

  const auto n = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double inv = 1.0 / eps[static_cast<std::size_t>(i)];
    design(i, 0) = inv * inv;
    design(i, 1) = inv;
    design(i, 2) = 1.0;
    rhs(i) = u[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d scale = design.cwiseAbs().colwise().maxCoeff().transpose();
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();

  const Eigen::Matrix3d normal = scaled.transpose() * scaled;
  const Eigen::Vector3d moment = scaled.transpose() * rhs;
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
  if (lu.rank() < 3) throw ConfigError("fit: rank-deficient design");
  const Eigen::Vector3d coef = lu.solve(moment).cwiseQuotient(scale);

  FitResult out;
  out.a2 = coef(0);
  out.a1 = coef(1);
  out.a0 = coef(2);
  out.residual_norm = (design * coef - rhs).norm();
  return out;
}

}  // namespace spine::cli
