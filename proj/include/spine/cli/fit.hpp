#pragma once

#include <vector>

namespace spine::cli {

/// u ~ a2 (1/eps)^2 + a1 (1/eps) + a0.
struct FitResult {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double residual_norm = 0.0;  // Euclidean norm of the residual vector
};

/// Ordinary least squares in 1/eps through the normal equations of the
/// max-abs column-scaled design. Needs at least three distinct eps values
/// (ConfigError otherwise) and positive, finite eps.
FitResult fit_inverse_quadratic(const std::vector<double>& eps, const std::vector<double>& u);

}  // namespace spine::cli
