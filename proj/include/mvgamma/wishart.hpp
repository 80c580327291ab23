#pragma once

#include "mvgamma/linalg.hpp"
#include "mvgamma/rng.hpp"
#include "mvgamma/scalar_gamma.hpp"

namespace mvgamma {

/// W_p(nu, scale) with real nu > p - 1.
class WishartSpec {
 public:
  WishartSpec(double nu, CovMatrix scale);

  double nu() const { return nu_; }
  const CovMatrix& scale() const { return scale_; }
  Eigen::Index dim() const { return scale_.dim(); }

 private:
  double nu_;
  CovMatrix scale_;
};

/// Y with 2Y ~ W_p(2 alpha, Sigma); its diagonal is Gamma_p(alpha, Sigma).
struct HalfWishartSample {
  Matrix y;
  Vector diag_x() const { return y.diagonal(); }
};

/// Bartlett construction: M = L V V^T L^T, L the Cholesky factor of the
/// scale, V lower triangular with V_ii^2 ~ chi2(nu - i) (i zero-based) and
/// standard normal entries below the diagonal.
Matrix sample_wishart(const WishartSpec& spec, RandomEngine& engine);
Matrix sample_wishart(const WishartSpec& spec, RngSeed seed);

/// Draws V (lower triangular Bartlett factor) for W_p(nu, I).
Matrix sample_bartlett_factor(Eigen::Index p, double nu, RandomEngine& engine);

/// Half-scale draw Y = M / 2 with M ~ W_p(2 alpha, scale).
HalfWishartSample sample_half_wishart(ShapeParam alpha, const CovMatrix& scale,
                                      RandomEngine& engine);

/// log[(Gamma_p(alpha))^{-1} |S|^{-alpha} |Y|^{alpha-(p+1)/2} etr(-S^{-1} Y)].
double half_wishart_log_pdf(const HalfWishartSample& y, ShapeParam alpha, const CovMatrix& scale);

}  // namespace mvgamma
