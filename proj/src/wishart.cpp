#include "mvgamma/wishart.hpp"

#include "mvgamma/errors.hpp"

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>

namespace mvgamma {

WishartSpec::WishartSpec(double nu, CovMatrix scale) : nu_(nu), scale_(std::move(scale)) {
  require(std::isfinite(nu) && nu > static_cast<double>(scale_.dim() - 1),
          "Wishart sampling requires nu > p - 1");
}

Matrix sample_bartlett_factor(Eigen::Index p, double nu, RandomEngine& engine) {
  Matrix v = Matrix::Zero(p, p);
  boost::random::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < p; ++i) {
    boost::random::chi_squared_distribution<double> chi2(nu - static_cast<double>(i));
    v(i, i) = std::sqrt(chi2(engine));
    for (Eigen::Index j = 0; j < i; ++j) v(i, j) = normal(engine);
  }
  return v;
}

Matrix sample_wishart(const WishartSpec& spec, RandomEngine& engine) {
  const Matrix lv = spec.scale().cholesky_lower() * sample_bartlett_factor(spec.dim(), spec.nu(), engine);
  return lv * lv.transpose();
}

Matrix sample_wishart(const WishartSpec& spec, RngSeed seed) {
  RandomEngine engine(seed);
  return sample_wishart(spec, engine);
}

HalfWishartSample sample_half_wishart(ShapeParam alpha, const CovMatrix& scale,
                                      RandomEngine& engine) {
  return {0.5 * sample_wishart(WishartSpec(alpha.nu(), scale), engine)};
}

double half_wishart_log_pdf(const HalfWishartSample& y, ShapeParam alpha, const CovMatrix& scale) {
  const Eigen::Index p = scale.dim();
  require(y.y.rows() == p && y.y.cols() == p, "half-Wishart density: Y must match the scale dimension");
  require(alpha.nu() > static_cast<double>(p - 1), "half-Wishart density requires 2*alpha > p - 1");
  const Eigen::LLT<Matrix> llt(0.5 * (y.y + y.y.transpose()));
  require(llt.info() == Eigen::Success, "half-Wishart density requires Y positive definite");
  const double log_det_y = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double a = alpha.alpha();
  return -log_mv_gamma_fn(static_cast<int>(p), alpha) - a * scale.log_det() +
         (a - 0.5 * static_cast<double>(p + 1)) * log_det_y - scale.solve(y.y).trace();
}

}  // namespace mvgamma
