#include "mvgamma/scalar_gamma.hpp"

#include "mvgamma/errors.hpp"

#include <math.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mvgamma {

namespace {
const double kLogSmallestSubnormal = std::log(std::numeric_limits<double>::denorm_min());
}  // namespace

ShapeParam::ShapeParam(double alpha) : alpha_(alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, "shape parameter requires alpha > 0");
}

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double central_gamma_log_pdf(double x, ShapeParam alpha) {
  require(x > 0.0, "gamma density requires x > 0");
  const double a = alpha.alpha();
  return (a - 1.0) * std::log(x) - x - log_gamma(a);
}

double central_gamma_pdf(double x, ShapeParam alpha) {
  return std::exp(central_gamma_log_pdf(x, alpha));
}

double noncentral_gamma_log_pdf(double x, const NoncentralScalarParams& params, double tol) {
  require(x > 0.0, "non-central gamma density requires x > 0");
  require(params.y >= 0.0 && std::isfinite(params.y), "non-centrality requires y >= 0");
  require(tol > 0.0 && tol <= 1e-3, "series tolerance must lie in (0, 1e-3]");
  const double a = params.alpha.alpha();
  const double y = params.y;
  if (y == 0.0) return central_gamma_log_pdf(x, params.alpha);

  const double log_x = std::log(x);
  const double log_y = std::log(y);
  const double xy = x * y;
  auto log_term = [&](double n) {
    return -y + n * log_y - log_gamma(n + 1.0) + (a + n - 1.0) * log_x - x - log_gamma(a + n);
  };

  // Terms increase while xy / ((n+1)(a+n)) > 1; the first n where the
  // ratio drops to <= 1 carries the largest term.
  const double b = a + 1.0;
  const double disc = b * b - 4.0 * (a - xy);
  double mode = disc > 0.0 ? std::ceil(0.5 * (-b + std::sqrt(disc))) : 0.0;
  if (mode < 0.0) mode = 0.0;

  const double log_peak = log_term(mode);

  // Far from the origin the terms that matter span ~sqrt(mode) indices. The
  // ratio is decreasing, so with K terms on each side bounded by the peak
  // and geometric tails beyond, sum / peak <= 1 + 2K + 1/(1 - r_up) + 1/(1 - r_dn).
  // When even that bound underflows, the density is a clean zero.
  if (mode > 1e4) {
    const double k = std::max(0.25 * static_cast<double>(kSeriesTermCap), 1e-3 * mode);
    const double r_up = xy / ((mode + k + 1.0) * (a + mode + k));
    const double lo = mode - k;
    const double r_dn = lo > 0.0 ? lo * (a + lo - 1.0) / xy : 0.0;
    if (r_up < 1.0 && r_dn < 1.0) {
      const double bound = 1.0 + 2.0 * k + 1.0 / (1.0 - r_up) + 1.0 / (1.0 - r_dn);
      if (log_peak + std::log(bound) < kLogSmallestSubnormal) return -std::numeric_limits<double>::infinity();
    }
  }

  // Neighbours of the peak come from the term ratio
  // r(n) = xy / ((n + 1)(a + n)) = term(n + 1) / term(n).
  double sum = 1.0;
  std::size_t terms = 1;
  const double side_tol = 0.5 * tol;

  double rel = 1.0;
  for (double n = mode;; n += 1.0) {
    const double ratio = xy / ((n + 1.0) * (a + n));
    rel *= ratio;
    sum += rel;
    if (++terms > kSeriesTermCap)
      throw NumericalError("non-central gamma series did not converge within term cap");
    const double next = xy / ((n + 2.0) * (a + n + 1.0));
    if (rel == 0.0 || (next < 1.0 && rel * next / (1.0 - next) <= side_tol * sum)) break;
  }
  rel = 1.0;
  for (double n = mode; n > 0.0; n -= 1.0) {
    // term(n - 1) / term(n)
    const double ratio = n * (a + n - 1.0) / xy;
    rel *= ratio;
    sum += rel;
    if (++terms > kSeriesTermCap)
      throw NumericalError("non-central gamma series did not converge within term cap");
    const double next = (n - 1.0) * (a + n - 2.0) / xy;
    if (rel == 0.0 || (next < 1.0 && rel * next / (1.0 - next) <= side_tol * sum)) break;
  }
  return log_peak + std::log(sum);
}

double noncentral_gamma_pdf(double x, const NoncentralScalarParams& params, double tol) {
  return std::exp(noncentral_gamma_log_pdf(x, params, tol));
}

double scaled_noncentral_gamma_log_pdf(double x, double scale, double delta, ShapeParam alpha,
                                       double tol) {
  require(scale > 0.0 && std::isfinite(scale), "scaled density requires sigma0 > 0");
  require(delta >= 0.0 && std::isfinite(delta), "scaled density requires delta >= 0");
  return noncentral_gamma_log_pdf(x / scale, {delta / scale, alpha}, tol) - std::log(scale);
}

double scaled_noncentral_gamma_pdf(double x, double scale, double delta, ShapeParam alpha,
                                   double tol) {
  return std::exp(scaled_noncentral_gamma_log_pdf(x, scale, delta, alpha, tol));
}

double log_mv_gamma_fn(int p, ShapeParam alpha) {
  require(p >= 1, "multivariate gamma function requires p >= 1");
  const double a = alpha.alpha();
  require(2.0 * a > p - 1, "multivariate gamma function requires 2*alpha > p - 1");
  double out = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= p; ++j) out += log_gamma(a - 0.5 * (j - 1));
  return out;
}

}  // namespace mvgamma
