#pragma once

#include <cstddef>

namespace mvgamma {

/// Shape alpha > 0; nu = 2 alpha is the "degrees of freedom".
class ShapeParam {
 public:
  explicit ShapeParam(double alpha);
  static ShapeParam from_dof(double nu) { return ShapeParam(0.5 * nu); }

  double alpha() const { return alpha_; }
  double nu() const { return 2.0 * alpha_; }

 private:
  double alpha_;
};

/// Thread-safe log Gamma(x) for x > 0.
double log_gamma(double x);

/// log of x^(alpha-1) e^(-x) / Gamma(alpha); x > 0.
double central_gamma_log_pdf(double x, ShapeParam alpha);
double central_gamma_pdf(double x, ShapeParam alpha);

struct NoncentralScalarParams {
  double y = 0.0;  ///< non-centrality, y >= 0
  ShapeParam alpha{1.0};
};

inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr std::size_t kSeriesTermCap = 1'000'000;

/// log of g_alpha(x, y) = e^{-y} sum_n g_{alpha+n}(x) y^n / n!.
///
/// Summation starts at the largest term and proceeds outward. Each side
/// stops once the term ratio is below one and the geometric bound on the
/// remaining tail is below tol/2 of the running sum, so the truncation
/// error is at most tol * value. Throws NumericalError past kSeriesTermCap.
double noncentral_gamma_log_pdf(double x, const NoncentralScalarParams& params,
                                double tol = kDefaultSeriesTol);
double noncentral_gamma_pdf(double x, const NoncentralScalarParams& params,
                            double tol = kDefaultSeriesTol);

/// sigma0^{-1} g_alpha(x / sigma0, delta / sigma0): the p = 1 non-central
/// gamma density with Lt (1 + sigma0 t)^{-alpha} exp(-t delta / (1 + sigma0 t)).
double scaled_noncentral_gamma_log_pdf(double x, double scale, double delta, ShapeParam alpha,
                                       double tol = kDefaultSeriesTol);
double scaled_noncentral_gamma_pdf(double x, double scale, double delta, ShapeParam alpha,
                                   double tol = kDefaultSeriesTol);

/// log Gamma_p(alpha) = log(pi^{p(p-1)/4} prod_{j=1..p} Gamma(alpha - (j-1)/2)).
/// Requires 2 alpha > p - 1.
double log_mv_gamma_fn(int p, ShapeParam alpha);

}  // namespace mvgamma
