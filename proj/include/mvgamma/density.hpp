#pragma once

#include "mvgamma/linalg.hpp"
#include "mvgamma/monte_carlo.hpp"
#include "mvgamma/rng.hpp"
#include "mvgamma/scalar_gamma.hpp"

#include <cstdint>

namespace mvgamma {

/// Symmetric PSD p1 x p1 non-centrality matrix; eigenvalues must be
/// >= -1e-10 * largest eigenvalue.
class NoncentralityMatrix {
 public:
  explicit NoncentralityMatrix(const Matrix& delta);
  static NoncentralityMatrix zero(Eigen::Index p) { return NoncentralityMatrix(Matrix::Zero(p, p)); }

  const Matrix& matrix() const { return delta_; }
  Eigen::Index dim() const { return delta_.rows(); }
  Eigen::Index rank() const { return rank_; }

 private:
  Matrix delta_;
  Eigen::Index rank_ = 0;
};

/// Point of the open positive orthant.
class EvalPoint {
 public:
  explicit EvalPoint(Vector x);
  EvalPoint(std::initializer_list<double> x);

  const Vector& values() const { return x_; }
  Eigen::Index size() const { return x_.size(); }
  double operator[](Eigen::Index i) const { return x_(i); }

 private:
  Vector x_;
};

/// log |I_p + Sigma T|, through the symmetric form I + T^{1/2} Sigma T^{1/2}.
double log_det_i_plus_sigma_t(const DiagScale& t, const CovMatrix& sigma);

/// |I_p + Sigma T|^{-alpha}.
double mvgamma_lt(const DiagScale& t, ShapeParam alpha, const CovMatrix& sigma);

/// |I_p + 2 Sigma T|^{-nu/2}.
double chi2_lt(const DiagScale& t, double nu, const CovMatrix& sigma);

/// |I1 + S0 T1|^{-alpha} etr(-T1 (I1 + S0 T1)^{-1} Delta).
double noncentral_mvgamma_lt(const DiagScale& t1, ShapeParam alpha, const CovMatrix& sigma0,
                             const NoncentralityMatrix& delta);

/// prod_j w_j^2 g_alpha(w_j^2 x_j, b^j S b^jT / 2) for one Wishart matrix S,
/// accumulated in log space.
double factorial_pdf_term(const EvalPoint& x, ShapeParam alpha, const FactorialForm& form,
                          const Matrix& s);

/// Monte Carlo evaluation of the m-factorial density representation: the
/// mean of factorial_pdf_term over S ~ W_m(2 alpha, I_m). For m = 0 the
/// value is exact and std_error is zero.
MCEstimate factorial_pdf_mc(const EvalPoint& x, ShapeParam alpha, const FactorialForm& form,
                            std::uint64_t n, RngSeed seed, unsigned workers = 1);

enum class SamplerPath { Auto, Wishart, GaussianSum };

/// Resolves Auto: Wishart when 2 alpha > p - 1, else Gaussian sum when 2 alpha
/// is an integer; throws PreconditionError when neither applies.
SamplerPath resolve_sampler_path(ShapeParam alpha, Eigen::Index p, SamplerPath requested);

/// n x p table of Gamma_p(alpha, Sigma) draws; each row is diag(M)/2 with
/// M ~ W_p(2 alpha, Sigma), or (1/2) sum_{i<=2 alpha} z_i o z_i with z_i ~ N(0, Sigma).
Matrix sample_mvgamma(ShapeParam alpha, const CovMatrix& sigma, std::uint64_t n, RngSeed seed,
                      SamplerPath path = SamplerPath::Auto, unsigned workers = 1);

/// Mean and standard error of exp(-sum_j t_j x_j) over the table rows.
MCEstimate empirical_lt(const Matrix& samples, const DiagScale& t, RngSeed seed = {});

}  // namespace mvgamma
