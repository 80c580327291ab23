#include "mvgamma/density.hpp"

#include "mvgamma/errors.hpp"
#include "mvgamma/wishart.hpp"

#include <boost/random/normal_distribution.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace mvgamma {

NoncentralityMatrix::NoncentralityMatrix(const Matrix& delta) {
  require(delta.rows() > 0 && delta.rows() == delta.cols(), "non-centrality matrix must be square");
  require(delta.allFinite(), "non-centrality matrix has non-finite entries");
  const double scale = delta.cwiseAbs().maxCoeff();
  require((delta - delta.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * scale,
          "non-centrality matrix must be symmetric");
  delta_ = 0.5 * (delta + delta.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(delta_, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  require(ev.minCoeff() >= -1e-10 * top, "non-centrality matrix must be positive semi-definite");
  rank_ = (ev.array() > 1e-10 * top).count();
}

EvalPoint::EvalPoint(Vector x) : x_(std::move(x)) {
  require(x_.size() > 0 && x_.allFinite() && (x_.array() > 0.0).all(),
          "evaluation point requires every x_j > 0");
}

EvalPoint::EvalPoint(std::initializer_list<double> x)
    : EvalPoint(Vector(Eigen::Map<const Vector>(x.begin(), static_cast<Eigen::Index>(x.size())))) {}

double log_det_i_plus_sigma_t(const DiagScale& t, const CovMatrix& sigma) {
  const Eigen::Index p = sigma.dim();
  require(t.size() == p, "T must have one entry per coordinate");
  const Vector root = t.values().array().sqrt();
  Matrix m = root.asDiagonal() * sigma.matrix() * root.asDiagonal();
  m.diagonal().array() += 1.0;
  const Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("I + T^1/2 Sigma T^1/2 factorization failed");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double mvgamma_lt(const DiagScale& t, ShapeParam alpha, const CovMatrix& sigma) {
  return std::exp(-alpha.alpha() * log_det_i_plus_sigma_t(t, sigma));
}

double chi2_lt(const DiagScale& t, double nu, const CovMatrix& sigma) {
  require(nu > 0.0, "chi-square Lt requires nu > 0");
  const Eigen::Index p = sigma.dim();
  require(t.size() == p, "T must have one entry per coordinate");
  const Matrix m = Matrix::Identity(p, p) + 2.0 * sigma.matrix() * t.values().asDiagonal();
  return std::exp(-0.5 * nu * log_det_lu(m));
}

double noncentral_mvgamma_lt(const DiagScale& t1, ShapeParam alpha, const CovMatrix& sigma0,
                             const NoncentralityMatrix& delta) {
  const Eigen::Index p1 = sigma0.dim();
  require(t1.size() == p1 && delta.dim() == p1, "T1, Sigma0 and Delta dimensions must agree");
  const Matrix k = Matrix::Identity(p1, p1) + sigma0.matrix() * t1.values().asDiagonal();
  const Eigen::PartialPivLU<Matrix> lu(k);
  const double trace = (t1.values().asDiagonal() * lu.solve(delta.matrix())).trace();
  return std::exp(-alpha.alpha() * log_det_lu(k) - trace);
}

namespace {

// prod_j w_j^2 g_alpha(w_j^2 x_j, y_j) in log space; a zero factor short-circuits.
double factorial_product(const EvalPoint& x, ShapeParam alpha, const Vector& w, const Vector& y) {
  double log_sum = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double w2 = w(j) * w(j);
    const double lf =
        std::log(w2) + noncentral_gamma_log_pdf(w2 * x[j], {std::max(y(j), 0.0), alpha}, kDefaultSeriesTol);
    if (lf == -std::numeric_limits<double>::infinity()) return 0.0;
    log_sum += lf;
  }
  return std::exp(log_sum);
}

}  // namespace

double factorial_pdf_term(const EvalPoint& x, ShapeParam alpha, const FactorialForm& form,
                          const Matrix& s) {
  require(x.size() == form.dim(), "evaluation point dimension must match the factorial form");
  if (form.m() == 0) return factorial_product(x, alpha, form.w(), Vector::Zero(form.dim()));
  require(s.rows() == form.m() && s.cols() == form.m(), "S must be m x m");
  const Vector y = 0.5 * (form.b() * s).cwiseProduct(form.b()).rowwise().sum();
  return factorial_product(x, alpha, form.w(), y);
}

MCEstimate factorial_pdf_mc(const EvalPoint& x, ShapeParam alpha, const FactorialForm& form,
                            std::uint64_t n, RngSeed seed, unsigned workers) {
  const Eigen::Index m = form.m();
  require(x.size() == form.dim(), "evaluation point dimension must match the factorial form");
  if (m == 0) return {factorial_pdf_term(x, alpha, form, Matrix()), 0.0, 0, seed};
  require(alpha.nu() > static_cast<double>(m - 1), "factorial density requires 2*alpha > m - 1");
  const Matrix& b = form.b();
  return mc_mean(n, seed, workers, [&](RandomEngine& engine) {
    // b^j S b^jT = |V^T b^jT|^2 with S = V V^T.
    const Matrix v = sample_bartlett_factor(m, alpha.nu(), engine);
    return factorial_product(x, alpha, form.w(), 0.5 * (b * v).rowwise().squaredNorm());
  });
}

SamplerPath resolve_sampler_path(ShapeParam alpha, Eigen::Index p, SamplerPath requested) {
  const double nu = alpha.nu();
  const bool wishart_ok = nu > static_cast<double>(p - 1);
  const bool integer_nu = std::abs(nu - std::round(nu)) <= 1e-12 && std::round(nu) >= 1.0;
  switch (requested) {
    case SamplerPath::Wishart:
      require(wishart_ok, "Wishart sampler path requires 2*alpha > p - 1");
      return SamplerPath::Wishart;
    case SamplerPath::GaussianSum:
      require(integer_nu, "Gaussian-sum sampler path requires integer 2*alpha");
      return SamplerPath::GaussianSum;
    case SamplerPath::Auto:
      break;
  }
  if (wishart_ok) return SamplerPath::Wishart;
  require(integer_nu, "no sampler path: requires 2*alpha > p - 1 or integer 2*alpha");
  return SamplerPath::GaussianSum;
}

Matrix sample_mvgamma(ShapeParam alpha, const CovMatrix& sigma, std::uint64_t n, RngSeed seed,
                      SamplerPath path, unsigned workers) {
  require(n >= 1, "sampling requires n >= 1");
  const Eigen::Index p = sigma.dim();
  const SamplerPath resolved = resolve_sampler_path(alpha, p, path);
  const Matrix l = sigma.cholesky_lower();
  const auto nu_int = static_cast<int>(std::lround(alpha.nu()));
  Matrix table(static_cast<Eigen::Index>(n), p);

  for_each_chunk(n, workers, [&](std::uint32_t chunk, std::uint64_t begin, std::uint64_t end) {
    RandomEngine engine(seed, chunk);
    boost::random::normal_distribution<double> normal;
    Vector z(p);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      if (resolved == SamplerPath::Wishart) {
        const Matrix lv = l * sample_bartlett_factor(p, alpha.nu(), engine);
        table.row(row) = 0.5 * lv.rowwise().squaredNorm().transpose();
      } else {
        Vector acc = Vector::Zero(p);
        for (int k = 0; k < nu_int; ++k) {
          for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(engine);
          acc += (l * z).cwiseAbs2();
        }
        table.row(row) = 0.5 * acc.transpose();
      }
    }
  });
  return table;
}

MCEstimate empirical_lt(const Matrix& samples, const DiagScale& t, RngSeed seed) {
  require(samples.rows() >= 2, "empirical Lt requires at least 2 sample rows");
  require(samples.cols() == t.size(), "T must have one entry per sample column");
  RunningStats stats;
  for (Eigen::Index i = 0; i < samples.rows(); ++i)
    stats.add(std::exp(-samples.row(i).dot(t.values())));
  return stats.estimate(seed);
}

}  // namespace mvgamma
