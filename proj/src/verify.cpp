#include "mvgamma/verify.hpp"

#include "mvgamma/errors.hpp"
#include "mvgamma/quadrature.hpp"
#include "mvgamma/wishart.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mvgamma {

double rhs_lt_closed(const DiagScale& t, ShapeParam alpha, const Partition& part) {
  require(t.size() == part.dim(), "T must have one entry per coordinate");
  const Eigen::Index p1 = part.p1;
  const Eigen::Index p2 = part.p2;
  const Matrix t1 = t.head(p1).values().asDiagonal();
  const Matrix t2 = t.tail(p2).values().asDiagonal();
  const Matrix k1 = Matrix::Identity(p1, p1) + part.schur.matrix() * t1;
  const Eigen::PartialPivLU<Matrix> k1_lu(k1);
  const Matrix s12_s22inv = part.s22.solve(part.s21).transpose();
  const Matrix inner = part.s21 * t1 * k1_lu.solve(s12_s22inv) + Matrix::Identity(p2, p2) +
                       part.s22.matrix() * t2;
  return std::exp(-alpha.alpha() * (log_det_lu(k1) + log_det_lu(inner)));
}

MCEstimate rhs_lt_mc(const DiagScale& t, ShapeParam alpha, const Partition& part,
                     std::uint64_t n, RngSeed seed, unsigned workers) {
  require(t.size() == part.dim(), "T must have one entry per coordinate");
  const Eigen::Index p1 = part.p1;
  const Eigen::Index p2 = part.p2;
  require(alpha.nu() > static_cast<double>(std::max(p1, p2) - 1),
          "requires 2*alpha > max(p1 - 1, p2 - 1)");
  const Matrix t1 = t.head(p1).values().asDiagonal();
  const Matrix k1 = Matrix::Identity(p1, p1) + part.schur.matrix() * t1;
  const double prefactor = std::exp(-alpha.alpha() * log_det_lu(k1));
  // etr(-T1 K1^{-1} S12 S22^{-1} Y S22^{-1} S21) etr(-T2 Y) = etr(-H Y) with
  // H = S22^{-1} S21 T1 K1^{-1} S12 S22^{-1} + T2.
  const Matrix s22inv_s21 = part.s22.solve(part.s21);
  Matrix h = s22inv_s21 * t1 * Eigen::PartialPivLU<Matrix>(k1).solve(s22inv_s21.transpose());
  h.diagonal() += t.tail(p2).values();
  const Matrix l = part.s22.cholesky_lower();
  return mc_mean(n, seed, workers, [&](RandomEngine& engine) {
    const Matrix lv = l * sample_bartlett_factor(p2, alpha.nu(), engine);
    const double trace_hy = 0.5 * (h * lv * lv.transpose()).trace();
    return prefactor * std::exp(-trace_hy);
  });
}

double theorem1_rhs_pdf(const EvalPoint& x, ShapeParam alpha, const Partition& part,
                        double quad_tol) {
  require(part.p1 == 1, "density-domain evaluation supports p1 = 1 only");
  require(part.p2 == 1 || part.p2 == 2, "density-domain evaluation supports p2 in {1, 2}");
  require(x.size() == part.dim(), "evaluation point dimension must match the partition");
  require(alpha.nu() > static_cast<double>(part.p2 - 1), "requires 2*alpha > max(p1 - 1, p2 - 1)");
  const double a = alpha.alpha();
  const Eigen::Index p2 = part.p2;
  const double sigma0 = part.schur(0, 0);
  const double x1 = x[0];

  const Vector x2 = x.values().tail(p2);
  const Vector root = x2.array().sqrt();
  // u = X^{1/2} S22^{-1} S21, so Delta(C) = u^T C u; Q = X^{1/2} S22^{-1} X^{1/2}.
  const Vector u = root.asDiagonal() * part.s22.solve(part.s21);
  const Matrix q = root.asDiagonal() * part.s22.inverse() * root.asDiagonal();

  const double log_prefactor = -log_mv_gamma_fn(static_cast<int>(p2), alpha) -
                               a * part.s22.log_det() + (a - 1.0) * x2.array().log().sum();

  auto log_g = [&](double delta) {
    return scaled_noncentral_gamma_log_pdf(x1, sigma0, std::max(delta, 0.0), alpha);
  };

  if (p2 == 1) return std::exp(log_prefactor + log_g(u(0) * u(0)) - q(0, 0));

  // C = [[1, c], [c, 1]], |C| = 1 - c^2, dC = dc on (-1, 1).
  const double diag_delta = u(0) * u(0) + u(1) * u(1);
  const double cross_delta = 2.0 * u(0) * u(1);
  const double diag_trace = q(0, 0) + q(1, 1);
  const double cross_trace = 2.0 * q(0, 1);
  auto log_smooth = [&](double c) { return log_g(diag_delta + c * cross_delta) - c * cross_trace; };
  const double shift = std::max({log_smooth(-1.0), log_smooth(0.0), log_smooth(1.0)});

  const double integral = gegenbauer_integral(
      [&](double c) { return std::exp(log_smooth(c) - shift); }, a - 1.5, quad_tol);
  if (integral <= 0.0) return 0.0;
  return std::exp(log_prefactor + shift - diag_trace + std::log(integral));
}

DensityQuadratureCheck rhs_pdf_quadrature_check(ShapeParam alpha, const CovMatrix& sigma,
                                                 const DiagScale& t, int nodes_per_dim,
                                                 double quad_tol) {
  const Eigen::Index p = sigma.dim();
  require(p == 2 || p == 3, "density quadrature check supports p in {2, 3}");
  require(t.size() == p, "T must have one entry per coordinate");
  const Partition part = partition_blocks(sigma, 1);
  auto density = [&](const Vector& x) { return theorem1_rhs_pdf(EvalPoint(x), alpha, part, quad_tol); };
  const Vector scale = sigma.diag();
  const double a = alpha.alpha() - 1.0;

  DensityQuadratureCheck out;
  out.mass = orthant_integral(density, scale, a, nodes_per_dim);
  const Vector lt_scale = scale.array() / (1.0 + scale.array() * t.values().array());
  out.lt_quadrature = orthant_integral(
      [&](const Vector& x) { return std::exp(-x.dot(t.values())) * density(x); }, lt_scale, a,
      nodes_per_dim);
  out.lt_closed = mvgamma_lt(t, alpha, sigma);
  return out;
}

double admissibility_bound(const AdmissibilityInfo& info) {
  const int p = info.p;
  require(p >= 1, "admissibility requires p >= 1");
  return std::visit(
      [p](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, structure::General>) {
          return std::floor((p - 1) / 2.0);
        } else if constexpr (std::is_same_v<S, structure::MFactorial>) {
          require(s.m >= 0 && s.m <= p - 1, "m-factorial structure requires 0 <= m <= p - 1");
          return std::max(s.m - 1, 0);
        } else if constexpr (std::is_same_v<S, structure::MMatrixSignature>) {
          return 0.0;
        } else {
          const int p1 = p - s.p2;
          require(s.p2 >= 1 && p1 >= 1, "partition structure requires 1 <= p2 <= p - 1");
          require(s.m0 >= 0 && s.m0 <= p1, "partition structure requires 0 <= m0 <= p1");
          require(s.m12 >= 0 && s.m12 <= std::min(p1, s.p2),
                  "partition structure requires 0 <= m12 <= min(p1, p2)");
          return std::max({s.m0 + s.m12 - 1, s.p2 - 1, 0});
        }
      },
      info.structure);
}

bool is_known_admissible(const AdmissibilityInfo& info, ShapeParam alpha) {
  const double nu = alpha.nu();
  if (std::round(nu) >= 1.0 && std::abs(nu - std::round(nu)) <= 1e-12) return true;
  return nu > admissibility_bound(info);
}

SplitChoice admissibility_split(int p) {
  require(p >= 2, "a two-block split requires p >= 2");
  SplitChoice s;
  s.p1 = (p + 1) / 2;
  s.p2 = p - s.p1;
  s.threshold = std::max(s.p1 - 1, s.p2 - 1);
  return s;
}

AdmissibilityResult best_known_admissibility(const CovMatrix& sigma) {
  const int p = static_cast<int>(sigma.dim());
  if (p <= 20 && find_signature_m_matrix(sigma)) return {0.0, "m_matrix_signature", std::nullopt};
  const AdmissibilityResult general{admissibility_bound({p, structure::General{}}), "general",
                                    std::nullopt};
  const int m = static_cast<int>(lambda_factorial_decomposition(sigma).m());
  const double factorial = admissibility_bound({p, structure::MFactorial{m}});
  if (factorial < general.threshold) return {factorial, "m_factorial", m};
  return general;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

MCEstimate indicator_mean(const Matrix& samples, const Vector& x, RngSeed seed) {
  RunningStats stats;
  for (Eigen::Index i = 0; i < samples.rows(); ++i)
    stats.add((samples.row(i).transpose().array() <= x.array()).all() ? 1.0 : 0.0);
  return stats.estimate(seed);
}

}  // namespace

InequalityReport inequality_check(const EvalPoint& x, ShapeParam alpha, const CovMatrix& sigma,
                                  Eigen::Index p1, std::uint64_t n, RngSeed seed,
                                  unsigned workers) {
  const Eigen::Index p = sigma.dim();
  require(x.size() == p, "evaluation point dimension must match Sigma");
  require(n >= 2, "inequality check requires n >= 2");
  const Partition part = partition_blocks(sigma, p1);
  resolve_sampler_path(alpha, p, SamplerPath::Auto);
  const Vector& xv = x.values();

  const Matrix joint = sample_mvgamma(alpha, sigma, n, seed, SamplerPath::Auto, workers);
  const RngSeed seed1{seed.seed, seed.stream + 1};
  const RngSeed seed2{seed.seed, seed.stream + 2};
  const Matrix block1 = sample_mvgamma(alpha, part.s11, n, seed1, SamplerPath::Auto, workers);
  const Matrix block2 = sample_mvgamma(alpha, part.s22, n, seed2, SamplerPath::Auto, workers);

  const MCEstimate lhs = indicator_mean(joint, xv, seed);
  const MCEstimate g1 = indicator_mean(block1, xv.head(p1), seed1);
  const MCEstimate g2 = indicator_mean(block2, xv.tail(p - p1), seed2);

  const double prod = g1.value * g2.value;
  const double prod_var = g2.value * g2.value * g1.std_error * g1.std_error +
                          g1.value * g1.value * g2.std_error * g2.std_error +
                          g1.std_error * g1.std_error * g2.std_error * g2.std_error;
  const MCEstimate rhs{prod, std::sqrt(prod_var), n, seed};
  const MCEstimate diff{lhs.value - prod,
                        std::sqrt(lhs.std_error * lhs.std_error + prod_var), n, seed};

  // Paired: influence function of P(AB) - P(A)P(B) on the joint sample.
  const auto rows = joint.rows();
  Vector in_a(rows);
  Vector in_b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    in_a(i) = (joint.row(i).head(p1).transpose().array() <= xv.head(p1).array()).all() ? 1.0 : 0.0;
    in_b(i) = (joint.row(i).tail(p - p1).transpose().array() <= xv.tail(p - p1).array()).all() ? 1.0 : 0.0;
  }
  const double mean_a = in_a.mean();
  const double mean_b = in_b.mean();
  RunningStats influence;
  for (Eigen::Index i = 0; i < rows; ++i)
    influence.add(in_a(i) * in_b(i) - mean_b * in_a(i) - mean_a * in_b(i));
  const MCEstimate paired{lhs.value - mean_a * mean_b, influence.std_error(), n, seed};

  const Eigen::Index rank12 = Eigen::FullPivLU<Matrix>(part.s12).rank();
  const bool strict = rank12 > 0;
  Verdict verdict;
  const double band = kSigmaRule * diff.std_error;
  if (strict) {
    verdict = diff.value - band > 0.0   ? Verdict::Consistent
              : diff.value + band < 0.0 ? Verdict::Violated
                                        : Verdict::Inconclusive;
  } else {
    verdict = std::abs(diff.value) <= band ? Verdict::Consistent : Verdict::Violated;
  }
  return InequalityReport{x, lhs, rhs, diff, paired, strict, verdict};
}

double half_chi2_cdf_1d(double x, double sigma) {
  require(x > 0.0 && sigma > 0.0, "half chi-square CDF requires x > 0 and sigma > 0");
  return std::erf(std::sqrt(x / sigma));
}

double half_chi2_cdf_2d(double x1, double x2, const CovMatrix& sigma) {
  require(sigma.dim() == 2, "bivariate CDF requires a 2 x 2 Sigma");
  require(x1 > 0.0 && x2 > 0.0, "bivariate CDF requires x > 0");
  const double s1 = std::sqrt(sigma(0, 0));
  const double s2 = std::sqrt(sigma(1, 1));
  const double rho = sigma(0, 1) / (s1 * s2);
  const double r = std::sqrt(1.0 - rho * rho);
  const double b1 = std::sqrt(2.0 * x1) / s1;
  const double b2 = std::sqrt(2.0 * x2) / s2;
  const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return tanh_sinh_integral(
      [&](double u) {
        return inv_sqrt_2pi * std::exp(-0.5 * u * u) *
               (normal_cdf((b2 - rho * u) / r) - normal_cdf((-b2 - rho * u) / r));
      },
      -b1, b1, 1e-13);
}

PositivityReport positivity_probe(ShapeParam alpha, const FactorialForm& form,
                                  const std::vector<EvalPoint>& grid, std::uint64_t n,
                                  RngSeed seed, unsigned workers) {
  require(!grid.empty(), "positivity probe requires a non-empty grid");
  require(alpha.nu() > static_cast<double>(form.m() - 1), "factorial density requires 2*alpha > m - 1");
  PositivityReport report{grid, {}, {}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const MCEstimate e =
        factorial_pdf_mc(grid[i], alpha, form, n, RngSeed{seed.seed, seed.stream + i}, workers);
    if (report.estimates.empty() || e.value < report.min_estimate.value) report.min_estimate = e;
    if (e.value + kSigmaRule * e.std_error < 0.0) report.flagged.push_back(i);
    report.estimates.push_back(e);
  }
  return report;
}

}  // namespace mvgamma
