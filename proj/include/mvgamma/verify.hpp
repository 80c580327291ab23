#pragma once

#include "mvgamma/density.hpp"
#include "mvgamma/linalg.hpp"
#include "mvgamma/monte_carlo.hpp"
#include "mvgamma/scalar_gamma.hpp"

#include <string>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace mvgamma {

// ---------------------------------------------------------------------------
// Laplace-transform side of the central/non-central relation.

/// |I1 + S0 T1|^{-alpha} |S21 T1 (I1 + S0 T1)^{-1} S12 S22^{-1} + I2 + S22 T2|^{-alpha}.
/// Equals |I_p + Sigma T|^{-alpha} for every partition.
double rhs_lt_closed(const DiagScale& t, ShapeParam alpha, const Partition& part);

/// Monte Carlo average over Y = M/2, M ~ W_p2(2 alpha, S22), of
/// |I1 + S0 T1|^{-alpha} etr(-T1 (I1 + S0 T1)^{-1} S12 S22^{-1} Y S22^{-1} S21) etr(-T2 Y).
/// Requires 2 alpha > max(p1 - 1, p2 - 1).
MCEstimate rhs_lt_mc(const DiagScale& t, ShapeParam alpha, const Partition& part,
                     std::uint64_t n, RngSeed seed, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Density side, p1 = 1 and p2 in {1, 2}.

/// Gamma_p(alpha, Sigma) density at x written as the mixture over
/// correlation matrices C of non-central Gamma_1 densities with
/// non-centrality S12 S22^{-1} X^{1/2} C X^{1/2} S22^{-1} S21. For p2 = 2 the
/// off-diagonal c of C is integrated against (1 - c^2)^{alpha - 3/2} by
/// adaptive Gauss-Gegenbauer quadrature.
double theorem1_rhs_pdf(const EvalPoint& x, ShapeParam alpha, const Partition& part,
                        double quad_tol = 1e-10);

struct DensityQuadratureCheck {
  double mass = 0.0;          ///< integral of the density over the orthant
  double lt_quadrature = 0.0; ///< integral of exp(-t.x) * density
  double lt_closed = 0.0;     ///< |I_p + Sigma T|^{-alpha}
};

/// Product Gauss-Laguerre integration of theorem1_rhs_pdf (weight x^{alpha-1}).
DensityQuadratureCheck rhs_pdf_quadrature_check(ShapeParam alpha, const CovMatrix& sigma,
                                                 const DiagScale& t, int nodes_per_dim = 32,
                                                 double quad_tol = 1e-10);

// ---------------------------------------------------------------------------
// Admissibility.

namespace structure {
struct General {};
struct MFactorial {
  int m = 0;
};
struct MMatrixSignature {};
/// Sigma0 = W0^{-2} + A0 A0^T with rank(A0) = m0, m12 = rank(S12), block size p2.
struct RemarkPartition {
  int m0 = 0;
  int m12 = 0;
  int p2 = 0;
};
}  // namespace structure

using Structure = std::variant<structure::General, structure::MFactorial,
                               structure::MMatrixSignature, structure::RemarkPartition>;

struct AdmissibilityInfo {
  int p = 1;
  Structure structure = structure::General{};
};

/// Threshold b such that every 2 alpha > b is known to be admissible (0 means
/// every alpha > 0). Integer 2 alpha is admissible regardless.
double admissibility_bound(const AdmissibilityInfo& info);

/// True when 2 alpha is a positive integer or exceeds admissibility_bound.
bool is_known_admissible(const AdmissibilityInfo& info, ShapeParam alpha);

/// Split used to reach the general threshold: p1 = floor((p + 1)/2).
struct SplitChoice {
  int p1 = 0;
  int p2 = 0;
  int threshold = 0;  ///< max(p1 - 1, p2 - 1)
};
SplitChoice admissibility_split(int p);

struct AdmissibilityResult {
  double threshold = 0.0;
  std::string basis;  ///< "general", "m_factorial", "m_matrix_signature"
  std::optional<int> m;
};

/// Smallest threshold among the general bound, the lambda-construction
/// factorial bound, and the signature/M-matrix criterion (p <= 20).
AdmissibilityResult best_known_admissibility(const CovMatrix& sigma);

// ---------------------------------------------------------------------------
// CDF inequality and positivity probe.

enum class Verdict { Consistent, Violated, Inconclusive };
std::string_view to_string(Verdict v);

/// 3-standard-error rule used by every stochastic check.
inline constexpr double kSigmaRule = 3.0;

struct InequalityReport {
  EvalPoint point;
  MCEstimate lhs;         ///< G_p(x) from the joint sample
  MCEstimate rhs;         ///< G_p1 * G_{p-p1} from independent block samples
  MCEstimate difference;  ///< lhs - rhs
  MCEstimate paired_difference;  ///< P(A and B) - P(A)P(B) from the joint sample alone
  bool strict_claim = false;     ///< rank(S12) > 0
  Verdict verdict = Verdict::Inconclusive;
};

/// Streams: joint sample uses seed, blocks use seed.stream + 1 and + 2.
InequalityReport inequality_check(const EvalPoint& x, ShapeParam alpha, const CovMatrix& sigma,
                                  Eigen::Index p1, std::uint64_t n, RngSeed seed,
                                  unsigned workers = 1);

/// P(X1 <= x1, X2 <= x2) for Gamma_2(1/2, Sigma), i.e. X = Z o Z / 2 with
/// Z ~ N(0, Sigma), by one-dimensional quadrature of the bivariate normal.
double half_chi2_cdf_2d(double x1, double x2, const CovMatrix& sigma);
/// P(X <= x) for Gamma_1(1/2, sigma) = erf(sqrt(x / sigma)).
double half_chi2_cdf_1d(double x, double sigma);

struct PositivityReport {
  std::vector<EvalPoint> grid;
  std::vector<MCEstimate> estimates;
  MCEstimate min_estimate;
  std::vector<std::size_t> flagged;  ///< estimate + 3 se < 0
};

/// Grid point i uses stream seed.stream + i.
PositivityReport positivity_probe(ShapeParam alpha, const FactorialForm& form,
                                  const std::vector<EvalPoint>& grid, std::uint64_t n,
                                  RngSeed seed, unsigned workers = 1);

}  // namespace mvgamma
