#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mvgamma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric positive definite "associated" covariance matrix.
///
/// Construction symmetrizes the input as (S + S^T)/2 after rejecting
/// asymmetry beyond 1e-8 relative to the largest entry, then requires a
/// Cholesky factorization to succeed. Instances are immutable.
class CovMatrix {
 public:
  explicit CovMatrix(const Matrix& entries);

  static CovMatrix identity(Eigen::Index p) { return CovMatrix(Matrix::Identity(p, p)); }

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Vector diag() const { return entries_.diagonal(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  /// Lower triangular square root L with L L^T = Sigma.
  Matrix cholesky_lower() const { return llt_.matrixL(); }
  double log_det() const;
  Matrix inverse() const;
  /// Sigma^{-1} rhs via the stored factorization.
  Matrix solve(const Matrix& rhs) const { return llt_.solve(rhs); }

 private:
  Matrix entries_;
  Eigen::LLT<Matrix> llt_;
};

/// Diagonal of T = diag(t_1, ..., t_p), every entry nonnegative.
class DiagScale {
 public:
  explicit DiagScale(Vector t);
  DiagScale(std::initializer_list<double> t);
  static DiagScale zero(Eigen::Index p) { return DiagScale(Vector::Zero(p)); }

  Eigen::Index size() const { return t_.size(); }
  const Vector& values() const { return t_; }
  double operator[](Eigen::Index i) const { return t_(i); }
  DiagScale head(Eigen::Index n) const { return DiagScale(Vector(t_.head(n))); }
  DiagScale tail(Eigen::Index n) const { return DiagScale(Vector(t_.tail(n))); }

 private:
  Vector t_;
};

/// Two-block split of a covariance matrix with the Schur complement
/// Sigma0 = S11 - S12 S22^{-1} S21.
struct Partition {
  Eigen::Index p1 = 0;
  Eigen::Index p2 = 0;
  CovMatrix s11;
  Matrix s12;
  Matrix s21;
  CovMatrix s22;
  CovMatrix schur;

  Eigen::Index dim() const { return p1 + p2; }
};

Partition partition_blocks(const CovMatrix& sigma, Eigen::Index p1);

struct ChainTerm {
  std::string name;
  double value = 0.0;
  double rel_error = 0.0;
};

struct FactorizationReport {
  double direct = 0.0;              ///< |I_p + Sigma T|
  std::vector<ChainTerm> chain;     ///< every factored form, in order
  double max_rel_error = 0.0;
};

/// Evaluates |I_p + Sigma T| directly and through each step of the block
/// (Schur complement) factorization, ending with
/// |I1 + S0 T1| |I2 + S22 T2| |I1 + S12 S22^{-1} (I2 + S22 T2)^{-1} S21 T1 (I1 + S0 T1)^{-1}|.
FactorizationReport det_block_factorization(const CovMatrix& sigma, const DiagScale& t,
                                            Eigen::Index p1);

/// Returns (|I2 + B21 A12|, |I1 + A12 B21|).
std::pair<double, double> sylvester_identity(const Matrix& a12, const Matrix& b21);

struct SignatureMatrix {
  std::vector<int> signs;
  Matrix as_matrix() const;
};

/// Exhaustive search for S with S Sigma^{-1} S a (symmetric) M-matrix. For
/// SPD Sigma^{-1} this reduces to nonpositive off-diagonals. p <= 20.
std::optional<SignatureMatrix> find_signature_m_matrix(const CovMatrix& sigma);

/// Sigma = W^{-2} + A A^T with diagonal W > 0 and a real p x m factor A.
class FactorialForm {
 public:
  /// Validates w > 0 and matching row counts; does not check against a Sigma.
  FactorialForm(Vector w, Matrix a, std::optional<double> lambda = std::nullopt);

  const Vector& w() const { return w_; }
  const Matrix& a() const { return a_; }
  /// B = W A; row j is b^j.
  const Matrix& b() const { return b_; }
  Eigen::Index m() const { return a_.cols(); }
  Eigen::Index dim() const { return w_.size(); }
  std::optional<double> lambda() const { return lambda_; }

  Matrix reconstruct() const;
  /// Frobenius relative error of the reconstruction against sigma.
  double reconstruction_error(const CovMatrix& sigma) const;
  /// Throws PreconditionError unless reconstruction_error <= tol.
  void validate_against(const CovMatrix& sigma, double tol = 1e-9) const;

 private:
  Vector w_;
  Matrix a_;
  Matrix b_;
  std::optional<double> lambda_;
};

/// W^{-2} = lambda I with lambda the smallest eigenvalue of Sigma; A spans
/// the eigenvectors of Sigma - lambda I above a 1e-10 relative rank threshold.
FactorialForm lambda_factorial_decomposition(const CovMatrix& sigma);

/// log |M| of a general square matrix with positive determinant via LU.
double log_det_lu(const Matrix& m);
/// |M| of a general square matrix via LU.
double det_lu(const Matrix& m);

}  // namespace mvgamma
