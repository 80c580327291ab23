#include "mvgamma/linalg.hpp"

#include "mvgamma/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mvgamma {

namespace {

constexpr double kAsymmetryTolerance = 1e-8;
constexpr double kZMatrixTolerance = 1e-12;
constexpr double kRankThreshold = 1e-10;

double rel_error(double value, double reference) {
  const double scale = std::max(std::abs(reference), std::numeric_limits<double>::min());
  return std::abs(value - reference) / scale;
}

}  // namespace

CovMatrix::CovMatrix(const Matrix& entries) {
  require(entries.rows() > 0 && entries.rows() == entries.cols(),
          "covariance matrix must be square and non-empty");
  require(entries.allFinite(), "covariance matrix has non-finite entries");
  const double scale = entries.cwiseAbs().maxCoeff();
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  require(asym <= kAsymmetryTolerance * scale, "covariance matrix is not symmetric");
  entries_ = 0.5 * (entries + entries.transpose());
  llt_.compute(entries_);
  require(llt_.info() == Eigen::Success, "covariance matrix is not positive definite");
}

double CovMatrix::log_det() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Matrix CovMatrix::inverse() const {
  return llt_.solve(Matrix::Identity(dim(), dim()));
}

DiagScale::DiagScale(Vector t) : t_(std::move(t)) {
  require(t_.allFinite() && (t_.array() >= 0.0).all(), "T entries must be finite and >= 0");
}

DiagScale::DiagScale(std::initializer_list<double> t)
    : DiagScale(Vector(Eigen::Map<const Vector>(t.begin(), static_cast<Eigen::Index>(t.size())))) {}

double log_det_lu(const Matrix& m) {
  const Eigen::PartialPivLU<Matrix> lu(m);
  const Matrix& f = lu.matrixLU();
  double sum = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double d = f(i, i);
    if (d < 0) sign = -sign;
    sum += std::log(std::abs(d));
  }
  if (!(sign > 0)) throw NumericalError("log_det_lu: determinant is not positive");
  return sum;
}

double det_lu(const Matrix& m) { return Eigen::PartialPivLU<Matrix>(m).determinant(); }

Partition partition_blocks(const CovMatrix& sigma, Eigen::Index p1) {
  const Eigen::Index p = sigma.dim();
  require(p1 >= 1 && p1 <= p - 1, "partition requires 1 <= p1 <= p - 1");
  const Eigen::Index p2 = p - p1;
  const Matrix& s = sigma.matrix();
  Matrix s12 = s.topRightCorner(p1, p2);
  Matrix s21 = s12.transpose();
  CovMatrix s22(s.bottomRightCorner(p2, p2));
  Matrix s0 = s.topLeftCorner(p1, p1) - s12 * s22.solve(s21);
  std::optional<CovMatrix> schur;
  try {
    schur.emplace(s0);
  } catch (const PreconditionError&) {
    throw NumericalError("Schur complement is not positive definite (numerically singular Sigma)");
  }
  return Partition{p1, p2, CovMatrix(s.topLeftCorner(p1, p1)), std::move(s12), std::move(s21),
                   std::move(s22), std::move(*schur)};
}

FactorizationReport det_block_factorization(const CovMatrix& sigma, const DiagScale& t,
                                            Eigen::Index p1) {
  const Eigen::Index p = sigma.dim();
  require(t.size() == p, "T must have one entry per coordinate");
  const Partition part = partition_blocks(sigma, p1);
  const Eigen::Index p2 = part.p2;

  const Matrix t1 = t.head(p1).values().asDiagonal();
  const Matrix t2 = t.tail(p2).values().asDiagonal();
  const Matrix i1 = Matrix::Identity(p1, p1);
  const Matrix i2 = Matrix::Identity(p2, p2);
  const Matrix& s0 = part.schur.matrix();
  const Matrix& s22 = part.s22.matrix();
  const Matrix s22inv_s21 = part.s22.solve(part.s21);  // S22^{-1} S21

  FactorizationReport report;
  report.direct = det_lu(Matrix::Identity(p, p) + sigma.matrix() * t.values().asDiagonal());

  const Matrix k2 = i2 + s22 * t2;  // I2 + S22 T2
  const Matrix k1 = i1 + s0 * t1;   // I1 + S0 T1
  const Eigen::PartialPivLU<Matrix> k2_lu(k2);
  const Eigen::PartialPivLU<Matrix> k1_lu(k1);
  const double det_k2 = k2_lu.determinant();
  const double det_k1 = k1_lu.determinant();
  const Matrix upper_left = k1 + part.s12 * s22inv_s21 * t1;

  {
    Matrix block(p, p);
    block.topLeftCorner(p1, p1) = upper_left;
    block.topRightCorner(p1, p2) = part.s12 * t2;
    block.bottomLeftCorner(p2, p1) = part.s21 * t1;
    block.bottomRightCorner(p2, p2) = k2;
    report.chain.push_back({"block", det_lu(block), 0.0});
  }
  report.chain.push_back(
      {"schur_lower", det_k2 * det_lu(upper_left - part.s12 * t2 * k2_lu.solve(part.s21 * t1)), 0.0});
  {
    const Matrix middle = i2 - s22 * t2 * k2_lu.inverse();
    report.chain.push_back(
        {"factored_middle",
         det_k2 * det_lu(k1 + part.s12 * part.s22.solve(middle) * part.s21 * t1), 0.0});
  }
  {
    const Matrix s12_s22inv = part.s22.solve(part.s21).transpose();  // S12 S22^{-1}
    report.chain.push_back(
        {"resolvent", det_k2 * det_lu(k1 + s12_s22inv * k2_lu.solve(part.s21 * t1)), 0.0});
    const Matrix last = i1 + s12_s22inv * k2_lu.solve(part.s21 * t1) * k1_lu.inverse();
    report.chain.push_back({"split", det_k1 * det_k2 * det_lu(last), 0.0});
    // Same product with the inner determinant taken on the p2 side.
    const Matrix swapped =
        i2 + part.s21 * t1 * k1_lu.inverse() * s12_s22inv * k2_lu.inverse();
    report.chain.push_back({"split_swapped", det_k1 * det_k2 * det_lu(swapped), 0.0});
  }

  for (auto& term : report.chain) {
    term.rel_error = rel_error(term.value, report.direct);
    report.max_rel_error = std::max(report.max_rel_error, term.rel_error);
  }
  return report;
}

std::pair<double, double> sylvester_identity(const Matrix& a12, const Matrix& b21) {
  require(a12.rows() == b21.cols() && a12.cols() == b21.rows(),
          "sylvester_identity requires A12 (p1 x p2) and B21 (p2 x p1)");
  const double d1 = det_lu(Matrix::Identity(b21.rows(), b21.rows()) + b21 * a12);
  const double d2 = det_lu(Matrix::Identity(a12.rows(), a12.rows()) + a12 * b21);
  return {d1, d2};
}

Matrix SignatureMatrix::as_matrix() const {
  Vector d(static_cast<Eigen::Index>(signs.size()));
  for (std::size_t i = 0; i < signs.size(); ++i) d(static_cast<Eigen::Index>(i)) = signs[i];
  return d.asDiagonal();
}

std::optional<SignatureMatrix> find_signature_m_matrix(const CovMatrix& sigma) {
  const Eigen::Index p = sigma.dim();
  require(p <= 20, "signature search supports p <= 20");
  const Matrix prec = sigma.inverse();
  const double tol = kZMatrixTolerance * prec.diagonal().cwiseAbs().maxCoeff();
  // s_0 = +1 fixed: S and -S give the same S Sigma^{-1} S.
  const std::uint32_t classes = 1u << (p - 1);
  for (std::uint32_t mask = 0; mask < classes; ++mask) {
    auto sign = [&](Eigen::Index i) { return i == 0 ? 1 : ((mask >> (i - 1)) & 1u ? -1 : 1); };
    bool ok = true;
    for (Eigen::Index i = 0; i < p && ok; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j)
        if (sign(i) * sign(j) * prec(i, j) > tol) {
          ok = false;
          break;
        }
    if (ok) {
      SignatureMatrix s;
      for (Eigen::Index i = 0; i < p; ++i) s.signs.push_back(sign(i));
      return s;
    }
  }
  return std::nullopt;
}

FactorialForm::FactorialForm(Vector w, Matrix a, std::optional<double> lambda)
    : w_(std::move(w)), a_(std::move(a)), lambda_(lambda) {
  require(w_.size() > 0 && (w_.array() > 0.0).all() && w_.allFinite(),
          "factorial form requires w_j > 0");
  if (a_.cols() == 0) a_.resize(w_.size(), 0);
  require(a_.rows() == w_.size(), "factorial form: A must have p rows");
  require(a_.allFinite(), "factorial form: A has non-finite entries");
  b_ = w_.asDiagonal() * a_;
}

Matrix FactorialForm::reconstruct() const {
  Matrix s = a_ * a_.transpose();
  s.diagonal() += w_.array().square().inverse().matrix();
  return s;
}

double FactorialForm::reconstruction_error(const CovMatrix& sigma) const {
  require(sigma.dim() == dim(), "factorial form dimension mismatch");
  return (reconstruct() - sigma.matrix()).norm() / sigma.matrix().norm();
}

void FactorialForm::validate_against(const CovMatrix& sigma, double tol) const {
  require(reconstruction_error(sigma) <= tol,
          "factorial form does not reproduce Sigma (W^-2 + A A^T != Sigma)");
}

FactorialForm lambda_factorial_decomposition(const CovMatrix& sigma) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma.matrix());
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const Vector& values = eig.eigenvalues();  // ascending
  const double lambda = values(0);
  if (!(lambda > 0)) throw NumericalError("smallest eigenvalue is not positive");
  const double threshold = kRankThreshold * values(values.size() - 1);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) - lambda > threshold) kept.push_back(i);

  const Eigen::Index p = sigma.dim();
  Matrix a(p, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index i = kept[k];
    a.col(static_cast<Eigen::Index>(k)) = std::sqrt(values(i) - lambda) * eig.eigenvectors().col(i);
  }
  FactorialForm form(Vector::Constant(p, 1.0 / std::sqrt(lambda)), std::move(a), lambda);
  form.validate_against(sigma);
  return form;
}

}  // namespace mvgamma
