#include "mvgamma/quadrature.hpp"

#include "mvgamma/errors.hpp"
#include "mvgamma/scalar_gamma.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace mvgamma {

QuadratureRule gauss_laguerre(int n, double a) {
  require(n >= 1, "Gauss-Laguerre rule requires n >= 1");
  require(a > -1.0, "Gauss-Laguerre rule requires a > -1");
  Vector diag(n);
  Vector sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + a + 1.0;
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k * (k + a));
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw NumericalError("Gauss-Laguerre eigenproblem failed");
  const double mu0 = std::exp(log_gamma(a + 1.0));
  QuadratureRule rule{eig.eigenvalues(), Vector(n)};
  for (int k = 0; k < n; ++k) rule.weights(k) = mu0 * eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
  return rule;
}

double orthant_integral(const std::function<double(const Vector&)>& f, const Vector& scale,
                        double a, int nodes_per_dim) {
  const auto p = scale.size();
  require(p >= 1 && (scale.array() > 0.0).all(), "orthant integral requires positive scales");
  const QuadratureRule rule = gauss_laguerre(nodes_per_dim, a);
  // log of the weight function u^a e^{-u} at each node
  Vector log_w(nodes_per_dim);
  for (int k = 0; k < nodes_per_dim; ++k) log_w(k) = a * std::log(rule.nodes(k)) - rule.nodes(k);

  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  Vector x(p);
  double total = 0.0;
  const double jacobian = scale.prod();
  while (true) {
    double weight = 1.0;
    double log_weight_fn = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const int k = idx[static_cast<std::size_t>(j)];
      x(j) = scale(j) * rule.nodes(k);
      weight *= rule.weights(k);
      log_weight_fn += log_w(k);
    }
    const double fx = f(x);
    if (fx != 0.0) total += weight * fx * std::exp(-log_weight_fn);
    Eigen::Index j = 0;
    while (j < p && ++idx[static_cast<std::size_t>(j)] == nodes_per_dim) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == p) break;
  }
  return total * jacobian;
}

QuadratureRule gauss_gegenbauer(int n, double beta) {
  require(n >= 1, "Gauss-Gegenbauer rule requires n >= 1");
  require(beta > -1.0, "Gauss-Gegenbauer rule requires beta > -1");
  // Jacobi matrix of the symmetric weight (1 - x^2)^beta, lambda = beta + 1/2.
  const double lambda = beta + 0.5;
  Vector diag = Vector::Zero(n);
  Vector sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k)
    sub(k - 1) = std::sqrt(k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0)));
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw NumericalError("Gauss-Gegenbauer eigenproblem failed");
  const double mu0 = std::exp(0.5 * std::log(M_PI) + log_gamma(beta + 1.0) - log_gamma(beta + 1.5));
  QuadratureRule rule{eig.eigenvalues(), Vector(n)};
  for (int k = 0; k < n; ++k) rule.weights(k) = mu0 * eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
  return rule;
}

double gegenbauer_integral(const std::function<double(double)>& f, double beta, double tol,
                           int max_nodes) {
  require(tol > 0.0, "tolerance must be positive");
  // rules are reused across calls; the key is (beta, n)
  static std::mutex mutex;
  static std::map<std::pair<double, int>, QuadratureRule> cache;
  auto rule_for = [&](int n) {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({beta, n});
    if (it == cache.end()) {
      if (cache.size() > 256) cache.clear();
      it = cache.emplace(std::make_pair(beta, n), gauss_gegenbauer(n, beta)).first;
    }
    return it->second;
  };
  auto apply = [&](const QuadratureRule& r) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < r.nodes.size(); ++k) s += r.weights(k) * f(r.nodes(k));
    return s;
  };
  double prev = apply(rule_for(16));
  for (int n = 32; n <= max_nodes; n *= 2) {
    const double cur = apply(rule_for(n));
    if (!std::isfinite(cur)) break;
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  throw NumericalError("Gauss-Gegenbauer quadrature did not converge");
}

namespace {

template <class F>
double integrate_checked(const F& f, double lo, double hi, double tol) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, lo, hi, tol, &error, &l1);
  if (!std::isfinite(value) || error > std::max(tol * std::abs(value), tol * l1))
    throw NumericalError("tanh-sinh quadrature did not reach the requested tolerance");
  return value;
}

}  // namespace

double tanh_sinh_integral(const std::function<double(double)>& f, double lo, double hi, double tol) {
  return integrate_checked([&](double x) { return f(x); }, lo, hi, tol);
}

}  // namespace mvgamma
