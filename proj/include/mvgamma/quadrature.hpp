#pragma once

#include "mvgamma/linalg.hpp"

#include <functional>

namespace mvgamma {

/// Nodes and weights of a Gauss rule.
struct QuadratureRule {
  Vector nodes;
  Vector weights;
};

/// Generalized Gauss-Laguerre rule for the weight u^a e^{-u} on (0, inf),
/// a > -1, via the Golub-Welsch eigenproblem.
QuadratureRule gauss_laguerre(int n, double a);

/// Tensor-product integral of f over the positive orthant with coordinate j
/// scaled as x_j = scale_j u_j. The integrand is divided by the rule's
/// weight function, so f should behave like x_j^a e^{-x_j/scale_j}·smooth.
double orthant_integral(const std::function<double(const Vector&)>& f, const Vector& scale,
                        double a, int nodes_per_dim);

/// Gauss rule for the weight (1 - x^2)^beta on (-1, 1), beta > -1.
QuadratureRule gauss_gegenbauer(int n, double beta);

/// Integral of (1 - x^2)^beta f(x) over (-1, 1) for smooth f. The node count
/// doubles from 16 until successive rules agree to tol (relative); throws
/// NumericalError past max_nodes.
double gegenbauer_integral(const std::function<double(double)>& f, double beta, double tol,
                           int max_nodes = 1024);

/// Adaptive tanh-sinh integral on (lo, hi); tolerates integrable endpoint
/// singularities. Throws NumericalError when the estimated error exceeds
/// max(tol * |I|, tol * L1).
double tanh_sinh_integral(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

}  // namespace mvgamma
