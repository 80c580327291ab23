#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mvgamma/density.hpp"
#include "mvgamma/errors.hpp"
#include "mvgamma/linalg.hpp"
#include "mvgamma/scalar_gamma.hpp"
#include "mvgamma/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace mvgamma;

namespace {

py::dict as_dict(const MCEstimate& e) {
  return py::dict("value"_a = e.value, "std_error"_a = e.std_error, "n"_a = e.n, "seed"_a = e.seed.seed,
                  "stream"_a = e.seed.stream);
}

SamplerPath parse_path(const std::string& s) {
  if (s == "auto") return SamplerPath::Auto;
  if (s == "wishart") return SamplerPath::Wishart;
  if (s == "gaussian-sum") return SamplerPath::GaussianSum;
  throw PreconditionError("path must be auto, wishart or gaussian-sum");
}

Structure parse_structure(const std::string& s, int m, int m0, int m12, int p2) {
  if (s == "general") return structure::General{};
  if (s == "m-factorial") return structure::MFactorial{m};
  if (s == "m-matrix") return structure::MMatrixSignature{};
  if (s == "partition") return structure::RemarkPartition{m0, m12, p2};
  throw PreconditionError("structure must be general, m-factorial, m-matrix or partition");
}

}  // namespace

PYBIND11_MODULE(_mvgamma, m) {
  m.doc() = "Multivariate gamma distributions: Laplace transforms, densities, sampling and checks";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("mvgamma_lt", [](const Vector& t, double alpha, const Matrix& sigma) {
    return mvgamma_lt(DiagScale(t), ShapeParam(alpha), CovMatrix(sigma));
  }, "t"_a, "alpha"_a, "sigma"_a, "|I + Sigma T|^(-alpha)");

  m.def("chi2_lt", [](const Vector& t, double nu, const Matrix& sigma) {
    return chi2_lt(DiagScale(t), nu, CovMatrix(sigma));
  }, "t"_a, "nu"_a, "sigma"_a);

  m.def("noncentral_gamma_pdf", [](double x, double y, double alpha, double tol) {
    return noncentral_gamma_pdf(x, {y, ShapeParam(alpha)}, tol);
  }, "x"_a, "y"_a, "alpha"_a, "tol"_a = kDefaultSeriesTol);

  m.def("noncentral_gamma_log_pdf", [](double x, double y, double alpha, double tol) {
    return noncentral_gamma_log_pdf(x, {y, ShapeParam(alpha)}, tol);
  }, "x"_a, "y"_a, "alpha"_a, "tol"_a = kDefaultSeriesTol);

  m.def("log_mv_gamma_fn", [](int p, double alpha) { return log_mv_gamma_fn(p, ShapeParam(alpha)); },
        "p"_a, "alpha"_a);

  m.def("det_block_factorization", [](const Matrix& sigma, const Vector& t, Eigen::Index p1) {
    const auto rep = det_block_factorization(CovMatrix(sigma), DiagScale(t), p1);
    py::list chain;
    for (const auto& c : rep.chain)
      chain.append(py::dict("name"_a = c.name, "value"_a = c.value, "rel_error"_a = c.rel_error));
    return py::dict("direct"_a = rep.direct, "chain"_a = chain, "max_rel_error"_a = rep.max_rel_error);
  }, "sigma"_a, "t"_a, "p1"_a);

  m.def("sylvester_identity", &sylvester_identity, "a12"_a, "b21"_a);

  m.def("rhs_lt_closed", [](const Vector& t, double alpha, const Matrix& sigma, Eigen::Index p1) {
    return rhs_lt_closed(DiagScale(t), ShapeParam(alpha), partition_blocks(CovMatrix(sigma), p1));
  }, "t"_a, "alpha"_a, "sigma"_a, "p1"_a);

  m.def("rhs_lt_mc", [](const Vector& t, double alpha, const Matrix& sigma, Eigen::Index p1, std::uint64_t n,
                        std::uint64_t seed, unsigned workers) {
    const Partition part = partition_blocks(CovMatrix(sigma), p1);
    MCEstimate e;
    {
      py::gil_scoped_release nogil;
      e = rhs_lt_mc(DiagScale(t), ShapeParam(alpha), part, n, {seed, 0}, workers);
    }
    return as_dict(e);
  }, "t"_a, "alpha"_a, "sigma"_a, "p1"_a, "n"_a, "seed"_a = 0, "workers"_a = 1);

  m.def("theorem1_rhs_pdf", [](const Vector& x, double alpha, const Matrix& sigma) {
    return theorem1_rhs_pdf(EvalPoint(x), ShapeParam(alpha), partition_blocks(CovMatrix(sigma), 1));
  }, "x"_a, "alpha"_a, "sigma"_a, "Mixture density for p = 2 or 3 with a leading 1x1 block");

  m.def("factorial_pdf_mc", [](const Vector& x, double alpha, const Matrix& sigma, std::uint64_t n,
                               std::uint64_t seed, unsigned workers) {
    const FactorialForm form = lambda_factorial_decomposition(CovMatrix(sigma));
    MCEstimate e;
    {
      py::gil_scoped_release nogil;
      e = factorial_pdf_mc(EvalPoint(x), ShapeParam(alpha), form, n, {seed, 0}, workers);
    }
    return as_dict(e);
  }, "x"_a, "alpha"_a, "sigma"_a, "n"_a, "seed"_a = 0, "workers"_a = 1);

  m.def("sample", [](double alpha, const Matrix& sigma, std::uint64_t n, std::uint64_t seed,
                     const std::string& path, unsigned workers) {
    const SamplerPath sp = parse_path(path);
    py::gil_scoped_release nogil;
    return Matrix(sample_mvgamma(ShapeParam(alpha), CovMatrix(sigma), n, {seed, 0}, sp, workers));
  }, "alpha"_a, "sigma"_a, "n"_a, "seed"_a = 0, "path"_a = "auto", "workers"_a = 1);

  m.def("empirical_lt", [](const Matrix& samples, const Vector& t) {
    return as_dict(empirical_lt(samples, DiagScale(t)));
  }, "samples"_a, "t"_a);

  m.def("admissibility_bound", [](int p, const std::string& s, int mm, int m0, int m12, int p2) {
    return admissibility_bound({p, parse_structure(s, mm, m0, m12, p2)});
  }, "p"_a, "structure"_a = "general", "m"_a = 0, "m0"_a = 0, "m12"_a = 0, "p2"_a = 0);

  m.def("best_known_admissibility", [](const Matrix& sigma) {
    const auto r = best_known_admissibility(CovMatrix(sigma));
    return py::dict("threshold"_a = r.threshold, "basis"_a = r.basis, "m"_a = r.m);
  }, "sigma"_a);

  m.def("inequality_check", [](const Vector& x, double alpha, const Matrix& sigma, Eigen::Index p1,
                               std::uint64_t n, std::uint64_t seed, unsigned workers) {
    std::optional<InequalityReport> r;
    {
      py::gil_scoped_release nogil;
      r = inequality_check(EvalPoint(x), ShapeParam(alpha), CovMatrix(sigma), p1, n, {seed, 0}, workers);
    }
    return py::dict("lhs"_a = as_dict(r->lhs), "rhs"_a = as_dict(r->rhs), "difference"_a = as_dict(r->difference),
                    "strict_claim"_a = r->strict_claim, "verdict"_a = std::string(to_string(r->verdict)));
  }, "x"_a, "alpha"_a, "sigma"_a, "p1"_a, "n"_a, "seed"_a = 0, "workers"_a = 1);

  m.def("half_chi2_cdf_2d", [](double x1, double x2, const Matrix& sigma) {
    return half_chi2_cdf_2d(x1, x2, CovMatrix(sigma));
  }, "x1"_a, "x2"_a, "sigma"_a);

  m.attr("__version__") = "0.1.0";
}
