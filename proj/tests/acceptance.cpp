// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "oracles.hpp"

#include "mvgamma/density.hpp"
#include "mvgamma/linalg.hpp"
#include "mvgamma/scalar_gamma.hpp"
#include "mvgamma/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace mvgamma;

namespace {

constexpr double kDetTol = 1e-9;
constexpr double kClosedLtTol = 1e-9;
constexpr double kSylvesterTol = 1e-10;
constexpr double kNormTol = 1e-6;
constexpr double kBesselTol = 1e-10;
constexpr double kDensityTol = 1e-4;
constexpr unsigned kWorkers = 4;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<double> estimates;  // compared bitwise across worker counts
};

struct Instance {
  CovMatrix sigma;
  DiagScale t;
  ShapeParam alpha;
};

std::vector<Instance> random_instances(int count) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> shape(0.05, 6.0);
  std::vector<Instance> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const Eigen::Index p = 2 + i % 7;
    out.push_back({CovMatrix(oracle::random_spd(p, rng)), DiagScale(oracle::random_t(p, rng)), ShapeParam(shape(rng))});
  }
  return out;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void push(std::vector<double>& v, const MCEstimate& e) {
  v.push_back(e.value);
  v.push_back(e.std_error);
}

Outcome determinant_chain(const std::vector<Instance>& inst) {
  double worst = 0.0;
  int checks = 0;
  for (const auto& in : inst)
    for (Eigen::Index p1 = 1; p1 < in.sigma.dim(); ++p1) {
      const auto rep = det_block_factorization(in.sigma, in.t, p1);
      worst = std::max(worst, rep.max_rel_error);
      ++checks;
    }
  return {worst <= kDetTol, fmt("%d partitions, max rel error %.3e", checks, worst), {}};
}

Outcome closed_lt(const std::vector<Instance>& inst) {
  double worst = 0.0;
  for (const auto& in : inst) {
    const double ref = mvgamma_lt(in.t, in.alpha, in.sigma);
    for (Eigen::Index p1 = 1; p1 < in.sigma.dim(); ++p1)
      worst = std::max(worst, std::abs(rhs_lt_closed(in.t, in.alpha, partition_blocks(in.sigma, p1)) - ref) / ref);
  }
  return {worst <= kClosedLtTol, fmt("max rel error %.3e", worst), {}};
}

Outcome sylvester() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 6);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    const Eigen::Index r = dim(rng), c = dim(rng);
    const Matrix a12 = oracle::random_matrix(r, c, rng, -2.0, 2.0);
    const Matrix b21 = oracle::random_matrix(c, r, rng, -2.0, 2.0);
    const auto [det_ba, det_ab] = sylvester_identity(a12, b21);
    const double ref = static_cast<double>(oracle::det_ld(Matrix::Identity(r, r) + a12 * b21));
    const double scale = std::abs(ref);
    worst = std::max({worst, std::abs(det_ab - det_ba) / scale, std::abs(det_ab - ref) / scale});
  }
  return {worst <= kSylvesterTol, fmt("500 pairs, max rel error %.3e", worst), {}};
}

Outcome series_battery() {
  double worst_mass = 0.0;
  for (double a : {0.6, 1.0, 1.5, 4.0})
    for (double y : {0.0, 1.0, 10.0, 50.0}) {
      const NoncentralScalarParams par{y, ShapeParam(a)};
      const double mass = oracle::half_line([&](double x) { return x > 0 ? noncentral_gamma_pdf(x, par) : 0.0; });
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
  double worst_bessel = 0.0;
  for (double x : {0.05, 0.5, 2.0, 9.0, 40.0, 120.0})
    for (double y : {0.1, 1.0, 10.0, 50.0, 300.0}) {
      const double ref = oracle::noncentral_gamma_alpha1(x, y);
      if (ref < 1e-290) continue;
      worst_bessel = std::max(worst_bessel, std::abs(noncentral_gamma_pdf(x, {y, ShapeParam(1.0)}) - ref) / ref);
    }
  return {worst_mass <= kNormTol && worst_bessel <= kBesselTol,
          fmt("max |mass - 1| %.3e, max Bessel rel error %.3e", worst_mass, worst_bessel), {}};
}

Outcome duality(unsigned workers) {
  std::mt19937_64 rng(5);
  const CovMatrix sigma(oracle::random_spd(4, rng));
  std::vector<DiagScale> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(oracle::random_t(4, rng, 1.5));
  Outcome out;
  int exceed = 0;
  std::uint64_t stream = 0;
  for (auto [nu, path] : {std::pair{5.0, SamplerPath::Wishart}, std::pair{3.0, SamplerPath::GaussianSum}}) {
    const ShapeParam alpha = ShapeParam::from_dof(nu);
    const Matrix draws = sample_mvgamma(alpha, sigma, 100000, {505, stream++}, path, workers);
    for (const auto& t : pts) {
      const MCEstimate e = empirical_lt(draws, t);
      push(out.estimates, e);
      if (std::abs(e.value - mvgamma_lt(t, alpha, sigma)) > kSigmaRule * e.std_error) ++exceed;
    }
  }
  out.pass = exceed <= 1;
  out.detail = fmt("%d of 20 beyond 3 se", exceed);
  return out;
}

Outcome mixture_lt_mc(unsigned workers) {
  std::mt19937_64 rng(6);
  const CovMatrix sigma(oracle::random_spd(5, rng));
  const Partition part = partition_blocks(sigma, 3);
  const ShapeParam alpha = ShapeParam::from_dof(2.5);
  Outcome out;
  int exceed = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const DiagScale t(oracle::random_t(5, rng, 1.5));
    const MCEstimate e = rhs_lt_mc(t, alpha, part, 100000, {606, i}, workers);
    push(out.estimates, e);
    if (std::abs(e.value - mvgamma_lt(t, alpha, sigma)) > kSigmaRule * e.std_error) ++exceed;
  }
  out.pass = exceed <= 1;
  out.detail = fmt("%d of 10 beyond 3 se", exceed);
  return out;
}

Outcome mixture_density(unsigned workers, bool with_quadrature) {
  Outcome out;
  std::string detail;
  bool ok = true;
  Matrix m2(2, 2);
  m2 << 1.0, 0.5, 0.5, 1.3;
  const CovMatrix s2(m2);
  const ShapeParam a2(1.0);
  if (with_quadrature) {
    Matrix m3(3, 3);
    m3 << 1.0, 0.5, 0.3, 0.5, 1.2, 0.4, 0.3, 0.4, 0.9;
    const auto r2 = rhs_pdf_quadrature_check(a2, s2, DiagScale{0.3, 0.7}, 32);
    const auto r3 = rhs_pdf_quadrature_check(ShapeParam::from_dof(2.5), CovMatrix(m3), DiagScale{0.2, 0.4, 0.1}, 16);
    for (const auto* r : {&r2, &r3}) {
      ok = ok && std::abs(r->mass - 1.0) <= kDensityTol && std::abs(r->lt_quadrature - r->lt_closed) <= kDensityTol;
      detail += fmt("p=%d mass-1 %.2e lt err %.2e; ", r == &r2 ? 2 : 3, r->mass - 1.0, r->lt_quadrature - r->lt_closed);
    }
  }
  const FactorialForm form = lambda_factorial_decomposition(s2);
  const Partition part = partition_blocks(s2, 1);
  int exceed = 0;
  std::uint64_t stream = 0;
  for (auto [x1, x2] : {std::pair{0.2, 0.3}, {0.5, 1.5}, {1.0, 1.0}, {2.0, 0.7}, {3.0, 2.5}}) {
    const EvalPoint x{x1, x2};
    const MCEstimate e = factorial_pdf_mc(x, a2, form, 100000, {707, stream++}, workers);
    push(out.estimates, e);
    if (std::abs(e.value - theorem1_rhs_pdf(x, a2, part)) > kSigmaRule * e.std_error) ++exceed;
  }
  ok = ok && exceed == 0;
  out.pass = ok;
  out.detail = detail + fmt("p=2 factorial MC: %d of 5 beyond 3 se", exceed);
  return out;
}

Outcome admissibility() {
  using namespace structure;
  const double expected[] = {0, 0, 1, 1, 2, 2, 3, 3, 4, 4};
  bool ok = true;
  for (int p = 1; p <= 10; ++p) ok = ok && admissibility_bound({p, General{}}) == expected[p - 1];
  for (int p = 2; p <= 10; ++p) {
    ok = ok && admissibility_bound({p, MMatrixSignature{}}) == 0.0;
    for (int m = 0; m < p; ++m) ok = ok && admissibility_bound({p, MFactorial{m}}) == std::max(0, m - 1);
  }
  return {ok, "general 0,0,1,1,2,2,3,3,4,4; m-factorial m-1; M-matrix 0", {}};
}

Outcome inequality(unsigned workers) {
  Outcome out;
  const auto r3 = inequality_check(EvalPoint{1.0, 1.0, 1.0}, ShapeParam(0.5), CovMatrix(oracle::equicorrelation(3, 0.4)),
                                   1, 1000000, {909, 0}, workers);
  const CovMatrix s2(oracle::equicorrelation(2, 0.4));
  const auto r2 = inequality_check(EvalPoint{1.0, 1.0}, ShapeParam(0.5), s2, 1, 1000000, {909, 10}, workers);
  push(out.estimates, r3.difference);
  push(out.estimates, r2.difference);
  const double margin = r3.difference.value - kSigmaRule * r3.difference.std_error;
  const double exact2 = half_chi2_cdf_2d(1.0, 1.0, s2) - half_chi2_cdf_1d(1.0, 1.0) * half_chi2_cdf_1d(1.0, 1.0);
  const double z2 = std::abs(r2.difference.value - exact2) / r2.difference.std_error;
  out.pass = margin > 0.0 && z2 <= kSigmaRule;
  out.detail = fmt("p=3 diff - 3se = %.3e; p=2 diff off the oracle by %.2f se", margin, z2);
  return out;
}

bool report(int id, const char* name, const Outcome& o, double seconds, double limit) {
  const bool ok = o.pass && seconds < limit;
  std::printf("[%s] %2d %-28s %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), seconds,
              limit);
  std::fflush(stdout);
  return ok;
}

template <class F>
std::pair<Outcome, double> timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = f();
  return {std::move(o), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
  bool all = true;
  const auto inst = random_instances(1000);

  auto [c1, s1] = timed([&] { return determinant_chain(inst); });
  all &= report(1, "determinant chain", c1, s1, 5);
  auto [c2, s2] = timed([&] { return closed_lt(inst); });
  all &= report(2, "closed mixture Lt", c2, s2, 5);
  auto [c3, s3] = timed(sylvester);
  all &= report(3, "Sylvester identity", c3, s3, 1);
  auto [c4, s4] = timed(series_battery);
  all &= report(4, "non-central gamma series", c4, s4, 10);
  auto [c5, s5] = timed([] { return duality(kWorkers); });
  all &= report(5, "sampler/Lt duality", c5, s5, 30);
  auto [c6, s6] = timed([] { return mixture_lt_mc(kWorkers); });
  all &= report(6, "mixture Lt, Monte Carlo", c6, s6, 60);
  auto [c7, s7] = timed([] { return mixture_density(kWorkers, true); });
  all &= report(7, "mixture density", c7, s7, 120);
  auto [c8, s8] = timed(admissibility);
  all &= report(8, "admissibility table", c8, s8, 1);
  auto [c9, s9] = timed([] { return inequality(kWorkers); });
  all &= report(9, "CDF inequality", c9, s9, 60);

  auto [c10, s10] = timed([&] {
    int mismatched = 0;
    for (unsigned w : {1u, 7u}) {
      mismatched += !same_bits(duality(w).estimates, c5.estimates);
      mismatched += !same_bits(mixture_lt_mc(w).estimates, c6.estimates);
      mismatched += !same_bits(mixture_density(w, false).estimates, c7.estimates);
      mismatched += !same_bits(inequality(w).estimates, c9.estimates);
    }
    return Outcome{mismatched == 0, fmt("workers 1 and 7 vs %u: %d of 8 reruns differ", kWorkers, mismatched), {}};
  });
  all &= report(10, "worker-count reproducibility", c10, s10, 600);

  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
