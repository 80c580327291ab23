#include "cli.hpp"

#include "mvgamma/density.hpp"
#include "mvgamma/errors.hpp"
#include "mvgamma/linalg.hpp"
#include "mvgamma/matrix_io.hpp"
#include "mvgamma/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/random/normal_distribution.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mvgamma::cli {

namespace {

using json = nlohmann::ordered_json;

// Stream reserved for generating random inputs (Sigma, T points, grids) so
// they never share draws with the Monte Carlo estimators.
constexpr std::uint64_t kInputStream = 0xC0FFEE;

constexpr double kDensityTol = 1e-4;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string canonical_points(const std::vector<std::vector<double>>& pts) {
  std::string out;
  for (const auto& pt : pts) {
    out += '[';
    for (double v : pt) out += io::format_double(v) + ',';
    out += ']';
  }
  return out;
}

json to_json(const MCEstimate& e) {
  return json{{"value", e.value}, {"std_error", e.std_error}, {"n", e.n},
              {"seed", e.seed.seed}, {"stream", e.seed.stream}};
}

json vec_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

class Reporter {
 public:
  explicit Reporter(const ExperimentConfig& cfg, std::string digest)
      : cfg_(cfg), digest_(std::move(digest)) {}

  /// Adds one check; returns its pass flag.
  bool add(const std::string& name, double estimate, double std_error, std::optional<double> oracle,
           bool pass, std::uint64_t n, json extra = json::object()) {
    json c;
    c["check"] = name;
    c["inputs_digest"] = hex64(fnv1a(digest_ + '|' + name + '|' + std::to_string(checks_.size())));
    c["estimate"] = estimate;
    c["std_error"] = std_error;
    c["oracle"] = oracle ? json(*oracle) : json(nullptr);
    c["verdict"] = pass ? "pass" : "fail";
    c["seed"] = cfg_.seed;
    c["n"] = n;
    for (auto& [k, v] : extra.items()) c[k] = v;
    checks_.push_back(std::move(c));
    if (!pass) failed_ = true;
    return pass;
  }

  void set(const std::string& key, json value) { summary_[key] = std::move(value); }
  bool failed() const { return failed_; }
  std::size_t size() const { return checks_.size(); }

  json finish() const {
    json r;
    r["command"] = cfg_.command;
    r["inputs_digest"] = digest_;
    r["seed"] = cfg_.seed;
    r["n"] = cfg_.n;
    r["alpha"] = cfg_.alpha;
    for (auto& [k, v] : summary_.items()) r[k] = v;
    r["checks"] = checks_;
    r["verdict"] = failed_ ? "fail" : "pass";
    if (cfg_.timestamp) {
      const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      r["timestamp"] = buf;
    }
    return r;
  }

 private:
  const ExperimentConfig& cfg_;
  std::string digest_;
  json checks_ = json::array();
  json summary_ = json::object();
  bool failed_ = false;
};

Matrix random_spd(int p, std::uint64_t seed) {
  RandomEngine engine(RngSeed{seed, kInputStream}, 1);
  boost::random::normal_distribution<double> normal;
  Matrix a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = normal(engine);
  Matrix s = a * a.transpose() / p;
  s.diagonal().array() += 0.5;
  return s;
}

std::optional<CovMatrix> load_sigma(const ExperimentConfig& cfg) {
  if (cfg.sigma_path) return CovMatrix(io::read_matrix_file(*cfg.sigma_path));
  if (cfg.random_p) {
    require(*cfg.random_p >= 1 && *cfg.random_p <= 64, "--random-p must lie in [1, 64]");
    return CovMatrix(random_spd(*cfg.random_p, cfg.seed));
  }
  if (cfg.rho) {
    require(cfg.p.has_value() && *cfg.p >= 1, "--rho requires --p");
    const int p = *cfg.p;
    Matrix s = Matrix::Constant(p, p, *cfg.rho);
    s.diagonal().setOnes();
    return CovMatrix(s);
  }
  return std::nullopt;
}

CovMatrix require_sigma(const std::optional<CovMatrix>& sigma) {
  require(sigma.has_value(), "a covariance matrix is required (--sigma FILE, --random-p P or --rho R --p P)");
  return *sigma;
}

std::vector<DiagScale> t_points(const ExperimentConfig& cfg, Eigen::Index p) {
  std::vector<DiagScale> out;
  for (const auto& t : cfg.t_points) {
    require(static_cast<Eigen::Index>(t.size()) == p, "every --t point needs p entries");
    out.emplace_back(to_vector(t));
  }
  if (out.empty()) {
    RandomEngine engine(RngSeed{cfg.seed, kInputStream}, 2);
    for (int k = 0; k < cfg.random_points; ++k) {
      Vector t(p);
      for (Eigen::Index j = 0; j < p; ++j) t(j) = 2.0 * engine.uniform_open();
      out.emplace_back(t);
    }
  }
  return out;
}

std::vector<EvalPoint> x_points(const ExperimentConfig& cfg, const CovMatrix& sigma) {
  const Eigen::Index p = sigma.dim();
  std::vector<EvalPoint> out;
  for (const auto& x : cfg.x_points) {
    require(static_cast<Eigen::Index>(x.size()) == p, "every --x point needs p entries");
    out.emplace_back(to_vector(x));
  }
  if (out.empty()) {
    RandomEngine engine(RngSeed{cfg.seed, kInputStream}, 3);
    for (int k = 0; k < cfg.random_points; ++k) {
      Vector x(p);
      for (Eigen::Index j = 0; j < p; ++j) x(j) = (0.05 + 2.95 * engine.uniform_open()) * cfg.alpha * sigma(j, j);
      out.emplace_back(x);
    }
  }
  return out;
}

SamplerPath parse_path(const std::string& s) {
  if (s == "auto") return SamplerPath::Auto;
  if (s == "wishart") return SamplerPath::Wishart;
  if (s == "gaussian-sum") return SamplerPath::GaussianSum;
  throw PreconditionError("--path must be auto, wishart or gaussian-sum");
}

std::string path_name(SamplerPath p) {
  return p == SamplerPath::Wishart ? "wishart" : p == SamplerPath::GaussianSum ? "gaussian-sum" : "auto";
}

double rel_err(double v, double ref) { return std::abs(v - ref) / std::max(std::abs(ref), 1e-300); }

bool within_sigma_rule(const MCEstimate& e, double oracle) {
  return std::abs(e.value - oracle) <= kSigmaRule * e.std_error;
}

// ---------------------------------------------------------------------------

void cmd_identities(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const Eigen::Index p = sigma.dim();
  require(p >= 2, "identities requires p >= 2");
  ExperimentConfig local = cfg;
  local.random_points = cfg.instances;
  const auto ts = t_points(local, p);
  const ShapeParam alpha(cfg.alpha);
  const Matrix prec = sigma.inverse();

  std::vector<Eigen::Index> splits;
  if (cfg.p1) {
    splits.push_back(*cfg.p1);
  } else {
    for (Eigen::Index k = 1; k < p; ++k) splits.push_back(k);
  }
  double chain = 0.0, closed = 0.0, schur = 0.0, sylvester = 0.0;
  std::uint64_t count = 0;
  for (Eigen::Index p1 : splits) {
    const Partition part = partition_blocks(sigma, p1);
    const Matrix top = prec.topLeftCorner(p1, p1);
    schur = std::max(schur, (part.schur.inverse() - top).norm() / top.norm());
    for (const auto& t : ts) {
      chain = std::max(chain, det_block_factorization(sigma, t, p1).max_rel_error);
      closed = std::max(closed, rel_err(rhs_lt_closed(t, alpha, part), mvgamma_lt(t, alpha, sigma)));
      const Matrix t1 = t.head(p1).values().asDiagonal();
      const Matrix t2 = t.tail(part.p2).values().asDiagonal();
      const Matrix k1 = Matrix::Identity(p1, p1) + part.schur.matrix() * t1;
      const Matrix k2 = Matrix::Identity(part.p2, part.p2) + part.s22.matrix() * t2;
      const Matrix a12 = part.s22.solve(part.s21).transpose() * k2.inverse();
      const Matrix b21 = part.s21 * t1 * k1.inverse();
      const auto [d1, d2] = sylvester_identity(a12, b21);
      sylvester = std::max(sylvester, rel_err(d1, d2));
      ++count;
    }
  }
  rep.add("det_block_chain", chain, 0.0, 0.0, chain <= cfg.tol, count);
  rep.add("rhs_lt_closed_vs_mvgamma_lt", closed, 0.0, 0.0, closed <= cfg.tol, count);
  rep.add("schur_block_inverse", schur, 0.0, 0.0, schur <= cfg.tol, splits.size());
  rep.add("sylvester_identity", sylvester, 0.0, 0.0, sylvester <= cfg.tol, count);
  rep.set("max_rel_error", std::max({chain, closed, schur, sylvester}));
}

void cmd_lt_check(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const ShapeParam alpha(cfg.alpha);
  const SamplerPath path = resolve_sampler_path(alpha, sigma.dim(), parse_path(cfg.path));
  const Matrix table = sample_mvgamma(alpha, sigma, cfg.n, {cfg.seed, 0}, path, cfg.workers);
  int exceed = 0;
  for (const auto& t : t_points(cfg, sigma.dim())) {
    const MCEstimate e = empirical_lt(table, t, {cfg.seed, 0});
    const double oracle = mvgamma_lt(t, alpha, sigma);
    const bool ok = within_sigma_rule(e, oracle);
    if (!ok) ++exceed;
    rep.add("empirical_lt", e.value, e.std_error, oracle, true, e.n, json{{"t", vec_json(t.values())}, {"within_3se", ok}});
  }
  rep.set("path", path_name(path));
  rep.set("exceedances", exceed);
  rep.add("exceedance_count", exceed, 0.0, cfg.allowed_exceedances, exceed <= cfg.allowed_exceedances,
          rep.size());
}

void cmd_theorem1(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const Eigen::Index p = sigma.dim();
  require(p >= 2, "theorem1 requires p >= 2");
  const ShapeParam alpha(cfg.alpha);
  const Eigen::Index p1 = cfg.p1 ? *cfg.p1 : admissibility_split(static_cast<int>(p)).p1;
  const Partition part = partition_blocks(sigma, p1);
  require(alpha.nu() > static_cast<double>(std::max(part.p1, part.p2) - 1),
          "theorem1 requires 2*alpha > max(p1 - 1, p2 - 1)");
  const auto ts = t_points(cfg, p);
  int exceed = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& t = ts[k];
    const double oracle = mvgamma_lt(t, alpha, sigma);
    const double closed = rhs_lt_closed(t, alpha, part);
    rep.add("rhs_lt_closed", closed, 0.0, oracle, rel_err(closed, oracle) <= cfg.tol, 0,
            json{{"t", vec_json(t.values())}});
    const MCEstimate mc = rhs_lt_mc(t, alpha, part, cfg.n, {cfg.seed, k}, cfg.workers);
    const bool ok = within_sigma_rule(mc, oracle);
    if (!ok) ++exceed;
    rep.add("rhs_lt_mc", mc.value, mc.std_error, oracle, true, mc.n,
            json{{"t", vec_json(t.values())}, {"within_3se", ok}});
  }
  rep.add("mc_exceedance_count", exceed, 0.0, cfg.allowed_exceedances,
          exceed <= cfg.allowed_exceedances, ts.size());
  if (p <= 3 && alpha.nu() > static_cast<double>(p - 2)) {
    for (const auto& t : ts) {
      const auto q = rhs_pdf_quadrature_check(alpha, sigma, t, cfg.nodes);
      rep.add("density_mass", q.mass, 0.0, 1.0, std::abs(q.mass - 1.0) <= kDensityTol, 0);
      rep.add("density_quadrature_lt", q.lt_quadrature, 0.0, q.lt_closed,
              std::abs(q.lt_quadrature - q.lt_closed) <= kDensityTol, 0, json{{"t", vec_json(t.values())}});
    }
  }
  rep.set("p1", p1);
  rep.set("p2", part.p2);
}

void cmd_density(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const ShapeParam alpha(cfg.alpha);
  const FactorialForm form = lambda_factorial_decomposition(sigma);
  require(alpha.nu() > static_cast<double>(form.m() - 1), "density requires 2*alpha > m - 1");
  const Eigen::Index p = sigma.dim();
  const bool has_oracle = (p == 2 || p == 3) && alpha.nu() > static_cast<double>(p - 2);
  const std::optional<Partition> part =
      has_oracle ? std::optional<Partition>(partition_blocks(sigma, 1)) : std::nullopt;
  const auto xs = x_points(cfg, sigma);

  Matrix table(static_cast<Eigen::Index>(xs.size()), p + 3);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const MCEstimate e = factorial_pdf_mc(xs[k], alpha, form, cfg.n, {cfg.seed, k}, cfg.workers);
    std::optional<double> oracle;
    if (part) oracle = theorem1_rhs_pdf(xs[k], alpha, *part);
    const bool ok = e.value >= 0.0 && (!oracle || std::abs(e.value - *oracle) <= kSigmaRule * e.std_error + 1e-12);
    rep.add("factorial_pdf_mc", e.value, e.std_error, oracle, ok, e.n, json{{"x", vec_json(xs[k].values())}});
    const auto row = static_cast<Eigen::Index>(k);
    table.row(row).head(p) = xs[k].values().transpose();
    table(row, p) = e.value;
    table(row, p + 1) = e.std_error;
    table(row, p + 2) = oracle.value_or(std::nan(""));
  }
  rep.set("m", form.m());
  rep.set("lambda", *form.lambda());
  if (cfg.csv_path) {
    std::ofstream out(*cfg.csv_path);
    if (!out) throw ParseError("cannot write '" + *cfg.csv_path + "'");
    for (Eigen::Index j = 0; j < p; ++j) out << 'x' << j + 1 << ',';
    out << "estimate,std_error,oracle\n";
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
      for (Eigen::Index j = 0; j < table.cols(); ++j) out << (j ? "," : "") << io::format_double(table(i, j));
      out << '\n';
    }
  }
}

void cmd_sample(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const ShapeParam alpha(cfg.alpha);
  const SamplerPath path = resolve_sampler_path(alpha, sigma.dim(), parse_path(cfg.path));
  const Matrix table = sample_mvgamma(alpha, sigma, cfg.n, {cfg.seed, 0}, path, cfg.workers);
  for (Eigen::Index j = 0; j < table.cols(); ++j) {
    RunningStats s;
    for (Eigen::Index i = 0; i < table.rows(); ++i) s.add(table(i, j));
    const double oracle = alpha.alpha() * sigma(j, j);
    rep.add("marginal_mean_x" + std::to_string(j + 1), s.mean(), s.std_error(), oracle,
            std::abs(s.mean() - oracle) <= kSigmaRule * s.std_error(), s.count());
  }
  rep.set("path", path_name(path));
  if (cfg.csv_path) io::write_sample_csv_file(*cfg.csv_path, table);
}

void cmd_inequality(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const ShapeParam alpha(cfg.alpha);
  const Eigen::Index p1 = cfg.p1.value_or(1);
  const Eigen::Index p = sigma.dim();
  std::vector<EvalPoint> xs;
  if (cfg.x_points.empty()) {
    xs.emplace_back(Vector::Ones(p));
  } else {
    xs = x_points(cfg, sigma);
  }
  const bool gaussian_oracle = p == 2 && std::abs(alpha.nu() - 1.0) < 1e-12;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto r = inequality_check(xs[k], alpha, sigma, p1, cfg.n, {cfg.seed, 3 * k}, cfg.workers);
    json extra{{"x", vec_json(xs[k].values())},
               {"lhs", to_json(r.lhs)},
               {"rhs", to_json(r.rhs)},
               {"paired_difference", to_json(r.paired_difference)},
               {"strict_claim", r.strict_claim},
               {"inequality_verdict", std::string(to_string(r.verdict))}};
    std::optional<double> oracle;
    if (gaussian_oracle) {
      const double g2 = half_chi2_cdf_2d(xs[k][0], xs[k][1], sigma);
      const double prod = half_chi2_cdf_1d(xs[k][0], sigma(0, 0)) * half_chi2_cdf_1d(xs[k][1], sigma(1, 1));
      oracle = g2 - prod;
      rep.add("joint_cdf_vs_gaussian_oracle", r.lhs.value, r.lhs.std_error, g2,
              within_sigma_rule(r.lhs, g2), r.lhs.n);
      rep.add("product_cdf_vs_gaussian_oracle", r.rhs.value, r.rhs.std_error, prod,
              within_sigma_rule(r.rhs, prod), r.rhs.n);
    }
    rep.add("cdf_difference", r.difference.value, r.difference.std_error, oracle,
            r.verdict != Verdict::Violated, r.difference.n, extra);
  }
  rep.set("p1", p1);
}

void cmd_admissibility(const ExperimentConfig& cfg, const std::optional<CovMatrix>& sigma,
                       Reporter& rep, std::ostream& err) {
  double threshold = 0.0;
  std::string basis;
  if (sigma) {
    const AdmissibilityResult r = best_known_admissibility(*sigma);
    threshold = r.threshold;
    basis = r.basis;
    rep.set("p", sigma->dim());
    if (r.m) rep.set("m", *r.m);
  } else {
    require(cfg.p.has_value(), "admissibility requires --p or a covariance matrix");
    AdmissibilityInfo info{*cfg.p, structure::General{}};
    if (cfg.structure == "m-factorial") {
      info.structure = structure::MFactorial{cfg.m};
    } else if (cfg.structure == "m-matrix") {
      info.structure = structure::MMatrixSignature{};
    } else if (cfg.structure == "partition") {
      info.structure = structure::RemarkPartition{cfg.m0, cfg.m12, cfg.p2};
    } else {
      require(cfg.structure == "general", "--structure must be general, m-factorial, m-matrix or partition");
    }
    threshold = admissibility_bound(info);
    basis = cfg.structure;
    rep.set("p", *cfg.p);
  }
  rep.set("threshold", threshold);
  rep.set("basis", basis);
  rep.set("integer_two_alpha_admissible", true);
  err << "admissibility threshold " << threshold << ": every 2*alpha > " << threshold
      << " and every integer 2*alpha is admissible (" << basis << ")\n";
  rep.add("admissibility_threshold", threshold, 0.0, std::nullopt, true, 0);
}

void cmd_probe(const ExperimentConfig& cfg, const CovMatrix& sigma, Reporter& rep) {
  const ShapeParam alpha(cfg.alpha);
  const FactorialForm form = lambda_factorial_decomposition(sigma);
  require(alpha.nu() > static_cast<double>(form.m() - 1), "probe requires 2*alpha > m - 1");
  const auto grid = x_points(cfg, sigma);
  const PositivityReport r = positivity_probe(alpha, form, grid, cfg.n, {cfg.seed, 0}, cfg.workers);
  rep.set("m", form.m());
  rep.set("grid_size", grid.size());
  json flagged = json::array();
  for (auto i : r.flagged) flagged.push_back(vec_json(grid[i].values()));
  rep.set("flagged", flagged);
  rep.add("min_estimate", r.min_estimate.value, r.min_estimate.std_error, std::nullopt,
          r.flagged.empty(), r.min_estimate.n);
}

std::string inputs_digest(const ExperimentConfig& cfg, const std::optional<CovMatrix>& sigma) {
  std::ostringstream s;
  s << "command=" << cfg.command << ";alpha=" << io::format_double(cfg.alpha)
    << ";p1=" << (cfg.p1 ? std::to_string(*cfg.p1) : "-") << ";n=" << cfg.n << ";seed=" << cfg.seed
    << ";tol=" << io::format_double(cfg.tol) << ";path=" << cfg.path
    << ";t=" << canonical_points(cfg.t_points) << ";x=" << canonical_points(cfg.x_points)
    << ";random_points=" << cfg.random_points << ";instances=" << cfg.instances
    << ";allowed=" << cfg.allowed_exceedances << ";nodes=" << cfg.nodes
    << ";structure=" << cfg.structure << ',' << cfg.m << ',' << cfg.m0 << ',' << cfg.m12 << ','
    << cfg.p2 << ";p=" << (cfg.p ? std::to_string(*cfg.p) : "-") << ";sigma=";
  if (sigma) io::write_matrix(s, sigma->matrix());
  return hex64(fnv1a(s.str()));
}

}  // namespace

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    require(cfg.n >= 2, "--n must be >= 2");
    require(cfg.workers >= 1, "--workers must be >= 1");
    require(cfg.tol > 0.0, "--tol must be > 0");
    require(cfg.nodes >= 2 && cfg.nodes <= 200, "--nodes must lie in [2, 200]");
    require(cfg.random_points >= 1, "--random-points must be >= 1");
    const std::optional<CovMatrix> sigma = load_sigma(cfg);
    Reporter rep(cfg, inputs_digest(cfg, sigma));

    if (cfg.command == "identities") {
      cmd_identities(cfg, require_sigma(sigma), rep);
    } else if (cfg.command == "lt-check") {
      cmd_lt_check(cfg, require_sigma(sigma), rep);
    } else if (cfg.command == "theorem1") {
      cmd_theorem1(cfg, require_sigma(sigma), rep);
    } else if (cfg.command == "density") {
      cmd_density(cfg, require_sigma(sigma), rep);
    } else if (cfg.command == "sample") {
      cmd_sample(cfg, require_sigma(sigma), rep);
    } else if (cfg.command == "inequality") {
      cmd_inequality(cfg, require_sigma(sigma), rep);
    } else if (cfg.command == "admissibility") {
      cmd_admissibility(cfg, sigma, rep, err);
    } else if (cfg.command == "probe") {
      cmd_probe(cfg, require_sigma(sigma), rep);
    } else {
      throw PreconditionError("unknown command '" + cfg.command + "'");
    }

    const std::string text = rep.finish().dump(2) + "\n";
    if (cfg.report_path == "-") {
      out << text;
    } else {
      std::ofstream f(cfg.report_path);
      if (!f) throw ParseError("cannot write report '" + cfg.report_path + "'");
      f << text;
    }
    err << cfg.command << ": " << (rep.failed() ? "FAIL" : "pass") << '\n';
    return rep.failed() ? kExitCheckFailed : kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
  }
  return kExitInvalidInput;
}

namespace {

std::vector<std::vector<double>> parse_points(const std::vector<std::string>& raw) {
  std::vector<std::vector<double>> out;
  for (const auto& item : raw) {
    std::vector<double> pt;
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        pt.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw PreconditionError("invalid point component '" + tok + "' in '" + item + "'");
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multivariate gamma distribution toolkit: densities, sampling, identities and checks"};
  app.set_config("--config", "", "flat key = value config file; command-line flags take precedence");
  app.allow_config_extras(false);

  ExperimentConfig cfg;
  std::vector<std::string> t_raw;
  std::vector<std::string> x_raw;
  std::string sigma_path;
  int random_p = 0;
  double rho = 0.0;
  int p = 0;
  int p1 = 0;
  bool no_timestamp = false;
  std::string csv;

  app.add_option("command", cfg.command,
                 "identities | lt-check | theorem1 | density | sample | inequality | admissibility | probe")
      ->required();
  auto* o_sigma = app.add_option("--sigma", sigma_path, "covariance matrix file");
  auto* o_random = app.add_option("--random-p", random_p, "use a seeded random SPD matrix of this size");
  auto* o_rho = app.add_option("--rho", rho, "equicorrelated Sigma with this correlation (needs --p)");
  auto* o_p = app.add_option("--p", p, "dimension (admissibility, --rho)");
  auto* o_p1 = app.add_option("--p1", p1, "size of the leading block");
  app.add_option("--alpha", cfg.alpha, "shape parameter alpha (nu = 2 alpha)");
  app.add_option("--n", cfg.n, "Monte Carlo sample count");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--tol", cfg.tol, "tolerance for deterministic identities");
  app.add_option("--workers", cfg.workers, "worker threads (results do not depend on it)");
  app.add_option("--path", cfg.path, "sampler path: auto | wishart | gaussian-sum");
  app.add_option("--t", t_raw, "Lt argument t1,...,tp (repeatable)");
  app.add_option("--x", x_raw, "evaluation point x1,...,xp (repeatable)");
  app.add_option("--random-points", cfg.random_points, "number of generated points when none given");
  app.add_option("--instances", cfg.instances, "identities: random T per partition");
  app.add_option("--allowed-exceedances", cfg.allowed_exceedances, "tolerated 3-sigma exceedances");
  app.add_option("--nodes", cfg.nodes, "Gauss-Laguerre nodes per dimension");
  app.add_option("--structure", cfg.structure, "general | m-factorial | m-matrix | partition");
  app.add_option("--m", cfg.m, "factor count for m-factorial");
  app.add_option("--m0", cfg.m0, "rank of A0 (partition structure)");
  app.add_option("--m12", cfg.m12, "rank of Sigma12 (partition structure)");
  app.add_option("--p2", cfg.p2, "second block size (partition structure)");
  app.add_option("--report", cfg.report_path, "JSON report path, '-' for stdout");
  auto* o_csv = app.add_option("--csv", csv, "CSV output (sample, density)");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  try {
    if (o_sigma->count()) cfg.sigma_path = sigma_path;
    if (o_random->count()) cfg.random_p = random_p;
    if (o_rho->count()) cfg.rho = rho;
    if (o_p->count()) cfg.p = p;
    if (o_p1->count()) cfg.p1 = p1;
    if (o_csv->count()) cfg.csv_path = csv;
    cfg.timestamp = !no_timestamp;
    cfg.t_points = parse_points(t_raw);
    cfg.x_points = parse_points(x_raw);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return run(cfg, out, err);
}

}  // namespace mvgamma::cli
