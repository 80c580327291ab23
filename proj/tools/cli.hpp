#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mvgamma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;

/// Flat experiment description; every field is also a command-line flag.
struct ExperimentConfig {
  std::string command;  ///< identities | lt-check | theorem1 | density | sample | inequality | admissibility | probe

  // Sigma source: a matrix file, a seeded random SPD matrix, or equicorrelation.
  std::optional<std::string> sigma_path;
  std::optional<int> random_p;
  std::optional<double> rho;
  std::optional<int> p;

  double alpha = 1.0;
  std::optional<int> p1;
  std::uint64_t n = 100000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  unsigned workers = 1;
  std::string path = "auto";  ///< sampler path: auto | wishart | gaussian-sum

  std::vector<std::vector<double>> t_points;
  std::vector<std::vector<double>> x_points;
  int random_points = 10;  ///< generated T (or grid) points when none are given
  int instances = 100;     ///< identities: random T per partition
  int allowed_exceedances = 0;
  int nodes = 32;          ///< Gauss-Laguerre nodes per dimension

  // admissibility structure
  std::string structure = "general";  ///< general | m-factorial | m-matrix | partition
  int m = 0;
  int m0 = 0;
  int m12 = 0;
  int p2 = 0;

  std::string report_path = "-";  ///< "-" writes the JSON report to stdout
  std::optional<std::string> csv_path;
  bool timestamp = true;
};

/// Validates and dispatches. Returns 0 when every check passed, 1 when a
/// verification verdict failed, 2 on invalid input or I/O failure.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (command first, then flags; --config FILE supplies flat
/// key = value defaults) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvgamma::cli
