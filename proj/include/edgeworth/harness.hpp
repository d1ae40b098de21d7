#pragma once

#include "edgeworth/convex_set.hpp"
#include "edgeworth/distributions.hpp"
#include "edgeworth/expansion.hpp"
#include "edgeworth/weighted_sums.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeworth {

inline constexpr const char* kVersion = "1.0.0";

// Invalid configuration or incompatible options (CLI exit code 2).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values during aggregation (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ApproxKind { PlainGaussian, Edgeworth };

struct ApproximationMode {
  ApproxKind kind = ApproxKind::PlainGaussian;
  unsigned order = 2;
  SignConvention sign = SignConvention::SubstitutionPlus;
  ScaleConvention scale = ScaleConvention::Averaged;

  static ApproximationMode plain() { return {}; }
  static ApproximationMode edgeworth(unsigned order = 2, SignConvention sign = SignConvention::SubstitutionPlus,
                                     ScaleConvention scale = ScaleConvention::Averaged) {
    return {ApproxKind::Edgeworth, order, sign, scale};
  }

  // "plain" or "edgeworth:s=2:substitution-plus:averaged"
  std::string label() const;
  // Accepts "plain", "edgeworth", or an object
  // {"kind": "edgeworth", "order": 2, "sign": "plus", "scale": "averaged"}.
  static ApproximationMode from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Estimator {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  std::size_t samples = 0;

  static Estimator exact() { return {}; }
  static Estimator monte_carlo(std::size_t n) { return {Kind::MonteCarlo, n}; }
  std::string label() const;
};

// k = 1: (-inf, x] for 41 x in [-4, 4]. k >= 2: every orthant box anchored at
// each point of a 9-per-axis grid over [-4, 4]^k.
std::vector<ConvexSet> default_family(std::size_t k);

// Throws ConfigError when the estimator cannot serve the spec/family: exact
// needs a Gaussian spec, or a discrete spec with only boxes and n within the
// enumeration limits.
void check_estimator(const DistributionSpec& spec, std::size_t n, const std::vector<ConvexSet>& family,
                     const Estimator& estimator);

// max over the family of |P(sum theta_j X_j in B) - approx(B)|, one value per
// mode. Truth is computed once and shared by all modes. `seed` drives the
// Monte Carlo estimator and Monte Carlo approximation measures (non-box sets).
std::vector<double> deltas_for_theta(const DistributionSpec& spec, const ThetaVector& theta,
                                     const std::vector<ApproximationMode>& modes,
                                     const std::vector<ConvexSet>& family, const Estimator& estimator,
                                     std::uint64_t seed = 0, std::size_t approx_mc_samples = 100000);

double delta_for_theta(const DistributionSpec& spec, const ThetaVector& theta, const ApproximationMode& mode,
                       const std::vector<ConvexSet>& family, const Estimator& estimator, std::uint64_t seed = 0,
                       std::size_t approx_mc_samples = 100000);

struct ExperimentConfig {
  std::string spec_name = "rademacher";
  std::string spec_param;
  std::size_t k = 1;
  std::vector<std::size_t> n_grid;
  std::size_t theta_draws = 200;
  std::string family_text = "default";  // "default" or the joined set strings
  std::vector<ConvexSet> family;
  Estimator estimator;
  std::vector<ApproximationMode> modes;
  std::uint64_t seed = 0;
  std::size_t approx_mc_samples = 100000;

  DistributionSpec spec() const;
  // Throws ConfigError.
  void validate() const;

  // Keys: spec (name or {"name", "param"}), k, n_grid, theta_draws, family
  // ("default" or a list of set strings), estimator ("exact" or {"mc": N}),
  // modes, seed; optional approx_mc_samples.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SlopeFit {
  bool defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // sum of squared residuals
};

// Unweighted least squares of log(y) on log(x). Undefined if any y <= 0.
SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

// Linear-interpolation (type 7) quantile.
double quantile(std::vector<double> values, double q);

struct RateRow {
  std::size_t n = 0;
  std::string mode;
  double mean_delta = 0.0;
  double stderr_delta = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
};

struct RateReport {
  ExperimentConfig config;
  std::vector<RateRow> rows;                                  // n-major, modes in config order
  std::vector<std::pair<std::string, SlopeFit>> slopes;        // config mode order

  const RateRow& row(std::size_t n, const std::string& mode) const;
  const SlopeFit& slope(const std::string& mode) const;

  // Columns n,mode,mean_delta,stderr_delta,q50,q90; 17 significant digits.
  std::string to_csv() const;
  std::string to_json() const;
  // Writes report.json and report.csv into dir (created if needed).
  void write(const std::filesystem::path& dir) const;
};

// Deterministic for a fixed config: cells (n, draw) run in parallel with
// seeds derived from (seed, cell index) and are aggregated in cell order.
RateReport rate_experiment(const ExperimentConfig& cfg);

}  // namespace edgeworth
