#include "edgeworth/harness.hpp"

#include "edgeworth/cumulants.hpp"
#include "edgeworth/measures.hpp"
#include "edgeworth/moments.hpp"
#include "edgeworth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace edgeworth {

using nlohmann::json;

std::string ApproximationMode::label() const {
  if (kind == ApproxKind::PlainGaussian) return "plain";
  return "edgeworth:s=" + std::to_string(order) + ":" + to_string(sign) + ":" + to_string(scale);
}

ApproximationMode ApproximationMode::from_json(const json& j) {
  try {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "plain" || s == "plain-gaussian") return plain();
      if (s == "edgeworth") return edgeworth();
      throw ConfigError("unknown mode '" + s + "'");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "plain" || kind == "plain-gaussian") return plain();
    if (kind != "edgeworth") throw ConfigError("unknown mode kind '" + kind + "'");
    ApproximationMode m = edgeworth();
    if (j.contains("order")) m.order = j.at("order").get<unsigned>();
    if (j.contains("sign")) m.sign = parse_sign_convention(j.at("sign").get<std::string>());
    if (j.contains("scale")) m.scale = parse_scale_convention(j.at("scale").get<std::string>());
    if (m.order > EdgeworthExpansion::kMaxOrder) throw ConfigError("edgeworth order above 4");
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mode: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json ApproximationMode::to_json() const {
  if (kind == ApproxKind::PlainGaussian) return json{{"kind", "plain"}};
  return json{{"kind", "edgeworth"}, {"order", order}, {"sign", to_string(sign)}, {"scale", to_string(scale)}};
}

std::string Estimator::label() const {
  return kind == Kind::Exact ? "exact" : "mc(" + std::to_string(samples) + ")";
}

std::vector<ConvexSet> default_family(std::size_t k) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<ConvexSet> family;
  if (k == 1) {
    for (int i = 0; i <= 40; ++i) family.push_back(Box{{-inf}, {-4.0 + 0.2 * i}});
    return family;
  }
  const std::size_t per_axis = 9;
  std::size_t anchors = 1;
  for (std::size_t i = 0; i < k; ++i) anchors *= per_axis;
  for (std::size_t a = 0; a < anchors; ++a) {
    std::vector<double> anchor(k);
    std::size_t rest = a;
    for (std::size_t i = 0; i < k; ++i) {
      anchor[i] = -4.0 + static_cast<double>(rest % per_axis);
      rest /= per_axis;
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Box b{std::vector<double>(k), std::vector<double>(k)};
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (std::size_t{1} << i)) {
          b.lo[i] = anchor[i];
          b.hi[i] = inf;
        } else {
          b.lo[i] = -inf;
          b.hi[i] = anchor[i];
        }
      }
      family.push_back(std::move(b));
    }
  }
  return family;
}

void check_estimator(const DistributionSpec& spec, std::size_t n, const std::vector<ConvexSet>& family,
                     const Estimator& estimator) {
  if (family.empty()) throw ConfigError("set family is empty");
  for (const auto& s : family) {
    if (set_dim(s) != spec.dim()) throw ConfigError("set dimension does not match k");
  }
  if (estimator.kind == Estimator::Kind::MonteCarlo) {
    if (estimator.samples < 1000) throw ConfigError("mc estimator needs at least 1000 samples");
    return;
  }
  if (spec.kind() == LawKind::Gaussian) return;
  if (!spec.discrete()) throw ConfigError("exact estimator needs a discrete or Gaussian spec");
  for (const auto& s : family) {
    if (!std::holds_alternative<Box>(s)) throw ConfigError("exact estimator supports box families only");
  }
  if (n > WeightedSumLaw::kMaxTerms) throw ConfigError("exact estimator: n above 26");
  const double half_atoms =
      std::pow(static_cast<double>(spec.support().size()), static_cast<double>((n + 1) / 2));
  if (half_atoms > static_cast<double>(WeightedSumLaw::kMaxHalfAtoms)) {
    throw ConfigError("exact estimator: n too large for this support size");
  }
}

namespace {

CumulantSet<double> summand_cumulants(const DistributionSpec& spec, unsigned order) {
  const unsigned m = std::max(2u, order + 2);
  return moments_to_cumulants(analytic_moments<Rational>(spec, m)).cast<double>();
}

class DeltaEvaluator {
 public:
  DeltaEvaluator(const DistributionSpec& spec, const std::vector<ApproximationMode>& modes,
                 const std::vector<ConvexSet>& family, const Estimator& estimator, std::size_t approx_mc_samples)
      : spec_(spec), modes_(modes), family_(family), estimator_(estimator), approx_mc_(approx_mc_samples) {
    for (const auto& m : modes_) {
      cumulants_.push_back(m.kind == ApproxKind::Edgeworth ? summand_cumulants(spec_, m.order)
                                                           : CumulantSet<double>(spec_.dim(), 2));
    }
  }

  std::vector<double> evaluate(const ThetaVector& theta, std::uint64_t seed) const {
    check_estimator(spec_, theta.size(), family_, estimator_);
    const std::vector<double> truth = true_probabilities(theta, seed);
    std::vector<double> deltas(modes_.size(), 0.0);
    for (std::size_t mi = 0; mi < modes_.size(); ++mi) {
      const auto& mode = modes_[mi];
      std::optional<EdgeworthExpansion> e;
      if (mode.kind == ApproxKind::Edgeworth) {
        e = mode.scale == ScaleConvention::PerTheta
                ? EdgeworthExpansion::for_weighted_sum(cumulants_[mi], theta.weights(), mode.order, mode.sign)
                : EdgeworthExpansion::averaged(cumulants_[mi], theta.size(), mode.order, mode.sign);
      }
      double worst = 0.0;
      for (std::size_t si = 0; si < family_.size(); ++si) {
        const double approx = e ? expansion_measure(*e, family_[si], approx_mc_, substream_seed(seed, 1 + si))
                                : gaussian_measure(family_[si]);
        worst = std::max(worst, std::abs(truth[si] - approx));
      }
      deltas[mi] = worst;
    }
    return deltas;
  }

 private:
  std::vector<double> true_probabilities(const ThetaVector& theta, std::uint64_t seed) const {
    std::vector<double> truth(family_.size());
    if (estimator_.kind == Estimator::Kind::MonteCarlo) {
      // One seed for the whole family: common random numbers across sets.
      const auto est = empirical_probabilities(spec_, theta, family_, estimator_.samples, seed);
      for (std::size_t i = 0; i < family_.size(); ++i) truth[i] = est[i].estimate;
      return truth;
    }
    if (spec_.kind() == LawKind::Gaussian) {
      // sum theta_j X_j is exactly N(0, I).
      for (std::size_t i = 0; i < family_.size(); ++i) truth[i] = gaussian_measure(family_[i]);
      return truth;
    }
    const WeightedSumLaw law(spec_, theta);
    std::map<std::pair<double, double>, double> memo;
    for (std::size_t i = 0; i < family_.size(); ++i) {
      const auto& box = std::get<Box>(family_[i]);
      double p = 1.0;
      for (std::size_t c = 0; c < box.lo.size(); ++c) {
        auto key = std::make_pair(box.lo[c], box.hi[c]);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, law.probability(box.lo[c], box.hi[c])).first;
        p *= it->second;
      }
      truth[i] = p;
    }
    return truth;
  }

  const DistributionSpec& spec_;
  const std::vector<ApproximationMode>& modes_;
  const std::vector<ConvexSet>& family_;
  Estimator estimator_;
  std::size_t approx_mc_;
  std::vector<CumulantSet<double>> cumulants_;
};

}  // namespace

std::vector<double> deltas_for_theta(const DistributionSpec& spec, const ThetaVector& theta,
                                     const std::vector<ApproximationMode>& modes,
                                     const std::vector<ConvexSet>& family, const Estimator& estimator,
                                     std::uint64_t seed, std::size_t approx_mc_samples) {
  return DeltaEvaluator(spec, modes, family, estimator, approx_mc_samples).evaluate(theta, seed);
}

double delta_for_theta(const DistributionSpec& spec, const ThetaVector& theta, const ApproximationMode& mode,
                       const std::vector<ConvexSet>& family, const Estimator& estimator, std::uint64_t seed,
                       std::size_t approx_mc_samples) {
  return deltas_for_theta(spec, theta, {mode}, family, estimator, seed, approx_mc_samples).front();
}

DistributionSpec ExperimentConfig::spec() const {
  try {
    return DistributionSpec::from_name(spec_name, k, spec_param);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void ExperimentConfig::validate() const {
  if (k == 0) throw ConfigError("k must be >= 1");
  if (n_grid.size() < 3) throw ConfigError("n_grid needs at least 3 entries for slope fitting");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw ConfigError("n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly ascending");
  }
  if (theta_draws == 0) throw ConfigError("theta_draws must be >= 1");
  if (modes.empty()) throw ConfigError("no approximation modes");
  std::vector<std::string> labels;
  for (const auto& m : modes) labels.push_back(m.label());
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) throw ConfigError("duplicate mode");
  const auto s = spec();
  for (std::size_t n : n_grid) check_estimator(s, n, family, estimator);
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    const auto& spec = j.at("spec");
    if (spec.is_string()) {
      cfg.spec_name = spec.get<std::string>();
    } else {
      cfg.spec_name = spec.at("name").get<std::string>();
      if (spec.contains("param")) {
        const auto& p = spec.at("param");
        cfg.spec_param = p.is_string() ? p.get<std::string>() : p.dump();
      }
    }
    cfg.k = j.at("k").get<std::size_t>();
    cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    cfg.theta_draws = j.value("theta_draws", std::size_t{200});
    const json family = j.value("family", json("default"));
    if (family.is_string() && family.get<std::string>() == "default") {
      cfg.family_text = "default";
      cfg.family = default_family(cfg.k);
    } else {
      cfg.family_text.clear();
      for (const auto& s : family) {
        cfg.family.push_back(parse_convex_set(s.get<std::string>()));
        if (!cfg.family_text.empty()) cfg.family_text += ";";
        cfg.family_text += format_convex_set(cfg.family.back());
      }
    }
    const json est = j.value("estimator", json("exact"));
    if (est.is_string() && est.get<std::string>() == "exact") {
      cfg.estimator = Estimator::exact();
    } else if (est.is_object() && est.contains("mc")) {
      cfg.estimator = Estimator::monte_carlo(est.at("mc").get<std::size_t>());
    } else {
      throw ConfigError("estimator must be \"exact\" or {\"mc\": N}");
    }
    const json modes = j.value("modes", json::array({"plain", "edgeworth"}));
    for (const auto& m : modes) cfg.modes.push_back(ApproximationMode::from_json(m));
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.approx_mc_samples = j.value("approx_mc_samples", std::size_t{100000});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

json ExperimentConfig::to_json() const {
  json j;
  j["spec"] = spec_param.empty() ? json{{"name", spec_name}} : json{{"name", spec_name}, {"param", spec_param}};
  j["k"] = k;
  j["n_grid"] = n_grid;
  j["theta_draws"] = theta_draws;
  if (family_text == "default") {
    j["family"] = "default";
  } else {
    json list = json::array();
    for (const auto& s : family) list.push_back(format_convex_set(s));
    j["family"] = list;
  }
  j["estimator"] = estimator.kind == Estimator::Kind::Exact ? json("exact") : json{{"mc", estimator.samples}};
  json modes_json = json::array();
  for (const auto& m : modes) modes_json.push_back(m.to_json());
  j["modes"] = modes_json;
  j["seed"] = seed;
  j["approx_mc_samples"] = approx_mc_samples;
  return j;
}

SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  if (x.size() != y.size() || x.size() < 2) return fit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return fit;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return fit;
  fit.defined = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
    fit.residual += r * r;
  }
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const RateRow& RateReport::row(std::size_t n, const std::string& mode) const {
  for (const auto& r : rows) {
    if (r.n == n && r.mode == mode) return r;
  }
  throw std::out_of_range("no report row for n=" + std::to_string(n) + " mode=" + mode);
}

const SlopeFit& RateReport::slope(const std::string& mode) const {
  for (const auto& [label, fit] : slopes) {
    if (label == mode) return fit;
  }
  throw std::out_of_range("no slope for mode " + mode);
}

std::string RateReport::to_csv() const {
  std::ostringstream os;
  os << "n,mode,mean_delta,stderr_delta,q50,q90\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.mode << ',' << format_double(r.mean_delta) << ',' << format_double(r.stderr_delta) << ','
       << format_double(r.q50) << ',' << format_double(r.q90) << '\n';
  }
  return os.str();
}

std::string RateReport::to_json() const {
  // Written by hand so every float carries 17 significant digits.
  std::ostringstream os;
  auto quoted = [](const std::string& s) { return json(s).dump(); };
  os << "{\n";
  os << "  \"version\": " << quoted(kVersion) << ",\n";
  os << "  \"seed\": " << config.seed << ",\n";
  os << "  \"config\": " << config.to_json().dump() << ",\n";
  os << "  \"rows\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << "    {\"n\": " << r.n << ", \"mode\": " << quoted(r.mode) << ", \"mean_delta\": " << format_double(r.mean_delta)
       << ", \"stderr_delta\": " << format_double(r.stderr_delta) << ", \"q50\": " << format_double(r.q50)
       << ", \"q90\": " << format_double(r.q90) << "}" << (i + 1 < rows.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"slopes\": [\n";
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const auto& [mode, fit] = slopes[i];
    os << "    {\"mode\": " << quoted(mode) << ", \"defined\": " << (fit.defined ? "true" : "false");
    if (fit.defined) {
      os << ", \"slope\": " << format_double(fit.slope) << ", \"intercept\": " << format_double(fit.intercept)
         << ", \"residual\": " << format_double(fit.residual);
    }
    os << "}" << (i + 1 < slopes.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

void RateReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.json") << to_json();
  std::ofstream(dir / "report.csv") << to_csv();
}

RateReport rate_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const DistributionSpec spec = cfg.spec();
  const DeltaEvaluator evaluator(spec, cfg.modes, cfg.family, cfg.estimator, cfg.approx_mc_samples);
  const std::size_t draws = cfg.theta_draws;
  const std::size_t cells = cfg.n_grid.size() * draws;
  std::vector<std::vector<double>> deltas(cells);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t cell = 0; cell < cells; ++cell) {
    try {
      const std::size_t n = cfg.n_grid[cell / draws];
      const ThetaVector theta = sample_sphere(n, substream_seed(cfg.seed, 2 * cell));
      deltas[cell] = evaluator.evaluate(theta, substream_seed(cfg.seed, 2 * cell + 1));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  RateReport report;
  report.config = cfg;
  std::vector<std::vector<double>> means(cfg.modes.size());
  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
      std::vector<double> values(draws);
      for (std::size_t r = 0; r < draws; ++r) {
        values[r] = deltas[ni * draws + r][mi];
        if (!std::isfinite(values[r])) {
          throw NumericError("non-finite delta at n=" + std::to_string(cfg.n_grid[ni]) + " draw " +
                             std::to_string(r) + " mode " + cfg.modes[mi].label());
        }
      }
      RateRow row;
      row.n = cfg.n_grid[ni];
      row.mode = cfg.modes[mi].label();
      row.mean_delta = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(draws);
      double ss = 0.0;
      for (double v : values) ss += (v - row.mean_delta) * (v - row.mean_delta);
      row.stderr_delta = draws > 1 ? std::sqrt(ss / static_cast<double>(draws - 1) / static_cast<double>(draws)) : 0.0;
      row.q50 = quantile(values, 0.5);
      row.q90 = quantile(values, 0.9);
      means[mi].push_back(row.mean_delta);
      report.rows.push_back(std::move(row));
    }
  }
  std::vector<double> ns(cfg.n_grid.begin(), cfg.n_grid.end());
  for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
    SlopeFit fit = fit_log_log(ns, means[mi]);
    if (fit.defined && !std::isfinite(fit.slope)) throw NumericError("non-finite slope for " + cfg.modes[mi].label());
    report.slopes.emplace_back(cfg.modes[mi].label(), fit);
  }
  return report;
}

}  // namespace edgeworth
