#include "edgeworth/cli.hpp"

#include "edgeworth/cumulants.hpp"
#include "edgeworth/harness.hpp"
#include "edgeworth/measures.hpp"
#include "edgeworth/moments.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace edgeworth {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  std::string out;
};

struct SourceOptions {
  std::string spec;
  std::string param;
  std::size_t k = 0;
  std::string cumulants_file;
};

struct WeightOptions {
  std::size_t n = 0;
  std::string theta;
  std::string theta_file;
};

struct ExpansionOptions {
  unsigned order = 2;
  std::string sign = "plus";
  std::string scale;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

// Writes to --out if given, stdout otherwise.
void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out);
  if (!os) throw ConfigError("cannot write " + g.out);
  os << text;
}

std::string format15(double v) {
  if (!std::isfinite(v)) throw NumericError("non-finite result");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void add_source_options(CLI::App* cmd, SourceOptions& s, bool allow_cumulants) {
  cmd->add_option("--spec", s.spec, "coordinate law: rademacher, uniform, three_point, gaussian, shifted_bernoulli");
  cmd->add_option("--param", s.param, "law parameter (decimal or p/q)");
  cmd->add_option("--k", s.k, "dimension");
  if (allow_cumulants) cmd->add_option("--cumulants", s.cumulants_file, "summand cumulant table");
}

void add_weight_options(CLI::App* cmd, WeightOptions& w) {
  cmd->add_option("--n", w.n, "number of summands, equal weights 1/sqrt(n)");
  cmd->add_option("--theta", w.theta, "comma separated unit weight vector");
  cmd->add_option("--theta-file", w.theta_file, "file holding the weight vector");
}

void add_expansion_options(CLI::App* cmd, ExpansionOptions& e) {
  cmd->add_option("--order", e.order, "expansion order s (0..4)");
  cmd->add_option("--sign", e.sign, "plus | minus");
  cmd->add_option("--scale", e.scale, "per-theta | averaged");
}

DistributionSpec make_spec(const SourceOptions& s) {
  if (s.spec.empty()) throw ConfigError("--spec is required");
  if (s.k == 0) throw ConfigError("--k is required");
  return DistributionSpec::from_name(s.spec, s.k, s.param);
}

std::optional<ThetaVector> make_theta(const WeightOptions& w) {
  const int given = (w.n > 0) + !w.theta.empty() + !w.theta_file.empty();
  if (given > 1) throw ConfigError("give only one of --n, --theta, --theta-file");
  if (w.n > 0) return ThetaVector::equal(w.n);
  if (!w.theta.empty()) return ThetaVector::parse(w.theta);
  if (!w.theta_file.empty()) {
    auto in = open_input(w.theta_file);
    return ThetaVector::read(in);
  }
  return std::nullopt;
}

// Summand cumulants up to order max(2, s + 2), from a file or an analytic law.
CumulantSet<double> summand_cumulants(const SourceOptions& s, unsigned order) {
  const unsigned m = std::max(2u, order + 2);
  if (!s.cumulants_file.empty()) {
    if (!s.spec.empty()) throw ConfigError("give either --spec or --cumulants");
    auto in = open_input(s.cumulants_file);
    auto cs = read_table<double, CumulantTag>(in);
    if (s.k != 0 && cs.dim() != s.k) throw ConfigError("--k does not match the cumulant table");
    if (cs.max_order() < m) throw ConfigError("cumulant table stops below order s+2");
    return cs.truncated(m);
  }
  return moments_to_cumulants(analytic_moments<Rational>(make_spec(s), m)).cast<double>();
}

EdgeworthExpansion make_expansion(const SourceOptions& s, const WeightOptions& w, const ExpansionOptions& e) {
  if (e.order > EdgeworthExpansion::kMaxOrder) throw ConfigError("--order must be in 0..4");
  const auto cs = summand_cumulants(s, e.order);
  const auto sign = parse_sign_convention(e.sign);
  const auto theta = make_theta(w);
  const auto scale = e.scale.empty() ? ScaleConvention::PerTheta : parse_scale_convention(e.scale);
  if (scale == ScaleConvention::Averaged) {
    if (!theta) throw ConfigError("--scale averaged needs --n or a weight vector");
    return EdgeworthExpansion::averaged(cs, theta->size(), e.order, sign);
  }
  // Without weights the table describes the sum itself.
  const ThetaVector t = theta ? *theta : ThetaVector::equal(1);
  return EdgeworthExpansion::for_weighted_sum(cs, t.weights(), e.order, sign);
}

std::vector<std::vector<double>> parse_points(const std::vector<std::string>& texts, std::size_t k) {
  std::vector<std::vector<double>> points;
  for (const auto& t : texts) {
    auto p = parse_real_list(t);
    if (p.size() != k) throw ConfigError("point '" + t + "' does not have " + std::to_string(k) + " coordinates");
    points.push_back(std::move(p));
  }
  if (points.empty()) throw ConfigError("at least one --x point is required");
  return points;
}

int run_cumulants(const GlobalOptions& g, const std::string& in_path, const SourceOptions& s, unsigned order) {
  std::ostringstream os;
  if (!in_path.empty()) {
    std::ifstream probe = open_input(in_path);
    const TableHeader header = read_table_header(probe);
    auto in = open_input(in_path);
    if (header.mode == ArithmeticMode::Exact) {
      write_table(os, moments_to_cumulants(read_table<Rational, MomentTag>(in)));
    } else {
      const auto cs = moments_to_cumulants(read_table<double, MomentTag>(in));
      for (double v : cs.values()) {
        if (!std::isfinite(v)) throw NumericError("non-finite cumulant");
      }
      write_table(os, cs);
    }
  } else {
    if (order == 0) throw ConfigError("--order is required with --spec");
    write_table(os, moments_to_cumulants(analytic_moments<Rational>(make_spec(s), order)));
  }
  emit(g, os.str());
  return kExitOk;
}

int run_density(const GlobalOptions& g, const SourceOptions& s, const WeightOptions& w, const ExpansionOptions& e,
                const std::vector<std::string>& xs, bool closed_form) {
  std::ostringstream os;
  if (closed_form) {
    if (e.order != 2) throw ConfigError("--closed-form is the s = 2 density");
    const auto theta = make_theta(w);
    if (!theta) throw ConfigError("--closed-form needs --n or a weight vector");
    const auto cs = summand_cumulants(s, 2);
    const auto ms = cumulants_to_moments(cs);
    for (const auto& alpha : enumerate_degree(ms.dim(), 3)) {
      if (std::abs(ms.at(alpha)) > 1e-12) throw ConfigError("--closed-form needs vanishing third moments");
    }
    const auto mu = fourth_moments(ms);
    const auto scale = e.scale.empty() ? ScaleConvention::PerTheta : parse_scale_convention(e.scale);
    const double c = scale == ScaleConvention::Averaged ? averaged_power_sum(4, theta->size()) : theta->power_sum(4);
    const auto sign = parse_sign_convention(e.sign);
    for (const auto& x : parse_points(xs, ms.dim())) {
      os << format15(closed_form_g_density_scaled(ms.dim(), mu, c, x, sign)) << '\n';
    }
  } else {
    const auto expansion = make_expansion(s, w, e);
    for (const auto& x : parse_points(xs, expansion.dim())) os << format15(expansion.density(x)) << '\n';
  }
  emit(g, os.str());
  return kExitOk;
}

int run_measure(const GlobalOptions& g, const SourceOptions& s, const WeightOptions& w, const ExpansionOptions& e,
                const std::vector<std::string>& sets, std::size_t mc) {
  if (sets.empty()) throw ConfigError("at least one --set is required");
  const auto expansion = make_expansion(s, w, e);
  std::ostringstream os;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto set = parse_convex_set(sets[i]);
    if (set_dim(set) != expansion.dim()) throw ConfigError("set dimension does not match k");
    os << format15(expansion_measure(expansion, set, mc, substream_seed(g.seed, i))) << '\n';
  }
  emit(g, os.str());
  return kExitOk;
}

int run_exact(const GlobalOptions& g, const SourceOptions& s, const WeightOptions& w,
              const std::vector<std::string>& sets) {
  if (sets.empty()) throw ConfigError("at least one --set is required");
  const auto spec = make_spec(s);
  const auto theta = make_theta(w);
  if (!theta) throw ConfigError("--n, --theta or --theta-file is required");
  std::ostringstream os;
  for (const auto& text : sets) {
    const auto set = parse_convex_set(text);
    if (!std::holds_alternative<Box>(set)) throw ConfigError("exact probabilities are available for boxes only");
    const std::vector<ConvexSet> family{set};
    check_estimator(spec, theta->size(), family, Estimator::exact());
    const double p = spec.kind() == LawKind::Gaussian ? gaussian_measure(set)
                                                      : exact_box_probability(spec, *theta, std::get<Box>(set));
    os << format15(p) << '\n';
  }
  emit(g, os.str());
  return kExitOk;
}

int run_rate(const GlobalOptions& g, const std::string& config_path) {
  if (g.out.empty()) throw ConfigError("rate needs --out <dir>");
  auto in = open_input(config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  auto cfg = ExperimentConfig::from_json(j);
  if (g.seed_given) cfg.seed = g.seed;
  const auto report = rate_experiment(cfg);
  report.write(g.out);
  for (const auto& [mode, fit] : report.slopes) {
    std::cout << mode << " slope " << (fit.defined ? format_double(fit.slope) : std::string("undefined")) << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Edgeworth corrections for weighted sums of i.i.d. random vectors", "edgeworth"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "output file, or directory for rate");

  SourceOptions src;
  WeightOptions wts;
  ExpansionOptions exp;
  std::string in_path;
  std::string config_path;
  unsigned cumulant_order = 0;
  std::vector<std::string> xs;
  std::vector<std::string> sets;
  bool closed_form = false;
  std::size_t mc = 100000;

  auto* cumulants = app.add_subcommand("cumulants", "moment table -> cumulant table");
  cumulants->add_option("--in", in_path, "moment table file");
  add_source_options(cumulants, src, false);
  cumulants->add_option("--order", cumulant_order, "maximum order with --spec");

  auto* density = app.add_subcommand("density", "evaluate the expansion density at points");
  add_source_options(density, src, true);
  add_weight_options(density, wts);
  add_expansion_options(density, exp);
  density->add_option("--x", xs, "evaluation point, comma separated (repeatable)");
  density->add_flag("--closed-form", closed_form, "use the explicit s = 2 formula in the fourth moments");

  auto* measure = app.add_subcommand("measure", "measure of a set under the expansion");
  add_source_options(measure, src, true);
  add_weight_options(measure, wts);
  add_expansion_options(measure, exp);
  measure->add_option("--set", sets, "box/ball/halfspace (repeatable)");
  measure->add_option("--mc", mc, "Monte Carlo samples for non-box sets");

  auto* exact = app.add_subcommand("exact", "exact probability of a box for a discrete law");
  add_source_options(exact, src, false);
  add_weight_options(exact, wts);
  exact->add_option("--set", sets, "box (repeatable)");

  auto* rate = app.add_subcommand("rate", "run a rate experiment from a JSON config");
  rate->add_option("--config", config_path, "experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }
  g.seed_given = app.count("--seed") > 0;

#ifdef _OPENMP
  if (g.threads > 0) omp_set_num_threads(g.threads);
#endif

  try {
    if (cumulants->parsed()) return run_cumulants(g, in_path, src, cumulant_order);
    if (density->parsed()) return run_density(g, src, wts, exp, xs, closed_form);
    if (measure->parsed()) return run_measure(g, src, wts, exp, sets, mc);
    if (exact->parsed()) return run_exact(g, src, wts, sets);
    if (rate->parsed()) return run_rate(g, config_path);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::overflow_error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    // Bad options, malformed files and infeasible configurations.
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::cerr << app.help();
  return kExitConfig;
}

}  // namespace edgeworth
