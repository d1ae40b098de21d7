// Acceptance checks A1..A8. One [PASS]/[FAIL] line per criterion.

#include "edgeworth/cumulants.hpp"
#include "edgeworth/expansion.hpp"
#include "edgeworth/harness.hpp"
#include "edgeworth/hermite.hpp"
#include "edgeworth/measures.hpp"
#include "edgeworth/moments.hpp"
#include "edgeworth/rng.hpp"
#include "edgeworth/weighted_sums.hpp"

#include <CLI11.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace edgeworth;

namespace {

constexpr std::uint64_t kSeed = 20261015;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Standardized cumulants up to order m with random rational entries of
// degree >= 3.
CumulantSet<Rational> random_cumulants(std::size_t k, unsigned m, bool zero_third, Rng& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 8);
  CumulantSet<Rational> cs(k, m);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& nu = cs.indices()[i];
    const unsigned d = nu.degree();
    if (d == 1 || (zero_third && d == 3)) continue;
    if (d == 2) {
      bool diagonal = false;
      for (unsigned e : nu.exponents()) diagonal = diagonal || e == 2;
      cs.at_position(i) = diagonal ? 1 : 0;
      continue;
    }
    cs.at_position(i) = Rational(num(rng), den(rng));
  }
  return cs;
}

Outcome check_a1() {
  Rng rng(substream_seed(kSeed, 1));
  std::uniform_int_distribution<int> grid(-300, 300);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::size_t exact_mismatch = 0, cases = 0;
  double worst_float = 0.0;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (int set = 0; set < 20; ++set) {
      const auto cs = random_cumulants(k, 4, true, rng);
      const auto csd = cs.cast<double>();
      const auto mu = fourth_moments(cumulants_to_moments(cs));
      FourthMoments<double> mud;
      for (const auto& [a, v] : mu) mud.emplace(a, static_cast<double>(v));
      const auto p1 = phat_polynomial(1, cs), p2 = phat_polynomial(2, cs);
      for (int point = 0; point < 100; ++point) {
        std::vector<Rational> xr(k);
        for (auto& v : xr) v = Rational(grid(rng), 100);
        const Rational engine = hermite_combination<Rational>(p1, xr) + hermite_combination<Rational>(p2, xr);
        if (engine != closed_form_g_bracket<Rational>(k, mu, xr, SignConvention::SubstitutionPlus)) {
          ++exact_mismatch;
        }
        std::vector<double> x(k);
        for (auto& v : x) v = u(rng);
        const double generic = gaussian_pdf(x) + pr_density(1, csd, x) + pr_density(2, csd, x);
        const double closed = closed_form_g_density_scaled(k, mud, 1.0, x);
        worst_float = std::max(worst_float, std::abs(generic - closed));
        ++cases;
      }
    }
  }
  Outcome o;
  o.pass = exact_mismatch == 0 && worst_float <= 1e-12;
  o.detail = std::to_string(cases) + " points, exact mismatches " + std::to_string(exact_mismatch) +
             ", float max diff " + fmt("%.3g", worst_float);
  return o;
}

Outcome check_a2() {
  Rng rng(substream_seed(kSeed, 2));
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  std::size_t failures = 0, tables = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (int rep = 0; rep < 5; ++rep) {
      MomentSet<Rational> ms(k, 6);
      for (std::size_t i = 0; i < ms.size(); ++i) ms.at_position(i) = Rational(num(rng), den(rng));
      if (!(cumulants_to_moments(moments_to_cumulants(ms)) == ms)) ++failures;
      CumulantSet<Rational> cs(k, 6);
      for (std::size_t i = 0; i < cs.size(); ++i) cs.at_position(i) = Rational(num(rng), den(rng));
      if (!(moments_to_cumulants(cumulants_to_moments(cs)) == cs)) ++failures;
      tables += 2;
    }
  }
  return {failures == 0, std::to_string(tables) + " tables to order 6, k <= 4, failures " + std::to_string(failures)};
}

Outcome check_a3() {
  struct Case {
    DistributionSpec spec;
    std::size_t n;
  };
  const std::vector<Case> cases = {{DistributionSpec::rademacher(1), 10},
                                   {DistributionSpec::uniform(1), 7},
                                   {DistributionSpec::three_point(1, Rational(3)), 25}};
  double worst = 0.0;
  bool plus_agrees = true, minus_agrees = true;
  for (const auto& c : cases) {
    const auto kappa = moments_to_cumulants(analytic_moments<Rational>(c.spec, 4)).cast<double>();
    const double beta4 = static_cast<double>(c.spec.coordinate_moments()[4]);
    const auto plus = EdgeworthExpansion::averaged(kappa, c.n, 2, SignConvention::SubstitutionPlus);
    const auto minus = EdgeworthExpansion::averaged(kappa, c.n, 2, SignConvention::PaperMinus);
    for (int i = 0; i < 50; ++i) {
      const double x = -3.9 + 7.8 * i / 49.0;
      const Box box{{-kInf}, {x}};
      const double phi = std_normal_cdf(x);
      const double ref = bobkov_g_cdf(beta4, c.n, x) - phi;
      const double got_plus = expansion_measure_box(plus, box) - phi;
      const double got_minus = expansion_measure_box(minus, box) - phi;
      worst = std::max({worst, std::abs(std::abs(got_plus) - std::abs(ref)),
                        std::abs(std::abs(got_minus) - std::abs(ref))});
      if (std::abs(ref) > 1e-12) {
        plus_agrees = plus_agrees && (got_plus > 0) == (ref > 0);
        minus_agrees = minus_agrees && (got_minus > 0) == (ref > 0);
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-12 && plus_agrees != minus_agrees;
  o.detail = "150 points, max magnitude diff " + fmt("%.3g", worst) + "; sign agrees under " +
             (plus_agrees && !minus_agrees   ? "substitution-plus only"
              : minus_agrees && !plus_agrees ? "paper-minus only"
                                             : "neither or both");
  return o;
}

std::string slope_text(const RateReport& r, const std::string& mode) {
  const auto& s = r.slope(mode);
  return s.defined ? fmt("%.4f", s.slope) : std::string("undefined");
}

Outcome check_a4() {
  ExperimentConfig cfg;
  cfg.spec_name = "rademacher";
  cfg.k = 1;
  cfg.n_grid = {8, 12, 16, 20, 24};
  cfg.theta_draws = 200;
  cfg.family = default_family(1);
  cfg.estimator = Estimator::exact();
  const auto plain = ApproximationMode::plain();
  const auto edge = ApproximationMode::edgeworth(2, SignConvention::SubstitutionPlus, ScaleConvention::Averaged);
  const auto per_theta = ApproximationMode::edgeworth(2, SignConvention::SubstitutionPlus, ScaleConvention::PerTheta);
  cfg.modes = {plain, edge, per_theta};
  cfg.seed = kSeed;
  const auto report = rate_experiment(cfg);
  const auto& sp = report.slope(plain.label());
  const auto& se = report.slope(edge.label());
  const bool edge_ok = se.defined && se.slope <= -1.30;
  const bool plain_ok = sp.defined && sp.slope >= -1.25 && sp.slope <= -0.80;
  Outcome o;
  o.pass = edge_ok && plain_ok;
  o.detail = "slopes: edgeworth " + slope_text(report, edge.label()) + (edge_ok ? " (ok)" : " (needs <= -1.30)") +
             ", plain " + slope_text(report, plain.label()) +
             (plain_ok ? " (ok)" : " (needs [-1.25, -0.80])") + ", per-theta edgeworth " +
             slope_text(report, per_theta.label());
  return o;
}

Outcome check_a5() {
  Rng rng(substream_seed(kSeed, 5));
  std::uniform_int_distribution<std::size_t> pick_n(2, 20), pick_k(1, 3), pick_spec(0, 2);
  std::uniform_real_distribution<double> u(-2.5, 2.5), coin(0.0, 1.0);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = pick_n(rng), k = pick_k(rng), which = pick_spec(rng);
    const DistributionSpec spec = which == 0   ? DistributionSpec::rademacher(k)
                                  : which == 1 ? DistributionSpec::three_point(k, Rational(2))
                                               : DistributionSpec::shifted_bernoulli(k, Rational(2));
    const auto theta = sample_sphere(n, substream_seed(kSeed, 1000 + trial));
    Box box{std::vector<double>(k), std::vector<double>(k)};
    for (std::size_t i = 0; i < k; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      box.lo[i] = coin(rng) < 0.25 ? -kInf : a;
      box.hi[i] = coin(rng) < 0.25 ? kInf : b;
    }
    const double truth = exact_box_probability(spec, theta, box);
    const auto est = empirical_probability(spec, theta, box, 100000, substream_seed(kSeed, 2000 + trial));
    if (est.lower <= truth && truth <= est.upper) ++covered;
  }
  return {covered >= 93, std::to_string(covered) + "/100 covered (needs >= 93)"};
}

Outcome check_a6() {
  Rng rng(substream_seed(kSeed, 6));
  double worst = 0.0;
  int count = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    const Box box{std::vector<double>(k, -10.0), std::vector<double>(k, 10.0)};
    for (unsigned s = 1; s <= 4; ++s) {
      for (int rep = 0; rep < 5; ++rep) {
        const auto cs = random_cumulants(k, s + 2, false, rng).cast<double>();
        for (auto sign : {SignConvention::SubstitutionPlus, SignConvention::PaperMinus}) {
          const EdgeworthExpansion e(cs, s, sign);
          worst = std::max(worst, std::abs(expansion_measure_box(e, box) - 1.0));
          ++count;
        }
      }
    }
  }
  return {worst <= 1e-9, std::to_string(count) + " expansions, max |mass - 1| " + fmt("%.3g", worst)};
}

Outcome check_a7() {
  Rng rng(substream_seed(kSeed, 7));
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_fd = 0.0;
  const double h = 1e-3;
  for (std::size_t k = 1; k <= 3; ++k) {
    for (const auto& nu : enumerate_range(k, 1, 5)) {
      std::size_t axis = 0;
      while (nu[axis] == 0) ++axis;
      std::vector<unsigned> lower(nu.exponents().begin(), nu.exponents().end());
      --lower[axis];
      const MultiIndex base(lower);
      for (int p = 0; p < 10; ++p) {
        std::vector<double> x(k);
        for (auto& v : x) v = u(rng);
        auto f = [&](double shift) {
          auto y = x;
          y[axis] += shift;
          return gaussian_derivative(base, y);
        };
        // five-point central difference
        const double fd = (f(-2 * h) - 8 * f(-h) + 8 * f(h) - f(2 * h)) / (12 * h);
        worst_fd = std::max(worst_fd, std::abs(fd - gaussian_derivative(nu, x)));
      }
    }
  }
  double worst_quad = 0.0;
  std::uniform_real_distribution<double> end(-6.0, 6.0), coin(0.0, 1.0);
  for (unsigned n = 0; n <= 12; ++n) {
    auto integrand = [n](double t) {
      const double v = hermite_value(n, t) * std_normal_pdf(t);
      return n % 2 == 0 ? v : -v;
    };
    for (int rep = 0; rep < 10; ++rep) {
      double a = end(rng), b = end(rng);
      if (a > b) std::swap(a, b);
      if (coin(rng) < 0.3) a = -kInf;
      if (coin(rng) < 0.3) b = kInf;
      const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 15, 1e-14);
      worst_quad = std::max(worst_quad, std::abs(q - gaussian_partial_integral(n, a, b)));
    }
  }
  Outcome o;
  o.pass = worst_fd <= 1e-6 && worst_quad <= 1e-9;
  o.detail = "finite-difference max diff " + fmt("%.3g", worst_fd) + ", quadrature max diff " + fmt("%.3g", worst_quad);
  return o;
}

Outcome check_a8() {
  const auto edge = ApproximationMode::edgeworth(2, SignConvention::SubstitutionPlus, ScaleConvention::Averaged);
  const auto per_theta = ApproximationMode::edgeworth(2, SignConvention::SubstitutionPlus, ScaleConvention::PerTheta);
  ExperimentConfig cfg;
  cfg.spec_name = "shifted_bernoulli";
  cfg.spec_param = "2";
  cfg.k = 1;
  cfg.n_grid = {32, 48, 64, 96, 128};
  cfg.theta_draws = 50;
  cfg.family = default_family(1);
  const std::size_t samples = 2000000;
  cfg.estimator = Estimator::monte_carlo(samples);
  cfg.modes = {edge, ApproximationMode::plain(), per_theta};
  cfg.seed = kSeed;
  const auto report = rate_experiment(cfg);

  // Monte Carlo noise floor: the deltas must stay well above it or the slope
  // only measures noise.
  const double floor = 5.0 * 0.5 / std::sqrt(static_cast<double>(samples));
  double smallest = kInf;
  for (std::size_t n : cfg.n_grid) smallest = std::min(smallest, report.row(n, edge.label()).mean_delta);
  const auto& s = report.slope(edge.label());

  ExperimentConfig small = cfg;
  small.n_grid = {8, 12, 16, 20, 24};
  small.estimator = Estimator::exact();
  small.modes = {edge};
  const auto exact_report = rate_experiment(small);

  Outcome o;
  o.pass = s.defined && s.slope >= -1.25 && smallest >= floor;
  o.detail = "shifted_bernoulli(2), mu3 = 3/2: edgeworth slope " + slope_text(report, edge.label()) +
             " (needs >= -1.25), smallest mean delta " + fmt("%.3g", smallest) + " vs noise guard " +
             fmt("%.3g", floor) + "; plain " + slope_text(report, "plain") + ", per-theta " +
             slope_text(report, per_theta.label()) + "; exact n=8..24 diagnostic slope " +
             slope_text(exact_report, edge.label());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<std::string> only;
  app.add_option("--only", only, "run only these criteria (A1..A8)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"A1", check_a1}, {"A2", check_a2}, {"A3", check_a3}, {"A4", check_a4},
      {"A5", check_a5}, {"A6", check_a6}, {"A7", check_a7}, {"A8", check_a8}};
  for (const auto& id : only) {
    bool known = false;
    for (const auto& [name, fn] : checks) known = known || name == id;
    if (!known) {
      std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
      return 2;
    }
  }

  int failed = 0;
  for (const auto& [name, fn] : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
