#include <doctest.h>

#include "edgeworth/harness.hpp"
#include "edgeworth/measures.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace edgeworth;
using nlohmann::json;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.spec_name = "rademacher";
  cfg.k = 1;
  cfg.n_grid = {16, 20, 24};
  cfg.theta_draws = 30;
  cfg.family = default_family(1);
  cfg.modes = {ApproximationMode::plain(), ApproximationMode::edgeworth(),
               ApproximationMode::edgeworth(2, SignConvention::PaperMinus)};
  cfg.seed = 20261015;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("default families") {
  auto f1 = default_family(1);
  REQUIRE(f1.size() == 41);
  CHECK(std::get<Box>(f1.front()).hi[0] == -4.0);
  CHECK(std::get<Box>(f1.back()).hi[0] == doctest::Approx(4.0));
  CHECK(std::get<Box>(f1[20]).hi[0] == doctest::Approx(0.0));
  CHECK(default_family(2).size() == 81 * 4);
  CHECK(default_family(3).size() == 729 * 8);
}

TEST_CASE("delta_for_theta examples") {
  const auto fam = default_family(1);
  const auto theta = sample_sphere(12, 4);
  CHECK(delta_for_theta(DistributionSpec::gaussian(1), theta, ApproximationMode::plain(), fam, Estimator::exact()) <=
        1e-12);
  CHECK(delta_for_theta(DistributionSpec::gaussian(1), theta, ApproximationMode::edgeworth(), fam,
                        Estimator::exact()) <= 1e-12);
  CHECK(delta_for_theta(DistributionSpec::gaussian(2), sample_sphere(5, 1), ApproximationMode::edgeworth(),
                        {parse_convex_set("ball 0.2,0 1"), parse_convex_set("halfspace 0.6,0.8 0.3")},
                        Estimator::exact()) <= 1e-12);

  const std::vector<ConvexSet> left{Box{{-kInf}, {0.0}}};
  const ThetaVector two({std::sqrt(0.5), std::sqrt(0.5)});
  CHECK(delta_for_theta(DistributionSpec::rademacher(1), two, ApproximationMode::plain(), left, Estimator::exact()) ==
        doctest::Approx(0.25).epsilon(1e-15));

  // Monte Carlo truth on the same case
  const double mc = delta_for_theta(DistributionSpec::rademacher(1), two, ApproximationMode::plain(), left,
                                    Estimator::monte_carlo(100000), 5);
  CHECK(std::abs(mc - 0.25) < 0.01);

  // several modes share one truth
  auto both = deltas_for_theta(DistributionSpec::rademacher(1), theta,
                               {ApproximationMode::plain(), ApproximationMode::edgeworth()}, fam, Estimator::exact());
  CHECK(both[0] == delta_for_theta(DistributionSpec::rademacher(1), theta, ApproximationMode::plain(), fam,
                                   Estimator::exact()));
}

TEST_CASE("estimator compatibility") {
  const auto fam = default_family(1);
  CHECK_THROWS_AS(check_estimator(DistributionSpec::uniform(1), 5, fam, Estimator::exact()), ConfigError);
  CHECK_THROWS_AS(check_estimator(DistributionSpec::rademacher(1), 27, fam, Estimator::exact()), ConfigError);
  CHECK_THROWS_AS(check_estimator(DistributionSpec::rademacher(1), 5, {parse_convex_set("ball 0 1")},
                                  Estimator::exact()),
                  ConfigError);
  CHECK_THROWS_AS(check_estimator(DistributionSpec::rademacher(1), 5, {}, Estimator::exact()), ConfigError);
  CHECK_THROWS_AS(check_estimator(DistributionSpec::rademacher(2), 5, fam, Estimator::exact()), ConfigError);
  CHECK_THROWS_AS(check_estimator(DistributionSpec::uniform(1), 5, fam, Estimator::monte_carlo(10)), ConfigError);
  CHECK_NOTHROW(check_estimator(DistributionSpec::uniform(1), 500, fam, Estimator::monte_carlo(1000)));
  CHECK_NOTHROW(check_estimator(DistributionSpec::gaussian(1), 500, fam, Estimator::exact()));
}

TEST_CASE("slope fitting and quantiles") {
  std::vector<double> x{8, 12, 16, 20, 24}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  auto fit = fit_log_log(x, y);
  CHECK(fit.defined);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.residual < 1e-20);
  y[2] = 0.0;
  CHECK_FALSE(fit_log_log(x, y).defined);
  CHECK(quantile({3, 1, 2, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4, 5}, 0.9) == doctest::Approx(4.6));
  CHECK(quantile({7}, 0.9) == 7);
  CHECK_THROWS(quantile({}, 0.5));
}

TEST_CASE("Gaussian control experiment") {
  ExperimentConfig cfg;
  cfg.spec_name = "gaussian";
  cfg.n_grid = {4, 8, 16};
  cfg.theta_draws = 3;
  cfg.family = default_family(1);
  cfg.modes = {ApproximationMode::plain()};
  auto rep = rate_experiment(cfg);
  for (const auto& row : rep.rows) CHECK(row.mean_delta <= 1e-10);
  CHECK_FALSE(rep.slope("plain").defined);
}

TEST_CASE("mode ordering on Rademacher") {
  auto rep = rate_experiment(small_config());
  const std::string plus = ApproximationMode::edgeworth().label();
  const std::string minus = ApproximationMode::edgeworth(2, SignConvention::PaperMinus).label();
  for (std::size_t n : {16u, 20u, 24u}) {
    CHECK(rep.row(n, plus).mean_delta < rep.row(n, "plain").mean_delta);
    CHECK(rep.row(n, minus).mean_delta > rep.row(n, plus).mean_delta);
    CHECK(rep.row(n, plus).q50 <= rep.row(n, plus).q90);
    CHECK(rep.row(n, plus).stderr_delta > 0.0);
  }
  CHECK(rep.slope(plus).slope < rep.slope("plain").slope);
  CHECK(rep.rows.size() == 9);
  CHECK(rep.rows[0].n == 16);
  CHECK(rep.rows[1].mode == plus);
}

TEST_CASE("determinism across runs and thread counts") {
  auto cfg = small_config();
  cfg.theta_draws = 1;
  const std::string a = rate_experiment(cfg).to_json();
  CHECK(rate_experiment(cfg).to_json() == a);
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  CHECK(rate_experiment(cfg).to_json() == a);
  omp_set_num_threads(1);
  CHECK(rate_experiment(cfg).to_json() == a);
  omp_set_num_threads(saved);
#endif
  cfg.estimator = Estimator::monte_carlo(2000);
  cfg.theta_draws = 2;
  const std::string b = rate_experiment(cfg).to_csv();
#ifdef _OPENMP
  omp_set_num_threads(3);
  CHECK(rate_experiment(cfg).to_csv() == b);
  omp_set_num_threads(saved);
#endif
}

TEST_CASE("config parsing and validation") {
  const json j = json::parse(R"({
    "spec": {"name": "three_point", "param": "3"}, "k": 1, "n_grid": [4, 6, 8],
    "theta_draws": 2, "family": ["box -inf 0", "box -1 1"], "estimator": "exact",
    "modes": ["plain", {"kind": "edgeworth", "order": 2, "sign": "minus", "scale": "per-theta"}],
    "seed": 12345678901234
  })");
  auto cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.spec_name == "three_point");
  CHECK(cfg.spec_param == "3");
  CHECK(cfg.family.size() == 2);
  CHECK(cfg.modes[1].sign == SignConvention::PaperMinus);
  CHECK(cfg.modes[1].scale == ScaleConvention::PerTheta);
  CHECK(cfg.seed == 12345678901234ULL);
  CHECK_NOTHROW(cfg.validate());
  auto again = ExperimentConfig::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());

  auto bad = cfg;
  bad.n_grid = {4, 8};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.n_grid = {4, 8, 8};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.n_grid = {20, 24, 30};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.modes.push_back(ApproximationMode::plain());
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.spec_name = "cauchy";
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"k": 1})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"spec": "rademacher", "k": 1, "n_grid": [1,2,3],
                                                               "estimator": "magic"})")),
                  ConfigError);
  CHECK_THROWS_AS(ApproximationMode::from_json(json("edgeworth2")), ConfigError);
  CHECK_THROWS_AS(ApproximationMode::from_json(json::parse(R"({"kind": "edgeworth", "order": 5})")), ConfigError);
  auto dflt = ExperimentConfig::from_json(json::parse(R"({"spec": "rademacher", "k": 2, "n_grid": [2,3,4]})"));
  CHECK(dflt.family.size() == 324);
  CHECK(dflt.theta_draws == 200);
  CHECK(dflt.modes.size() == 2);
}

TEST_CASE("report files") {
  auto cfg = small_config();
  cfg.theta_draws = 2;
  auto rep = rate_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "edgeworth_report_test";
  std::filesystem::remove_all(dir);
  rep.write(dir);
  std::ifstream csv(dir / "report.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "n,mode,mean_delta,stderr_delta,q50,q90");
  std::ifstream js(dir / "report.json");
  const json parsed = json::parse(js);
  CHECK(parsed["version"] == kVersion);
  CHECK(parsed["seed"] == cfg.seed);
  CHECK(parsed["rows"].size() == 9);
  CHECK(parsed["slopes"][0]["mode"] == "plain");
  CHECK(parsed["rows"][0]["mean_delta"].get<double>() == rep.rows[0].mean_delta);
  CHECK(parsed["config"]["n_grid"].size() == 3);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
