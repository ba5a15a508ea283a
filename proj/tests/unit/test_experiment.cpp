#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "hfbm/error.hpp"
#include "hfbm/experiment.hpp"
#include "hfbm/pairings.hpp"

using namespace hfbm;
using nlohmann::json;

TEST(Config, DefaultsValidate) { EXPECT_NO_THROW(ExperimentConfig{}.validate()); }

TEST(Config, RejectsUnknownKey) {
  EXPECT_THROW(ExperimentConfig::from_json(json{{"dims", {2, 4}}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json::array()), ConfigError);
}

TEST(Config, RejectsBadTypesAndValues) {
  EXPECT_THROW(ExperimentConfig::from_json(json{{"H", "half"}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"H", 1.5}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"d", {0}}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"coarse_level", 8}, {"fine_level", 4}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"mode", "exotic"}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"d", -3}}), ConfigError);
  const auto ito = ExperimentConfig::from_json(json{{"integral", "ito"}, {"H", 0.7}});
  EXPECT_THROW(trace_samples(ito, 2), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"gamma", 0.2}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ScalarDimensionAndRoundTrip) {
  const auto c = ExperimentConfig::from_json(json{{"d", 6}, {"H", 0.7}, {"P", {0, 0, 1}}, {"seed", 9}});
  EXPECT_EQ(c.d, std::vector<unsigned>{6});
  const auto again = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(again.to_json(), c.to_json());
  EXPECT_EQ(again.P, (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(again.seed, 9u);
}

TEST(TraceSamples, ReproducibleAcrossThreadsAndPrefixes) {
  ExperimentConfig c;
  c.H = 0.6;
  c.d = {3};
  c.n_paths = 40;
  c.integral = "riemann";
  c.fine_level = 6;
  c.coarse_level = 3;
  c.threads = 1;
  const auto one = trace_samples(c, 3);
  c.threads = 3;
  EXPECT_EQ(trace_samples(c, 3), one);
  c.n_paths = 20;
  const auto prefix = trace_samples(c, 3);
  EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), one.begin()));
  c.seed = 2;
  EXPECT_NE(trace_samples(c, 3), prefix);
}

TEST(TraceSamples, WordStatisticMatchesExactMoment) {
  ExperimentConfig c;
  c.H = 0.7;
  c.d = {2, 4};
  c.n_paths = 4000;
  const MomentReport report = mc_trace_moment(c);
  ASSERT_EQ(report.rows.size(), 2u);
  for (const auto& row : report.rows) {
    ASSERT_TRUE(row.exact.has_value());
    const double dd = row.d;
    EXPECT_NEAR(*row.exact, 2.0 + 1.0 / (dd * dd), 1e-12);
    EXPECT_NEAR(row.estimate, *row.exact, 5.0 * row.se);
  }
  const json j = to_json(report);
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["statistic"], "word");
}

TEST(TraceSamples, StandardErrorShrinksWithPaths) {
  ExperimentConfig c;
  c.d = {2};
  c.n_paths = 500;
  const double se_small = mc_trace_moment(c).rows[0].se;
  c.n_paths = 2000;
  const double se_large = mc_trace_moment(c).rows[0].se;
  EXPECT_NEAR(se_small / se_large, 2.0, 0.5);
}

TEST(TraceSamples, StratonovichFirstMoment) {
  ExperimentConfig c;
  c.H = 0.5;
  c.d = {8};
  c.P = {0, 0, 0, 1};
  c.Q = {1};
  c.integral = "strato";
  c.fine_level = 8;
  c.n_paths = 400;
  const Polynomial p = Polynomial::from_real(c.P), q = Polynomial::from_real(c.Q);
  EXPECT_NEAR(strato_limit_first_moment(p, q), 0.5, 1e-12);
  EXPECT_NEAR(strato_limit_first_moment(Polynomial{0.0, 1.0}, Polynomial{1.0}), 0.5, 1e-12);
  const auto row = mc_trace_moment(c).rows[0];
  EXPECT_NEAR(row.estimate, 0.5, 5.0 * row.se + 0.05);
}

TEST(Sweep, MonomialGapsAndSlope) {
  ExperimentConfig c;
  c.d = {2, 4, 8, 16};
  const SweepResult result = convergence_sweep(c);
  ASSERT_EQ(result.rows.size(), 5u);
  for (std::size_t k = 0; k < 4; ++k) {
    const double dd = c.d[k];
    EXPECT_NEAR(result.rows[k].gap, 1.0 / (dd * dd), 1e-12);
    EXPECT_NEAR(result.rows[k].target, 2.0, 1e-12);
  }
  const SweepRow& slope = result.rows.back();
  EXPECT_EQ(slope.d, "all");
  EXPECT_EQ(slope.statistic, "log_gap_slope");
  EXPECT_NEAR(slope.value, -2.0, 1e-9);
  EXPECT_EQ(result.sidecar["rows"].size(), 5u);
}

TEST(Sweep, YoungModeUsesExactRiemannMoment) {
  ExperimentConfig c;
  c.mode = "young";
  c.H = 0.7;
  c.d = {2, 4};
  c.r = 2;
  c.coarse_level = 3;
  const SweepResult result = convergence_sweep(c);
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_NEAR(result.rows[0].gap / result.rows[1].gap, 4.0, 1e-9);
  c.H = 0.4;
  EXPECT_THROW(convergence_sweep(c), ConfigError);
}

TEST(Sweep, RoughModeIsFlaggedConjectural) {
  ExperimentConfig c;
  c.mode = "rough";
  c.H = 0.4;
  c.d = {2};
  c.n_paths = 20;
  c.fine_level = 6;
  c.coarse_level = 3;
  const SweepResult result = convergence_sweep(c);
  for (const auto& row : result.rows) EXPECT_TRUE(row.conjecture);
  c.H = 0.6;
  EXPECT_THROW(convergence_sweep(c), ConfigError);
}

TEST(Sweep, CsvFormat) {
  std::vector<SweepRow> rows{{"monomial", "2", "exact_moment", 2.25, 2.0, 0.25, 0.0, false},
                             {"monomial", "all", "log_gap_slope", std::numeric_limits<double>::quiet_NaN(),
                              -2.0, 0.1, 0.0, true}};
  std::ostringstream os;
  write_csv(os, rows);
  EXPECT_EQ(os.str(),
            "mode,d,statistic,value,target,gap,se,conjecture\n"
            "monomial,2,exact_moment,2.25,2,0.25,0,0\n"
            "monomial,all,log_gap_slope,nan,-2,0.10000000000000001,0,1\n");
}

TEST(Helpers, LogLogSlopeAndMedian) {
  EXPECT_NEAR(log_log_slope({1, 2, 4}, {1, 0.25, 0.0625}), -2.0, 1e-12);
  EXPECT_TRUE(std::isnan(log_log_slope({1}, {1})));
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(Demo, ResidualMediansDecrease) {
  ExperimentConfig c;
  c.H = 0.5;
  c.d = {3};
  c.P = {0, 1};
  c.Q = {0, 1};
  c.levels = {6, 8, 10};
  c.n_paths = 10;
  const auto demo = ito_strato_demo(c);
  ASSERT_EQ(demo.size(), 3u);
  EXPECT_GT(demo[0].median, demo[1].median);
  EXPECT_GT(demo[1].median, demo[2].median);
  EXPECT_EQ(to_json(demo)[2]["residuals"].size(), 10u);
}
