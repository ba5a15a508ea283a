#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfbm/algebra.hpp"
#include "hfbm/fbm.hpp"

namespace hfbm {

/// Experiment parameters; JSON keys match the field names.
struct ExperimentConfig {
  double H = 0.5;
  std::optional<double> gamma;
  std::vector<unsigned> d{4};
  unsigned coarse_level = 4;
  unsigned fine_level = 10;
  std::vector<double> P{0.0, 1.0};
  std::vector<double> Q{1.0};
  unsigned r = 1;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  std::string out;
  /// Sweep mode: monomial, young, ito, strato or rough.
  std::string mode = "monomial";
  /// Monte-Carlo statistic: word, riemann, ito, strato, wong_zakai or rough.
  std::string integral = "word";
  /// Times of the point letters of the word statistic.
  std::vector<double> word{1.0, 1.0, 1.0, 1.0};
  std::vector<unsigned> levels{10, 12, 14};
  double tol = 1e-4;
  unsigned threads = 0;

  /// Rejects unknown keys and ill-typed values.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& file);
  nlohmann::json to_json() const;
  /// Throws ConfigError when the fields are inconsistent.
  void validate() const;
};

struct MomentRow {
  unsigned d = 0;
  std::optional<double> exact;
  double estimate = 0.0;
  double se = 0.0;
};

struct MomentReport {
  std::string statistic;
  std::size_t n_paths = 0;
  std::vector<MomentRow> rows;  // sorted by d
  nlohmann::json query;
};

/// Per-path values Re Tr_d(.) of the configured statistic at dimension d,
/// one per Monte-Carlo path in path-index order.
std::vector<double> trace_samples(const ExperimentConfig& config, unsigned d);

/// Monte-Carlo estimate of phi_d of the configured statistic for each d.
MomentReport mc_trace_moment(const ExperimentConfig& config);
nlohmann::json to_json(const MomentReport& report);

struct SweepRow {
  std::string mode;
  std::string d;  // dimension, or "all" for fitted statistics
  std::string statistic;
  double value = 0.0;
  double target = 0.0;
  double gap = 0.0;
  double se = 0.0;
  bool conjecture = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  nlohmann::json sidecar;
};

/// Gaps between finite-d moments and their d -> infinity targets, with the
/// least-squares slope of log|gap| against log d.
SweepResult convergence_sweep(const ExperimentConfig& config);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Slope of the least-squares line through (log x, log |y|); NaN with fewer
/// than two usable points.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Limit target (1/2) int_0^1 phi[(Id x phi x Id)(dP (x) Q + P (x) dQ)(X_u)] du
/// of the first Stratonovich moment in the Brownian case.
double strato_limit_first_moment(const Polynomial& p, const Polynomial& q);

struct DemoLevel {
  unsigned level = 0;
  double median = 0.0;
  std::vector<double> residuals;
};

/// Ito-Stratonovich residuals on paths sampled at the finest level and
/// restricted to each configured level.
std::vector<DemoLevel> ito_strato_demo(const ExperimentConfig& config);
nlohmann::json to_json(const std::vector<DemoLevel>& demo);

double median(std::vector<double> v);

}  // namespace hfbm
