// Command-line driver for sampling, exact moments, Monte Carlo and sweeps.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hfbm/error.hpp"
#include "hfbm/experiment.hpp"
#include "hfbm/hermitian.hpp"
#include "hfbm/levy_area.hpp"
#include "hfbm/moments.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/rng.hpp"
#include "hfbm/rough_integral.hpp"

namespace {

using nlohmann::json;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<double> hurst;
  std::optional<unsigned> dim;
  std::optional<std::size_t> n_paths;
  std::optional<std::string> mode;
  std::optional<std::string> integral;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads (default: HFBM_THREADS or 1)");
  cmd->add_option("--out", o.out, "output file");
  cmd->add_option("--H", o.hurst, "Hurst index");
  cmd->add_option("--d", o.dim, "matrix dimension (replaces the d list)");
  cmd->add_option("--n-paths", o.n_paths, "Monte-Carlo paths");
  cmd->add_option("--mode", o.mode, "sweep mode");
  cmd->add_option("--integral", o.integral, "Monte-Carlo statistic");
}

hfbm::ExperimentConfig resolve(const Overrides& o) {
  hfbm::ExperimentConfig c = o.config.empty() ? hfbm::ExperimentConfig{} : hfbm::ExperimentConfig::load(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (o.out) c.out = *o.out;
  if (o.hurst) c.H = *o.hurst;
  if (o.dim) c.d = {*o.dim};
  if (o.n_paths) c.n_paths = *o.n_paths;
  if (o.mode) c.mode = *o.mode;
  if (o.integral) c.integral = *o.integral;
  c.validate();
  return c;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(out);
  if (!os) throw hfbm::ConfigError("cannot open " + out);
  os << j.dump(2) << '\n';
}

json matrix_json(const hfbm::Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

int cmd_sample(const hfbm::ExperimentConfig& c) {
  if (c.out.empty()) throw hfbm::ConfigError("sample needs --out");
  const hfbm::HurstIndex H(c.H);
  const hfbm::FbmSampler sampler(H, hfbm::DyadicGrid(c.fine_level));
  const auto bundle = hfbm::ScalarPathBundle::sample(sampler, c.d.front(), c.seed, hfbm::resolve_threads(c.threads));
  const auto path = hfbm::assemble_hfbm(bundle);
  hfbm::write_path(c.out, path,
                   {static_cast<std::uint32_t>(c.d.front()), c.fine_level, c.H, c.seed});
  std::cerr << "wrote " << path.size() << " matrices of size " << c.d.front() << " to " << c.out << '\n';
  return 0;
}

int cmd_moment_exact(const hfbm::ExperimentConfig& c) {
  const hfbm::HurstIndex H(c.H);
  std::vector<double> sums;
  json query;
  if (c.integral == "word") {
    std::vector<hfbm::Letter> letters;
    for (double t : c.word) letters.push_back(hfbm::Letter::point(t));
    sums = hfbm::genus_sums(hfbm::MomentQuery{letters, H});
    query = {{"kind", "word"}, {"times", c.word}};
  } else if (c.integral == "riemann") {
    sums = hfbm::riemann_integrand_genus_sums(hfbm::Polynomial::from_real(c.P), hfbm::Polynomial::from_real(c.Q),
                                              c.r, c.coarse_level, H, hfbm::resolve_threads(c.threads));
    query = {{"kind", "riemann_integrand"}, {"P", c.P}, {"Q", c.Q}, {"r", c.r}, {"n", c.coarse_level}};
  } else {
    throw hfbm::ConfigError("moment-exact supports integral = word or riemann");
  }
  query["H"] = c.H;
  json rows = json::array();
  for (unsigned d : c.d) rows.push_back({{"d", d}, {"value", hfbm::combine_genus_sums(sums, d)}});
  emit({{"query", query}, {"genus_sums", sums}, {"limit", sums.front()}, {"rows", rows}}, c.out);
  return 0;
}

int cmd_moment_mc(const hfbm::ExperimentConfig& c) {
  emit(hfbm::to_json(hfbm::mc_trace_moment(c)), c.out);
  return 0;
}

int cmd_integrate(const hfbm::ExperimentConfig& c, const std::string& cached) {
  const hfbm::Polynomial p = hfbm::Polynomial::from_real(c.P);
  const hfbm::Polynomial q = hfbm::Polynomial::from_real(c.Q);
  const auto mode = c.integral == "ito" ? hfbm::AreaMode::LeftPoint : hfbm::AreaMode::Trapezoid;
  std::shared_ptr<const hfbm::LevyArea2> area;
  double hurst = c.H;
  if (!cached.empty()) {
    hfbm::PathHeader header;
    const auto path = hfbm::read_path(cached, &header);
    hurst = header.hurst;
    area = std::make_shared<const hfbm::LevyArea2>(hfbm::LevyArea2::lift(path, c.coarse_level, mode));
  } else {
    const hfbm::FbmSampler sampler(hfbm::HurstIndex(c.H), hfbm::DyadicGrid(c.fine_level));
    const auto bundle = hfbm::ScalarPathBundle::sample(sampler, c.d.front(), c.seed, hfbm::resolve_threads(c.threads));
    area = std::make_shared<const hfbm::LevyArea2>(hfbm::LevyArea2::lift(bundle, c.coarse_level, mode));
  }
  hfbm::HurstIndex(hurst).require_rough();
  const hfbm::RoughDriver driver(area);
  const auto w = hfbm::polynomial_biprocess(p, q, area->path(), c.coarse_level);
  hfbm::IntegralReport report;
  bool converged = true;
  try {
    report = hfbm::rough_integrate(w, driver, 0.0, 1.0, c.tol);
  } catch (const hfbm::NonConvergence& e) {
    report = e.report();
    converged = false;
  }
  emit({{"converged", converged}, {"stable_level", report.stable_level}, {"levels", report.levels},
        {"deltas", report.deltas}, {"area_mode", hfbm::to_string(mode)}, {"H", hurst},
        {"value", matrix_json(report.value)}},
       c.out);
  return converged ? 0 : 3;
}

int cmd_ito_strato(const hfbm::ExperimentConfig& c) {
  emit({{"d", c.d.front()}, {"P", c.P}, {"Q", c.Q}, {"levels", hfbm::to_json(hfbm::ito_strato_demo(c))}}, c.out);
  return 0;
}

int cmd_sweep(const hfbm::ExperimentConfig& c) {
  const auto result = hfbm::convergence_sweep(c);
  if (c.out.empty()) {
    hfbm::write_csv(std::cout, result.rows);
    return 0;
  }
  std::ofstream os(c.out);
  if (!os) throw hfbm::ConfigError("cannot open " + c.out);
  hfbm::write_csv(os, result.rows);
  std::ofstream side(c.out + ".json");
  side << result.sidecar.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian fractional Brownian motion toolkit"};
  app.require_subcommand(1);

  Overrides o;
  std::string cached;
  auto* sample = app.add_subcommand("sample", "sample one path and write the binary cache");
  auto* exact = app.add_subcommand("moment-exact", "exact genus-expanded moments");
  auto* mc = app.add_subcommand("moment-mc", "Monte-Carlo trace moments");
  auto* integrate = app.add_subcommand("integrate", "rough integral of P(X) dX Q(X) over [0, 1]");
  auto* ito_strato = app.add_subcommand("ito-strato", "Ito-Stratonovich conversion residuals");
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over d, CSV output");
  for (auto* cmd : {sample, exact, mc, integrate, ito_strato, sweep}) add_common(cmd, o);
  integrate->add_option("--path", cached, "cached path file from `sample`")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = resolve(o);
    if (sample->parsed()) return cmd_sample(config);
    if (exact->parsed()) return cmd_moment_exact(config);
    if (mc->parsed()) return cmd_moment_mc(config);
    if (integrate->parsed()) return cmd_integrate(config, cached);
    if (ito_strato->parsed()) return cmd_ito_strato(config);
    if (sweep->parsed()) return cmd_sweep(config);
  } catch (const hfbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
