#include "hfbm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "hfbm/error.hpp"
#include "hfbm/hermitian.hpp"
#include "hfbm/levy_area.hpp"
#include "hfbm/moments.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/rng.hpp"
#include "hfbm/rough_integral.hpp"

namespace hfbm {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kModes{"monomial", "young", "ito", "strato", "rough"};
const std::set<std::string> kIntegrals{"word", "riemann", "ito", "strato", "wong_zakai", "rough"};

template <class T>
void read(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<Letter> word_letters(const ExperimentConfig& c) {
  std::vector<Letter> letters;
  for (double t : c.word) letters.push_back(Letter::point(t));
  return letters;
}

json letters_json(const std::vector<Letter>& letters) {
  json out = json::array();
  for (const auto& l : letters) {
    if (l.kind == Letter::Kind::Point) {
      out.push_back({{"kind", "point"}, {"t", l.t}});
    } else {
      out.push_back({{"kind", "increment"}, {"s", l.s}, {"t", l.t}});
    }
  }
  return out;
}

json query_json(const ExperimentConfig& c) {
  if (c.integral == "word") {
    return {{"kind", "word"}, {"H", c.H}, {"letters", letters_json(word_letters(c))}};
  }
  return {{"kind", "riemann_integrand"}, {"H", c.H}, {"P", c.P}, {"Q", c.Q}, {"r", c.r},
          {"n", c.coarse_level}};
}

Matrix matrix_power(const Matrix& m, unsigned r) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (unsigned k = 0; k < r; ++k) out = out * m;
  return out;
}

// Level at which paths are sampled for a statistic.
unsigned sample_level(const ExperimentConfig& c) {
  if (c.integral == "word") return dyadic_level_of(c.word);
  return c.fine_level;
}

double path_statistic(const ExperimentConfig& c, const FbmSampler& sampler, unsigned d,
                      std::uint64_t seed) {
  const HurstIndex H(c.H);
  const Polynomial p = Polynomial::from_real(c.P);
  const Polynomial q = Polynomial::from_real(c.Q);
  const auto bundle = ScalarPathBundle::sample(sampler, d, seed);
  Matrix z;
  if (c.integral == "rough") {
    const RoughDriver driver(bundle, c.coarse_level, AreaMode::Trapezoid);
    const auto w = polynomial_biprocess(p, q, driver.area().path(), c.coarse_level);
    z = corrected_riemann_sum(w, driver, c.coarse_level, 0.0, 1.0);
    return trace_normalized(matrix_power(z, c.r)).real();
  }
  const HermitianPath x = assemble_hfbm(bundle);
  if (c.integral == "word") {
    z = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (double t : c.word) z = z * x.at(t);
    return trace_normalized(z).real();
  }
  if (c.integral == "riemann") {
    z = left_riemann_sum(p, q, x.restrict_to(c.coarse_level));
  } else if (c.integral == "ito") {
    z = ito_integral(p, q, x, H);
  } else if (c.integral == "strato") {
    z = strato_integral(p, q, x, H);
  } else {
    z = wong_zakai_integral(p, q, x, c.coarse_level);
  }
  return trace_normalized(matrix_power(z, c.r)).real();
}

std::pair<double, double> mean_and_se(const std::vector<double>& v) {
  KahanSum sum;
  for (double x : v) sum.add(x);
  const double n = static_cast<double>(v.size());
  const double mean = sum.value() / n;
  if (v.size() < 2) return {mean, kNaN};
  KahanSum sq;
  for (double x : v) sq.add((x - mean) * (x - mean));
  return {mean, std::sqrt(sq.value() / (n - 1.0) / n)};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<unsigned> sorted_dims(const ExperimentConfig& c) {
  std::vector<unsigned> dims = c.d;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  return dims;
}

void add_slope_row(SweepResult& result, const std::string& mode, bool conjecture) {
  std::vector<double> xs, ys;
  for (const auto& row : result.rows) {
    xs.push_back(std::stod(row.d));
    ys.push_back(row.gap);
  }
  const double slope = log_log_slope(xs, ys);
  result.rows.push_back({mode, "all", "log_gap_slope", slope, -2.0, slope + 2.0, 0.0, conjecture});
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"H", "gamma", "d", "coarse_level", "fine_level", "P",
                                           "Q", "r", "n_paths", "seed", "out", "mode", "integral",
                                           "word", "levels", "tol", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  read(j, "H", c.H);
  if (j.contains("gamma")) {
    double g = 0.0;
    read(j, "gamma", g);
    c.gamma = g;
  }
  if (j.contains("d") && j.at("d").is_number_integer()) {
    if (j.at("d").get<long long>() < 1) throw ConfigError("config key 'd': dimensions must be positive");
    c.d = {j.at("d").get<unsigned>()};
  } else {
    read(j, "d", c.d);
  }
  read(j, "coarse_level", c.coarse_level);
  read(j, "fine_level", c.fine_level);
  read(j, "P", c.P);
  read(j, "Q", c.Q);
  read(j, "r", c.r);
  read(j, "n_paths", c.n_paths);
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  read(j, "mode", c.mode);
  read(j, "integral", c.integral);
  read(j, "word", c.word);
  read(j, "levels", c.levels);
  read(j, "tol", c.tol);
  read(j, "threads", c.threads);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open config file " + file);
  try {
    return from_json(json::parse(is));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + file + ": " + e.what());
  }
}

json ExperimentConfig::to_json() const {
  json j{{"H", H},         {"d", d},         {"coarse_level", coarse_level},
         {"fine_level", fine_level},         {"P", P},
         {"Q", Q},         {"r", r},         {"n_paths", n_paths},
         {"seed", seed},   {"out", out},     {"mode", mode},
         {"integral", integral},             {"word", word},
         {"levels", levels},                 {"tol", tol},
         {"threads", threads}};
  if (gamma) j["gamma"] = *gamma;
  return j;
}

void ExperimentConfig::validate() const {
  if (!(H > 0.0 && H < 1.0)) throw ConfigError("H must lie in (0, 1)");
  if (gamma && !(*gamma > 1.0 / 3.0 && *gamma < H)) throw ConfigError("gamma must lie in (1/3, H)");
  if (d.empty()) throw ConfigError("d must list at least one dimension");
  for (unsigned v : d)
    if (v == 0) throw ConfigError("dimensions must be positive");
  if (n_paths == 0) throw ConfigError("n_paths must be at least 1");
  if (fine_level > DyadicGrid::kMaxLevel) throw ConfigError("fine_level too large");
  if (coarse_level > fine_level) throw ConfigError("coarse_level must not exceed fine_level");
  if (!kModes.contains(mode)) throw ConfigError("unknown mode '" + mode + "'");
  if (!kIntegrals.contains(integral)) throw ConfigError("unknown integral '" + integral + "'");
  if (r == 0) throw ConfigError("r must be positive");
  if (levels.empty()) throw ConfigError("levels must not be empty");
  for (unsigned l : levels)
    if (l > DyadicGrid::kMaxLevel) throw ConfigError("level too large");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  for (double t : word)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("word times must lie in [0, 1]");
}

std::vector<double> trace_samples(const ExperimentConfig& c, unsigned d) {
  c.validate();
  const HurstIndex H(c.H);
  if ((c.integral == "ito" || c.integral == "strato") && !H.is_brownian()) {
    throw ConfigError("Ito and Stratonovich statistics require H = 0.5");
  }
  if (c.integral == "word" && c.word.empty()) throw ConfigError("word statistic needs word times");
  const FbmSampler sampler(H, DyadicGrid(sample_level(c)));
  std::vector<double> out(c.n_paths);
  parallel_for(c.n_paths, resolve_threads(c.threads), [&](std::size_t k) {
    out[k] = path_statistic(c, sampler, d, sample_seed(c.seed, k));
  });
  return out;
}

MomentReport mc_trace_moment(const ExperimentConfig& c) {
  c.validate();
  MomentReport report;
  report.statistic = c.integral;
  report.n_paths = c.n_paths;
  report.query = query_json(c);
  const HurstIndex H(c.H);
  std::optional<std::vector<double>> sums;
  try {
    if (c.integral == "word") {
      sums = genus_sums(MomentQuery{word_letters(c), H});
    } else if (c.integral == "riemann") {
      sums = riemann_integrand_genus_sums(Polynomial::from_real(c.P), Polynomial::from_real(c.Q), c.r,
                                          c.coarse_level, H, resolve_threads(c.threads));
    }
  } catch (const DomainError&) {
    sums.reset();  // exact engine guard exceeded; report the estimate only
  }
  for (unsigned d : sorted_dims(c)) {
    const auto [mean, se] = mean_and_se(trace_samples(c, d));
    MomentRow row{d, std::nullopt, mean, se};
    if (sums) row.exact = combine_genus_sums(*sums, d);
    report.rows.push_back(row);
  }
  return report;
}

json to_json(const MomentReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"d", row.d}, {"estimate", row.estimate}, {"se", row.se}};
    r["exact"] = row.exact ? json(*row.exact) : json(nullptr);
    rows.push_back(r);
  }
  return {{"statistic", report.statistic}, {"n_paths", report.n_paths}, {"query", report.query},
          {"rows", rows}};
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    if (x[k] > 0.0 && std::isfinite(y[k]) && y[k] != 0.0) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(std::abs(y[k])));
    }
  }
  if (lx.size() < 2) return kNaN;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxx == 0.0 ? kNaN : sxy / sxx;
}

double strato_limit_first_moment(const Polynomial& p, const Polynomial& q) {
  if (!p.has_real_coefficients() || !q.has_real_coefficients()) {
    throw DomainError("strato_limit_first_moment needs real coefficients");
  }
  const HurstIndex brownian(0.5);
  // phi(X_1^k), non-crossing pairings of k copies of X_1.
  auto moment = [&](unsigned k) {
    return nc_moment(MomentQuery{std::vector<Letter>(k, Letter::point(1.0)), brownian});
  };
  // phi(X_u^a) phi(X_u^b) = phi(X_1^a) phi(X_1^b) u^{(a+b)/2}, integrated over [0, 1].
  auto term = [&](unsigned a, unsigned b) {
    return moment(a) * moment(b) / (0.5 * static_cast<double>(a + b) + 1.0);
  };
  const auto& pa = p.coeffs();
  const auto& qb = q.coeffs();
  double total = 0.0;
  for (unsigned m = 1; m < pa.size(); ++m)
    for (unsigned i = 0; i < m; ++i)
      for (unsigned b = 0; b < qb.size(); ++b) {
        // X^i (x) X^{m-1-i} (x) X^b -> phi(X^{m-1-i}) phi(X^{i+b})
        total += pa[m].real() * qb[b].real() * term(m - 1 - i, i + b);
      }
  for (unsigned a = 0; a < pa.size(); ++a)
    for (unsigned m = 1; m < qb.size(); ++m)
      for (unsigned i = 0; i < m; ++i) {
        // X^a (x) X^i (x) X^{m-1-i} -> phi(X^i) phi(X^{a+m-1-i})
        total += pa[a].real() * qb[m].real() * term(i, a + m - 1 - i);
      }
  return 0.5 * total;
}

SweepResult convergence_sweep(const ExperimentConfig& c) {
  c.validate();
  const HurstIndex H(c.H);
  const Polynomial p = Polynomial::from_real(c.P);
  const Polynomial q = Polynomial::from_real(c.Q);
  const unsigned threads = resolve_threads(c.threads);
  SweepResult result;
  json queries = json::array();
  const auto dims = sorted_dims(c);

  if (c.mode == "monomial") {
    const MomentQuery query{word_letters(c), H};
    const auto sums = genus_sums(query);
    for (unsigned d : dims) {
      const double value = combine_genus_sums(sums, d);
      result.rows.push_back({c.mode, std::to_string(d), "exact_moment", value, sums.front(),
                             value - sums.front(), 0.0, false});
    }
    queries.push_back({{"kind", "word"}, {"H", c.H}, {"letters", letters_json(query.letters)}});
    add_slope_row(result, c.mode, false);
  } else if (c.mode == "young") {
    if (!(c.H > 0.5)) throw ConfigError("young mode requires H > 1/2");
    const auto sums = riemann_integrand_genus_sums(p, q, c.r, c.coarse_level, H, threads);
    for (unsigned d : dims) {
      const double value = combine_genus_sums(sums, d);
      result.rows.push_back({c.mode, std::to_string(d), "riemann_exact", value, sums.front(),
                             value - sums.front(), 0.0, false});
    }
    queries.push_back({{"kind", "riemann_integrand"}, {"H", c.H}, {"P", c.P}, {"Q", c.Q},
                       {"r", c.r}, {"n", c.coarse_level}});
    add_slope_row(result, c.mode, false);
  } else {
    const bool conjecture = c.mode == "rough";
    if (c.mode == "rough") {
      if (!(c.H > 1.0 / 3.0 && c.H < 0.5)) throw ConfigError("rough mode requires 1/3 < H < 1/2");
    } else if (!H.is_brownian()) {
      throw ConfigError(c.mode + " mode requires H = 0.5");
    }
    double target = kNaN;
    if (c.mode == "strato") {
      if (c.r != 1) throw ConfigError("strato mode supports r = 1 only");
      target = strato_limit_first_moment(p, q);
      queries.push_back({{"kind", "strato_limit_first_moment"}, {"P", c.P}, {"Q", c.Q}});
    } else {
      try {
        target = riemann_integrand_moment(p, q, c.r, c.coarse_level, H, std::nullopt, threads);
        queries.push_back({{"kind", "riemann_integrand"}, {"H", c.H}, {"P", c.P}, {"Q", c.Q},
                           {"r", c.r}, {"n", c.coarse_level}});
      } catch (const DomainError&) {
        target = kNaN;
      }
    }
    ExperimentConfig mc = c;
    mc.integral = c.mode;
    for (unsigned d : dims) {
      const auto [mean, se] = mean_and_se(trace_samples(mc, d));
      result.rows.push_back({c.mode, std::to_string(d), "mc_" + c.mode, mean, target, mean - target,
                             se, conjecture});
    }
    add_slope_row(result, c.mode, conjecture);
  }

  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"mode", row.mode}, {"d", row.d}, {"statistic", row.statistic},
                    {"value", row.value}, {"target", row.target}, {"gap", row.gap}, {"se", row.se},
                    {"conjecture", row.conjecture}});
  }
  result.sidecar = {{"config", c.to_json()}, {"queries", queries}, {"rows", rows}};
  return result;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "mode,d,statistic,value,target,gap,se,conjecture\n";
  for (const auto& row : rows) {
    os << row.mode << ',' << row.d << ',' << row.statistic << ',' << format_double(row.value) << ','
       << format_double(row.target) << ',' << format_double(row.gap) << ',' << format_double(row.se)
       << ',' << (row.conjecture ? 1 : 0) << '\n';
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<DemoLevel> ito_strato_demo(const ExperimentConfig& c) {
  c.validate();
  const HurstIndex H(c.H);
  H.require_brownian();
  std::vector<unsigned> levels = c.levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const unsigned top = levels.back();
  const FbmSampler sampler(H, DyadicGrid(top));
  const Polynomial p = Polynomial::from_real(c.P);
  const Polynomial q = Polynomial::from_real(c.Q);
  const unsigned d = c.d.front();

  std::vector<std::vector<double>> per_path(c.n_paths);
  parallel_for(c.n_paths, resolve_threads(c.threads), [&](std::size_t k) {
    const HermitianPath x = assemble_hfbm(ScalarPathBundle::sample(sampler, d, sample_seed(c.seed, k)));
    for (unsigned level : levels) {
      per_path[k].push_back(ito_strato_check(p, q, level == top ? x : x.restrict_to(level), H));
    }
  });

  std::vector<DemoLevel> out;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    DemoLevel row;
    row.level = levels[l];
    for (const auto& residuals : per_path) row.residuals.push_back(residuals[l]);
    row.median = median(row.residuals);
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const std::vector<DemoLevel>& demo) {
  json out = json::array();
  for (const auto& row : demo) {
    out.push_back({{"level", row.level}, {"median_residual", row.median}, {"residuals", row.residuals}});
  }
  return out;
}

}  // namespace hfbm
