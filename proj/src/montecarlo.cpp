#include "hyperflat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hyperflat/closed_forms.hpp"
#include "hyperflat/inference.hpp"

namespace hyperflat::mc {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate(const ExperimentConfig& c) {
  if (c.d < 1) throw std::invalid_argument("config: d >= 1 required");
  if (!(c.lambda > 0.0)) throw std::invalid_argument("config: lambda > 0");
  if (!(c.r > 0.0)) throw std::invalid_argument("config: r > 0");
  if (c.replicates < 1) throw std::invalid_argument("config: replicates >= 1");
  if (c.threads < 1) throw std::invalid_argument("config: threads >= 1");
  if (c.law != "isotropic")
    throw std::invalid_argument("config: unknown orientation law '" + c.law +
                                "'");
  if (c.ks.empty()) throw std::invalid_argument("config: empty k list");
  for (int k : c.ks)
    if (k < 0 || k > c.d - 1)
      throw std::invalid_argument("config: k outside [0, d-1]");
  if (c.centering != "analytic" && c.centering != "plug_in")
    throw std::invalid_argument("config: unknown centering '" + c.centering +
                                "'");
}

double z_prefactor(int d, int k, double lambda, double r) {
  return std::exp(closed::log_factorial(d - k - 1) -
                  (d - k - 0.5) * std::log(2.0 * lambda * r));
}

std::string tagged(const char* base, int k) {
  return std::string(base) + "_" + std::to_string(k);
}

}  // namespace

SampleStatistic make_statistic(const ExperimentConfig& config) {
  using Rows = std::vector<std::pair<std::string, double>>;
  const auto ks = config.ks;

  if (config.statistic == "psi" || config.statistic == "zeta" ||
      config.statistic == "raw_both") {
    const bool want_psi = config.statistic != "zeta";
    const bool want_zeta = config.statistic != "psi";
    return [ks, want_psi, want_zeta](
               const sampling::HyperplaneProcessSample& s) {
      Rows out;
      for (int k : ks) {
        const auto sum = stats::k_flat_summary(s, k);
        if (want_psi)
          out.emplace_back(tagged("psi", k), static_cast<double>(sum.count));
        if (want_zeta) out.emplace_back(tagged("zeta", k), sum.volume);
      }
      return out;
    };
  }

  if (config.statistic == "z_chi" || config.statistic == "z_nu" ||
      config.statistic == "z_both") {
    const bool want_chi = config.statistic != "z_nu";
    const bool want_nu = config.statistic != "z_chi";
    return [ks, want_chi, want_nu](
               const sampling::HyperplaneProcessSample& s) {
      if (!s.isotropic)
        throw std::invalid_argument(
            "analytic centering needs an isotropic law");
      Rows out;
      for (int k : ks) {
        const auto sum = stats::k_flat_summary(s, k);
        const double pref = z_prefactor(s.d, k, s.lambda, s.r);
        if (want_chi) {
          const double mean = closed::mean_psi_k(s.d, k, s.lambda, s.r);
          out.emplace_back(tagged("z_chi", k),
                           pref * (static_cast<double>(sum.count) - mean));
        }
        if (want_nu) {
          const double mean = closed::mean_zeta_k(s.d, k, s.lambda, s.r);
          out.emplace_back(tagged("z_nu", k),
                           pref * std::pow(s.r, -k) * (sum.volume - mean));
        }
      }
      return out;
    };
  }

  if (config.statistic == "intensity") {
    return [ks](const sampling::HyperplaneProcessSample& s) {
      Rows out;
      for (int k : ks) {
        const auto e = stats::intensity_estimators(s, k);
        out.emplace_back(tagged("lambda_hat", k), e.count_based);
        out.emplace_back(tagged("lambda_tilde", k), e.volume_based);
      }
      return out;
    };
  }

  if (config.statistic == "marked_count") {
    const double a = config.angle_a, b = config.angle_b;
    return [a, b](const sampling::HyperplaneProcessSample& s) {
      return Rows{{"marked_count", stats::planar_marked_sum(s, a, b)}};
    };
  }

  if (config.statistic == "planar_z") {
    const double a = config.angle_a, b = config.angle_b;
    return [a, b](const sampling::HyperplaneProcessSample& s) {
      return Rows{{"planar_z", stats::planar_random_normalized_Z(s, a, b)}};
    };
  }

  throw std::invalid_argument("config: unknown statistic '" +
                              config.statistic + "'");
}

std::vector<ReplicateRow> replicate_with(const ExperimentConfig& config,
                                         const SampleStatistic& statistic) {
  validate(config);
  const auto law = sampling::OrientationLaw::isotropic(config.d);
  const std::size_t n = static_cast<std::size_t>(config.replicates);
  std::vector<std::vector<ReplicateRow>> slots(n);

  auto run_block = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const rng::SeedContract sc{config.master_seed, i};
      try {
        const auto sample =
            sampling::sample_hyperplane_process(config.lambda, config.r, law,
                                                sc);
        for (auto& [name, value] : statistic(sample))
          slots[i].push_back({i, name, value, true, ""});
      } catch (const std::exception& e) {
        slots[i].push_back({i, "error", kNan, false, e.what()});
      }
    }
  };

  const int nthreads =
      std::min<int>(config.threads, static_cast<int>(n));
  if (nthreads <= 1) {
    run_block(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(run_block, b, e);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<ReplicateRow> rows;
  std::size_t failures = 0;
  for (auto& slot : slots) {
    for (auto& row : slot) {
      if (!row.ok) ++failures;
      rows.push_back(std::move(row));
    }
  }
  if (static_cast<double>(failures) >
      0.001 * static_cast<double>(config.replicates))
    throw std::runtime_error(
        "replicate batch failed: " + std::to_string(failures) + " of " +
        std::to_string(config.replicates) +
        " replicates errored (more than 0.1%)");
  return rows;
}

std::vector<ReplicateRow> replicate(const ExperimentConfig& config) {
  validate(config);
  const bool z_stat = config.statistic == "z_chi" ||
                      config.statistic == "z_nu" ||
                      config.statistic == "z_both";
  if (!z_stat || config.centering == "analytic")
    return replicate_with(config, make_statistic(config));

  // Plug-in centering: raw pass first, then center each series at its own
  // empirical mean before applying the standardizing prefactor.
  ExperimentConfig raw = config;
  raw.statistic = config.statistic == "z_chi"  ? "psi"
                  : config.statistic == "z_nu" ? "zeta"
                                               : "raw_both";
  auto rows = replicate_with(raw, make_statistic(raw));

  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& row : rows)
    if (row.ok) {
      auto& [sum, count] = acc[row.name];
      sum += row.value;
      ++count;
    }
  for (auto& row : rows) {
    if (!row.ok) continue;
    const auto& [sum, count] = acc[row.name];
    const double mean = sum / static_cast<double>(count);
    const bool volume = row.name.rfind("zeta_", 0) == 0;
    const int k = std::stoi(row.name.substr(row.name.rfind('_') + 1));
    double z = z_prefactor(config.d, k, config.lambda, config.r) *
               (row.value - mean);
    if (volume) z *= std::pow(config.r, -k);
    row.name = tagged(volume ? "z_nu" : "z_chi", k);
    row.value = z;
  }
  return rows;
}

std::vector<double> series(const std::vector<ReplicateRow>& rows,
                           const std::string& name) {
  std::vector<double> out;
  for (const auto& row : rows)
    if (row.ok && row.name == name) out.push_back(row.value);
  return out;
}

ExperimentReport summarize(const std::vector<ReplicateRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_name;
  std::size_t failures = 0;
  std::size_t max_stream = 0;
  for (const auto& row : rows) {
    max_stream = std::max<std::size_t>(max_stream, row.stream + 1);
    if (!row.ok) {
      ++failures;
      continue;
    }
    if (by_name.find(row.name) == by_name.end()) order.push_back(row.name);
    by_name[row.name].push_back(row.value);
  }

  ExperimentReport report;
  report.failures = failures;
  report.replicates = max_stream;
  for (const auto& name : order) {
    const auto& v = by_name[name];
    StatisticSummary s;
    s.name = name;
    s.n = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    double m2 = 0.0, m3 = 0.0;
    for (double x : v) {
      const double c = x - s.mean;
      m2 += c * c;
      m3 += c * c * c;
    }
    const double n = static_cast<double>(v.size());
    s.variance = v.size() > 1 ? m2 / (n - 1.0) : 0.0;
    const double sd = std::sqrt(m2 / n);
    s.skewness = sd > 0.0 ? (m3 / n) / (sd * sd * sd) : 0.0;
    if (v.size() >= 20 && s.variance > 0.0) {
      std::vector<double> std_vals(v.size());
      const double sdev = std::sqrt(s.variance);
      for (std::size_t i = 0; i < v.size(); ++i)
        std_vals[i] = (v[i] - s.mean) / sdev;
      const auto ks = ks_normal(std::move(std_vals));
      s.ks_statistic = ks.statistic;
      s.ks_p_value = ks.p_value;
    } else {
      s.ks_statistic = kNan;
      s.ks_p_value = kNan;
    }
    report.summaries.push_back(std::move(s));
  }
  return report;
}

std::string config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j{{"d", c.d},
                           {"ks", c.ks},
                           {"lambda", c.lambda},
                           {"r", c.r},
                           {"law", c.law},
                           {"replicates", c.replicates},
                           {"master_seed", c.master_seed},
                           {"statistic", c.statistic},
                           {"centering", c.centering},
                           {"angle_a", c.angle_a},
                           {"angle_b", c.angle_b},
                           {"threads", c.threads}};
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) {
      try {
        j.at(key).get_to(field);
      } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("config: bad value for '") +
                                    key + "'");
      }
    }
  };
  get("d", c.d);
  get("ks", c.ks);
  get("lambda", c.lambda);
  get("r", c.r);
  get("law", c.law);
  get("replicates", c.replicates);
  get("master_seed", c.master_seed);
  get("statistic", c.statistic);
  get("centering", c.centering);
  get("angle_a", c.angle_a);
  get("angle_b", c.angle_b);
  get("threads", c.threads);
  validate(c);
  return c;
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json out;
  out["replicates"] = report.replicates;
  out["failures"] = report.failures;
  out["summaries"] = nlohmann::ordered_json::array();
  for (const auto& s : report.summaries) {
    nlohmann::ordered_json e{{"name", s.name},
                             {"n", s.n},
                             {"mean", s.mean},
                             {"variance", s.variance},
                             {"skewness", s.skewness}};
    if (std::isfinite(s.ks_statistic)) {
      e["ks_statistic"] = s.ks_statistic;
      e["ks_p_value"] = s.ks_p_value;
    }
    out["summaries"].push_back(std::move(e));
  }
  return out.dump(2) + "\n";
}

double kolmogorov_cdf(double t) {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += (j % 2 == 1) ? term : -term;
  }
  return 1.0 - 2.0 * sum;
}

KsResult ks_normal(std::vector<double> values) {
  if (values.size() < 20)
    throw std::invalid_argument("ks_normal: at least 20 values required");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = infer::normal_cdf(values[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  KsResult out;
  out.statistic = d;
  out.p_value = std::clamp(1.0 - kolmogorov_cdf(std::sqrt(n) * d), 0.0, 1.0);
  return out;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("ks_critical_value: n > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ks_critical_value: alpha in (0, 1)");
  double lo = 1e-3, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - kolmogorov_cdf(mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

MeanSe estimate_sigma_jd(int d, int j, const stats::MarkPredicate& predicate,
                         long long draws, rng::SeedContract seed) {
  if (d < 1 || j < 1 || j > d)
    throw std::invalid_argument("estimate_sigma_jd: need 1 <= j <= d");
  if (draws < 1) throw std::invalid_argument("estimate_sigma_jd: draws >= 1");

  rng::Rng rng(seed);
  const auto law = sampling::OrientationLaw::isotropic(d);
  const int total = 2 * d - j;
  geom::FootSolver solver(d, d);
  std::vector<geom::Hyperplane> planes;
  std::vector<int> idx1(d), idx2(d);
  for (int i = 0; i < d; ++i) {
    idx1[i] = i;
    idx2[i] = total - d + i;
  }
  std::vector<geom::UnitDirection> dirs;

  auto eval_f = [&](const std::vector<int>& idx) {
    const auto q = solver.foot_norm2(planes, idx.data());
    if (!q || *q > 1.0) return false;
    dirs.clear();
    for (int i : idx) dirs.push_back(planes[static_cast<std::size_t>(i)].v);
    std::sort(dirs.begin(), dirs.end());
    return predicate(dirs);
  };

  long long hits = 0;
  for (long long it = 0; it < draws; ++it) {
    planes.clear();
    for (int i = 0; i < total; ++i)
      planes.push_back({rng.uniform(-1.0, 1.0), law.sample(rng)});
    if (eval_f(idx1) && eval_f(idx2)) ++hits;
  }
  MeanSe out;
  const double n = static_cast<double>(draws);
  out.mean = static_cast<double>(hits) / n;
  out.se = std::sqrt(std::max(0.0, out.mean * (1.0 - out.mean)) / n);
  return out;
}

KernelCheck verify_g_kernel(int d, int k, KernelKind kind,
                            const std::vector<double>& p_grid,
                            long long draws, rng::SeedContract seed) {
  if (k < 0 || k > d - 1)
    throw std::invalid_argument("verify_g_kernel: need 0 <= k <= d-1");
  if (draws < 2) throw std::invalid_argument("verify_g_kernel: draws >= 2");

  rng::Rng rng(seed);
  const auto law = sampling::OrientationLaw::isotropic(d);
  const int m = d - k;
  geom::FootSolver solver(d, m);
  const double kk = geom::unit_ball_volume(k);

  // Fixed direction e_d for the conditioning hyperplane; valid by isotropy.
  geom::Vec ed(static_cast<std::size_t>(d), 0.0);
  ed.back() = 1.0;
  const geom::UnitDirection fixed_dir{ed};

  std::vector<geom::Hyperplane> planes;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;

  KernelCheck out;
  for (double p : p_grid) {
    if (std::abs(p) > 1.0)
      throw std::invalid_argument("verify_g_kernel: grid point outside [-1,1]");
    double sum = 0.0, sumsq = 0.0;
    for (long long it = 0; it < draws; ++it) {
      planes.clear();
      planes.push_back({p, fixed_dir});
      for (int i = 1; i < m; ++i)
        planes.push_back({rng.uniform(-1.0, 1.0), law.sample(rng)});
      double value = 0.0;
      const auto q = solver.foot_norm2(planes, idx.data());
      if (q && *q <= 1.0)
        value = (kind == KernelKind::count || k == 0)
                    ? 1.0
                    : kk * std::pow(1.0 - *q, 0.5 * k);
      sum += value;
      sumsq += value * value;
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    const double truth = (kind == KernelKind::count)
                             ? closed::g_chi_kernel(d, k, p, 1.0)
                             : closed::g_nu_kernel(d, k, p, 1.0);
    const double dev = std::abs(mean - truth);
    const double env = 3.0 * se + 1e-9;
    out.deviations.push_back(dev);
    out.envelopes.push_back(env);
    out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
    if (dev > env) out.within_envelope = false;
  }
  return out;
}

std::vector<std::vector<double>> empirical_covariance_matrix(
    const ExperimentConfig& config, KernelKind kind) {
  ExperimentConfig c = config;
  c.statistic = kind == KernelKind::count ? "z_chi" : "z_nu";
  const auto rows = replicate(c);

  const std::size_t m = c.ks.size();
  std::vector<std::vector<double>> cols(m);
  const char* base = kind == KernelKind::count ? "z_chi" : "z_nu";
  for (std::size_t i = 0; i < m; ++i)
    cols[i] = series(rows, tagged(base, c.ks[i]));
  const std::size_t n = cols.front().size();
  for (const auto& col : cols)
    if (col.size() != n)
      throw std::runtime_error(
          "empirical_covariance_matrix: unbalanced series");
  if (n < 2)
    throw std::runtime_error(
        "empirical_covariance_matrix: at least 2 replicates required");

  std::vector<double> means(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double x : cols[i]) means[i] += x;
    means[i] /= static_cast<double>(n);
  }
  std::vector<std::vector<double>> cov(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t)
        s += (cols[i][t] - means[i]) * (cols[j][t] - means[j]);
      cov[i][j] = cov[j][i] = s / static_cast<double>(n - 1);
    }
  return cov;
}

CoverageResult coverage_experiment(const ExperimentConfig& config,
                                   const std::string& method, double alpha,
                                   double truth) {
  if (method != "I" && method != "J" && method != "road")
    throw std::invalid_argument("coverage_experiment: unknown method '" +
                                method + "'");
  ExperimentConfig c = config;
  c.statistic = "intensity";
  c.ks = {config.ks.front()};
  const int k = c.ks.front();
  const auto rows = replicate(c);
  const auto hats = series(rows, tagged("lambda_hat", k));

  CoverageResult out;
  out.n = hats.size();
  out.failures = static_cast<std::size_t>(config.replicates) - hats.size();
  std::size_t covered = 0;
  for (double hat : hats) {
    infer::ConfidenceInterval ci;
    if (method == "I")
      ci = infer::ci_I(hat, c.d, k, c.r, alpha);
    else if (method == "J")
      ci = infer::ci_J(hat, c.d, k, c.r, alpha);
    else
      ci = infer::road_bounds(
          hat * geom::unit_ball_volume(c.d - k) * std::pow(c.r, c.d - k),
          c.r, alpha);
    if (ci.lower <= truth && truth <= ci.upper) ++covered;
  }
  const double n = static_cast<double>(out.n);
  out.fraction = covered / n;
  out.se = std::sqrt(std::max(0.0, out.fraction * (1.0 - out.fraction)) / n);
  return out;
}

}  // namespace hyperflat::mc
