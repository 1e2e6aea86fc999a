// Command-line front end: experiment orchestration and table emission for
// the hyperflat library. All artifacts embed (tool version, config hash,
// master seed) and are byte-identical across reruns with the same seed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperflat/closed_forms.hpp"
#include "hyperflat/inference.hpp"
#include "hyperflat/montecarlo.hpp"
#include "hyperflat/statistics.hpp"
#include "hyperflat/voronoi.hpp"

namespace {

using nlohmann::json;
namespace hf = hyperflat;

constexpr const char* kToolVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBand = 2;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct Meta {
  std::string subcommand;
  std::uint64_t master_seed = 0;
  std::uint64_t config_hash = 0;

  json to_json() const {
    return json{{"tool_version", kToolVersion},
                {"config_hash", config_hash},
                {"master_seed", master_seed},
                {"subcommand", subcommand}};
  }
  std::string csv_header() const {
    std::ostringstream os;
    os << "# tool_version=" << kToolVersion << "\n"
       << "# subcommand=" << subcommand << "\n"
       << "# config_hash=" << config_hash << "\n"
       << "# master_seed=" << master_seed << "\n";
    return os.str();
  }
};

Meta make_meta(const std::string& sub,
               const std::map<std::string, std::string>& fields,
               std::uint64_t seed) {
  std::ostringstream os;
  os << sub;
  for (const auto& [k, v] : fields) os << "|" << k << "=" << v;
  Meta m;
  m.subcommand = sub;
  m.master_seed = seed;
  m.config_hash = fnv1a64(os.str());
  return m;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + name + " in " + dir);
  f << content;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json report_json(const hf::mc::ExperimentReport& rep) {
  json out = json::array();
  for (const auto& s : rep.summaries) {
    json e{{"name", s.name},       {"n", s.n},
           {"mean", s.mean},       {"variance", s.variance},
           {"skewness", s.skewness}};
    if (std::isfinite(s.ks_statistic)) {
      e["ks_statistic"] = s.ks_statistic;
      e["ks_p_value"] = s.ks_p_value;
    }
    out.push_back(std::move(e));
  }
  return json{{"replicates", rep.replicates},
              {"failures", rep.failures},
              {"summaries", std::move(out)}};
}

std::string replicates_csv(const Meta& meta,
                           const std::vector<hf::mc::ReplicateRow>& rows) {
  std::ostringstream os;
  os << meta.csv_header() << "stream,name,value,ok\n";
  for (const auto& row : rows)
    os << row.stream << "," << row.name << "," << fmt17(row.value) << ","
       << (row.ok ? 1 : 0) << "\n";
  return os.str();
}

std::string qq_csv(const Meta& meta, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::ostringstream os;
  os << meta.csv_header() << "normal_quantile,sample_quantile\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << fmt17(hf::infer::normal_quantile((static_cast<double>(i) + 0.5) / n))
       << "," << fmt17(values[i]) << "\n";
  return os.str();
}

std::string hist_csv(const Meta& meta, const std::vector<double>& values,
                     int bins = 30) {
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) hi = lo + 1.0;
  const double w = (hi - lo) / bins;
  std::vector<long long> count(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / w);
    b = std::clamp(b, 0, bins - 1);
    ++count[static_cast<std::size_t>(b)];
  }
  std::ostringstream os;
  os << meta.csv_header() << "bin_left,bin_right,count\n";
  for (int b = 0; b < bins; ++b)
    os << fmt17(lo + b * w) << "," << fmt17(lo + (b + 1) * w) << ","
       << count[static_cast<std::size_t>(b)] << "\n";
  return os.str();
}

std::uint64_t env_default_seed() {
  if (const char* e = std::getenv("HYPERFLAT_SEED"))
    return std::strtoull(e, nullptr, 10);
  return 0;
}

// Shared flag bundle; each subcommand registers the ones it uses.
struct Options {
  int d = 2;
  std::vector<int> ks;
  double lambda = 1.0;
  double r = 10.0;
  double alpha = 0.05;
  int reps = 100;
  std::uint64_t seed = env_default_seed();
  int threads = 1;
  std::string out;
  std::string format = "json";
  std::string method = "J";
  double angle_a = std::numbers::pi / 2.0;
  double angle_b = std::numbers::pi;
};

std::map<std::string, std::string> config_fields(const Options& o) {
  std::map<std::string, std::string> f;
  f["d"] = std::to_string(o.d);
  std::string ks;
  for (int k : o.ks) ks += (ks.empty() ? "" : ";") + std::to_string(k);
  f["k"] = ks;
  f["lambda"] = fmt17(o.lambda);
  f["r"] = fmt17(o.r);
  f["alpha"] = fmt17(o.alpha);
  f["reps"] = std::to_string(o.reps);
  f["seed"] = std::to_string(o.seed);
  f["method"] = o.method;
  f["angle_a"] = fmt17(o.angle_a);
  f["angle_b"] = fmt17(o.angle_b);
  return f;
}

std::vector<int> default_ks(const Options& o) {
  if (!o.ks.empty()) return o.ks;
  std::vector<int> ks;
  for (int k = 0; k < o.d; ++k) ks.push_back(k);
  return ks;
}

void emit_report(const Options& o, const Meta& meta, const json& body) {
  json full{{"meta", meta.to_json()}, {"report", body}};
  const std::string text = dump_json(full);
  if (o.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    if (o.format == "csv") {
      // Flat key,value rendering of the report for CSV consumers.
      std::ostringstream os;
      os << meta.csv_header() << "key,value\n";
      const json flat = full.flatten();
      for (auto it = flat.begin(); it != flat.end(); ++it) {
        os << it.key() << ",";
        if (it.value().is_number_float())
          os << fmt17(it.value().get<double>());
        else
          os << it.value().dump();
        os << "\n";
      }
      write_file(o.out, "report.csv", os.str());
    } else {
      write_file(o.out, "report.json", text);
    }
    std::fputs(text.c_str(), stdout);
  }
}

// ---------------------------------------------------------------------------

int cmd_tables(const Options& o) {
  if (o.d < 2 || o.d > 6)
    throw CLI::ValidationError("--d", "tables requires 2 <= d <= 6");
  const Meta meta = make_meta("tables", config_fields(o), o.seed);
  std::ostringstream os;
  os << meta.csv_header() << "d,k,l,quantity,value,formula\n";
  auto row = [&](int d, int k, int l, const char* q, double v,
                 const char* formula) {
    os << d << "," << k << "," << l << "," << q << "," << fmt17(v) << ",\""
       << formula << "\"\n";
  };
  for (int d = 2; d <= o.d; ++d) {
    for (int k = 0; k < d; ++k) {
      row(d, k, -1, "a_dk", hf::closed::stabilizer_a(d, k),
          "C(d k) (kappa_d/kappa_k) (kappa_{d-1}/(d kappa_d))^{d-k}");
      row(d, k, -1, "b_{d-k}", hf::closed::stabilizer_b(d - k),
          "2^{j-1} (j-1)! kappa_{j-1} / (sqrt(2 (2j-1)!) kappa_j); j = d-k");
      row(d, k, -1, "sigma_chi", hf::closed::sigma_chi(d, k),
          "(kappa_{d-k-1} (d-k-1)!)^2/(2d-2k-1)! (d! kappa_d/(k! kappa_k))^2 "
          "(kappa_{d-1}/(d kappa_d))^{2(d-k)}");
      row(d, k, -1, "sigma_nu", hf::closed::sigma_nu(d, k),
          "(2^k kappa_{d-1} (d-1)!)^2/(2d-1)! (d! kappa_d/(k! kappa_k))^2 "
          "(kappa_{d-1}/(d kappa_d))^{2(d-k)}");
      for (int l = 0; l < d; ++l) {
        row(d, k, l, "sigma_chi_mixed", hf::closed::sigma_chi_mixed(d, k, l),
            "sqrt(sigma_chi_k sigma_chi_l) B(s s)/sqrt(B(d-k d-k) B(d-l "
            "d-l)); s = (2d-k-l)/2");
        row(d, k, l, "sigma_nu_mixed", hf::closed::sigma_nu_mixed(d, k, l),
            "sqrt(sigma_nu_k sigma_nu_l)");
      }
    }
    row(d, -1, -1, "c_d", hf::closed::pvt_vertex_constant(d),
        "(2^d pi^{d-1}/(d+1)) (kappa_{d^2}/kappa_{d^2-1}) "
        "(kappa_{d-1}/kappa_d)^d");
  }
  const std::string text = os.str();
  if (o.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(o.out, "tables.csv", text);
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const Meta meta = make_meta("simulate", config_fields(o), o.seed);
  const auto law = hf::sampling::OrientationLaw::isotropic(o.d);
  const auto sample = hf::sampling::sample_hyperplane_process(
      o.lambda, o.r, law, {o.seed, 0});

  std::ostringstream os;
  os << meta.csv_header() << "p";
  for (int i = 0; i < o.d; ++i) os << ",v" << i;
  os << "\n";
  for (const auto& h : sample.hyperplanes) {
    os << fmt17(h.p);
    for (int i = 0; i < o.d; ++i)
      os << "," << fmt17(h.v[static_cast<std::size_t>(i)]);
    os << "\n";
  }
  if (!o.out.empty()) write_file(o.out, "hyperplanes.csv", os.str());

  json body{{"hyperplane_count", sample.count()}};
  for (int k : default_ks(o)) {
    const auto s = hf::stats::k_flat_summary(sample, k);
    body["psi_" + std::to_string(k)] = s.count;
    body["zeta_" + std::to_string(k)] = s.volume;
  }
  emit_report(o, meta, body);
  return kExitOk;
}

int cmd_estimate(const Options& o) {
  const int k = o.ks.empty() ? 0 : o.ks.front();
  const Meta meta = make_meta("estimate", config_fields(o), o.seed);
  const auto law = hf::sampling::OrientationLaw::isotropic(o.d);
  const auto sample = hf::sampling::sample_hyperplane_process(
      o.lambda, o.r, law, {o.seed, 0});
  const auto est = hf::stats::intensity_estimators(sample, k);
  const auto ci_i = hf::infer::ci_I(est.count_based, o.d, k, o.r, o.alpha);
  const auto ci_j = hf::infer::ci_J(est.count_based, o.d, k, o.r, o.alpha);
  json body{{"k", k},
            {"lambda_hat_k", est.count_based},
            {"lambda_tilde_k", est.volume_based},
            {"interval_I",
             {{"target", ci_i.target},
              {"lower", ci_i.lower},
              {"upper", ci_i.upper},
              {"level", ci_i.level}}},
            {"interval_J",
             {{"target", ci_j.target},
              {"lower", ci_j.lower},
              {"upper", ci_j.upper},
              {"level", ci_j.level}}}};
  emit_report(o, meta, body);
  return kExitOk;
}

int cmd_test(const Options& o) {
  if (o.d != 2)
    throw CLI::ValidationError("--d", "test is the planar procedure (d = 2)");
  const Meta meta = make_meta("test", config_fields(o), o.seed);
  const auto law = hf::sampling::OrientationLaw::isotropic(2);
  const auto sample = hf::sampling::sample_hyperplane_process(
      o.lambda, o.r, law, {o.seed, 0});
  const auto est = hf::stats::intensity_estimators(sample, 0);
  const auto t =
      hf::infer::test_lambda(est.count_based, o.lambda, o.r, o.alpha);
  json body{{"lambda_star", o.lambda},
            {"lambda_hat_0", est.count_based},
            {"lower_threshold", t.lower_threshold},
            {"upper_threshold", t.upper_threshold},
            {"reject", t.reject}};
  emit_report(o, meta, body);
  return t.reject ? kExitBand : kExitOk;
}

int cmd_clt(const Options& o) {
  const Meta meta = make_meta("clt", config_fields(o), o.seed);
  hf::mc::ExperimentConfig c;
  c.d = o.d;
  c.ks = default_ks(o);
  c.lambda = o.lambda;
  c.r = o.r;
  c.replicates = o.reps;
  c.master_seed = o.seed;
  c.statistic = "z_both";
  c.threads = o.threads;

  const auto rows = hf::mc::replicate(c);
  const auto rep = hf::mc::summarize(rows);
  if (!o.out.empty()) write_file(o.out, "replicates.csv", replicates_csv(meta, rows));

  bool band_ok = true;
  json checks = json::array();
  const double crit = hf::mc::ks_critical_value(
      static_cast<std::size_t>(o.reps), 0.01);
  for (const auto& s : rep.summaries) {
    const bool chi = s.name.rfind("z_chi_", 0) == 0;
    const int k = std::stoi(s.name.substr(s.name.rfind('_') + 1));
    const double sigma = chi ? hf::closed::sigma_chi(o.d, k)
                             : hf::closed::sigma_nu(o.d, k);
    std::vector<double> z = hf::mc::series(rows, s.name);
    for (double& v : z) v /= std::sqrt(sigma);
    const auto ks = hf::mc::ks_normal(z);
    const bool var_ok = std::abs(s.variance / sigma - 1.0) <= 0.15;
    const bool ks_ok = ks.statistic < crit;
    band_ok = band_ok && var_ok && ks_ok;
    checks.push_back(json{{"name", s.name},
                          {"analytic_variance", sigma},
                          {"empirical_variance", s.variance},
                          {"variance_ok", var_ok},
                          {"ks_statistic", ks.statistic},
                          {"ks_critical_1pct", crit},
                          {"ks_ok", ks_ok}});
    if (!o.out.empty()) {
      write_file(o.out, "qq_" + s.name + ".csv", qq_csv(meta, z));
      write_file(o.out, "hist_" + s.name + ".csv", hist_csv(meta, z));
    }
  }
  json body = report_json(rep);
  body["checks"] = std::move(checks);
  emit_report(o, meta, body);
  return band_ok ? kExitOk : kExitBand;
}

int cmd_coverage(const Options& o) {
  if (o.method != "I" && o.method != "J" && o.method != "road")
    throw CLI::ValidationError("--method", "must be one of I, J, road");
  const int k = o.ks.empty() ? 0 : o.ks.front();
  const Meta meta = make_meta("coverage", config_fields(o), o.seed);
  hf::mc::ExperimentConfig c;
  c.d = o.d;
  c.ks = {k};
  c.lambda = o.lambda;
  c.r = o.r;
  c.replicates = o.reps;
  c.master_seed = o.seed;
  c.threads = o.threads;
  const double truth = o.method == "I"
                           ? hf::closed::intensity_lambda_k(o.d, k, o.lambda)
                           : o.lambda;
  const auto cov = hf::mc::coverage_experiment(c, o.method, o.alpha, truth);

  const double lo = 1.0 - o.alpha - 0.03;
  const double hi = std::min(1.0, 1.0 - o.alpha + 0.02);
  const bool band_ok = cov.fraction >= lo && cov.fraction <= hi;
  std::printf("coverage %.17g +- %.17g (binomial SE), n=%zu\n", cov.fraction,
              cov.se, cov.n);
  json body{{"method", o.method}, {"target", truth},
            {"coverage", cov.fraction}, {"binomial_se", cov.se},
            {"n", cov.n}, {"band", {lo, hi}}, {"band_ok", band_ok}};
  emit_report(o, meta, body);
  return band_ok ? kExitOk : kExitBand;
}

int cmd_planar(const Options& o) {
  if (o.d != 2)
    throw CLI::ValidationError("--d", "planar requires d = 2");
  const Meta meta = make_meta("planar", config_fields(o), o.seed);
  const double mu = hf::closed::planar_mu(o.angle_a, o.angle_b);
  const double sig = hf::closed::planar_sigma(o.angle_a, o.angle_b);

  hf::mc::ExperimentConfig c;
  c.d = 2;
  c.ks = {0};
  c.lambda = o.lambda;
  c.r = o.r;
  c.replicates = o.reps;
  c.master_seed = o.seed;
  c.angle_a = o.angle_a;
  c.angle_b = o.angle_b;
  c.threads = o.threads;

  c.statistic = "marked_count";
  const auto count_rows = hf::mc::replicate(c);
  const auto counts = hf::mc::series(count_rows, "marked_count");
  c.statistic = "planar_z";
  const auto z_rows = hf::mc::replicate(c);
  auto zs = hf::mc::series(z_rows, "planar_z");
  if (!o.out.empty()) {
    write_file(o.out, "marked_counts.csv", replicates_csv(meta, count_rows));
    write_file(o.out, "planar_z.csv", replicates_csv(meta, z_rows));
  }

  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (double v : counts) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : counts) var += (v - mean) * (v - mean);
  var /= (n - 1.0);
  const double expect =
      0.5 * (2.0 * o.lambda * o.r) * (2.0 * o.lambda * o.r) * mu;
  const double se = std::sqrt(var / n);
  const bool mean_ok = std::abs(mean - expect) <= 3.0 * se;

  double zmean = 0.0;
  for (double v : zs) zmean += v;
  zmean /= static_cast<double>(zs.size());
  double zvar = 0.0;
  for (double v : zs) zvar += (v - zmean) * (v - zmean);
  zvar /= (static_cast<double>(zs.size()) - 1.0);
  const double limit_var = sig - mu * mu;
  const bool var_ok = std::abs(zvar / limit_var - 1.0) <= 0.15;
  for (double& v : zs) v /= std::sqrt(limit_var);
  const auto ks = hf::mc::ks_normal(zs);
  const double crit = hf::mc::ks_critical_value(zs.size(), 0.01);
  const bool ks_ok = ks.statistic < crit;

  json body{{"mu", mu},
            {"sigma", sig},
            {"marked_mean", mean},
            {"marked_mean_expected", expect},
            {"marked_mean_se", se},
            {"mean_ok", mean_ok},
            {"z_variance", zvar},
            {"z_variance_limit", limit_var},
            {"variance_ok", var_ok},
            {"ks_statistic", ks.statistic},
            {"ks_critical_1pct", crit},
            {"ks_ok", ks_ok}};
  emit_report(o, meta, body);
  return (mean_ok && var_ok && ks_ok) ? kExitOk : kExitBand;
}

int cmd_voronoi(const Options& o) {
  const Meta meta = make_meta("voronoi", config_fields(o), o.seed);
  hf::voronoi::PvtExperimentConfig c;
  c.lambda = o.lambda;
  c.replicates = o.reps;
  c.master_seed = o.seed;
  const auto counts = hf::voronoi::replicate_vertex_counts(c);
  const double area = c.core.area();

  if (!o.out.empty()) {
    // Vertex dump of the first replicate for plotting.
    hf::voronoi::ExtractOptions opt;
    opt.max_circumradius = std::sqrt(22.0 / (o.lambda * std::numbers::pi));
    const auto sample = hf::voronoi::sample_pvt(o.lambda, c.core, {o.seed, 0});
    std::ostringstream os;
    os << meta.csv_header() << "x,y,circumradius\n";
    for (const auto& v : hf::voronoi::extract_vertices(sample, opt))
      os << fmt17(v.location[0]) << "," << fmt17(v.location[1]) << ","
         << fmt17(v.circumradius) << "\n";
    write_file(o.out, "vertices.csv", os.str());

    std::ostringstream cs;
    cs << meta.csv_header() << "stream,vertex_count\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
      cs << i << "," << counts[i] << "\n";
    write_file(o.out, "counts.csv", cs.str());
  }

  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (long long v : counts) mean += static_cast<double>(v);
  mean /= n;
  double var = 0.0;
  for (long long v : counts) {
    const double ce = static_cast<double>(v) - mean;
    var += ce * ce;
  }
  var /= (n - 1.0);
  const double c2 = hf::closed::pvt_vertex_constant(2);
  const double expect = c2 * o.lambda * area;
  const double se = std::sqrt(var / n);
  const bool mean_ok = std::abs(mean - expect) <= 3.0 * se;

  std::vector<double> zs;
  std::size_t covered = 0;
  for (long long v : counts) {
    zs.push_back(hf::voronoi::pvt_standardized_Z_from_count(
        static_cast<double>(v), area, o.lambda));
    const auto ci = hf::infer::pvt_ci(static_cast<double>(v), area, 2, o.alpha);
    if (ci.lower <= o.lambda && o.lambda <= ci.upper) ++covered;
  }
  double zm = 0.0;
  for (double z : zs) zm += z;
  zm /= n;
  double zv = 0.0;
  for (double z : zs) zv += (z - zm) * (z - zm);
  zv /= (n - 1.0);
  const bool var_ok = zv >= 0.8 && zv <= 1.2;
  const auto ks = hf::mc::ks_normal(zs);
  const double crit = hf::mc::ks_critical_value(zs.size(), 0.01);
  const bool ks_ok = ks.statistic < crit;
  const double coverage = covered / n;
  const bool cov_ok = coverage >= 0.90 && coverage <= 0.98;

  json body{{"vertex_mean", mean},
            {"vertex_mean_expected", expect},
            {"vertex_mean_se", se},
            {"mean_ok", mean_ok},
            {"z_variance", zv},
            {"variance_ok", var_ok},
            {"ks_statistic", ks.statistic},
            {"ks_critical_1pct", crit},
            {"ks_ok", ks_ok},
            {"ci_coverage", coverage},
            {"coverage_ok", cov_ok}};
  emit_report(o, meta, body);
  return (mean_ok && var_ok && ks_ok && cov_ok) ? kExitOk : kExitBand;
}

void add_common(CLI::App* app, Options& o, bool with_stats = true) {
  app->add_option("--d", o.d, "ambient dimension");
  app->add_option("--k", o.ks, "flat dimension(s)");
  app->add_option("--lambda", o.lambda, "hyperplane intensity");
  app->add_option("--r", o.r, "ball radius");
  app->add_option("--alpha", o.alpha, "significance level");
  if (with_stats) {
    app->add_option("--reps", o.reps, "number of replicates");
    app->add_option("--threads", o.threads, "worker thread cap");
  }
  app->add_option("--seed", o.seed, "master seed (default: HYPERFLAT_SEED)");
  app->add_option("--out", o.out, "output directory (default: stdout only)");
  app->add_option("--format", o.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperflat: Poisson hyperplane process simulation and "
               "inference toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* tables = app.add_subcommand("tables", "closed-form constants table");
  add_common(tables, o, false);
  auto* simulate = app.add_subcommand("simulate", "one seeded realization");
  add_common(simulate, o, false);
  auto* estimate = app.add_subcommand("estimate", "intensity estimates + CIs");
  add_common(estimate, o, false);
  auto* test = app.add_subcommand("test", "planar intensity hypothesis test");
  add_common(test, o, false);
  auto* clt = app.add_subcommand("clt", "CLT replication experiment");
  add_common(clt, o);
  auto* coverage = app.add_subcommand("coverage", "CI coverage experiment");
  add_common(coverage, o);
  coverage->add_option("--method", o.method, "interval method: I, J or road");
  auto* planar = app.add_subcommand("planar", "planar marked-vertex CLTs");
  add_common(planar, o);
  planar->add_option("--angle-a", o.angle_a, "angle rectangle bound a");
  planar->add_option("--angle-b", o.angle_b, "angle rectangle bound b");
  auto* voronoi = app.add_subcommand("voronoi", "Poisson-Voronoi experiment");
  add_common(voronoi, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (tables->parsed()) return cmd_tables(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (estimate->parsed()) return cmd_estimate(o);
    if (test->parsed()) return cmd_test(o);
    if (clt->parsed()) return cmd_clt(o);
    if (coverage->parsed()) return cmd_coverage(o);
    if (planar->parsed()) return cmd_planar(o);
    if (voronoi->parsed()) return cmd_voronoi(o);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
