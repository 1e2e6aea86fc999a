#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hyperflat/statistics.hpp"

namespace hyperflat::mc {

/// One replicated experiment. The statistic selector picks what is computed
/// per realization:
///   psi          k-flat counts Psi_k for each k
///   zeta         k-flat volumes zeta_k for each k
///   z_chi        standardized counts Z_k(chi)
///   z_nu         standardized volumes Z_k(nu)
///   z_both       both standardized families from one enumeration pass
///   intensity    lambda_hat_k and lambda_tilde_k
///   marked_count planar marked vertex count for the angle rectangle (a, b)
///   planar_z     randomly normalized planar pair statistic
struct ExperimentConfig {
  int d = 2;
  std::vector<int> ks = {0};
  double lambda = 1.0;
  double r = 10.0;
  std::string law = "isotropic";
  int replicates = 100;
  std::uint64_t master_seed = 0;
  std::string statistic = "z_chi";
  std::string centering = "analytic";
  double angle_a = 3.14159265358979323846;
  double angle_b = 3.14159265358979323846;
  int threads = 1;
};

struct ReplicateRow {
  std::uint64_t stream = 0;
  std::string name;
  double value = 0.0;
  bool ok = true;
  std::string error;
};

using SampleStatistic = std::function<std::vector<std::pair<std::string, double>>(
    const sampling::HyperplaneProcessSample&)>;

SampleStatistic make_statistic(const ExperimentConfig& config);

/// Runs the statistic on independent samples (stream i uses stream_index i).
/// Output order matches stream index regardless of thread count; failures
/// are recorded per replicate without aborting the batch.
std::vector<ReplicateRow> replicate(const ExperimentConfig& config);
std::vector<ReplicateRow> replicate_with(const ExperimentConfig& config,
                                         const SampleStatistic& statistic);

struct StatisticSummary {
  std::string name;
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double ks_statistic = 0.0;  // against N(mean, variance) of the sample
  double ks_p_value = 0.0;
};

struct ExperimentReport {
  std::vector<StatisticSummary> summaries;
  std::size_t failures = 0;
  std::size_t replicates = 0;
};

ExperimentReport summarize(const std::vector<ReplicateRow>& rows);

/// JSON round-trip for configs (field names mirror the struct) and report
/// serialization. Reports serialize deterministically: no timestamps, fixed
/// key order, 17-significant-digit numbers.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
std::string report_to_json(const ExperimentReport& report);

/// Pulls one named series out of the rows, in stream order.
std::vector<double> series(const std::vector<ReplicateRow>& rows,
                           const std::string& name);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov statistic of a pre-standardized sample
/// against the standard normal; asymptotic p-value from the first 100 terms
/// of the Kolmogorov series. Requires at least 20 values.
KsResult ks_normal(std::vector<double> values);

/// K(t) = 1 - 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 t^2), truncated at 100 terms.
double kolmogorov_cdf(double t);

/// Critical value for the one-sample statistic at the given level
/// (asymptotic: solves the series and divides by sqrt(n)).
double ks_critical_value(std::size_t n, double alpha);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte Carlo estimate of the kernel second moment
///   sigma^{(j,d)} = E(f(X_1..X_d) f(X_{d-j+1}..X_{2d-j}))
/// for the isotropic law at r = 1.
MeanSe estimate_sigma_jd(int d, int j, const stats::MarkPredicate& predicate,
                         long long draws, rng::SeedContract seed);

enum class KernelKind { count, volume };

struct KernelCheck {
  std::vector<double> deviations;  // |MC - closed form| per grid point
  std::vector<double> envelopes;   // 3 SE per grid point
  double max_abs_deviation = 0.0;
  bool within_envelope = true;
};

/// Monte Carlo check of the conditional hitting kernels against their closed
/// forms on a |p| <= 1 grid.
KernelCheck verify_g_kernel(int d, int k, KernelKind kind,
                            const std::vector<double>& p_grid,
                            long long draws, rng::SeedContract seed);

/// Sample covariance matrix of the standardized statistics across the
/// config's k list, computed jointly per replicate from the same sample.
std::vector<std::vector<double>> empirical_covariance_matrix(
    const ExperimentConfig& config, KernelKind kind);

struct CoverageResult {
  double fraction = 0.0;
  double se = 0.0;  // binomial standard error
  std::size_t n = 0;
  std::size_t failures = 0;
};

/// Fraction of replicates whose interval (method "I", "J" or "road", built
/// from the count-based estimator at config.ks.front()) covers the truth.
CoverageResult coverage_experiment(const ExperimentConfig& config,
                                   const std::string& method, double alpha,
                                   double truth);

}  // namespace hyperflat::mc
