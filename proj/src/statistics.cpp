#include "hyperflat/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperflat/closed_forms.hpp"

namespace hyperflat::stats {

namespace {

// C(n, m) with saturation; enough headroom to compare against the cap.
long long binomial_capped(long long n, int m) {
  if (n < m) return 0;
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c *= static_cast<double>(n - m + i) / i;
  if (c > 4.0e18) return 4'000'000'000'000'000'000LL;
  return static_cast<long long>(std::llround(c));
}

void check_budget(long long n, int m, long long cap, const char* who) {
  const long long total = binomial_capped(n, m);
  if (total > cap)
    throw EnumerationBudgetExceeded(
        std::string(who) + ": C(" + std::to_string(n) + ", " +
        std::to_string(m) + ") = " + std::to_string(total) +
        " subsets exceed the cap " + std::to_string(cap) +
        "; a cap of at least " + std::to_string(total) + " is required");
}

// Visits every m-subset of {0, .., n-1} in lexicographic order.
template <class F>
void for_each_subset(long long n, int m, F&& visit) {
  if (n < m || m <= 0) return;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  for (;;) {
    visit(idx.data());
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double z_prefactor(int d, int k, double lambda, double r) {
  return std::exp(closed::log_factorial(d - k - 1) -
                  (d - k - 0.5) * std::log(2.0 * lambda * r));
}

}  // namespace

MarkPredicate all_pass() {
  return [](const std::vector<geom::UnitDirection>&) { return true; };
}

double planar_angle(const geom::UnitDirection& v) {
  if (v.dim() != 2)
    throw std::invalid_argument("planar_angle: d = 2 required");
  double g = std::atan2(v[1], v[0]);
  if (g < 0.0) g += std::numbers::pi;       // hemisphere representative
  if (g >= std::numbers::pi) g = 0.0;       // angle pi is the same line as 0
  return g;
}

MarkPredicate planar_angle_rectangle(double a, double b) {
  if (!(a >= 0.0 && a <= b && b <= std::numbers::pi + 1e-15))
    throw std::invalid_argument(
        "planar_angle_rectangle: need 0 <= a <= b <= pi");
  return [a, b](const std::vector<geom::UnitDirection>& dirs) {
    if (dirs.size() != 2)
      throw std::invalid_argument(
          "planar_angle_rectangle: tuple of 2 directions required");
    const double g1 = planar_angle(dirs[0]);
    const double g2 = planar_angle(dirs[1]);
    return std::min(g1, g2) <= a && std::max(g1, g2) <= b;
  };
}

KFlatSummary k_flat_summary(const sampling::HyperplaneProcessSample& sample,
                            int k, long long cap) {
  const int d = sample.d;
  if (k < 0 || k > d - 1)
    throw std::invalid_argument("k_flat_summary: need 0 <= k <= d-1");
  const int m = d - k;
  const long long n = sample.count();
  check_budget(n, m, cap, "k_flat_summary");

  KFlatSummary out;
  out.k = k;
  if (n < m) return out;

  geom::FootSolver solver(d, m);
  const double r2 = sample.r * sample.r;
  const double kk = geom::unit_ball_volume(k);
  for_each_subset(n, m, [&](const int* idx) {
    ++out.subsets_examined;
    const auto q = solver.foot_norm2(sample.hyperplanes, idx);
    if (!q || *q > r2) return;
    ++out.count;
    out.volume += (k == 0) ? 1.0 : kk * std::pow(r2 - *q, 0.5 * k);
  });
  return out;
}

long long marked_vertex_count(const sampling::HyperplaneProcessSample& sample,
                              const MarkPredicate& predicate, long long cap) {
  const int d = sample.d;
  const long long n = sample.count();
  check_budget(n, d, cap, "marked_vertex_count");
  if (n < d) return 0;

  geom::FootSolver solver(d, d);
  const double r2 = sample.r * sample.r;
  long long count = 0;
  std::vector<geom::UnitDirection> dirs;
  for_each_subset(n, d, [&](const int* idx) {
    const auto q = solver.foot_norm2(sample.hyperplanes, idx);
    if (!q || *q > r2) return;
    dirs.clear();
    for (int i = 0; i < d; ++i) dirs.push_back(sample.hyperplanes[idx[i]].v);
    std::sort(dirs.begin(), dirs.end());
    if (predicate(dirs)) ++count;
  });
  return count;
}

double standardized_count_Z(const sampling::HyperplaneProcessSample& sample,
                            int k, Centering centering, double plug_in_mean,
                            long long cap) {
  double mean;
  if (centering == Centering::analytic) {
    if (!sample.isotropic)
      throw std::invalid_argument(
          "standardized_count_Z: analytic centering needs an isotropic law");
    mean = closed::mean_psi_k(sample.d, k, sample.lambda, sample.r);
  } else {
    mean = plug_in_mean;
  }
  const auto s = k_flat_summary(sample, k, cap);
  return z_prefactor(sample.d, k, sample.lambda, sample.r) *
         (static_cast<double>(s.count) - mean);
}

double standardized_volume_Z(const sampling::HyperplaneProcessSample& sample,
                             int k, Centering centering, double plug_in_mean,
                             long long cap) {
  double mean;
  if (centering == Centering::analytic) {
    if (!sample.isotropic)
      throw std::invalid_argument(
          "standardized_volume_Z: analytic centering needs an isotropic law");
    mean = closed::mean_zeta_k(sample.d, k, sample.lambda, sample.r);
  } else {
    mean = plug_in_mean;
  }
  const auto s = k_flat_summary(sample, k, cap);
  return z_prefactor(sample.d, k, sample.lambda, sample.r) *
         std::pow(sample.r, -k) * (s.volume - mean);
}

IntensityEstimates intensity_estimators(
    const sampling::HyperplaneProcessSample& sample, int k, long long cap) {
  const auto s = k_flat_summary(sample, k, cap);
  const int d = sample.d;
  IntensityEstimates e;
  e.count_based = static_cast<double>(s.count) /
                  (geom::unit_ball_volume(d - k) * std::pow(sample.r, d - k));
  e.volume_based =
      s.volume / (geom::unit_ball_volume(d) * std::pow(sample.r, d));
  return e;
}

double planar_box_weight(double g1, double g2, double a, double b) {
  if (!(a >= 0.0 && a <= b && b <= std::numbers::pi + 1e-15))
    throw std::invalid_argument("planar_box_weight: need 0 <= a <= b <= pi");
  const double lo = std::min(g1, g2);
  const double hi = std::max(g1, g2);
  if (hi <= a) return 1.0;
  if (lo <= a && hi <= b) return 0.5;
  return 0.0;
}

double planar_marked_sum(const sampling::HyperplaneProcessSample& sample,
                         double a, double b, long long cap) {
  if (sample.d != 2)
    throw std::invalid_argument("planar_marked_sum: d = 2 required");
  const long long n = sample.count();
  check_budget(n, 2, cap, "planar_marked_sum");
  if (n < 2) return 0.0;

  std::vector<double> angle(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i)
    angle[static_cast<std::size_t>(i)] =
        planar_angle(sample.hyperplanes[static_cast<std::size_t>(i)].v);

  geom::FootSolver solver(2, 2);
  const double r2 = sample.r * sample.r;
  double sum = 0.0;
  int idx[2];
  for (long long i = 0; i < n; ++i)
    for (long long j = i + 1; j < n; ++j) {
      idx[0] = static_cast<int>(i);
      idx[1] = static_cast<int>(j);
      const auto q = solver.foot_norm2(sample.hyperplanes, idx);
      if (q && *q <= r2)
        sum += planar_box_weight(angle[static_cast<std::size_t>(i)],
                                 angle[static_cast<std::size_t>(j)], a, b);
    }
  return sum;
}

double planar_random_normalized_Z(
    const sampling::HyperplaneProcessSample& sample, double a, double b) {
  if (sample.d != 2)
    throw std::invalid_argument("planar_random_normalized_Z: d = 2 required");
  const long long n = sample.count();
  if (n < 2)
    throw UndefinedForSmallSample(
        "planar_random_normalized_Z: fewer than 2 hyperplanes");
  const double mu = closed::planar_mu(a, b);

  std::vector<double> angle(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i)
    angle[static_cast<std::size_t>(i)] =
        planar_angle(sample.hyperplanes[static_cast<std::size_t>(i)].v);

  geom::FootSolver solver(2, 2);
  const double r2 = sample.r * sample.r;
  double sum = 0.0;
  int idx[2];
  for (long long i = 0; i < n; ++i)
    for (long long j = i + 1; j < n; ++j) {
      idx[0] = static_cast<int>(i);
      idx[1] = static_cast<int>(j);
      const auto q = solver.foot_norm2(sample.hyperplanes, idx);
      double f = 0.0;
      if (q && *q <= r2)
        f = planar_box_weight(angle[static_cast<std::size_t>(i)],
                              angle[static_cast<std::size_t>(j)], a, b);
      sum += f - mu;
    }
  return sum / std::pow(static_cast<double>(n) * (n - 1.0), 0.75);
}

}  // namespace hyperflat::stats
