#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hyperflat/montecarlo.hpp"
#include "hyperflat/sampling.hpp"

using namespace hyperflat;

namespace {
constexpr double kPi = std::numbers::pi;

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (static_cast<double>(v.size()) - 1.0);
}

double corr_of(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}
}  // namespace

TEST_CASE("orientation law construction rules") {
  CHECK_THROWS_AS(sampling::OrientationLaw::isotropic(0),
                  std::invalid_argument);
  // d = 1: a single atom spans R^1.
  const auto one = sampling::OrientationLaw::discrete(
      {geom::UnitDirection({1.0})}, {1.0});
  rng::Rng rng(1);
  CHECK(one.sample(rng)[0] == doctest::Approx(1.0));
  // Weights must sum to one.
  CHECK_THROWS_AS(
      sampling::OrientationLaw::discrete(
          {geom::UnitDirection({1.0, 0.0}), geom::UnitDirection({0.0, 1.0})},
          {0.5, 0.4}),
      std::invalid_argument);
  // Degenerate planar law: both atoms on the same line through the origin.
  CHECK_THROWS_AS(
      sampling::OrientationLaw::discrete({geom::UnitDirection({0.0, 1.0}),
                                          geom::UnitDirection({0.0, 1.0})},
                                         {0.5, 0.5}),
      std::invalid_argument);
  // Full-rank planar law samples by weight.
  const auto law = sampling::OrientationLaw::discrete(
      {geom::UnitDirection({1.0, 0.0}), geom::UnitDirection({0.0, 1.0})},
      {0.25, 0.75});
  int hits = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i)
    if (law.sample(rng)[1] == doctest::Approx(1.0)) ++hits;
  const double p = static_cast<double>(hits) / n;
  CHECK(std::abs(p - 0.75) <= 3.0 * std::sqrt(0.75 * 0.25 / n));
}

TEST_CASE("isotropic planar directions have uniform angles") {
  const auto law = sampling::OrientationLaw::isotropic(2);
  rng::Rng rng(42);
  const int n = 100000;
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto v = law.sample(rng);
    double g = std::atan2(v[1], v[0]);
    if (g < 0.0) g += kPi;
    if (g >= kPi) g = 0.0;
    u[static_cast<std::size_t>(i)] = g / kPi;  // should be U(0,1)
  }
  std::sort(u.begin(), u.end());
  double dstat = 0.0;
  for (int i = 0; i < n; ++i) {
    dstat = std::max(dstat, u[static_cast<std::size_t>(i)] -
                                static_cast<double>(i) / n);
    dstat = std::max(dstat, static_cast<double>(i + 1) / n -
                                u[static_cast<std::size_t>(i)]);
  }
  CHECK(dstat < 1.628 / std::sqrt(static_cast<double>(n)));  // 1% critical
}

TEST_CASE("isotropic 3d directions lean into the upper hemisphere") {
  const auto law = sampling::OrientationLaw::isotropic(3);
  rng::Rng rng(5);
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += law.sample(rng)[2];
  CHECK(acc / n > 0.45);
}

TEST_CASE("poisson sampler") {
  rng::Rng rng(9);
  CHECK(sampling::sample_poisson_count(0.0, rng) == 0);
  CHECK_THROWS_AS(sampling::sample_poisson_count(-1.0, rng),
                  std::invalid_argument);

  // P(N = 0) at mean 4.
  int zeros = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    if (sampling::sample_poisson_count(4.0, rng) == 0) ++zeros;
  const double p0 = std::exp(-4.0);
  CHECK(std::abs(static_cast<double>(zeros) / n - p0) <=
        3.0 * std::sqrt(p0 * (1.0 - p0) / n));

  // Large mean uses the rejection sampler: check mean and variance.
  std::vector<double> big;
  for (int i = 0; i < 20000; ++i)
    big.push_back(
        static_cast<double>(sampling::sample_poisson_count(1000.0, rng)));
  const double m = mean_of(big);
  const double v = var_of(big);
  CHECK(std::abs(m - 1000.0) <= 3.0 * std::sqrt(1000.0 / big.size()));
  // SE of the variance of a Poisson ~ sqrt((2 mu^2 + mu) / n).
  CHECK(std::abs(v - 1000.0) <=
        3.0 * std::sqrt((2.0 * 1000.0 * 1000.0 + 1000.0) / big.size()));
}

TEST_CASE("hyperplane process sample invariants and determinism") {
  const auto law = sampling::OrientationLaw::isotropic(3);
  const auto a = sampling::sample_hyperplane_process(1.5, 4.0, law, {77, 3});
  const auto b = sampling::sample_hyperplane_process(1.5, 4.0, law, {77, 3});
  const auto c = sampling::sample_hyperplane_process(1.5, 4.0, law, {77, 4});
  REQUIRE(a.count() == b.count());
  for (long long i = 0; i < a.count(); ++i) {
    const auto& ha = a.hyperplanes[static_cast<std::size_t>(i)];
    const auto& hb = b.hyperplanes[static_cast<std::size_t>(i)];
    CHECK(ha.p == hb.p);
    CHECK(ha.v == hb.v);
    CHECK(std::abs(ha.p) <= 4.0);
  }
  // Different stream almost surely differs.
  bool same = a.count() == c.count();
  if (same && a.count() > 0) same = a.hyperplanes[0].p == c.hyperplanes[0].p;
  CHECK_FALSE(same);
  CHECK_THROWS_AS(sampling::sample_hyperplane_process(0.0, 1.0, law, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sampling::sample_hyperplane_process(1.0, -1.0, law, {0, 0}),
                  std::invalid_argument);
}

TEST_CASE("process count moments match Poisson(2 lambda r)") {
  const auto law = sampling::OrientationLaw::isotropic(2);
  std::vector<double> counts;
  for (int i = 0; i < 10000; ++i)
    counts.push_back(static_cast<double>(
        sampling::sample_hyperplane_process(1.0, 10.0, law,
                                            {2024, static_cast<std::uint64_t>(i)})
            .count()));
  const double n = static_cast<double>(counts.size());
  CHECK(std::abs(mean_of(counts) - 20.0) <= 3.0 * std::sqrt(20.0 / n));
  CHECK(std::abs(var_of(counts) - 20.0) <=
        3.0 * std::sqrt((2.0 * 400.0 + 20.0) / n));
}

TEST_CASE("signed distances are uniform and independent of orientation") {
  const auto law = sampling::OrientationLaw::isotropic(2);
  std::vector<double> ps, v0s;
  for (int s = 0; s < 2000; ++s) {
    const auto sm = sampling::sample_hyperplane_process(
        1.0, 3.0, law, {11, static_cast<std::uint64_t>(s)});
    for (const auto& h : sm.hyperplanes) {
      ps.push_back(h.p / 3.0);
      v0s.push_back(h.v[0]);
    }
  }
  // KS against U(-1, 1).
  std::sort(ps.begin(), ps.end());
  const double n = static_cast<double>(ps.size());
  double dstat = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double f = 0.5 * (ps[i] + 1.0);
    dstat = std::max(dstat, f - static_cast<double>(i) / n);
    dstat = std::max(dstat, static_cast<double>(i + 1) / n - f);
  }
  CHECK(dstat < 1.628 / std::sqrt(n));
  // Correlation of p with the first orientation coordinate ~ 0.
  CHECK(std::abs(corr_of(ps, v0s)) <= 3.0 / std::sqrt(n));
}

TEST_CASE("thinning: independent deletion halves the intensity") {
  const auto law = sampling::OrientationLaw::isotropic(2);
  rng::Rng coin(123);
  std::vector<double> thinned;
  for (int s = 0; s < 10000; ++s) {
    const auto sm = sampling::sample_hyperplane_process(
        1.0, 10.0, law, {31, static_cast<std::uint64_t>(s)});
    long long kept = 0;
    for (long long i = 0; i < sm.count(); ++i)
      if (coin.uniform01() < 0.5) ++kept;
    thinned.push_back(static_cast<double>(kept));
  }
  const double n = static_cast<double>(thinned.size());
  CHECK(std::abs(mean_of(thinned) - 10.0) <= 3.0 * std::sqrt(10.0 / n));
  CHECK(std::abs(var_of(thinned) - 10.0) <=
        3.0 * std::sqrt((2.0 * 100.0 + 10.0) / n));
}

TEST_CASE("streams of the same master seed are uncorrelated") {
  const auto law = sampling::OrientationLaw::isotropic(2);
  std::vector<double> n0, n1;
  for (std::uint64_t m = 0; m < 2000; ++m) {
    n0.push_back(static_cast<double>(
        sampling::sample_hyperplane_process(1.0, 10.0, law, {m, 0}).count()));
    n1.push_back(static_cast<double>(
        sampling::sample_hyperplane_process(1.0, 10.0, law, {m, 1}).count()));
  }
  CHECK(std::abs(corr_of(n0, n1)) <= 3.0 / std::sqrt(2000.0));
}

TEST_CASE("nuclei sampling") {
  const sampling::Window2 unit{0.0, 0.0, 1.0, 1.0};
  // Determinism.
  const auto a = sampling::sample_nuclei(100.0, unit, {5, 0});
  const auto b = sampling::sample_nuclei(100.0, unit, {5, 0});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i][0] == b[i][0]);
    CHECK(a[i][1] == b[i][1]);
    CHECK(unit.contains(a[i][0], a[i][1]));
  }
  // Zero-area window yields no points.
  CHECK(sampling::sample_nuclei(100.0, {0.0, 0.0, 0.0, 1.0}, {5, 0}).empty());
  CHECK_THROWS_AS(sampling::sample_nuclei(1.0, {1.0, 0.0, 0.0, 1.0}, {5, 0}),
                  std::invalid_argument);
  // Mean count.
  std::vector<double> counts;
  for (int s = 0; s < 4000; ++s)
    counts.push_back(static_cast<double>(
        sampling::sample_nuclei(100.0, unit, {8, static_cast<std::uint64_t>(s)})
            .size()));
  CHECK(std::abs(mean_of(counts) - 100.0) <=
        3.0 * std::sqrt(100.0 / counts.size()));
}
