#include "hyperflat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperflat::sampling {

namespace {

// Rank of the atom set via modified Gram-Schmidt with residual cutoff.
int direction_rank(const std::vector<geom::UnitDirection>& atoms, int d) {
  std::vector<geom::Vec> basis;
  for (const auto& a : atoms) {
    geom::Vec w = a.coords();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double c = geom::dot(w, q);
        for (int i = 0; i < d; ++i) w[i] -= c * q[i];
      }
    const double res = geom::norm(w);
    if (res > geom::kOrthoTol) {
      for (auto& x : w) x /= res;
      basis.push_back(std::move(w));
      if (static_cast<int>(basis.size()) == d) break;
    }
  }
  return static_cast<int>(basis.size());
}

long long poisson_inversion(double mean, rng::Rng& rng) {
  const double target = rng.uniform01();
  double p = std::exp(-mean);
  double cdf = p;
  long long k = 0;
  while (cdf < target) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p <= 0.0) break;  // underflow guard for extreme tails
  }
  return k;
}

// Transformed rejection with squeeze (Hoermann's PTRD), valid for mean >= 10.
long long poisson_ptrd(double mean, rng::Rng& rng) {
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_sqrt_2pi = 0.9189385332046727;

  for (;;) {
    double u;
    double v = rng.uniform01();
    if (v <= 0.86 * vr) {
      u = v / vr - 0.43;
      return static_cast<long long>(std::floor(
          (2.0 * a / (0.5 - std::abs(u)) + b) * u + mean + 0.445));
    }
    if (v >= vr) {
      u = rng.uniform01() - 0.5;
    } else {
      u = v / vr - 0.93;
      u = (u < 0.0 ? -0.5 : 0.5) - u;
      v = rng.uniform01() * vr;
    }
    const double us = 0.5 - std::abs(u);
    if (us < 0.013 && v > us) continue;
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.445);
    v = v * inv_alpha / (a / (us * us) + b);
    if (kf >= 10.0) {
      if (std::log(v * smu) <=
          (kf + 0.5) * std::log(mean / kf) - mean - log_sqrt_2pi + kf -
              (1.0 / 12.0 - 1.0 / (360.0 * kf * kf)) / kf)
        return static_cast<long long>(kf);
    } else if (kf >= 0.0) {
      if (std::log(v) <=
          kf * std::log(mean) - mean - std::lgamma(kf + 1.0))
        return static_cast<long long>(kf);
    }
  }
}

}  // namespace

OrientationLaw OrientationLaw::isotropic(int d) {
  if (d < 1) throw std::invalid_argument("OrientationLaw: dimension < 1");
  OrientationLaw law;
  law.d_ = d;
  return law;
}

OrientationLaw OrientationLaw::discrete(
    std::vector<geom::UnitDirection> atoms, std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw std::invalid_argument(
        "OrientationLaw: atoms and weights must be nonempty and matched");
  const int d = atoms.front().dim();
  for (const auto& a : atoms)
    if (a.dim() != d)
      throw std::invalid_argument("OrientationLaw: mixed dimensions");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("OrientationLaw: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("OrientationLaw: weights do not sum to 1");
  if (direction_rank(atoms, d) < d)
    throw std::invalid_argument(
        "OrientationLaw: degenerate law (atom set does not span R^d)");
  OrientationLaw law;
  law.d_ = d;
  law.weights_ = weights;
  law.cumulative_.resize(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    law.cumulative_[i] = acc;
  }
  law.cumulative_.back() = 1.0;
  law.atoms_ = std::move(atoms);
  return law;
}

geom::UnitDirection OrientationLaw::sample(rng::Rng& rng) const {
  if (is_isotropic()) {
    geom::Vec v(d_);
    double n2;
    do {
      for (auto& x : v) x = rng.normal();
      n2 = geom::dot(v, v);
    } while (n2 == 0.0);
    return geom::UnitDirection::from_unnormalized(std::move(v));
  }
  const double u = rng.uniform01();
  const auto it =
      std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  return atoms_[std::min(i, atoms_.size() - 1)];
}

geom::UnitDirection sample_direction(const OrientationLaw& law,
                                     rng::Rng& rng) {
  return law.sample(rng);
}

long long sample_poisson_count(double mean, rng::Rng& rng) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw std::invalid_argument("sample_poisson_count: invalid mean");
  if (mean == 0.0) return 0;
  if (mean < 30.0) return poisson_inversion(mean, rng);
  return poisson_ptrd(mean, rng);
}

HyperplaneProcessSample sample_hyperplane_process(double lambda, double r,
                                                  const OrientationLaw& law,
                                                  rng::SeedContract seed) {
  if (lambda <= 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument("sample_hyperplane_process: invalid lambda");
  if (r <= 0.0 || !std::isfinite(r))
    throw std::invalid_argument("sample_hyperplane_process: invalid r");
  rng::Rng rng(seed);
  HyperplaneProcessSample s;
  s.d = law.dim();
  s.lambda = lambda;
  s.r = r;
  s.isotropic = law.is_isotropic();
  s.seed = seed;
  const long long n = sample_poisson_count(2.0 * lambda * r, rng);
  s.hyperplanes.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double p = rng.uniform(-r, r);
    s.hyperplanes.push_back(geom::Hyperplane{p, law.sample(rng)});
  }
  return s;
}

std::vector<std::array<double, 2>> sample_nuclei(double lambda,
                                                 const Window2& window,
                                                 rng::SeedContract seed) {
  if (window.x1 < window.x0 || window.y1 < window.y0)
    throw std::invalid_argument("sample_nuclei: empty window");
  if (lambda < 0.0) throw std::invalid_argument("sample_nuclei: lambda < 0");
  rng::Rng rng(seed);
  const long long n = sample_poisson_count(lambda * window.area(), rng);
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double x = rng.uniform(window.x0, window.x1);
    const double y = rng.uniform(window.y0, window.y1);
    pts.push_back({x, y});
  }
  return pts;
}

}  // namespace hyperflat::sampling
