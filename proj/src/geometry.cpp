#include "hyperflat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperflat::geom {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

UnitDirection::UnitDirection(Vec coords) : c_(std::move(coords)) {
  if (c_.empty()) throw std::invalid_argument("UnitDirection: empty vector");
  const double n = norm(c_);
  if (std::abs(n - 1.0) > kUnitNormTol)
    throw std::invalid_argument("UnitDirection: norm differs from 1 by " +
                                std::to_string(std::abs(n - 1.0)));
  // Hemisphere convention: last nonzero coordinate positive.
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] != 0.0) {
      if (c_[i] < 0.0)
        throw std::invalid_argument(
            "UnitDirection: not in the canonical upper hemisphere");
      break;
    }
  }
}

UnitDirection UnitDirection::from_unnormalized(Vec v) {
  const double n = norm(v);
  if (n == 0.0 || !std::isfinite(n))
    throw std::invalid_argument("UnitDirection: zero or non-finite vector");
  for (auto& x : v) x /= n;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0)
        for (auto& x : v) x = -x;
      break;
    }
  }
  return UnitDirection(std::move(v));
}

double unit_ball_volume(int d) {
  if (d < 0 || d > 30)
    throw std::invalid_argument("unit_ball_volume: dimension out of [0, 30]");
  return std::exp(0.5 * d * std::log(std::numbers::pi) -
                  std::lgamma(0.5 * d + 1.0));
}

namespace {

// Cholesky of the m x m Gram matrix of the subset orientations. Returns the
// determinant (product of squared pivots) or a negative value on failure.
double cholesky_in_place(std::vector<double>& g, int m) {
  double det = 1.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i * m + j];
      for (int k = 0; k < j; ++k) s -= g[i * m + k] * g[j * m + k];
      if (i == j) {
        if (s <= 0.0) return -1.0;
        g[i * m + i] = std::sqrt(s);
        det *= s;
      } else {
        g[i * m + j] = s / g[j * m + j];
      }
    }
  }
  return det;
}

// Solves L L^T x = b in place, L lower-triangular from cholesky_in_place.
void cholesky_solve(const std::vector<double>& g, int m,
                    std::vector<double>& b) {
  for (int i = 0; i < m; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= g[i * m + k] * b[k];
    b[i] = s / g[i * m + i];
  }
  for (int i = m; i-- > 0;) {
    double s = b[i];
    for (int k = i + 1; k < m; ++k) s -= g[k * m + i] * b[k];
    b[i] = s / g[i * m + i];
  }
}

// Modified Gram-Schmidt with one reorthogonalization pass. Returns the
// residual norm before normalization; the candidate is orthogonalized
// against basis in place.
double orthogonalize(Vec& w, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& q : basis) {
      const double c = dot(w, q);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
    }
  return norm(w);
}

}  // namespace

Flat intersect_hyperplanes(const std::vector<Hyperplane>& planes, int d) {
  const int m = static_cast<int>(planes.size());
  if (m < 1 || m > d)
    throw std::invalid_argument("intersect_hyperplanes: need 1 <= m <= d");
  for (const auto& h : planes)
    if (h.v.dim() != d)
      throw std::invalid_argument("intersect_hyperplanes: dimension mismatch");

  std::vector<double> gram(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      gram[i * m + j] = dot(planes[i].v.coords(), planes[j].v.coords());
  const double det = cholesky_in_place(gram, m);
  if (det < kOrthoTol)
    throw DegenerateConfiguration(
        "intersect_hyperplanes: Gram determinant below tolerance");

  std::vector<double> c(m);
  for (int i = 0; i < m; ++i) c[i] = planes[i].p;
  cholesky_solve(gram, m, c);

  Flat f;
  f.dim = d - m;
  f.foot.assign(d, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) f.foot[j] += c[i] * planes[i].v[j];

  // Orthonormalize the orientations, then extend with coordinate vectors;
  // the extension spans the flat's directions.
  std::vector<Vec> basis;
  basis.reserve(d);
  for (int i = 0; i < m; ++i) {
    Vec w = planes[i].v.coords();
    const double res = orthogonalize(w, basis);
    if (res < 1e-8)
      throw DegenerateConfiguration(
          "intersect_hyperplanes: orientation set is rank deficient");
    for (auto& x : w) x /= res;
    basis.push_back(std::move(w));
  }
  f.frame.reserve(d - m);
  for (int j = 0; j < d && static_cast<int>(basis.size()) < d; ++j) {
    Vec w(d, 0.0);
    w[j] = 1.0;
    const double res = orthogonalize(w, basis);
    if (res < 1e-8) continue;
    for (auto& x : w) x /= res;
    basis.push_back(w);
    f.frame.push_back(std::move(w));
  }
  if (static_cast<int>(f.frame.size()) != d - m)
    throw DegenerateConfiguration(
        "intersect_hyperplanes: failed to complete the frame");
  return f;
}

bool flat_hits_ball(const Flat& f, double r) {
  return f.distance_to_origin() <= r;
}

double flat_ball_volume(const Flat& f, double r) {
  const double delta = f.distance_to_origin();
  if (delta > r) return 0.0;
  if (f.dim == 0) return 1.0;
  return unit_ball_volume(f.dim) *
         std::pow(r * r - delta * delta, 0.5 * f.dim);
}

double parallelotope_volume(const std::vector<Vec>& vectors) {
  const int m = static_cast<int>(vectors.size());
  if (m == 0) return 1.0;
  std::vector<double> gram(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram[i * m + j] = dot(vectors[i], vectors[j]);
  const double det = cholesky_in_place(gram, m);
  return det <= 0.0 ? 0.0 : std::sqrt(det);
}

double ball_set_covariance_2d(double r, double u) {
  if (r <= 0.0) throw std::invalid_argument("ball_set_covariance_2d: r <= 0");
  if (u < 0.0) throw std::invalid_argument("ball_set_covariance_2d: u < 0");
  if (u >= 2.0 * r) return 0.0;
  return 2.0 * r * r * std::acos(u / (2.0 * r)) -
         0.5 * u * std::sqrt(4.0 * r * r - u * u);
}

FootSolver::FootSolver(int d, int m)
    : d_(d), m_(m), gram_(static_cast<std::size_t>(m) * m), rhs_(m) {}

std::optional<double> FootSolver::foot_norm2(
    const std::vector<Hyperplane>& planes, const int* idx) {
  for (int i = 0; i < m_; ++i) {
    const Vec& vi = planes[idx[i]].v.coords();
    for (int j = 0; j <= i; ++j) {
      const Vec& vj = planes[idx[j]].v.coords();
      double s = 0.0;
      for (int t = 0; t < d_; ++t) s += vi[t] * vj[t];
      gram_[i * m_ + j] = s;
      gram_[j * m_ + i] = s;
    }
    rhs_[i] = planes[idx[i]].p;
  }
  const double det = cholesky_in_place(gram_, m_);
  if (det < kOrthoTol) return std::nullopt;
  // ||foot||^2 = p^T G^{-1} p for the minimum-norm solution.
  double q = 0.0;
  cholesky_solve(gram_, m_, rhs_);
  for (int i = 0; i < m_; ++i) q += rhs_[i] * planes[idx[i]].p;
  return q;
}

}  // namespace hyperflat::geom
