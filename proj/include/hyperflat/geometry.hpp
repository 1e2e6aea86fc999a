#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperflat::geom {

using Vec = std::vector<double>;

// Global tolerance table (kept in one place so property tests are
// reproducible).
inline constexpr double kUnitNormTol = 1e-12;   // unit-norm validation
inline constexpr double kOrthoTol = 1e-10;      // orthogonality / Gram degeneracy
inline constexpr double kResidualTol = 1e-9;    // hyperplane-equation residual

struct DegenerateConfiguration : std::runtime_error {
  explicit DegenerateConfiguration(const std::string& what)
      : std::runtime_error(what) {}
};

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);

/// Unit vector on the upper hemisphere S_+^{d-1}: ||v|| = 1 and the last
/// nonzero coordinate is positive (last coordinate >= 0 in the generic case).
class UnitDirection {
 public:
  explicit UnitDirection(Vec coords);

  /// Normalizes and reflects into the canonical hemisphere representative.
  static UnitDirection from_unnormalized(Vec v);

  const Vec& coords() const { return c_; }
  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](std::size_t i) const { return c_[i]; }

  friend bool operator<(const UnitDirection& a, const UnitDirection& b) {
    return a.c_ < b.c_;  // lexicographic; the canonical linear ordering
  }
  friend bool operator==(const UnitDirection& a, const UnitDirection& b) {
    return a.c_ == b.c_;
  }

 private:
  Vec c_;
};

/// H(p, v) = {x : <x, v> = p}.
struct Hyperplane {
  double p;
  UnitDirection v;

  double signed_eval(const Vec& x) const { return dot(x, v.coords()) - p; }
  bool contains(const Vec& x, double tol = kResidualTol) const {
    return std::abs(signed_eval(x)) <= tol;
  }
};

/// A k-dimensional affine subspace stored as its nearest point to the origin
/// plus an orthonormal frame spanning its directions.
struct Flat {
  int dim;
  Vec foot;
  std::vector<Vec> frame;

  double distance_to_origin() const { return norm(foot); }
};

struct Ball {
  double r;
};

/// kappa_d = pi^{d/2} / Gamma(d/2 + 1), the d-dimensional unit-ball volume.
/// Valid for 0 <= d <= 30.
double unit_ball_volume(int d);

/// Intersects m hyperplanes in R^d into a (d-m)-flat. The foot is the
/// minimum-norm solution of the linear system; the frame spans the null
/// space of the orientation matrix. Throws DegenerateConfiguration when the
/// Gram determinant of the orientations falls below kOrthoTol.
Flat intersect_hyperplanes(const std::vector<Hyperplane>& planes, int d);

bool flat_hits_ball(const Flat& f, double r);

/// k-volume of the flat's intersection with B_r^d: kappa_k (r^2 - delta^2)^{k/2}
/// with delta the flat's distance to the origin; the counting value {0, 1}
/// for k = 0.
double flat_ball_volume(const Flat& f, double r);

/// sqrt(det Gram); 0 for rank-deficient input.
double parallelotope_volume(const std::vector<Vec>& vectors);

/// Area of B_r^2 intersected with its translate by (u, 0); the lens formula
/// 2 r^2 acos(u / 2r) - (u/2) sqrt(4 r^2 - u^2) for u <= 2r, else 0.
double ball_set_covariance_2d(double r, double u);

/// Workspace-reusing minimum-norm solver for the subset-enumeration hot
/// loops: computes only the squared distance of the intersection flat to the
/// origin. Returns nullopt when the subset is degenerate.
class FootSolver {
 public:
  FootSolver(int d, int m);

  /// planes[idx[0..m-1]] are intersected; result is ||foot||^2.
  std::optional<double> foot_norm2(const std::vector<Hyperplane>& planes,
                                   const int* idx);

 private:
  int d_, m_;
  std::vector<double> gram_;  // m x m, lower Cholesky factor in place
  std::vector<double> rhs_;
};

}  // namespace hyperflat::geom
