#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperflat/closed_forms.hpp"
#include "hyperflat/geometry.hpp"

using namespace hyperflat;

namespace {
constexpr double kPi = std::numbers::pi;

// Composite Simpson on [a, b].
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Cholesky success == symmetric positive definite.
bool is_positive_definite(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m[j][j];
    for (std::size_t k = 0; k < j; ++k) diag -= m[j][k] * m[j][k];
    if (diag <= 0.0) return false;
    m[j][j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m[i][j];
      for (std::size_t k = 0; k < j; ++k) v -= m[i][k] * m[j][k];
      m[i][j] = v / m[j][j];
    }
  }
  return true;
}
}  // namespace

TEST_CASE("kappa agrees with unit_ball_volume") {
  for (int d = 0; d <= 30; ++d)
    CHECK(closed::kappa(d) ==
          doctest::Approx(geom::unit_ball_volume(d)).epsilon(1e-13));
  CHECK(std::isfinite(closed::log_kappa(200)));
  CHECK_THROWS_AS(closed::log_kappa(201), std::invalid_argument);
}

TEST_CASE("beta function") {
  CHECK(closed::beta_function(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(closed::beta_function(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-13));
  for (int j = 1; j <= 8; ++j) {
    const double lhs = closed::beta_function(j, j);
    const double rhs = std::exp(2.0 * closed::log_factorial(j - 1) -
                                closed::log_factorial(2 * j - 1));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  CHECK_THROWS_AS(closed::beta_function(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Legendre duplication self-test of the gamma implementation") {
  for (int s = 1; s <= 15; ++s) {
    const double lhs = (2.0 * s - 1.0) * std::numbers::ln2 +
                       closed::log_gamma(s + 0.5) + closed::log_gamma(s);
    const double rhs = 0.5 * std::log(kPi) + closed::log_gamma(2.0 * s);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("even-power integral identity by quadrature") {
  // int_0^1 (1 - p^2)^s dp = (s! 2^s)^2 / (2s+1)!
  for (int s = 0; s <= 8; ++s) {
    const double q = simpson(
        [s](double p) { return std::pow(1.0 - p * p, s); }, 0.0, 1.0, 20000);
    const double closed_form =
        std::exp(2.0 * (closed::log_factorial(s) + s * std::numbers::ln2) -
                 closed::log_factorial(2 * s + 1));
    CHECK(q == doctest::Approx(closed_form).epsilon(1e-10));
  }
}

TEST_CASE("k-flat intensities") {
  CHECK(closed::intensity_lambda_k(2, 1, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(closed::intensity_lambda_k(2, 0, 1.0) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(closed::intensity_lambda_k(3, 1, 1.0) ==
        doctest::Approx(kPi / 8.0).epsilon(1e-14));
  for (int d = 1; d <= 10; ++d)
    for (double lam : {0.1, 1.0, 7.0})
      CHECK(closed::intensity_lambda_k(d, d - 1, lam) ==
            doctest::Approx(lam).epsilon(1e-12));
  CHECK_THROWS_AS(closed::intensity_lambda_k(2, 2, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(closed::intensity_lambda_k(2, 0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("stabilizer constants") {
  CHECK(closed::stabilizer_a(2, 0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(closed::stabilizer_b(1) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-13));
  CHECK(closed::stabilizer_b(2) ==
        doctest::Approx(2.0 / (std::sqrt(3.0) * kPi)).epsilon(1e-13));
  // Monotonicity of the derived form.
  for (int j = 1; j <= 9; ++j)
    CHECK(closed::stabilizer_b(j) < closed::stabilizer_b(j + 1));
}

TEST_CASE("printed stabilizer variant is not monotone (documented defect)") {
  // The variant with (2j-1)! outside the square root disagrees with the
  // derived form from j = 2 on and breaks the monotonicity property that
  // the corrected form satisfies.
  CHECK(closed::stabilizer_b_printed(1) ==
        doctest::Approx(closed::stabilizer_b(1)).epsilon(1e-13));
  CHECK(closed::stabilizer_b_printed(2) < closed::stabilizer_b_printed(1));
  CHECK(closed::stabilizer_b_printed(2) != doctest::Approx(closed::stabilizer_b(2)));
}

TEST_CASE("sigma_chi values and quadrature oracle") {
  CHECK(closed::sigma_chi(2, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(closed::sigma_chi(2, 0) ==
        doctest::Approx(8.0 / (3.0 * kPi * kPi)).epsilon(1e-13));
  // sigma = (1/2r) int_{-r}^{r} g_chi(p)^2 dp with the kernel evaluated
  // independently; quadrature at r = 1.
  for (auto [d, k] : {std::pair{3, 0}, {3, 1}, {4, 2}, {5, 0}}) {
    const double q = simpson(
        [d = d, k = k](double p) {
          const double g = closed::g_chi_kernel(d, k, p, 1.0);
          return g * g;
        },
        -1.0, 1.0, 20000) /
        2.0;
    CHECK(closed::sigma_chi(d, k) == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("sigma_nu values and oracles") {
  // d=2, k=1: direct oracle E[(2 sqrt(1-P^2))^2] = 4 * 2/3 = 8/3.
  CHECK(closed::sigma_nu(2, 1) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  const double direct =
      simpson([](double p) {
        const double c = 2.0 * std::sqrt(std::max(0.0, 1.0 - p * p));
        return c * c;
      }, -1.0, 1.0, 20000) / 2.0;
  CHECK(closed::sigma_nu(2, 1) == doctest::Approx(direct).epsilon(1e-9));
  for (auto [d, k] : {std::pair{2, 0}, {1, 0}, {3, 1}}) {
    const double q = simpson(
        [d = d, k = k](double p) {
          const double g = closed::g_nu_kernel(d, k, p, 1.0);
          return g * g;
        },
        -1.0, 1.0, 20000) /
        2.0;
    CHECK(closed::sigma_nu(d, k) == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("mixed covariances: diagonal, dual forms, rank structure") {
  for (int d = 2; d <= 6; ++d)
    for (int k = 0; k < d; ++k) {
      CHECK(closed::sigma_chi_mixed(d, k, k) ==
            doctest::Approx(closed::sigma_chi(d, k)).epsilon(1e-12));
      CHECK(closed::sigma_nu_mixed(d, k, k) ==
            doctest::Approx(closed::sigma_nu(d, k)).epsilon(1e-12));
      for (int l = 0; l < d; ++l) {
        // Explicit kappa-product form vs Beta-ratio form.
        CHECK(closed::sigma_chi_mixed(d, k, l) ==
              doctest::Approx(closed::sigma_chi_mixed_beta(d, k, l))
                  .epsilon(1e-12));
        // Rank-1 identity for the volume family.
        CHECK(closed::sigma_nu_mixed(d, k, l) ==
              doctest::Approx(std::sqrt(closed::sigma_nu(d, k) *
                                        closed::sigma_nu(d, l)))
                  .epsilon(1e-12));
      }
    }
}

TEST_CASE("chi covariance matrix is positive definite for d = 2..6") {
  for (int d = 2; d <= 6; ++d) {
    std::vector<std::vector<double>> m(static_cast<std::size_t>(d),
                                       std::vector<double>(d));
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        m[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
            closed::sigma_chi_mixed(d, k, l);
    CHECK(is_positive_definite(m));
  }
}

TEST_CASE("Matheron second moment of the k-volume") {
  // The j = 0 term must reproduce the squared mean.
  for (int d = 1; d <= 4; ++d)
    for (int k = 0; k < d; ++k)
      for (double lam : {0.5, 1.0})
        for (double r : {1.0, 5.0}) {
          const double mean = closed::mean_zeta_k(d, k, lam, r);
          CHECK(closed::matheron_term(d, k, lam, r, 0) ==
                doctest::Approx(mean * mean).epsilon(1e-12));
        }
  // Var zeta_1 in the plane: 16 lambda r^3 / 3.
  for (double lam : {1.0, 2.0})
    for (double r : {1.0, 5.0}) {
      const double mean = closed::mean_zeta_k(2, 1, lam, r);
      const double var =
          closed::matheron_second_moment_zeta(2, 1, lam, r) - mean * mean;
      CHECK(var ==
            doctest::Approx(16.0 * lam * r * r * r / 3.0).epsilon(1e-11));
    }
  // r -> 0 limit.
  CHECK(closed::matheron_second_moment_zeta(3, 1, 1.0, 1e-4) < 1e-12);
}

TEST_CASE("exact planar vertex-count variance") {
  const double expect = 8000.0 * 8.0 / (3.0 * kPi * kPi) + 400.0 / 4.0;
  CHECK(closed::exact_var_psi0_2d(1.0, 10.0) ==
        doctest::Approx(expect).epsilon(1e-13));
  CHECK(closed::exact_var_psi0_2d(1e-6, 1e-3) < 1e-12);
}

TEST_CASE("pair correlation coefficients and variance identity") {
  CHECK(closed::pair_corr_coeff(2, 1) ==
        doctest::Approx(4.0 / kPi).epsilon(1e-13));
  CHECK(closed::pair_correlation_g0(2, 1.0, 1e9) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(closed::pair_correlation_g0(2, 1.0, 0.0),
                  std::invalid_argument);

  // 2 kappa_2 lambda_0^2 int_0^{2r} A(r,u) (g_0(u) - 1) u du
  //   + lambda_0 kappa_2 r^2  ==  exact_var_psi0_2d.
  for (double lam : {1.0, 2.0})
    for (double r : {2.0, 5.0}) {
      const double lam0 = closed::intensity_lambda_k(2, 0, lam);
      const double integral = simpson(
          [&](double u) {
            if (u <= 0.0) return 0.0;
            return geom::ball_set_covariance_2d(r, u) *
                   (closed::pair_correlation_g0(2, lam, u) - 1.0) * u;
          },
          0.0, 2.0 * r, 40000);
      const double route =
          2.0 * kPi * lam0 * lam0 * integral + lam0 * kPi * r * r;
      CHECK(route ==
            doctest::Approx(closed::exact_var_psi0_2d(lam, r)).epsilon(1e-4));
    }
}

TEST_CASE("planar mu") {
  CHECK(closed::planar_mu(kPi, kPi) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(closed::planar_mu(0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(closed::planar_mu(kPi / 2.0, kPi / 2.0) ==
        doctest::Approx((kPi - 2.0) / (4.0 * kPi)).epsilon(1e-13));
  CHECK_THROWS_AS(closed::planar_mu(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("planar mu matches the reduced angle-space quadrature") {
  // For fixed angles the (p1, p2) -> intersection map is linear with
  // Jacobian |sin(g2 - g1)|, so the hitting probability given the angles is
  // (pi/4) |sin(g2 - g1)|; mu averages it against the symmetrized box
  // weight (1 if both angles <= a, 1/2 if the pair fits [0,a] x [0,b] in
  // exactly one ordering).
  for (auto [a, b] : {std::pair{kPi / 2.0, kPi / 2.0},
                      {kPi / 2.0, kPi},
                      {kPi, kPi},
                      {1.0, 2.5}}) {
    const int n = 1500;
    const double h = kPi / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g1 = (i + 0.5) * h;
      for (int j = 0; j < n; ++j) {
        const double g2 = (j + 0.5) * h;
        const double lo = std::min(g1, g2), hi = std::max(g1, g2);
        const double w = hi <= a ? 1.0 : (lo <= a && hi <= b ? 0.5 : 0.0);
        acc += w * std::abs(std::sin(g2 - g1));
      }
    }
    const double oracle = (kPi / 4.0) * acc * h * h / (kPi * kPi);
    CHECK(closed::planar_mu(a, b) == doctest::Approx(oracle).epsilon(2e-3));
  }
}

TEST_CASE("planar sigma") {
  CHECK(closed::planar_sigma(kPi, kPi) ==
        doctest::Approx(closed::sigma_chi(2, 0)).epsilon(1e-13));
  CHECK(closed::planar_sigma(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("planar sigma matches the reduced quadrature oracle") {
  // g_B((p, g1)) = sqrt(1 - p^2) h(g1) at r = 1 with
  //   h(g1) = (1/pi) int w(g1, g2) |sin(g2 - g1)| dg2
  // for the symmetrized box weight w, hence
  // sigma_B = E g_B^2 = (2/3) (1/pi) int h(g1)^2 dg1.
  for (auto [a, b] : {std::pair{kPi / 2.0, kPi}, {kPi, kPi}, {1.0, 2.0}}) {
    auto h_of = [&](double g1) {
      return simpson(
                 [&](double g2) {
                   const double lo = std::min(g1, g2), hi = std::max(g1, g2);
                   const double w =
                       hi <= a ? 1.0 : (lo <= a && hi <= b ? 0.5 : 0.0);
                   return w * std::abs(std::sin(g2 - g1));
                 },
                 0.0, kPi, 2000) /
             kPi;
    };
    const double oracle =
        (2.0 / 3.0) *
        simpson([&](double g1) { const double h = h_of(g1); return h * h; },
                0.0, kPi, 600) /
        kPi;
    CHECK(closed::planar_sigma(a, b) == doctest::Approx(oracle).epsilon(1e-3));
  }
}

TEST_CASE("Voronoi vertex intensity constant") {
  CHECK(closed::pvt_vertex_constant(2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(closed::pvt_vertex_constant(3) ==
        doctest::Approx(6.768).epsilon(0.001 / 6.768));
  CHECK_THROWS_AS(closed::pvt_vertex_constant(1), std::invalid_argument);
  CHECK_THROWS_AS(closed::pvt_vertex_constant(11), std::invalid_argument);
}

TEST_CASE("hitting kernels") {
  CHECK(closed::g_chi_kernel(2, 0, 0.0, 1.0) ==
        doctest::Approx(2.0 / kPi).epsilon(1e-13));
  // k = d-1: the kernel is constant 1 (no extra hyperplanes to average).
  for (int d = 2; d <= 5; ++d)
    for (double p : {0.0, 0.5, 0.99})
      CHECK(closed::g_chi_kernel(d, d - 1, p, 1.0) ==
            doctest::Approx(1.0).epsilon(1e-12));
  for (double p : {0.0, 0.4, 0.9})
    CHECK(closed::g_nu_kernel(2, 1, p, 2.0) ==
          doctest::Approx(2.0 * std::sqrt(1.0 - p * p / 4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(closed::g_chi_kernel(2, 0, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("hit probability and mean formulas") {
  CHECK(closed::hit_probability_mu(2, 0) == doctest::Approx(0.5).epsilon(1e-13));
  // Means: E Psi_k = lambda_k kappa_{d-k} r^{d-k}; E zeta_k = lambda_k kappa_d r^d.
  CHECK(closed::mean_psi_k(2, 0, 1.0, 10.0) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK(closed::mean_psi_k(2, 1, 1.0, 10.0) ==
        doctest::Approx(20.0).epsilon(1e-12));
  CHECK(closed::mean_zeta_k(2, 1, 1.0, 10.0) ==
        doctest::Approx(100.0 * kPi).epsilon(1e-12));
}
