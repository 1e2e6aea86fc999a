#include "hyperflat/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperflat::closed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
const double kLnPi = std::log(kPi);

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Common tail (kappa_{d-1} / (d kappa_d)) in log space.
double log_crofton_ratio(int d) {
  return log_kappa(d - 1) - std::log(static_cast<double>(d)) - log_kappa(d);
}

}  // namespace

double log_gamma(double s) {
  require(s > 0.0, "log_gamma: nonpositive argument");
  return std::lgamma(s);
}

double gamma_fn(double s) {
  require(s > 0.0, "gamma_fn: nonpositive argument");
  return std::tgamma(s);
}

double beta_function(double s, double t) {
  require(s > 0.0 && t > 0.0, "beta_function: nonpositive argument");
  return std::exp(std::lgamma(s) + std::lgamma(t) - std::lgamma(s + t));
}

double log_factorial(int n) {
  require(n >= 0, "log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double binomial(int n, int k) {
  require(n >= 0 && k >= 0 && k <= n, "binomial: out of range");
  return std::round(std::exp(log_factorial(n) - log_factorial(k) -
                             log_factorial(n - k)));
}

double log_kappa(int d) {
  require(d >= 0 && d <= 200, "log_kappa: dimension out of [0, 200]");
  return 0.5 * d * kLnPi - std::lgamma(0.5 * d + 1.0);
}

double kappa(int d) { return std::exp(log_kappa(d)); }

double stabilizer_a(int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "stabilizer_a: need 0 <= k <= d-1");
  const double lg = log_factorial(d) - log_factorial(k) -
                    log_factorial(d - k) + log_kappa(d) - log_kappa(k) +
                    (d - k) * log_crofton_ratio(d);
  return std::exp(lg);
}

double intensity_lambda_k(int d, int k, double lambda) {
  require(lambda > 0.0, "intensity_lambda_k: lambda <= 0");
  return stabilizer_a(d, k) * std::pow(lambda, d - k);
}

double stabilizer_b(int j) {
  require(j >= 1, "stabilizer_b: need j >= 1");
  const double lg = (j - 1) * kLn2 + log_factorial(j - 1) + log_kappa(j - 1) -
                    0.5 * kLn2 - 0.5 * log_factorial(2 * j - 1) - log_kappa(j);
  return std::exp(lg);
}

double stabilizer_b_printed(int j) {
  require(j >= 1, "stabilizer_b_printed: need j >= 1");
  const double lg = (j - 1) * kLn2 + log_factorial(j - 1) + log_kappa(j - 1) -
                    0.5 * kLn2 - log_factorial(2 * j - 1) - log_kappa(j);
  return std::exp(lg);
}

double sigma_chi(int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "sigma_chi: need 0 <= k <= d-1");
  const double lg =
      2.0 * (log_kappa(d - k - 1) + log_factorial(d - k - 1)) -
      log_factorial(2 * d - 2 * k - 1) +
      2.0 * (log_factorial(d) + log_kappa(d) - log_factorial(k) -
             log_kappa(k)) +
      2.0 * (d - k) * log_crofton_ratio(d);
  return std::exp(lg);
}

double sigma_nu(int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "sigma_nu: need 0 <= k <= d-1");
  const double lg =
      2.0 * (k * kLn2 + log_kappa(d - 1) + log_factorial(d - 1)) -
      log_factorial(2 * d - 1) +
      2.0 * (log_factorial(d) + log_kappa(d) - log_factorial(k) -
             log_kappa(k)) +
      2.0 * (d - k) * log_crofton_ratio(d);
  return std::exp(lg);
}

double sigma_chi_mixed(int d, int k, int l) {
  require(d >= 1 && k >= 0 && l >= 0 && k <= d - 1 && l <= d - 1,
          "sigma_chi_mixed: need 0 <= k,l <= d-1");
  const double lg =
      2.0 * (log_factorial(d) + log_kappa(d)) + log_kappa(d - k - 1) +
      log_kappa(d - l - 1) + log_kappa(2 * d - k - l - 1) -
      log_factorial(k) - log_factorial(l) - log_kappa(k) - log_kappa(l) -
      (2 * d - k - l - 1) * kLn2 - log_kappa(2 * d - k - l - 2) +
      (2 * d - k - l) * log_crofton_ratio(d);
  return std::exp(lg);
}

double sigma_chi_mixed_beta(int d, int k, int l) {
  require(d >= 1 && k >= 0 && l >= 0 && k <= d - 1 && l <= d - 1,
          "sigma_chi_mixed_beta: need 0 <= k,l <= d-1");
  const double s = 0.5 * (2 * d - k - l);
  return std::sqrt(sigma_chi(d, k) * sigma_chi(d, l)) * beta_function(s, s) /
         std::sqrt(beta_function(d - k, d - k) * beta_function(d - l, d - l));
}

double sigma_nu_mixed(int d, int k, int l) {
  require(d >= 1 && k >= 0 && l >= 0 && k <= d - 1 && l <= d - 1,
          "sigma_nu_mixed: need 0 <= k,l <= d-1");
  const double lg =
      2.0 * (log_kappa(d) + log_kappa(d - 1) + log_factorial(d) +
             log_factorial(d - 1)) +
      (k + l) * kLn2 - log_factorial(k) - log_factorial(l) - log_kappa(k) -
      log_kappa(l) - log_factorial(2 * d - 1) +
      (2 * d - k - l) * log_crofton_ratio(d);
  return std::exp(lg);
}

double matheron_term(int d, int k, double lambda, double r, int j) {
  require(d >= 1 && k >= 0 && k <= d - 1, "matheron_term: need 0 <= k <= d-1");
  require(j >= 0 && j <= d - k, "matheron_term: need 0 <= j <= d-k");
  require(lambda > 0.0 && r > 0.0, "matheron_term: lambda, r > 0 required");
  const double lg =
      log_factorial(d) + log_factorial(d - j) + (2 * d - j) * std::log(r) -
      log_factorial(j) - 2.0 * (log_factorial(k) + log_factorial(d - k - j)) +
      log_kappa(2 * d - j) + log_kappa(d) + 3.0 * log_kappa(d - j) -
      log_kappa(2 * (d - j)) - 2.0 * log_kappa(k) +
      (2 * (d - k) - j) * (std::log(lambda) + log_crofton_ratio(d));
  return std::exp(lg);
}

double mean_psi_k(int d, int k, double lambda, double r) {
  return intensity_lambda_k(d, k, lambda) * kappa(d - k) * std::pow(r, d - k);
}

double mean_zeta_k(int d, int k, double lambda, double r) {
  return intensity_lambda_k(d, k, lambda) * kappa(d) * std::pow(r, d);
}

double matheron_second_moment_zeta(int d, int k, double lambda, double r) {
  double sum = 0.0;
  for (int j = 0; j <= d - k; ++j) sum += matheron_term(d, k, lambda, r, j);
  const double mean = mean_zeta_k(d, k, lambda, r);
  const double term0 = matheron_term(d, k, lambda, r, 0);
  if (std::abs(term0 - mean * mean) > 1e-9 * mean * mean)
    throw std::logic_error(
        "matheron_second_moment_zeta: j = 0 term disagrees with squared mean");
  return sum;
}

double hit_probability_mu(int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1,
          "hit_probability_mu: need 0 <= k <= d-1");
  const double lg = (k - d) * kLn2 + log_factorial(d) - log_factorial(k) +
                    log_kappa(d) + log_kappa(d - k) - log_kappa(k) +
                    (d - k) * log_crofton_ratio(d);
  return std::exp(lg);
}

double exact_var_psi0_2d(double lambda, double r) {
  require(lambda >= 0.0 && r >= 0.0, "exact_var_psi0_2d: negative input");
  const double n = 2.0 * lambda * r;
  const double s1 = 8.0 / (3.0 * kPi * kPi);
  const double s2 = 0.5;  // the kernel is an indicator, so sigma^{(2,2)} = mu
  return n * n * n * s1 + 0.5 * n * n * s2;
}

double pair_corr_coeff(int d, int j) {
  require(d >= 2 && j >= 1 && j <= d - 1, "pair_corr_coeff: need 1 <= j <= d-1");
  const double lg = log_factorial(d - 1) - log_factorial(j) -
                    log_factorial(d - 1 - j) +
                    2.0 * (log_kappa(d - j) - log_kappa(d)) -
                    j * log_crofton_ratio(d);
  return std::exp(lg);
}

double pair_correlation_g0(int d, double lambda, double r_arg) {
  require(r_arg > 0.0, "pair_correlation_g0: r_arg <= 0");
  require(lambda > 0.0, "pair_correlation_g0: lambda <= 0");
  double g = 1.0;
  for (int j = 1; j <= d - 1; ++j)
    g += pair_corr_coeff(d, j) * std::pow(lambda * r_arg, -j);
  return g;
}

double planar_mu(double a, double b) {
  require(a >= 0.0 && a <= b && b <= kPi + 1e-15,
          "planar_mu: need 0 <= a <= b <= pi");
  return (2.0 * a - std::sin(a) - std::sin(b) + std::sin(b - a)) /
         (4.0 * kPi);
}

double planar_sigma(double a, double b) {
  require(a >= 0.0 && a <= b && b <= kPi + 1e-15,
          "planar_sigma: need 0 <= a <= b <= pi");
  // (2/(3 pi)) integral of h(gamma)^2 over [0, pi], where
  //   h(gamma) = (1/pi) int_0^pi w(gamma, u) |sin(u - gamma)| du
  // and w is the symmetric box weight of planar_box_weight.
  return (6.0 * a * std::cos(a) + 4.0 * a * std::cos(b) +
          2.0 * a * std::cos(a - b) + 36.0 * a - 2.0 * b * std::cos(a) +
          2.0 * b - 43.0 * std::sin(a) + 2.0 * std::sin(2.0 * a) -
          14.0 * std::sin(b) + std::sin(2.0 * b) + std::sin(a - 2.0 * b) -
          15.0 * std::sin(a - b) + std::sin(a + b) +
          2.0 * std::sin(2.0 * a - b)) /
         (12.0 * kPi * kPi * kPi);
}

double pvt_vertex_constant(int d) {
  require(d >= 2 && d <= 10, "pvt_vertex_constant: need 2 <= d <= 10");
  const double lg = d * kLn2 + (d - 1) * kLnPi -
                    std::log(static_cast<double>(d + 1)) + log_kappa(d * d) -
                    log_kappa(d * d - 1) +
                    d * (log_kappa(d - 1) - log_kappa(d));
  return std::exp(lg);
}

double g_chi_kernel(int d, int k, double p, double r) {
  require(d >= 1 && k >= 0 && k <= d - 1, "g_chi_kernel: need 0 <= k <= d-1");
  require(r > 0.0 && std::abs(p) <= r, "g_chi_kernel: need |p| <= r");
  const double lg = log_kappa(d - k - 1) - (d - k - 1) * kLn2 +
                    log_factorial(d) + log_kappa(d) - log_factorial(k) -
                    log_kappa(k) + (d - k) * log_crofton_ratio(d);
  return std::exp(lg) *
         std::pow(1.0 - (p / r) * (p / r), 0.5 * (d - k - 1));
}

double g_nu_kernel(int d, int k, double p, double r) {
  require(d >= 1 && k >= 0 && k <= d - 1, "g_nu_kernel: need 0 <= k <= d-1");
  require(r > 0.0 && std::abs(p) <= r, "g_nu_kernel: need |p| <= r");
  const double lg = log_kappa(d - 1) - (d - k - 1) * kLn2 + log_factorial(d) +
                    log_kappa(d) - log_factorial(k) - log_kappa(k) +
                    (d - k) * log_crofton_ratio(d);
  return std::exp(lg) * std::pow(1.0 - (p / r) * (p / r), 0.5 * (d - 1));
}

}  // namespace hyperflat::closed
