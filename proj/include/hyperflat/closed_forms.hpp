#pragma once

#include <vector>

namespace hyperflat::closed {

double log_gamma(double s);
double gamma_fn(double s);

/// Euler's Beta function B(s, t) = Gamma(s) Gamma(t) / Gamma(s + t).
double beta_function(double s, double t);

double log_factorial(int n);
double binomial(int n, int k);

/// log kappa_d for 0 <= d <= 200 (kappa_{d^2} is needed up to d = 10).
double log_kappa(int d);
double kappa(int d);

/// Intensity of the induced k-flat process for an isotropic hyperplane
/// process of intensity lambda:
///   lambda_k = C(d,k) (kappa_d/kappa_k) (kappa_{d-1}/(d kappa_d))^{d-k} lambda^{d-k}.
double intensity_lambda_k(int d, int k, double lambda);

/// a_{d,k} = lambda_k / lambda^{d-k} (the dimensionless intensity factor).
double stabilizer_a(int d, int k);

/// b_j = 2^{j-1} (j-1)! kappa_{j-1} / (sqrt(2) sqrt((2j-1)!) kappa_j).
/// This is the corrected form with (2j-1)! under the square root; it is
/// strictly increasing in j and reproduces the planar road-network bounds.
double stabilizer_b(int j);

/// The uncorrected variant with (2j-1)! outside the root, kept only so the
/// discrepancy (it is not monotone in j) stays documented by a test.
double stabilizer_b_printed(int j);

/// Asymptotic variance of the standardized k-flat count (isotropic law).
double sigma_chi(int d, int k);

/// Asymptotic variance of the standardized k-flat volume (isotropic law).
double sigma_nu(int d, int k);

/// Mixed covariance of standardized counts, explicit kappa-product form.
double sigma_chi_mixed(int d, int k, int l);

/// Same quantity via the Beta-ratio form
///   sqrt(sigma_chi_k sigma_chi_l) B(s, s) / sqrt(B(d-k, d-k) B(d-l, d-l)),
/// s = (2d - k - l)/2. Both forms must agree to 1e-12.
double sigma_chi_mixed_beta(int d, int k, int l);

/// Mixed covariance of standardized volumes; satisfies the rank-1 identity
/// sigma_nu_mixed(d,k,l) = sqrt(sigma_nu(d,k) sigma_nu(d,l)).
double sigma_nu_mixed(int d, int k, int l);

/// The j-th term of the finite-r second-moment expansion of the total
/// k-volume in B_r^d (j = 0 .. d-k).
double matheron_term(int d, int k, double lambda, double r, int j);

/// E zeta_k^2(B_r^d); checks per call that the j = 0 term equals the squared
/// mean and throws std::logic_error on violation.
double matheron_second_moment_zeta(int d, int k, double lambda, double r);

double mean_psi_k(int d, int k, double lambda, double r);   // lambda_k kappa_{d-k} r^{d-k}
double mean_zeta_k(int d, int k, double lambda, double r);  // lambda_k kappa_d r^d

/// P(d-k independent isotropic hyperplanes hitting B_r^d have a common point
/// in B_r^d); r-independent.
double hit_probability_mu(int d, int k);

/// Exact variance of the vertex count Psi_0(B_r^2) for an isotropic planar
/// process: (2 lambda r)^3 sigma^{(1,2)} + ((2 lambda r)^2 / 2) sigma^{(2,2)}
/// with sigma^{(1,2)} = 8/(3 pi^2) and sigma^{(2,2)} = 1/2.
double exact_var_psi0_2d(double lambda, double r);

/// c_{dj} = C(d-1,j) (kappa_{d-j}/kappa_d)^2 (d kappa_d / kappa_{d-1})^j.
double pair_corr_coeff(int d, int j);

/// Pair correlation of the vertex process:
///   g_0(t) = 1 + sum_{j=1}^{d-1} c_{dj} (lambda t)^{-j}.
double pair_correlation_g0(int d, double lambda, double r_arg);

/// Planar mean factor mu_{B(a,b)} = (2a - sin a - sin b + sin(b-a)) / (4 pi).
double planar_mu(double a, double b);

/// Planar second-moment factor sigma_{B(a,b)}^{(1,2)} = E[g_B(X)^2] for the
/// conditional kernel g_B(x) = E[f_{B(a,b)}(x, X')]; reduces to
/// (2/(3 pi^3)) (5a - 7 sin a + (a + sin a) cos a) when a = b, and to
/// 8/(3 pi^2) for the full box a = b = pi.
double planar_sigma(double a, double b);

/// Poisson-Voronoi vertex intensity constant c_d with lambda_0 = c_d lambda:
///   c_d = (2^d pi^{d-1}/(d+1)) (kappa_{d^2}/kappa_{d^2-1}) (kappa_{d-1}/kappa_d)^d.
double pvt_vertex_constant(int d);

/// Conditional kernels for the count and volume statistics, isotropic law:
///   g_chi_kernel ~ (1 - p^2/r^2)^{(d-k-1)/2},
///   g_nu_kernel  ~ (1 - p^2/r^2)^{(d-1)/2},
/// with the explicit kappa prefactors.
double g_chi_kernel(int d, int k, double p, double r);
double g_nu_kernel(int d, int k, double p, double r);

}  // namespace hyperflat::closed
