#pragma once

#include <string>

namespace hyperflat::infer {

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;      // 1 - alpha
  std::string target;      // "lambda_k" or "lambda"
  std::string method;      // "I", "J" or "pvt"
};

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, absolute error <= 1e-9 (rational approximation
/// refined by one Newton step against the erfc-based CDF).
double normal_quantile(double q);

/// Variance-stabilized interval for the k-flat intensity lambda_k:
///   (hat^{1/(2(d-k))} -+ a_{d,k}^{1/(2(d-k))} b_{d-k} z / sqrt(r))^{2(d-k)},
/// with the inner root clamped at zero before raising to the even power.
ConfidenceInterval ci_I(double lambda_hat_k, int d, int k, double r,
                        double alpha);

/// Transformed interval covering the hyperplane intensity lambda:
///   ((hat / a_{d,k})^{1/(2(d-k))} -+ b_{d-k} z / sqrt(r))^2, clamped at 0.
ConfidenceInterval ci_J(double lambda_hat_k, int d, int k, double r,
                        double alpha);

/// Planar road-network bounds for the mean total line length per unit area:
///   (1/r) (Psi_0^{1/4} +- 2 z / (pi sqrt(3)))^2; identical to ci_J at
///   d = 2, k = 0.
ConfidenceInterval road_bounds(double psi0_count, double r, double alpha);

struct TestResult {
  bool reject = false;
  double lower_threshold = 0.0;  // rejection region is outside these
  double upper_threshold = 0.0;
};

/// Two-sided test of H0: lambda = lambda_star from the planar vertex-count
/// intensity estimate (d = 2, k = 0).
TestResult test_lambda(double lambda_hat_0, double lambda_star, double r,
                       double alpha);

/// Stored simulation constants for the Voronoi vertex-count CLT.
double pvt_sigma_sq(int d);  // 0.5 for d = 2, 5.084 for d = 3

/// Interval for the nuclei intensity of a Poisson-Voronoi tessellation from
/// the vertex count in a window:
///   (sqrt(count) -+ (z/2) sqrt(1 + c_d sigma_d^2))^2 / (c_d area).
ConfidenceInterval pvt_ci(double vertex_count, double window_area, int d,
                          double alpha);

}  // namespace hyperflat::infer
