#include "hyperflat/inference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyperflat/closed_forms.hpp"

namespace hyperflat::infer {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Acklam's rational approximation of the probit function.
double probit_approx(double q) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double e[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (q < plow) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t +
            c[5]) /
           ((((e[0] * t + e[1]) * t + e[2]) * t + e[3]) * t + 1.0);
  }
  if (q > 1.0 - plow) return -probit_approx(1.0 - q);
  const double t = q - 0.5;
  const double s = t * t;
  return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s +
          a[5]) *
         t /
         (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
}

ConfidenceInterval make_ci(double lo, double hi, double alpha,
                           std::string target, std::string method) {
  ConfidenceInterval ci;
  ci.lower = lo;
  ci.upper = hi;
  ci.level = 1.0 - alpha;
  ci.target = std::move(target);
  ci.method = std::move(method);
  return ci;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("normal_quantile: q outside (0, 1)");
  double x = probit_approx(q);
  // One Newton refinement against the erfc-based CDF.
  const double err = normal_cdf(x) - q;
  x -= err / normal_pdf(x);
  return x;
}

ConfidenceInterval ci_I(double lambda_hat_k, int d, int k, double r,
                        double alpha) {
  check_alpha(alpha);
  if (lambda_hat_k < 0.0)
    throw std::invalid_argument("ci_I: negative estimate");
  if (r <= 0.0) throw std::invalid_argument("ci_I: r <= 0");
  const int j = d - k;
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const double half = std::pow(closed::stabilizer_a(d, k), 0.5 / j) *
                      closed::stabilizer_b(j) * z / std::sqrt(r);
  const double x = std::pow(lambda_hat_k, 0.5 / j);
  const double lo = std::max(0.0, x - half);
  const double hi = x + half;
  return make_ci(std::pow(lo, 2 * j), std::pow(hi, 2 * j), alpha, "lambda_k",
                 "I");
}

ConfidenceInterval ci_J(double lambda_hat_k, int d, int k, double r,
                        double alpha) {
  check_alpha(alpha);
  if (lambda_hat_k < 0.0)
    throw std::invalid_argument("ci_J: negative estimate");
  if (r <= 0.0) throw std::invalid_argument("ci_J: r <= 0");
  const int j = d - k;
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const double half = closed::stabilizer_b(j) * z / std::sqrt(r);
  const double x =
      std::pow(lambda_hat_k / closed::stabilizer_a(d, k), 0.5 / j);
  const double lo = std::max(0.0, x - half);
  const double hi = x + half;
  return make_ci(lo * lo, hi * hi, alpha, "lambda", "J");
}

ConfidenceInterval road_bounds(double psi0_count, double r, double alpha) {
  check_alpha(alpha);
  if (psi0_count < 0.0)
    throw std::invalid_argument("road_bounds: negative count");
  if (r <= 0.0) throw std::invalid_argument("road_bounds: r <= 0");
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const double w = 2.0 * z / (std::numbers::pi * std::sqrt(3.0));
  const double x = std::pow(psi0_count, 0.25);
  const double lo = std::max(0.0, x - w);
  const double hi = x + w;
  return make_ci(lo * lo / r, hi * hi / r, alpha, "lambda", "J");
}

TestResult test_lambda(double lambda_hat_0, double lambda_star, double r,
                       double alpha) {
  check_alpha(alpha);
  if (lambda_star <= 0.0)
    throw std::invalid_argument("test_lambda: lambda_star <= 0");
  if (r <= 0.0) throw std::invalid_argument("test_lambda: r <= 0");
  if (lambda_hat_0 < 0.0)
    throw std::invalid_argument("test_lambda: negative estimate");
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const double w = 2.0 * z / (std::numbers::pi * std::sqrt(3.0 * r));
  const double root = std::sqrt(lambda_star);
  const double lo_root = std::max(0.0, root - w);
  TestResult t;
  t.lower_threshold = std::pow(lo_root, 4) / std::numbers::pi;
  t.upper_threshold = std::pow(root + w, 4) / std::numbers::pi;
  t.reject =
      lambda_hat_0 < t.lower_threshold || lambda_hat_0 > t.upper_threshold;
  return t;
}

double pvt_sigma_sq(int d) {
  if (d == 2) return 0.5;     // planar value, rounded in the literature
  if (d == 3) return 5.084;   // spatial value, rounded in the literature
  throw std::invalid_argument("pvt_sigma_sq: only d = 2, 3 supported");
}

ConfidenceInterval pvt_ci(double vertex_count, double window_area, int d,
                          double alpha) {
  check_alpha(alpha);
  if (vertex_count < 0.0)
    throw std::invalid_argument("pvt_ci: negative count");
  if (window_area <= 0.0)
    throw std::invalid_argument("pvt_ci: nonpositive window area");
  const double cd = closed::pvt_vertex_constant(d);
  const double sig2 = pvt_sigma_sq(d);
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const double w = 0.5 * z * std::sqrt(1.0 + cd * sig2);
  const double x = std::sqrt(vertex_count);
  const double lo = std::max(0.0, x - w);
  const double hi = x + w;
  const double scale = cd * window_area;
  return make_ci(lo * lo / scale, hi * hi / scale, alpha, "lambda", "pvt");
}

}  // namespace hyperflat::infer
