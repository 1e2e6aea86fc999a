#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperflat/sampling.hpp"

namespace hyperflat::stats {

inline constexpr long long kDefaultSubsetCap = 10'000'000;

struct EnumerationBudgetExceeded : std::runtime_error {
  explicit EnumerationBudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

struct UndefinedForSmallSample : std::runtime_error {
  explicit UndefinedForSmallSample(const std::string& what)
      : std::runtime_error(what) {}
};

/// Boolean test on a direction tuple sorted by the canonical lexicographic
/// ordering; evaluated only on sorted tuples.
using MarkPredicate =
    std::function<bool(const std::vector<geom::UnitDirection>&)>;

MarkPredicate all_pass();

/// Angle of a planar direction in [0, pi): gamma with (cos gamma, sin gamma)
/// reproducing v.
double planar_angle(const geom::UnitDirection& v);

/// Closed rectangle test [0, a] x [0, b] on the ordered pair of angles
/// (gamma_min, gamma_max), d = 2 only.
MarkPredicate planar_angle_rectangle(double a, double b);

struct KFlatSummary {
  int k = 0;
  long long count = 0;
  double volume = 0.0;
  long long subsets_examined = 0;
};

/// Enumerates all (d-k)-subsets of the hyperplane list; counts induced
/// k-flats hitting the ball and accumulates their k-volume inside it.
/// Degenerate (near-parallel) subsets contribute zero.
KFlatSummary k_flat_summary(const sampling::HyperplaneProcessSample& sample,
                            int k, long long cap = kDefaultSubsetCap);

/// Number of d-subsets whose intersection point lies in the ball and whose
/// sorted direction tuple satisfies the predicate.
long long marked_vertex_count(const sampling::HyperplaneProcessSample& sample,
                              const MarkPredicate& predicate,
                              long long cap = kDefaultSubsetCap);

enum class Centering { analytic, plug_in };

/// Standardized k-flat count:
///   ((d-k-1)! / (2 lambda r)^{d-k-1/2}) (Psi_k - E Psi_k).
/// Analytic centering uses the isotropic mean lambda_k kappa_{d-k} r^{d-k};
/// plug-in centering uses a supplied mean.
double standardized_count_Z(const sampling::HyperplaneProcessSample& sample,
                            int k, Centering centering,
                            double plug_in_mean = 0.0,
                            long long cap = kDefaultSubsetCap);

/// Standardized k-volume:
///   ((d-k-1)! r^{-k} / (2 lambda r)^{d-k-1/2}) (zeta_k - E zeta_k).
double standardized_volume_Z(const sampling::HyperplaneProcessSample& sample,
                             int k, Centering centering,
                             double plug_in_mean = 0.0,
                             long long cap = kDefaultSubsetCap);

struct IntensityEstimates {
  double count_based = 0.0;   // Psi_k / (kappa_{d-k} r^{d-k})
  double volume_based = 0.0;  // zeta_k / (kappa_d r^d)
};

IntensityEstimates intensity_estimators(
    const sampling::HyperplaneProcessSample& sample, int k,
    long long cap = kDefaultSubsetCap);

/// Symmetric angle-box weight of the pair kernel f_{B(a,b)}: the average of
/// the rectangle indicator over both orderings of the pair, i.e. 1 when both
/// angles are at most a, 1/2 when the pair fits [0,a] x [0,b] in exactly one
/// ordering, 0 otherwise (requires 0 <= a <= b <= pi). Its mean against the
/// vertex angle law is planar_mu(a, b) / planar_mu(pi, pi).
double planar_box_weight(double g1, double g2, double a, double b);

/// Sum of the pair kernel f_{B(a,b)} = 1{lines meet inside the ball} times
/// planar_box_weight over all hyperplane pairs; equals the vertex count for
/// the full box (a = b = pi). Mean is ((2 lambda r)^2 / 2) planar_mu(a, b).
double planar_marked_sum(const sampling::HyperplaneProcessSample& sample,
                         double a, double b,
                         long long cap = kDefaultSubsetCap);

/// Randomly normalized planar pair statistic
///   (N(N-1))^{-3/4} sum_{i<j} (f_{B(a,b)}(X_i, X_j) - mu_{B(a,b)}).
double planar_random_normalized_Z(
    const sampling::HyperplaneProcessSample& sample, double a, double b);

}  // namespace hyperflat::stats
