#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hyperflat/geometry.hpp"
#include "hyperflat/rng.hpp"

namespace hyperflat::sampling {

/// Spherical orientation distribution on the upper hemisphere: either the
/// uniform (isotropic) law or a discrete law with full-rank atom set. The
/// full-rank requirement is the nondegeneracy certificate ensuring no single
/// hyperplane through the origin carries the whole mass.
class OrientationLaw {
 public:
  static OrientationLaw isotropic(int d);
  static OrientationLaw discrete(std::vector<geom::UnitDirection> atoms,
                                 std::vector<double> weights);

  bool is_isotropic() const { return atoms_.empty(); }
  int dim() const { return d_; }
  const std::vector<geom::UnitDirection>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

  geom::UnitDirection sample(rng::Rng& rng) const;

 private:
  OrientationLaw() = default;
  int d_ = 0;
  std::vector<geom::UnitDirection> atoms_;  // empty means isotropic
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

geom::UnitDirection sample_direction(const OrientationLaw& law,
                                     rng::Rng& rng);

/// Poisson count sampler: sequential-search inversion for mean < 30,
/// transformed rejection for larger means.
long long sample_poisson_count(double mean, rng::Rng& rng);

/// One realization of the process restricted to hyperplanes hitting B_r^d.
struct HyperplaneProcessSample {
  int d = 0;
  double lambda = 0.0;
  double r = 0.0;
  bool isotropic = true;
  std::vector<geom::Hyperplane> hyperplanes;
  rng::SeedContract seed;

  long long count() const { return static_cast<long long>(hyperplanes.size()); }
};

/// N ~ Poisson(2 lambda r) hyperplanes with p_i i.i.d. uniform on [-r, r]
/// and directions i.i.d. from the law.
HyperplaneProcessSample sample_hyperplane_process(double lambda, double r,
                                                  const OrientationLaw& law,
                                                  rng::SeedContract seed);

/// Axis-aligned planar window [x0, x1] x [y0, y1].
struct Window2 {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  Window2 dilated(double delta) const {
    return {x0 - delta, y0 - delta, x1 + delta, y1 + delta};
  }
  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

/// Homogeneous Poisson points of intensity lambda in the window.
std::vector<std::array<double, 2>> sample_nuclei(double lambda,
                                                 const Window2& window,
                                                 rng::SeedContract seed);

}  // namespace hyperflat::sampling
