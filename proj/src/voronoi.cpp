#include "hyperflat/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyperflat/closed_forms.hpp"
#include "hyperflat/inference.hpp"

namespace hyperflat::voronoi {

namespace {

constexpr double kCollinearRelTol = 1e-12;
constexpr double kEmptyDiskRelTol = 1e-9;

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

struct Circumcircle {
  double cx, cy, r2;
  bool ok;
};

// Circumcenter in coordinates relative to a (translation invariant).
Circumcircle circumcircle(const std::array<double, 2>& a,
                          const std::array<double, 2>& b,
                          const std::array<double, 2>& c) {
  const double bx = b[0] - a[0], by = b[1] - a[1];
  const double cx = c[0] - a[0], cy = c[1] - a[1];
  const double cross = bx * cy - by * cx;  // 2 * signed triangle area
  const double diam2 = std::max({bx * bx + by * by, cx * cx + cy * cy,
                                 dist2(b, c)});
  if (std::abs(cross) < 2.0 * kCollinearRelTol * diam2)
    return {0.0, 0.0, 0.0, false};
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / (2.0 * cross);
  const double uy = (bx * c2 - cx * b2) / (2.0 * cross);
  return {a[0] + ux, a[1] + uy, ux * ux + uy * uy, true};
}

// Uniform grid over the dilated window for neighbor queries.
class PointGrid {
 public:
  PointGrid(const std::vector<std::array<double, 2>>& pts,
            const sampling::Window2& box, double cell)
      : pts_(pts), x0_(box.x0), y0_(box.y0), cell_(cell) {
    nx_ = std::max(1, static_cast<int>(std::ceil((box.x1 - box.x0) / cell)));
    ny_ = std::max(1, static_cast<int>(std::ceil((box.y1 - box.y0) / cell)));
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
      buckets_[index_of(pts[static_cast<std::size_t>(i)])].push_back(i);
  }

  /// Visits point indices in all cells intersecting the disk bounding box.
  template <class F>
  void for_candidates(double cx, double cy, double radius, F&& visit) const {
    const int ix0 = clamp_x(static_cast<int>(std::floor((cx - radius - x0_) / cell_)));
    const int ix1 = clamp_x(static_cast<int>(std::floor((cx + radius - x0_) / cell_)));
    const int iy0 = clamp_y(static_cast<int>(std::floor((cy - radius - y0_) / cell_)));
    const int iy1 = clamp_y(static_cast<int>(std::floor((cy + radius - y0_) / cell_)));
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix)
        for (int m : buckets_[static_cast<std::size_t>(iy) * nx_ + ix])
          visit(m);
  }

 private:
  std::size_t index_of(const std::array<double, 2>& p) const {
    const int ix = clamp_x(static_cast<int>(std::floor((p[0] - x0_) / cell_)));
    const int iy = clamp_y(static_cast<int>(std::floor((p[1] - y0_) / cell_)));
    return static_cast<std::size_t>(iy) * nx_ + ix;
  }
  int clamp_x(int i) const { return std::clamp(i, 0, nx_ - 1); }
  int clamp_y(int i) const { return std::clamp(i, 0, ny_ - 1); }

  const std::vector<std::array<double, 2>>& pts_;
  double x0_, y0_, cell_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

bool circumdisk_empty(const std::vector<std::array<double, 2>>& pts,
                      const Circumcircle& cc, int i, int j, int k,
                      const PointGrid* grid) {
  const std::array<double, 2> center{cc.cx, cc.cy};
  const double limit = cc.r2 * (1.0 - kEmptyDiskRelTol);
  bool empty = true;
  auto check = [&](int m) {
    if (m == i || m == j || m == k) return;
    if (dist2(pts[static_cast<std::size_t>(m)], center) < limit) empty = false;
  };
  if (grid) {
    grid->for_candidates(cc.cx, cc.cy, std::sqrt(cc.r2), check);
  } else {
    for (int m = 0; m < static_cast<int>(pts.size()); ++m) check(m);
  }
  return empty;
}

}  // namespace

NucleiSample sample_pvt(double lambda, const sampling::Window2& core,
                        rng::SeedContract seed, double guard) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_pvt: lambda > 0");
  if (!(core.area() > 0.0))
    throw std::invalid_argument("sample_pvt: empty core window");
  if (guard < 0.0) guard = 5.0 / std::sqrt(lambda);
  if (!(guard > 0.0)) throw std::invalid_argument("sample_pvt: guard > 0");
  NucleiSample s;
  s.lambda = lambda;
  s.core = core;
  s.guard = guard;
  s.seed = seed;
  s.points = sampling::sample_nuclei(lambda, core.dilated(guard), seed);
  return s;
}

NucleiSample restrict_guard(const NucleiSample& sample, double new_guard) {
  if (!(new_guard > 0.0 && new_guard <= sample.guard))
    throw std::invalid_argument(
        "restrict_guard: need 0 < new_guard <= current guard");
  NucleiSample s;
  s.lambda = sample.lambda;
  s.core = sample.core;
  s.guard = new_guard;
  s.seed = sample.seed;
  const auto box = sample.core.dilated(new_guard);
  for (const auto& p : sample.points)
    if (box.contains(p[0], p[1])) s.points.push_back(p);
  return s;
}

std::vector<VoronoiVertex> extract_vertices(const NucleiSample& sample,
                                            const ExtractOptions& options) {
  const auto& pts = sample.points;
  const int n = static_cast<int>(pts.size());
  std::vector<VoronoiVertex> out;
  if (n < 3) return out;

  const double cutoff = options.max_circumradius;
  const bool bounded = std::isfinite(cutoff);
  const double cutoff2 = cutoff * cutoff;

  auto consider = [&](int i, int j, int k, const PointGrid* grid) {
    const auto cc = circumcircle(pts[static_cast<std::size_t>(i)],
                                 pts[static_cast<std::size_t>(j)],
                                 pts[static_cast<std::size_t>(k)]);
    if (!cc.ok) return;
    if (bounded && cc.r2 > cutoff2) return;
    if (!sample.core.contains(cc.cx, cc.cy)) return;
    if (!circumdisk_empty(pts, cc, i, j, k, grid)) return;
    out.push_back({{cc.cx, cc.cy}, {i, j, k}, std::sqrt(cc.r2)});
  };

  if (!bounded) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) consider(i, j, k, nullptr);
    return out;
  }

  // With a circumradius cutoff every triple of an accepted vertex has
  // pairwise distances <= 2 cutoff, so neighbor lists are lossless.
  const PointGrid grid(pts, sample.core.dilated(sample.guard), cutoff);
  const double pair_limit2 = 4.0 * cutoff2;
  std::vector<int> nbr;
  for (int i = 0; i < n; ++i) {
    nbr.clear();
    grid.for_candidates(pts[static_cast<std::size_t>(i)][0],
                        pts[static_cast<std::size_t>(i)][1], 2.0 * cutoff,
                        [&](int m) {
                          if (m > i &&
                              dist2(pts[static_cast<std::size_t>(i)],
                                    pts[static_cast<std::size_t>(m)]) <=
                                  pair_limit2)
                            nbr.push_back(m);
                        });
    std::sort(nbr.begin(), nbr.end());
    for (std::size_t a = 0; a < nbr.size(); ++a)
      for (std::size_t b = a + 1; b < nbr.size(); ++b) {
        if (dist2(pts[static_cast<std::size_t>(nbr[a])],
                  pts[static_cast<std::size_t>(nbr[b])]) > pair_limit2)
          continue;
        consider(i, nbr[a], nbr[b], &grid);
      }
  }
  return out;
}

PvtIntensity pvt_intensity_from_count(double vertex_count, double core_area) {
  if (!(core_area > 0.0))
    throw std::invalid_argument("pvt_intensity: zero-area window");
  PvtIntensity e;
  e.vertex_intensity = vertex_count / core_area;
  e.implied_lambda = e.vertex_intensity / closed::pvt_vertex_constant(2);
  return e;
}

PvtIntensity pvt_intensity_estimate(const NucleiSample& sample,
                                    const ExtractOptions& options) {
  const auto vertices = extract_vertices(sample, options);
  return pvt_intensity_from_count(static_cast<double>(vertices.size()),
                                  sample.core.area());
}

double pvt_standardized_Z_from_count(double vertex_count, double core_area,
                                     double lambda) {
  if (!(core_area > 0.0))
    throw std::invalid_argument("pvt_standardized_Z: zero-area window");
  if (!(lambda > 0.0))
    throw std::invalid_argument("pvt_standardized_Z: lambda unknown");
  const double c2 = closed::pvt_vertex_constant(2);
  const double lambda0 = c2 * lambda;
  const double limit_var = lambda0 * (1.0 + c2 * infer::pvt_sigma_sq(2));
  return (vertex_count - lambda0 * core_area) /
         std::sqrt(core_area * limit_var);
}

double pvt_standardized_Z(const NucleiSample& sample,
                          const ExtractOptions& options) {
  const auto vertices = extract_vertices(sample, options);
  return pvt_standardized_Z_from_count(static_cast<double>(vertices.size()),
                                       sample.core.area(), sample.lambda);
}

std::vector<long long> replicate_vertex_counts(
    const PvtExperimentConfig& config) {
  if (config.replicates < 1)
    throw std::invalid_argument("replicate_vertex_counts: replicates >= 1");
  ExtractOptions opt;
  if (config.use_cutoff)
    opt.max_circumradius =
        std::sqrt(22.0 / (config.lambda * std::numbers::pi));
  std::vector<long long> counts;
  counts.reserve(static_cast<std::size_t>(config.replicates));
  for (int i = 0; i < config.replicates; ++i) {
    const auto sample =
        sample_pvt(config.lambda, config.core,
                   {config.master_seed, static_cast<std::uint64_t>(i)},
                   config.guard);
    counts.push_back(
        static_cast<long long>(extract_vertices(sample, opt).size()));
  }
  return counts;
}

}  // namespace hyperflat::voronoi
