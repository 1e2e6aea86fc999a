#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "hyperflat/rng.hpp"
#include "hyperflat/sampling.hpp"

namespace hyperflat::voronoi {

/// Poisson nuclei for a planar Voronoi tessellation: points live in the core
/// window dilated by the guard margin, so that vertices inside the core are
/// determined by all relevant nuclei.
struct NucleiSample {
  double lambda = 0.0;
  sampling::Window2 core;
  double guard = 0.0;
  std::vector<std::array<double, 2>> points;
  rng::SeedContract seed;
};

/// Samples nuclei with the default guard margin 5 / sqrt(lambda) when
/// guard < 0.
NucleiSample sample_pvt(double lambda, const sampling::Window2& core,
                        rng::SeedContract seed, double guard = -1.0);

/// Restriction of an existing sample to a smaller guard margin; keeps the
/// same underlying point stream (used to test guard sufficiency).
NucleiSample restrict_guard(const NucleiSample& sample, double new_guard);

struct VoronoiVertex {
  std::array<double, 2> location{};
  std::array<int, 3> nuclei{};
  double circumradius = 0.0;
};

struct ExtractOptions {
  /// Triples with larger circumradius are skipped. The default (infinity)
  /// is exact; experiments at large intensity pass a cutoff R_c with
  /// exp(-lambda pi R_c^2) negligible, which is lossless in practice because
  /// an accepted vertex has an empty circumdisk.
  double max_circumradius = std::numeric_limits<double>::infinity();
};

/// All Voronoi-cell vertices inside the core window: circumcenters of
/// nucleus triples whose open circumdisk contains no other nucleus.
/// Near-collinear triples (triangle area < 1e-12 * diameter^2) are skipped.
std::vector<VoronoiVertex> extract_vertices(const NucleiSample& sample,
                                            const ExtractOptions& options = {});

struct PvtIntensity {
  double vertex_intensity = 0.0;  // count / core area
  double implied_lambda = 0.0;    // vertex intensity / c_2
};

PvtIntensity pvt_intensity_from_count(double vertex_count, double core_area);
PvtIntensity pvt_intensity_estimate(const NucleiSample& sample,
                                    const ExtractOptions& options = {});

/// Standardized vertex count with analytic centering at the known lambda:
///   (count - c_2 lambda area) / sqrt(area * c_2 lambda (1 + c_2 sigma_2^2)).
double pvt_standardized_Z_from_count(double vertex_count, double core_area,
                                     double lambda);
double pvt_standardized_Z(const NucleiSample& sample,
                          const ExtractOptions& options = {});

struct PvtExperimentConfig {
  double lambda = 100.0;
  sampling::Window2 core{0.0, 0.0, 1.0, 1.0};
  double guard = -1.0;  // negative: default 5 / sqrt(lambda)
  int replicates = 500;
  std::uint64_t master_seed = 0;
  bool use_cutoff = true;  // circumradius cutoff sqrt(22 / (lambda pi))
};

/// Per-replicate vertex counts (stream i uses stream_index i).
std::vector<long long> replicate_vertex_counts(
    const PvtExperimentConfig& config);

}  // namespace hyperflat::voronoi
