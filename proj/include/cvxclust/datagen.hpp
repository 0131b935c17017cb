#pragma once

#include "cvxclust/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cvxclust {

enum class GeneratorKind { two_moons, uniform, gaussian_blobs, blobs_with_noise, collinear,
                           boundary_witness };

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::gaussian_blobs;
  int n = 100;
  std::uint64_t seed = 0;
  // two_moons: Gaussian noise stdev.
  double noise = 0.0;
  // gaussian_blobs, blobs_with_noise: one center per row, shared stdev.
  Matrix centers;
  double stdev = 1.0;
  // blobs_with_noise: fraction of the n points drawn uniformly from the box
  // spanned by the centers widened by noise_margin stdevs.
  double noise_fraction = 0.1;
  double noise_margin = 4.0;
  // boundary_witness: lambda and dimension (prototype at the origin,
  // direction along the first axis).
  double lambda = 0.1;
  int dim = 1;

  void validate() const;
};

struct GeneratedData {
  Dataset dataset;
  // Component per point; -1 marks background noise. Empty when the kind has
  // no ground truth (uniform, collinear).
  std::vector<int> labels;
};

// two_moons: n/2 points on the upper unit half circle and the rest on the
//   lower one shifted by (1, 0.5), then isotropic Gaussian noise.
// uniform: i.i.d. uniform on [0, 1]^2.
// gaussian_blobs: n split evenly over the centers (remainder to the first),
//   points ordered by component.
// blobs_with_noise: round(noise_fraction n) noise points appended after the
//   blob points.
// collinear: x_i = i for i = 1..n in one dimension.
// boundary_witness: construct_boundary_dataset with cluster size n.
GeneratedData generate(const GeneratorSpec& spec);

struct Ball {
  Vector center;
  double radius = 0.0;
};

// Appends `count` points drawn uniformly inside `region` by rejection from
// its bounding cube.
Dataset add_interior_samples(const Dataset& dataset, const Ball& region, int count,
                             std::uint64_t seed);

struct KMeansResult {
  Partition partition;
  // Within-cluster sum of squares.
  double inertia = 0.0;
  // Inertia after each Lloyd step of the winning restart.
  std::vector<double> history;
  int iterations = 0;
};

// Lloyd iterations from k-means++ seeding, best of `restarts` by inertia
// (lowest restart index on ties).
KMeansResult kmeans_detailed(const Dataset& dataset, int k, std::uint64_t seed,
                             int max_iters = 300, int restarts = 10);
Partition kmeans(const Dataset& dataset, int k, std::uint64_t seed, int max_iters = 300);

// One merge of the Ward hierarchy. Clusters are named by their smallest
// member index.
struct WardMerge {
  int a = 0;
  int b = 0;
  double cost = 0.0;
};

// Full Ward merge sequence (n - 1 merges) via the Lance-Williams update.
// Ties go to the lexicographically smallest (a, b) pair.
std::vector<WardMerge> ward_hierarchy(const Dataset& dataset);

// The hierarchy cut at k clusters.
Partition ward_agglomerative(const Dataset& dataset, int k);

// Within-cluster sum of squared distances to the partition centroids.
double within_cluster_ss(const Dataset& dataset, const Partition& partition);

}  // namespace cvxclust
