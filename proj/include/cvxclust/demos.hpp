#pragma once

#include "cvxclust/certify.hpp"
#include "cvxclust/datagen.hpp"
#include "cvxclust/hyperparam.hpp"
#include "cvxclust/svg.hpp"

#include <string>
#include <vector>

namespace cvxclust {

// A solve together with everything derived from it.
struct ClusterRun {
  PrototypeSolution solution;
  Partition partition;
  std::vector<BoundingBall> balls;
  CertReport report;
};

// Solves, extracts the partition (config.fuse_tol or the default) and runs the
// certification suite with CertConfig::defaults_for(dataset).
ClusterRun cluster_and_certify(const Dataset& dataset, const SolverConfig& config);

// Partition, balls and certification for an existing solution.
ClusterRun certify_solution(const Dataset& dataset, PrototypeSolution solution, double lambda,
                            double fuse_tol);

// Certifies an externally supplied prototype matrix.
ClusterRun certify_prototypes(const Dataset& dataset, const Matrix& prototypes, double lambda,
                              double fuse_tol);

svg::Panel make_panel(const std::string& title, const Dataset& dataset, const ClusterRun& run);

// Growing-cluster experiment on the blob fixture.
struct GrowthStep {
  int added = 0;
  double lambda = 0.0;
  int k = 0;
  bool converged = false;
  // All points of the growing component share one cluster.
  bool growing_single = false;
  // That cluster holds no points of other components.
  bool growing_pure = false;
};

struct InflexibilityResult {
  std::vector<GrowthStep> fixed_lambda;
  std::vector<GrowthStep> decreasing_lambda;
  // k never increases along the fixed-lambda row and the growing cluster
  // absorbs another component at some step.
  bool merges_at_fixed_lambda = false;
  // Growing component stays one pure cluster along the decreasing-lambda row
  // while the total k increases.
  bool splits_at_decreasing_lambda = false;
  std::vector<svg::Panel> panels;
};

InflexibilityResult run_inflexibility(const SolverConfig& base);

struct ComparisonRow {
  std::string dataset;
  double lambda = 0.0;
  int n = 0;
  int convex_k = 0;
  bool converged = false;
  bool certified = false;
  int baseline_k = 0;
  Partition kmeans;
  Partition ward;
  // Noise handling, blobs_with_noise only: largest cluster holding a noise
  // point, and the share of clean points in clusters of size >= 10.
  int noise_max_cluster = 0;
  double clean_in_large = 0.0;
};

struct ComparisonResult {
  std::vector<ComparisonRow> rows;
  std::vector<svg::Panel> panels;
};

ComparisonResult run_comparison(const SolverConfig& base);

// Noise statistics of a partition against ground truth (-1 = noise).
void noise_statistics(const Partition& partition, const std::vector<int>& truth,
                      int& noise_max_cluster, double& clean_in_large, int large_size = 10);

struct BoundaryCase {
  int cluster_size = 0;
  double lambda = 0.0;
  int k = 0;
  bool converged = false;
  double prototype_error = 0.0;
  // | |x_0 - mean| - lambda (n_l - 1) |
  double boundary_gap = 0.0;
  double containment_margin = 0.0;
  bool certified = false;
};

BoundaryCase run_boundary_case(int cluster_size, double lambda, const SolverConfig& base);
std::vector<BoundaryCase> run_boundary_demo(const SolverConfig& base);

// 100 log-spaced lambdas on [0.01, 3] for n = 5 and n = 9.
std::vector<ImpossibilityReport> run_impossibility_demo(const SolverConfig& base);

}  // namespace cvxclust
