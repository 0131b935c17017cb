#pragma once

#include "cvxclust/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cvxclust {

// Stacked perturbation eps = (eps_1, ..., eps_n), one row per point.
struct DirectionVector {
  Matrix components;
  double norm() const { return components.norm(); }
};

// Unit vectors e_ij between distinct clusters and their per-point sums
// E_i = sum_{j in other clusters} e_ij. Both are computed from the partition
// centroids, so E_i is exactly constant over a cluster.
class PairDirections {
 public:
  explicit PairDirections(const Partition& partition);

  // e_ij for points in different clusters; zero vector for same cluster.
  Vector e(int i, int j) const;
  // Cluster-level e_lo.
  const Vector& cluster_e(int l, int o) const { return cluster_e_[l * k_ + o]; }
  // Per-point aggregate E_i (row i); equal rows within a cluster.
  const Matrix& aggregate() const { return aggregate_; }
  // Per-cluster aggregate (row l).
  const Matrix& cluster_aggregate() const { return cluster_aggregate_; }

 private:
  std::vector<int> labels_;
  int k_ = 0;
  std::vector<Vector> cluster_e_;
  Matrix aggregate_;
  Matrix cluster_aggregate_;
};

PairDirections pair_directions(const Partition& partition);

// sum_i <u_i - x_i + lambda E_i, eps_i> + lambda sum_{j<i, same cluster} |eps_i - eps_j|
double directional_derivative(const Dataset& dataset, const PrototypeSolution& solution,
                              const Partition& partition, double lambda,
                              const DirectionVector& eps);

struct ProbeResult {
  double min_value = 0.0;
  int directions_tried = 0;
  // Index of the minimizing direction in evaluation order (random first).
  int argmin = -1;
};

// Minimum directional derivative over num_probes random unit directions plus
// the structured ones: each single-point block along the negative stationarity
// residual and each coordinate axis, and each cluster-constant direction
// along the negative cluster residual and each coordinate axis.
ProbeResult probe_optimality(const Dataset& dataset, const PrototypeSolution& solution,
                             const Partition& partition, double lambda, int num_probes,
                             std::uint64_t seed);

// Center = mean of the cluster's data points; radius = lambda (n_l - 1).
std::vector<BoundingBall> bounding_balls(const Dataset& dataset, const Partition& partition,
                                         double lambda);

struct CertCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::vector<int> witness_indices;
};

struct CertConfig {
  double cert_tol = 1e-5;
  double probe_tol = 1e-6;
  double center_tol = 1e-6;
  int cert_iters = 5000;
  int num_probes = 256;
  std::uint64_t seed = 0;

  // Tolerances scaled by problem_scale(dataset).
  static CertConfig defaults_for(const Dataset& dataset);
};

// max_i |x_i - c_l(i)| - r_l(i) <= cert_tol. Witness: the worst point.
CertCheck check_containment(const Dataset& dataset, const Partition& partition,
                            const std::vector<BoundingBall>& balls, double cert_tol);

// min_{l<o} |c_l - c_o| - (r_l + r_o) > 2 lambda - cert_tol; margin is that
// gap minus 2 lambda. Vacuous pass for k <= 1. Witness: the closest clusters.
CertCheck check_gaps(const std::vector<BoundingBall>& balls, double lambda, double cert_tol);

// Ball centers (cluster data means) against m_l + lambda E_l.
CertCheck check_center_consistency(const Partition& partition,
                                   const std::vector<BoundingBall>& balls, double lambda,
                                   double tol);

// For all i in V_l, j in V_o (l != o):
// |x_i - m_l|^2 + |x_j - m_o|^2 <= |x_i - m_o|^2 + |x_j - m_l|^2 + tol.
// Margin is the worst left-minus-right; witness (i, j).
CertCheck check_swap(const Dataset& dataset, const Partition& partition, double tol);

// d = 2 only: pairwise disjoint interiors of the cluster convex hulls.
// Passes vacuously (margin 0) in other dimensions. Witness: (l, o).
CertCheck check_hull(const Dataset& dataset, const Partition& partition);

// Swap test and, for d = 2, the hull test.
CertCheck check_convexity(const Dataset& dataset, const Partition& partition, double tol);

// Antisymmetric within-cluster dual vectors z_ij, |z_ij| <= lambda, balancing
// v_i = sum_{j != i, same cluster} z_ij.
class Certificate {
 public:
  // z_ij for i, j in the same cluster (z_ji = -z_ij, z_ii = 0).
  Vector z(int i, int j) const;

  bool feasible = false;
  double max_norm_violation = 0.0;
  double max_balance_residual = 0.0;
  int iterations = 0;

 private:
  friend Certificate balance_certificate(const Matrix& v, const Partition& partition,
                                         double lambda, int cert_iters, double cert_tol);
  std::vector<int> labels_;
  std::vector<int> local_index_;
  // Per cluster: rows are local pairs (a, b), b < a, in pair_index order.
  std::vector<Matrix> z_;
};

// Feasibility search: accelerated projected gradient on 1/2 |A z - v|^2 over
// the product of lambda-balls, started from zero, with gradient restarts.
// Clusters whose v does not sum to zero are infeasible and skipped. feasible
// iff both residuals are within cert_tol. A false result after cert_iters
// only means no certificate was found at that budget.
Certificate balance_certificate(const Matrix& v, const Partition& partition, double lambda,
                                int cert_iters, double cert_tol);

// v_i = m_l + lambda E_l - x_i, the stationarity residual of the solution.
Matrix stationarity_residual(const Dataset& dataset, const Partition& partition, double lambda);

Certificate dual_certificate(const Dataset& dataset, const PrototypeSolution& solution,
                             const Partition& partition, double lambda, int cert_iters,
                             double cert_tol);

// Does `candidate` (same n, d) have the same optimal solution? Recomputes v
// against the fixed cluster structure and runs the certificate search.
bool same_solution_probe(const Dataset& candidate, const PrototypeSolution& solution,
                         const Partition& partition, double lambda, int cert_iters,
                         double cert_tol);

// Single-cluster dataset with one point on the bounding-ball surface:
// x_0 = m - lambda (n_l - 1) v0 and x_j = m + lambda v0 otherwise.
Dataset construct_boundary_dataset(int cluster_size, double lambda, const Vector& prototype,
                                   const Vector& unit_direction);

struct CertReport {
  std::vector<CertCheck> checks;

  bool all_pass() const;
  const CertCheck& get(const std::string& name) const;
};

// Runs, in order: optimality_probe, containment, gaps, center_consistency,
// convexity, dual_certificate.
CertReport certify(const Dataset& dataset, const PrototypeSolution& solution,
                   const Partition& partition, double lambda, const CertConfig& config);

}  // namespace cvxclust
