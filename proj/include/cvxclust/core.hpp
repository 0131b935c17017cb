#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvxclust {

// One point per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Raised when an iteration produces NaN/Inf. Precondition violations use
// std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Dataset {
 public:
  explicit Dataset(Matrix points, std::vector<std::string> ids = {});

  const Matrix& points() const { return points_; }
  const std::vector<std::string>& ids() const { return ids_; }
  int n() const { return static_cast<int>(points_.rows()); }
  int d() const { return static_cast<int>(points_.cols()); }
  auto point(int i) const { return points_.row(i); }

 private:
  Matrix points_;
  std::vector<std::string> ids_;
};

struct SolverConfig {
  double lambda = 0.0;
  double primal_tol = 1e-6;
  double dual_tol = 1e-6;
  int max_iters = 10000;
  double admm_rho = 1.0;
  // Unset means default_fuse_tol(dataset).
  std::optional<double> fuse_tol;
  std::uint64_t seed = 0;
  // Refine a converged ADMM iterate on its extracted partition.
  bool polish = true;

  void validate() const;
};

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
};

struct PrototypeSolution {
  Matrix prototypes;
  double lambda = 0.0;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool polished = false;
  Residuals residuals;
};

class Partition {
 public:
  Partition() = default;
  // labels must use every value in [0, centroids.rows()).
  Partition(std::vector<int> labels, Matrix centroids);

  const std::vector<int>& labels() const { return labels_; }
  const Matrix& centroids() const { return centroids_; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<int>& members(int l) const { return members_[l]; }
  int k() const { return static_cast<int>(sizes_.size()); }
  int n() const { return static_cast<int>(labels_.size()); }
  int label(int i) const { return labels_[i]; }
  int largest_cluster_size() const;

 private:
  std::vector<int> labels_;
  Matrix centroids_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> members_;
};

struct BoundingBall {
  int cluster_index = 0;
  Vector center;
  double radius = 0.0;
};

// 1/2 sum_i |u_i - x_i|^2 + lambda sum_{j<i} |u_i - u_j|, pairs accumulated
// in (i, j<i) lexicographic order.
double objective(const Dataset& dataset, const Matrix& prototypes, double lambda);

// Connected components of the graph with an edge wherever two prototypes lie
// within fuse_tol. Labels are numbered by first appearance; centroids are the
// component means of the prototypes.
Partition extract_partition(const Matrix& prototypes, double fuse_tol);
Partition extract_partition(const PrototypeSolution& solution, double fuse_tol);

// Relabels so clusters are numbered by first appearance and uses the mean of
// `points` over each cluster as its centroid.
Partition partition_from_labels(const Matrix& points, const std::vector<int>& labels);

double max_pairwise_distance(const Matrix& points);
// Minimum over distinct indices; 0 when duplicates exist.
double min_pairwise_distance(const Matrix& points);

// 1e-7 times the largest pairwise data distance.
double default_fuse_tol(const Dataset& dataset);

// max(1, |X|_F); the unit in which solver and certification tolerances scale.
double problem_scale(const Dataset& dataset);

}  // namespace cvxclust
