#include "cvxclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cvxclust {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as root so first-appearance numbering is stable.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

// Renumbers arbitrary component ids to 0..k-1 in order of first appearance.
std::vector<int> first_appearance_labels(const std::vector<int>& raw) {
  std::vector<int> out(raw.size());
  std::vector<std::pair<int, int>> seen;  // (raw id, new id)
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& p) { return p.first == raw[i]; });
    if (it == seen.end()) {
      seen.emplace_back(raw[i], next);
      out[i] = next++;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

Matrix cluster_means(const Matrix& points, const std::vector<int>& labels, int k) {
  Matrix sums = Matrix::Zero(k, points.cols());
  std::vector<int> counts(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sums.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
    ++counts[labels[i]];
  }
  for (int l = 0; l < k; ++l) sums.row(l) /= static_cast<double>(counts[l]);
  return sums;
}

}  // namespace

Dataset::Dataset(Matrix points, std::vector<std::string> ids)
    : points_(std::move(points)), ids_(std::move(ids)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw std::invalid_argument("dataset needs at least one point and one dimension");
  }
  if (!points_.allFinite()) throw std::invalid_argument("dataset has non-finite coordinates");
  if (!ids_.empty() && ids_.size() != static_cast<std::size_t>(points_.rows())) {
    throw std::invalid_argument("point id count does not match point count");
  }
}

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and nonnegative");
  }
  if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(admm_rho > 0.0)) throw std::invalid_argument("admm_rho must be positive");
  if (fuse_tol && !(*fuse_tol > 0.0)) throw std::invalid_argument("fuse_tol must be positive");
}

Partition::Partition(std::vector<int> labels, Matrix centroids)
    : labels_(std::move(labels)), centroids_(std::move(centroids)) {
  const int k = static_cast<int>(centroids_.rows());
  if (labels_.empty()) throw std::invalid_argument("partition needs at least one label");
  if (k < 1) throw std::invalid_argument("partition needs at least one cluster");
  sizes_.assign(k, 0);
  members_.assign(k, {});
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int l = labels_[i];
    if (l < 0 || l >= k) throw std::invalid_argument("partition label out of range");
    ++sizes_[l];
    members_[l].push_back(static_cast<int>(i));
  }
  for (int s : sizes_) {
    if (s == 0) throw std::invalid_argument("partition has an empty cluster");
  }
}

int Partition::largest_cluster_size() const {
  return *std::max_element(sizes_.begin(), sizes_.end());
}

double objective(const Dataset& dataset, const Matrix& prototypes, double lambda) {
  const Matrix& x = dataset.points();
  if (prototypes.rows() != x.rows() || prototypes.cols() != x.cols()) {
    throw std::invalid_argument("prototype matrix shape does not match dataset");
  }
  if (!prototypes.allFinite() || !std::isfinite(lambda)) {
    throw std::invalid_argument("objective received non-finite input");
  }
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const double loss = 0.5 * (prototypes - x).squaredNorm();
  double penalty = 0.0;
  const Eigen::Index n = x.rows();
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      penalty += (prototypes.row(i) - prototypes.row(j)).norm();
    }
  }
  return loss + lambda * penalty;
}

Partition extract_partition(const Matrix& prototypes, double fuse_tol) {
  if (!(fuse_tol > 0.0)) throw std::invalid_argument("fuse_tol must be positive");
  if (prototypes.rows() < 1) throw std::invalid_argument("no prototypes to partition");
  const int n = static_cast<int>(prototypes.rows());
  DisjointSets sets(n);
  const double tol2 = fuse_tol * fuse_tol;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if ((prototypes.row(i) - prototypes.row(j)).squaredNorm() <= tol2) sets.unite(i, j);
    }
  }
  std::vector<int> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = sets.find(i);
  std::vector<int> labels = first_appearance_labels(raw);
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  Matrix centroids = cluster_means(prototypes, labels, k);
  return Partition(std::move(labels), std::move(centroids));
}

Partition extract_partition(const PrototypeSolution& solution, double fuse_tol) {
  return extract_partition(solution.prototypes, fuse_tol);
}

Partition partition_from_labels(const Matrix& points, const std::vector<int>& labels) {
  if (labels.size() != static_cast<std::size_t>(points.rows())) {
    throw std::invalid_argument("label count does not match point count");
  }
  std::vector<int> relabeled = first_appearance_labels(labels);
  const int k = *std::max_element(relabeled.begin(), relabeled.end()) + 1;
  Matrix centroids = cluster_means(points, relabeled, k);
  return Partition(std::move(relabeled), std::move(centroids));
}

double max_pairwise_distance(const Matrix& points) {
  double best = 0.0;
  for (Eigen::Index i = 1; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      best = std::max(best, (points.row(i) - points.row(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double min_pairwise_distance(const Matrix& points) {
  if (points.rows() < 2) throw std::invalid_argument("need at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      best = std::min(best, (points.row(i) - points.row(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double default_fuse_tol(const Dataset& dataset) {
  const double spread = max_pairwise_distance(dataset.points());
  return spread > 0.0 ? 1e-7 * spread : 1e-7;
}

double problem_scale(const Dataset& dataset) {
  return std::max(1.0, dataset.points().norm());
}

}  // namespace cvxclust
