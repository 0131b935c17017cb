#include "cvxclust/certify.hpp"

#include "cvxclust/geometry.hpp"
#include "cvxclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvxclust {

namespace {

void require_shape(const Dataset& dataset, const Partition& partition) {
  if (partition.n() != dataset.n()) {
    throw std::invalid_argument("partition size does not match dataset");
  }
  if (partition.centroids().cols() != dataset.d()) {
    throw std::invalid_argument("centroid dimension does not match dataset");
  }
}

// g_i = u_i - x_i + lambda E_i, the affine part of the directional derivative.
Matrix affine_coefficients(const Dataset& dataset, const Matrix& prototypes,
                           const PairDirections& dirs, double lambda) {
  return prototypes - dataset.points() + lambda * dirs.aggregate();
}

double within_cluster_term(const Partition& partition, const Matrix& eps) {
  double total = 0.0;
  for (int l = 0; l < partition.k(); ++l) {
    const auto& idx = partition.members(l);
    for (std::size_t a = 1; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        total += (eps.row(idx[a]) - eps.row(idx[b])).norm();
      }
    }
  }
  return total;
}

double evaluate_direction(const Matrix& affine, const Partition& partition, double lambda,
                          const Matrix& eps) {
  return affine.cwiseProduct(eps).sum() + lambda * within_cluster_term(partition, eps);
}

// Local pair index for b < a inside one cluster.
inline Eigen::Index local_pair(int a, int b) {
  return static_cast<Eigen::Index>(a) * (a - 1) / 2 + b;
}

// (A z)_a = sum_{b<a} z_ab - sum_{c>a} z_ca
Matrix apply_incidence(const Matrix& z, int size) {
  Matrix out = Matrix::Zero(size, z.cols());
  for (int a = 1; a < size; ++a) {
    for (int b = 0; b < a; ++b) {
      const auto row = z.row(local_pair(a, b));
      out.row(a) += row;
      out.row(b) -= row;
    }
  }
  return out;
}

// A^T r: row (a, b) is r_a - r_b.
Matrix apply_incidence_transpose(const Matrix& r, int size) {
  Matrix z(static_cast<Eigen::Index>(size) * (size - 1) / 2, r.cols());
  for (int a = 1; a < size; ++a) {
    for (int b = 0; b < a; ++b) z.row(local_pair(a, b)) = r.row(a) - r.row(b);
  }
  return z;
}

void project_balls(Matrix& z, double radius) {
  for (Eigen::Index p = 0; p < z.rows(); ++p) {
    const double norm = z.row(p).norm();
    if (norm > radius) z.row(p) *= radius / norm;
  }
}

double max_row_norm(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).norm());
  return best;
}

}  // namespace

PairDirections::PairDirections(const Partition& partition)
    : labels_(partition.labels()), k_(partition.k()) {
  const Matrix& m = partition.centroids();
  const Eigen::Index d = m.cols();
  cluster_e_.assign(static_cast<std::size_t>(k_) * k_, Vector::Zero(d));
  cluster_aggregate_ = Matrix::Zero(k_, d);
  for (int l = 0; l < k_; ++l) {
    for (int o = 0; o < k_; ++o) {
      if (l == o) continue;
      const Vector diff = (m.row(l) - m.row(o)).transpose();
      const double dist = diff.norm();
      if (dist == 0.0) throw std::invalid_argument("partition has coincident centroids");
      cluster_e_[l * k_ + o] = diff / dist;
    }
  }
  for (int l = 0; l < k_; ++l) {
    for (int o = 0; o < k_; ++o) {
      if (l != o) {
        cluster_aggregate_.row(l) +=
            static_cast<double>(partition.sizes()[o]) * cluster_e_[l * k_ + o].transpose();
      }
    }
  }
  aggregate_.resize(partition.n(), d);
  for (int i = 0; i < partition.n(); ++i) aggregate_.row(i) = cluster_aggregate_.row(labels_[i]);
}

Vector PairDirections::e(int i, int j) const {
  return cluster_e_[labels_[i] * k_ + labels_[j]];
}

PairDirections pair_directions(const Partition& partition) { return PairDirections(partition); }

double directional_derivative(const Dataset& dataset, const PrototypeSolution& solution,
                              const Partition& partition, double lambda,
                              const DirectionVector& eps) {
  require_shape(dataset, partition);
  if (eps.components.rows() != dataset.n() || eps.components.cols() != dataset.d() ||
      solution.prototypes.rows() != dataset.n() || solution.prototypes.cols() != dataset.d()) {
    throw std::invalid_argument("direction or prototype shape does not match dataset");
  }
  const PairDirections dirs(partition);
  const Matrix affine = affine_coefficients(dataset, solution.prototypes, dirs, lambda);
  return evaluate_direction(affine, partition, lambda, eps.components);
}

ProbeResult probe_optimality(const Dataset& dataset, const PrototypeSolution& solution,
                             const Partition& partition, double lambda, int num_probes,
                             std::uint64_t seed) {
  if (num_probes < 1) throw std::invalid_argument("num_probes must be at least 1");
  require_shape(dataset, partition);
  const int n = dataset.n();
  const int d = dataset.d();
  const PairDirections dirs(partition);
  const Matrix affine = affine_coefficients(dataset, solution.prototypes, dirs, lambda);

  ProbeResult result;
  result.min_value = std::numeric_limits<double>::infinity();
  auto consider = [&](const Matrix& eps) {
    const double norm = eps.norm();
    if (norm == 0.0) return;
    const double value = evaluate_direction(affine, partition, lambda, eps / norm);
    if (value < result.min_value) {
      result.min_value = value;
      result.argmin = result.directions_tried;
    }
    ++result.directions_tried;
  };

  Rng rng(seed);
  Matrix eps(n, d);
  for (int t = 0; t < num_probes; ++t) {
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) eps(i, c) = rng.normal();
    }
    consider(eps);
  }

  // Single-point blocks.
  for (int i = 0; i < n; ++i) {
    eps.setZero();
    eps.row(i) = -affine.row(i);
    consider(eps);
    for (int c = 0; c < d; ++c) {
      for (double sign : {1.0, -1.0}) {
        eps.setZero();
        eps(i, c) = sign;
        consider(eps);
      }
    }
  }

  // Cluster-constant blocks.
  for (int l = 0; l < partition.k(); ++l) {
    Eigen::RowVectorXd residual = Eigen::RowVectorXd::Zero(d);
    for (int i : partition.members(l)) residual += affine.row(i);
    auto fill = [&](const Eigen::RowVectorXd& block) {
      eps.setZero();
      for (int i : partition.members(l)) eps.row(i) = block;
      consider(eps);
    };
    fill(-residual);
    for (int c = 0; c < d; ++c) {
      for (double sign : {1.0, -1.0}) {
        Eigen::RowVectorXd axis = Eigen::RowVectorXd::Zero(d);
        axis[c] = sign;
        fill(axis);
      }
    }
  }
  if (result.directions_tried == 0) result.min_value = 0.0;
  return result;
}

std::vector<BoundingBall> bounding_balls(const Dataset& dataset, const Partition& partition,
                                         double lambda) {
  require_shape(dataset, partition);
  std::vector<BoundingBall> balls;
  balls.reserve(partition.k());
  for (int l = 0; l < partition.k(); ++l) {
    const auto& idx = partition.members(l);
    if (idx.empty()) throw std::invalid_argument("empty cluster");
    Vector center = Vector::Zero(dataset.d());
    for (int i : idx) center += dataset.point(i).transpose();
    center /= static_cast<double>(idx.size());
    balls.push_back({l, std::move(center), lambda * static_cast<double>(idx.size() - 1)});
  }
  return balls;
}

CertConfig CertConfig::defaults_for(const Dataset& dataset) {
  const double scale = problem_scale(dataset);
  CertConfig config;
  config.cert_tol = 1e-5 * scale;
  config.probe_tol = 1e-6 * scale;
  config.center_tol = 1e-6 * scale;
  return config;
}

CertCheck check_containment(const Dataset& dataset, const Partition& partition,
                            const std::vector<BoundingBall>& balls, double cert_tol) {
  require_shape(dataset, partition);
  CertCheck check{"containment", false, -std::numeric_limits<double>::infinity(), {}};
  int worst = -1;
  for (int i = 0; i < dataset.n(); ++i) {
    const BoundingBall& ball = balls.at(partition.label(i));
    const double excess = (dataset.point(i).transpose() - ball.center).norm() - ball.radius;
    if (excess > check.margin) {
      check.margin = excess;
      worst = i;
    }
  }
  check.pass = check.margin <= cert_tol;
  check.witness_indices = {worst};
  return check;
}

CertCheck check_gaps(const std::vector<BoundingBall>& balls, double lambda, double cert_tol) {
  CertCheck check{"gaps", true, std::numeric_limits<double>::infinity(), {}};
  if (balls.size() < 2) {
    check.margin = 0.0;
    return check;
  }
  for (std::size_t l = 1; l < balls.size(); ++l) {
    for (std::size_t o = 0; o < l; ++o) {
      const double gap =
          (balls[l].center - balls[o].center).norm() - (balls[l].radius + balls[o].radius);
      if (gap - 2.0 * lambda < check.margin) {
        check.margin = gap - 2.0 * lambda;
        check.witness_indices = {static_cast<int>(o), static_cast<int>(l)};
      }
    }
  }
  check.pass = check.margin > -cert_tol;
  return check;
}

CertCheck check_center_consistency(const Partition& partition,
                                   const std::vector<BoundingBall>& balls, double lambda,
                                   double tol) {
  const PairDirections dirs(partition);
  CertCheck check{"center_consistency", false, 0.0, {}};
  int worst = -1;
  for (int l = 0; l < partition.k(); ++l) {
    const Vector from_solution =
        (partition.centroids().row(l) + lambda * dirs.cluster_aggregate().row(l)).transpose();
    const double diff = (balls.at(l).center - from_solution).norm();
    if (diff > check.margin || worst < 0) {
      check.margin = diff;
      worst = l;
    }
  }
  check.pass = check.margin <= tol;
  check.witness_indices = {worst};
  return check;
}

CertCheck check_swap(const Dataset& dataset, const Partition& partition, double tol) {
  require_shape(dataset, partition);
  const Matrix& m = partition.centroids();
  const int n = dataset.n();
  const int k = partition.k();
  // dist2(i, l) = |x_i - m_l|^2
  Matrix dist2(n, k);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < k; ++l) dist2(i, l) = (dataset.point(i) - m.row(l)).squaredNorm();
  }
  CertCheck check{"convexity_swap", true, -std::numeric_limits<double>::infinity(), {}};
  for (int i = 0; i < n; ++i) {
    const int l = partition.label(i);
    for (int j = 0; j < n; ++j) {
      const int o = partition.label(j);
      if (o == l) continue;
      const double excess = dist2(i, l) + dist2(j, o) - dist2(i, o) - dist2(j, l);
      if (excess > check.margin) {
        check.margin = excess;
        check.witness_indices = {i, j};
      }
    }
  }
  if (check.witness_indices.empty()) check.margin = 0.0;
  check.pass = check.margin <= tol;
  return check;
}

CertCheck check_hull(const Dataset& dataset, const Partition& partition) {
  require_shape(dataset, partition);
  CertCheck check{"convexity_hull", true, 0.0, {}};
  if (dataset.d() != 2) return check;
  std::vector<std::vector<geometry::Point2>> hulls(partition.k());
  for (int l = 0; l < partition.k(); ++l) {
    std::vector<geometry::Point2> pts;
    for (int i : partition.members(l)) pts.push_back({dataset.point(i)[0], dataset.point(i)[1]});
    hulls[l] = geometry::convex_hull(std::move(pts));
  }
  int overlaps = 0;
  for (int l = 0; l < partition.k(); ++l) {
    for (int o = l + 1; o < partition.k(); ++o) {
      if (!geometry::hull_interiors_disjoint(hulls[l], hulls[o])) {
        if (overlaps == 0) check.witness_indices = {l, o};
        ++overlaps;
      }
    }
  }
  check.pass = overlaps == 0;
  check.margin = static_cast<double>(overlaps);
  return check;
}

CertCheck check_convexity(const Dataset& dataset, const Partition& partition, double tol) {
  const CertCheck swap = check_swap(dataset, partition, tol);
  const CertCheck hull = check_hull(dataset, partition);
  CertCheck check{"convexity", swap.pass && hull.pass, swap.margin, swap.witness_indices};
  if (swap.pass && !hull.pass) check.witness_indices = hull.witness_indices;
  return check;
}

Vector Certificate::z(int i, int j) const {
  const int l = labels_.at(i);
  if (labels_.at(j) != l) throw std::invalid_argument("z is only defined within a cluster");
  const Matrix& zl = z_[l];
  if (i == j) return Vector::Zero(zl.cols());
  const int a = local_index_[i];
  const int b = local_index_[j];
  if (a > b) return zl.row(local_pair(a, b)).transpose();
  return -zl.row(local_pair(b, a)).transpose();
}

Certificate balance_certificate(const Matrix& v, const Partition& partition, double lambda,
                                int cert_iters, double cert_tol) {
  if (cert_iters < 1) throw std::invalid_argument("cert_iters must be at least 1");
  if (v.rows() != partition.n()) throw std::invalid_argument("v has the wrong number of rows");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  constexpr int kCheckEvery = 10;

  Certificate cert;
  cert.labels_ = partition.labels();
  cert.local_index_.assign(partition.n(), 0);
  cert.z_.resize(partition.k());
  const Eigen::Index d = v.cols();

  for (int l = 0; l < partition.k(); ++l) {
    const auto& idx = partition.members(l);
    const int size = static_cast<int>(idx.size());
    Matrix vl(size, d);
    for (int a = 0; a < size; ++a) {
      cert.local_index_[idx[a]] = a;
      vl.row(a) = v.row(idx[a]);
    }
    const auto pairs = static_cast<Eigen::Index>(size) * (size - 1) / 2;
    Matrix x = Matrix::Zero(pairs, d);
    double balance = max_row_norm(vl);

    if (size > 1) {
      // Sum of v over the cluster is invariant under A z, so a nonzero mean
      // is an infeasibility proof; skip the search.
      const bool balanced = vl.colwise().mean().norm() <= cert_tol;
      // Accelerated projected gradient on 1/2 |A z - v|^2 over the balls.
      // The largest eigenvalue of A A^T is the cluster size.
      const double step = 1.0 / size;
      Matrix y = x;
      Matrix next(pairs, d);
      double t = 1.0;
      const int budget = balanced ? cert_iters : 1;
      int it = 0;
      for (; it < budget; ++it) {
        next = y - step * apply_incidence_transpose(apply_incidence(y, size) - vl, size);
        project_balls(next, lambda);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        if ((y - next).cwiseProduct(next - x).sum() > 0.0) {
          // Momentum points uphill; restart.
          y = next;
          t = 1.0;
        } else {
          y = next + ((t - 1.0) / t_next) * (next - x);
          t = t_next;
        }
        x.swap(next);
        if ((it + 1) % kCheckEvery == 0 || it + 1 == budget) {
          balance = max_row_norm(apply_incidence(x, size) - vl);
          if (balance <= 0.1 * cert_tol) {
            ++it;
            break;
          }
        }
      }
      cert.iterations = std::max(cert.iterations, it);
    }
    double norm_excess = 0.0;
    for (Eigen::Index p = 0; p < pairs; ++p) {
      norm_excess = std::max(norm_excess, x.row(p).norm() - lambda);
    }
    cert.max_norm_violation = std::max(cert.max_norm_violation, norm_excess);
    cert.max_balance_residual = std::max(cert.max_balance_residual, balance);
    cert.z_[l] = std::move(x);
  }
  cert.feasible = cert.max_norm_violation <= cert_tol && cert.max_balance_residual <= cert_tol;
  return cert;
}

Matrix stationarity_residual(const Dataset& dataset, const Partition& partition, double lambda) {
  require_shape(dataset, partition);
  const PairDirections dirs(partition);
  Matrix v(dataset.n(), dataset.d());
  for (int i = 0; i < dataset.n(); ++i) {
    const int l = partition.label(i);
    v.row(i) = partition.centroids().row(l) + lambda * dirs.cluster_aggregate().row(l) -
               dataset.point(i);
  }
  return v;
}

Certificate dual_certificate(const Dataset& dataset, const PrototypeSolution& solution,
                             const Partition& partition, double lambda, int cert_iters,
                             double cert_tol) {
  if (solution.prototypes.rows() != dataset.n()) {
    throw std::invalid_argument("solution does not match dataset");
  }
  return balance_certificate(stationarity_residual(dataset, partition, lambda), partition,
                             lambda, cert_iters, cert_tol);
}

bool same_solution_probe(const Dataset& candidate, const PrototypeSolution& solution,
                         const Partition& partition, double lambda, int cert_iters,
                         double cert_tol) {
  if (solution.prototypes.rows() != candidate.n() ||
      solution.prototypes.cols() != candidate.d()) {
    throw std::invalid_argument("candidate dataset shape does not match the solution");
  }
  return dual_certificate(candidate, solution, partition, lambda, cert_iters, cert_tol).feasible;
}

Dataset construct_boundary_dataset(int cluster_size, double lambda, const Vector& prototype,
                                   const Vector& unit_direction) {
  if (cluster_size < 2) throw std::invalid_argument("cluster_size must be at least 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (prototype.size() != unit_direction.size() || prototype.size() < 1) {
    throw std::invalid_argument("prototype and direction dimensions differ");
  }
  if (std::abs(unit_direction.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("unit_direction must have norm 1");
  }
  Matrix points(cluster_size, prototype.size());
  points.row(0) = (prototype - lambda * (cluster_size - 1) * unit_direction).transpose();
  for (int j = 1; j < cluster_size; ++j) {
    points.row(j) = (prototype + lambda * unit_direction).transpose();
  }
  return Dataset(std::move(points));
}

bool CertReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CertCheck& c) { return c.pass; });
}

const CertCheck& CertReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named " + name);
}

CertReport certify(const Dataset& dataset, const PrototypeSolution& solution,
                   const Partition& partition, double lambda, const CertConfig& config) {
  CertReport report;
  const ProbeResult probe =
      probe_optimality(dataset, solution, partition, lambda, config.num_probes, config.seed);
  report.checks.push_back(
      {"optimality_probe", probe.min_value >= -config.probe_tol, probe.min_value, {probe.argmin}});

  const auto balls = bounding_balls(dataset, partition, lambda);
  report.checks.push_back(check_containment(dataset, partition, balls, config.cert_tol));
  report.checks.push_back(check_gaps(balls, lambda, config.cert_tol));
  report.checks.push_back(check_center_consistency(partition, balls, lambda, config.center_tol));
  report.checks.push_back(check_convexity(dataset, partition, config.cert_tol));

  const Certificate cert =
      dual_certificate(dataset, solution, partition, lambda, config.cert_iters, config.cert_tol);
  report.checks.push_back({"dual_certificate",
                           cert.feasible,
                           std::max(cert.max_norm_violation, cert.max_balance_residual),
                           {}});
  return report;
}

}  // namespace cvxclust
