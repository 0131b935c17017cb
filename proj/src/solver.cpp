#include "cvxclust/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cvxclust {

namespace {

constexpr double kRhoMin = 1e-3;
constexpr double kRhoMax = 1e3;
constexpr double kRhoBalance = 10.0;
constexpr int kCheckpointEvery = 100;
constexpr int kPolishRounds = 4;

PrototypeSolution trivial_solution(const Dataset& dataset, double lambda) {
  PrototypeSolution sol;
  sol.prototypes = dataset.points();
  sol.lambda = lambda;
  sol.objective_value = objective(dataset, sol.prototypes, lambda);
  sol.converged = true;
  return sol;
}

void check_state_shape(const Dataset& dataset, const AdmmState& state) {
  const auto n = dataset.points().rows();
  const auto d = dataset.points().cols();
  const auto pairs = static_cast<Eigen::Index>(pair_count(dataset.n()));
  if (state.U.rows() != n || state.U.cols() != d || state.W.rows() != pairs ||
      state.W.cols() != d || state.Y.rows() != pairs || state.Y.cols() != d) {
    throw std::invalid_argument("ADMM state shape does not match dataset");
  }
}

// F(M) = 1/2 sum_l n_l |m_l - a_l|^2 + lambda sum_{l<o} n_l n_o |m_l - m_o|,
// the objective restricted to cluster-constant prototypes (up to a constant).
struct ReducedProblem {
  Matrix means;
  Vector weights;
  double lambda;

  double value(const Matrix& m) const {
    double f = 0.0;
    const Eigen::Index k = m.rows();
    for (Eigen::Index l = 0; l < k; ++l) {
      f += 0.5 * weights[l] * (m.row(l) - means.row(l)).squaredNorm();
    }
    double pen = 0.0;
    for (Eigen::Index l = 1; l < k; ++l) {
      for (Eigen::Index o = 0; o < l; ++o) {
        pen += weights[l] * weights[o] * (m.row(l) - m.row(o)).norm();
      }
    }
    return f + lambda * pen;
  }

  Vector gradient(const Matrix& m) const {
    const Eigen::Index k = m.rows();
    const Eigen::Index d = m.cols();
    Vector g(k * d);
    for (Eigen::Index l = 0; l < k; ++l) {
      g.segment(l * d, d) = weights[l] * (m.row(l) - means.row(l)).transpose();
    }
    for (Eigen::Index l = 1; l < k; ++l) {
      for (Eigen::Index o = 0; o < l; ++o) {
        const Vector diff = (m.row(l) - m.row(o)).transpose();
        const Vector e = diff / diff.norm();
        const double w = lambda * weights[l] * weights[o];
        g.segment(l * d, d) += w * e;
        g.segment(o * d, d) -= w * e;
      }
    }
    return g;
  }

  Eigen::MatrixXd hessian(const Matrix& m) const {
    const Eigen::Index k = m.rows();
    const Eigen::Index d = m.cols();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k * d, k * d);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index l = 0; l < k; ++l) h.block(l * d, l * d, d, d) += weights[l] * eye;
    for (Eigen::Index l = 1; l < k; ++l) {
      for (Eigen::Index o = 0; o < l; ++o) {
        const Vector diff = (m.row(l) - m.row(o)).transpose();
        const double dist = diff.norm();
        const Vector e = diff / dist;
        const Eigen::MatrixXd block =
            (lambda * weights[l] * weights[o] / dist) * (eye - e * e.transpose());
        h.block(l * d, l * d, d, d) += block;
        h.block(o * d, o * d, d, d) += block;
        h.block(l * d, o * d, d, d) -= block;
        h.block(o * d, l * d, d, d) -= block;
      }
    }
    return h;
  }
};

// Components of the graph whose edges are the pairs with w_p exactly zero.
Partition zero_pattern_partition(const Matrix& U, const Matrix& W) {
  const int n = static_cast<int>(U.rows());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (W.row(static_cast<Eigen::Index>(pair_index(i, j))).isZero(0.0)) {
        const int a = find(i);
        const int b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = find(i);
  return partition_from_labels(U, labels);
}

double min_row_separation(const Matrix& m) {
  if (m.rows() < 2) return std::numeric_limits<double>::infinity();
  return min_pairwise_distance(m);
}

}  // namespace

AdmmState initial_admm_state(const Dataset& dataset, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("admm_rho must be positive");
  const Matrix& x = dataset.points();
  const int n = dataset.n();
  AdmmState state;
  state.U = x;
  state.W.resize(static_cast<Eigen::Index>(pair_count(n)), x.cols());
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      state.W.row(static_cast<Eigen::Index>(pair_index(i, j))) = x.row(i) - x.row(j);
    }
  }
  state.Y = Matrix::Zero(state.W.rows(), x.cols());
  state.rho = rho;
  return state;
}

PrototypeSolution solve_admm(const Dataset& dataset, const SolverConfig& config) {
  AdmmState state = initial_admm_state(dataset, config.admm_rho);
  return solve_admm(dataset, config, state);
}

PrototypeSolution solve_admm(const Dataset& dataset, const SolverConfig& config,
                             AdmmState& state) {
  config.validate();
  check_state_shape(dataset, state);
  const double lambda = config.lambda;
  const Matrix& x = dataset.points();
  const int n = dataset.n();
  const int d = dataset.d();

  if (lambda == 0.0 || n == 1) {
    state = initial_admm_state(dataset, state.rho);
    state.lambda = lambda;
    return trivial_solution(dataset, lambda);
  }

  if (state.lambda > 0.0 && state.lambda != lambda) {
    state.Y *= lambda / state.lambda;
  } else if (state.lambda == 0.0) {
    state.Y.setZero();
  }
  state.lambda = lambda;
  state.rho = std::clamp(state.rho, kRhoMin, kRhoMax);

  const double scale = problem_scale(dataset);
  const double fuse_tol = config.fuse_tol.value_or(default_fuse_tol(dataset));

  Matrix& U = state.U;
  Matrix& W = state.W;
  Matrix& Y = state.Y;
  Matrix B(n, d);
  std::vector<double> diff(d), shifted(d);

  PrototypeSolution best;
  best.objective_value = std::numeric_limits<double>::infinity();
  Residuals res;
  int iters_run = 0;

  // Runs ADMM until both residuals meet their targets or the iteration budget
  // is spent. Returns whether the targets were met.
  auto iterate = [&](double primal_target, double dual_target) {
    while (iters_run < config.max_iters) {
      const double rho = state.rho;

      // u-update: (I + rho L) U = X + rho D^T (W - Y/rho) with L = nI - 11^T,
      // solved in closed form via 1^T U = 1^T B.
      B = x;
      for (int i = 1; i < n; ++i) {
        double* bi = B.row(i).data();
        for (int j = 0; j < i; ++j) {
          const auto p = static_cast<Eigen::Index>(pair_index(i, j));
          const double* wp = W.row(p).data();
          const double* yp = Y.row(p).data();
          double* bj = B.row(j).data();
          for (int c = 0; c < d; ++c) {
            const double t = rho * wp[c] - yp[c];
            bi[c] += t;
            bj[c] -= t;
          }
        }
      }
      const Eigen::RowVectorXd total = B.colwise().sum();
      U = (B.rowwise() + rho * total) / (1.0 + n * rho);

      // w-update (block soft threshold) and multiplier step.
      const double threshold = lambda / rho;
      double primal2 = 0.0;
      double dual2 = 0.0;
      for (int i = 1; i < n; ++i) {
        const double* ui = U.row(i).data();
        for (int j = 0; j < i; ++j) {
          const auto p = static_cast<Eigen::Index>(pair_index(i, j));
          const double* uj = U.row(j).data();
          double* wp = W.row(p).data();
          double* yp = Y.row(p).data();
          double norm2 = 0.0;
          for (int c = 0; c < d; ++c) {
            diff[c] = ui[c] - uj[c];
            shifted[c] = diff[c] + yp[c] / rho;
            norm2 += shifted[c] * shifted[c];
          }
          const double norm = std::sqrt(norm2);
          const double shrink = norm > threshold ? 1.0 - threshold / norm : 0.0;
          for (int c = 0; c < d; ++c) {
            const double w_new = shrink * shifted[c];
            const double dw = w_new - wp[c];
            dual2 += dw * dw;
            wp[c] = w_new;
            const double r = diff[c] - w_new;
            primal2 += r * r;
            yp[c] += rho * r;
          }
        }
      }
      res.primal = std::sqrt(primal2);
      res.dual = rho * std::sqrt(dual2);
      state.history.push_back(res);
      ++state.iteration;
      ++iters_run;

      if (!std::isfinite(res.primal) || !std::isfinite(res.dual)) {
        throw NumericalError("ADMM iterate became non-finite at iteration " +
                             std::to_string(state.iteration));
      }
      if (res.primal <= primal_target && res.dual <= dual_target) return true;

      if (iters_run % kCheckpointEvery == 0) {
        const double f = objective(dataset, U, lambda);
        if (f < best.objective_value) {
          best.prototypes = U;
          best.objective_value = f;
          best.residuals = res;
          best.iterations = iters_run;
        }
      }

      if (res.primal > kRhoBalance * res.dual) {
        state.rho = std::min(kRhoMax, rho * 2.0);
      } else if (res.dual > kRhoBalance * res.primal) {
        state.rho = std::max(kRhoMin, rho / 2.0);
      }
    }
    return false;
  };

  const bool converged = iterate(config.primal_tol * scale, config.dual_tol * scale);

  PrototypeSolution sol;
  sol.lambda = lambda;
  sol.prototypes = U;
  sol.objective_value = objective(dataset, U, lambda);
  sol.iterations = iters_run;
  sol.converged = converged;
  sol.residuals = res;

  if (!converged) {
    if (best.objective_value < sol.objective_value) {
      best.lambda = lambda;
      best.converged = false;
      return best;
    }
    return sol;
  }
  if (!config.polish) return sol;

  // Polishing: solve the objective exactly on a candidate partition and keep
  // the result if it does not increase the objective. Candidates come from the
  // exact zeros of W and from the fuse_tol threshold; if neither polishes,
  // ADMM continues at a tenfold tighter tolerance.
  double tighten = 1.0;
  for (int round = 0; round <= kPolishRounds; ++round) {
    const double raw_value = objective(dataset, U, lambda);
    const double slack = 1e-12 * std::max(1.0, std::abs(raw_value));
    std::optional<Matrix> winner;
    double winner_value = raw_value + slack;
    for (const Partition& candidate :
         {zero_pattern_partition(U, W), extract_partition(U, fuse_tol)}) {
      auto refined = refine_on_partition(dataset, candidate, lambda, 1e-12 * scale);
      if (!refined) continue;
      const double f = objective(dataset, *refined, lambda);
      if (f <= winner_value) {
        winner_value = f;
        winner = std::move(refined);
      }
    }
    if (winner) {
      sol.prototypes = std::move(*winner);
      sol.objective_value = winner_value;
      sol.polished = true;
      break;
    }
    if (round == kPolishRounds) break;
    tighten *= 0.1;
    if (!iterate(config.primal_tol * scale * tighten, config.dual_tol * scale * tighten)) break;
    sol.prototypes = U;
    sol.objective_value = objective(dataset, U, lambda);
    sol.iterations = iters_run;
    sol.residuals = res;
  }
  return sol;
}

std::optional<Matrix> refine_on_partition(const Dataset& dataset, const Partition& partition,
                                          double lambda, double min_separation) {
  if (partition.n() != dataset.n()) {
    throw std::invalid_argument("partition size does not match dataset");
  }
  const int k = partition.k();
  const int d = dataset.d();
  ReducedProblem problem{Matrix::Zero(k, d), Vector(k), lambda};
  for (int l = 0; l < k; ++l) {
    for (int i : partition.members(l)) problem.means.row(l) += dataset.point(i);
    problem.weights[l] = static_cast<double>(partition.sizes()[l]);
    problem.means.row(l) /= problem.weights[l];
  }

  Matrix m = (k == 1) ? problem.means : partition.centroids();
  if (k > 1) {
    if (min_row_separation(m) <= min_separation) return std::nullopt;
    const double gscale = problem_scale(dataset) + lambda * dataset.n() * dataset.n();
    const double gtol = 1e-12 * gscale;
    bool done = false;
    for (int it = 0; it < 100 && !done; ++it) {
      const Vector g = problem.gradient(m);
      if (g.norm() <= gtol) {
        done = true;
        break;
      }
      const Vector step = problem.hessian(m).llt().solve(-g);
      if (!step.allFinite()) return std::nullopt;
      const double f0 = problem.value(m);
      const double slope = g.dot(step);
      double t = 1.0;
      Matrix trial;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        trial = m + t * Eigen::Map<const Matrix>(step.data(), k, d);
        if (min_row_separation(trial) > min_separation &&
            problem.value(trial) <= f0 + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        // No further decrease at working precision.
        done = g.norm() <= 1e-8 * gscale;
        break;
      }
      m = trial;
    }
    if (!done) return std::nullopt;
  }

  Matrix prototypes(dataset.n(), d);
  for (int i = 0; i < dataset.n(); ++i) prototypes.row(i) = m.row(partition.label(i));
  return prototypes;
}

PrototypeSolution solve_reference(const Dataset& dataset, double lambda, int iters,
                                  double smoothing) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and nonnegative");
  }
  if (iters < 1) throw std::invalid_argument("iters must be at least 1");
  if (!(smoothing > 0.0)) throw std::invalid_argument("smoothing must be positive");
  if (lambda == 0.0 || dataset.n() == 1) return trivial_solution(dataset, lambda);

  const Matrix& x = dataset.points();
  const int n = dataset.n();
  const int d = dataset.d();
  const double mu0 = 1e-2 * problem_scale(dataset);

  auto gradient = [&](const Matrix& u, double mu) {
    Matrix g = u - x;
    for (int i = 1; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        const Eigen::RowVectorXd w = u.row(i) - u.row(j);
        const Eigen::RowVectorXd h = (lambda / std::max(w.norm(), mu)) * w;
        g.row(i) += h;
        g.row(j) -= h;
      }
    }
    return g;
  };

  Matrix u = x;
  Matrix u_prev = x;
  Matrix g(n, d);
  double mu = mu0;
  for (int t = 0; t < iters; ++t) {
    mu = std::max(mu0 * std::pow(0.99, t), smoothing);
    const double lipschitz = 1.0 + lambda * n / mu;
    const double momentum = (std::sqrt(lipschitz) - 1.0) / (std::sqrt(lipschitz) + 1.0);
    const Matrix look = u + momentum * (u - u_prev);
    g = gradient(look, mu);
    Matrix next = look - g / lipschitz;
    // Gradient-based adaptive restart.
    const bool restart = (g.cwiseProduct(next - u)).sum() > 0.0;
    u_prev = restart ? next : u;
    u = std::move(next);
    if (!u.allFinite()) throw NumericalError("reference iterate became non-finite");
  }

  PrototypeSolution sol;
  sol.prototypes = u;
  sol.lambda = lambda;
  sol.objective_value = objective(dataset, u, lambda);
  sol.iterations = iters;
  sol.residuals.primal = gradient(u, mu).norm();
  sol.converged = sol.residuals.primal <= 1e-6 * problem_scale(dataset);
  return sol;
}

}  // namespace cvxclust
