#pragma once

#include "cvxclust/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cvxclust {

// Number of unordered pairs among n points.
inline std::size_t pair_count(int n) {
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

// Pairs (i, j) with j < i are enumerated row by row: p = i(i-1)/2 + j.
inline std::size_t pair_index(int i, int j) {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(i - 1) / 2 +
         static_cast<std::size_t>(j);
}

// ADMM iterate for the splitting w_p = u_i - u_j over all unordered pairs.
// Y holds unscaled multipliers, so fused pairs satisfy |y_p| <= lambda at
// the optimum.
struct AdmmState {
  Matrix U;
  Matrix W;
  Matrix Y;
  double rho = 1.0;
  double lambda = 0.0;
  int iteration = 0;
  std::vector<Residuals> history;
};

// U = X, W = pair differences of X, Y = 0.
AdmmState initial_admm_state(const Dataset& dataset, double rho);

// Cold start from initial_admm_state. Non-convergence is reported through
// `converged`, never thrown. NaN iterates throw NumericalError.
PrototypeSolution solve_admm(const Dataset& dataset, const SolverConfig& config);

// Warm start from `state`, which is advanced in place. When state.lambda
// differs from config.lambda the multipliers are rescaled by the ratio.
PrototypeSolution solve_admm(const Dataset& dataset, const SolverConfig& config,
                             AdmmState& state);

// Exact minimizer of the objective restricted to prototypes that are constant
// on each cluster of `partition` (damped Newton on the k-centroid problem).
// Returns nullopt if two centroids collapse to within `min_separation` or the
// iteration fails to converge.
std::optional<Matrix> refine_on_partition(const Dataset& dataset, const Partition& partition,
                                          double lambda, double min_separation);

// Independent slow oracle: accelerated gradient descent on the objective with
// Huber-smoothed pair norms. The smoothing width follows
// mu_t = max(0.01 * scale * 0.99^t, smoothing). Only for cross-checks.
PrototypeSolution solve_reference(const Dataset& dataset, double lambda, int iters,
                                  double smoothing);

}  // namespace cvxclust
