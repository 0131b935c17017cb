#pragma once

#include "cvxclust/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cvxclust {

struct LambdaBounds {
  // Every solution with k > 1 has lambda strictly below this.
  double upper = 0.0;
  // q -> lower bound for solutions whose largest cluster has size q.
  std::map<int, double> lower_for_q;
};

// max_{i != j} |x_i - x_j| / 2. Throws for n < 2.
double lambda_upper_bound(const Dataset& dataset);

// min_{i != j} |x_i - x_j| / sqrt(2 q (q - 1)), 2 <= q <= n.
double lambda_lower_bound(const Dataset& dataset, int q);

// Upper bound and lower bounds for every q in [2, n].
LambdaBounds lambda_bounds(const Dataset& dataset);

struct PathEntry {
  double lambda = 0.0;
  int k = 0;
  Partition partition;
  bool converged = false;
  double objective = 0.0;
  PrototypeSolution solution;
  // Set when the solve threw; the other fields are then unspecified.
  std::optional<std::string> error;
};

struct LambdaPath {
  std::vector<PathEntry> entries;
};

// Solves at each lambda in order. With warm_start, U, W and Y carry over from
// the previous entry. Solver errors are recorded per entry. Lambdas must be
// strictly increasing and nonnegative.
LambdaPath lambda_path(const Dataset& dataset, const std::vector<double>& lambdas,
                       const SolverConfig& config, bool warm_start = true);

// count values from lo to hi, geometric when log is set.
std::vector<double> make_grid(double lo, double hi, int count, bool log);

// 32 log-spaced values from 0.01 to 1.2 times lambda_upper_bound.
std::vector<double> default_lambda_grid(const Dataset& dataset);

// Parses "min:max:count:log|lin"; the scale may be omitted (lin). A log grid
// needs min > 0. Throws std::invalid_argument on malformed input.
std::vector<double> parse_lambda_grid(const std::string& spec);

struct ImpossibilityEntry {
  double lambda = 0.0;
  int k = 0;
  bool converged = false;
  // 1 < k < n on a converged solve.
  bool violation = false;
};

struct ImpossibilityReport {
  int n = 0;
  std::vector<ImpossibilityEntry> entries;
  int violations() const;
};

// Solves X = {1, 2, ..., n} in one dimension across `lambdas` (any order)
// and flags every converged solution with 1 < k < n.
ImpossibilityReport collinear_impossibility(int n, const std::vector<double>& lambdas,
                                            const SolverConfig& config);

}  // namespace cvxclust
