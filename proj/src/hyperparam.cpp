#include "cvxclust/hyperparam.hpp"

#include "cvxclust/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvxclust {

double lambda_upper_bound(const Dataset& dataset) {
  if (dataset.n() < 2) throw std::invalid_argument("lambda bounds need at least two points");
  return max_pairwise_distance(dataset.points()) / 2.0;
}

double lambda_lower_bound(const Dataset& dataset, int q) {
  if (dataset.n() < 2) throw std::invalid_argument("lambda bounds need at least two points");
  if (q < 2 || q > dataset.n()) throw std::invalid_argument("q must lie in [2, n]");
  const double qq = static_cast<double>(q);
  return min_pairwise_distance(dataset.points()) / std::sqrt(2.0 * qq * (qq - 1.0));
}

LambdaBounds lambda_bounds(const Dataset& dataset) {
  LambdaBounds bounds;
  bounds.upper = lambda_upper_bound(dataset);
  const double min_dist = min_pairwise_distance(dataset.points());
  for (int q = 2; q <= dataset.n(); ++q) {
    const double qq = static_cast<double>(q);
    bounds.lower_for_q[q] = min_dist / std::sqrt(2.0 * qq * (qq - 1.0));
  }
  return bounds;
}

LambdaPath lambda_path(const Dataset& dataset, const std::vector<double>& lambdas,
                       const SolverConfig& config, bool warm_start) {
  for (std::size_t t = 0; t < lambdas.size(); ++t) {
    if (!(lambdas[t] >= 0.0)) throw std::invalid_argument("lambdas must be nonnegative");
    if (t > 0 && !(lambdas[t] > lambdas[t - 1])) {
      throw std::invalid_argument("lambdas must be strictly increasing");
    }
  }
  const double fuse_tol = config.fuse_tol.value_or(default_fuse_tol(dataset));
  LambdaPath path;
  AdmmState state = initial_admm_state(dataset, config.admm_rho);
  for (double lambda : lambdas) {
    PathEntry entry;
    entry.lambda = lambda;
    SolverConfig cfg = config;
    cfg.lambda = lambda;
    try {
      if (warm_start) {
        entry.solution = solve_admm(dataset, cfg, state);
      } else {
        entry.solution = solve_admm(dataset, cfg);
      }
      entry.partition = extract_partition(entry.solution, fuse_tol);
      entry.k = entry.partition.k();
      entry.converged = entry.solution.converged;
      entry.objective = entry.solution.objective_value;
    } catch (const std::exception& e) {
      entry.error = e.what();
      state = initial_admm_state(dataset, config.admm_rho);
    }
    path.entries.push_back(std::move(entry));
  }
  return path;
}

std::vector<double> make_grid(double lo, double hi, int count, bool log) {
  if (count < 1) throw std::invalid_argument("grid count must be at least 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi < lo) {
    throw std::invalid_argument("grid needs 0 <= min <= max");
  }
  if (log && lo <= 0.0) throw std::invalid_argument("log grid needs min > 0");
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  for (int t = 0; t < count; ++t) {
    const double s = static_cast<double>(t) / (count - 1);
    grid[t] = log ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_lambda_grid(const Dataset& dataset) {
  const double upper = lambda_upper_bound(dataset);
  if (!(upper > 0.0)) throw std::invalid_argument("all points coincide");
  return make_grid(0.01 * upper, 1.2 * upper, 32, true);
}

namespace {

double parse_double(const std::string& text, const std::string& spec) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("malformed lambda grid '" + spec + "'");
  }
  return value;
}

}  // namespace

std::vector<double> parse_lambda_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream stream(spec);
  std::string part;
  while (std::getline(stream, part, ':')) parts.push_back(part);
  if (!spec.empty() && spec.back() == ':') parts.push_back("");
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("lambda grid must be min:max:count[:log|lin], got '" + spec + "'");
  }
  const double lo = parse_double(parts[0], spec);
  const double hi = parse_double(parts[1], spec);
  const double count = parse_double(parts[2], spec);
  if (count < 1 || count != std::floor(count) || count > 1e6) {
    throw std::invalid_argument("malformed lambda grid count in '" + spec + "'");
  }
  bool log = false;
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      log = true;
    } else if (parts[3] != "lin") {
      throw std::invalid_argument("lambda grid scale must be log or lin in '" + spec + "'");
    }
  }
  auto grid = make_grid(lo, hi, static_cast<int>(count), log);
  for (std::size_t t = 1; t < grid.size(); ++t) {
    if (!(grid[t] > grid[t - 1])) {
      throw std::invalid_argument("lambda grid '" + spec + "' is not strictly increasing");
    }
  }
  return grid;
}

int ImpossibilityReport::violations() const {
  return static_cast<int>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.violation; }));
}

ImpossibilityReport collinear_impossibility(int n, const std::vector<double>& lambdas,
                                            const SolverConfig& config) {
  if (n < 3) throw std::invalid_argument("collinear impossibility needs n >= 3");
  Matrix points(n, 1);
  for (int i = 0; i < n; ++i) points(i, 0) = i + 1.0;
  const Dataset dataset(std::move(points));
  const double fuse_tol = config.fuse_tol.value_or(default_fuse_tol(dataset));

  ImpossibilityReport report;
  report.n = n;
  for (double lambda : lambdas) {
    SolverConfig cfg = config;
    cfg.lambda = lambda;
    const PrototypeSolution solution = solve_admm(dataset, cfg);
    ImpossibilityEntry entry;
    entry.lambda = lambda;
    entry.k = extract_partition(solution, fuse_tol).k();
    entry.converged = solution.converged;
    entry.violation = entry.converged && entry.k > 1 && entry.k < n;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace cvxclust
