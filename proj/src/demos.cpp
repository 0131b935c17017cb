#include "cvxclust/demos.hpp"

#include "cvxclust/fixtures.hpp"
#include "cvxclust/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cvxclust {

namespace {

std::string lambda_title(const std::string& prefix, double lambda, int k) {
  std::ostringstream out;
  out << prefix << "lambda=" << lambda << " k=" << k;
  return out.str();
}

GrowthStep growth_step(const Dataset& dataset, const std::vector<int>& truth, int growing,
                       int added, double lambda, const SolverConfig& base, ClusterRun& run) {
  SolverConfig cfg = base;
  cfg.lambda = lambda;
  run = cluster_and_certify(dataset, cfg);
  GrowthStep step;
  step.added = added;
  step.lambda = lambda;
  step.k = run.partition.k();
  step.converged = run.solution.converged;
  std::map<int, int> counts;
  int members = 0;
  for (int i = 0; i < dataset.n(); ++i) {
    if (truth[i] == growing) {
      ++counts[run.partition.label(i)];
      ++members;
    }
  }
  const auto top = std::max_element(counts.begin(), counts.end(),
                                    [](const auto& a, const auto& b) { return a.second < b.second; });
  step.growing_single = top->second == members;
  step.growing_pure = true;
  for (int i = 0; i < dataset.n(); ++i) {
    if (run.partition.label(i) == top->first && truth[i] != growing) step.growing_pure = false;
  }
  return step;
}

}  // namespace

ClusterRun certify_solution(const Dataset& dataset, PrototypeSolution solution, double lambda,
                            double fuse_tol) {
  ClusterRun run;
  run.solution = std::move(solution);
  run.partition = extract_partition(run.solution, fuse_tol);
  run.balls = bounding_balls(dataset, run.partition, lambda);
  run.report = certify(dataset, run.solution, run.partition, lambda,
                       CertConfig::defaults_for(dataset));
  return run;
}

ClusterRun cluster_and_certify(const Dataset& dataset, const SolverConfig& config) {
  const double fuse_tol = config.fuse_tol.value_or(default_fuse_tol(dataset));
  return certify_solution(dataset, solve_admm(dataset, config), config.lambda, fuse_tol);
}

ClusterRun certify_prototypes(const Dataset& dataset, const Matrix& prototypes, double lambda,
                              double fuse_tol) {
  if (prototypes.rows() != dataset.n() || prototypes.cols() != dataset.d()) {
    throw std::invalid_argument("prototype matrix shape does not match dataset");
  }
  PrototypeSolution solution;
  solution.prototypes = prototypes;
  solution.lambda = lambda;
  solution.objective_value = objective(dataset, prototypes, lambda);
  solution.converged = true;
  return certify_solution(dataset, std::move(solution), lambda, fuse_tol);
}

svg::Panel make_panel(const std::string& title, const Dataset& dataset, const ClusterRun& run) {
  return {title, dataset.points(), run.partition.labels(), run.solution.prototypes, run.balls};
}

InflexibilityResult run_inflexibility(const SolverConfig& base) {
  InflexibilityResult result;
  const int growing = static_cast<int>(fixtures::blob_centers().rows()) - 1;
  std::vector<svg::Panel> lower;
  for (std::size_t t = 0; t < fixtures::kGrowingAdded.size(); ++t) {
    const int added = fixtures::kGrowingAdded[t];
    const GeneratedData data = fixtures::growing_dataset(added);
    ClusterRun run;
    result.fixed_lambda.push_back(growth_step(data.dataset, data.labels, growing, added,
                                              fixtures::kGrowingFixedLambda, base, run));
    result.panels.push_back(make_panel(
        "+" + std::to_string(added) + " " +
            lambda_title("", fixtures::kGrowingFixedLambda, run.partition.k()),
        data.dataset, run));
    const double lambda = fixtures::kGrowingDecreasingLambdas[t];
    result.decreasing_lambda.push_back(
        growth_step(data.dataset, data.labels, growing, added, lambda, base, run));
    lower.push_back(make_panel(
        "+" + std::to_string(added) + " " + lambda_title("", lambda, run.partition.k()),
        data.dataset, run));
  }
  result.panels.insert(result.panels.end(), lower.begin(), lower.end());

  const auto& fixed = result.fixed_lambda;
  bool nonincreasing = true;
  bool absorbed = false;
  for (std::size_t t = 0; t < fixed.size(); ++t) {
    if (t > 0 && fixed[t].k > fixed[t - 1].k) nonincreasing = false;
    if (t > 0 && !fixed[t].growing_pure) absorbed = true;
  }
  result.merges_at_fixed_lambda =
      nonincreasing && absorbed && fixed.front().growing_pure && fixed.back().k < fixed.front().k;

  const auto& dec = result.decreasing_lambda;
  bool intact = true;
  for (const auto& s : dec) intact = intact && s.growing_single && s.growing_pure;
  result.splits_at_decreasing_lambda = intact && dec.back().k > dec.front().k;
  return result;
}

void noise_statistics(const Partition& partition, const std::vector<int>& truth,
                      int& noise_max_cluster, double& clean_in_large, int large_size) {
  noise_max_cluster = 0;
  int clean = 0;
  int clean_large = 0;
  for (int i = 0; i < partition.n(); ++i) {
    const int size = partition.sizes()[partition.label(i)];
    if (truth[i] < 0) {
      noise_max_cluster = std::max(noise_max_cluster, size);
    } else {
      ++clean;
      if (size >= large_size) ++clean_large;
    }
  }
  clean_in_large = clean > 0 ? static_cast<double>(clean_large) / clean : 0.0;
}

ComparisonResult run_comparison(const SolverConfig& base) {
  ComparisonResult result;
  for (const auto& fixture : fixtures::comparison_fixtures()) {
    const GeneratedData data = generate(fixture.spec);
    SolverConfig cfg = base;
    cfg.lambda = fixture.lambda;
    const ClusterRun run = cluster_and_certify(data.dataset, cfg);

    ComparisonRow row;
    row.dataset = fixture.name;
    row.lambda = fixture.lambda;
    row.n = data.dataset.n();
    row.convex_k = run.partition.k();
    row.converged = run.solution.converged;
    row.certified = run.report.all_pass();
    // Baselines get the number of true components; uniform data has none, so
    // it borrows the blob count.
    int components = 3;
    if (!data.labels.empty()) {
      components = *std::max_element(data.labels.begin(), data.labels.end()) + 1;
    }
    row.baseline_k = std::min(components, row.n);
    row.kmeans = kmeans(data.dataset, row.baseline_k, base.seed);
    row.ward = ward_agglomerative(data.dataset, row.baseline_k);
    if (fixture.spec.kind == GeneratorKind::blobs_with_noise) {
      noise_statistics(run.partition, data.labels, row.noise_max_cluster, row.clean_in_large);
    }

    result.panels.push_back(make_panel(
        fixture.name + " convex " + lambda_title("", fixture.lambda, row.convex_k), data.dataset,
        run));
    result.panels.push_back({fixture.name + " k-means k=" + std::to_string(row.baseline_k),
                             data.dataset.points(), row.kmeans.labels(), row.kmeans.centroids(),
                             {}});
    result.panels.push_back({fixture.name + " ward k=" + std::to_string(row.baseline_k),
                             data.dataset.points(), row.ward.labels(), std::nullopt, {}});
    result.rows.push_back(std::move(row));
  }
  return result;
}

BoundaryCase run_boundary_case(int cluster_size, double lambda, const SolverConfig& base) {
  Vector prototype = Vector::Zero(2);
  Vector direction(2);
  direction << 1.0, 0.0;
  const Dataset dataset = construct_boundary_dataset(cluster_size, lambda, prototype, direction);
  SolverConfig cfg = base;
  cfg.lambda = lambda;
  const ClusterRun run = cluster_and_certify(dataset, cfg);

  BoundaryCase result;
  result.cluster_size = cluster_size;
  result.lambda = lambda;
  result.k = run.partition.k();
  result.converged = run.solution.converged;
  for (int i = 0; i < dataset.n(); ++i) {
    result.prototype_error =
        std::max(result.prototype_error, (run.solution.prototypes.row(i) - prototype.transpose()).norm());
  }
  const Vector mean = dataset.points().colwise().mean().transpose();
  result.boundary_gap = std::abs((dataset.point(0).transpose() - mean).norm() -
                                 lambda * (cluster_size - 1));
  result.containment_margin = run.report.get("containment").margin;
  result.certified = run.report.all_pass();
  return result;
}

std::vector<BoundaryCase> run_boundary_demo(const SolverConfig& base) {
  return {run_boundary_case(3, 0.1, base), run_boundary_case(5, 0.05, base),
          run_boundary_case(2, 0.3, base)};
}

std::vector<ImpossibilityReport> run_impossibility_demo(const SolverConfig& base) {
  const auto grid = make_grid(0.01, 3.0, 100, true);
  return {collinear_impossibility(5, grid, base), collinear_impossibility(9, grid, base)};
}

}  // namespace cvxclust
