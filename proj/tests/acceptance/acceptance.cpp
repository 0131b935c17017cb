// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "cvxclust/certify.hpp"
#include "cvxclust/datagen.hpp"
#include "cvxclust/demos.hpp"
#include "cvxclust/fixtures.hpp"
#include "cvxclust/hyperparam.hpp"
#include "cvxclust/rng.hpp"
#include "cvxclust/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

using namespace cvxclust;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix random_points(int n, int d, Rng& rng) {
  Matrix m(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) m(i, c) = rng.normal();
  return m;
}

PrototypeSolution solve(const Dataset& ds, double lambda) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  return solve_admm(ds, cfg);
}

// One solve of the shared corpus with its certification results.
struct CorpusRun {
  std::string generator;
  Dataset dataset;
  double lambda;
  double scale;
  PrototypeSolution solution;
  Partition partition;
  CertReport report;
  CertCheck swap;
};

std::vector<CorpusRun> build_corpus() {
  std::vector<GeneratorSpec> specs;
  GeneratorSpec s;
  s.kind = GeneratorKind::two_moons;
  s.n = 60;
  s.noise = 0.1;
  s.seed = 1;
  specs.push_back(s);
  s = {};
  s.kind = GeneratorKind::uniform;
  s.n = 50;
  s.seed = 2;
  specs.push_back(s);
  s = {};
  s.kind = GeneratorKind::gaussian_blobs;
  s.n = 60;
  s.centers = fixtures::blob_centers();
  s.stdev = fixtures::kBlobStdev;
  s.seed = 3;
  specs.push_back(s);
  s.kind = GeneratorKind::blobs_with_noise;
  s.seed = 4;
  specs.push_back(s);
  s = {};
  s.kind = GeneratorKind::collinear;
  s.n = 7;
  specs.push_back(s);
  s = {};
  s.kind = GeneratorKind::boundary_witness;
  s.n = 4;
  s.lambda = 0.1;
  s.dim = 2;
  specs.push_back(s);

  std::vector<CorpusRun> corpus;
  for (const auto& spec : specs) {
    const Dataset ds = generate(spec).dataset;
    const LambdaBounds bounds = lambda_bounds(ds);
    const double lo = std::max(bounds.lower_for_q.at(ds.n()), 1e-3 * bounds.upper);
    for (double lambda : make_grid(0.5 * lo, 1.1 * bounds.upper, 8, true)) {
      SolverConfig cfg;
      cfg.lambda = lambda;
      ClusterRun run = cluster_and_certify(ds, cfg);
      const double scale = problem_scale(ds);
      CertCheck swap = check_swap(ds, run.partition, 1e-5 * scale);
      corpus.push_back({to_string(spec.kind), ds, lambda, scale, std::move(run.solution),
                        std::move(run.partition), std::move(run.report), std::move(swap)});
    }
  }
  return corpus;
}

const std::vector<CorpusRun>& corpus() {
  static const std::vector<CorpusRun> c = build_corpus();
  return c;
}

std::string where(const CorpusRun& r) {
  std::ostringstream s;
  s << r.generator << " lambda=" << r.lambda << " k=" << r.partition.k();
  return s.str();
}

Outcome closed_form() {
  const Matrix x = (Matrix(2, 1) << 0.0, 1.0).finished();
  double worst = 0.0;
  for (double lambda : {0.1, 0.2, 0.4, 0.5, 0.6, 1.0}) {
    const auto s = solve(Dataset(x), lambda);
    const double lo = lambda < 0.5 ? lambda : 0.5;
    worst = std::max({worst, std::abs(s.prototypes(0, 0) - lo),
                      std::abs(s.prototypes(1, 0) - (1.0 - lo))});
  }
  return {worst <= 1e-6, "max error " + num(worst)};
}

Outcome oracle_equivalence() {
  Rng rng(20240);
  double worst = 0.0;
  int nonconverged = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const int d = 1 + static_cast<int>(rng.below(3));
    const Dataset ds(random_points(n, d, rng));
    const double lo = lambda_lower_bound(ds, n);
    const double hi = lambda_upper_bound(ds);
    const double lambda = lo * std::pow(hi / lo, rng.uniform());
    const auto a = solve(ds, lambda);
    const auto r = solve_reference(ds, lambda, 20000, 1e-9);
    if (!a.converged) ++nonconverged;
    worst = std::max(worst, max_abs(a.prototypes - r.prototypes));
  }
  return {worst <= 1e-4 && nonconverged == 0,
          "max |U_admm - U_ref| " + num(worst) + ", unconverged " +
              std::to_string(nonconverged)};
}

Outcome ball_properties() {
  int solves = 0;
  for (const auto& r : corpus()) {
    if (!r.solution.converged) continue;
    ++solves;
    for (const char* name : {"containment", "gaps", "center_consistency"}) {
      if (!r.report.get(name).pass) return {false, std::string(name) + " failed at " + where(r)};
    }
  }
  return {solves > 0, std::to_string(solves) + " converged solves"};
}

Outcome convex_clusters() {
  int solves = 0;
  int planar = 0;
  for (const auto& r : corpus()) {
    if (!r.solution.converged) continue;
    ++solves;
    if (!r.swap.pass) return {false, "swap test failed at " + where(r)};
    if (r.dataset.d() == 2) {
      ++planar;
      if (!check_hull(r.dataset, r.partition).pass) return {false, "hull overlap at " + where(r)};
    }
  }
  const Matrix x = (Matrix(4, 1) << 0.0, 1.0, 2.0, 3.0).finished();
  const bool interleaved_fails =
      !check_swap(Dataset(x), partition_from_labels(x, {0, 1, 0, 1}), 1e-5).pass;
  return {solves > 0 && interleaved_fails,
          std::to_string(solves) + " solves, " + std::to_string(planar) +
              " planar; interleaved labeling rejected: " + (interleaved_fails ? "yes" : "no")};
}

Outcome optimality() {
  int solves = 0;
  for (const auto& r : corpus()) {
    if (!r.solution.converged) continue;
    ++solves;
    for (const char* name : {"optimality_probe", "dual_certificate"}) {
      if (!r.report.get(name).pass) return {false, std::string(name) + " failed at " + where(r)};
    }
  }
  // Perturb one prototype of a nontrivial blob solve by 0.1.
  const GeneratedData data = generate(fixtures::blobs_spec());
  const auto s = solve(data.dataset, fixtures::kBlobsLambda);
  PrototypeSolution bad = s;
  bad.prototypes(0, 0) += 0.1;
  const CertConfig cfg = CertConfig::defaults_for(data.dataset);
  const Partition p = extract_partition(bad, default_fuse_tol(data.dataset));
  const double probe =
      probe_optimality(data.dataset, bad, p, fixtures::kBlobsLambda, cfg.num_probes, 0).min_value;
  const bool infeasible =
      !dual_certificate(data.dataset, bad, p, fixtures::kBlobsLambda, cfg.cert_iters, cfg.cert_tol)
           .feasible;
  return {solves > 0 && probe < 0.0 && infeasible,
          std::to_string(solves) + " solves certified; perturbed probe " + num(probe) +
              ", perturbed certificate infeasible: " + (infeasible ? "yes" : "no")};
}

Outcome bound_audit() {
  int nontrivial = 0;
  for (const auto& r : corpus()) {
    const int k = r.partition.k();
    if (!r.solution.converged || k <= 1 || k >= r.dataset.n()) continue;
    ++nontrivial;
    const double upper = lambda_upper_bound(r.dataset);
    const double lower = lambda_lower_bound(r.dataset, r.partition.largest_cluster_size());
    if (!(r.lambda < upper * (1 + 1e-8))) return {false, "upper bound violated at " + where(r)};
    if (!(r.lambda >= lower * (1 - 1e-8))) return {false, "lower bound violated at " + where(r)};
  }
  return {nontrivial > 0, std::to_string(nontrivial) + " nontrivial solves within bounds"};
}

Outcome impossibility() {
  int violations = 0;
  int unconverged = 0;
  std::string kinds;
  for (const auto& report : run_impossibility_demo(SolverConfig{})) {
    violations += report.violations();
    for (const auto& e : report.entries) unconverged += e.converged ? 0 : 1;
  }
  return {violations == 0, std::to_string(violations) + " intermediate k, " +
                               std::to_string(unconverged) + " unconverged"};
}

Outcome boundary() {
  bool ok = true;
  double worst = 0.0;
  for (const auto& c : run_boundary_demo(SolverConfig{})) {
    ok = ok && c.converged && c.k == 1 && c.prototype_error <= 1e-6 && c.boundary_gap <= 1e-6;
    worst = std::max({worst, c.prototype_error, c.boundary_gap});
  }
  return {ok, "worst prototype/surface error " + num(worst)};
}

Outcome inflexibility() {
  const auto r = run_inflexibility(SolverConfig{});
  std::string ks = "fixed k:";
  for (const auto& s : r.fixed_lambda) ks += " " + std::to_string(s.k);
  ks += "; decreasing k:";
  for (const auto& s : r.decreasing_lambda) ks += " " + std::to_string(s.k);
  return {r.merges_at_fixed_lambda && r.splits_at_decreasing_lambda, ks};
}

Outcome noise() {
  const GeneratedData data = generate(fixtures::noisy_blobs_spec());
  const auto s = solve(data.dataset, fixtures::kNoisyLambda);
  const Partition p = extract_partition(s, default_fuse_tol(data.dataset));
  int noise_max = 0;
  double clean = 0.0;
  noise_statistics(p, data.labels, noise_max, clean);
  return {s.converged && noise_max <= 3 && clean >= 0.8,
          "largest cluster with noise " + std::to_string(noise_max) + ", clean in large " +
              num(clean)};
}

Outcome equivariance() {
  Rng rng(77);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const Matrix x = random_points(12, 2, rng);
    const Dataset ds(x);
    const double lambda = 0.3 * lambda_upper_bound(ds);
    const Matrix base = solve(ds, lambda).prototypes;
    const double tol = 1e-5 * problem_scale(ds);

    const Eigen::RowVector2d shift(rng.normal(3.0, 1.0), rng.normal(-2.0, 1.0));
    const Matrix shifted = solve(Dataset(x.rowwise() + shift), lambda).prototypes;
    double err = max_abs(shifted.rowwise() - shift - base);

    const double angle = rng.uniform(0.0, 6.283185307179586);
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Matrix rotated = solve(Dataset(x * rot.transpose()), lambda).prototypes;
    err = std::max(err, max_abs(rotated - base * rot.transpose()));

    const double c = rng.uniform(0.5, 3.0);
    const Matrix scaled = solve(Dataset(c * x), c * lambda).prototypes;
    err = std::max(err, max_abs(scaled - c * base) / c);
    worst = std::max(worst, err / tol);
  }
  return {worst <= 1.0, "worst error / (1e-5 scale) " + num(worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form two-point solutions", closed_form},
      {"agreement with the smoothed reference solver", oracle_equivalence},
      {"bounding-ball containment, gaps and centers", ball_properties},
      {"swap test and hull disjointness", convex_clusters},
      {"optimality probe and dual certificate", optimality},
      {"lambda bracket for nontrivial solutions", bound_audit},
      {"collinear data has no intermediate k", impossibility},
      {"boundary witnesses are tight", boundary},
      {"growing cluster merges at fixed lambda, splits when lambda shrinks", inflexibility},
      {"noise points stay in small clusters", noise},
      {"translation, rotation and scaling equivariance", equivariance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("%s %2zu %s (%.2fs): %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), secs, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
