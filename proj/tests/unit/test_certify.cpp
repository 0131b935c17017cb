#include "cvxclust/certify.hpp"
#include "cvxclust/datagen.hpp"
#include "cvxclust/fixtures.hpp"
#include "cvxclust/rng.hpp"
#include "cvxclust/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvxclust;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(values.size(), 1);
  int i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

struct Solved {
  Dataset dataset;
  PrototypeSolution solution;
  Partition partition;
  double lambda;
};

Solved solve(const Matrix& x, double lambda) {
  Dataset ds(x);
  SolverConfig cfg;
  cfg.lambda = lambda;
  PrototypeSolution s = solve_admm(ds, cfg);
  Partition p = extract_partition(s, default_fuse_tol(ds));
  return {std::move(ds), std::move(s), std::move(p), lambda};
}

PrototypeSolution as_solution(const Matrix& u, double lambda) {
  PrototypeSolution s;
  s.prototypes = u;
  s.lambda = lambda;
  s.converged = true;
  return s;
}

Matrix blob_points(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, 2);
  for (int i = 0; i < n; ++i) {
    m(i, 0) = 4.0 * (i % 3) + rng.normal();
    m(i, 1) = rng.normal();
  }
  return m;
}

}  // namespace

TEST_CASE("pair directions in one dimension") {
  const Partition p = partition_from_labels(column({0.0, 0.0, 1.0, 1.0, 1.0}), {0, 0, 1, 1, 1});
  const PairDirections dirs(p);
  CHECK(dirs.aggregate()(0, 0) == -3.0);
  CHECK(dirs.aggregate()(1, 0) == -3.0);
  CHECK(dirs.aggregate()(2, 0) == 2.0);
  CHECK(dirs.e(0, 2)[0] == -1.0);
  CHECK(dirs.e(2, 0)[0] == 1.0);
  CHECK(dirs.e(0, 1)[0] == 0.0);
}

TEST_CASE("pair directions for a single cluster vanish") {
  const Partition p = partition_from_labels(column({0.0, 1.0, 2.0}), {0, 0, 0});
  CHECK(pair_directions(p).aggregate().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pair directions are antisymmetric unit vectors") {
  const Matrix x = blob_points(12, 1);
  const Partition p = partition_from_labels(x, {0, 1, 2, 0, 1, 2, 0, 1, 2, 3, 3, 3});
  const PairDirections dirs(p);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      CHECK((dirs.e(i, j) + dirs.e(j, i)).norm() == 0.0);
      if (p.label(i) != p.label(j)) CHECK(dirs.e(i, j).norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("directional derivative examples") {
  const Dataset one(column({2.0}));
  const Partition p1 = partition_from_labels(one.points(), {0});
  CHECK(directional_derivative(one, as_solution(one.points(), 0.0), p1, 0.5, {column({1.0})}) ==
        0.0);

  const Dataset two(column({0.0, 1.0}));
  const auto s = as_solution(column({0.2, 0.8}), 0.2);
  const Partition p2 = extract_partition(s, 1e-9);
  CHECK(directional_derivative(two, s, p2, 0.2, {column({0.0, 0.0})}) == 0.0);
  CHECK(directional_derivative(two, s, p2, 0.2, {column({1.0, 0.0})}) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("directional derivative is positively homogeneous") {
  const Solved sv = solve(blob_points(15, 2), 0.3);
  Rng rng(3);
  Matrix eps(15, 2);
  for (int i = 0; i < 15; ++i)
    for (int c = 0; c < 2; ++c) eps(i, c) = rng.normal();
  const double once = directional_derivative(sv.dataset, sv.solution, sv.partition, sv.lambda, {eps});
  const double twice =
      directional_derivative(sv.dataset, sv.solution, sv.partition, sv.lambda, {2.0 * eps});
  CHECK(twice == doctest::Approx(2.0 * once).epsilon(1e-12));
}

TEST_CASE("probe at lambda zero") {
  const Matrix x = blob_points(6, 4);
  const Dataset ds(x);
  const auto s = as_solution(x, 0.0);
  const auto probe = probe_optimality(ds, s, extract_partition(s, 1e-9), 0.0, 16, 0);
  CHECK(probe.min_value >= -1e-10);
  CHECK(probe.directions_tried > 16);
}

TEST_CASE("probe on the fused pair") {
  const Solved sv = solve(column({0.0, 1.0}), 0.6);
  REQUIRE(sv.partition.k() == 1);
  const auto probe = probe_optimality(sv.dataset, sv.solution, sv.partition, 0.6, 256, 0);
  CHECK(probe.min_value >= -1e-8);
}

TEST_CASE("probe detects a perturbed solution") {
  const Solved sv = solve(blob_points(15, 5), 0.2);
  PrototypeSolution bad = sv.solution;
  bad.prototypes(3, 0) += 0.1;
  const Partition p = extract_partition(bad, default_fuse_tol(sv.dataset));
  CHECK(probe_optimality(sv.dataset, bad, p, sv.lambda, 256, 0).min_value < 0.0);
  CHECK_THROWS_AS(probe_optimality(sv.dataset, bad, p, sv.lambda, 0, 0), std::invalid_argument);
}

TEST_CASE("bounding ball formulas") {
  Matrix x(2, 2);
  x << 0.0, 0.0, 2.0, 0.0;
  auto balls = bounding_balls(Dataset(x), partition_from_labels(x, {0, 0}), 1.2);
  REQUIRE(balls.size() == 1);
  CHECK(balls[0].center[0] == 1.0);
  CHECK(balls[0].center[1] == 0.0);
  CHECK(balls[0].radius == doctest::Approx(1.2));

  balls = bounding_balls(Dataset(x), partition_from_labels(x, {0, 1}), 5.0);
  CHECK(balls[1].radius == 0.0);
  CHECK(balls[1].center[0] == 2.0);

  const Matrix y = blob_points(9, 6);
  balls = bounding_balls(Dataset(y), partition_from_labels(y, std::vector<int>(9, 0)), 0.5);
  CHECK((balls[0].center - y.colwise().mean().transpose()).norm() <= 1e-14);
  CHECK(balls[0].radius == doctest::Approx(4.0));
}

TEST_CASE("containment fails for a misassigned point") {
  const Matrix x = column({0.0, 0.1, 10.0, 10.1});
  const Dataset ds(x);
  const Partition p = partition_from_labels(x, {0, 0, 1, 0});
  const auto check = check_containment(ds, p, bounding_balls(ds, p, 0.1), 1e-5);
  CHECK_FALSE(check.pass);
  CHECK(check.margin > 1.0);
  CHECK(check.witness_indices.size() == 1);
}

TEST_CASE("gap check") {
  const Solved sv = solve(column({0.0, 1.0}), 0.2);
  const auto balls = bounding_balls(sv.dataset, sv.partition, 0.2);
  const auto check = check_gaps(balls, 0.2, 1e-5);
  CHECK(check.pass);
  CHECK(check.margin == doctest::Approx(1.0 - 0.4));

  const Solved fused = solve(column({0.0, 1.0}), 0.7);
  CHECK(check_gaps(bounding_balls(fused.dataset, fused.partition, 0.7), 0.7, 1e-5).pass);

  std::vector<BoundingBall> close = {{0, Vector::Zero(1), 0.5}, {1, Vector::Ones(1), 0.2}};
  CHECK_FALSE(check_gaps(close, 0.2, 1e-5).pass);
}

TEST_CASE("interleaved labels fail the swap test") {
  const Matrix x = column({0.0, 1.0, 2.0, 3.0});
  const Partition p = partition_from_labels(x, {0, 1, 0, 1});
  const auto swap = check_swap(Dataset(x), p, 1e-5);
  CHECK_FALSE(swap.pass);
  CHECK(swap.margin > 0.0);
  CHECK_FALSE(check_convexity(Dataset(x), p, 1e-5).pass);
}

TEST_CASE("true moon labels overlap while the convex clustering output does not") {
  const GeneratedData moons = generate(fixtures::moons_spec());
  const Partition truth = partition_from_labels(moons.dataset.points(), moons.labels);
  CHECK_FALSE(check_hull(moons.dataset, truth).pass);

  SolverConfig cfg;
  cfg.lambda = fixtures::kMoonsLambda;
  const auto s = solve_admm(moons.dataset, cfg);
  const Partition p = extract_partition(s, default_fuse_tol(moons.dataset));
  CHECK(p.k() > 1);
  CHECK(check_convexity(moons.dataset, p, 1e-5 * problem_scale(moons.dataset)).pass);
}

TEST_CASE("hull check is vacuous outside the plane") {
  Matrix x(4, 3);
  x << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK(check_hull(Dataset(x), partition_from_labels(x, {0, 1, 0, 1})).pass);
}

TEST_CASE("dual certificate on the fused pair") {
  const Matrix x = column({0.0, 1.0});
  const Partition fused = partition_from_labels(x, {0, 0});
  const Matrix v = stationarity_residual(Dataset(x), fused, 0.6);
  CHECK(v(0, 0) == doctest::Approx(0.5));
  CHECK(v(1, 0) == doctest::Approx(-0.5));

  const auto ok = balance_certificate(v, fused, 0.6, 5000, 1e-5);
  CHECK(ok.feasible);
  CHECK(ok.z(0, 1)[0] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(ok.z(1, 0)[0] == -ok.z(0, 1)[0]);
  CHECK(ok.z(0, 0)[0] == 0.0);

  const auto bad = balance_certificate(stationarity_residual(Dataset(x), fused, 0.4), fused, 0.4,
                                       5000, 1e-5);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.max_balance_residual > 0.05);
}

TEST_CASE("singleton certificates need zero residual") {
  const Solved sv = solve(column({0.0, 1.0}), 0.2);
  const auto cert = dual_certificate(sv.dataset, sv.solution, sv.partition, 0.2, 100, 1e-5);
  CHECK(cert.feasible);
  CHECK(cert.max_balance_residual <= 1e-9);

  Matrix v = Matrix::Zero(2, 1);
  v(0, 0) = 0.01;
  CHECK_FALSE(balance_certificate(v, sv.partition, 0.2, 100, 1e-5).feasible);
}

TEST_CASE("certificate rejects bad arguments") {
  const Partition p = partition_from_labels(column({0.0, 1.0}), {0, 0});
  CHECK_THROWS_AS(balance_certificate(Matrix::Zero(2, 1), p, 0.5, 0, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(balance_certificate(Matrix::Zero(3, 1), p, 0.5, 10, 1e-5), std::invalid_argument);
}

TEST_CASE("z is only defined within a cluster") {
  const Solved sv = solve(column({0.0, 1.0}), 0.2);
  const auto cert = dual_certificate(sv.dataset, sv.solution, sv.partition, 0.2, 100, 1e-5);
  CHECK_THROWS_AS(cert.z(0, 1), std::invalid_argument);
}

TEST_CASE("same-solution probe") {
  const Solved sv = solve(blob_points(24, 8), 0.35);
  REQUIRE(sv.solution.converged);
  REQUIRE(sv.partition.largest_cluster_size() >= 2);
  const double tol = 1e-5 * problem_scale(sv.dataset);
  CHECK(same_solution_probe(sv.dataset, sv.solution, sv.partition, sv.lambda, 5000, tol));

  // Move a member of the largest cluster outside its bounding ball.
  int big = 0;
  for (int l = 0; l < sv.partition.k(); ++l)
    if (sv.partition.sizes()[l] > sv.partition.sizes()[big]) big = l;
  const auto balls = bounding_balls(sv.dataset, sv.partition, sv.lambda);
  Matrix moved = sv.dataset.points();
  const int i = sv.partition.members(big)[0];
  moved.row(i) = balls[big].center.transpose() +
                 Eigen::RowVector2d(3.0 * balls[big].radius + 1.0, 0.0);
  CHECK_FALSE(same_solution_probe(Dataset(moved), sv.solution, sv.partition, sv.lambda, 5000, tol));

  // Exchange two points of the same cluster.
  Matrix swapped = sv.dataset.points();
  const int a = sv.partition.members(big)[0];
  const int b = sv.partition.members(big)[1];
  swapped.row(a) = sv.dataset.point(b);
  swapped.row(b) = sv.dataset.point(a);
  CHECK(same_solution_probe(Dataset(swapped), sv.solution, sv.partition, sv.lambda, 5000, tol));
}

TEST_CASE("boundary dataset construction") {
  Vector m = Vector::Zero(1);
  Vector v0 = Vector::Ones(1);
  const Dataset ds = construct_boundary_dataset(3, 0.1, m, v0);
  CHECK(ds.points()(0, 0) == doctest::Approx(-0.2));
  CHECK(ds.points()(1, 0) == doctest::Approx(0.1));
  CHECK(ds.points()(2, 0) == doctest::Approx(0.1));
  const Partition one = partition_from_labels(ds.points(), {0, 0, 0});
  const auto cert = balance_certificate(stationarity_residual(ds, one, 0.1), one, 0.1, 5000, 1e-9);
  CHECK(cert.feasible);

  const Dataset pair = construct_boundary_dataset(2, 0.3, m, v0);
  CHECK(pair.points()(0, 0) == doctest::Approx(-0.3));
  CHECK(pair.points()(1, 0) == doctest::Approx(0.3));

  CHECK_THROWS_AS(construct_boundary_dataset(3, 0.1, m, 2.0 * v0), std::invalid_argument);
  CHECK_THROWS_AS(construct_boundary_dataset(1, 0.1, m, v0), std::invalid_argument);
}

TEST_CASE("boundary dataset solves to one cluster at its prototype") {
  Vector m(2);
  m << 1.0, -2.0;
  Vector v0(2);
  v0 << 0.6, 0.8;
  for (auto [size, lambda] : {std::pair{3, 0.1}, {5, 0.05}, {2, 0.3}}) {
    const Solved sv = solve(construct_boundary_dataset(size, lambda, m, v0).points(), lambda);
    CHECK(sv.partition.k() == 1);
    CHECK((sv.partition.centroids().row(0).transpose() - m).norm() <= 1e-6);
    const auto balls = bounding_balls(sv.dataset, sv.partition, lambda);
    const auto check = check_containment(sv.dataset, sv.partition, balls, 1e-5);
    CHECK(check.pass);
    CHECK(std::abs(check.margin) <= 1e-6);
  }
}

TEST_CASE("certify runs every check once on converged solves") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (double lambda : {0.05, 0.3, 1.0}) {
      const Solved sv = solve(blob_points(30, seed), lambda);
      REQUIRE(sv.solution.converged);
      const auto report = certify(sv.dataset, sv.solution, sv.partition, lambda,
                                  CertConfig::defaults_for(sv.dataset));
      CHECK(report.checks.size() == 6);
      for (const char* name : {"optimality_probe", "containment", "gaps", "center_consistency",
                               "convexity", "dual_certificate"}) {
        CHECK_NOTHROW(report.get(name));
      }
      CHECK(report.all_pass());
      // Certificate feasibility and the swap test agree.
      CHECK(report.get("dual_certificate").pass == check_swap(sv.dataset, sv.partition,
                                                              1e-5 * problem_scale(sv.dataset)).pass);
    }
  }
  CertReport empty;
  CHECK_THROWS_AS(empty.get("gaps"), std::out_of_range);
}

TEST_CASE("certify flags a perturbed solution") {
  const Solved sv = solve(blob_points(30, 11), 0.3);
  PrototypeSolution bad = sv.solution;
  bad.prototypes.array() += 0.0;
  bad.prototypes(0, 1) += 0.1;
  const Partition p = extract_partition(bad, default_fuse_tol(sv.dataset));
  const auto report = certify(sv.dataset, bad, p, 0.3, CertConfig::defaults_for(sv.dataset));
  CHECK_FALSE(report.get("optimality_probe").pass);
  CHECK_FALSE(report.get("dual_certificate").pass);
}
