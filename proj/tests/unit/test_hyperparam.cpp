#include "cvxclust/hyperparam.hpp"
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

Matrix random_points(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) m(i, c) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("lambda bound examples") {
  const Dataset ds(column({0.0, 1.0, 3.0}));
  CHECK(lambda_upper_bound(ds) == 1.5);
  CHECK(lambda_lower_bound(ds, 2) == doctest::Approx(1.0 / 2.0));
  CHECK(lambda_lower_bound(ds, 3) == doctest::Approx(1.0 / std::sqrt(12.0)));
  CHECK(lambda_lower_bound(Dataset(column({0.0, 0.0, 2.0})), 2) == 0.0);
  CHECK_THROWS_AS(lambda_upper_bound(Dataset(column({1.0}))), std::invalid_argument);
  CHECK_THROWS_AS(lambda_lower_bound(ds, 1), std::invalid_argument);
  CHECK_THROWS_AS(lambda_lower_bound(ds, 4), std::invalid_argument);
}

TEST_CASE("lambda bounds scale with the data and decrease in q") {
  const Matrix x = random_points(12, 3, 1);
  const LambdaBounds b = lambda_bounds(Dataset(x));
  const LambdaBounds scaled = lambda_bounds(Dataset(2.5 * x));
  CHECK(scaled.upper == doctest::Approx(2.5 * b.upper));
  CHECK(b.lower_for_q.size() == 11);
  for (int q = 2; q <= 12; ++q) {
    CHECK(scaled.lower_for_q.at(q) == doctest::Approx(2.5 * b.lower_for_q.at(q)));
    if (q > 2) CHECK(b.lower_for_q.at(q) < b.lower_for_q.at(q - 1));
    CHECK(b.lower_for_q.at(q) < b.upper);
  }
}

TEST_CASE("solutions respect the lambda bounds") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Dataset ds(random_points(10, 2, seed));
    const LambdaBounds b = lambda_bounds(ds);
    for (double frac : {0.05, 0.2, 0.5, 0.9, 1.1}) {
      SolverConfig cfg;
      cfg.lambda = frac * b.upper;
      const auto s = solve_admm(ds, cfg);
      REQUIRE(s.converged);
      const Partition p = extract_partition(s, default_fuse_tol(ds));
      if (p.k() > 1) CHECK(cfg.lambda < b.upper);
      const int q = p.largest_cluster_size();
      if (q >= 2) CHECK(cfg.lambda >= b.lower_for_q.at(q) * (1.0 - 1e-6));
    }
  }
}

TEST_CASE("path endpoints and warm start agreement") {
  const Dataset ds(random_points(15, 2, 7));
  const double hi = 1.05 * lambda_upper_bound(ds);
  const std::vector<double> lambdas = make_grid(0.0, hi, 6, false);
  SolverConfig cfg;
  const LambdaPath warm = lambda_path(ds, lambdas, cfg, true);
  const LambdaPath cold = lambda_path(ds, lambdas, cfg, false);
  REQUIRE(warm.entries.size() == 6);
  CHECK(warm.entries.front().k == 15);
  CHECK(warm.entries.back().k == 1);
  for (std::size_t e = 0; e < lambdas.size(); ++e) {
    CHECK_FALSE(warm.entries[e].error.has_value());
    CHECK(warm.entries[e].converged);
    CHECK(warm.entries[e].k == cold.entries[e].k);
    CHECK(warm.entries[e].objective ==
          doctest::Approx(cold.entries[e].objective).epsilon(1e-6));
  }
  CHECK_THROWS_AS(lambda_path(ds, {0.2, 0.1}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(lambda_path(ds, {-0.1, 0.1}, cfg), std::invalid_argument);
}

TEST_CASE("grid helpers") {
  const auto lin = make_grid(0.0, 1.0, 5, false);
  CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto geo = make_grid(0.01, 1.0, 3, true);
  CHECK(geo[0] == doctest::Approx(0.01));
  CHECK(geo[1] == doctest::Approx(0.1));
  CHECK(geo[2] == doctest::Approx(1.0));
  CHECK(make_grid(0.3, 0.3, 1, false) == std::vector<double>{0.3});

  const Dataset ds(column({0.0, 1.0, 3.0}));
  const auto dflt = default_lambda_grid(ds);
  CHECK(dflt.size() == 32);
  CHECK(dflt.front() == doctest::Approx(0.015));
  CHECK(dflt.back() == doctest::Approx(1.8));
}

TEST_CASE("grid parsing") {
  CHECK(parse_lambda_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_lambda_grid("0:1:3:lin") == std::vector<double>{0.0, 0.5, 1.0});
  const auto g = parse_lambda_grid("0.001:0.1:3:log");
  CHECK(g[1] == doctest::Approx(0.01));
  for (const char* bad : {"", "1", "0:1", "a:1:3", "0:1:x", "0:1:0", "1:0:3", "0:1:3:cubic",
                          "0:1:3:log", "0:1:3:lin:extra", "-1:1:3", "0:1:2.5"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_lambda_grid(bad), std::invalid_argument);
  }
}

TEST_CASE("collinear data has no intermediate solutions") {
  SolverConfig cfg;
  const auto small = collinear_impossibility(5, {0.1, 0.49, 0.51, 1.0, 3.0}, cfg);
  REQUIRE(small.entries.size() == 5);
  CHECK(small.violations() == 0);
  CHECK(small.entries[0].k == 5);
  CHECK(small.entries[1].k == 5);
  CHECK(small.entries[2].k == 1);
  CHECK(small.entries[4].k == 1);
  CHECK_THROWS_AS(collinear_impossibility(1, {0.1}, cfg), std::invalid_argument);
}
