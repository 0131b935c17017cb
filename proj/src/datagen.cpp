#include "cvxclust/datagen.hpp"

#include "cvxclust/certify.hpp"
#include "cvxclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cvxclust {

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "two_moons") return GeneratorKind::two_moons;
  if (name == "uniform") return GeneratorKind::uniform;
  if (name == "gaussian_blobs") return GeneratorKind::gaussian_blobs;
  if (name == "blobs_with_noise") return GeneratorKind::blobs_with_noise;
  if (name == "collinear") return GeneratorKind::collinear;
  if (name == "boundary_witness") return GeneratorKind::boundary_witness;
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::two_moons: return "two_moons";
    case GeneratorKind::uniform: return "uniform";
    case GeneratorKind::gaussian_blobs: return "gaussian_blobs";
    case GeneratorKind::blobs_with_noise: return "blobs_with_noise";
    case GeneratorKind::collinear: return "collinear";
    case GeneratorKind::boundary_witness: return "boundary_witness";
  }
  return "unknown";
}

void GeneratorSpec::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw std::invalid_argument("noise must be >= 0");
  if (!(stdev >= 0.0) || !std::isfinite(stdev)) throw std::invalid_argument("stdev must be >= 0");
  if (kind == GeneratorKind::gaussian_blobs || kind == GeneratorKind::blobs_with_noise) {
    if (centers.rows() < 1 || centers.cols() < 1) {
      throw std::invalid_argument("blob generators need at least one center");
    }
    if (!centers.allFinite()) throw std::invalid_argument("blob centers must be finite");
  }
  if (kind == GeneratorKind::blobs_with_noise) {
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
      throw std::invalid_argument("noise_fraction must lie in [0, 1]");
    }
    if (!(noise_margin >= 0.0)) throw std::invalid_argument("noise_margin must be >= 0");
  }
  if (kind == GeneratorKind::boundary_witness) {
    if (n < 2) throw std::invalid_argument("boundary_witness needs n >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("boundary_witness needs lambda > 0");
    if (dim < 1) throw std::invalid_argument("dim must be at least 1");
  }
}

namespace {

void fill_blobs(const Matrix& centers, double stdev, int count, Rng& rng, Matrix& out,
                std::vector<int>& labels) {
  const int c = static_cast<int>(centers.rows());
  int row = 0;
  for (int comp = 0; comp < c; ++comp) {
    const int size = count / c + (comp < count % c ? 1 : 0);
    for (int s = 0; s < size; ++s, ++row) {
      for (Eigen::Index j = 0; j < centers.cols(); ++j) {
        out(row, j) = rng.normal(centers(comp, j), stdev);
      }
      labels.push_back(comp);
    }
  }
}

}  // namespace

GeneratedData generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const int n = spec.n;
  std::vector<int> labels;
  Matrix points;

  switch (spec.kind) {
    case GeneratorKind::two_moons: {
      const int outer = n / 2;
      const int inner = n - outer;
      points.resize(n, 2);
      for (int i = 0; i < outer; ++i) {
        const double t = outer > 1 ? std::numbers::pi * i / (outer - 1) : 0.0;
        points(i, 0) = std::cos(t);
        points(i, 1) = std::sin(t);
        labels.push_back(0);
      }
      for (int i = 0; i < inner; ++i) {
        const double t = inner > 1 ? std::numbers::pi * i / (inner - 1) : 0.0;
        points(outer + i, 0) = 1.0 - std::cos(t);
        points(outer + i, 1) = 0.5 - std::sin(t);
        labels.push_back(1);
      }
      for (int i = 0; i < n; ++i) {
        points(i, 0) += spec.noise * rng.normal();
        points(i, 1) += spec.noise * rng.normal();
      }
      break;
    }
    case GeneratorKind::uniform: {
      points.resize(n, 2);
      for (int i = 0; i < n; ++i) {
        points(i, 0) = rng.uniform();
        points(i, 1) = rng.uniform();
      }
      break;
    }
    case GeneratorKind::gaussian_blobs: {
      points.resize(n, spec.centers.cols());
      fill_blobs(spec.centers, spec.stdev, n, rng, points, labels);
      break;
    }
    case GeneratorKind::blobs_with_noise: {
      const int noisy = static_cast<int>(std::lround(spec.noise_fraction * n));
      const int clean = n - noisy;
      points.resize(n, spec.centers.cols());
      fill_blobs(spec.centers, spec.stdev, clean, rng, points, labels);
      const Eigen::RowVectorXd lo =
          spec.centers.colwise().minCoeff().array() - spec.noise_margin * spec.stdev;
      const Eigen::RowVectorXd hi =
          spec.centers.colwise().maxCoeff().array() + spec.noise_margin * spec.stdev;
      for (int i = clean; i < n; ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j) points(i, j) = rng.uniform(lo[j], hi[j]);
        labels.push_back(-1);
      }
      break;
    }
    case GeneratorKind::collinear: {
      points.resize(n, 1);
      for (int i = 0; i < n; ++i) points(i, 0) = i + 1.0;
      break;
    }
    case GeneratorKind::boundary_witness: {
      Vector direction = Vector::Zero(spec.dim);
      direction[0] = 1.0;
      return {construct_boundary_dataset(n, spec.lambda, Vector::Zero(spec.dim), direction),
              std::vector<int>(n, 0)};
    }
  }
  return {Dataset(std::move(points)), std::move(labels)};
}

Dataset add_interior_samples(const Dataset& dataset, const Ball& region, int count,
                             std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("count must be nonnegative");
  if (region.center.size() != dataset.d()) {
    throw std::invalid_argument("ball dimension does not match dataset");
  }
  if (!(region.radius > 0.0) || !std::isfinite(region.radius) || !region.center.allFinite()) {
    throw std::invalid_argument("ball needs a finite center and positive radius");
  }
  Rng rng(seed);
  const int d = dataset.d();
  Matrix points(dataset.n() + count, d);
  points.topRows(dataset.n()) = dataset.points();
  Vector p(d);
  for (int s = 0; s < count; ++s) {
    do {
      for (int j = 0; j < d; ++j) p[j] = region.center[j] + region.radius * rng.uniform(-1.0, 1.0);
    } while ((p - region.center).norm() >= region.radius);
    points.row(dataset.n() + s) = p.transpose();
  }
  std::vector<std::string> ids = dataset.ids();
  if (!ids.empty()) {
    for (int s = 0; s < count; ++s) ids.push_back("added_" + std::to_string(s));
  }
  return Dataset(std::move(points), std::move(ids));
}

double within_cluster_ss(const Dataset& dataset, const Partition& partition) {
  double total = 0.0;
  for (int i = 0; i < dataset.n(); ++i) {
    total += (dataset.point(i) - partition.centroids().row(partition.label(i))).squaredNorm();
  }
  return total;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> history;
  int iterations = 0;
};

Matrix kmeanspp_seeds(const Matrix& x, int k, Rng& rng) {
  const int n = static_cast<int>(x.rows());
  Matrix seeds(k, x.cols());
  seeds.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
  Eigen::VectorXd d2(n);
  for (int i = 0; i < n; ++i) d2[i] = (x.row(i) - seeds.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    int pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.below(n));
    }
    seeds.row(c) = x.row(pick);
    for (int i = 0; i < n; ++i) d2[i] = std::min(d2[i], (x.row(i) - seeds.row(c)).squaredNorm());
  }
  return seeds;
}

LloydRun lloyd(const Matrix& x, Matrix centroids, int max_iters) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(centroids.rows());
  LloydRun run;
  run.labels.assign(n, -1);
  Eigen::VectorXd d2(n);
  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dist = (x.row(i) - centroids.row(c)).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      d2[i] = best_d;
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    run.iterations = it + 1;
    if (!changed && it > 0) break;

    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += x.row(i);
      ++counts[run.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / counts[c];
        continue;
      }
      // Empty cluster: move the point farthest from its centroid into it.
      Eigen::Index far = 0;
      d2.maxCoeff(&far);
      centroids.row(c) = x.row(far);
      --counts[run.labels[far]];
      run.labels[far] = c;
      counts[c] = 1;
      d2[far] = 0.0;
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) inertia += (x.row(i) - centroids.row(run.labels[i])).squaredNorm();
    run.history.push_back(inertia);
  }
  run.centroids = std::move(centroids);
  run.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    run.inertia += (x.row(i) - run.centroids.row(run.labels[i])).squaredNorm();
  }
  return run;
}

}  // namespace

KMeansResult kmeans_detailed(const Dataset& dataset, int k, std::uint64_t seed, int max_iters,
                             int restarts) {
  if (k < 1 || k > dataset.n()) throw std::invalid_argument("k must lie in [1, n]");
  if (max_iters < 1 || restarts < 1) {
    throw std::invalid_argument("max_iters and restarts must be at least 1");
  }
  Rng rng(seed);
  std::optional<LloydRun> best;
  for (int r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(dataset.points(), kmeanspp_seeds(dataset.points(), k, rng), max_iters);
    if (!best || run.inertia < best->inertia) best = std::move(run);
  }
  KMeansResult result;
  result.partition = partition_from_labels(dataset.points(), best->labels);
  result.inertia = within_cluster_ss(dataset, result.partition);
  result.history = std::move(best->history);
  result.iterations = best->iterations;
  return result;
}

Partition kmeans(const Dataset& dataset, int k, std::uint64_t seed, int max_iters) {
  return kmeans_detailed(dataset, k, seed, max_iters).partition;
}

std::vector<WardMerge> ward_hierarchy(const Dataset& dataset) {
  const int n = dataset.n();
  // dist(a, b) is the Ward merge cost n_a n_b / (n_a + n_b) |c_a - c_b|^2,
  // indexed by representative (smallest member).
  Matrix dist(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) dist(a, b) = 0.5 * (dataset.point(a) - dataset.point(b)).squaredNorm();
  }
  std::vector<int> size(n, 1);
  std::vector<char> active(n, 1);
  std::vector<WardMerge> merges;
  merges.reserve(n > 0 ? n - 1 : 0);
  for (int step = 0; step + 1 < n; ++step) {
    int best_a = -1;
    int best_b = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (int b = a + 1; b < n; ++b) {
        if (active[b] && dist(a, b) < best) {
          best = dist(a, b);
          best_a = a;
          best_b = b;
        }
      }
    }
    merges.push_back({best_a, best_b, best});
    const double na = size[best_a];
    const double nb = size[best_b];
    for (int c = 0; c < n; ++c) {
      if (!active[c] || c == best_a || c == best_b) continue;
      const double nc = size[c];
      const double updated =
          ((na + nc) * dist(best_a, c) + (nb + nc) * dist(best_b, c) - nc * best) /
          (na + nb + nc);
      dist(best_a, c) = dist(c, best_a) = updated;
    }
    size[best_a] += size[best_b];
    active[best_b] = 0;
  }
  return merges;
}

Partition ward_agglomerative(const Dataset& dataset, int k) {
  const int n = dataset.n();
  if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, n]");
  const auto merges = ward_hierarchy(dataset);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int m = 0; m < n - k; ++m) parent[merges[m].b] = merges[m].a;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    int r = i;
    while (parent[r] != r) r = parent[r];
    labels[i] = r;
  }
  return partition_from_labels(dataset.points(), labels);
}

}  // namespace cvxclust
