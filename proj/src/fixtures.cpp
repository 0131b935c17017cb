#include "cvxclust/fixtures.hpp"

namespace cvxclust::fixtures {

Matrix blob_centers() {
  Matrix centers(3, 2);
  centers << 0.0, 0.0, 6.0, 0.0, 12.0, 0.0;
  return centers;
}

GeneratorSpec growing_base_spec() {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::gaussian_blobs;
  spec.n = kGrowingBaseN;
  spec.seed = kGrowingSeed;
  spec.centers = blob_centers();
  spec.stdev = kBlobStdev;
  return spec;
}

Ball growing_region() {
  const Matrix centers = blob_centers();
  return {centers.row(centers.rows() - 1).transpose(), kGrowingAddRadius};
}

GeneratedData growing_dataset(int added) {
  GeneratedData base = generate(growing_base_spec());
  Dataset grown = add_interior_samples(base.dataset, growing_region(), added, kGrowingAddSeed);
  base.labels.resize(grown.n(), static_cast<int>(blob_centers().rows()) - 1);
  return {std::move(grown), std::move(base.labels)};
}

GeneratorSpec moons_spec() {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::two_moons;
  spec.n = 100;
  spec.noise = 0.15;
  spec.seed = kMoonsSeed;
  return spec;
}

GeneratorSpec uniform_spec() {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::uniform;
  spec.n = 50;
  spec.seed = kUniformSeed;
  return spec;
}

GeneratorSpec blobs_spec() {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::gaussian_blobs;
  spec.n = 200;
  spec.seed = kBlobsSeed;
  spec.centers = blob_centers();
  spec.stdev = kBlobStdev;
  return spec;
}

GeneratorSpec noisy_blobs_spec() {
  GeneratorSpec spec = blobs_spec();
  spec.kind = GeneratorKind::blobs_with_noise;
  spec.seed = kNoisySeed;
  spec.noise_fraction = 0.1;
  spec.noise_margin = kNoisyMargin;
  return spec;
}

std::vector<NamedFixture> comparison_fixtures() {
  return {{"two_moons", moons_spec(), kMoonsLambda},
          {"uniform", uniform_spec(), kUniformLambda},
          {"three_blobs", blobs_spec(), kBlobsLambda},
          {"three_blobs_noise", noisy_blobs_spec(), kNoisyLambda}};
}

}  // namespace cvxclust::fixtures
