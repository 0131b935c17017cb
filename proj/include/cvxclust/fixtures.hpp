#pragma once

#include "cvxclust/datagen.hpp"

#include <string>
#include <vector>

// Frozen datasets for the demos. Centers, spreads and seeds were picked so
// that the demo lambdas land in the regime with 1 < k < n.
namespace cvxclust::fixtures {

// Three blobs on a horizontal line.
Matrix blob_centers();
constexpr double kBlobStdev = 0.7;

// Growing-cluster sequence: 60 blob points, then 8/16/24 points added inside
// the rightmost blob.
constexpr int kGrowingBaseN = 60;
constexpr std::uint64_t kGrowingSeed = 0;
constexpr std::uint64_t kGrowingAddSeed = 1000;
constexpr double kGrowingAddRadius = 0.7;
inline const std::vector<int> kGrowingAdded = {0, 8, 16, 24};
constexpr double kGrowingFixedLambda = 0.11;
inline const std::vector<double> kGrowingDecreasingLambdas = {0.11, 0.099, 0.088, 0.077};

GeneratorSpec growing_base_spec();
Ball growing_region();
// Base dataset with `added` interior points; labels has 2 for added points.
GeneratedData growing_dataset(int added);

constexpr std::uint64_t kMoonsSeed = 2;
constexpr double kMoonsLambda = 0.0172;
inline const std::vector<double> kMoonsPathLambdas = {0.017, 0.0172, 0.0175};
GeneratorSpec moons_spec();

constexpr std::uint64_t kUniformSeed = 0;
constexpr double kUniformLambda = 0.01307;
inline const std::vector<double> kUniformPathLambdas = {0.013, 0.01307, 0.0131};
GeneratorSpec uniform_spec();

constexpr std::uint64_t kBlobsSeed = 0;
constexpr double kBlobsLambda = 0.042;
GeneratorSpec blobs_spec();

// Background noise box widened by 20 stdevs so that most noise points fall
// away from the blobs.
constexpr std::uint64_t kNoisySeed = 9;
constexpr double kNoisyLambda = 0.042;
constexpr double kNoisyMargin = 20.0;
GeneratorSpec noisy_blobs_spec();

inline const std::vector<double> kBlobPathLambdas = {0.035, 0.04, 0.045};

struct NamedFixture {
  std::string name;
  GeneratorSpec spec;
  double lambda;
};

// The four comparison datasets in display order.
std::vector<NamedFixture> comparison_fixtures();

}  // namespace cvxclust::fixtures
