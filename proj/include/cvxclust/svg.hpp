#pragma once

#include "cvxclust/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvxclust::svg {

// One scatter plot. Only the first two coordinates are drawn.
struct Panel {
  std::string title;
  Matrix points;
  // Color index per point; negative draws grey.
  std::vector<int> labels;
  // Drawn as "+" marks when present.
  std::optional<Matrix> prototypes;
  std::vector<BoundingBall> balls;
};

// Fixed 12-color palette, cycled by cluster index.
const std::string& palette_color(int index);

// Standalone document for one panel. Balls are <circle> elements, points are
// <rect> marks and prototypes <path> crosses.
std::string render(const Panel& panel);

// Panels laid out row-major on a grid with `columns` columns.
std::string render_grid(const std::vector<Panel>& panels, int columns);

}  // namespace cvxclust::svg
