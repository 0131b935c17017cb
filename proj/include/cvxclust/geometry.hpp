#pragma once

#include <array>
#include <vector>

namespace cvxclust::geometry {

using Point2 = std::array<double, 2>;

// Sign of the orientation determinant of (a, b, c): +1 counter-clockwise,
// -1 clockwise, 0 collinear. Exact for all finite double inputs (floating
// filter with an exact rational fallback).
int orient2d(const Point2& a, const Point2& b, const Point2& c);

// Strictly convex hull in counter-clockwise order (collinear points dropped).
std::vector<Point2> convex_hull(std::vector<Point2> points);

// True when the interiors of the convex hulls of two point sets do not
// intersect. Hulls with fewer than three vertices have empty interior.
bool hull_interiors_disjoint(const std::vector<Point2>& hull_a,
                             const std::vector<Point2>& hull_b);

}  // namespace cvxclust::geometry
