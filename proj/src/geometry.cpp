#include "cvxclust/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>

namespace cvxclust::geometry {

namespace {

// (3 + 16 eps) eps, the forward error bound of the plain determinant.
constexpr double kOrientErrBound = 3.3306690738754716e-16;

int exact_orient2d(const Point2& a, const Point2& b, const Point2& c) {
  using boost::multiprecision::cpp_rational;
  const cpp_rational ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
  const cpp_rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return det.sign();
}

}  // namespace

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double left = (b[0] - a[0]) * (c[1] - a[1]);
  const double right = (b[1] - a[1]) * (c[0] - a[0]);
  const double det = left - right;
  const double bound = kOrientErrBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orient2d(a, b, c);
}

std::vector<Point2> convex_hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  // Andrew's monotone chain.
  std::vector<Point2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (k >= lower && orient2d(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

// Some edge line of `hull` has every vertex of `other` on its closed outer side.
bool has_separating_edge(const std::vector<Point2>& hull, const std::vector<Point2>& other) {
  const std::size_t m = hull.size();
  for (std::size_t e = 0; e < m; ++e) {
    const Point2& a = hull[e];
    const Point2& b = hull[(e + 1) % m];
    const bool separates = std::all_of(other.begin(), other.end(),
                                       [&](const Point2& q) { return orient2d(a, b, q) <= 0; });
    if (separates) return true;
  }
  return false;
}

}  // namespace

bool hull_interiors_disjoint(const std::vector<Point2>& hull_a,
                             const std::vector<Point2>& hull_b) {
  if (hull_a.size() < 3 || hull_b.size() < 3) return true;
  return has_separating_edge(hull_a, hull_b) || has_separating_edge(hull_b, hull_a);
}

}  // namespace cvxclust::geometry
