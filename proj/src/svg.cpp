#include "cvxclust/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cvxclust::svg {

namespace {

constexpr double kPanelSize = 400.0;
constexpr double kTitleHeight = 24.0;

const std::array<std::string, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double min_x, min_y, span;
};

// Square data window covering points, prototypes and balls, plus 5% margin.
Frame fit(const Panel& p) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  auto grow = [&](double x, double y, double r) {
    lo_x = std::min(lo_x, x - r);
    hi_x = std::max(hi_x, x + r);
    lo_y = std::min(lo_y, y - r);
    hi_y = std::max(hi_y, y + r);
  };
  auto y_of = [](const Matrix& m, Eigen::Index i) { return m.cols() > 1 ? m(i, 1) : 0.0; };
  for (Eigen::Index i = 0; i < p.points.rows(); ++i) grow(p.points(i, 0), y_of(p.points, i), 0.0);
  if (p.prototypes) {
    for (Eigen::Index i = 0; i < p.prototypes->rows(); ++i) {
      grow((*p.prototypes)(i, 0), y_of(*p.prototypes, i), 0.0);
    }
  }
  for (const auto& b : p.balls) grow(b.center[0], b.center.size() > 1 ? b.center[1] : 0.0, b.radius);
  if (!std::isfinite(lo_x)) return {-1.0, -1.0, 2.0};
  double span = std::max(hi_x - lo_x, hi_y - lo_y);
  if (!(span > 0.0)) span = 1.0;
  const double margin = 0.05 * span;
  const double cx = 0.5 * (lo_x + hi_x);
  const double cy = 0.5 * (lo_y + hi_y);
  span += 2.0 * margin;
  return {cx - 0.5 * span, cy - 0.5 * span, span};
}

void draw_panel(std::ostringstream& out, const Panel& p, double ox, double oy) {
  const Frame f = fit(p);
  const double scale = kPanelSize / f.span;
  auto sx = [&](double x) { return ox + (x - f.min_x) * scale; };
  auto sy = [&](double y) { return oy + kTitleHeight + kPanelSize - (y - f.min_y) * scale; };
  auto y_of = [](const Matrix& m, Eigen::Index i) { return m.cols() > 1 ? m(i, 1) : 0.0; };

  out << "<g>\n";
  out << "<rect class=\"frame\" x=\"" << num(ox) << "\" y=\"" << num(oy + kTitleHeight)
      << "\" width=\"" << num(kPanelSize) << "\" height=\"" << num(kPanelSize)
      << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
  out << "<text x=\"" << num(ox + 4) << "\" y=\"" << num(oy + 16)
      << "\" font-family=\"sans-serif\" font-size=\"13\">" << escape(p.title) << "</text>\n";
  for (const auto& b : p.balls) {
    out << "<circle class=\"ball\" cx=\"" << num(sx(b.center[0])) << "\" cy=\""
        << num(sy(b.center.size() > 1 ? b.center[1] : 0.0)) << "\" r=\"" << num(b.radius * scale)
        << "\" fill=\"#00ffff\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
  }
  constexpr double half = 2.5;
  for (Eigen::Index i = 0; i < p.points.rows(); ++i) {
    const int label = i < static_cast<Eigen::Index>(p.labels.size()) ? p.labels[i] : 0;
    const std::string color = label < 0 ? std::string("#999999") : palette_color(label);
    out << "<rect class=\"point\" x=\"" << num(sx(p.points(i, 0)) - half) << "\" y=\""
        << num(sy(y_of(p.points, i)) - half) << "\" width=\"" << num(2 * half) << "\" height=\""
        << num(2 * half) << "\" fill=\"" << color << "\"/>\n";
  }
  if (p.prototypes) {
    constexpr double arm = 5.0;
    for (Eigen::Index i = 0; i < p.prototypes->rows(); ++i) {
      const double x = sx((*p.prototypes)(i, 0));
      const double y = sy(y_of(*p.prototypes, i));
      out << "<path class=\"prototype\" d=\"M" << num(x - arm) << ' ' << num(y) << "H"
          << num(x + arm) << "M" << num(x) << ' ' << num(y - arm) << "V" << num(y + arm)
          << "\" stroke=\"#0000ff\" stroke-width=\"1.5\"/>\n";
    }
  }
  out << "</g>\n";
}

std::string document(const std::vector<Panel>& panels, int columns) {
  if (columns < 1) throw std::invalid_argument("columns must be at least 1");
  const int count = static_cast<int>(panels.size());
  const int cols = std::max(1, std::min(columns, count));
  const int rows = std::max(1, (count + cols - 1) / cols);
  const double cell_w = kPanelSize + 10.0;
  const double cell_h = kPanelSize + kTitleHeight + 10.0;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(cols * cell_w) << ' '
      << num(rows * cell_h) << "\" width=\"" << num(cols * cell_w) << "\" height=\""
      << num(rows * cell_h) << "\">\n";
  for (int t = 0; t < count; ++t) {
    draw_panel(out, panels[t], (t % cols) * cell_w + 5.0, (t / cols) * cell_h + 5.0);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

const std::string& palette_color(int index) {
  return kPalette[static_cast<std::size_t>(index < 0 ? -index : index) % kPalette.size()];
}

std::string render(const Panel& panel) { return document({panel}, 1); }

std::string render_grid(const std::vector<Panel>& panels, int columns) {
  return document(panels, columns);
}

}  // namespace cvxclust::svg
