#pragma once

// DOT and SVG figures of a labeled torus grid.

#include <cstdio>
#include <sstream>
#include <string>

#include "torusmagic/grid.hpp"
#include "torusmagic/labeling.hpp"
#include "torusmagic/verify.hpp"

namespace torusmagic {

enum class render_format { dot, svg };
enum class annotation { labels, weights, corners };

struct render_spec {
  render_format format = render_format::dot;
  annotation annotate = annotation::labels;
  bool highlight_diagonals = false;
};

namespace detail {

// Evenly spaced hues, one per diagonal.
inline std::string diagonal_color(int diag, int count, render_format f) {
  const double hue = static_cast<double>(diag - 1) / static_cast<double>(count);
  char buf[48];
  if (f == render_format::dot) {
    std::snprintf(buf, sizeof buf, "%.3f 0.750 0.800", hue);
  } else {
    std::snprintf(buf, sizeof buf, "hsl(%d,70%%,40%%)", static_cast<int>(hue * 360.0 + 0.5));
  }
  return buf;
}

inline std::string node_id(const vertex_ref& v) {
  return "x_" + std::to_string(v.i) + "_" + std::to_string(v.j);
}

inline std::string vertex_caption(const labeling& lab, const vertex_ref& v, annotation a) {
  switch (a) {
    case annotation::weights:
      return std::to_string(vertex_weight(lab, v));
    case annotation::corners:
      return "HV " + std::to_string(hv_partial_weight(lab, v)) + " / VH " +
             std::to_string(vh_partial_weight(lab, v));
    default:
      return "x" + std::to_string(v.i) + "," + std::to_string(v.j);
  }
}

inline std::string render_dot(const labeling& lab, const render_spec& spec) {
  const auto& g = lab.dims();
  std::ostringstream os;
  os << "graph torus_" << g.n << "_" << g.m << " {\n";
  os << "  layout=neato;\n  node [shape=circle, fontsize=10];\n";
  for (int i = 1; i <= g.n; ++i) {
    for (int j = 1; j <= g.m; ++j) {
      const vertex_ref v{i, j};
      os << "  " << node_id(v) << " [label=\"" << vertex_caption(lab, v, spec.annotate)
         << "\", pos=\"" << (j - 1) * 1.5 << "," << -(i - 1) * 1.5 << "!\"];\n";
    }
  }
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(g.q); ++idx) {
    const auto e = edge_at(g, idx);
    const auto [a, b] = endpoints(e, g);
    os << "  " << node_id(a) << " -- " << node_id(b) << " [label=\"" << lab[e] << "\"";
    if (spec.highlight_diagonals) {
      os << ", color=\"" << diagonal_color(diagonal_of_edge(e, g).diag, g.d, render_format::dot)
         << "\", penwidth=2";
    }
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string render_svg(const labeling& lab, const render_spec& spec) {
  const auto& g = lab.dims();
  constexpr int step = 80, margin = 60, radius = 14;
  const int width = 2 * margin + (g.m - 1) * step;
  const int height = 2 * margin + (g.n - 1) * step;
  auto px = [&](int j) { return margin + (j - 1) * step; };
  auto py = [&](int i) { return margin + (i - 1) * step; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto segment = [&](double x1, double y1, double x2, double y2, const std::string& color,
                     const std::string& text, bool dashed) {
    os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "")
       << "/>\n";
    if (!text.empty()) {
      os << "<text x=\"" << (x1 + x2) / 2 << "\" y=\"" << (y1 + y2) / 2 - 4
         << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"" << color << "\">" << text << "</text>\n";
    }
  };

  for (std::size_t idx = 0; idx < static_cast<std::size_t>(g.q); ++idx) {
    const auto e = edge_at(g, idx);
    const auto color = spec.highlight_diagonals
                           ? diagonal_color(diagonal_of_edge(e, g).diag, g.d, render_format::svg)
                           : std::string("black");
    const auto text = std::to_string(lab[e]);
    const double x = px(e.j), y = py(e.i);
    if (e.orient == orientation::horizontal) {
      if (e.j < g.m) {
        segment(x, y, px(e.j + 1), y, color, text, false);
      } else {
        // wrap edge: stub leaving the last column and stub entering the first
        segment(x, y, x + step / 2.0, y, color, text, true);
        segment(px(1) - step / 2.0, y, px(1), y, color, "", true);
      }
    } else {
      if (e.i < g.n) {
        segment(x, y, x, py(e.i + 1), color, text, false);
      } else {
        segment(x, y, x, y + step / 2.0, color, text, true);
        segment(x, py(1) - step / 2.0, x, py(1), color, "", true);
      }
    }
  }
  for (int i = 1; i <= g.n; ++i) {
    for (int j = 1; j <= g.m; ++j) {
      const vertex_ref v{i, j};
      os << "<circle cx=\"" << px(j) << "\" cy=\"" << py(i) << "\" r=\"" << radius
         << "\" fill=\"white\" stroke=\"black\"/>\n";
      os << "<text x=\"" << px(j) << "\" y=\"" << py(i) + 4 << "\" font-size=\""
         << (spec.annotate == annotation::corners ? 7 : 10) << "\" text-anchor=\"middle\">"
         << vertex_caption(lab, v, spec.annotate) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace detail

inline std::string render(const labeling& lab, const render_spec& spec = {}) {
  return spec.format == render_format::dot ? detail::render_dot(lab, spec) : detail::render_svg(lab, spec);
}

}  // namespace torusmagic
