#pragma once

/// \file svg.hpp
/// SVG picture of a two-dimensional lattice decomposition: nodes placed at
/// x(alpha) = sum_i (alpha_i / k) v_i on a fixed triangle, colored by owner.

#include "decomp.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace geodec {

inline std::string decomposition_to_svg(const LatticeDecomposition& d) {
  if (d.n() != 2) throw std::invalid_argument("SVG rendering supports n = 2 only");
  const double W = 640, H = 600, margin = 50, legend_w = 170;
  const double side = W - 2 * margin;
  const double vx[3] = {margin, margin + side, margin + side / 2};
  const double vy[3] = {H - margin, H - margin, H - margin - side * 0.8660254037844386};
  const int k = d.k();
  const double radius = std::max(3.0, std::min(12.0, side / (2.5 * std::max(k, 1))));
  static const char* vertex_colors[] = {"#d62728", "#1f77b4", "#2ca02c"};
  static const char* edge_colors[] = {"#ff9896", "#aec7e8", "#98df8a"};
  auto color_of = [&](const SubSimplex& f) -> std::string {
    if (f.dim() == 0) return vertex_colors[f[0]];
    if (f.dim() == 1) {
      // edge opposite vertex i gets the light tone of index i
      return edge_colors[complement(f)[0]];
    }
    return "#ffbb33";
  };
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return std::string(buf);
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(W + legend_w) << "\" height=\"" << fmt(H)
    << "\" viewBox=\"0 0 " << fmt(W + legend_w) << " " << fmt(H) << "\">\n";
  s << "<title>" << to_string(d.kind()) << " decomposition n=2 k=" << k << "</title>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<polygon points=\"";
  for (int i = 0; i < 3; ++i) s << fmt(vx[i]) << "," << fmt(vy[i]) << (i < 2 ? " " : "");
  s << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1.5\"/>\n";
  for (const auto& p : d.pieces()) {
    const std::string cls = p.face.dim() == 0 ? "vertex" : p.face.dim() == 1 ? "edge" : "interior";
    s << "<g class=\"" << cls << "\" data-face=\"" << p.face.str() << "\" fill=\"" << color_of(p.face)
      << "\" stroke=\"#222\" stroke-width=\"0.6\">\n";
    for (const auto& a : p.nodes) {
      double x = 0, y = 0;
      for (int i = 0; i < 3; ++i) {
        x += vx[i] * a[i] / std::max(k, 1);
        y += vy[i] * a[i] / std::max(k, 1);
      }
      s << "  <circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(radius) << "\"><title>"
        << a.str() << "</title></circle>\n";
    }
    s << "</g>\n";
  }
  // legend
  double ly = margin;
  const double lx = W + 10;
  s << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
  for (const auto& p : d.pieces()) {
    const std::string label =
        (p.face.dim() == 0 ? "vertex " : p.face.dim() == 1 ? "edge " : "interior ") + p.face.str() + " (" +
        std::to_string(p.nodes.size()) + ")";
    s << "  <circle cx=\"" << fmt(lx + 8) << "\" cy=\"" << fmt(ly) << "\" r=\"6\" fill=\"" << color_of(p.face)
      << "\" stroke=\"#222\" stroke-width=\"0.6\"/>\n";
    s << "  <text x=\"" << fmt(lx + 20) << "\" y=\"" << fmt(ly + 4) << "\">" << label << "</text>\n";
    ly += 22;
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace geodec
