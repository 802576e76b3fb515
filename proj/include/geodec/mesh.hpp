#pragma once

/// \file mesh.hpp
/// Small simplicial meshes with exact rational coordinates: incidence tables
/// Delta_l(T_h), conformity validation at construction and JSON loading.
///
/// Cells keep their vertex ids sorted ascending, so the local sub-simplex
/// order of a cell agrees with the global order of its faces.

#include "bernstein.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace geodec {

using VertexIds = std::vector<int>;

class Mesh {
 public:
  Mesh(std::vector<Vec<Rational>> vertices, std::vector<VertexIds> cells) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw MeshError("mesh has no vertices");
    dim_ = static_cast<int>(vertices_[0].size());
    if (dim_ < 1 || dim_ + 1 > kMaxParts) throw MeshError("unsupported mesh dimension " + std::to_string(dim_));
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (static_cast<int>(vertices_[v].size()) != dim_)
        throw MeshError("vertex " + std::to_string(v) + " has " + std::to_string(vertices_[v].size()) + " coordinates");
    if (cells.empty()) throw MeshError("mesh has no cells");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto ids = cells[c];
      if (static_cast<int>(ids.size()) != dim_ + 1)
        throw MeshError("cell " + std::to_string(c) + " needs " + std::to_string(dim_ + 1) + " vertices");
      std::sort(ids.begin(), ids.end());
      if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw MeshError("cell " + std::to_string(c) + " repeats a vertex");
      for (int v : ids)
        if (v < 0 || v >= static_cast<int>(vertices_.size()))
          throw MeshError("cell " + std::to_string(c) + " references missing vertex " + std::to_string(v));
      cells_.push_back(std::move(ids));
    }
    build_geometry();
    build_incidence();
    validate();
  }

  int dim() const noexcept { return dim_; }
  const std::vector<Vec<Rational>>& vertices() const noexcept { return vertices_; }
  const std::vector<VertexIds>& cells() const noexcept { return cells_; }
  std::size_t num_cells() const noexcept { return cells_.size(); }

  /// Delta_l(T_h): sorted vertex-id tuples in lexicographic order.
  const std::vector<VertexIds>& faces(int l) const { return faces_.at(l); }
  std::vector<std::int64_t> face_counts() const {
    std::vector<std::int64_t> c;
    for (const auto& f : faces_) c.push_back(static_cast<std::int64_t>(f.size()));
    return c;
  }

  std::size_t face_index(const VertexIds& ids) const {
    const int l = static_cast<int>(ids.size()) - 1;
    auto it = face_lookup_.at(l).find(ids);
    if (it == face_lookup_.at(l).end()) throw std::out_of_range("not a face of the mesh");
    return it->second;
  }

  /// Global vertex ids of the local sub-simplex f of cell c.
  VertexIds global_ids(std::size_t c, const SubSimplex& f) const {
    VertexIds ids;
    for (int i : f.indices()) ids.push_back(cells_.at(c)[i]);
    return ids;
  }

  std::size_t cell_face(std::size_t c, const SubSimplex& f) const { return face_index(global_ids(c, f)); }

  /// The local sub-simplex of cell c with the given global vertex ids.
  SubSimplex local_face(std::size_t c, const VertexIds& ids) const {
    std::vector<int> local;
    for (int v : ids) {
      auto it = std::find(cells_.at(c).begin(), cells_.at(c).end(), v);
      if (it == cells_.at(c).end()) throw std::out_of_range("face is not part of the cell");
      local.push_back(static_cast<int>(it - cells_[c].begin()));
    }
    return SubSimplex(std::span<const int>(local), dim_);
  }

  /// Cells containing the face (ascending).
  const std::vector<std::size_t>& cells_of(int l, std::size_t face) const { return face_cells_.at(l).at(face); }

  const SimplexGeometry<Rational>& cell_geometry(std::size_t c) const { return geometry_.at(c); }

  SimplexGeometry<Rational> face_geometry(int l, std::size_t face) const {
    std::vector<Vec<Rational>> v;
    for (int id : faces_.at(l).at(face)) v.push_back(vertices_[id]);
    return SimplexGeometry<Rational>(std::move(v));
  }

 private:
  void build_geometry() {
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      std::vector<Vec<Rational>> v;
      for (int id : cells_[c]) v.push_back(vertices_[id]);
      try {
        geometry_.emplace_back(std::move(v));
      } catch (const SingularGeometry&) {
        throw MeshError("cell " + std::to_string(c) + " is degenerate");
      }
    }
  }

  void build_incidence() {
    faces_.assign(dim_ + 1, {});
    face_lookup_.assign(dim_ + 1, {});
    face_cells_.assign(dim_ + 1, {});
    for (int l = 0; l <= dim_; ++l) {
      std::set<VertexIds> all;
      for (std::size_t c = 0; c < cells_.size(); ++c)
        for (const auto& f : geodec::faces(dim_, l)) all.insert(global_ids(c, f));
      faces_[l].assign(all.begin(), all.end());
      for (std::size_t i = 0; i < faces_[l].size(); ++i) face_lookup_[l][faces_[l][i]] = i;
      face_cells_[l].assign(faces_[l].size(), {});
      for (std::size_t c = 0; c < cells_.size(); ++c)
        for (const auto& f : geodec::faces(dim_, l)) face_cells_[l][face_lookup_[l][global_ids(c, f)]].push_back(c);
    }
  }

  // --- conformity -------------------------------------------------------

  void validate() const {
    for (std::size_t a = 0; a < vertices_.size(); ++a)
      for (std::size_t b = a + 1; b < vertices_.size(); ++b)
        if (vertices_[a] == vertices_[b])
          throw MeshError("vertices " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
    for (std::size_t c = 0; c < cells_.size(); ++c)
      for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (std::binary_search(cells_[c].begin(), cells_[c].end(), static_cast<int>(v))) continue;
        auto lam = geometry_[c].barycentric(std::span<const Rational>(vertices_[v]));
        if (std::all_of(lam.begin(), lam.end(), [](const Rational& x) { return x >= 0; }))
          throw MeshError("nonconforming: vertex " + std::to_string(v) + " lies in cell " + std::to_string(c) +
                          " without being one of its vertices (hanging node)");
      }
    const int fl = dim_ - 1;
    for (std::size_t f = 0; f < faces_[fl].size(); ++f) {
      const auto& cs = face_cells_[fl][f];
      if (cs.size() > 2) throw MeshError("nonconforming: facet shared by " + std::to_string(cs.size()) + " cells");
      if (cs.size() == 2) check_opposite_sides(cs[0], cs[1], faces_[fl][f]);
    }
    for (std::size_t a = 0; a < cells_.size(); ++a)
      for (std::size_t b = a + 1; b < cells_.size(); ++b) {
        check_crossing(a, b);
        check_crossing(b, a);
        if (interiors_overlap(a, b))
          throw MeshError("nonconforming: cells " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
      }
  }

  void check_opposite_sides(std::size_t a, std::size_t b, const VertexIds& facet) const {
    int opp_a = -1, opp_b = -1;
    for (int i = 0; i <= dim_; ++i) {
      if (!std::binary_search(facet.begin(), facet.end(), cells_[a][i])) opp_a = i;
      if (!std::binary_search(facet.begin(), facet.end(), cells_[b][i])) opp_b = cells_[b][i];
    }
    auto lam = geometry_[a].barycentric(std::span<const Rational>(vertices_[opp_b]));
    if (lam[opp_a] >= 0)
      throw MeshError("nonconforming: cells " + std::to_string(a) + " and " + std::to_string(b) +
                      " lie on the same side of their shared facet");
  }

  /// Relative interiors of complementary-dimension faces of two cells must not meet.
  void check_crossing(std::size_t a, std::size_t b) const {
    for (int la = 0; la <= dim_; ++la) {
      const int lb = dim_ - la;
      for (const auto& fa : geodec::faces(dim_, la))
        for (const auto& fb : geodec::faces(dim_, lb)) {
          auto ia = global_ids(a, fa), ib = global_ids(b, fb);
          bool shared = false;
          for (int v : ia) shared |= std::binary_search(ib.begin(), ib.end(), v);
          if (shared) continue;
          // sum_i s_i p_i - sum_j t_j q_j = 0, sum s = 1, sum t = 1
          const std::size_t unknowns = ia.size() + ib.size();
          RationalMatrix m(dim_ + 2, unknowns), rhs(dim_ + 2, 1);
          for (std::size_t i = 0; i < ia.size(); ++i) {
            for (int c = 0; c < dim_; ++c) m(c, i) = vertices_[ia[i]][c];
            m(dim_, i) = 1;
          }
          for (std::size_t j = 0; j < ib.size(); ++j) {
            for (int c = 0; c < dim_; ++c) m(c, ia.size() + j) = -vertices_[ib[j]][c];
            m(dim_ + 1, ia.size() + j) = 1;
          }
          rhs(dim_, 0) = 1;
          rhs(dim_ + 1, 0) = 1;
          RationalMatrix x;
          try {
            x = solve(m, rhs);
          } catch (const std::domain_error&) {
            continue;
          }
          bool inside = true;
          for (std::size_t i = 0; i < unknowns; ++i) inside &= x(i, 0) > 0;
          if (inside)
            throw MeshError("nonconforming: a " + std::to_string(la) + "-face of cell " + std::to_string(a) +
                            " crosses a " + std::to_string(lb) + "-face of cell " + std::to_string(b));
        }
    }
  }

  /// Separating-axis test on facet normals (and edge cross products in 3-D).
  bool interiors_overlap(std::size_t a, std::size_t b) const {
    std::vector<Vec<Rational>> axes;
    for (std::size_t c : {a, b})
      for (const auto& g : geometry_[c].gradients()) axes.push_back(g);
    if (dim_ == 3) {
      auto ta = edges(a), tb = edges(b);
      for (const auto& u : ta)
        for (const auto& v : tb)
          axes.push_back({u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]});
    }
    for (const auto& ax : axes) {
      if (std::all_of(ax.begin(), ax.end(), [](const Rational& x) { return x == 0; })) continue;
      auto [lo_a, hi_a] = project(a, ax);
      auto [lo_b, hi_b] = project(b, ax);
      if (hi_a <= lo_b || hi_b <= lo_a) return false;
    }
    return true;
  }

  std::vector<Vec<Rational>> edges(std::size_t c) const {
    std::vector<Vec<Rational>> out;
    for (int i = 0; i <= dim_; ++i)
      for (int j = i + 1; j <= dim_; ++j) {
        Vec<Rational> e(dim_);
        for (int d = 0; d < dim_; ++d) e[d] = vertices_[cells_[c][j]][d] - vertices_[cells_[c][i]][d];
        out.push_back(std::move(e));
      }
    return out;
  }

  std::pair<Rational, Rational> project(std::size_t c, const Vec<Rational>& ax) const {
    Rational lo, hi;
    bool first = true;
    for (int id : cells_[c]) {
      Rational p = dot(vertices_[id], ax);
      if (first || p < lo) lo = p;
      if (first || p > hi) hi = p;
      first = false;
    }
    return {lo, hi};
  }

  std::vector<Vec<Rational>> vertices_;
  std::vector<VertexIds> cells_;
  int dim_ = 0;
  std::vector<SimplexGeometry<Rational>> geometry_;
  std::vector<std::vector<VertexIds>> faces_;
  std::vector<std::map<VertexIds, std::size_t>> face_lookup_;
  std::vector<std::vector<std::vector<std::size_t>>> face_cells_;
};

namespace detail {

inline Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.dump());
  if (v.is_number()) return parse_rational(v.dump());
  throw MeshError("coordinate must be a number or a \"p/q\" string");
}

}  // namespace detail

/// {"dim": n, "vertices": [["p/q", ...], ...], "cells": [[ids], ...]}
inline Mesh mesh_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<Vec<Rational>> vertices;
    for (const auto& v : j.at("vertices")) {
      Vec<Rational> p;
      for (const auto& x : v) p.push_back(detail::json_rational(x));
      if (static_cast<int>(p.size()) != dim) throw MeshError("vertex with wrong number of coordinates");
      vertices.push_back(std::move(p));
    }
    std::vector<VertexIds> cells;
    for (const auto& c : j.at("cells")) cells.push_back(c.get<VertexIds>());
    return Mesh(std::move(vertices), std::move(cells));
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("malformed mesh: ") + e.what());
  }
}

inline Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MeshError("malformed mesh file " + path + ": " + e.what());
  }
  return mesh_from_json(j);
}

}  // namespace geodec
