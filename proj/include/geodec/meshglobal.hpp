#pragma once

/// \file meshglobal.hpp
/// Global spaces on a mesh: DoF identification across cells, interpolation,
/// per-cell reconstruction and exact checks of inter-element smoothness.

#include "dof.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace geodec {

/// A global DoF: the owner face of the mesh and the functional descriptor
/// shared by every cell containing it.
struct GlobalDof {
  int level = 0;
  std::size_t face = 0;
  VertexIds vertices;
  std::size_t position = 0;  ///< index inside the owner's piece
  DofFunctional descriptor;  ///< as seen from the first cell containing the face
};

struct GlobalDofMap {
  ElementSpec spec;
  std::vector<GlobalDof> dofs;
  std::vector<std::vector<std::size_t>> cell_to_global;  ///< [cell][local row]
  std::vector<DofSet<Rational>> cell_dofs;               ///< canonical frames

  std::size_t size() const noexcept { return dofs.size(); }
};

/// Numbers the DoFs by (level, face, position in piece). Face DoFs use the
/// canonical frame of the face, so a DoF shared by several cells is one
/// functional; any disagreement between cells raises std::logic_error.
inline GlobalDofMap global_dof_map(const Mesh& mesh, const ElementSpec& spec) {
  if (mesh.dim() != spec.n) throw std::invalid_argument("element dimension differs from mesh dimension");
  const int n = spec.n;
  GlobalDofMap map{spec, {}, {}, {}};
  const auto dec = spec.decomposition();
  std::vector<std::size_t> piece_size(n + 1);
  for (int l = 0; l <= n; ++l) piece_size[l] = dec.piece(faces(n, l).front()).size();
  std::vector<std::vector<std::size_t>> offset(n + 1);
  std::size_t next = 0;
  for (int l = 0; l <= n; ++l)
    for (std::size_t f = 0; f < mesh.faces(l).size(); ++f) {
      offset[l].push_back(next);
      for (std::size_t j = 0; j < piece_size[l]; ++j) map.dofs.push_back({l, f, mesh.faces(l)[f], j, {}});
      next += piece_size[l];
    }
  std::vector<bool> seen(next, false);
  std::map<std::pair<int, std::size_t>, std::vector<Vec<Rational>>> face_frames;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    auto set = build_dofs(spec, mesh.cell_geometry(c), FramePolicy::Canonical);
    std::vector<std::size_t> local(set.size());
    for (std::size_t p = 0; p < set.piece_faces.size(); ++p) {
      const SubSimplex& f = set.piece_faces[p];
      const int l = f.dim();
      const std::size_t gf = mesh.cell_face(c, f);
      if (auto it = set.frames.find(f.mask()); it != set.frames.end()) {
        auto [fit, inserted] = face_frames.try_emplace({l, gf}, it->second);
        if (!inserted && fit->second != it->second)
          throw std::logic_error("normal frame of face " + f.str() + " differs between cells");
      }
      for (std::size_t i = set.piece_offsets[p]; i < set.piece_offsets[p + 1]; ++i) {
        const std::size_t g = offset[l][gf] + (i - set.piece_offsets[p]);
        local[i] = g;
        const auto& d = set.functionals[i];
        if (!seen[g]) {
          map.dofs[g].descriptor = d;
          seen[g] = true;
        } else {
          const auto& d0 = map.dofs[g].descriptor;
          if (d0.kind != d.kind || d0.order != d.order || d0.derivative != d.derivative || d0.weight != d.weight)
            throw std::logic_error("DoF " + std::to_string(g) + " is not single valued");
        }
      }
    }
    map.cell_to_global.push_back(std::move(local));
    map.cell_dofs.push_back(std::move(set));
  }
  return map;
}

/// Global DoF values of a function given cell by cell in Bernstein form. A
/// shared DoF must take the same value from every cell; otherwise the input
/// is not one global polynomial (or not globally smooth enough) and MeshError
/// is thrown.
inline std::vector<Rational> interpolate(const GlobalDofMap& map, const std::vector<BernsteinPoly<Rational>>& cells) {
  if (cells.size() != map.cell_dofs.size()) throw std::invalid_argument("need one polynomial per cell");
  std::vector<Rational> out(map.size());
  std::vector<int> from(map.size(), -1);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].degree() > map.spec.k) throw std::invalid_argument("target degree exceeds k");
    auto p = cells[c].elevated(map.spec.k - cells[c].degree());
    auto vals = apply_dofs(map.cell_dofs[c], p);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::size_t g = map.cell_to_global[c][i];
      if (from[g] < 0) {
        out[g] = vals[i];
        from[g] = static_cast<int>(c);
      } else if (out[g] != vals[i]) {
        throw MeshError("input is not a single global polynomial: DoF " + std::to_string(g) + " differs between cells " +
                        std::to_string(from[g]) + " and " + std::to_string(c));
      }
    }
  }
  return out;
}

inline std::vector<Rational> interpolate(const Mesh& mesh, const GlobalDofMap& map, const CartesianPolynomial& target) {
  if (target.degree() > map.spec.k) throw std::invalid_argument("target degree exceeds k");
  std::vector<BernsteinPoly<Rational>> cells;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) cells.push_back(to_bernstein(target, mesh.cell_geometry(c), map.spec.k));
  return interpolate(map, cells);
}

/// Cell polynomials of several global coefficient vectors at once:
/// result[v][c] is vector v restricted to cell c.
inline std::vector<std::vector<BernsteinPoly<Rational>>> reconstruct(const GlobalDofMap& map,
                                                                     const std::vector<std::vector<Rational>>& vectors,
                                                                     unsigned jobs = 1) {
  std::vector<std::vector<BernsteinPoly<Rational>>> out(vectors.size());
  for (const auto& v : vectors)
    if (v.size() != map.size()) throw std::invalid_argument("coefficient vector has wrong length");
  for (std::size_t c = 0; c < map.cell_dofs.size(); ++c) {
    const auto& set = map.cell_dofs[c];
    auto m = dof_matrix(set, jobs);
    RationalMatrix rhs(set.size(), vectors.size());
    for (std::size_t v = 0; v < vectors.size(); ++v)
      for (std::size_t i = 0; i < set.size(); ++i) rhs(i, v) = vectors[v][map.cell_to_global[c][i]];
    RationalMatrix x;
    try {
      x = solve(m.values, rhs);
    } catch (const std::domain_error&) {
      throw NotUnisolvent("DoF-basis matrix of cell " + std::to_string(c) + " is singular");
    }
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      BernsteinPoly<Rational> p(set.spec.n, set.spec.k);
      for (std::size_t j = 0; j < set.size(); ++j) p.set(set.columns[j], x(j, v));
      out[v].push_back(std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Continuity

/// Continuity order the element guarantees across l-dimensional faces.
inline int required_order(const ElementSpec& spec, int l) {
  if (spec.smooth()) return spec.r.at(l);
  if (spec.family == ElementFamily::Hermite && l == 0) return spec.m;
  return 0;
}

struct ContinuityEntry {
  int level = 0;
  std::size_t face = 0;
  VertexIds vertices;
  int order = 0;
  Rational max_jump;
  bool required = true;  ///< false: order above the guaranteed one, reported only
};

struct ContinuityReport {
  std::vector<ContinuityEntry> entries;
  bool ok() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ContinuityEntry& e) { return !e.required || e.max_jump == 0; });
  }
};

/// Interior lattice points of degree k + l + 1 on an l-face, in face
/// barycentric coordinates. A polynomial of degree <= k on the face that
/// vanishes at all of them vanishes identically.
inline std::vector<Vec<Rational>> face_sample_points(int l, int k) {
  std::vector<Vec<Rational>> pts;
  const int d = k + l + 1;
  for (const auto& a : multi_indices(l + 1, d)) {
    if (!a.all_at_least(1)) continue;
    Vec<Rational> mu;
    for (int v : a) mu.push_back(Rational(v, d));
    for (auto& x : mu) x.canonicalize();
    pts.push_back(std::move(mu));
  }
  return pts;
}

/// Cartesian derivatives D^gamma p for all |gamma| <= max_order.
inline std::map<MultiIndex, BernsteinPoly<Rational>> cartesian_derivatives(const BernsteinPoly<Rational>& p,
                                                                           const SimplexGeometry<Rational>& g,
                                                                           int max_order) {
  const int n = g.ambient_dim();
  std::map<MultiIndex, BernsteinPoly<Rational>> out;
  out.emplace(MultiIndex(n), p);
  std::vector<Vec<Rational>> slopes;
  for (int d = 0; d < n; ++d) {
    Vec<Rational> e(n, Rational(0));
    e[d] = 1;
    slopes.push_back(slopes_along(g, e));
  }
  for (int q = 1; q <= max_order; ++q)
    for (const auto& gamma : multi_indices(n, q)) {
      int d = 0;
      while (gamma[d] == 0) ++d;
      const auto& prev = out.at(gamma - MultiIndex::unit(n, d));
      out.emplace(gamma, derivative_by_slopes(prev, std::span<const Rational>(slopes[d])));
    }
  return out;
}

/// For each face of dimension < n shared by two or more cells and each order
/// q up to the required continuity order plus `extra_orders`, the largest
/// |D^gamma u_c - D^gamma u_c0| over |gamma| = q, the cells c containing the
/// face and the face sample points. Exact.
inline ContinuityReport continuity_check(const Mesh& mesh, const GlobalDofMap& map,
                                         const std::vector<std::vector<BernsteinPoly<Rational>>>& cell_polys,
                                         int extra_orders = 0) {
  const auto& spec = map.spec;
  const int n = spec.n;
  int top = 0;
  for (int l = 0; l < n; ++l) top = std::max(top, required_order(spec, l) + extra_orders);
  ContinuityReport rep;
  std::map<std::tuple<int, std::size_t, int>, ContinuityEntry> acc;
  for (const auto& polys : cell_polys) {
    std::vector<std::map<MultiIndex, BernsteinPoly<Rational>>> derivs;
    for (std::size_t c = 0; c < polys.size(); ++c)
      derivs.push_back(cartesian_derivatives(polys[c], mesh.cell_geometry(c), std::min(top, spec.k)));
    for (int l = 0; l < n; ++l) {
      const int req = required_order(spec, l);
      const auto pts = face_sample_points(l, spec.k);
      for (std::size_t f = 0; f < mesh.faces(l).size(); ++f) {
        const auto& cs = mesh.cells_of(l, f);
        if (cs.size() < 2) continue;
        const auto& ids = mesh.faces(l)[f];
        const std::size_t c0 = cs[0];
        const SubSimplex f0 = mesh.local_face(c0, ids);
        for (int q = 0; q <= req + extra_orders; ++q) {
          auto [it, fresh] = acc.try_emplace({l, f, q});
          auto& e = it->second;
          if (fresh) e = {l, f, ids, q, Rational(0), q <= req};
          if (q > spec.k) continue;
          for (const auto& gamma : multi_indices(n, q)) {
            const auto& p0 = derivs[c0].at(gamma);
            for (std::size_t t = 1; t < cs.size(); ++t) {
              const std::size_t c = cs[t];
              const SubSimplex fc = mesh.local_face(c, ids);
              const auto& pc = derivs[c].at(gamma);
              for (const auto& mu : pts) {
                auto l0 = extend_point<Rational>(std::span<const Rational>(mu), f0);
                auto lc = extend_point<Rational>(std::span<const Rational>(mu), fc);
                Rational jump = abs(evaluate(pc, lc) - evaluate(p0, l0));
                if (jump > e.max_jump) e.max_jump = jump;
              }
            }
          }
        }
      }
    }
  }
  for (auto& [key, e] : acc) rep.entries.push_back(std::move(e));
  return rep;
}

// ---------------------------------------------------------------------------
// Traces on a facet

struct TraceSpaceReport {
  std::vector<int> facet_orders;  ///< r_F^i
  int degree = 0;                 ///< k - i
  bool valid_orders = false;
  std::vector<std::string> violations;
  bool nodes_match = false;  ///< node-by-node agreement of the restricted pieces
  std::int64_t count = 0;
  std::int64_t expected = 0;  ///< dim P_{k-i}(F)
  bool ok() const noexcept { return valid_orders && nodes_match && count == expected; }
};

/// The DoFs of a smooth element that carry exactly i derivatives normal to the
/// facet opposite vertex `opposite`, restricted to that facet, against the
/// smooth decomposition of the facet with orders r_F^i = (r_0-i, ..., r_{n-2}-i, 0)
/// and degree k - i.
inline TraceSpaceReport trace_space_check(const ElementSpec& spec, int i, int opposite = -1) {
  if (!spec.smooth()) throw std::invalid_argument("trace check needs a smooth element");
  const int n = spec.n, k = spec.k;
  if (n < 2) throw std::invalid_argument("trace check needs n >= 2");
  if (i < 0 || i > spec.m) throw std::invalid_argument("trace order i must lie in [0, m]");
  if (opposite < 0) opposite = n;
  if (opposite > n) throw std::invalid_argument("no such vertex");
  TraceSpaceReport rep;
  rep.degree = k - i;
  for (int l = 0; l <= n - 2; ++l) rep.facet_orders.push_back(spec.r[l] - i);
  rep.facet_orders.push_back(0);
  rep.violations = smoothness_violations(rep.facet_orders, rep.degree);
  rep.valid_orders = rep.violations.empty();
  rep.expected = binomial(n - 1 + rep.degree, rep.degree);
  if (!rep.valid_orders) return rep;
  const SubSimplex F = complement(SubSimplex::vertex(opposite, n));
  const auto dec = spec.decomposition();
  const auto facet_dec = smooth_decomposition(n - 1, rep.degree, rep.facet_orders);
  rep.nodes_match = true;
  for (int l = 0; l <= n - 1; ++l)
    for (const auto& e : sub_faces(F, l)) {
      std::vector<int> local;
      for (int v : e.indices()) local.push_back(F.position_of(v));
      const SubSimplex e_on_F(std::span<const int>(local), n - 1);
      std::vector<MultiIndex> got;
      for (const auto& a : dec.piece(e))
        if (a[opposite] == i) got.push_back(restrict_to(a, F));
      std::sort(got.begin(), got.end());
      const auto& want = facet_dec.piece(e_on_F);
      rep.count += static_cast<std::int64_t>(want.size());
      if (!std::equal(got.begin(), got.end(), want.begin(), want.end())) rep.nodes_match = false;
    }
  return rep;
}

}  // namespace geodec
