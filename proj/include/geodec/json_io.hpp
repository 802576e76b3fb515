#pragma once

/// \file json_io.hpp
/// JSON views of decompositions, DoF lists, matrices and check reports.
/// Key order and array order are canonical, so output is byte stable.

#include "decomp.hpp"
#include "dof.hpp"
#include "meshglobal.hpp"

#include <json.hpp>

namespace geodec {

using Json = nlohmann::ordered_json;

inline Json to_json(const MultiIndex& a) {
  Json j = Json::array();
  for (int v : a) j.push_back(v);
  return j;
}

inline Json to_json(const SubSimplex& f) { return Json(f.indices()); }

inline Json decomposition_to_json(const LatticeDecomposition& d) {
  Json j;
  j["n"] = d.n();
  j["k"] = d.k();
  j["kind"] = to_string(d.kind());
  Json params;
  if (d.kind() != DecompositionKind::Lagrange) params["m"] = d.m();
  if (!d.r().empty()) params["r"] = d.r();
  j["params"] = params.is_null() ? Json::object() : params;
  Json pieces = Json::array();
  for (const auto& p : d.pieces()) {
    Json nodes = Json::array();
    for (const auto& a : p.nodes) nodes.push_back(to_json(a));
    pieces.push_back({{"face", to_json(p.face)}, {"size", p.nodes.size()}, {"nodes", std::move(nodes)}});
  }
  j["pieces"] = std::move(pieces);
  return j;
}

inline Json dof_to_json(const DofFunctional& d) {
  Json j;
  j["kind"] = to_string(d.kind);
  j["owner"] = to_json(d.owner);
  j["order"] = d.order;
  j["derivative"] = to_json(d.derivative);
  j["weight"] = to_json(d.weight);
  j["node"] = to_json(d.node);
  return j;
}

template <class Scalar>
Json dofs_to_json(const DofSet<Scalar>& set) {
  Json j;
  j["element"] = set.spec.str();
  j["frame"] = set.frame_policy == FramePolicy::Dual ? "dual" : "canonical";
  Json list = Json::array();
  for (const auto& d : set.functionals) list.push_back(dof_to_json(d));
  j["dofs"] = std::move(list);
  return j;
}

/// Matrix entries as exact "p/q" strings.
inline Json matrix_to_json(const DofMatrix<Rational>& m) {
  Json j;
  j["dimension"] = m.dimension();
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.values.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.values.cols(); ++c) row.push_back(to_string(m.values(i, c)));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline Json unisolvence_to_json(const UnisolvenceReport& r) {
  return Json{{"invertible", r.invertible},
              {"dimension", r.dimension},
              {"functionals", r.functionals},
              {"determinant", to_string(r.determinant)}};
}

inline Json block_report_to_json(const BlockTriangularReport& r) {
  auto entries = [](const std::vector<BlockEntry>& v) {
    Json a = Json::array();
    for (const auto& e : v)
      a.push_back({{"row", e.row}, {"col", e.col}, {"dof", e.row_dof}, {"node", e.col_node}, {"value", e.value}});
    return a;
  };
  Json blocks = Json::array();
  for (const auto& b : r.diagonal)
    blocks.push_back({{"face", to_json(b.face)}, {"rows", b.rows}, {"cols", b.cols}, {"invertible", b.invertible}});
  return Json{{"holds", r.holds},
              {"diagonal_blocks", std::move(blocks)},
              {"violations", entries(r.violations)},
              {"level_violations", entries(r.level_violations)}};
}

inline Json partition_to_json(const PartitionReport& r) {
  Json w = Json::array();
  for (const auto& x : r.witnesses) {
    Json owners = Json::array();
    for (const auto& f : x.owners) owners.push_back(to_json(f));
    w.push_back({{"node", to_json(x.node)}, {"owners", std::move(owners)}});
  }
  return Json{{"disjoint", r.disjoint}, {"covering", r.covering}, {"witnesses", std::move(w)}};
}

/// [{face, level, order, max_jump: "p/q", required}]
inline Json continuity_to_json(const ContinuityReport& r) {
  Json a = Json::array();
  for (const auto& e : r.entries)
    a.push_back({{"face", e.vertices},
                 {"level", e.level},
                 {"order", e.order},
                 {"max_jump", to_string(e.max_jump)},
                 {"required", e.required}});
  return a;
}

inline Json dimension_table_to_json(const DimensionTable& t) {
  Json j;
  j["face_counts"] = t.face_counts;
  j["per_face"] = t.per_face;
  j["total"] = t.total;
  Json f = Json::array();
  for (const auto& x : t.formulas) {
    Json per = Json::array();
    for (const auto& v : x.per_face) per.push_back(to_string(v));
    f.push_back({{"name", x.name}, {"per_face", std::move(per)}, {"total", to_string(x.total)}});
  }
  j["formulas"] = std::move(f);
  j["agree"] = t.agree();
  return j;
}

}  // namespace geodec
