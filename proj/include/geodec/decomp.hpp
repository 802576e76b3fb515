#pragma once

/// \file decomp.hpp
/// Partitions of the simplicial lattice T^n_k into pieces owned by
/// sub-simplices: the Lagrange, Hermite and C^m-smooth decompositions.
///
/// Piece membership is decided node by node from distance inequalities on a
/// boolean ownership array over the full lattice; verify_partition() then
/// checks the result independently by brute force.

#include "errors.hpp"
#include "lattice.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geodec {

/// Validated smoothness orders r = (r_0, ..., r_n) together with the degree k:
///   r_n = 0, r_{n-1} = m, r_l >= 2 r_{l+1} for l = n-2..0, k >= 2 r_0 + 1.
class SmoothnessVector {
 public:
  SmoothnessVector(std::vector<int> r, int k);

  int n() const noexcept { return static_cast<int>(r_.size()) - 1; }
  int m() const noexcept { return r_[n() - 1]; }
  int k() const noexcept { return k_; }
  int operator[](int l) const { return r_.at(l); }
  const std::vector<int>& orders() const noexcept { return r_; }

  bool operator==(const SmoothnessVector&) const = default;

 private:
  std::vector<int> r_;
  int k_ = 0;
};

/// Every inequality that (r, k) fails, in readable form. Empty means valid.
inline std::vector<std::string> smoothness_violations(const std::vector<int>& r, int k) {
  std::vector<std::string> out;
  if (r.size() < 2) {
    out.push_back("need at least two orders (n >= 1)");
    return out;
  }
  const int n = static_cast<int>(r.size()) - 1;
  if (n + 1 > kMaxParts) out.push_back("n <= " + std::to_string(kMaxParts - 1));
  for (int l = 0; l <= n; ++l)
    if (r[l] < 0) out.push_back("r_" + std::to_string(l) + " >= 0");
  if (r[n] != 0) out.push_back("r_" + std::to_string(n) + " = 0");
  for (int l = n - 2; l >= 0; --l)
    if (r[l] < 2 * r[l + 1]) out.push_back("r_" + std::to_string(l) + " >= 2 r_" + std::to_string(l + 1));
  if (k < 2 * r[0] + 1) out.push_back("k >= 2 r_0 + 1");
  return out;
}

inline SmoothnessVector::SmoothnessVector(std::vector<int> r, int k) : r_(std::move(r)), k_(k) {
  auto v = smoothness_violations(r_, k_);
  if (!v.empty()) throw ConstraintViolation(std::move(v));
}

/// Returns the validated vector or throws ConstraintViolation listing every failed inequality.
inline SmoothnessVector validate_smoothness_vector(const std::vector<int>& r, int k) { return {r, k}; }

enum class DecompositionKind { Lagrange, Hermite, Smooth };

inline std::string to_string(DecompositionKind kind) {
  switch (kind) {
    case DecompositionKind::Lagrange: return "lagrange";
    case DecompositionKind::Hermite: return "hermite";
    case DecompositionKind::Smooth: return "smooth";
  }
  return "unknown";
}

struct DecompositionPiece {
  SubSimplex face;
  LatticeSet nodes;
};

/// Map from every sub-simplex f of T (all dimensions, canonical order) to its
/// node set. Hand-built instances need not be partitions; see verify_partition().
class LatticeDecomposition {
 public:
  LatticeDecomposition(DecompositionKind kind, int n, int k, int m, std::vector<int> r,
                       std::vector<DecompositionPiece> pieces)
      : kind_(kind), n_(n), k_(k), m_(m), r_(std::move(r)), pieces_(std::move(pieces)) {}

  DecompositionKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  /// Hermite vertex radius / smooth facet order; 0 for Lagrange.
  int m() const noexcept { return m_; }
  /// Smoothness orders; empty unless kind() == Smooth.
  const std::vector<int>& r() const noexcept { return r_; }
  const std::vector<DecompositionPiece>& pieces() const noexcept { return pieces_; }

  const LatticeSet& piece(const SubSimplex& f) const {
    for (const auto& p : pieces_)
      if (p.face == f) return p.nodes;
    throw std::out_of_range("no piece for sub-simplex " + f.str());
  }

  std::size_t total_size() const {
    std::size_t s = 0;
    for (const auto& p : pieces_) s += p.nodes.size();
    return s;
  }

  /// Owner of each node, for a partition; nullopt if unclaimed.
  std::optional<SubSimplex> owner_of(const MultiIndex& alpha) const {
    for (const auto& p : pieces_)
      if (p.nodes.contains(alpha)) return p.face;
    return std::nullopt;
  }

 private:
  DecompositionKind kind_;
  int n_, k_, m_;
  std::vector<int> r_;
  std::vector<DecompositionPiece> pieces_;
};

namespace detail {

/// Builds pieces for every face of T by evaluating `member(f, alpha)` on the
/// full lattice, level by level in canonical face order.
template <class Member>
std::vector<DecompositionPiece> collect_pieces(int n, int k, Member&& member) {
  const auto lattice = multi_indices(n + 1, k);
  std::vector<DecompositionPiece> pieces;
  for (int l = 0; l <= n; ++l) {
    for (const auto& f : faces(n, l)) {
      std::vector<MultiIndex> nodes;
      for (const auto& a : lattice)
        if (member(f, a)) nodes.push_back(a);
      pieces.push_back({f, LatticeSet(std::move(nodes))});
    }
  }
  return pieces;
}

inline void check_nk(int n, int k) {
  if (n < 0 || n + 1 > kMaxParts) throw std::invalid_argument("dimension n outside supported range");
  if (k < 0) throw std::invalid_argument("degree k must be non-negative");
}

}  // namespace detail

/// Vertex pieces are the vertex nodes; the piece of f (dim >= 1) is the set of
/// nodes interior to f, T^l_{k,1}(f).
inline LatticeDecomposition lagrange_decomposition(int n, int k) {
  detail::check_nk(n, k);
  if (k < 1) throw std::invalid_argument("Lagrange decomposition needs k >= 1");
  auto pieces = detail::collect_pieces(n, k, [](const SubSimplex& f, const MultiIndex& a) {
    return dist_to_face(a, f) == 0 && restrict_to(a, f).all_at_least(1);
  });
  return {DecompositionKind::Lagrange, n, k, 0, {}, std::move(pieces)};
}

/// Hermite: vertex disks D(v, m); for dim f >= 1 the interior nodes of f at
/// distance > m from every vertex of f. Requires k >= 2m + 1.
inline LatticeDecomposition hermite_decomposition(int n, int k, int m) {
  detail::check_nk(n, k);
  if (m < 0) throw std::invalid_argument("Hermite order m must be non-negative");
  if (k < 2 * m + 1) throw ConstraintViolation({"k >= 2m + 1"});
  auto pieces = detail::collect_pieces(n, k, [m](const SubSimplex& f, const MultiIndex& a) {
    if (f.dim() == 0) return dist_to_face(a, f) <= m;
    if (dist_to_face(a, f) != 0 || !restrict_to(a, f).all_at_least(1)) return false;
    for (int v : f.indices())
      if (dist_to_face(a, SubSimplex::vertex(v, f.ambient_dim())) <= m) return false;
    return true;
  });
  return {DecompositionKind::Hermite, n, k, m, {}, std::move(pieces)};
}

/// Membership test alpha in S_l(f) via the distance inequalities
///   |alpha_{f*}| <= r_l  and  |alpha_e| <= k - r_i - 1 for all e in Delta_i(f), i < l.
/// S_n(T) uses the same rule with r_n = 0.
inline bool in_smooth_piece(const MultiIndex& alpha, const SubSimplex& f, const std::vector<int>& r, int k) {
  const int l = f.dim();
  if (dist_to_face(alpha, f) > r[l]) return false;
  // enumerate proper sub-faces of f via submasks
  const std::uint32_t fm = f.mask();
  for (std::uint32_t e = (fm - 1) & fm; e != 0; e = (e - 1) & fm) {
    const int i = std::popcount(e) - 1;
    if (mass(alpha, SubSimplex::from_mask(e, f.ambient_dim())) > k - r[i] - 1) return false;
  }
  return true;
}

/// The C^m decomposition S_l(f), l = 0..n, for a validated smoothness vector.
inline LatticeDecomposition smooth_decomposition(const SmoothnessVector& sv) {
  const int n = sv.n(), k = sv.k();
  const auto& r = sv.orders();
  auto pieces = detail::collect_pieces(
      n, k, [&](const SubSimplex& f, const MultiIndex& a) { return in_smooth_piece(a, f, r, k); });
  return {DecompositionKind::Smooth, n, k, sv.m(), r, std::move(pieces)};
}

inline LatticeDecomposition smooth_decomposition(int n, int k, const std::vector<int>& r) {
  if (static_cast<int>(r.size()) != n + 1)
    throw ConstraintViolation({"smoothness vector must have n + 1 = " + std::to_string(n + 1) + " entries"});
  return smooth_decomposition(SmoothnessVector(r, k));
}

/// Which sub-simplices the set-difference definition subtracts from D(f, r_l).
enum class TubeScope { SubFacesOfF, AllOfT };

/// S_l(f) computed from its set-difference definition
///   D(f, r_l) \ U_{i<l} U_{e in Delta_i(scope)} D(e, r_i),
/// with S_n(T) the remainder. Independent of in_smooth_piece(); no validation
/// of r is done, so it also serves for deliberately inadmissible inputs.
inline LatticeDecomposition smooth_decomposition_by_tubes(int n, int k, const std::vector<int>& r,
                                                          TubeScope scope) {
  detail::check_nk(n, k);
  std::map<std::pair<int, std::uint32_t>, LatticeSet> tubes;
  auto tube_of = [&](const SubSimplex& e, int radius) -> const LatticeSet& {
    auto key = std::make_pair(radius, e.mask());
    auto it = tubes.find(key);
    if (it == tubes.end()) it = tubes.emplace(key, tube(e, radius, k)).first;
    return it->second;
  };
  std::vector<DecompositionPiece> pieces;
  LatticeSet covered;
  for (int l = 0; l < n; ++l) {
    for (const auto& f : faces(n, l)) {
      LatticeSet s = tube_of(f, r[l]);
      for (int i = 0; i < l; ++i) {
        auto lower = scope == TubeScope::SubFacesOfF ? sub_faces(f, i) : faces(n, i);
        for (const auto& e : lower) s = set_difference(s, tube_of(e, r[i]));
      }
      covered = set_union(covered, tube_of(f, r[l]));
      pieces.push_back({f, std::move(s)});
    }
  }
  pieces.push_back({SubSimplex::full(n), set_difference(enumerate_lattice(n, k), covered)});
  return {DecompositionKind::Smooth, n, k, r.size() >= 2 ? r[r.size() - 2] : 0, r, std::move(pieces)};
}

struct PartitionWitness {
  MultiIndex node;
  std::vector<SubSimplex> owners;  ///< empty: node never claimed
};

struct PartitionReport {
  bool disjoint = true;
  bool covering = true;
  bool foreign_nodes = false;  ///< some piece holds a node outside T^n_k
  std::vector<PartitionWitness> witnesses;
  bool ok() const noexcept { return disjoint && covering && !foreign_nodes; }
};

/// Brute-force check that the pieces are pairwise disjoint and cover T^n_k.
inline PartitionReport verify_partition(const LatticeDecomposition& d) {
  PartitionReport report;
  const auto lattice = multi_indices(d.n() + 1, d.k());
  std::vector<std::vector<SubSimplex>> claims(lattice.size());
  for (const auto& p : d.pieces()) {
    for (const auto& a : p.nodes) {
      if (a.size() != d.n() + 1 || a.degree() != d.k()) {
        report.foreign_nodes = true;
        report.witnesses.push_back({a, {p.face}});
        continue;
      }
      claims[static_cast<std::size_t>(lattice_rank(a))].push_back(p.face);
    }
  }
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (claims[i].size() == 1) continue;
    if (claims[i].empty())
      report.covering = false;
    else
      report.disjoint = false;
    report.witnesses.push_back({lattice[i], claims[i]});
  }
  return report;
}

/// Piece sizes by level: sizes[l] lists |S_l(f)| for f in Delta_l(T), canonical order.
inline std::vector<std::vector<std::size_t>> piece_sizes(const LatticeDecomposition& d) {
  std::vector<std::vector<std::size_t>> sizes(d.n() + 1);
  for (const auto& p : d.pieces()) sizes[p.face.dim()].push_back(p.nodes.size());
  return sizes;
}

}  // namespace geodec
