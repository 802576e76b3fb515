#pragma once

/// \file dof.hpp
/// Degrees of freedom for the Lagrange, Hermite and C^m element families:
/// functional sets grouped by the lattice decomposition, DoF-basis matrices
/// N_i(lambda^alpha_j), exact unisolvence and block-triangularity checks,
/// nodal bases and dimension counts.
///
/// Moments are normalized by the measure of their face, i.e. the functional
/// int_f u w ds is represented by (1/|f|) int_f u w ds.

#include "bernstein.hpp"
#include "decomp.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace geodec {

enum class ElementFamily { Lagrange, Hermite, Smooth2D, SmoothND };

inline std::string to_string(ElementFamily f) {
  switch (f) {
    case ElementFamily::Lagrange: return "lagrange";
    case ElementFamily::Hermite: return "hermite";
    case ElementFamily::Smooth2D: return "smooth2d";
    case ElementFamily::SmoothND: return "smooth";
  }
  return "unknown";
}

/// An element family with its parameters. Construct through the factories,
/// which validate the parameters.
struct ElementSpec {
  ElementFamily family = ElementFamily::Lagrange;
  int n = 0;
  int k = 0;
  int m = 0;
  std::vector<int> r;  ///< smoothness orders, smooth families only

  static ElementSpec lagrange(int n, int k) {
    if (n < 1 || n + 1 > kMaxParts) throw std::invalid_argument("dimension n out of range");
    if (k < 1) throw std::invalid_argument("Lagrange elements need k >= 1");
    return {ElementFamily::Lagrange, n, k, 0, {}};
  }

  static ElementSpec hermite(int n, int k, int m) {
    if (n < 1 || n + 1 > kMaxParts) throw std::invalid_argument("dimension n out of range");
    if (m < 0) throw std::invalid_argument("Hermite order m must be non-negative");
    if (k < 2 * m + 1) throw ConstraintViolation({"k >= 2m + 1"});
    return {ElementFamily::Hermite, n, k, m, {}};
  }

  static ElementSpec smooth(std::vector<int> r, int k) {
    SmoothnessVector sv(r, k);
    return {ElementFamily::SmoothND, sv.n(), k, sv.m(), std::move(r)};
  }

  /// Triangle with vertex order r0 and edge order m.
  static ElementSpec smooth2d(int r0, int m, int k) {
    std::vector<std::string> v;
    if (m < 0) v.push_back("m >= 0");
    if (r0 < 2 * m) v.push_back("r_0 >= 2 r_1");
    if (k < 2 * r0 + 1) v.push_back("k >= 2 r_0 + 1");
    if (!v.empty()) throw ConstraintViolation(std::move(v));
    return {ElementFamily::Smooth2D, 2, k, m, {r0, m, 0}};
  }

  bool smooth() const noexcept { return family == ElementFamily::Smooth2D || family == ElementFamily::SmoothND; }

  /// Derivative order carried by the DoFs on l-dimensional faces.
  int order(int l) const {
    switch (family) {
      case ElementFamily::Lagrange: return 0;
      case ElementFamily::Hermite: return l == 0 ? m : 0;
      default: return r.at(l);
    }
  }

  std::int64_t dimension() const { return binomial(n + k, k); }

  LatticeDecomposition decomposition() const {
    switch (family) {
      case ElementFamily::Lagrange: return lagrange_decomposition(n, k);
      case ElementFamily::Hermite: return hermite_decomposition(n, k, m);
      default: return smooth_decomposition(n, k, r);
    }
  }

  std::string str() const {
    std::string s = to_string(family) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
    if (family == ElementFamily::Hermite) s += " m=" + std::to_string(m);
    if (smooth()) {
      s += " r=(";
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
      s += ")";
    }
    return s;
  }
};

enum class FramePolicy { Dual, Canonical };

enum class DofKind { VertexDerivative, FaceMoment, InteriorMoment };

inline std::string to_string(DofKind k) {
  switch (k) {
    case DofKind::VertexDerivative: return "vertex_derivative";
    case DofKind::FaceMoment: return "face_moment";
    case DofKind::InteriorMoment: return "interior_moment";
  }
  return "unknown";
}

/// One functional.
///  VertexDerivative: D^derivative u (v), derivative a Cartesian multi-index.
///  FaceMoment: (1/|f|) int_f d^beta u / dn_f^beta  lambda_f^weight, beta = derivative.
///  InteriorMoment: (1/|T|) int_T u lambda^weight.
/// `node` is the lattice node paired with the functional: the basis function
/// lambda^node sits in the same position of the column ordering.
struct DofFunctional {
  DofKind kind = DofKind::InteriorMoment;
  SubSimplex owner;
  int order = 0;          ///< |derivative|
  MultiIndex derivative;  ///< size n at vertices, n - l on faces, 0 in the interior
  MultiIndex weight;      ///< exponent on the owner's barycentric coordinates
  MultiIndex node;

  std::string str() const {
    std::string s = to_string(kind) + " " + owner.str();
    if (kind != DofKind::InteriorMoment) s += " d" + derivative.str();
    if (kind != DofKind::VertexDerivative) s += " w" + weight.str();
    return s;
  }
};

namespace detail {

/// Node order inside a piece: (|alpha_{f*}|, alpha_{f*}, alpha_f).
inline std::vector<MultiIndex> ordered_piece(const SubSimplex& f, const LatticeSet& nodes) {
  std::vector<MultiIndex> out(nodes.begin(), nodes.end());
  const SubSimplex fs = complement(f);
  std::stable_sort(out.begin(), out.end(), [&](const MultiIndex& a, const MultiIndex& b) {
    const int sa = mass(a, fs), sb = mass(b, fs);
    if (sa != sb) return sa < sb;
    auto ra = restrict_to(a, fs), rb = restrict_to(b, fs);
    if (ra != rb) return ra < rb;
    return restrict_to(a, f) < restrict_to(b, f);
  });
  return out;
}

template <class Scalar>
Scalar from_rational(const Rational& q) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return q;
  else
    return static_cast<Scalar>(q.get_d());
}

/// Factorials as Scalar, so moments cost a few multiplications.
template <class Scalar>
class MomentTable {
 public:
  explicit MomentTable(int max) {
    f_.push_back(Scalar(1));
    for (int i = 1; i <= max; ++i) f_.push_back(f_.back() * Scalar(i));
  }
  /// alpha! l! / (|alpha| + l)!
  Scalar operator()(const MultiIndex& alpha) const {
    const int l = alpha.size() - 1;
    Scalar num = f_.at(l);
    for (int v : alpha) num *= f_.at(v);
    return num / f_.at(alpha.degree() + l);
  }

 private:
  std::vector<Scalar> f_;
};

/// Terms of the trace on f of D_{d_1} ... D_{d_s} lambda^alpha, where the
/// derivative along d_j multiplies by slopes[j][i] = grad lambda_i . d_j.
/// Branches that cannot lose their mass on f* before the derivatives run out
/// vanish on f and are pruned.
template <class Scalar>
void derivative_trace(MultiIndex& alpha, const Scalar& c, const SubSimplex& f,
                      const std::vector<const Vec<Scalar>*>& slopes, std::size_t next, int off,
                      std::map<MultiIndex, Scalar>& out) {
  const int remaining = static_cast<int>(slopes.size() - next);
  if (off > remaining) return;
  if (next == slopes.size()) {
    auto key = restrict_to(alpha, f);
    auto [it, inserted] = out.try_emplace(key, c);
    if (!inserted) it->second += c;
    return;
  }
  const Vec<Scalar>& s = *slopes[next];
  for (int i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0 || s[i] == Scalar(0)) continue;
    const int a = alpha[i];
    --alpha[i];
    derivative_trace(alpha, Scalar(c * s[i] * Scalar(a)), f, slopes, next + 1, off - (f.contains(i) ? 0 : 1), out);
    ++alpha[i];
  }
}

}  // namespace detail

/// The ordered DoFs of one element together with the matching column basis.
/// Row i and column i share piece and position: functionals[i].node == columns[i].
template <class Scalar = Rational>
struct DofSet {
  ElementSpec spec;
  SimplexGeometry<Scalar> geometry;
  FramePolicy frame_policy = FramePolicy::Dual;
  std::vector<DofFunctional> functionals;
  std::vector<MultiIndex> columns;
  std::vector<SubSimplex> piece_faces;
  std::vector<std::size_t> piece_offsets;  ///< size pieces + 1
  std::map<std::uint32_t, std::vector<Vec<Scalar>>> frames;  ///< normal frame per face mask (l < n)

  std::size_t size() const noexcept { return functionals.size(); }

  std::size_t piece_of(std::size_t i) const {
    auto it = std::upper_bound(piece_offsets.begin(), piece_offsets.end(), i);
    return static_cast<std::size_t>(it - piece_offsets.begin()) - 1;
  }

  /// Direction vectors for the derivative of a functional: Cartesian axes at
  /// vertices, the face's normal frame elsewhere.
  std::vector<Vec<Scalar>> directions(const DofFunctional& d) const {
    std::vector<Vec<Scalar>> out;
    const int n = spec.n;
    if (d.kind == DofKind::VertexDerivative) {
      for (int c = 0; c < n; ++c) {
        Vec<Scalar> e(n, Scalar(0));
        e[c] = Scalar(1);
        for (int t = 0; t < d.derivative[c]; ++t) out.push_back(e);
      }
    } else if (d.kind == DofKind::FaceMoment && d.order > 0) {
      const auto& fr = frames.at(d.owner.mask());
      for (int j = 0; j < d.derivative.size(); ++j)
        for (int t = 0; t < d.derivative[j]; ++t) out.push_back(fr[j]);
    }
    return out;
  }
};

template <class Scalar>
std::vector<Vec<Scalar>> normal_frame_for(const SubSimplex& f, const SimplexGeometry<Scalar>& g, FramePolicy policy) {
  if (policy == FramePolicy::Dual) return dual_normal_frame(f, g).vectors;
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return canonical_normal_frame(g.face(f), f).vectors;
  } else {
    throw std::invalid_argument("canonical frames need exact geometry");
  }
}

/// Functionals of `spec` on the simplex g, grouped and ordered by the pieces
/// of the decomposition: (level, owner, s, beta, alpha_f).
template <class Scalar>
DofSet<Scalar> build_dofs(const ElementSpec& spec, const SimplexGeometry<Scalar>& g,
                          FramePolicy policy = FramePolicy::Dual) {
  if (g.dim() != spec.n || !g.full_dimensional())
    throw std::invalid_argument("element of dimension " + std::to_string(spec.n) + " needs a full-dimensional simplex in R^" +
                                std::to_string(spec.n));
  const auto dec = spec.decomposition();
  const bool shifted = !spec.smooth();
  DofSet<Scalar> set{spec, g, policy, {}, {}, {}, {}, {}};
  for (const auto& piece : dec.pieces()) {
    const SubSimplex& f = piece.face;
    const int l = f.dim();
    set.piece_faces.push_back(f);
    set.piece_offsets.push_back(set.functionals.size());
    if (l < spec.n && spec.order(l) > 0 && l > 0) set.frames.emplace(f.mask(), normal_frame_for(f, g, policy));
    const SubSimplex fs = complement(f);
    for (const auto& a : detail::ordered_piece(f, piece.nodes)) {
      DofFunctional d;
      d.owner = f;
      d.node = a;
      d.order = mass(a, fs);
      const MultiIndex af = restrict_to(a, f);
      if (l == 0) {
        d.kind = DofKind::VertexDerivative;
        d.derivative = restrict_to(a, fs);
        d.weight = af;
      } else {
        d.kind = l == spec.n ? DofKind::InteriorMoment : DofKind::FaceMoment;
        d.derivative = restrict_to(a, fs);
        d.weight = shifted ? interior_to_reduced(af) : af;
      }
      set.functionals.push_back(std::move(d));
      set.columns.push_back(a);
    }
  }
  set.piece_offsets.push_back(set.functionals.size());
  return set;
}

/// Evaluates functionals on Bernstein monomials, caching the derivative
/// traces shared by functionals with the same owner and derivative.
template <class Scalar>
class DofEvaluator {
 public:
  explicit DofEvaluator(const DofSet<Scalar>& set)
      : set_(set), moments_(2 * set.spec.k + set.spec.n + 2) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& d = set.functionals[i];
      if (groups_.empty() || !(set.functionals[groups_.back().first].owner == d.owner) ||
          set.functionals[groups_.back().first].derivative != d.derivative)
        groups_.push_back({i, i + 1});
      else
        groups_.back().second = i + 1;
    }
    for (const auto& [b, e] : groups_) {
      const auto& d = set.functionals[b];
      std::vector<Vec<Scalar>> slopes;
      for (const auto& v : set.directions(d)) slopes.push_back(slopes_along(set.geometry, v));
      group_slopes_.push_back(std::move(slopes));
    }
  }

  const std::vector<std::pair<std::size_t, std::size_t>>& groups() const noexcept { return groups_; }

  /// Entries N_i(lambda^alpha) for the rows i of group g, written to out[i - row_begin].
  void group_values(std::size_t g, const MultiIndex& alpha, std::vector<Scalar>& out) const {
    const auto [b, e] = groups_[g];
    const auto& d0 = set_.functionals[b];
    out.assign(e - b, Scalar(0));
    const auto& sl = group_slopes_[g];
    const SubSimplex fs = complement(d0.owner);
    const int off = mass(alpha, fs);
    if (off > static_cast<int>(sl.size())) return;
    std::vector<const Vec<Scalar>*> ptrs;
    for (const auto& s : sl) ptrs.push_back(&s);
    std::map<MultiIndex, Scalar> terms;
    MultiIndex a = alpha;
    detail::derivative_trace(a, Scalar(1), d0.owner, ptrs, 0, off, terms);
    if (terms.empty()) return;
    for (std::size_t i = b; i < e; ++i) {
      const auto& d = set_.functionals[i];
      Scalar v(0);
      if (d.kind == DofKind::VertexDerivative) {
        for (const auto& [eta, c] : terms) v += c;
      } else {
        for (const auto& [eta, c] : terms) v += c * moments_(eta + d.weight);
      }
      out[i - b] = std::move(v);
    }
  }

  Scalar value(std::size_t row, const MultiIndex& alpha) const {
    const std::size_t g = group_of(row);
    std::vector<Scalar> vals;
    group_values(g, alpha, vals);
    return vals[row - groups_[g].first];
  }

  std::size_t group_of(std::size_t row) const {
    auto it = std::upper_bound(groups_.begin(), groups_.end(), row,
                               [](std::size_t r, const auto& grp) { return r < grp.first; });
    return static_cast<std::size_t>(it - groups_.begin()) - 1;
  }

 private:
  const DofSet<Scalar>& set_;
  detail::MomentTable<Scalar> moments_;
  std::vector<std::pair<std::size_t, std::size_t>> groups_;
  std::vector<std::vector<Vec<Scalar>>> group_slopes_;
};

/// N_d(p) for an arbitrary polynomial of the element's degree.
template <class Scalar>
Scalar apply_dof(const DofSet<Scalar>& set, std::size_t row, const BernsteinPoly<Scalar>& p) {
  if (p.n() != set.spec.n || p.degree() != set.spec.k) throw std::invalid_argument("apply_dof: polynomial degree mismatch");
  DofEvaluator<Scalar> ev(set);
  Scalar v(0);
  p.for_each_term([&](const MultiIndex& a, const Scalar& c) { v += c * ev.value(row, a); });
  return v;
}

/// All functional values of p, in row order.
template <class Scalar>
std::vector<Scalar> apply_dofs(const DofSet<Scalar>& set, const BernsteinPoly<Scalar>& p) {
  if (p.n() != set.spec.n || p.degree() != set.spec.k) throw std::invalid_argument("apply_dofs: polynomial degree mismatch");
  DofEvaluator<Scalar> ev(set);
  std::vector<Scalar> out(set.size(), Scalar(0));
  std::vector<Scalar> vals;
  p.for_each_term([&](const MultiIndex& a, const Scalar& c) {
    for (std::size_t g = 0; g < ev.groups().size(); ++g) {
      ev.group_values(g, a, vals);
      for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] != Scalar(0)) out[ev.groups()[g].first + i] += c * vals[i];
    }
  });
  return out;
}

/// Rows [r0, r1) against the given column nodes. Columns are split across
/// `jobs` threads.
template <class Scalar>
DenseMatrix<Scalar> dof_block(const DofSet<Scalar>& set, std::size_t r0, std::size_t r1,
                              const std::vector<MultiIndex>& cols, unsigned jobs = 1) {
  DofEvaluator<Scalar> ev(set);
  DenseMatrix<Scalar> m(r1 - r0, cols.size());
  std::vector<std::size_t> groups;
  for (std::size_t g = 0; g < ev.groups().size(); ++g)
    if (ev.groups()[g].second > r0 && ev.groups()[g].first < r1) groups.push_back(g);
  auto work = [&](std::size_t c0, std::size_t c1) {
    std::vector<Scalar> vals;
    for (std::size_t c = c0; c < c1; ++c)
      for (std::size_t g : groups) {
        ev.group_values(g, cols[c], vals);
        const std::size_t b = ev.groups()[g].first;
        for (std::size_t i = 0; i < vals.size(); ++i)
          if (b + i >= r0 && b + i < r1) m(b + i - r0, c) = std::move(vals[i]);
      }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cols.size())));
  if (jobs == 1) {
    work(0, cols.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cols.size() + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
      const std::size_t c0 = t * chunk, c1 = std::min(cols.size(), c0 + chunk);
      if (c0 < c1) pool.emplace_back(work, c0, c1);
    }
    for (auto& th : pool) th.join();
  }
  return m;
}

/// M[i][j] = N_i(lambda^{columns[j]}) with the canonical row and column order.
template <class Scalar = Rational>
struct DofMatrix {
  DenseMatrix<Scalar> values;
  std::vector<std::size_t> row_piece;
  std::vector<std::size_t> col_piece;
  std::vector<SubSimplex> piece_faces;
  std::size_t dimension() const noexcept { return values.rows(); }
};

template <class Scalar>
DofMatrix<Scalar> dof_matrix(const DofSet<Scalar>& set, unsigned jobs = 1) {
  DofMatrix<Scalar> out;
  out.values = dof_block(set, 0, set.size(), set.columns, jobs);
  for (std::size_t i = 0; i < set.size(); ++i) out.row_piece.push_back(set.piece_of(i));
  out.col_piece = out.row_piece;
  out.piece_faces = set.piece_faces;
  return out;
}

template <class Scalar>
DofMatrix<Scalar> dof_matrix(const ElementSpec& spec, const SimplexGeometry<Scalar>& g,
                             FramePolicy policy = FramePolicy::Dual, unsigned jobs = 1) {
  return dof_matrix(build_dofs(spec, g, policy), jobs);
}

struct UnisolvenceReport {
  bool invertible = false;
  Rational determinant;
  std::size_t dimension = 0;
  std::size_t functionals = 0;
};

/// Exact invertibility of the DoF-basis matrix by fraction-free elimination.
inline UnisolvenceReport check_unisolvence(const ElementSpec& spec, const SimplexGeometry<Rational>& g,
                                           FramePolicy policy = FramePolicy::Dual, unsigned jobs = 1) {
  auto set = build_dofs(spec, g, policy);
  UnisolvenceReport rep;
  rep.dimension = static_cast<std::size_t>(spec.dimension());
  rep.functionals = set.size();
  if (set.size() != rep.dimension) return rep;
  auto m = dof_matrix(set, jobs);
  rep.determinant = determinant(m.values);
  rep.invertible = rep.determinant != 0;
  return rep;
}

struct BlockEntry {
  std::size_t row, col;
  std::string row_dof, col_node;
  double value;
};

struct DiagonalBlock {
  SubSimplex face;
  std::size_t rows = 0, cols = 0;
  bool invertible = false;
};

struct BlockTriangularReport {
  bool holds = true;
  std::vector<BlockEntry> violations;        ///< nonzero entries above the piece diagonal
  std::vector<BlockEntry> level_violations;  ///< nonzero entries above the s-diagonal inside a piece
  std::vector<DiagonalBlock> diagonal;       ///< non-empty pieces in order
  std::size_t max_witnesses = 20;
};

/// Checks N_i(phi_j) = 0 whenever the row's piece precedes the column's
/// piece, the same within each piece across distance levels s, and that each
/// diagonal piece block is square and invertible. Columns are grouped by
/// `columns`, which need not be the decomposition the rows came from.
template <class Scalar>
BlockTriangularReport check_block_triangular(const DofSet<Scalar>& set, const LatticeDecomposition& columns,
                                             unsigned jobs = 1) {
  BlockTriangularReport rep;
  const auto& rows = set.functionals;
  // column pieces aligned with the row pieces by face
  std::vector<std::vector<MultiIndex>> col_pieces(set.piece_faces.size());
  for (std::size_t p = 0; p < set.piece_faces.size(); ++p)
    col_pieces[p] = detail::ordered_piece(set.piece_faces[p], columns.piece(set.piece_faces[p]));
  auto record = [&](std::vector<BlockEntry>& v, std::size_t i, std::size_t j, const MultiIndex& a, const Scalar& x) {
    rep.holds = false;
    if (v.size() < rep.max_witnesses) v.push_back({i, j, rows[i].str(), a.str(), to_double(x)});
  };
  std::size_t col_base = 0;
  std::vector<std::size_t> col_offsets;
  for (const auto& cp : col_pieces) {
    col_offsets.push_back(col_base);
    col_base += cp.size();
  }
  for (std::size_t p = 0; p < set.piece_faces.size(); ++p) {
    const std::size_t r0 = set.piece_offsets[p], r1 = set.piece_offsets[p + 1];
    // later pieces: must vanish
    std::vector<MultiIndex> later;
    std::vector<std::size_t> later_idx;
    for (std::size_t q = p + 1; q < col_pieces.size(); ++q)
      for (std::size_t j = 0; j < col_pieces[q].size(); ++j) {
        later.push_back(col_pieces[q][j]);
        later_idx.push_back(col_offsets[q] + j);
      }
    if (r1 > r0 && !later.empty()) {
      auto b = dof_block(set, r0, r1, later, jobs);
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
          if (b(i, j) != Scalar(0)) record(rep.violations, r0 + i, later_idx[j], later[j], b(i, j));
    }
    // diagonal block
    DiagonalBlock db{set.piece_faces[p], r1 - r0, col_pieces[p].size(), false};
    if (db.rows == 0 && db.cols == 0) continue;
    if (db.rows == db.cols) {
      auto b = dof_block(set, r0, r1, col_pieces[p], jobs);
      const SubSimplex fs = complement(set.piece_faces[p]);
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
          if (mass(col_pieces[p][j], fs) > rows[r0 + i].order && b(i, j) != Scalar(0))
            record(rep.level_violations, r0 + i, col_offsets[p] + j, col_pieces[p][j], b(i, j));
      if constexpr (std::is_same_v<Scalar, Rational>)
        db.invertible = determinant(b) != 0;
      else
        db.invertible = float_rank(b) == b.rows();
    }
    if (!db.invertible) rep.holds = false;
    rep.diagonal.push_back(db);
  }
  return rep;
}

template <class Scalar>
BlockTriangularReport check_block_triangular(const DofSet<Scalar>& set, unsigned jobs = 1) {
  return check_block_triangular(set, set.spec.decomposition(), jobs);
}

inline BlockTriangularReport check_block_triangular(const ElementSpec& spec, const SimplexGeometry<Rational>& g,
                                                    FramePolicy policy = FramePolicy::Dual, unsigned jobs = 1) {
  return check_block_triangular(build_dofs(spec, g, policy), jobs);
}

/// Nodal basis psi_i with N_j(psi_i) = delta_ij: column i of `coefficients`
/// holds psi_i in the basis lambda^{columns[j]}.
struct DualBasis {
  RationalMatrix coefficients;
  std::vector<MultiIndex> columns;
  int n = 0, k = 0;

  BernsteinPoly<Rational> function(std::size_t i) const {
    BernsteinPoly<Rational> p(n, k);
    for (std::size_t j = 0; j < columns.size(); ++j) p.set(columns[j], coefficients(j, i));
    return p;
  }
};

inline DualBasis dual_basis(const DofSet<Rational>& set, unsigned jobs = 1) {
  auto m = dof_matrix(set, jobs);
  if (!m.values.square()) throw NotUnisolvent("DoF count differs from the dimension of P_k");
  try {
    return {inverse(m.values), set.columns, set.spec.n, set.spec.k};
  } catch (const std::domain_error&) {
    throw NotUnisolvent("DoF-basis matrix of " + set.spec.str() + " is singular");
  }
}

inline DualBasis dual_basis(const ElementSpec& spec, const SimplexGeometry<Rational>& g,
                            FramePolicy policy = FramePolicy::Dual, unsigned jobs = 1) {
  return dual_basis(build_dofs(spec, g, policy), jobs);
}

// ---------------------------------------------------------------------------
// Dimension counts

struct FormulaCount {
  std::string name;
  std::vector<Rational> per_face;  ///< by level
  Rational total;
};

struct DimensionTable {
  std::vector<std::int64_t> face_counts;  ///< |Delta_l| by level
  std::vector<std::int64_t> per_face;     ///< enumerated |S_l(f)| by level
  std::int64_t total = 0;                 ///< enumeration total
  std::vector<FormulaCount> formulas;

  bool agree() const {
    for (const auto& f : formulas)
      if (f.total != Rational(total)) return false;
    return true;
  }
};

inline std::vector<std::int64_t> simplex_face_counts(int n) {
  std::vector<std::int64_t> c;
  for (int l = 0; l <= n; ++l) c.push_back(binomial(n + 1, l + 1));
  return c;
}

/// Per-face piece sizes from enumeration and, where closed forms exist, from
/// the dimension formulas; totals weighted by `face_counts` (|Delta_l| of a
/// mesh; a single simplex by default).
inline DimensionTable dimension_table(const ElementSpec& spec, std::vector<std::int64_t> face_counts = {}) {
  const int n = spec.n, k = spec.k, m = spec.m;
  if (face_counts.empty()) face_counts = simplex_face_counts(n);
  if (static_cast<int>(face_counts.size()) != n + 1) throw std::invalid_argument("need one face count per level");
  DimensionTable t;
  t.face_counts = face_counts;
  const auto sizes = piece_sizes(spec.decomposition());
  for (int l = 0; l <= n; ++l) {
    const auto& s = sizes[l];
    if (std::adjacent_find(s.begin(), s.end(), std::not_equal_to<>()) != s.end())
      throw std::logic_error("pieces of one level differ in size");
    t.per_face.push_back(static_cast<std::int64_t>(s.front()));
    t.total += face_counts[l] * t.per_face.back();
  }
  auto finish = [&](FormulaCount f) {
    f.total = 0;
    for (int l = 0; l <= n; ++l) f.total += f.per_face[l] * Rational(face_counts[l]);
    t.formulas.push_back(std::move(f));
  };
  auto C = [](std::int64_t a, std::int64_t b) { return Rational(binomial(a, b)); };
  switch (spec.family) {
    case ElementFamily::Lagrange: {
      FormulaCount f{"lagrange", {}, 0};
      for (int l = 0; l <= n; ++l) f.per_face.push_back(C(k - 1, l));
      finish(std::move(f));
      break;
    }
    case ElementFamily::Hermite: {
      FormulaCount f{"hermite", {C(n + m, m)}, 0};
      for (int l = 1; l <= n; ++l) f.per_face.push_back(C(k - 1, l) - (l + 1) * C(m, l));
      finish(std::move(f));
      break;
    }
    default: {
      if (n != 2) break;
      const int r0 = spec.r[0];
      FormulaCount f{"smooth2d", {}, 0};
      f.per_face.push_back(C(r0 + 2, 2));
      f.per_face.push_back(Rational(m + 1) * (Rational(k - 2 * r0 - 1) + Rational(m) / 2));
      f.per_face.push_back(C(k - 3 * m - 1, 2) - 3 * C(r0 - 2 * m, 2));
      finish(std::move(f));
      if (r0 == 2 * m && k == 4 * m + 1) {
        FormulaCount bz{"bramble-zlamal", {C(2 * m + 2, 2), C(m + 1, 2), C(m, m - 2)}, 0};
        finish(std::move(bz));
      }
    }
  }
  return t;
}

/// For a triangle element: the edge and interior pieces, shifted off the
/// vertices, coincide with the index sets
///   T^1_{k - 2(r_0+1) + s} (edge moments of normal order s), and
///   { alpha in T^2_{k-3(m+1)} : alpha <= k - r_0 - m - 2 } (interior moments).
/// Returns a description of the first mismatch, or nullopt.
inline std::optional<std::string> smooth2d_index_sets_match(const ElementSpec& spec) {
  if (spec.n != 2 || !spec.smooth()) throw std::invalid_argument("needs a two-dimensional smooth element");
  const int k = spec.k, r0 = spec.r[0], m = spec.r[1];
  const auto dec = spec.decomposition();
  for (const auto& e : faces(2, 1)) {
    const SubSimplex es = complement(e);
    for (int s = 0; s <= m; ++s) {
      std::vector<MultiIndex> got;
      for (const auto& a : dec.piece(e))
        if (mass(a, es) == s) {
          auto ae = restrict_to(a, e);
          if (*std::min_element(ae.begin(), ae.end()) < r0 + 1 - s)
            return "edge " + e.str() + " node " + a.str() + " lies within r_0 of a vertex";
          got.push_back(ae.shifted(-(r0 + 1 - s)));
        }
      std::sort(got.begin(), got.end());
      const int deg = k - 2 * (r0 + 1) + s;
      auto want = deg >= 0 ? multi_indices(2, deg) : std::vector<MultiIndex>{};
      std::sort(want.begin(), want.end());
      if (got != want)
        return "edge " + e.str() + " order " + std::to_string(s) + ": " + std::to_string(got.size()) + " nodes vs " +
               std::to_string(want.size());
    }
  }
  std::vector<MultiIndex> got, want;
  for (const auto& a : dec.piece(SubSimplex::full(2))) {
    if (*std::min_element(a.begin(), a.end()) < m + 1) return "interior node " + a.str() + " lies within m of an edge";
    got.push_back(a.shifted(-(m + 1)));
  }
  const int deg = k - 3 * (m + 1);
  if (deg >= 0)
    for (const auto& a : multi_indices(3, deg))
      if (*std::max_element(a.begin(), a.end()) <= k - r0 - m - 2) want.push_back(a);
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  if (got != want)
    return "interior: " + std::to_string(got.size()) + " nodes vs " + std::to_string(want.size());
  return std::nullopt;
}

}  // namespace geodec
