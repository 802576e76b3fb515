#pragma once

/// \file lattice.hpp
/// Combinatorics of the simplicial lattice T^n_k: multi-indices, sub-simplices
/// of the reference index set {0..n}, distances, tubes and planes.
///
/// Everything here is pure integer arithmetic. The canonical order on lattice
/// nodes is lexicographic with larger leading entries first, so the node
/// (k,0,...,0) sitting on vertex 0 is always enumerated first.

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geodec {

/// Maximum number of entries of a multi-index (ambient dimension n <= 7).
inline constexpr int kMaxParts = 8;

/// Overflow-checked binomial coefficient; zero outside 0 <= k <= n.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is always an integer at each step
    std::int64_t g = std::gcd(result, i);
    std::int64_t num = result / g;
    std::int64_t den = i / g;
    std::int64_t factor = (n - k + i) / den;
    std::int64_t prod = 0;
    if (__builtin_mul_overflow(num, factor, &prod))
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows");
    result = prod;
  }
  return result;
}

/// Number of multi-indices with `parts` entries summing to `sum`.
inline std::int64_t count_multi_indices(int parts, int sum) {
  if (parts <= 0) return sum == 0 ? 1 : 0;
  if (sum < 0) return 0;
  return binomial(sum + parts - 1, parts - 1);
}

/// Non-negative integer vector. Lattice nodes, Cartesian derivative orders and
/// frame derivative orders all use this type; the degree is the entry sum.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(int size) : size_(size) {
    if (size < 0 || size > kMaxParts)
      throw std::invalid_argument("multi-index size " + std::to_string(size) + " outside [0, " +
                                  std::to_string(kMaxParts) + "]");
  }

  MultiIndex(std::initializer_list<int> entries)
      : MultiIndex(std::span<const int>(entries.begin(), entries.size())) {}

  explicit MultiIndex(std::span<const int> entries) : MultiIndex(static_cast<int>(entries.size())) {
    for (int i = 0; i < size_; ++i) {
      if (entries[i] < 0) throw std::invalid_argument("multi-index entries must be non-negative");
      e_[i] = entries[i];
    }
  }

  static MultiIndex unit(int size, int i, int value = 1) {
    MultiIndex m(size);
    m.e_.at(i) = value;
    return m;
  }

  int size() const noexcept { return size_; }
  int degree() const noexcept {
    int s = 0;
    for (int i = 0; i < size_; ++i) s += e_[i];
    return s;
  }

  int operator[](int i) const noexcept { return e_[i]; }
  int& operator[](int i) noexcept { return e_[i]; }

  const int* begin() const noexcept { return e_.data(); }
  const int* end() const noexcept { return e_.data() + size_; }
  std::span<const int> entries() const noexcept { return {e_.data(), static_cast<std::size_t>(size_)}; }
  std::vector<int> to_vector() const { return {begin(), end()}; }

  bool all_at_least(int c) const noexcept {
    for (int i = 0; i < size_; ++i)
      if (e_[i] < c) return false;
    return true;
  }

  MultiIndex& operator+=(const MultiIndex& o) {
    check_size(o);
    for (int i = 0; i < size_; ++i) e_[i] += o.e_[i];
    return *this;
  }
  MultiIndex& operator-=(const MultiIndex& o) {
    check_size(o);
    for (int i = 0; i < size_; ++i) {
      if (e_[i] < o.e_[i]) throw std::invalid_argument("multi-index subtraction would go negative");
      e_[i] -= o.e_[i];
    }
    return *this;
  }
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

  /// Adds `c` to every entry (the interior-shift bijection uses c = +1 / -1).
  MultiIndex shifted(int c) const {
    MultiIndex r = *this;
    for (int i = 0; i < size_; ++i) {
      if (r.e_[i] + c < 0) throw std::invalid_argument("shift would make an entry negative");
      r.e_[i] += c;
    }
    return r;
  }

  bool operator==(const MultiIndex& o) const noexcept = default;

  /// Canonical order: by size, then lexicographic with larger entries first.
  std::strong_ordering operator<=>(const MultiIndex& o) const noexcept {
    if (size_ != o.size_) return size_ <=> o.size_;
    for (int i = 0; i < size_; ++i)
      if (e_[i] != o.e_[i]) return o.e_[i] <=> e_[i];
    return std::strong_ordering::equal;
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < size_; ++i) s += (i ? "," : "") + std::to_string(e_[i]);
    return s + ")";
  }

 private:
  void check_size(const MultiIndex& o) const {
    if (o.size_ != size_) throw std::invalid_argument("multi-index size mismatch");
  }

  std::array<int, kMaxParts> e_{};
  int size_ = 0;
};

/// Factorial product alpha! = prod alpha_i! as a 64-bit integer (small orders only).
inline std::int64_t multi_factorial(const MultiIndex& a) {
  std::int64_t r = 1;
  for (int v : a)
    for (int j = 2; j <= v; ++j) r *= j;
  return r;
}

/// A non-empty sorted subset f of {0..n}; doubles as an index set and as the
/// geometric sub-simplex spanned by those vertices. The only empty value is
/// the complement of the full simplex, obtainable via complement().
class SubSimplex {
 public:
  SubSimplex() = default;

  SubSimplex(std::initializer_list<int> indices, int n)
      : SubSimplex(std::span<const int>(indices.begin(), indices.size()), n) {}

  SubSimplex(std::span<const int> indices, int n) : n_(n) {
    check_ambient(n);
    if (indices.empty()) throw std::invalid_argument("sub-simplex must have at least one vertex");
    int prev = -1;
    for (int i : indices) {
      if (i <= prev) throw std::invalid_argument("sub-simplex indices must be strictly increasing");
      if (i > n) throw std::invalid_argument("sub-simplex index " + std::to_string(i) + " exceeds n = " + std::to_string(n));
      mask_ |= 1u << i;
      prev = i;
    }
  }

  static SubSimplex from_mask(std::uint32_t mask, int n) {
    check_ambient(n);
    if (mask >> (n + 1)) throw std::invalid_argument("mask has bits beyond vertex n");
    SubSimplex f;
    f.mask_ = mask;
    f.n_ = n;
    return f;
  }
  static SubSimplex full(int n) { return from_mask((1u << (n + 1)) - 1u, n); }
  static SubSimplex vertex(int i, int n) { return from_mask(1u << i, n); }

  bool is_empty() const noexcept { return mask_ == 0; }
  bool is_full() const noexcept { return mask_ == (1u << (n_ + 1)) - 1u; }
  int ambient_dim() const noexcept { return n_; }
  int size() const noexcept { return std::popcount(mask_); }
  /// Geometric dimension; -1 for the empty complement of T.
  int dim() const noexcept { return size() - 1; }
  std::uint32_t mask() const noexcept { return mask_; }
  bool contains(int i) const noexcept { return (mask_ >> i) & 1u; }
  bool contains(const SubSimplex& e) const noexcept { return (e.mask_ & ~mask_) == 0; }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(size());
    for (int i = 0; i <= n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }
  /// j-th smallest vertex label.
  int operator[](int j) const {
    std::uint32_t m = mask_;
    for (int t = 0; t < j; ++t) m &= m - 1;
    if (m == 0) throw std::out_of_range("sub-simplex position out of range");
    return std::countr_zero(m);
  }
  /// Position of vertex label i inside f, or -1.
  int position_of(int i) const noexcept {
    if (!contains(i)) return -1;
    return std::popcount(mask_ & ((1u << i) - 1u));
  }

  bool operator==(const SubSimplex& o) const noexcept = default;

  /// Canonical order: by dimension, then lexicographic on the sorted labels.
  std::strong_ordering operator<=>(const SubSimplex& o) const {
    if (n_ != o.n_) return n_ <=> o.n_;
    if (size() != o.size()) return size() <=> o.size();
    auto a = indices(), b = o.indices();
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      s += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
    return s + "}";
  }

 private:
  static void check_ambient(int n) {
    if (n < 0 || n + 1 > kMaxParts)
      throw std::invalid_argument("ambient dimension " + std::to_string(n) + " outside [0, " +
                                  std::to_string(kMaxParts - 1) + "]");
  }

  std::uint32_t mask_ = 0;
  int n_ = 0;
};

/// f* = {0..n} \ f. The complement of T itself is the empty SubSimplex.
inline SubSimplex complement(const SubSimplex& f) {
  std::uint32_t all = (1u << (f.ambient_dim() + 1)) - 1u;
  return SubSimplex::from_mask(all & ~f.mask(), f.ambient_dim());
}

/// Delta_l(T) in canonical order.
inline std::vector<SubSimplex> faces(int n, int l) {
  std::vector<SubSimplex> out;
  if (l < 0 || l > n) return out;
  // enumerate (l+1)-subsets of {0..n} in lexicographic order
  std::vector<int> idx(l + 1);
  for (int i = 0; i <= l; ++i) idx[i] = i;
  while (true) {
    out.emplace_back(std::span<const int>(idx), n);
    int i = l;
    while (i >= 0 && idx[i] == n - l + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j <= l; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Delta_i(f): the i-dimensional sub-simplices of f, canonical order.
inline std::vector<SubSimplex> sub_faces(const SubSimplex& f, int i) {
  std::vector<SubSimplex> out;
  for (const auto& e : faces(f.ambient_dim(), i))
    if (f.contains(e)) out.push_back(e);
  return out;
}

/// |alpha_f| = sum of the entries of alpha on the labels of f.
inline int mass(const MultiIndex& alpha, const SubSimplex& f) {
  int s = 0;
  for (int i = 0; i < alpha.size(); ++i)
    if (f.contains(i)) s += alpha[i];
  return s;
}

inline void check_compatible(const MultiIndex& alpha, const SubSimplex& f) {
  if (alpha.size() != f.ambient_dim() + 1)
    throw std::invalid_argument("multi-index of size " + std::to_string(alpha.size()) +
                                " incompatible with sub-simplex of T^" + std::to_string(f.ambient_dim()));
}

/// alpha_f: the components of alpha on f, as a multi-index on f.
inline MultiIndex restrict_to(const MultiIndex& alpha, const SubSimplex& f) {
  check_compatible(alpha, f);
  MultiIndex out(f.size());
  int j = 0;
  for (int i = 0; i < alpha.size(); ++i)
    if (f.contains(i)) out[j++] = alpha[i];
  return out;
}

/// alpha = E(alpha_f) + E(alpha_{f*}).
inline std::pair<MultiIndex, MultiIndex> split(const MultiIndex& alpha, const SubSimplex& f) {
  return {restrict_to(alpha, f), restrict_to(alpha, complement(f))};
}

/// Extension operator E: puts the entries of a_f on the labels of f, zero elsewhere.
inline MultiIndex extend(const MultiIndex& a_f, const SubSimplex& f) {
  if (a_f.size() != f.size())
    throw std::invalid_argument("extend: " + std::to_string(a_f.size()) + " components for a sub-simplex with " +
                                std::to_string(f.size()) + " vertices");
  MultiIndex out(f.ambient_dim() + 1);
  int j = 0;
  for (int i = 0; i <= f.ambient_dim(); ++i)
    if (f.contains(i)) out[i] = a_f[j++];
  return out;
}

/// dist(alpha, f) = |alpha_{f*}|.
inline int dist_to_face(const MultiIndex& alpha, const SubSimplex& f) {
  check_compatible(alpha, f);
  return alpha.degree() - mass(alpha, f);
}

/// Graph distance on the lattice: half the L1 distance.
inline int graph_distance(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("graph_distance: nodes live in different dimensions");
  if (a.degree() != b.degree()) throw std::invalid_argument("graph_distance: nodes have different degrees");
  int s = 0;
  for (int i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / 2;
}

/// Ordered, deduplicated set of lattice nodes.
class LatticeSet {
 public:
  LatticeSet() = default;
  explicit LatticeSet(std::vector<MultiIndex> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  auto begin() const noexcept { return nodes_.begin(); }
  auto end() const noexcept { return nodes_.end(); }
  const MultiIndex& operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<MultiIndex>& nodes() const noexcept { return nodes_; }

  bool contains(const MultiIndex& a) const { return std::binary_search(nodes_.begin(), nodes_.end(), a); }

  bool operator==(const LatticeSet&) const = default;

  friend LatticeSet set_union(const LatticeSet& a, const LatticeSet& b) {
    LatticeSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.nodes_));
    return r;
  }
  friend LatticeSet set_difference(const LatticeSet& a, const LatticeSet& b) {
    LatticeSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.nodes_));
    return r;
  }
  friend LatticeSet set_intersection(const LatticeSet& a, const LatticeSet& b) {
    LatticeSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.nodes_));
    return r;
  }

 private:
  std::vector<MultiIndex> nodes_;
};

namespace detail {
inline void enumerate_rec(MultiIndex& cur, int pos, int remaining, std::vector<MultiIndex>& out) {
  if (pos == cur.size() - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    enumerate_rec(cur, pos + 1, remaining - v, out);
  }
  cur[pos] = 0;
}
}  // namespace detail

/// All multi-indices with `parts` entries summing to `sum`, canonical order.
inline std::vector<MultiIndex> multi_indices(int parts, int sum) {
  if (parts < 0 || sum < 0) throw std::invalid_argument("multi_indices: negative argument");
  std::vector<MultiIndex> out;
  if (parts == 0) {
    if (sum == 0) out.emplace_back(0);
    return out;
  }
  out.reserve(static_cast<std::size_t>(count_multi_indices(parts, sum)));
  MultiIndex cur(parts);
  detail::enumerate_rec(cur, 0, sum, out);
  return out;
}

/// All multi-indices with `parts` entries of degree <= max_sum, by degree then canonical order.
inline std::vector<MultiIndex> multi_indices_up_to(int parts, int max_sum) {
  std::vector<MultiIndex> out;
  for (int s = 0; s <= max_sum; ++s) {
    auto level = multi_indices(parts, s);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// T^n_k, |T^n_k| = binomial(n+k, k).
inline LatticeSet enumerate_lattice(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("enumerate_lattice: n and k must be non-negative");
  if (n + 1 > kMaxParts) throw std::invalid_argument("enumerate_lattice: n too large");
  return LatticeSet(multi_indices(n + 1, k));
}

/// Position of `a` in multi_indices(a.size(), a.degree()).
inline std::int64_t lattice_rank(const MultiIndex& a) {
  std::int64_t rank = 0;
  int remaining = a.degree();
  for (int i = 0; i + 1 < a.size(); ++i) {
    int rest_parts = a.size() - i - 1;
    // nodes whose entry i is larger than a[i] come first
    for (int v = remaining; v > a[i]; --v) rank += count_multi_indices(rest_parts, remaining - v);
    remaining -= a[i];
  }
  return rank;
}

/// D(f, r): nodes of T^n_k within distance r of f.
inline LatticeSet tube(const SubSimplex& f, int r, int k) {
  if (r < 0) throw std::invalid_argument("tube radius must be non-negative");
  std::vector<MultiIndex> out;
  for (const auto& a : multi_indices(f.ambient_dim() + 1, k))
    if (dist_to_face(a, f) <= r) out.push_back(a);
  return LatticeSet(std::move(out));
}

/// L(f, s): nodes of T^n_k at distance exactly s from f.
inline LatticeSet plane(const SubSimplex& f, int s, int k) {
  if (s < 0 || s > k) throw std::invalid_argument("plane offset must lie in [0, k]");
  std::vector<MultiIndex> out;
  for (const auto& a : multi_indices(f.ambient_dim() + 1, k))
    if (dist_to_face(a, f) == s) out.push_back(a);
  return LatticeSet(std::move(out));
}

/// T^l_{k,1}(f) -> T^l_{k-(l+1)}(f), alpha_f -> alpha_f - 1.
inline MultiIndex interior_to_reduced(const MultiIndex& alpha_f) {
  if (!alpha_f.all_at_least(1)) throw std::invalid_argument("node is not interior to its sub-simplex");
  return alpha_f.shifted(-1);
}

/// Inverse of interior_to_reduced.
inline MultiIndex reduced_to_interior(const MultiIndex& alpha_f) { return alpha_f.shifted(1); }

}  // namespace geodec
