#pragma once

/// \file bernstein.hpp
/// Barycentric calculus on an embedded simplex: geometry (barycentric
/// gradients, measures, sub-faces), polynomials in the Bernstein monomial
/// basis lambda^alpha, derivatives, traces, exact moments and normal frames.
///
/// Polynomials are stored densely over T^n_k in canonical lattice order and
/// are not tied to a geometry; operations that need one take it explicitly.
/// The basis is the plain monomial lambda^alpha (no multinomial weights).

#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "rational.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace geodec {

template <class Scalar>
using Vec = std::vector<Scalar>;

template <class Scalar>
Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Scalar s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class Scalar>
Scalar dot(const Vec<Scalar>& a, const Vec<Scalar>& b) {
  return dot<Scalar>(std::span<const Scalar>(a), std::span<const Scalar>(b));
}

/// Shared, immutable table of multi_indices(parts, sum). Thread safe.
inline const std::vector<MultiIndex>& lattice_nodes(int parts, int sum) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<const std::vector<MultiIndex>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{parts, sum}];
  if (!slot) slot = std::make_unique<const std::vector<MultiIndex>>(multi_indices(parts, sum));
  return *slot;
}

// ---------------------------------------------------------------------------
// Geometry

/// A simplex with l+1 affinely independent vertices in R^d (d >= l).
/// Barycentric gradients exist only when the simplex is full dimensional.
template <class Scalar = Rational>
class SimplexGeometry {
 public:
  explicit SimplexGeometry(std::vector<Vec<Scalar>> vertices) : v_(std::move(vertices)) {
    if (v_.empty()) throw std::invalid_argument("simplex needs at least one vertex");
    d_ = static_cast<int>(v_[0].size());
    for (const auto& p : v_)
      if (static_cast<int>(p.size()) != d_) throw std::invalid_argument("vertices have different dimensions");
    const int l = dim();
    if (l > d_) throw SingularGeometry("simplex with " + std::to_string(l + 1) + " vertices cannot live in R^" +
                                       std::to_string(d_));
    gram_ = compute_gram();
    if (gram_ == Scalar(0)) throw SingularGeometry("degenerate simplex: vertices are affinely dependent");
    if (l == d_ && l > 0) compute_gradients();
  }

  /// Reference simplex: v_0 = 0, v_i = e_i.
  static SimplexGeometry reference(int n) {
    std::vector<Vec<Scalar>> v(n + 1, Vec<Scalar>(n, Scalar(0)));
    for (int i = 1; i <= n; ++i) v[i][i - 1] = Scalar(1);
    return SimplexGeometry(std::move(v));
  }

  int dim() const noexcept { return static_cast<int>(v_.size()) - 1; }
  int ambient_dim() const noexcept { return d_; }
  bool full_dimensional() const noexcept { return dim() == d_; }
  const Vec<Scalar>& vertex(int i) const { return v_.at(i); }
  const std::vector<Vec<Scalar>>& vertices() const noexcept { return v_; }

  /// grad lambda_i, i = 0..n (full-dimensional simplices only).
  const std::vector<Vec<Scalar>>& gradients() const {
    if (!full_dimensional()) throw std::logic_error("barycentric gradients need a full-dimensional simplex");
    return grads_;
  }

  /// Edge vectors v_i - v_0, i = 1..l.
  std::vector<Vec<Scalar>> tangents() const {
    std::vector<Vec<Scalar>> t;
    for (int i = 1; i <= dim(); ++i) {
      Vec<Scalar> e(d_);
      for (int c = 0; c < d_; ++c) e[c] = v_[i][c] - v_[0][c];
      t.push_back(std::move(e));
    }
    return t;
  }

  /// det(E^T E) for the edge matrix E.
  const Scalar& gram_determinant() const noexcept { return gram_; }

  /// |f|^2 = det(E^T E) / (l!)^2.
  Scalar squared_measure() const {
    Scalar f(1);
    for (int i = 2; i <= dim(); ++i) f *= Scalar(i);
    return gram_ / (f * f);
  }

  Vec<Scalar> point(std::span<const Scalar> lambda) const {
    if (static_cast<int>(lambda.size()) != dim() + 1) throw std::invalid_argument("barycentric point has wrong length");
    Vec<Scalar> x(d_, Scalar(0));
    for (int i = 0; i <= dim(); ++i)
      for (int c = 0; c < d_; ++c) x[c] += lambda[i] * v_[i][c];
    return x;
  }

  /// Barycentric coordinates of x (full-dimensional simplices only).
  Vec<Scalar> barycentric(std::span<const Scalar> x) const {
    const auto& g = gradients();
    Vec<Scalar> lambda(dim() + 1, Scalar(0));
    Scalar rest(1);
    for (int i = 1; i <= dim(); ++i) {
      Scalar s(0);
      for (int c = 0; c < d_; ++c) s += g[i][c] * (x[c] - v_[0][c]);
      lambda[i] = s;
      rest -= s;
    }
    lambda[0] = rest;
    return lambda;
  }

  /// The geometric sub-simplex spanned by the vertices of f.
  SimplexGeometry face(const SubSimplex& f) const {
    if (f.ambient_dim() != dim()) throw std::invalid_argument("sub-simplex does not belong to this simplex");
    std::vector<Vec<Scalar>> v;
    for (int i : f.indices()) v.push_back(v_[i]);
    return SimplexGeometry(std::move(v));
  }

 private:
  Scalar compute_gram() const {
    const int l = dim();
    if (l == 0) return Scalar(1);
    auto t = tangents();
    DenseMatrix<Scalar> g(l, l);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) g(i, j) = dot(t[i], t[j]);
    return small_determinant(g);
  }

  static Scalar small_determinant(DenseMatrix<Scalar> a) {
    const std::size_t n = a.rows();
    Scalar det(1);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      if constexpr (std::is_floating_point_v<Scalar>) {
        for (std::size_t i = k + 1; i < n; ++i)
          if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
      } else {
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) return Scalar(0);
      }
      if (a(p, k) == Scalar(0)) return Scalar(0);
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        det = -det;
      }
      det *= a(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        Scalar f = a(i, k) / a(k, k);
        for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    }
    return det;
  }

  void compute_gradients() {
    const int n = d_;
    auto t = tangents();
    DenseMatrix<Scalar> e(n, n);  // columns are edge vectors
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) e(c, i) = t[i][c];
    auto inv = small_inverse(e);
    if (!inv) throw SingularGeometry("degenerate simplex: edge matrix is singular");
    grads_.assign(n + 1, Vec<Scalar>(n, Scalar(0)));
    for (int i = 1; i <= n; ++i)
      for (int c = 0; c < n; ++c) {
        grads_[i][c] = (*inv)(i - 1, c);
        grads_[0][c] -= grads_[i][c];
      }
  }

  std::vector<Vec<Scalar>> v_;
  int d_ = 0;
  Scalar gram_{};
  std::vector<Vec<Scalar>> grads_;
};

template <class Scalar = Rational>
std::vector<Vec<Scalar>> barycentric_gradients(const SimplexGeometry<Scalar>& g) {
  return g.gradients();
}

// ---------------------------------------------------------------------------
// Polynomials

/// p = sum_alpha c_alpha lambda^alpha over T^n_k (n+1 barycentric variables).
template <class Scalar = Rational>
class BernsteinPoly {
 public:
  BernsteinPoly() : BernsteinPoly(0, 0) {}
  BernsteinPoly(int n, int k) : n_(n), k_(k) {
    if (n < 0 || n + 1 > kMaxParts) throw std::invalid_argument("polynomial dimension out of range");
    if (k < 0) throw std::invalid_argument("polynomial degree must be non-negative");
    c_.assign(static_cast<std::size_t>(count_multi_indices(n + 1, k)), Scalar(0));
  }

  static BernsteinPoly monomial(const MultiIndex& alpha, Scalar coeff = Scalar(1)) {
    BernsteinPoly p(alpha.size() - 1, alpha.degree());
    p.add(alpha, coeff);
    return p;
  }

  /// (lambda_0 + ... + lambda_n)^k = 1 expanded with multinomial weights.
  static BernsteinPoly one(int n, int k) {
    BernsteinPoly p(n, k);
    const Integer kf = factorial(k);
    for (const auto& a : p.nodes()) {
      Integer den = 1;
      for (int v : a) den *= factorial(v);
      Rational w(kf, den);
      w.canonicalize();
      p.c_[static_cast<std::size_t>(lattice_rank(a))] = scalar_from(w);
    }
    return p;
  }

  int n() const noexcept { return n_; }
  int degree() const noexcept { return k_; }
  const std::vector<MultiIndex>& nodes() const { return lattice_nodes(n_ + 1, k_); }
  const std::vector<Scalar>& dense() const noexcept { return c_; }

  const Scalar& coeff(const MultiIndex& alpha) const { return c_.at(index_of(alpha)); }
  void set(const MultiIndex& alpha, Scalar value) { c_.at(index_of(alpha)) = std::move(value); }
  void add(const MultiIndex& alpha, const Scalar& value) { c_.at(index_of(alpha)) += value; }

  bool is_zero() const {
    for (const auto& c : c_)
      if (c != Scalar(0)) return false;
    return true;
  }

  /// Calls fn(alpha, coeff) for each non-zero coefficient in canonical order.
  template <class Fn>
  void for_each_term(Fn&& fn) const {
    const auto& nodes = this->nodes();
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != Scalar(0)) fn(nodes[i], c_[i]);
  }

  std::vector<std::pair<MultiIndex, Scalar>> terms() const {
    std::vector<std::pair<MultiIndex, Scalar>> out;
    for_each_term([&](const MultiIndex& a, const Scalar& c) { out.emplace_back(a, c); });
    return out;
  }

  BernsteinPoly& operator+=(const BernsteinPoly& o) {
    check_same_space(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  BernsteinPoly& operator-=(const BernsteinPoly& o) {
    check_same_space(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  BernsteinPoly& operator*=(const Scalar& s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  friend BernsteinPoly operator+(BernsteinPoly a, const BernsteinPoly& b) { return a += b; }
  friend BernsteinPoly operator-(BernsteinPoly a, const BernsteinPoly& b) { return a -= b; }
  friend BernsteinPoly operator*(BernsteinPoly a, const Scalar& s) { return a *= s; }

  /// lambda^beta * p, an index shift raising the degree by |beta|.
  BernsteinPoly times_monomial(const MultiIndex& beta) const {
    if (beta.size() != n_ + 1) throw std::invalid_argument("times_monomial: size mismatch");
    BernsteinPoly out(n_, k_ + beta.degree());
    for_each_term([&](const MultiIndex& a, const Scalar& c) { out.add(a + beta, c); });
    return out;
  }

  /// p * (lambda_0 + ... + lambda_n)^t: same function, degree k + t.
  BernsteinPoly elevated(int t) const {
    BernsteinPoly cur = *this;
    for (int s = 0; s < t; ++s) {
      BernsteinPoly next(n_, cur.k_ + 1);
      cur.for_each_term([&](const MultiIndex& a, const Scalar& c) {
        for (int i = 0; i <= n_; ++i) next.add(a + MultiIndex::unit(n_ + 1, i), c);
      });
      cur = std::move(next);
    }
    return cur;
  }

  friend BernsteinPoly operator*(const BernsteinPoly& p, const BernsteinPoly& q) {
    p.check_same_dim(q);
    BernsteinPoly out(p.n_, p.k_ + q.k_);
    p.for_each_term([&](const MultiIndex& a, const Scalar& ca) {
      q.for_each_term([&](const MultiIndex& b, const Scalar& cb) { out.add(a + b, ca * cb); });
    });
    return out;
  }

  bool operator==(const BernsteinPoly& o) const { return n_ == o.n_ && k_ == o.k_ && c_ == o.c_; }

 private:
  static Scalar scalar_from(const Rational& q) {
    if constexpr (std::is_same_v<Scalar, Rational>)
      return q;
    else
      return static_cast<Scalar>(q.get_d());
  }

  std::size_t index_of(const MultiIndex& alpha) const {
    if (alpha.size() != n_ + 1 || alpha.degree() != k_)
      throw std::invalid_argument("multi-index " + alpha.str() + " not in T^" + std::to_string(n_) + "_" +
                                  std::to_string(k_));
    return static_cast<std::size_t>(lattice_rank(alpha));
  }
  void check_same_dim(const BernsteinPoly& o) const {
    if (o.n_ != n_) throw std::invalid_argument("polynomials over different simplices");
  }
  void check_same_space(const BernsteinPoly& o) const {
    check_same_dim(o);
    if (o.k_ != k_) throw std::invalid_argument("polynomials of different degree");
  }

  int n_ = 0, k_ = 0;
  std::vector<Scalar> c_;
};

template <class Scalar>
Scalar evaluate(const BernsteinPoly<Scalar>& p, std::span<const Scalar> lambda) {
  const int parts = p.n() + 1;
  if (static_cast<int>(lambda.size()) != parts) throw std::invalid_argument("evaluate: barycentric point has wrong length");
  const int k = p.degree();
  // powers[i][j] = lambda_i^j
  std::vector<std::vector<Scalar>> powers(parts, std::vector<Scalar>(k + 1, Scalar(1)));
  for (int i = 0; i < parts; ++i)
    for (int j = 1; j <= k; ++j) powers[i][j] = powers[i][j - 1] * lambda[i];
  Scalar sum(0);
  p.for_each_term([&](const MultiIndex& a, const Scalar& c) {
    Scalar t = c;
    for (int i = 0; i < parts; ++i)
      if (a[i]) t *= powers[i][a[i]];
    sum += t;
  });
  return sum;
}

template <class Scalar>
Scalar evaluate(const BernsteinPoly<Scalar>& p, const Vec<Scalar>& lambda) {
  return evaluate(p, std::span<const Scalar>(lambda));
}

/// Derivative along a direction given through the slopes c_i = grad lambda_i . v:
///   D_v lambda^alpha = sum_i alpha_i c_i lambda^{alpha - e_i}.
/// A degree-0 polynomial differentiates to the zero polynomial of degree 0.
template <class Scalar>
BernsteinPoly<Scalar> derivative_by_slopes(const BernsteinPoly<Scalar>& p, std::span<const Scalar> slopes) {
  const int parts = p.n() + 1;
  if (static_cast<int>(slopes.size()) != parts) throw std::invalid_argument("derivative: slope vector has wrong length");
  if (p.degree() == 0) return BernsteinPoly<Scalar>(p.n(), 0);
  BernsteinPoly<Scalar> out(p.n(), p.degree() - 1);
  p.for_each_term([&](const MultiIndex& a, const Scalar& c) {
    for (int i = 0; i < parts; ++i) {
      if (a[i] == 0 || slopes[i] == Scalar(0)) continue;
      MultiIndex b = a;
      --b[i];
      out.add(b, c * slopes[i] * Scalar(a[i]));
    }
  });
  return out;
}

/// c_i = grad lambda_i . v for every barycentric coordinate of g.
template <class Scalar>
Vec<Scalar> slopes_along(const SimplexGeometry<Scalar>& g, const Vec<Scalar>& v) {
  const auto& grads = g.gradients();
  if (static_cast<int>(v.size()) != g.ambient_dim()) throw std::invalid_argument("direction has wrong dimension");
  Vec<Scalar> s(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) s[i] = dot(grads[i], v);
  return s;
}

template <class Scalar>
BernsteinPoly<Scalar> directional_derivative(const BernsteinPoly<Scalar>& p, const SimplexGeometry<Scalar>& g,
                                             const Vec<Scalar>& v) {
  if (p.n() != g.dim()) throw std::invalid_argument("polynomial and simplex dimensions differ");
  auto s = slopes_along(g, v);
  return derivative_by_slopes(p, std::span<const Scalar>(s));
}

/// D^gamma p with respect to Cartesian coordinates: gamma_d derivatives along e_d.
template <class Scalar>
BernsteinPoly<Scalar> cartesian_derivative(const BernsteinPoly<Scalar>& p, const SimplexGeometry<Scalar>& g,
                                           const MultiIndex& gamma) {
  if (gamma.size() != g.ambient_dim()) throw std::invalid_argument("Cartesian multi-index has wrong length");
  BernsteinPoly<Scalar> cur = p;
  for (int d = 0; d < gamma.size(); ++d) {
    Vec<Scalar> e(g.ambient_dim(), Scalar(0));
    e[d] = Scalar(1);
    auto s = slopes_along(g, e);
    for (int t = 0; t < gamma[d]; ++t) cur = derivative_by_slopes(cur, std::span<const Scalar>(s));
  }
  return cur;
}

/// d^|beta| p / d n^beta: beta_j derivatives along frame[j].
template <class Scalar>
BernsteinPoly<Scalar> frame_derivative(const BernsteinPoly<Scalar>& p, const SimplexGeometry<Scalar>& g,
                                       const std::vector<Vec<Scalar>>& frame, const MultiIndex& beta) {
  if (beta.size() != static_cast<int>(frame.size())) throw std::invalid_argument("frame multi-index has wrong length");
  BernsteinPoly<Scalar> cur = p;
  for (int j = 0; j < beta.size(); ++j) {
    auto s = slopes_along(g, frame[j]);
    for (int t = 0; t < beta[j]; ++t) cur = derivative_by_slopes(cur, std::span<const Scalar>(s));
  }
  return cur;
}

/// Restriction to the sub-simplex f: lambda_i vanishes on f for i in f*, so
/// only coefficients supported on f survive; they are re-indexed onto T^l_k(f).
template <class Scalar>
BernsteinPoly<Scalar> trace_restrict(const BernsteinPoly<Scalar>& p, const SubSimplex& f) {
  if (f.ambient_dim() != p.n()) throw std::invalid_argument("trace: sub-simplex of a different simplex");
  if (f.is_empty()) throw std::invalid_argument("trace onto the empty sub-simplex");
  BernsteinPoly<Scalar> out(f.dim(), p.degree());
  p.for_each_term([&](const MultiIndex& a, const Scalar& c) {
    if (dist_to_face(a, f) == 0) out.add(restrict_to(a, f), c);
  });
  return out;
}

/// Barycentric coordinates on T of the point of f with face coordinates mu.
template <class Scalar>
Vec<Scalar> extend_point(std::span<const Scalar> mu, const SubSimplex& f) {
  if (static_cast<int>(mu.size()) != f.size()) throw std::invalid_argument("extend_point: wrong length");
  Vec<Scalar> lambda(f.ambient_dim() + 1, Scalar(0));
  int j = 0;
  for (int i = 0; i <= f.ambient_dim(); ++i)
    if (f.contains(i)) lambda[i] = mu[j++];
  return lambda;
}

// ---------------------------------------------------------------------------
// Integration

/// (1/|f|) int_f lambda_f^alpha ds = alpha! l! / (|alpha| + l)!  with l = dim f.
template <class Scalar = Rational>
Scalar normalized_moment(const MultiIndex& alpha) {
  const int l = alpha.size() - 1;
  Integer num = factorial(l);
  for (int v : alpha) num *= factorial(v);
  Rational q(num, factorial(alpha.degree() + l));
  q.canonicalize();
  if constexpr (std::is_same_v<Scalar, Rational>)
    return q;
  else
    return static_cast<Scalar>(q.get_d());
}

/// int_f lambda_f^alpha ds = normalized * sqrt(squared_measure).
template <class Scalar = Rational>
struct FaceIntegral {
  Scalar normalized;
  Scalar squared_measure;

  double value() const { return to_double(normalized) * std::sqrt(to_double(squared_measure)); }

  /// The exact value when the measure of f is rational.
  std::optional<Scalar> exact() const {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      Rational root;
      if (!rational_sqrt(squared_measure, root)) return std::nullopt;
      return normalized * root;
    } else {
      return normalized * std::sqrt(squared_measure);
    }
  }
};

template <class Scalar>
FaceIntegral<Scalar> integrate_face(const MultiIndex& alpha_f, const SimplexGeometry<Scalar>& face) {
  if (alpha_f.size() != face.dim() + 1) throw std::invalid_argument("integrate_face: multi-index does not match face");
  return {normalized_moment<Scalar>(alpha_f), face.squared_measure()};
}

// ---------------------------------------------------------------------------
// Normal frames

enum class FrameKind { DualToGradients, CanonicalGlobal };

template <class Scalar = Rational>
struct NormalFrame {
  SubSimplex face;
  std::vector<Vec<Scalar>> vectors;
  FrameKind kind;
};

/// Normal vectors n^1..n^{n-l} of f orthogonal to its edges and dual to the
/// gradients of lambda on f*: grad lambda_{f*(i)} . n^j = delta_ij.
/// For a vertex these are the edge vectors leaving it.
template <class Scalar>
NormalFrame<Scalar> dual_normal_frame(const SubSimplex& f, const SimplexGeometry<Scalar>& g) {
  const int n = g.dim();
  if (!g.full_dimensional()) throw std::invalid_argument("dual_normal_frame needs a full-dimensional simplex");
  if (f.ambient_dim() != n) throw std::invalid_argument("sub-simplex of a different simplex");
  if (f.is_full() || f.is_empty()) throw std::invalid_argument("normal frame of the whole simplex is undefined");
  const auto fi = f.indices();
  const auto fs = complement(f).indices();
  const int l = f.dim();
  DenseMatrix<Scalar> a(n, n);
  for (int j = 1; j <= l; ++j)
    for (int c = 0; c < n; ++c) a(j - 1, c) = g.vertex(fi[j])[c] - g.vertex(fi[0])[c];
  const auto& grads = g.gradients();
  for (int i = 0; i < n - l; ++i)
    for (int c = 0; c < n; ++c) a(l + i, c) = grads[fs[i]][c];
  auto inv = small_inverse(a);
  if (!inv) throw SingularGeometry("normal frame system is singular");
  NormalFrame<Scalar> frame{f, {}, FrameKind::DualToGradients};
  for (int j = 0; j < n - l; ++j) {
    Vec<Scalar> v(n);
    for (int c = 0; c < n; ++c) v[c] = (*inv)(c, l + j);
    frame.vectors.push_back(std::move(v));
  }
  return frame;
}

/// Basis of the normal plane of a face computed from its own vertex
/// coordinates only: the null-space basis read off the reduced row echelon
/// form of the tangent matrix. The RREF depends only on the tangent space, so
/// every element containing the face produces the same frame.
inline NormalFrame<Rational> canonical_normal_frame(const SimplexGeometry<Rational>& face,
                                                    const SubSimplex& label = {}) {
  const int n = face.ambient_dim();
  const int l = face.dim();
  if (l >= n) throw std::invalid_argument("canonical_normal_frame: face must have dimension < n");
  RationalMatrix t(static_cast<std::size_t>(l), static_cast<std::size_t>(n));
  auto tang = face.tangents();
  for (int i = 0; i < l; ++i)
    for (int c = 0; c < n; ++c) t(i, c) = tang[i][c];
  auto pivots = rref(t);
  if (static_cast<int>(pivots.size()) != l) throw SingularGeometry("degenerate face");
  NormalFrame<Rational> frame{label, {}, FrameKind::CanonicalGlobal};
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec<Rational> v(n, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -t(r, free);
    frame.vectors.push_back(std::move(v));
  }
  return frame;
}

// ---------------------------------------------------------------------------
// Cartesian polynomials

/// sum_gamma c_gamma x^gamma in n Cartesian variables.
struct CartesianPolynomial {
  int n = 0;
  std::map<MultiIndex, Rational> terms;

  int degree() const {
    int d = 0;
    for (const auto& [g, c] : terms)
      if (c != 0) d = std::max(d, g.degree());
    return d;
  }

  Rational evaluate(std::span<const Rational> x) const {
    Rational s = 0;
    for (const auto& [g, c] : terms) {
      Rational t = c;
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < g[d]; ++e) t *= x[d];
      s += t;
    }
    return s;
  }

  static CartesianPolynomial monomial(const MultiIndex& gamma, Rational c = 1) {
    CartesianPolynomial p;
    p.n = gamma.size();
    p.terms[gamma] = std::move(c);
    return p;
  }
};

/// Bernstein form of degree k on the simplex g of a Cartesian polynomial.
inline BernsteinPoly<Rational> to_bernstein(const CartesianPolynomial& p, const SimplexGeometry<Rational>& g, int k) {
  const int n = g.dim();
  if (p.n != g.ambient_dim() || !g.full_dimensional()) throw std::invalid_argument("to_bernstein: dimension mismatch");
  if (p.degree() > k) throw std::invalid_argument("to_bernstein: polynomial degree exceeds k");
  // x_d = sum_i (v_i)_d lambda_i
  std::vector<BernsteinPoly<Rational>> coord;
  for (int d = 0; d < n; ++d) {
    BernsteinPoly<Rational> x(n, 1);
    for (int i = 0; i <= n; ++i) x.set(MultiIndex::unit(n + 1, i), g.vertex(i)[d]);
    coord.push_back(std::move(x));
  }
  BernsteinPoly<Rational> out(n, k);
  for (const auto& [gamma, c] : p.terms) {
    if (c == 0) continue;
    BernsteinPoly<Rational> term = BernsteinPoly<Rational>::monomial(MultiIndex(n + 1), c);
    for (int d = 0; d < n; ++d)
      for (int e = 0; e < gamma[d]; ++e) term = term * coord[d];
    out += term.elevated(k - term.degree());
  }
  return out;
}

template <class Scalar>
BernsteinPoly<double> to_double(const BernsteinPoly<Scalar>& p) {
  BernsteinPoly<double> out(p.n(), p.degree());
  p.for_each_term([&](const MultiIndex& a, const Scalar& c) { out.set(a, to_double(c)); });
  return out;
}

inline SimplexGeometry<double> to_double(const SimplexGeometry<Rational>& g) {
  std::vector<Vec<double>> v;
  for (const auto& p : g.vertices()) {
    Vec<double> q;
    for (const auto& c : p) q.push_back(c.get_d());
    v.push_back(std::move(q));
  }
  return SimplexGeometry<double>(std::move(v));
}

}  // namespace geodec
