// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "geodec/geodec.hpp"
#include "grids.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace geodec;
using Q = Rational;
using QV = std::vector<Rational>;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  int failures = 0;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures++ < 3) detail << " [" << what << "]";
  }
};

std::string data(const std::string& name) { return std::string(GEODEC_DATA_DIR) + "/" + name; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string spec_name(const ElementSpec& s) {
  std::ostringstream o;
  o << to_string(s.family) << "(n=" << s.n << ",k=" << s.k;
  if (s.family == ElementFamily::Hermite) o << ",m=" << s.m;
  if (s.smooth()) {
    o << ",r=";
    for (std::size_t i = 0; i < s.r.size(); ++i) o << (i ? "/" : "") << s.r[i];
  }
  o << ")";
  return o.str();
}

void partition(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cases = grids::smooth_cases();
  out.require(cases.size() >= 25, "grid too small");
  for (const auto& c : cases) {
    auto d = smooth_decomposition(c.n, c.k, c.r);
    auto rep = verify_partition(d);
    out.require(rep.ok(), "n=" + std::to_string(c.n) + " k=" + std::to_string(c.k) + " not a partition");
    out.require(static_cast<std::int64_t>(d.total_size()) == binomial(c.n + c.k, c.k), "total");
  }
  const double t = seconds_since(t0);
  out.require(t < 60, "runtime");
  out.detail << cases.size() << " parameter sets";
}

void cardinality(Outcome& out) {
  int checked = 0;
  auto check_total = [&](const ElementSpec& s) {
    out.require(static_cast<std::int64_t>(s.decomposition().total_size()) == binomial(s.n + s.k, s.k),
                spec_name(s) + " total");
    ++checked;
  };
  for (const auto& c : grids::smooth_cases()) check_total(ElementSpec::smooth(c.r, c.k));
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 6; ++k) check_total(ElementSpec::lagrange(n, k));
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m)
      for (int k = 2 * m + 1; k <= 2 * m + 4; ++k) {
        auto s = ElementSpec::hermite(n, k, m);
        check_total(s);
        auto t = dimension_table(s);
        out.require(t.agree() && t.formulas.size() == 1, spec_name(s) + " formula");
      }
  int bz = 0;
  for (int m = 0; m <= 3; ++m)
    for (int r0 = 2 * m; r0 <= 2 * m + 2; ++r0)
      for (int k = 2 * r0 + 1; k <= 2 * r0 + 3; ++k) {
        auto s = ElementSpec::smooth2d(r0, m, k);
        check_total(s);
        auto t = dimension_table(s);
        out.require(t.agree() && !t.formulas.empty(), spec_name(s) + " formula");
        for (const auto& f : t.formulas)
          if (f.name == "bramble-zlamal") ++bz;
      }
  out.require(bz == 4, "Bramble-Zlamal cases");
  auto values = [](const ElementSpec& s) { return dimension_table(s); };
  out.require(values(ElementSpec::hermite(2, 3, 1)).total == 10, "Hermite n=2 k=3 m=1 != 10");
  out.require(values(ElementSpec::smooth({2, 1, 0}, 5)).total == 21, "m=1 != 21");
  auto t55 = values(ElementSpec::smooth({4, 2, 0}, 9));
  out.require(t55.total == 55, "m=2 != 55");
  out.require(t55.per_face[0] * 3 == 45 && t55.per_face[1] * 3 == 9 && t55.per_face[2] == 1, "split 45/9/1");
  out.detail << checked << " totals; 10, 21, 55 = 45+9+1";
}

void unisolvence(Outcome& out) {
  double worst = 0;
  int n_specs = 0;
  for (const auto& s : grids::exact_specs()) {
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = check_unisolvence(s, grids::skew_simplex(s.n), FramePolicy::Dual);
    const double t = seconds_since(t0);
    worst = std::max(worst, t);
    out.require(rep.invertible && rep.functionals == rep.dimension, spec_name(s) + " singular");
    out.require(t <= 300, spec_name(s) + " runtime");
    ++n_specs;
  }
  auto smoke = check_unisolvence(ElementSpec::smooth({4, 2, 1, 0}, 9), SimplexGeometry<Q>::reference(3));
  out.require(smoke.invertible, "Zhang on the reference simplex");
  out.detail << n_specs << " elements nonsingular, slowest " << worst << " s";
}

void block_triangular(Outcome& out) {
  int n_specs = 0;
  std::size_t blocks = 0;
  for (const auto& s : grids::exact_specs()) {
    auto set = build_dofs(s, grids::skew_simplex(s.n), FramePolicy::Dual);
    auto rep = check_block_triangular(set);
    bool diag = !rep.diagonal.empty();
    for (const auto& d : rep.diagonal) diag = diag && d.invertible && d.rows == d.cols;
    out.require(rep.holds && rep.violations.empty() && rep.level_violations.empty(), spec_name(s) + " off-diagonal");
    out.require(diag, spec_name(s) + " diagonal block");
    blocks += rep.diagonal.size();
    ++n_specs;
  }
  out.detail << n_specs << " elements, " << blocks << " invertible diagonal blocks";
}

SubSimplex random_proper_face(int n, std::mt19937_64& rng) {
  const std::uint32_t full = (1u << (n + 1)) - 1u;
  return SubSimplex::from_mask(std::uniform_int_distribution<std::uint32_t>(1, full - 1)(rng), n);
}

void derivative_vanishing(Outcome& out) {
  std::mt19937_64 rng(101);
  int r_max = 0;
  for (const auto& s : grids::exact_specs())
    if (s.smooth()) r_max = std::max(r_max, s.r[0]);
  const int reach = r_max + 2;
  std::int64_t exhaustive = 0;
  for (int n = 1; n <= 3; ++n) {
    auto g = SimplexGeometry<Q>(oracle::random_simplex(n, rng));
    for (int k = 1; k <= 9; ++k)
      for (const auto& a : multi_indices(n + 1, k)) {
        auto derivs = cartesian_derivatives(BernsteinPoly<Q>::monomial(a), g, std::min(k, reach) - 1);
        for (int l = 0; l < n; ++l)
          for (const auto& f : faces(n, l)) {
            const int s = dist_to_face(a, f);
            if (s == 0 || s > reach) continue;
            for (const auto& gamma : multi_indices_up_to(n, s - 1)) {
              out.require(trace_restrict(derivs.at(gamma), f).is_zero(), a.str() + " on " + f.str());
              ++exhaustive;
            }
          }
      }
  }
  int random = 0;
  while (random < 1000) {
    const int n = 1 + random % 3;
    const int k = std::uniform_int_distribution<int>(1, 9)(rng);
    auto f = random_proper_face(n, rng);
    const auto all = multi_indices(n + 1, k);
    const auto a = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    const int s = dist_to_face(a, f);
    if (s == 0) continue;
    const auto gammas = multi_indices_up_to(n, s - 1);
    const auto gamma = gammas[std::uniform_int_distribution<std::size_t>(0, gammas.size() - 1)(rng)];
    const auto verts = oracle::random_simplex(n, rng);
    auto lib = trace_restrict(cartesian_derivative(BernsteinPoly<Q>::monomial(a), SimplexGeometry<Q>(verts), gamma), f);
    auto ref = oracle::bernstein_monomial(oracle::barycentric_polys(verts), a.to_vector());
    for (int d = 0; d < n; ++d)
      for (int j = 0; j < gamma[d]; ++j) ref = ref.partial(d);
    const auto fi = f.indices();
    std::vector<QV> dirs;
    for (std::size_t j = 1; j < fi.size(); ++j) {
      QV e(n);
      for (int d = 0; d < n; ++d) e[d] = verts[fi[j]][d] - verts[fi[0]][d];
      dirs.push_back(e);
    }
    out.require(lib.is_zero() && ref.compose(verts[fi[0]], dirs).is_zero(), "random " + a.str() + " on " + f.str());
    ++random;
  }
  out.detail << exhaustive << " exhaustive traces (dist <= " << reach << "), " << random << " random triples";
}

void duality(Outcome& out) {
  std::mt19937_64 rng(202);
  std::int64_t identities = 0;
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 2;
    const auto verts = oracle::random_simplex(n, rng);
    const SimplexGeometry<Q> g(verts);
    const auto lambda = oracle::barycentric_polys(verts);
    for (int l = 0; l < n; ++l)
      for (const auto& f : faces(n, l)) {
        const auto frame = dual_normal_frame(f, g).vectors;
        const auto fs = complement(f).indices();
        if (l == 0)
          for (std::size_t j = 0; j < fs.size(); ++j)
            for (int d = 0; d < n; ++d)
              out.require(frame[j][d] == verts[fs[j]][d] - verts[f[0]][d], "vertex frame is not the edge vectors");
        for (int s = 1; s <= 4; ++s)
          for (const auto& alpha : multi_indices(n - l, s)) {
            oracle::Poly power = oracle::Poly::constant(n, 1);
            for (std::size_t i = 0; i < fs.size(); ++i)
              for (int e = 0; e < alpha[i]; ++e) power = power * lambda[fs[i]];
            MultiIndex full(n + 1);
            for (std::size_t i = 0; i < fs.size(); ++i)
              for (int e = 0; e < alpha[i]; ++e) full = full + MultiIndex::unit(n + 1, fs[i]);
            for (const auto& beta : multi_indices(n - l, s)) {
              Q beta_factorial = 1;
              for (int b : beta)
                for (int e = 2; e <= b; ++e) beta_factorial *= e;
              const Q expected = beta == alpha ? beta_factorial : Q(0);
              oracle::Poly ref = power;
              for (int j = 0; j < beta.size(); ++j)
                for (int e = 0; e < beta[j]; ++e) ref = ref.along(frame[j]);
              const bool ok_ref = (ref + oracle::Poly::constant(n, -expected)).is_zero();
              auto lib = frame_derivative(BernsteinPoly<Q>::monomial(full), g, frame, beta);
              const bool ok_lib = lib == BernsteinPoly<Q>::monomial(MultiIndex(n + 1), expected);
              out.require(ok_ref && ok_lib, f.str() + " beta " + beta.str());
              ++identities;
            }
          }
      }
  }
  out.detail << identities << " identities on 10 simplices";
}

void conformity(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(303);
  struct Case {
    std::string mesh;
    ElementSpec spec;
  };
  std::size_t entries = 0;
  for (const auto& [file, spec] : {Case{"two_triangles.json", ElementSpec::smooth({2, 1, 0}, 5)},
                                   Case{"two_triangles.json", ElementSpec::smooth({4, 2, 0}, 9)},
                                   Case{"two_tets.json", ElementSpec::smooth({4, 2, 1, 0}, 9)}}) {
    auto mesh = load_mesh(data(file));
    auto map = global_dof_map(mesh, spec);
    std::vector<std::vector<Q>> vectors(20, std::vector<Q>(map.size()));
    for (auto& v : vectors)
      for (auto& x : v) x = oracle::random_rational(rng);
    auto rep = continuity_check(mesh, map, reconstruct(map, vectors));
    out.require(rep.ok(), spec_name(spec) + " jump");
    bool vertex_top = false, edge_top = spec.n < 3;
    for (const auto& e : rep.entries) {
      out.require(e.max_jump == 0, spec_name(spec) + " nonzero jump");
      if (e.level == 0 && e.order == spec.r[0]) vertex_top = true;
      if (spec.n == 3 && e.level == 1 && e.order == spec.r[1]) edge_top = true;
    }
    out.require(vertex_top && edge_top, spec_name(spec) + " super-smoothness orders not checked");
    entries += rep.entries.size();
  }
  const double t = seconds_since(t0);
  out.require(t <= 300, "runtime");
  out.detail << "3 meshes x 20 vectors, " << entries << " face/order checks all zero";
}

void reproduction(Outcome& out) {
  auto mesh = load_mesh(data("two_triangles.json"));
  const auto spec = ElementSpec::smooth({2, 1, 0}, 5);
  auto map = global_dof_map(mesh, spec);
  std::vector<CartesianPolynomial> targets;
  std::vector<std::vector<Q>> vectors;
  for (const auto& gamma : multi_indices_up_to(2, spec.k)) {
    targets.push_back(CartesianPolynomial::monomial(gamma));
    vectors.push_back(interpolate(mesh, map, targets.back()));
  }
  auto cells = reconstruct(map, vectors);
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const auto& got = cells[t][c];
      out.require(got == to_bernstein(targets[t], mesh.cell_geometry(c), spec.k), "monomial " + std::to_string(t));
      const auto& g = mesh.cell_geometry(c);
      for (const auto& a : multi_indices(3, 4)) {
        QV l;
        for (int v : a) l.push_back(Q(v + 1, 7));
        out.require(evaluate(got, l) == targets[t].evaluate(g.point(l)), "pointwise");
      }
    }
  out.detail << targets.size() << " monomials on " << mesh.num_cells() << " cells";
}

bool same_nodes(const LatticeDecomposition& a, const LatticeDecomposition& b) {
  if (a.pieces().size() != b.pieces().size()) return false;
  for (std::size_t i = 0; i < a.pieces().size(); ++i)
    if (a.pieces()[i].face != b.pieces()[i].face || a.pieces()[i].nodes.nodes() != b.pieces()[i].nodes.nodes())
      return false;
  return true;
}

void collapses(Outcome& out) {
  int cases = 0;
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 6; ++k, ++cases)
      out.require(same_nodes(smooth_decomposition(n, k, std::vector<int>(n + 1, 0)), lagrange_decomposition(n, k)),
                  "r=0 n=" + std::to_string(n) + " k=" + std::to_string(k));
  for (int m = 0; m <= 3; ++m)
    for (int k = 2 * m + 1; k <= 2 * m + 3; ++k, ++cases)
      out.require(same_nodes(hermite_decomposition(1, k, m), smooth_decomposition(1, k, {m, 0})),
                  "n=1 m=" + std::to_string(m) + " k=" + std::to_string(k));
  out.detail << cases << " node-for-node comparisons";
}

QV random_barycentric(int n, std::mt19937_64& rng) {
  QV l(n + 1);
  Q s = 0;
  for (auto& x : l) {
    x = Q(std::uniform_int_distribution<int>(1, 20)(rng));
    s += x;
  }
  for (auto& x : l) x /= s;
  return l;
}

void numerical(Outcome& out) {
  std::mt19937_64 rng(404);
  const double h = 1e-5;
  double fd_err = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 2;
    SimplexGeometry<Q> g(oracle::perturbed_reference_simplex(n, rng));
    BernsteinPoly<Q> p(n, 1 + t % 5);
    for (const auto& a : multi_indices(n + 1, p.degree())) p.set(a, oracle::random_rational(rng));
    QV dir(n);
    for (auto& x : dir) x = oracle::random_rational(rng, 3, 2);
    const auto l = random_barycentric(n, rng);
    const double exact = to_double(evaluate(directional_derivative(p, g, dir), l));
    const auto gd = to_double(g);
    const auto pd = to_double(p);
    const auto x = g.point(l);
    auto value_at = [&](double step) {
      std::vector<double> y(n);
      for (int d = 0; d < n; ++d) y[d] = x[d].get_d() + step * dir[d].get_d();
      return evaluate(pd, gd.barycentric(y));
    };
    fd_err = std::max(fd_err, std::abs(exact - (value_at(h) - value_at(-h)) / (2 * h)));
  }
  out.require(fd_err <= 1e-6, "finite differences");
  double q_err = 0;
  int integrals = 0;
  for (int n = 2; n <= 3; ++n) {
    SimplexGeometry<Q> g(oracle::random_simplex(n, rng));
    for (int l = 1; l <= n; ++l)
      for (const auto& f : faces(n, l)) {
        auto fg = g.face(f);
        const double measure = std::sqrt(fg.gram_determinant().get_d());
        for (int k = 0; k <= 8; ++k)
          for (const auto& a : multi_indices(l + 1, k)) {
            const double lib = integrate_face(a, fg).value();
            const double quad = oracle::duffy_monomial_integral(a.to_vector()) * measure;
            q_err = std::max(q_err, std::abs(lib - quad) / std::abs(quad));
            ++integrals;
          }
      }
  }
  out.require(q_err <= 1e-12, "quadrature");
  out.detail << "max FD error " << fd_err << " at 100 points, max quadrature rel. error " << q_err << " over "
             << integrals << " integrals";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"partition property", partition},
      {"cardinality and dimension formulas", cardinality},
      {"exact unisolvence", unisolvence},
      {"block triangularity", block_triangular},
      {"derivative vanishing", derivative_vanishing},
      {"duality identities", duality},
      {"C^m conformity on meshes", conformity},
      {"polynomial reproduction", reproduction},
      {"special-case collapses", collapses},
      {"numerical cross-checks", numerical},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " exception: " << e.what();
    }
    const double t = seconds_since(t0);
    if (!out.pass) ++failed;
    std::printf("[%s] %zu %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.str().c_str(), t);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
