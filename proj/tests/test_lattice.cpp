#include "geodec/lattice.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace geodec;

namespace {

MultiIndex mi(std::initializer_list<int> v) { return MultiIndex(std::vector<int>(v)); }
SubSimplex face(std::initializer_list<int> v, int n) { return SubSimplex(std::vector<int>(v), n); }

std::vector<int> vec(const MultiIndex& a) { return a.to_vector(); }

MultiIndex random_node(int n, int k, std::mt19937_64& rng) {
  const auto all = multi_indices(n + 1, k);
  return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

SubSimplex random_proper_face(int n, std::mt19937_64& rng) {
  const std::uint32_t full = (1u << (n + 1)) - 1u;
  std::uniform_int_distribution<std::uint32_t> d(1, full - 1);
  return SubSimplex::from_mask(d(rng), n);
}

}  // namespace

TEST(Enumerate, SmallCaseIsExhaustive) {
  auto s = enumerate_lattice(1, 2);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.contains(mi({2, 0})));
  EXPECT_TRUE(s.contains(mi({1, 1})));
  EXPECT_TRUE(s.contains(mi({0, 2})));
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_lattice(2, 4).size(), 15u);
  EXPECT_EQ(enumerate_lattice(3, 9).size(), 220u);
}

TEST(Enumerate, MatchesBruteForceOracle) {
  for (int n = 0; n <= 4; ++n)
    for (int k = 0; k <= 6; ++k) {
      auto lib = enumerate_lattice(n, k);
      auto ref = oracle::brute_lattice(n, k);
      ASSERT_EQ(lib.size(), ref.size()) << n << " " << k;
      for (const auto& v : ref) EXPECT_TRUE(lib.contains(MultiIndex(std::span<const int>(v))));
      EXPECT_EQ(static_cast<std::int64_t>(lib.size()), binomial(n + k, k));
    }
}

TEST(Enumerate, CanonicalOrderIsDescendingLexicographic) {
  const auto v = multi_indices(3, 3);
  EXPECT_EQ(v.front(), mi({3, 0, 0}));
  EXPECT_EQ(v.back(), mi({0, 0, 3}));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) EXPECT_GT(vec(v[i]), vec(v[i + 1]));
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(lattice_rank(v[i]), static_cast<std::int64_t>(i));
}

TEST(Enumerate, RejectsNegativeArguments) {
  EXPECT_THROW(enumerate_lattice(-1, 2), std::invalid_argument);
  EXPECT_THROW(enumerate_lattice(2, -1), std::invalid_argument);
}

TEST(GraphDistance, Examples) {
  EXPECT_EQ(graph_distance(mi({2, 0, 0}), mi({0, 2, 0})), 2);
  EXPECT_EQ(graph_distance(mi({3, 1, 0}), mi({3, 1, 0})), 0);
  EXPECT_EQ(graph_distance(mi({3, 1, 0}), mi({1, 2, 1})), 2);
}

TEST(GraphDistance, RejectsMismatch) {
  EXPECT_THROW(graph_distance(mi({1, 0}), mi({1, 0, 0})), std::invalid_argument);
  EXPECT_THROW(graph_distance(mi({2, 0}), mi({1, 0})), std::invalid_argument);
}

TEST(GraphDistance, EqualsBfsAndIsAMetric) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3, k = 1 + trial % 5;
    auto a = random_node(n, k, rng), b = random_node(n, k, rng), c = random_node(n, k, rng);
    EXPECT_EQ(graph_distance(a, b), oracle::bfs_distance(vec(a), vec(b)));
    EXPECT_EQ(graph_distance(a, b), graph_distance(b, a));
    EXPECT_LE(graph_distance(a, c), graph_distance(a, b) + graph_distance(b, c));
    EXPECT_EQ(graph_distance(a, a), 0);
  }
}

TEST(SubSimplexOps, Complement) {
  EXPECT_EQ(complement(face({0, 1}, 2)), face({2}, 2));
  EXPECT_EQ(complement(face({1, 3, 4}, 5)), face({0, 2, 5}, 5));
  EXPECT_TRUE(complement(SubSimplex::full(3)).is_empty());
}

TEST(SubSimplexOps, FacesInCanonicalOrder) {
  auto e = faces(2, 1);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], face({0, 1}, 2));
  EXPECT_EQ(e[1], face({0, 2}, 2));
  EXPECT_EQ(e[2], face({1, 2}, 2));
  for (int n = 1; n <= 5; ++n)
    for (int l = 0; l <= n; ++l) EXPECT_EQ(static_cast<std::int64_t>(faces(n, l).size()), binomial(n + 1, l + 1));
}

TEST(SplitExtend, Examples) {
  auto [af, afs] = split(mi({2, 1, 1}), face({0, 1}, 2));
  EXPECT_EQ(af, mi({2, 1}));
  EXPECT_EQ(afs, mi({1}));
  auto [bf, bfs] = split(mi({2, 0, 3}), face({0, 2}, 2));
  EXPECT_EQ(bfs, mi({0}));
  EXPECT_EQ(extend(mi({4, 5, 6}), face({1, 3, 4}, 5)), mi({0, 4, 0, 5, 6, 0}));
  EXPECT_EQ(extend(mi({1, 2, 3}), SubSimplex::full(2)), mi({1, 2, 3}));
  EXPECT_THROW(extend(mi({1, 2}), face({1, 3, 4}, 5)), std::invalid_argument);
}

TEST(SplitExtend, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4, k = trial % 7;
    auto a = random_node(n, k, rng);
    auto f = random_proper_face(n, rng);
    auto [af, afs] = split(a, f);
    EXPECT_EQ(extend(af, f) + extend(afs, complement(f)), a);
    EXPECT_EQ(dist_to_face(a, f), afs.degree());
  }
}

TEST(Distance, Examples) {
  EXPECT_EQ(dist_to_face(mi({2, 1, 1}), face({0, 1}, 2)), 1);
  EXPECT_EQ(dist_to_face(mi({2, 2, 0}), face({0, 1}, 2)), 0);
}

TEST(Tubes, Examples) {
  EXPECT_EQ(tube(face({0}, 2), 2, 5).size(), 6u);
  EXPECT_EQ(tube(face({1}, 2), 5, 5).size(), 21u);
  EXPECT_EQ(tube(face({1}, 2), 7, 5).size(), 21u);
  auto p = plane(face({0, 1}, 2), 1, 4);
  ASSERT_EQ(p.size(), 4u);
  for (auto a : {mi({3, 0, 1}), mi({2, 1, 1}), mi({1, 2, 1}), mi({0, 3, 1})}) EXPECT_TRUE(p.contains(a));
  for (const auto& a : plane(face({0, 2}, 3), 0, 4)) EXPECT_EQ(a[1] + a[3], 0);
}

TEST(Tubes, TubeIsUnionOfDisjointPlanes) {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= 6; ++k)
      for (int l = 0; l < n; ++l)
        for (const auto& f : faces(n, l)) {
          std::size_t total = 0;
          for (int s = 0; s <= k; ++s) {
            auto ps = plane(f, s, k);
            total += ps.size();
            for (const auto& a : ps) EXPECT_EQ(dist_to_face(a, f), s);
            EXPECT_EQ(ps.nodes(), plane(complement(f), k - s, k).nodes());
            for (int r = s; r <= k; ++r) EXPECT_TRUE(set_difference(ps, tube(f, r, k)).empty());
          }
          EXPECT_EQ(total, enumerate_lattice(n, k).size());
          for (int r = 0; r <= k; ++r) {
            std::size_t sum = 0;
            for (int s = 0; s <= r; ++s) sum += plane(f, s, k).size();
            EXPECT_EQ(tube(f, r, k).size(), sum);
          }
        }
}

// dist(alpha, f) is the graph distance from alpha to the nodes supported on f.
TEST(Tubes, DistanceIsGraphDistanceToFace) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 4, k = 1 + trial % 10;
    auto f = random_proper_face(n, rng);
    auto on_f = plane(f, 0, k);
    for (int rep = 0; rep < 5; ++rep) {
      auto a = random_node(n, k, rng);
      int best = k + 1;
      for (const auto& b : on_f) best = std::min(best, graph_distance(a, b));
      EXPECT_EQ(dist_to_face(a, f), best);
      const int r = std::uniform_int_distribution<int>(0, k)(rng);
      EXPECT_EQ(tube(f, r, k).contains(a), best <= r);
    }
  }
}

TEST(InteriorShift, IsABijection) {
  for (int l = 0; l <= 3; ++l)
    for (int k = l + 1; k <= 7; ++k) {
      std::vector<MultiIndex> interior;
      for (const auto& a : multi_indices(l + 1, k))
        if (a.all_at_least(1)) interior.push_back(a);
      auto reduced = multi_indices(l + 1, k - (l + 1));
      ASSERT_EQ(interior.size(), reduced.size());
      for (std::size_t i = 0; i < interior.size(); ++i) {
        EXPECT_EQ(interior_to_reduced(interior[i]), reduced[i]);
        EXPECT_EQ(reduced_to_interior(reduced[i]), interior[i]);
      }
    }
  EXPECT_THROW(interior_to_reduced(mi({2, 0, 1})), std::invalid_argument);
}

TEST(Binomial, OverflowIsDetected) {
  EXPECT_EQ(binomial(12, 3), 220);
  EXPECT_EQ(binomial(3, 5), 0);
  EXPECT_THROW(binomial(200, 100), std::overflow_error);
}

TEST(Tubes, MembershipByMassOnFace) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4, k = trial % 11;
    auto f = random_proper_face(n, rng);
    const int r = std::uniform_int_distribution<int>(0, k + 1)(rng);
    const auto t = tube(f, r, k);
    for (const auto& a : enumerate_lattice(n, k)) {
      const bool in = t.contains(a);
      EXPECT_EQ(in, mass(a, complement(f)) <= r);
      EXPECT_EQ(in, mass(a, f) >= k - r);
      EXPECT_EQ(!in, mass(a, f) <= k - r - 1);
    }
  }
}
