#include <random>

#include <gtest/gtest.h>

#include <hypex/hypex.hpp>

#include "oracles.hpp"

using namespace hypex;

using edges_t = std::vector<std::vector<vertex>>;

TEST(GenerateQ, CanonicalLabelling) {
  auto q = generate_q(5, 3);
  EXPECT_EQ(q.n(), 8u);
  EXPECT_EQ(q.size(), 3u);
  // A = {0,1}, B = {2,3,4}, C = {5,6,7}
  EXPECT_TRUE(q.has_edge(std::vector<vertex>{0, 1, 3, 4, 5}));
  EXPECT_TRUE(q.has_edge(std::vector<vertex>{0, 1, 2, 4, 6}));
  EXPECT_TRUE(q.has_edge(std::vector<vertex>{0, 1, 2, 3, 7}));
}

TEST(GenerateQ, MatchesTheListedFiveUniformExample) {
  // {12346, 12457, 12358}, shifted to 0-based
  hypergraph listed(8, 5, edges_t{{0, 1, 2, 3, 5}, {0, 1, 3, 4, 6}, {0, 1, 2, 4, 7}});
  EXPECT_TRUE(oracle::isomorphic(generate_q(5, 3), listed));
}

TEST(GenerateQ, TwoPetalsIsI) {
  for (std::size_t k = 2; k <= 5; ++k)
    EXPECT_TRUE(oracle::isomorphic(generate_q(k, 2), generate_i(k, k - 2))) << k;
}

TEST(GenerateQ, Sizes) {
  for (std::size_t k = 2; k <= 7; ++k)
    for (std::size_t r = 2; r <= k; ++r) {
      auto q = generate_q(k, r);
      EXPECT_EQ(q.size(), r);
      EXPECT_EQ(q.n(), k + r);
      EXPECT_TRUE(oracle::has_q(q, r));
    }
}

TEST(GenerateQ, ParameterErrors) {
  EXPECT_THROW(generate_q(3, 1), param_error);
  EXPECT_THROW(generate_q(3, 4), param_error);
  EXPECT_THROW(q_pattern(4, 0), param_error);
}

TEST(GenerateI, Examples) {
  EXPECT_EQ(generate_i(3, 2).edge_list(), (edges_t{{0, 1, 2}, {0, 1, 3}}));
  EXPECT_EQ(generate_i(3, 0).edge_list(), (edges_t{{0, 1, 2}, {3, 4, 5}}));
  auto i54 = generate_i(5, 4);
  EXPECT_EQ(i54.n(), 6u);
  EXPECT_EQ(i54.intersection_size(0, 1), 4u);
  EXPECT_THROW(generate_i(3, 3), param_error);
}

TEST(FindQ, PatternContainsItself) {
  for (std::size_t k = 2; k <= 6; ++k)
    for (std::size_t r = 2; r <= k; ++r) {
      auto h = generate_q(k, r);
      q_pattern pat(k, r);
      auto emb = find_q_copy(h, pat);
      ASSERT_TRUE(emb.has_value()) << k << "," << r;
      EXPECT_TRUE(validate_q_embedding(h, pat, *emb));
      if (r > 2) {
        std::vector<vertex> a(k - r), b(r), c(r);
        std::iota(a.begin(), a.end(), vertex{0});
        std::iota(b.begin(), b.end(), static_cast<vertex>(k - r));
        std::iota(c.begin(), c.end(), static_cast<vertex>(k));
        EXPECT_EQ(emb->a, a);
        auto sb = emb->b, sc = emb->c;
        std::sort(sb.begin(), sb.end());
        std::sort(sc.begin(), sc.end());
        EXPECT_EQ(sb, b);
        EXPECT_EQ(sc, c);
      }
    }
}

TEST(FindQ, StarHasNoFullPetalCopy) {
  for (std::size_t k = 2; k <= 5; ++k)
    for (std::size_t n = k + 1; n <= 9; ++n)
      EXPECT_FALSE(find_q_copy(centered_family(n, k, false), q_pattern(k, k))) << n << "," << k;
}

TEST(FindQ, UniformityMismatch) {
  EXPECT_THROW(find_q_copy(generate_q(4, 3), q_pattern(5, 3)), param_error);
  EXPECT_THROW(find_i_copy(generate_q(4, 3), i_pattern(5, 3)), param_error);
}

TEST(FindQ, TightCliqueWithoutQStructureIsRejected) {
  // three triples pairwise meeting in one vertex, all through vertex 0: the
  // core has size 1, not k - r = 0
  hypergraph h(7, 3, edges_t{{0, 1, 2}, {0, 3, 4}, {0, 5, 6}});
  EXPECT_FALSE(find_q_copy(h, q_pattern(3, 3)));
  EXPECT_FALSE(oracle::has_q(h, 3));
  // the last two edges meet in two vertices
  hypergraph g(5, 3, edges_t{{0, 1, 2}, {0, 3, 4}, {1, 3, 4}});
  EXPECT_EQ(find_q_copy(g, q_pattern(3, 3)).has_value(), oracle::has_q(g, 3));
}

TEST(FindQ, LexFirstCertificate) {
  auto q = generate_q(3, 3);
  // add a second copy that uses later edge ids
  auto edges = q.edge_list();
  for (auto &e : edges)
    for (auto &v : e)
      v += 6;
  auto all = q.edge_list();
  all.insert(all.end(), edges.begin(), edges.end());
  hypergraph h(12, 3, all);
  auto emb = find_q_copy(h, q_pattern(3, 3));
  ASSERT_TRUE(emb);
  EXPECT_EQ(emb->edge_ids, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(find_all_q_copies(h, q_pattern(3, 3)).size(), 2u);
}

TEST(FindQ, ThreadCountDoesNotChangeTheCertificate) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 20; ++round) {
    auto h = oracle::random_hypergraph(rng, 9, 3, 30);
    set_threads(1);
    auto a = find_q_copy(h, q_pattern(3, 3));
    set_threads(4);
    auto b = find_q_copy(h, q_pattern(3, 3));
    set_threads(0);
    EXPECT_EQ(a.has_value(), b.has_value());
    if (a && b)
      EXPECT_EQ(*a, *b);
  }
}

TEST(FindQ, AgreesWithBruteForceOnSmallHosts) {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 400; ++round) {
    std::size_t k = 2 + rng() % 4, n = k + 2 + rng() % 5;
    auto h = oracle::random_hypergraph(rng, n, k, 2 + rng() % 11);
    for (std::size_t r = 2; r <= k; ++r) {
      q_pattern pat(k, r);
      auto emb = find_q_copy(h, pat);
      ASSERT_EQ(emb.has_value(), oracle::has_q(h, r)) << to_text(h) << " r=" << r;
      if (emb)
        EXPECT_TRUE(validate_q_embedding(h, pat, *emb));
    }
  }
}

TEST(FindQ, QTwoMatchesITwoLess) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 200; ++round) {
    std::size_t k = 2 + rng() % 4, n = k + 1 + rng() % 5;
    auto h = oracle::random_hypergraph(rng, n, k, rng() % 12);
    EXPECT_EQ(find_q_copy(h, q_pattern(k, 2)).has_value(),
              find_i_copy(h, i_pattern(k, k - 2)).has_value());
  }
}

TEST(FindQ, FreenessIsMonotoneInR) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    std::size_t k = 3 + rng() % 3, n = k + 2 + rng() % 4;
    auto h = oracle::random_hypergraph(rng, n, k, rng() % 14);
    bool free_below = false;
    for (std::size_t r = 2; r <= k; ++r) {
      bool free = !find_q_copy(h, q_pattern(k, r));
      if (free_below)
        EXPECT_TRUE(free) << to_text(h) << " r=" << r;
      free_below = free_below || free;
    }
  }
}

TEST(FindQ, InvalidCertificatesAreRejected) {
  auto h = generate_q(4, 3);
  q_pattern pat(4, 3);
  auto emb = *find_q_copy(h, pat);
  auto bad = emb;
  std::swap(bad.b[0], bad.b[1]);
  EXPECT_FALSE(validate_q_embedding(h, pat, bad));
  bad = emb;
  bad.edge_ids[1] = bad.edge_ids[0];
  EXPECT_FALSE(validate_q_embedding(h, pat, bad));
}

TEST(FindI, Examples) {
  auto pair = find_i_copy(generate_i(3, 2), i_pattern(3, 2));
  ASSERT_TRUE(pair);
  EXPECT_EQ(*pair, (std::pair<std::size_t, std::size_t>{0, 1}));
  hypergraph matching(9, 3, edges_t{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
  for (std::size_t i = 1; i < 3; ++i)
    EXPECT_FALSE(find_i_copy(matching, i_pattern(3, i)));
  EXPECT_TRUE(find_i_copy(matching, i_pattern(3, 0)));
  EXPECT_TRUE(find_i_copy(generate_q(5, 3), i_pattern(5, 3)));
}

TEST(FindI, BucketedPathAgreesWithPairScan) {
  // more than 4000 edges switches to bucketing by i-subsets
  auto h = complete_hypergraph(16, 5);
  ASSERT_GT(h.size(), 4000u);
  for (std::size_t i = 1; i < 5; ++i) {
    auto big = find_i_copy(h, i_pattern(5, i));
    ASSERT_TRUE(big);
    EXPECT_EQ(h.intersection_size(big->first, big->second), i);
    // lexicographically first pair: (0, j) with the smallest such j
    std::size_t j = 1;
    while (h.intersection_size(0, j) != i)
      ++j;
    EXPECT_EQ(*big, (std::pair<std::size_t, std::size_t>{0, j}));
  }
}

TEST(DSet, SingleEdge) {
  hypergraph h(3, 3, edges_t{{0, 1, 2}});
  partition p(3, {{0}, {1}, {2}});
  EXPECT_TRUE(d_set(h, p, 0).parts.empty());
}

TEST(DSet, SwapInOnePart) {
  hypergraph h(4, 3, edges_t{{0, 1, 2}, {0, 1, 3}});
  partition p(4, {{0}, {1}, {2, 3}});
  EXPECT_EQ(d_set(h, p, 0).parts, (std::vector<std::size_t>{2}));
  auto all = d_sets(h, p);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[1].parts, (std::vector<std::size_t>{2}));
}

TEST(DSet, NonTransversalIsAStructureError) {
  hypergraph h(4, 3, edges_t{{0, 1, 2}, {0, 2, 3}});
  partition p(4, {{0}, {1}, {2, 3}});
  EXPECT_THROW(d_sets(h, p), structure_error);
  EXPECT_THROW(d_set(h, p, 1), structure_error);
}

TEST(DSet, BoundedByPetalsOnFreeHosts) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 150; ++round) {
    std::size_t k = 3 + rng() % 2, side = 2 + rng() % 2;
    std::vector<std::vector<vertex>> parts(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < side; ++j)
        parts[i].push_back(static_cast<vertex>(i * side + j));
    partition p(k * side, parts);
    std::set<std::vector<vertex>> edges;
    std::size_t want = std::min<std::size_t>(1 + rng() % 10, side == 2 ? (std::size_t{1} << k) : 10);
    while (edges.size() < want) {
      std::vector<vertex> e;
      for (std::size_t i = 0; i < k; ++i)
        e.push_back(static_cast<vertex>(i * side + rng() % side));
      edges.insert(e);
    }
    hypergraph h(k * side, k, edges_t(edges.begin(), edges.end()));
    auto ds = d_sets(h, p);
    for (std::size_t r = 2; r <= k; ++r) {
      if (find_q_copy(h, q_pattern(k, r)))
        continue;
      for (const auto &d : ds)
        EXPECT_LE(d.parts.size(), r - 1);
    }
    for (const auto &d : ds) {
      // i in D(e) iff another edge agrees with e outside part i
      for (std::size_t i = 0; i < k; ++i) {
        bool expected = false;
        for (std::size_t o = 0; o < h.size() && !expected; ++o) {
          if (o == d.edge_id)
            continue;
          bool same = true;
          for (std::size_t x = 0; x < k; ++x)
            if (x != i && h.edge(o)[x] != h.edge(d.edge_id)[x])
              same = false;
          expected = same;
        }
        bool got = std::find(d.parts.begin(), d.parts.end(), i) != d.parts.end();
        EXPECT_EQ(got, expected);
      }
    }
  }
}

TEST(Audit, PerfectMatchingPasses) {
  hypergraph h(9, 3, edges_t{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
  auto rep = shadow_clique_audit(h);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.cliques.size(), 3u);
}

TEST(Audit, TwoEdgesSharingAFaceFail) {
  for (std::size_t k = 2; k <= 5; ++k) {
    auto rep = shadow_clique_audit(generate_i(k, k - 1));
    EXPECT_FALSE(rep.unique_containment);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.multiply_covered.size(), 1u);
  }
}

TEST(Audit, LinearTriangleSpansANonEdgeClique) {
  // pairs meet once, but the three B vertices span a clique in the 2-shadow
  auto rep = shadow_clique_audit(generate_q(3, 3));
  EXPECT_TRUE(rep.unique_containment);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.non_edge_cliques, (edges_t{{0, 1, 2}}));
}

TEST(Audit, KBelowTwo) {
  EXPECT_THROW(shadow_clique_audit(hypergraph(3, 1, edges_t{{0}})), param_error);
}

TEST(Audit, FreeTransversalHostsPass) {
  // every k-partite host free of Q_k(k) and I_k(k-1) passes the audit
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    std::size_t k = 3, side = 3;
    std::set<std::vector<vertex>> edges;
    std::size_t want = 1 + rng() % 9;
    while (edges.size() < want) {
      std::vector<vertex> e;
      for (std::size_t i = 0; i < k; ++i)
        e.push_back(static_cast<vertex>(i * side + rng() % side));
      edges.insert(e);
    }
    hypergraph h(k * side, k, edges_t(edges.begin(), edges.end()));
    if (find_q_copy(h, q_pattern(k, k)) || find_i_copy(h, i_pattern(k, k - 1)))
      continue;
    ++checked;
    EXPECT_TRUE(shadow_clique_audit(h).pass) << to_text(h);
  }
  EXPECT_GT(checked, 20);
}

TEST(Certificates, JsonShape) {
  auto h = generate_q(4, 3);
  q_pattern pat(4, 3);
  auto j = to_json(*find_q_copy(h, pat), pat);
  EXPECT_EQ(j["pattern"], "Q:4:3");
  EXPECT_EQ(j["edges"].size(), 3u);
  EXPECT_EQ(j["A"].size(), 1u);
  EXPECT_EQ(j["B"].size(), 3u);
  EXPECT_EQ(j["C"].size(), 3u);
  auto ij = i_certificate_json({0, 1}, i_pattern(3, 2));
  EXPECT_EQ(ij["pattern"], "I:3:2");
  EXPECT_EQ(ij["edges"], json::array({0, 1}));
}
