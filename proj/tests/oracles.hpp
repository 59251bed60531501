#pragma once

// Brute-force reference implementations. Nothing here calls the search code
// under test; they only use the hypergraph container for input.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <hypex/hypergraph.hpp>

namespace oracle {

using hypex::hypergraph;
using hypex::vertex;

inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  auto rec = [&](auto &self, std::size_t at, std::size_t from) -> void {
    if (at == k) {
      out.push_back(c);
      return;
    }
    for (std::size_t v = from; v + (k - at) <= n; ++v) {
      c[at] = v;
      self(self, at + 1, v + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

/// r edges form Q_k(r) iff, with membership counted per vertex of the union,
/// exactly k-r vertices lie in all edges, and each edge misses exactly one
/// vertex that all others contain and owns exactly one private vertex.
inline bool edges_form_q(const std::vector<std::vector<vertex>> &edges, std::size_t k) {
  const std::size_t r = edges.size();
  std::set<vertex> uni;
  for (const auto &e : edges)
    uni.insert(e.begin(), e.end());
  if (uni.size() != k + r)
    return false;
  std::size_t all = 0;
  std::vector<std::size_t> missing(r, 0), privates(r, 0);
  for (auto v : uni) {
    std::vector<std::size_t> in;
    for (std::size_t i = 0; i < r; ++i)
      if (std::find(edges[i].begin(), edges[i].end(), v) != edges[i].end())
        in.push_back(i);
    if (in.size() == r) {
      ++all;
    } else if (r > 2 && in.size() == r - 1) {
      std::size_t out = 0;
      while (std::find(in.begin(), in.end(), out) != in.end())
        ++out;
      ++missing[out];
    } else if (in.size() == 1) {
      ++privates[in[0]];
    } else {
      return false;
    }
  }
  if (all != k - r)
    return false;
  for (std::size_t i = 0; i < r; ++i) {
    if (r == 2 && privates[i] != 2)
      return false;
    if (r > 2 && (missing[i] != 1 || privates[i] != 1))
      return false;
  }
  return true;
}

inline bool has_q(const hypergraph &h, std::size_t r) {
  if (h.size() < r)
    return false;
  for (const auto &ids : combinations(h.size(), r)) {
    std::vector<std::vector<vertex>> edges;
    for (auto id : ids)
      edges.emplace_back(h.edge(id).begin(), h.edge(id).end());
    if (edges_form_q(edges, h.k()))
      return true;
  }
  return false;
}

inline std::size_t meet(std::span<const vertex> a, std::span<const vertex> b) {
  std::size_t c = 0;
  for (auto x : a)
    c += std::find(b.begin(), b.end(), x) != b.end();
  return c;
}

inline bool has_i(const hypergraph &h, std::size_t i) {
  for (std::size_t a = 0; a < h.size(); ++a)
    for (std::size_t b = a + 1; b < h.size(); ++b)
      if (meet(h.edge(a), h.edge(b)) == i)
        return true;
  return false;
}

// ---------------------------------------------------------------------------
// numbers

inline long long md(long long a, long long p) { return ((a % p) + p) % p; }

/// Naive over every coefficient triple and every ordered element triple.
inline bool is_k_good(const std::vector<std::uint64_t> &s, long long p, long long k) {
  for (long long m1 = -k; m1 <= k; ++m1)
    for (long long m2 = -k; m2 <= k; ++m2)
      for (long long m3 = -k; m3 <= k; ++m3) {
        if (!m1 || !m2 || !m3 || md(m1 + m2 + m3, p) != 0)
          continue;
        for (auto a : s)
          for (auto b : s)
            for (auto c : s) {
              if (a == b && b == c)
                continue;
              if (md(m1 * (long long)a + m2 * (long long)b + m3 * (long long)c, p) == 0)
                return false;
            }
      }
  return true;
}

/// Whether {a,b,c} (distinct) can appear in any violation.
inline bool bad_triple(long long a, long long b, long long c, long long p, long long k) {
  const long long v[3] = {a, b, c};
  for (long long m1 = -k; m1 <= k; ++m1)
    for (long long m2 = -k; m2 <= k; ++m2)
      for (long long m3 = -k; m3 <= k; ++m3) {
        if (!m1 || !m2 || !m3 || md(m1 + m2 + m3, p) != 0)
          continue;
        int perm[3] = {0, 1, 2};
        do {
          if (md(m1 * v[perm[0]] + m2 * v[perm[1]] + m3 * v[perm[2]], p) == 0)
            return true;
        } while (std::next_permutation(perm, perm + 3));
      }
  return false;
}

/// Largest subset of [0, ground) with no forbidden triple, over all 2^ground
/// masks; ties go to the lexicographically least sorted element list.
template <class Bad>
std::vector<std::uint64_t> max_triple_free(std::size_t ground, Bad &&bad) {
  std::vector<std::vector<std::vector<bool>>> tb(
      ground, std::vector<std::vector<bool>>(ground, std::vector<bool>(ground, false)));
  for (std::size_t a = 0; a < ground; ++a)
    for (std::size_t b = a + 1; b < ground; ++b)
      for (std::size_t c = b + 1; c < ground; ++c)
        tb[a][b][c] = bad(a, b, c);
  const std::size_t total = std::size_t{1} << ground;
  std::vector<char> ok(total, 0);
  ok[0] = 1;
  std::vector<std::uint64_t> best;
  for (std::size_t mask = 1; mask < total; ++mask) {
    const std::size_t hi = std::bit_width(mask) - 1;
    const std::size_t rest = mask & ~(std::size_t{1} << hi);
    if (!ok[rest])
      continue;
    bool good = true;
    for (std::size_t a = 0; a < hi && good; ++a)
      if (rest >> a & 1)
        for (std::size_t b = a + 1; b < hi && good; ++b)
          if ((rest >> b & 1) && tb[a][b][hi])
            good = false;
    if (!good)
      continue;
    ok[mask] = 1;
    std::vector<std::uint64_t> elems;
    for (std::size_t v = 0; v < ground; ++v)
      if (mask >> v & 1)
        elems.push_back(v);
    if (elems.size() > best.size() || (elems.size() == best.size() && elems < best))
      best = std::move(elems);
  }
  return best;
}

inline std::vector<std::uint64_t> max_good_set(long long p, long long k) {
  return max_triple_free(p, [&](std::size_t a, std::size_t b, std::size_t c) {
    return bad_triple(a, b, c, p, k);
  });
}

/// r_3 over {0..n-1}.
inline std::size_t r3(std::size_t n) {
  return max_triple_free(n, [](std::size_t a, std::size_t b, std::size_t c) {
           return b - a == c - b;
         }).size();
}

inline bool has_ap(const std::vector<std::uint64_t> &a, std::size_t k) {
  std::set<std::uint64_t> s(a.begin(), a.end());
  for (auto x : s)
    for (auto y : s)
      if (y > x) {
        std::size_t len = 2;
        auto d = y - x;
        while (len < k && s.count(x + len * d))
          ++len;
        if (len == k)
          return true;
      }
  return false;
}

/// r_k(n) over [1, n] by enumerating every subset.
inline std::size_t rk(std::size_t n, std::size_t k) {
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    const std::size_t c = std::popcount(mask);
    if (c <= best)
      continue;
    std::vector<std::uint64_t> a;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1)
        a.push_back(v + 1);
    if (!has_ap(a, k))
      best = c;
  }
  return best;
}

/// P(n, r, t) over every subset of r-sets (C(n, r) must be small).
inline std::size_t max_packing(std::size_t n, std::size_t r, std::size_t t) {
  auto sets = combinations(n, r);
  const std::size_t m = sets.size();
  std::vector<std::uint64_t> conflict(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      std::size_t c = 0;
      for (auto x : sets[a])
        c += std::count(sets[b].begin(), sets[b].end(), x);
      if (a != b && c >= t)
        conflict[a] |= std::uint64_t{1} << b;
    }
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < m && ok; ++a)
      if ((mask >> a & 1) && (conflict[a] & mask))
        ok = false;
    if (ok)
      best = std::max<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Turán numbers

/// Every placement of `pat` (all vertices used) into the complete k-graph on
/// [n], as a bit mask over the lexicographically ordered k-subsets.
inline std::vector<std::uint64_t> placements(std::size_t n, const hypergraph &pat) {
  auto sets = combinations(n, pat.k());
  std::vector<std::uint64_t> out;
  std::vector<std::size_t> used_vertices;
  std::vector<bool> touched(pat.n(), false);
  for (std::size_t i = 0; i < pat.size(); ++i)
    for (auto v : pat.edge(i))
      touched[v] = true;
  for (std::size_t v = 0; v < pat.n(); ++v)
    if (touched[v])
      used_vertices.push_back(v);
  if (used_vertices.size() > n)
    return out;
  std::vector<std::size_t> image(pat.n(), 0);
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  // every injective map = ordered selection of |used| host vertices
  auto rec = [&](auto &self, std::size_t at, std::vector<bool> &taken) -> void {
    if (at == used_vertices.size()) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < pat.size(); ++i) {
        std::vector<std::size_t> e;
        for (auto v : pat.edge(i))
          e.push_back(image[v]);
        std::sort(e.begin(), e.end());
        auto it = std::find(sets.begin(), sets.end(), e);
        mask |= std::uint64_t{1} << (it - sets.begin());
      }
      out.push_back(mask);
      return;
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (taken[w])
        continue;
      taken[w] = true;
      image[used_vertices[at]] = w;
      self(self, at + 1, taken);
      taken[w] = false;
    }
  };
  std::vector<bool> taken(n, false);
  rec(rec, 0, taken);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// ex(n, F) over all 2^C(n,k) edge sets; C(n,k) <= 22.
inline std::size_t ex(std::size_t n, std::size_t k, const std::vector<hypergraph> &family) {
  const std::size_t m = combinations(n, k).size();
  const std::size_t total = std::size_t{1} << m;
  std::vector<char> bad(total, 0);
  for (const auto &pat : family)
    for (auto mask : placements(n, pat))
      bad[mask] = 1;
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (!bad[mask])
      for (std::size_t rest = mask; rest && !bad[mask]; rest &= rest - 1)
        bad[mask] = bad[mask & ~(rest & -rest)];
    if (!bad[mask])
      best = std::max<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

// ---------------------------------------------------------------------------
// isomorphism

/// Canonical form by trying every vertex permutation.
inline std::vector<std::vector<vertex>> canonical(const hypergraph &h) {
  std::vector<vertex> perm(h.n());
  std::iota(perm.begin(), perm.end(), vertex{0});
  std::vector<std::vector<vertex>> best;
  do {
    std::vector<std::vector<vertex>> img;
    for (std::size_t i = 0; i < h.size(); ++i) {
      std::vector<vertex> e;
      for (auto v : h.edge(i))
        e.push_back(perm[v]);
      std::sort(e.begin(), e.end());
      img.push_back(std::move(e));
    }
    std::sort(img.begin(), img.end());
    if (best.empty() || img < best)
      best = std::move(img);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Isomorphism classes of e-edge k-graphs on v labelled vertices.
inline std::size_t count_classes(std::size_t k, std::size_t v, std::size_t e) {
  auto sets = combinations(v, k);
  std::set<std::vector<std::vector<vertex>>> seen;
  for (const auto &pick : combinations(sets.size(), e)) {
    std::vector<std::vector<vertex>> edges;
    for (auto id : pick)
      edges.emplace_back(sets[id].begin(), sets[id].end());
    seen.insert(canonical(hypergraph(v, k, edges)));
  }
  return seen.size();
}

inline bool isomorphic(const hypergraph &a, const hypergraph &b) {
  if (a.n() != b.n() || a.k() != b.k() || a.size() != b.size())
    return false;
  return canonical(a) == canonical(b);
}

// ---------------------------------------------------------------------------
// generators

inline hypergraph random_hypergraph(std::mt19937_64 &rng, std::size_t n, std::size_t k,
                                    std::size_t m) {
  std::set<std::vector<vertex>> edges;
  const auto cap = hypex::detail::binomial(n, k);
  m = std::min(m, cap);
  std::vector<vertex> all(n);
  std::iota(all.begin(), all.end(), vertex{0});
  while (edges.size() < m) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<vertex> e(all.begin(), all.begin() + k);
    std::sort(e.begin(), e.end());
    edges.insert(e);
  }
  return hypergraph(n, k, std::vector<std::vector<vertex>>(edges.begin(), edges.end()));
}

} // namespace oracle
