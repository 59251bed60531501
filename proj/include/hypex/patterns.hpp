#pragma once

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "detail/combinatorics.hpp"
#include "detail/parallel.hpp"
#include "error.hpp"
#include "hypergraph.hpp"

namespace hypex {

/// Q_k(r): the r edges A ∪ (B \ {b_i}) ∪ {c_i} over disjoint A, B, C with
/// |A| = k - r and |B| = |C| = r.
struct q_pattern {
  std::size_t k = 0;
  std::size_t r = 0;

  q_pattern(std::size_t k_, std::size_t r_) : k(k_), r(r_) {
    if (r < 2 || r > k)
      throw param_error("Q pattern needs 2 <= r <= k (got k=" + std::to_string(k) +
                        ", r=" + std::to_string(r) + ")");
  }

  std::string name() const { return "Q:" + std::to_string(k) + ":" + std::to_string(r); }
};

/// I_k(i): two k-edges sharing exactly i vertices.
struct i_pattern {
  std::size_t k = 0;
  std::size_t i = 0;

  i_pattern(std::size_t k_, std::size_t i_) : k(k_), i(i_) {
    if (k == 0 || i >= k)
      throw param_error("I pattern needs 0 <= i < k (got k=" + std::to_string(k) +
                        ", i=" + std::to_string(i) + ")");
  }

  std::string name() const { return "I:" + std::to_string(k) + ":" + std::to_string(i); }
};

/// A certified copy of Q_k(r): edge_ids[i] is A ∪ (B \ {b[i]}) ∪ {c[i]}.
struct q_embedding {
  std::vector<std::size_t> edge_ids;
  std::vector<vertex> a;
  std::vector<vertex> b;
  std::vector<vertex> c;

  friend bool operator==(const q_embedding &, const q_embedding &) = default;
};

inline hypergraph generate_q(std::size_t k, std::size_t r) {
  q_pattern pat(k, r);
  std::vector<std::vector<vertex>> edges;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<vertex> e;
    for (std::size_t a = 0; a < k - r; ++a)
      e.push_back(static_cast<vertex>(a));
    for (std::size_t b = 0; b < r; ++b)
      if (b != i)
        e.push_back(static_cast<vertex>(k - r + b));
    e.push_back(static_cast<vertex>(k + i));
    edges.push_back(std::move(e));
  }
  return hypergraph(k + r, k, edges).with_meta({{"pattern", pat.name()}});
}

inline hypergraph generate_i(std::size_t k, std::size_t i) {
  i_pattern pat(k, i);
  std::vector<vertex> first(k), second;
  std::iota(first.begin(), first.end(), vertex{0});
  for (std::size_t v = 0; v < i; ++v)
    second.push_back(static_cast<vertex>(v));
  for (std::size_t v = k; v < 2 * k - i; ++v)
    second.push_back(static_cast<vertex>(v));
  return hypergraph(2 * k - i, k, {first, second}).with_meta({{"pattern", pat.name()}});
}

namespace detail {

struct q_parts {
  std::vector<vertex> a, b, c;
};

/// Splits r distinct k-edges (sorted vertex lists) into the A/B/C structure
/// of Q_k(r), or reports that they do not form a copy. Vertices outside the
/// common core are classified by how many of the r edges cover them: r - 1
/// for B, 1 for C. For r = 2 both non-core vertices of an edge are covered
/// once, so the pair is split by vertex order instead.
inline std::optional<q_parts> decompose_q(const std::vector<std::span<const vertex>> &edges,
                                          std::size_t k) {
  const std::size_t r = edges.size();
  if (r < 2 || r > k)
    return std::nullopt;
  std::vector<vertex> core(edges[0].begin(), edges[0].end()), tmp;
  for (std::size_t i = 1; i < r; ++i) {
    tmp.clear();
    std::set_intersection(core.begin(), core.end(), edges[i].begin(), edges[i].end(),
                          std::back_inserter(tmp));
    core.swap(tmp);
  }
  if (core.size() != k - r)
    return std::nullopt;

  std::vector<std::vector<vertex>> rest(r);
  for (std::size_t i = 0; i < r; ++i)
    std::set_difference(edges[i].begin(), edges[i].end(), core.begin(), core.end(),
                        std::back_inserter(rest[i]));

  q_parts out;
  out.a = core;
  if (r == 2) {
    // e_1 \ A = {b_2, c_1}, e_2 \ A = {b_1, c_2}
    if (rest[0].size() != 2 || rest[1].size() != 2)
      return std::nullopt;
    if (std::find_first_of(rest[0].begin(), rest[0].end(), rest[1].begin(), rest[1].end()) !=
        rest[0].end())
      return std::nullopt;
    out.b = {rest[1][0], rest[0][0]};
    out.c = {rest[0][1], rest[1][1]};
    return out;
  }

  std::vector<vertex> all;
  for (auto &x : rest)
    all.insert(all.end(), x.begin(), x.end());
  std::sort(all.begin(), all.end());
  std::vector<vertex> bset, cset;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i])
      ++j;
    std::size_t cover = j - i;
    if (cover == r - 1)
      bset.push_back(all[i]);
    else if (cover == 1)
      cset.push_back(all[i]);
    else
      return std::nullopt;
    i = j;
  }
  if (bset.size() != r || cset.size() != r)
    return std::nullopt;
  out.b.resize(r);
  out.c.resize(r);
  std::vector<char> b_used(r, 0), c_used(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t missing = 0, present_c = 0, in_b = 0;
    for (std::size_t t = 0; t < r; ++t) {
      bool has_b = std::binary_search(rest[i].begin(), rest[i].end(), bset[t]);
      if (has_b) {
        ++in_b;
      } else {
        ++missing;
        out.b[i] = bset[t];
        if (b_used[t]++)
          return std::nullopt;
      }
      if (std::binary_search(rest[i].begin(), rest[i].end(), cset[t])) {
        ++present_c;
        out.c[i] = cset[t];
        if (c_used[t]++)
          return std::nullopt;
      }
    }
    if (missing != 1 || present_c != 1 || in_b != r - 1 || rest[i].size() != r)
      return std::nullopt;
  }
  return out;
}

/// Forward tight-pair adjacency: for each edge e, the edges f > e with
/// |e ∩ f| = k - 2. Pairs are found by bucketing every (k-2)-subset by hash;
/// a tight pair shares exactly one such subset, and every candidate is
/// re-checked by popcount so hash collisions only cost time.
inline std::vector<std::vector<std::uint32_t>> tight_pairs(const hypergraph &h) {
  const std::size_t m = h.size(), k = h.k();
  std::vector<std::vector<std::uint32_t>> adj(m);
  if (k < 2 || m < 2)
    return adj;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keys;
  keys.reserve(m * binomial(k, 2));
  for (std::size_t i = 0; i < m; ++i) {
    auto e = h.edge(i);
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = x + 1; y < k; ++y) {
        std::uint64_t hash = 0x9e3779b97f4a7c15ull;
        for (std::size_t t = 0; t < k; ++t) {
          if (t == x || t == y)
            continue;
          hash ^= e[t] + 0x9e3779b97f4a7c15ull + (hash << 6) + (hash >> 2);
          hash *= 0xff51afd7ed558ccdull;
        }
        keys.emplace_back(hash, static_cast<std::uint32_t>(i));
      }
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j].first == keys[i].first)
      ++j;
    for (std::size_t a = i; a < j; ++a)
      for (std::size_t b = a + 1; b < j; ++b) {
        auto e = keys[a].second, f = keys[b].second;
        if (e != f && h.intersection_size(e, f) == k - 2)
          adj[std::min(e, f)].push_back(std::max(e, f));
      }
    i = j;
  }
  for (auto &row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

/// Enumerates r-cliques of the tight-pair graph whose first edge lies in
/// [lo, hi), in lexicographic order of edge-id tuples, keeping the running
/// common intersection at least k - r. `visit` returns true to stop.
template <class Visit>
bool tight_cliques(const hypergraph &h, const std::vector<std::vector<std::uint32_t>> &adj,
                   std::size_t r, std::size_t lo, std::size_t hi, Visit &&visit) {
  const std::size_t k = h.k(), words = h.words();
  const std::size_t core = k - r;
  std::vector<std::size_t> clique;
  std::vector<std::vector<std::uint64_t>> common(r, std::vector<std::uint64_t>(words));
  std::vector<std::vector<std::uint32_t>> cands(r);

  auto popcount = [&](const std::vector<std::uint64_t> &bits) {
    std::size_t c = 0;
    for (auto w : bits)
      c += std::popcount(w);
    return c;
  };

  auto extend = [&](auto &self, std::size_t depth) -> bool {
    if (depth == r)
      return popcount(common[depth - 1]) == core && visit(clique);
    for (auto next : cands[depth - 1]) {
      auto bits = h.edge_bits(next);
      for (std::size_t w = 0; w < words; ++w)
        common[depth][w] = common[depth - 1][w] & bits[w];
      if (popcount(common[depth]) < core)
        continue;
      if (depth + 1 < r) {
        cands[depth].clear();
        const auto &row = adj[next];
        std::set_intersection(cands[depth - 1].begin(), cands[depth - 1].end(), row.begin(),
                              row.end(), std::back_inserter(cands[depth]));
        if (cands[depth].size() + depth + 1 < r)
          continue;
      }
      clique.push_back(next);
      bool stop = self(self, depth + 1);
      clique.pop_back();
      if (stop)
        return true;
    }
    return false;
  };

  for (std::size_t first = lo; first < hi; ++first) {
    if (adj[first].size() + 1 < r)
      continue;
    auto bits = h.edge_bits(first);
    std::copy(bits.begin(), bits.end(), common[0].begin());
    cands[0] = adj[first];
    clique.assign(1, first);
    if (extend(extend, 1))
      return true;
  }
  return false;
}

inline std::optional<q_embedding> embedding_from(const hypergraph &h,
                                                 const std::vector<std::size_t> &ids) {
  std::vector<std::span<const vertex>> edges;
  for (auto id : ids)
    edges.push_back(h.edge(id));
  auto parts = decompose_q(edges, h.k());
  if (!parts)
    return std::nullopt;
  return q_embedding{ids, std::move(parts->a), std::move(parts->b), std::move(parts->c)};
}

} // namespace detail

/// Re-checks a Q certificate against the host, independently of the search.
inline bool validate_q_embedding(const hypergraph &h, const q_pattern &pat,
                                 const q_embedding &emb) {
  const std::size_t k = pat.k, r = pat.r;
  if (h.k() != k || emb.edge_ids.size() != r || emb.a.size() != k - r || emb.b.size() != r ||
      emb.c.size() != r)
    return false;
  std::vector<vertex> all;
  all.insert(all.end(), emb.a.begin(), emb.a.end());
  all.insert(all.end(), emb.b.begin(), emb.b.end());
  all.insert(all.end(), emb.c.begin(), emb.c.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    return false;
  auto ids = emb.edge_ids;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    return false;
  for (std::size_t i = 0; i < r; ++i) {
    if (emb.edge_ids[i] >= h.size())
      return false;
    std::vector<vertex> expect(emb.a.begin(), emb.a.end());
    for (std::size_t t = 0; t < r; ++t)
      if (t != i)
        expect.push_back(emb.b[t]);
    expect.push_back(emb.c[i]);
    std::sort(expect.begin(), expect.end());
    auto e = h.edge(emb.edge_ids[i]);
    if (!std::equal(expect.begin(), expect.end(), e.begin(), e.end()))
      return false;
  }
  return true;
}

/// The lexicographically first copy of Q_k(r) (by edge-id tuple), if any.
inline std::optional<q_embedding> find_q_copy(const hypergraph &h, const q_pattern &pat) {
  if (h.k() != pat.k)
    throw param_error("find_q_copy: host is " + std::to_string(h.k()) + "-uniform, pattern is " +
                      pat.name());
  if (h.size() < pat.r)
    return std::nullopt;
  const auto adj = detail::tight_pairs(h);
  const std::size_t m = h.size();
  const std::size_t chunks = threads() > 1 ? std::min<std::size_t>(m, 64) : 1;
  std::vector<std::optional<q_embedding>> found(chunks);
  std::atomic<std::size_t> best_chunk{chunks};
  detail::parallel_chunks(m, chunks, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    if (c > best_chunk.load())
      return;
    detail::tight_cliques(h, adj, pat.r, lo, hi, [&](const std::vector<std::size_t> &ids) {
      if (c > best_chunk.load(std::memory_order_relaxed))
        return true;
      if (auto emb = detail::embedding_from(h, ids)) {
        found[c] = std::move(emb);
        std::size_t cur = best_chunk.load();
        while (c < cur && !best_chunk.compare_exchange_weak(cur, c)) {
        }
        return true;
      }
      return false;
    });
  });
  for (auto &f : found)
    if (f)
      return f;
  return std::nullopt;
}

/// Every copy of Q_k(r) as an r-subset of edges. Exhaustive; meant for
/// small hosts.
inline std::vector<q_embedding> find_all_q_copies(const hypergraph &h, const q_pattern &pat) {
  if (h.k() != pat.k)
    throw param_error("find_all_q_copies: uniformity mismatch");
  std::vector<q_embedding> out;
  if (h.size() < pat.r)
    return out;
  const auto adj = detail::tight_pairs(h);
  detail::tight_cliques(h, adj, pat.r, 0, h.size(),
                        [&](const std::vector<std::size_t> &ids) {
                          if (auto emb = detail::embedding_from(h, ids))
                            out.push_back(std::move(*emb));
                          return false;
                        });
  return out;
}

/// The lexicographically first pair of edges meeting in exactly i vertices.
inline std::optional<std::pair<std::size_t, std::size_t>> find_i_copy(const hypergraph &h,
                                                                      const i_pattern &pat) {
  if (h.k() != pat.k)
    throw param_error("find_i_copy: host is " + std::to_string(h.k()) + "-uniform, pattern is " +
                      pat.name());
  const std::size_t m = h.size(), k = h.k(), i = pat.i;
  if (m < 2)
    return std::nullopt;
  if (i == 0 || m <= 4000) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        if (h.intersection_size(a, b) == i)
          return std::pair{a, b};
    return std::nullopt;
  }
  // Two edges meeting in exactly i vertices share an i-subset: bucket by it.
  std::vector<std::pair<std::vector<vertex>, std::uint32_t>> rows;
  rows.reserve(m * detail::binomial(k, i));
  for (std::size_t e = 0; e < m; ++e)
    detail::for_each_subset_of(h.edge(e), i, [&](std::span<const vertex> s) {
      rows.emplace_back(std::vector<vertex>(s.begin(), s.end()), static_cast<std::uint32_t>(e));
    });
  std::sort(rows.begin(), rows.end());
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t x = 0; x < rows.size();) {
    std::size_t y = x;
    while (y < rows.size() && rows[y].first == rows[x].first)
      ++y;
    for (std::size_t a = x; a < y; ++a) {
      if (best && rows[a].second > best->first)
        break;
      for (std::size_t b = a + 1; b < y; ++b) {
        std::pair<std::size_t, std::size_t> cand{rows[a].second, rows[b].second};
        if (best && cand >= *best)
          break;
        if (h.intersection_size(cand.first, cand.second) == i)
          best = cand;
      }
    }
    x = y;
  }
  return best;
}

/// D(e): the parts P_i such that another edge differs from e only inside P_i.
struct d_set_result {
  std::size_t edge_id = 0;
  std::vector<std::size_t> parts;
};

namespace detail {
inline void require_transversal(const hypergraph &h, const partition &p) {
  if (p.n() != h.n() || p.count() != h.k())
    throw structure_error("d_set: partition must split the host's vertices into k parts");
  for (std::size_t e = 0; e < h.size(); ++e)
    if (!p.is_transversal(h.edge(e)))
      throw structure_error("d_set: edge " + std::to_string(e) + " is not transversal");
}
} // namespace detail

/// D(e) for every edge; sorts the edges with their part-i vertex removed and
/// marks runs of length at least two.
inline std::vector<d_set_result> d_sets(const hypergraph &h, const partition &p) {
  detail::require_transversal(h, p);
  const std::size_t m = h.size(), k = h.k();
  std::vector<d_set_result> out(m);
  for (std::size_t e = 0; e < m; ++e)
    out[e].edge_id = e;
  if (m == 0)
    return out;
  std::vector<vertex> reduced(m * (k - 1));
  std::vector<std::uint32_t> order(m);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t e = 0; e < m; ++e) {
      std::size_t w = 0;
      for (vertex v : h.edge(e))
        if (p.part_of(v) != i)
          reduced[e * (k - 1) + w++] = v;
    }
    auto row = [&](std::uint32_t e) {
      return std::span<const vertex>(reduced.data() + e * (k - 1), k - 1);
    };
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
      auto x = row(a), y = row(b);
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    });
    for (std::size_t x = 0; x < m;) {
      std::size_t y = x + 1;
      while (y < m && std::ranges::equal(row(order[x]), row(order[y])))
        ++y;
      if (y - x >= 2)
        for (std::size_t t = x; t < y; ++t)
          out[order[t]].parts.push_back(i);
      x = y;
    }
  }
  return out;
}

inline d_set_result d_set(const hypergraph &h, const partition &p, std::size_t edge_id) {
  detail::require_transversal(h, p);
  if (edge_id >= h.size())
    throw param_error("d_set: edge id out of range");
  d_set_result out{edge_id, {}};
  auto e = h.edge(edge_id);
  for (std::size_t i = 0; i < h.k(); ++i) {
    for (std::size_t f = 0; f < h.size(); ++f) {
      if (f == edge_id || h.intersection_size(edge_id, f) != h.k() - 1)
        continue;
      // the one vertex of e missing from f must sit in P_i
      vertex miss = 0;
      for (vertex v : e)
        if (!h.edge_contains(f, v))
          miss = v;
      if (p.part_of(miss) == i) {
        out.parts.push_back(i);
        break;
      }
    }
  }
  return out;
}

/// Shadow-clique structure of a k-graph: whether every (k-1)-set of the
/// shadow lies in exactly one edge, and whether the only complete
/// K_k^(k-1) in the shadow are the edges themselves.
struct audit_report {
  bool unique_containment = true;
  std::vector<std::vector<vertex>> multiply_covered; ///< (k-1)-sets in two or more edges
  std::vector<std::vector<vertex>> cliques;          ///< every k-set spanning a K_k^(k-1)
  std::vector<std::vector<vertex>> non_edge_cliques; ///< cliques that are not edges
  bool pass = true;
};

inline audit_report shadow_clique_audit(const hypergraph &h) {
  const std::size_t k = h.k(), m = h.size(), n = h.n();
  if (k < 2)
    throw param_error("shadow_clique_audit: needs k >= 2");
  const std::size_t s = k - 1;
  audit_report rep;

  std::vector<std::vector<vertex>> subs;
  subs.reserve(m * k);
  for (std::size_t e = 0; e < m; ++e)
    detail::for_each_subset_of(h.edge(e), s, [&](std::span<const vertex> f) {
      subs.emplace_back(f.begin(), f.end());
    });
  std::sort(subs.begin(), subs.end());
  std::vector<std::vector<vertex>> shadow_sets;
  for (std::size_t x = 0; x < subs.size();) {
    std::size_t y = x + 1;
    while (y < subs.size() && subs[y] == subs[x])
      ++y;
    if (y - x > 1)
      rep.multiply_covered.push_back(subs[x]);
    shadow_sets.push_back(std::move(subs[x]));
    x = y;
  }
  rep.unique_containment = rep.multiply_covered.empty();

  // Each k-set U is generated once: from U minus its largest vertex.
  std::vector<vertex> u(k), face(s);
  for (const auto &f : shadow_sets) {
    for (vertex v = f.back() + 1; v < n; ++v) {
      std::copy(f.begin(), f.end(), u.begin());
      u[s] = v;
      bool all = true;
      for (std::size_t drop = 0; drop + 1 < k && all; ++drop) {
        std::size_t w = 0;
        for (std::size_t t = 0; t < k; ++t)
          if (t != drop)
            face[w++] = u[t];
        all = std::binary_search(shadow_sets.begin(), shadow_sets.end(), face);
      }
      if (!all)
        continue;
      rep.cliques.push_back(u);
      if (!h.has_edge(u))
        rep.non_edge_cliques.push_back(u);
    }
  }
  std::sort(rep.cliques.begin(), rep.cliques.end());
  rep.pass = rep.unique_containment && rep.non_edge_cliques.empty() && rep.cliques.size() == m;
  return rep;
}

inline json to_json(const q_embedding &emb, const q_pattern &pat) {
  return {{"pattern", pat.name()}, {"edges", emb.edge_ids}, {"A", emb.a}, {"B", emb.b},
          {"C", emb.c}};
}

inline json i_certificate_json(std::pair<std::size_t, std::size_t> pair, const i_pattern &pat) {
  return {{"pattern", pat.name()}, {"edges", {pair.first, pair.second}}};
}

inline json to_json(const audit_report &rep) {
  return {{"pass", rep.pass},
          {"unique_containment", rep.unique_containment},
          {"multiply_covered", rep.multiply_covered},
          {"non_edge_cliques", rep.non_edge_cliques},
          {"clique_count", rep.cliques.size()}};
}

} // namespace hypex
