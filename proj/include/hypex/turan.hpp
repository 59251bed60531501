#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "budget.hpp"
#include "constructions.hpp"
#include "detail/bits.hpp"
#include "detail/combinatorics.hpp"
#include "detail/parallel.hpp"
#include "error.hpp"
#include "hypergraph.hpp"
#include "numbers.hpp"
#include "patterns.hpp"

namespace hypex {

/// Drops isolated vertices, keeping the relative order of the others.
inline hypergraph strip_isolated(const hypergraph &h) {
  std::vector<vertex> relabel(h.n(), 0);
  std::vector<bool> used(h.n(), false);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (auto v : h.edge(i))
      used[v] = true;
  vertex next = 0;
  for (std::size_t v = 0; v < h.n(); ++v)
    if (used[v])
      relabel[v] = next++;
  std::vector<vertex> flat;
  flat.reserve(h.size() * h.k());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (auto v : h.edge(i))
      flat.push_back(relabel[v]);
  return hypergraph(std::max<std::size_t>(next, h.k()), h.k(), std::move(flat))
      .with_meta(h.meta());
}

/// A copy of `pattern` in `host`: map[v] is the host vertex of pattern vertex
/// v (isolated pattern vertices are ignored), host_edges[i] the host edge id
/// that pattern edge i lands on.
struct subgraph_copy {
  std::vector<vertex> map;
  std::vector<std::size_t> host_edges;
};

/// Edge-guided backtracking search for a (not necessarily induced) copy.
inline std::optional<subgraph_copy> find_copy(const hypergraph &host, const hypergraph &pattern) {
  if (host.k() != pattern.k())
    throw param_error("find_copy: uniformity mismatch");
  const auto pat = strip_isolated(pattern);
  const std::size_t k = pat.k(), pe = pat.size();
  if (pe == 0)
    return subgraph_copy{std::vector<vertex>(pat.n(), 0), {}};
  if (pe > host.size())
    return std::nullopt;

  // Map edges so that each one overlaps the already-mapped ones when possible.
  std::vector<std::size_t> order;
  std::vector<bool> placed(pe, false), seen(pat.n(), false);
  for (std::size_t step = 0; step < pe; ++step) {
    std::size_t pick = pe, best_overlap = 0;
    for (std::size_t i = 0; i < pe; ++i) {
      if (placed[i])
        continue;
      std::size_t overlap = 0;
      for (auto v : pat.edge(i))
        overlap += seen[v];
      if (pick == pe || overlap > best_overlap) {
        pick = i;
        best_overlap = overlap;
      }
    }
    placed[pick] = true;
    order.push_back(pick);
    for (auto v : pat.edge(pick))
      seen[v] = true;
  }

  constexpr vertex unset = ~vertex{0};
  std::vector<vertex> map(pat.n(), unset);
  std::vector<int> host_owner(host.n(), -1);
  std::vector<std::size_t> host_edges(pe);
  std::vector<bool> host_used(host.size(), false);

  auto place = [&](auto &self, std::size_t step) -> bool {
    if (step == pe)
      return true;
    const auto pedge = pat.edge(order[step]);
    for (std::size_t he = 0; he < host.size(); ++he) {
      if (host_used[he])
        continue;
      const auto hedge = host.edge(he);
      // mapped pattern vertices must land inside hedge
      bool ok = true;
      std::vector<vertex> fresh_pat, fresh_host;
      std::size_t inside = 0;
      for (auto v : pedge) {
        if (map[v] == unset) {
          fresh_pat.push_back(v);
        } else if (std::binary_search(hedge.begin(), hedge.end(), map[v])) {
          ++inside;
        } else {
          ok = false;
          break;
        }
      }
      if (!ok)
        continue;
      for (auto w : hedge)
        if (host_owner[w] < 0)
          fresh_host.push_back(w);
      if (fresh_host.size() != fresh_pat.size() || inside + fresh_pat.size() != k)
        continue;
      host_used[he] = true;
      host_edges[order[step]] = he;
      std::sort(fresh_host.begin(), fresh_host.end());
      do {
        for (std::size_t x = 0; x < fresh_pat.size(); ++x) {
          map[fresh_pat[x]] = fresh_host[x];
          host_owner[fresh_host[x]] = static_cast<int>(fresh_pat[x]);
        }
        if (self(self, step + 1))
          return true;
        for (std::size_t x = 0; x < fresh_pat.size(); ++x) {
          map[fresh_pat[x]] = unset;
          host_owner[fresh_host[x]] = -1;
        }
      } while (std::next_permutation(fresh_host.begin(), fresh_host.end()));
      host_used[he] = false;
    }
    return false;
  };
  if (!place(place, 0))
    return std::nullopt;
  return subgraph_copy{std::move(map), std::move(host_edges)};
}

// ---------------------------------------------------------------------------
// Forbidden families
// ---------------------------------------------------------------------------

struct forbidden_member {
  enum class kind { q, i, general };
  kind type = kind::general;
  std::size_t param = 0; ///< r for Q members, i for I members
  hypergraph graph;      ///< isolated vertices removed
  std::string name;
};

class forbidden_family {
public:
  explicit forbidden_family(std::size_t k) : k_(k) {
    if (k < 1)
      throw param_error("forbidden family needs k >= 1");
  }

  std::size_t k() const noexcept { return k_; }
  const std::vector<forbidden_member> &members() const noexcept { return members_; }
  bool empty() const noexcept { return members_.empty(); }

  std::string id() const {
    std::string out;
    for (const auto &m : members_)
      out += (out.empty() ? "" : "+") + m.name;
    return out.empty() ? "none" : out;
  }

  forbidden_family &add(const q_pattern &pat) {
    require_k(pat.k);
    return push({forbidden_member::kind::q, pat.r, generate_q(pat.k, pat.r), pat.name()});
  }

  forbidden_family &add(const i_pattern &pat) {
    require_k(pat.k);
    return push({forbidden_member::kind::i, pat.i, generate_i(pat.k, pat.i), pat.name()});
  }

  forbidden_family &add(const hypergraph &g, std::string name) {
    require_k(g.k());
    if (g.size() == 0)
      throw param_error("forbidden family: a member with no edges is contained in everything");
    return push({forbidden_member::kind::general, 0, strip_isolated(g), std::move(name)});
  }

private:
  void require_k(std::size_t k) const {
    if (k != k_)
      throw param_error("forbidden family is " + std::to_string(k_) +
                        "-uniform, member is " + std::to_string(k) + "-uniform");
  }

  forbidden_family &push(forbidden_member m) {
    m.graph = strip_isolated(m.graph);
    for (const auto &old : members_)
      if (old.graph == m.graph)
        return *this;
    members_.push_back(std::move(m));
    return *this;
  }

  std::size_t k_;
  std::vector<forbidden_member> members_;
};

/// The first member of `fam` found in `host`, as a JSON certificate.
inline std::optional<json> family_copy(const hypergraph &host, const forbidden_family &fam) {
  for (const auto &m : fam.members()) {
    switch (m.type) {
    case forbidden_member::kind::q: {
      q_pattern pat(fam.k(), m.param);
      if (auto emb = find_q_copy(host, pat))
        return to_json(*emb, pat);
      break;
    }
    case forbidden_member::kind::i: {
      i_pattern pat(fam.k(), m.param);
      if (auto pair = find_i_copy(host, pat))
        return i_certificate_json(*pair, pat);
      break;
    }
    case forbidden_member::kind::general:
      if (auto copy = find_copy(host, m.graph))
        return json{{"pattern", m.name}, {"map", copy->map}, {"edges", copy->host_edges}};
      break;
    }
  }
  return std::nullopt;
}

/// G_k(v, e): every k-graph with exactly e edges on at most v vertices, one
/// per isomorphism class. A class is determined by its Venn vector (how many
/// vertices lie in exactly each nonempty subset of the edges), taken up to
/// relabelling the edges.
inline forbidden_family bes_family(std::size_t k, std::size_t v, std::size_t e) {
  if (k < 1 || e < 2 || v < k)
    throw param_error("bes_family needs k >= 1, e >= 2 and v >= k");
  if (e > 4 || v > 3 * k)
    throw param_error("bes_family is limited to e <= 4 and v <= 3k");
  const std::size_t regions = (std::size_t{1} << e) - 1; // region R+1 <-> subset mask R+1
  std::vector<std::size_t> count(regions + 1, 0), rem(e, k);
  std::vector<std::size_t> perm(e);
  std::vector<std::vector<std::size_t>> classes;

  auto canonical = [&] {
    std::vector<std::size_t> best;
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      std::vector<std::size_t> c(regions + 1, 0);
      for (std::size_t mask = 1; mask <= regions; ++mask) {
        std::size_t image = 0;
        for (std::size_t j = 0; j < e; ++j)
          if (mask >> j & 1)
            image |= std::size_t{1} << perm[j];
        c[image] = count[mask];
      }
      if (best.empty() || c < best)
        best = std::move(c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  };

  auto distinct_edges = [&] {
    for (std::size_t a = 0; a < e; ++a)
      for (std::size_t b = a + 1; b < e; ++b) {
        bool differ = false;
        for (std::size_t mask = 1; mask <= regions && !differ; ++mask)
          differ = count[mask] > 0 && (mask >> a & 1) != (mask >> b & 1);
        if (!differ)
          return false;
      }
    return true;
  };

  auto fill = [&](auto &self, std::size_t mask, std::size_t left) -> void {
    if (mask > regions) {
      if (std::all_of(rem.begin(), rem.end(), [](std::size_t x) { return x == 0; }) &&
          distinct_edges())
        classes.push_back(canonical());
      return;
    }
    std::size_t cap = left;
    for (std::size_t j = 0; j < e; ++j)
      if (mask >> j & 1)
        cap = std::min(cap, rem[j]);
    for (std::size_t c = 0; c <= cap; ++c) {
      count[mask] = c;
      for (std::size_t j = 0; j < e; ++j)
        if (mask >> j & 1)
          rem[j] -= c;
      self(self, mask + 1, left - c);
      for (std::size_t j = 0; j < e; ++j)
        if (mask >> j & 1)
          rem[j] += c;
    }
    count[mask] = 0;
  };
  fill(fill, 1, v);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  forbidden_family fam(k);
  const std::string base =
      "bes:" + std::to_string(k) + ":" + std::to_string(v) + ":" + std::to_string(e);
  for (std::size_t idx = 0; idx < classes.size(); ++idx) {
    const auto &c = classes[idx];
    std::vector<std::vector<vertex>> edges(e);
    vertex next = 0;
    for (std::size_t mask = 1; mask <= regions; ++mask)
      for (std::size_t x = 0; x < c[mask]; ++x, ++next)
        for (std::size_t j = 0; j < e; ++j)
          if (mask >> j & 1)
            edges[j].push_back(next);
    fam.add(hypergraph(next, k, edges), base + "#" + std::to_string(idx));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Exact Turán numbers
// ---------------------------------------------------------------------------

struct search_result {
  std::size_t n = 0;
  std::size_t k = 0;
  std::string family_id;
  std::size_t max_edges = 0;
  hypergraph witness;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
};

inline json to_json(const search_result &r) {
  return {{"n", r.n},
          {"k", r.k},
          {"family", r.family_id},
          {"max_edges", r.max_edges},
          {"witness", r.witness.edge_list()},
          {"nodes", r.nodes},
          {"budget_hit", r.budget_hit}};
}

namespace detail {

/// All k-subsets of [n] as candidate edges, with the pairwise structure the
/// branch-and-bound needs.
struct turan_space {
  std::size_t n = 0, k = 0, count = 0;
  std::vector<std::vector<vertex>> cands;
  std::vector<std::uint64_t> vmask;
  std::vector<std::uint32_t> by_colex;
  std::vector<bits> tight;

  turan_space(std::size_t n_, std::size_t k_) : n(n_), k(k_) {
    for_each_combination(n, k, [&](std::span<const vertex> c) {
      cands.emplace_back(c.begin(), c.end());
      std::uint64_t m = 0;
      for (auto v : c)
        m |= std::uint64_t{1} << v;
      vmask.push_back(m);
    });
    count = cands.size();
    by_colex.assign(count, 0);
    for (std::size_t i = 0; i < count; ++i)
      by_colex[colex_rank(cands[i])] = static_cast<std::uint32_t>(i);
    tight.assign(count, bits(count));
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b)
        if (a != b && k >= 2 && static_cast<std::size_t>(std::popcount(vmask[a] & vmask[b])) == k - 2)
          tight[a].set(b);
  }

  bits meeting_in(std::size_t a, std::size_t i) const {
    bits out(count);
    for (std::size_t b = 0; b < count; ++b)
      if (b != a && static_cast<std::size_t>(std::popcount(vmask[a] & vmask[b])) == i)
        out.set(b);
    return out;
  }
};

/// Every copy of a general pattern among the candidates, as candidate masks.
struct copy_table {
  std::vector<bits> copies;
  std::vector<std::vector<std::uint32_t>> through; ///< copies containing each candidate
};

inline copy_table pattern_copies(const turan_space &sp, const hypergraph &pat) {
  copy_table t;
  t.through.resize(sp.count);
  const std::size_t pv = pat.n();
  if (pv > sp.n)
    return t;
  if (falling(sp.n, pv) > 20'000'000)
    throw param_error("ex_exact: pattern has too many placements to tabulate");
  std::vector<std::vector<std::uint32_t>> found;
  std::vector<vertex> map(pv);
  std::vector<bool> used(sp.n, false);
  std::vector<vertex> img(sp.k);
  auto assign = [&](auto &self, std::size_t v) -> void {
    if (v == pv) {
      std::vector<std::uint32_t> ids;
      ids.reserve(pat.size());
      for (std::size_t i = 0; i < pat.size(); ++i) {
        auto e = pat.edge(i);
        for (std::size_t x = 0; x < sp.k; ++x)
          img[x] = map[e[x]];
        std::sort(img.begin(), img.end());
        ids.push_back(sp.by_colex[colex_rank(img)]);
      }
      std::sort(ids.begin(), ids.end());
      found.push_back(std::move(ids));
      return;
    }
    for (vertex w = 0; w < sp.n; ++w) {
      if (used[w])
        continue;
      used[w] = true;
      map[v] = w;
      self(self, v + 1);
      used[w] = false;
    }
  };
  assign(assign, 0);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  for (const auto &ids : found) {
    bits b(sp.count);
    for (auto id : ids) {
      b.set(id);
      t.through[id].push_back(static_cast<std::uint32_t>(t.copies.size()));
    }
    t.copies.push_back(std::move(b));
  }
  return t;
}

class turan_search {
public:
  turan_search(const turan_space &sp, const forbidden_family &fam) : sp_(sp) {
    for (const auto &m : fam.members()) {
      switch (m.type) {
      case forbidden_member::kind::q:
        q_rs_.push_back(m.param);
        break;
      case forbidden_member::kind::i: {
        std::vector<bits> rows;
        for (std::size_t a = 0; a < sp.count; ++a)
          rows.push_back(sp.meeting_in(a, m.param));
        i_rows_.push_back(std::move(rows));
        break;
      }
      case forbidden_member::kind::general:
        if (m.graph.size() == 1)
          single_edge_ = true;
        else
          tables_.push_back(pattern_copies(sp, m.graph));
        break;
      }
    }
  }

  bool single_edge_forbidden() const noexcept { return single_edge_; }

  /// Removes from `addable` every candidate that would complete a forbidden
  /// copy together with `added` and the rest of `chosen` (which contains
  /// `added`).
  void propagate(std::size_t added, const bits &chosen, bits &addable) const {
    for (const auto &rows : i_rows_)
      addable.remove(rows[added]);
    for (const auto &t : tables_) {
      for (auto id : t.through[added]) {
        bits missing = t.copies[id];
        missing.remove(chosen);
        if (missing.count() == 1)
          addable.reset(missing.next(0));
      }
    }
    for (auto r : q_rs_)
      propagate_q(added, r, chosen, addable);
  }

private:
  void propagate_q(std::size_t added, std::size_t r, const bits &chosen, bits &addable) const {
    const std::size_t core = sp_.k - r;
    bits partners = addable;
    partners &= sp_.tight[added];
    for (std::size_t d = partners.next(0); d < sp_.count; d = partners.next(d + 1)) {
      const std::uint64_t common = sp_.vmask[added] & sp_.vmask[d];
      std::vector<std::size_t> clique{added, d};
      bool hit = false;
      if (r == 2) {
        hit = completes(clique);
      } else {
        bits pool = chosen;
        pool.reset(added);
        pool &= sp_.tight[added];
        pool &= sp_.tight[d];
        hit = extend(clique, pool, common, r, core);
      }
      if (hit)
        addable.reset(d);
    }
  }

  bool extend(std::vector<std::size_t> &clique, const bits &pool, std::uint64_t common,
              std::size_t r, std::size_t core) const {
    if (clique.size() == r)
      return static_cast<std::size_t>(std::popcount(common)) == core && completes(clique);
    if (clique.size() + pool.count() < r)
      return false;
    for (std::size_t x = pool.next(0); x < sp_.count; x = pool.next(x + 1)) {
      const std::uint64_t c2 = common & sp_.vmask[x];
      if (static_cast<std::size_t>(std::popcount(c2)) < core)
        continue;
      bits next = pool;
      next.clear_below(x + 1);
      next &= sp_.tight[x];
      clique.push_back(x);
      bool hit = extend(clique, next, c2, r, core);
      clique.pop_back();
      if (hit)
        return true;
    }
    return false;
  }

  bool completes(const std::vector<std::size_t> &clique) const {
    std::vector<std::span<const vertex>> edges;
    for (auto c : clique)
      edges.emplace_back(sp_.cands[c]);
    return decompose_q(edges, sp_.k).has_value();
  }

  const turan_space &sp_;
  std::vector<std::size_t> q_rs_;
  std::vector<std::vector<bits>> i_rows_;
  std::vector<copy_table> tables_;
  bool single_edge_ = false;
};

struct branch_outcome {
  std::size_t best = 0;
  std::vector<std::size_t> witness;
  std::uint64_t nodes = 0;
  bool aborted = false;
};

/// Include-first DFS below a fixed prefix. Only strictly larger sets replace
/// the incumbent, so the first optimum met (the lexicographically least) is
/// the one kept.
inline branch_outcome run_branch(const turan_space &sp, const turan_search &ts,
                                 std::vector<std::size_t> prefix, bits chosen, bits addable,
                                 std::size_t threshold, std::uint64_t cap) {
  branch_outcome out;
  out.best = threshold;
  auto dfs = [&](auto &self, const bits &avail) -> void {
    if (++out.nodes > cap) {
      out.aborted = true;
      return;
    }
    if (prefix.size() > out.best) {
      out.best = prefix.size();
      out.witness = prefix;
    }
    for (std::size_t j = avail.next(0); j < sp.count; j = avail.next(j + 1)) {
      if (prefix.size() + avail.count_from(j) <= out.best)
        break;
      bits next = avail;
      next.clear_below(j + 1);
      chosen.set(j);
      prefix.push_back(j);
      ts.propagate(j, chosen, next);
      self(self, next);
      prefix.pop_back();
      chosen.reset(j);
      if (out.aborted)
        return;
    }
  };
  dfs(dfs, addable);
  return out;
}

} // namespace detail

/// ex_k(n, F) by branch-and-bound over candidate edges in lexicographic
/// order. The first edge is fixed to {0..k-1}. The witness is the
/// lexicographically least optimum. On budget exhaustion the result carries
/// the best set found and budget_hit.
inline search_result ex_exact(std::size_t n, std::size_t k, const forbidden_family &fam,
                              search_budget budget = {}, std::size_t max_candidates = 64) {
  if (fam.k() != k)
    throw param_error("ex_exact: family uniformity differs from k");
  if (k < 1 || n < k)
    throw param_error("ex_exact needs n >= k >= 1");
  if (n > 64 || detail::binomial(n, k) > max_candidates)
    throw param_error("ex_exact: C(n,k) = " + std::to_string(detail::binomial(n, k)) +
                      " exceeds the candidate limit " + std::to_string(max_candidates));
  const detail::turan_space sp(n, k);
  const detail::turan_search ts(sp, fam);
  search_result res;
  res.n = n;
  res.k = k;
  res.family_id = fam.id();
  res.witness = hypergraph(n, k, std::vector<vertex>{});

  std::vector<std::size_t> best_set;
  if (!ts.single_edge_forbidden()) {
    detail::bits chosen(sp.count), addable(sp.count);
    for (std::size_t j = 1; j < sp.count; ++j)
      addable.set(j);
    chosen.set(0);
    ts.propagate(0, chosen, addable);
    res.nodes = 1;

    // greedy: always take the first addable candidate
    best_set = {0};
    {
      detail::bits g_chosen = chosen, g_add = addable;
      for (std::size_t j = g_add.next(0); j < sp.count; j = g_add.next(j + 1)) {
        g_chosen.set(j);
        best_set.push_back(j);
        g_add.clear_below(j + 1);
        ts.propagate(j, g_chosen, g_add);
      }
    }
    std::size_t threshold = best_set.size() - 1;

    std::vector<std::size_t> roots;
    for (std::size_t j = addable.next(0); j < sp.count; j = addable.next(j + 1))
      roots.push_back(j);
    constexpr std::size_t batch = 8;
    for (std::size_t at = 0; at < roots.size() && !res.budget_hit; at += batch) {
      std::vector<std::size_t> todo;
      for (std::size_t x = at; x < std::min(roots.size(), at + batch); ++x)
        if (1 + addable.count_from(roots[x]) > threshold)
          todo.push_back(roots[x]);
      if (todo.empty())
        break;
      const std::uint64_t cap = budget.nodes > res.nodes ? budget.nodes - res.nodes : 0;
      std::vector<detail::branch_outcome> outs(todo.size());
      detail::parallel_chunks(todo.size(), todo.size(), [&](std::size_t c, std::size_t, std::size_t) {
        const std::size_t j = todo[c];
        detail::bits ch = chosen, next = addable;
        ch.set(j);
        next.clear_below(j + 1);
        ts.propagate(j, ch, next);
        outs[c] = detail::run_branch(sp, ts, {0, j}, std::move(ch), std::move(next), threshold, cap);
      });
      for (auto &o : outs) {
        res.nodes += o.nodes;
        res.budget_hit = res.budget_hit || o.aborted;
        if (o.best > threshold && !o.witness.empty()) {
          threshold = o.best;
          best_set = std::move(o.witness);
        }
      }
      if (res.nodes > budget.nodes)
        res.budget_hit = true;
    }
  }

  std::vector<std::vector<vertex>> edges;
  for (auto id : best_set)
    edges.push_back(sp.cands[id]);
  res.max_edges = edges.size();
  res.witness = hypergraph(n, k, edges);
  if (auto cert = family_copy(res.witness, fam))
    throw invariant_error("ex_exact: witness contains a forbidden copy: " + cert->dump());
  res.witness = std::move(res.witness)
                    .with_meta({{"family", res.family_id},
                                {"max_edges", res.max_edges},
                                {"exact", !res.budget_hit}});
  return res;
}

// ---------------------------------------------------------------------------
// Reports and tables
// ---------------------------------------------------------------------------

struct chain_report {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> rs;
  std::vector<std::size_t> values;
  std::vector<bool> budget_hit;
  bool holds = true;
  bool lower_bound_only = false;
};

inline json to_json(const chain_report &c) {
  return {{"n", c.n},
          {"k", c.k},
          {"r", c.rs},
          {"ex", c.values},
          {"budget_hit", c.budget_hit},
          {"holds", c.holds},
          {"lower_bound_only", c.lower_bound_only}};
}

/// ex(n, Q_k(3)) <= ex(n, Q_k(4)) <= ... <= ex(n, Q_k(k)). A decrease among
/// exact values raises invariant_error; with any budget hit the values are
/// only lower bounds and the chain is reported as such.
inline chain_report monotone_chain_check(std::size_t n, std::size_t k, search_budget budget = {},
                                         std::size_t max_candidates = 64) {
  if (k < 3)
    throw param_error("monotone_chain_check needs k >= 3");
  chain_report rep;
  rep.n = n;
  rep.k = k;
  for (std::size_t r = 3; r <= k; ++r) {
    forbidden_family fam(k);
    fam.add(q_pattern(k, r));
    auto res = ex_exact(n, k, fam, budget, max_candidates);
    rep.rs.push_back(r);
    rep.values.push_back(res.max_edges);
    rep.budget_hit.push_back(res.budget_hit);
    rep.lower_bound_only = rep.lower_bound_only || res.budget_hit;
  }
  for (std::size_t i = 1; i < rep.values.size(); ++i)
    if (rep.values[i] < rep.values[i - 1])
      rep.holds = false;
  if (!rep.holds && !rep.lower_bound_only)
    throw invariant_error("monotone chain violated at n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ": " + to_json(rep).dump());
  return rep;
}

struct density_point {
  std::size_t n = 0;
  std::size_t ex = 0;
  std::uint64_t total = 0; ///< C(n, k)
  double ratio = 0.0;
};

/// ex(n, F) / C(n, k) over `ns`, which must be nonincreasing in n.
inline std::vector<density_point> density_trend(std::size_t k, const forbidden_family &fam,
                                                std::vector<std::size_t> ns,
                                                search_budget budget = {},
                                                std::size_t max_candidates = 64) {
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::vector<density_point> out;
  for (auto n : ns) {
    if (n < k)
      throw param_error("density_trend: n must be at least k");
    auto res = ex_exact(n, k, fam, budget, max_candidates);
    density_point pt{n, res.max_edges, detail::binomial(n, k), 0.0};
    pt.ratio = static_cast<double>(pt.ex) / static_cast<double>(pt.total);
    if (res.budget_hit) {
      json partial = json::array();
      for (const auto &q : out)
        partial.push_back({{"n", q.n}, {"ex", q.ex}});
      partial.push_back({{"n", n}, {"ex_lower_bound", pt.ex}});
      throw budget_error("density_trend: budget exhausted at n=" + std::to_string(n), partial);
    }
    if (!out.empty()) {
      const auto &prev = out.back();
      // ex/total > prev.ex/prev.total, compared exactly
      if (static_cast<unsigned __int128>(pt.ex) * prev.total >
          static_cast<unsigned __int128>(prev.ex) * pt.total)
        throw invariant_error("density_trend: ratio increased from n=" + std::to_string(prev.n) +
                              " to n=" + std::to_string(n));
    }
    out.push_back(pt);
  }
  return out;
}

struct growth_row {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t param = 0;
  std::uint64_t edges = 0;
  std::uint64_t reference = 0; ///< n^(k-1)
};

namespace detail {
inline std::uint64_t power_saturating(std::uint64_t b, std::uint64_t e) {
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    acc *= b;
    if (acc > ~std::uint64_t{0})
      return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(acc);
}
} // namespace detail

/// Modular construction at n = kp with S = max_good_set(p, k); param is p.
inline std::vector<growth_row> modular_growth(std::uint64_t k, const std::vector<std::uint64_t> &primes,
                                              search_budget budget = {}) {
  std::vector<growth_row> rows;
  for (auto p : primes) {
    auto s = max_good_set(p, k, budget);
    modular_config cfg;
    cfg.k = k;
    cfg.p = p;
    cfg.s = s.elements;
    cfg.certify = false;
    auto h = construct_modular(cfg);
    rows.push_back({k * p, k, p, h.size(), detail::power_saturating(k * p, k - 1)});
  }
  return rows;
}

/// Packing-split construction for each n; param is r.
inline std::vector<growth_row> split_growth(std::size_t k, std::size_t r,
                                            const std::vector<std::size_t> &ns) {
  std::vector<growth_row> rows;
  for (auto n : ns) {
    auto h = construct_split({n, k, r, false});
    rows.push_back({n, k, r, h.size(), detail::power_saturating(n, k - 1)});
  }
  return rows;
}

inline std::string growth_csv(const std::vector<growth_row> &rows) {
  std::ostringstream out;
  out << "n,k,param,edges,reference\n";
  for (const auto &r : rows)
    out << r.n << ',' << r.k << ',' << r.param << ',' << r.edges << ',' << r.reference << '\n';
  return out.str();
}

} // namespace hypex
