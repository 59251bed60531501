#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "detail/combinatorics.hpp"
#include "error.hpp"

namespace hypex {

using json = nlohmann::json;

/// A strictly increasing list of vertex indices (shadow elements, the
/// transversal set of a link).
class vertex_set {
public:
  vertex_set() = default;

  explicit vertex_set(std::vector<vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw param_error("vertex_set: repeated vertex");
  }

  vertex_set(std::initializer_list<vertex> members)
      : vertex_set(std::vector<vertex>(members)) {}

  std::span<const vertex> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  bool contains(vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }

  friend bool operator==(const vertex_set &, const vertex_set &) = default;

private:
  std::vector<vertex> members_;
};

/// A k-uniform hypergraph on vertices {0..n-1}.
///
/// Edges are kept in lexicographic order, each as a sorted vertex run in one
/// flat array, with a parallel bit-vector row per edge so intersection sizes
/// are a popcount. Values are immutable once built.
class hypergraph {
public:
  hypergraph() = default;

  hypergraph(std::size_t n, std::size_t k, const std::vector<std::vector<vertex>> &edges)
      : n_(n), k_(k) {
    check_shape();
    verts_.reserve(edges.size() * k);
    for (const auto &e : edges) {
      if (e.size() != k)
        throw param_error("hypergraph: edge of size " + std::to_string(e.size()) +
                          ", expected " + std::to_string(k));
      verts_.insert(verts_.end(), e.begin(), e.end());
    }
    build();
  }

  /// Edges given as consecutive runs of k vertices.
  hypergraph(std::size_t n, std::size_t k, std::vector<vertex> flat)
      : n_(n), k_(k), verts_(std::move(flat)) {
    check_shape();
    if (verts_.size() % k != 0)
      throw param_error("hypergraph: flat edge array not a multiple of k");
    build();
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return k_ == 0 ? 0 : verts_.size() / k_; }
  bool empty() const noexcept { return verts_.empty(); }

  std::span<const vertex> edge(std::size_t i) const {
    return {verts_.data() + i * k_, k_};
  }

  std::size_t words() const noexcept { return words_; }

  std::span<const std::uint64_t> edge_bits(std::size_t i) const {
    return {bits_.data() + i * words_, words_};
  }

  std::size_t intersection_size(std::size_t i, std::size_t j) const {
    const auto *a = bits_.data() + i * words_;
    const auto *b = bits_.data() + j * words_;
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w)
      c += std::popcount(a[w] & b[w]);
    return c;
  }

  bool edge_contains(std::size_t i, vertex v) const {
    return (bits_[i * words_ + v / 64] >> (v % 64)) & 1u;
  }

  /// Index of the edge equal to the sorted vertex list `e`, if present.
  std::optional<std::size_t> find_edge(std::span<const vertex> e) const {
    if (e.size() != k_)
      return std::nullopt;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      auto m = edge(mid);
      if (std::lexicographical_compare(m.begin(), m.end(), e.begin(), e.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size() && std::equal(e.begin(), e.end(), edge(lo).begin()))
      return lo;
    return std::nullopt;
  }

  bool has_edge(std::span<const vertex> e) const { return find_edge(e).has_value(); }

  std::vector<std::vector<vertex>> edge_list() const {
    std::vector<std::vector<vertex>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
      out.emplace_back(edge(i).begin(), edge(i).end());
    return out;
  }

  std::span<const vertex> flat() const noexcept { return verts_; }

  /// Construction provenance; not part of equality.
  const json &meta() const noexcept { return meta_; }

  hypergraph with_meta(json meta) const & {
    hypergraph h = *this;
    h.meta_ = std::move(meta);
    return h;
  }

  hypergraph with_meta(json meta) && {
    meta_ = std::move(meta);
    return std::move(*this);
  }

  friend bool operator==(const hypergraph &a, const hypergraph &b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.verts_ == b.verts_;
  }

private:
  void check_shape() const {
    if (k_ == 0)
      throw param_error("hypergraph: uniformity must be positive");
  }

  void build() {
    const std::size_t m = verts_.size() / k_;
    for (std::size_t i = 0; i < m; ++i) {
      auto *e = verts_.data() + i * k_;
      std::sort(e, e + k_);
      for (std::size_t j = 0; j < k_; ++j) {
        if (e[j] >= n_)
          throw param_error("hypergraph: vertex " + std::to_string(e[j]) +
                            " out of range for n = " + std::to_string(n_));
        if (j > 0 && e[j] == e[j - 1])
          throw param_error("hypergraph: repeated vertex in edge");
      }
    }
    auto less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(verts_.begin() + a * k_, verts_.begin() + (a + 1) * k_,
                                          verts_.begin() + b * k_, verts_.begin() + (b + 1) * k_);
    };
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!std::is_sorted(order.begin(), order.end(), less)) {
      std::sort(order.begin(), order.end(), less);
      std::vector<vertex> sorted;
      sorted.reserve(verts_.size());
      for (auto i : order)
        sorted.insert(sorted.end(), verts_.begin() + i * k_, verts_.begin() + (i + 1) * k_);
      verts_ = std::move(sorted);
    }
    for (std::size_t i = 1; i < m; ++i)
      if (std::equal(verts_.begin() + (i - 1) * k_, verts_.begin() + i * k_, verts_.begin() + i * k_))
        throw param_error("hypergraph: duplicate edge");
    words_ = std::max<std::size_t>(1, (n_ + 63) / 64);
    bits_.assign(m * words_, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k_; ++j) {
        vertex v = verts_[i * k_ + j];
        bits_[i * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
      }
  }

  std::size_t n_ = 0;
  std::size_t k_ = 1;
  std::vector<vertex> verts_;
  std::size_t words_ = 1;
  std::vector<std::uint64_t> bits_;
  json meta_ = json::object();
};

/// Every k-subset of {0..n-1}.
inline hypergraph complete_hypergraph(std::size_t n, std::size_t k) {
  std::vector<vertex> flat;
  detail::for_each_combination(n, k, [&](std::span<const vertex> c) {
    flat.insert(flat.end(), c.begin(), c.end());
  });
  return hypergraph(n, k, std::move(flat));
}

/// A partition of {0..n-1} into disjoint parts.
class partition {
public:
  partition() = default;

  partition(std::size_t n, std::vector<std::vector<vertex>> parts)
      : parts_(std::move(parts)), part_of_(n, none) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      std::sort(parts_[i].begin(), parts_[i].end());
      for (vertex v : parts_[i]) {
        if (v >= n)
          throw param_error("partition: vertex out of range");
        if (part_of_[v] != none)
          throw param_error("partition: parts overlap at vertex " + std::to_string(v));
        part_of_[v] = i;
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (part_of_[v] == none)
        throw param_error("partition: vertex " + std::to_string(v) + " not covered");
    if (!parts_.empty()) {
      auto [lo, hi] = std::minmax_element(parts_.begin(), parts_.end(),
                                          [](auto &a, auto &b) { return a.size() < b.size(); });
      balanced_ = hi->size() - lo->size() <= 1;
    }
  }

  std::size_t n() const noexcept { return part_of_.size(); }
  std::size_t count() const noexcept { return parts_.size(); }
  const std::vector<std::vector<vertex>> &parts() const noexcept { return parts_; }
  std::span<const vertex> part(std::size_t i) const { return parts_[i]; }
  std::size_t part_of(vertex v) const { return part_of_.at(v); }
  bool balanced() const noexcept { return balanced_; }

  /// True when the edge meets every part exactly once.
  bool is_transversal(std::span<const vertex> e) const {
    if (e.size() != parts_.size())
      return false;
    std::vector<bool> seen(parts_.size(), false);
    for (vertex v : e) {
      auto p = part_of(v);
      if (seen[p])
        return false;
      seen[p] = true;
    }
    return true;
  }

private:
  static constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::vector<vertex>> parts_;
  std::vector<std::size_t> part_of_;
  bool balanced_ = true;
};

/// The s-shadow: every s-subset of some edge, on the same vertex set.
inline hypergraph shadow(const hypergraph &h, std::size_t s) {
  if (s < 1 || s > h.k())
    throw param_error("shadow: s must lie in [1, k]");
  if (s == h.k())
    return hypergraph(h.n(), h.k(), std::vector<vertex>(h.flat().begin(), h.flat().end()));
  std::vector<std::vector<vertex>> subs;
  subs.reserve(h.size() * detail::binomial(h.k(), s));
  for (std::size_t i = 0; i < h.size(); ++i)
    detail::for_each_subset_of(h.edge(i), s, [&](std::span<const vertex> f) {
      subs.emplace_back(f.begin(), f.end());
    });
  std::sort(subs.begin(), subs.end());
  subs.erase(std::unique(subs.begin(), subs.end()), subs.end());
  return hypergraph(h.n(), s, subs);
}

/// Link of T: { e \ T : T ⊆ e }, (k - |T|)-uniform on the same vertex set.
inline hypergraph link(const hypergraph &h, const vertex_set &t) {
  if (t.size() >= h.k())
    throw param_error("link: |T| must be smaller than k");
  for (vertex v : t.members())
    if (v >= h.n())
      throw param_error("link: vertex of T out of range");
  const std::size_t l = h.k() - t.size();
  std::vector<vertex> flat;
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto e = h.edge(i);
    if (!std::includes(e.begin(), e.end(), t.members().begin(), t.members().end()))
      continue;
    std::set_difference(e.begin(), e.end(), t.members().begin(), t.members().end(),
                        std::back_inserter(flat));
  }
  return hypergraph(h.n(), l, std::move(flat));
}

struct kpartite_reduction {
  hypex::partition partition;
  hypergraph graph;
};

/// ceil(k! m / k^k), the guaranteed size of a balanced transversal sub-hypergraph.
inline std::uint64_t transversal_floor(std::size_t k, std::size_t m) {
  unsigned __int128 num = m, den = 1;
  for (std::size_t i = 2; i <= k; ++i)
    num *= i;
  for (std::size_t i = 0; i < k; ++i)
    den *= k;
  return static_cast<std::uint64_t>((num + den - 1) / den);
}

/// Balanced k-partition keeping at least ceil(k!/k^k * m) transversal edges.
///
/// Vertices are placed in index order; each goes to the part (with spare
/// quota) that maximizes the expected number of transversal edges when the
/// remaining vertices fill the remaining quota uniformly at random. The
/// expectation never drops, and it starts at m * k! prod(q_i) / n^(k),
/// which is at least m k!/k^k for balanced quotas q_i. Scores are exact
/// integers (every term scaled by a common falling factorial). `seed`
/// only breaks ties between equal scores.
inline kpartite_reduction kpartite_reduce(const hypergraph &h, std::uint64_t seed = 0) {
  const std::size_t n = h.n(), k = h.k(), m = h.size();
  if (n < k)
    throw param_error("kpartite_reduce: need n >= k for a balanced transversal partition");
  {
    long double mag = std::log2l(static_cast<long double>(std::max<std::size_t>(m, 1)));
    for (std::size_t i = 1; i <= k; ++i)
      mag += std::log2l(static_cast<long double>(i)) + std::log2l(static_cast<long double>(n));
    if (mag > 120)
      throw param_error("kpartite_reduce: instance too large for exact scoring");
  }
  using wide = unsigned __int128;
  std::vector<std::size_t> cap(k);
  for (std::size_t j = 0; j < k; ++j)
    cap[j] = n / k + (j < n % k ? 1 : 0);
  std::vector<int> assigned(n, -1);
  std::vector<wide> factorial(k + 1, 1);
  for (std::size_t i = 1; i <= k; ++i)
    factorial[i] = factorial[i - 1] * i;
  std::mt19937_64 rng(seed);

  std::vector<char> used(k);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t rest = n - v - 1;
    const std::size_t depth = std::min(k, rest);
    std::vector<wide> score(k, 0);
    std::vector<std::size_t> options;
    for (std::size_t j = 0; j < k; ++j) {
      if (cap[j] == 0)
        continue;
      options.push_back(j);
      --cap[j];
      assigned[v] = static_cast<int>(j);
      wide total = 0;
      for (std::size_t i = 0; i < m; ++i) {
        std::fill(used.begin(), used.end(), 0);
        std::size_t unassigned = 0;
        bool clash = false;
        for (vertex u : h.edge(i)) {
          int p = assigned[u];
          if (p < 0) {
            ++unassigned;
          } else if (used[p]) {
            clash = true;
            break;
          } else {
            used[p] = 1;
          }
        }
        if (clash || unassigned > depth)
          continue;
        wide term = factorial[unassigned];
        for (std::size_t f = 0; f < k && term != 0; ++f)
          if (!used[f])
            term *= cap[f];
        term *= detail::falling(rest - unassigned, depth - unassigned);
        total += term;
      }
      score[j] = total;
      ++cap[j];
    }
    wide best = 0;
    for (auto j : options)
      best = std::max(best, score[j]);
    std::vector<std::size_t> ties;
    for (auto j : options)
      if (score[j] == best)
        ties.push_back(j);
    std::size_t pick = ties.size() == 1 ? ties[0] : ties[rng() % ties.size()];
    assigned[v] = static_cast<int>(pick);
    --cap[pick];
  }

  std::vector<std::vector<vertex>> parts(k);
  for (std::size_t v = 0; v < n; ++v)
    parts[assigned[v]].push_back(static_cast<vertex>(v));
  hypex::partition part(n, std::move(parts));
  std::vector<vertex> kept;
  for (std::size_t i = 0; i < m; ++i)
    if (part.is_transversal(h.edge(i)))
      kept.insert(kept.end(), h.edge(i).begin(), h.edge(i).end());
  hypergraph reduced(n, k, std::move(kept));
  if (reduced.size() < transversal_floor(k, m))
    throw invariant_error("kpartite_reduce: retained edges below the k!/k^k floor");
  return {std::move(part), std::move(reduced)};
}

} // namespace hypex
