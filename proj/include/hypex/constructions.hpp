#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "detail/combinatorics.hpp"
#include "detail/parallel.hpp"
#include "error.hpp"
#include "hypergraph.hpp"
#include "numbers.hpp"
#include "patterns.hpp"

namespace hypex {

/// Runs the Q_k(r) checker and returns the meta record for it.
inline json certify_q_free(const hypergraph &h, const q_pattern &pat) {
  json rec{{"pattern", pat.name()}};
  auto copy = find_q_copy(h, pat);
  rec["free"] = !copy.has_value();
  if (copy)
    rec["certificate"] = to_json(*copy, pat);
  return rec;
}

inline json certify_i_free(const hypergraph &h, const i_pattern &pat) {
  json rec{{"pattern", pat.name()}};
  auto pair = find_i_copy(h, pat);
  rec["free"] = !pair.has_value();
  if (pair)
    rec["certificate"] = i_certificate_json(*pair, pat);
  return rec;
}

// ---------------------------------------------------------------------------
// Modular construction F(S, alpha, beta)
// ---------------------------------------------------------------------------

/// Vertices are pairs (i, j), 1 <= i <= k, 0 <= j < p, stored as (i-1) p + j.
/// A transversal k-set {(1,x_1)..(k,x_k)} is an edge when
///   Σ x_i ≡ alpha and Σ m_i x_i ∈ S + beta   (mod p).
struct modular_config {
  std::uint64_t k = 5;
  std::uint64_t p = 7;
  std::vector<std::uint64_t> s{0};
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;
  std::vector<std::uint64_t> m; ///< permutation of 1..k; empty means identity
  bool certify = true;
};

namespace detail {

inline std::vector<std::uint64_t> modular_coefficients(const modular_config &cfg) {
  if (cfg.m.empty()) {
    std::vector<std::uint64_t> id(cfg.k);
    std::iota(id.begin(), id.end(), std::uint64_t{1});
    return id;
  }
  return cfg.m;
}

inline void validate(const modular_config &cfg) {
  if (cfg.k < 3)
    throw param_error("modular construction needs k >= 3");
  if (!is_prime(cfg.p) || cfg.p <= cfg.k)
    throw param_error("modular construction needs a prime p > k");
  if (cfg.alpha >= cfg.p || cfg.beta >= cfg.p)
    throw param_error("modular construction: alpha and beta must lie in [0, p)");
  auto m = modular_coefficients(cfg);
  auto sorted = m;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted.size() != cfg.k || sorted[i] != i + 1)
      throw param_error("modular construction: m must be a permutation of 1..k");
  if (cfg.s.empty())
    throw param_error("modular construction: S must be non-empty");
  if (auto v = find_good_set_violation(cfg.s, cfg.p, cfg.k))
    throw certificate_error("modular construction: S is not " + std::to_string(cfg.k) + "-good",
                            to_json(*v));
}

} // namespace detail

/// Whether the tuple (x_1..x_k) satisfies both membership equations.
inline bool is_modular_edge(const modular_config &cfg, std::span<const std::uint64_t> x) {
  const auto P = static_cast<std::int64_t>(cfg.p);
  auto m = detail::modular_coefficients(cfg);
  std::int64_t sum = 0, weighted = 0;
  for (std::size_t i = 0; i < cfg.k; ++i) {
    sum += static_cast<std::int64_t>(x[i]);
    weighted += static_cast<std::int64_t>(m[i] * x[i]);
  }
  if (detail::mod(sum, P) != static_cast<std::int64_t>(cfg.alpha))
    return false;
  auto shifted = static_cast<std::uint64_t>(detail::mod(weighted - static_cast<std::int64_t>(cfg.beta), P));
  return std::find(cfg.s.begin(), cfg.s.end(), shifted) != cfg.s.end();
}

/// Parts P_i = {(i, j) : 0 <= j < p} of the modular construction.
inline partition modular_partition(std::uint64_t k, std::uint64_t p) {
  std::vector<std::vector<vertex>> parts(k);
  for (std::uint64_t i = 0; i < k; ++i)
    for (std::uint64_t j = 0; j < p; ++j)
      parts[i].push_back(static_cast<vertex>(i * p + j));
  return partition(k * p, std::move(parts));
}

/// F(S, alpha, beta): p^(k-2) |S| edges on kp vertices, Q_k(3)-free.
///
/// For each s ∈ S and each (x_3..x_k), the pair (x_1, x_2) solves
///   x_1 + x_2 = alpha - Σ_{i>=3} x_i
///   m_1 x_1 + m_2 x_2 = s + beta - Σ_{i>=3} m_i x_i
/// uniquely because m_1 - m_2 is invertible mod p.
inline hypergraph construct_modular(const modular_config &cfg) {
  detail::validate(cfg);
  const std::uint64_t k = cfg.k, p = cfg.p;
  const auto P = static_cast<std::int64_t>(p);
  const auto m = detail::modular_coefficients(cfg);
  const auto inv = detail::mod_inverse(static_cast<std::int64_t>(m[0]) - static_cast<std::int64_t>(m[1]), P);
  std::uint64_t per_s = 1;
  for (std::uint64_t i = 2; i < k; ++i)
    per_s *= p;
  if (per_s * cfg.s.size() * k > (std::uint64_t{1} << 31))
    throw param_error("modular construction: too many edges");

  std::vector<std::vector<vertex>> chunks(cfg.s.size());
  detail::parallel_chunks(cfg.s.size(), cfg.s.size(), [&](std::size_t c, std::size_t, std::size_t) {
    const auto s = static_cast<std::int64_t>(cfg.s[c]);
    auto &flat = chunks[c];
    flat.reserve(per_s * k);
    std::vector<std::int64_t> x(k, 0);
    for (std::uint64_t t = 0; t < per_s; ++t) {
      std::int64_t rest = 0, rest_w = 0;
      for (std::uint64_t i = 2; i < k; ++i) {
        rest += x[i];
        rest_w += static_cast<std::int64_t>(m[i]) * x[i];
      }
      auto a = detail::mod(static_cast<std::int64_t>(cfg.alpha) - rest, P);
      auto b = detail::mod(s + static_cast<std::int64_t>(cfg.beta) - rest_w, P);
      x[0] = detail::mod((b - static_cast<std::int64_t>(m[1]) * a) * inv, P);
      x[1] = detail::mod(a - x[0], P);
      for (std::uint64_t i = 0; i < k; ++i)
        flat.push_back(static_cast<vertex>(i * p + static_cast<std::uint64_t>(x[i])));
      // next (x_3..x_k) in lexicographic order
      for (std::uint64_t i = k; i-- > 2;) {
        if (++x[i] < P)
          break;
        x[i] = 0;
      }
    }
  });
  std::vector<vertex> flat;
  flat.reserve(per_s * cfg.s.size() * k);
  for (auto &c : chunks)
    flat.insert(flat.end(), c.begin(), c.end());

  hypergraph h;
  try {
    h = hypergraph(k * p, k, std::move(flat));
  } catch (const param_error &) {
    throw invariant_error("construct_modular: two parameter tuples produced the same edge");
  }
  if (h.size() != per_s * cfg.s.size())
    throw invariant_error("construct_modular: edge count differs from p^(k-2)|S|");

  json meta{{"construction", "modular"},
            {"k", k},
            {"p", p},
            {"S", cfg.s},
            {"alpha", cfg.alpha},
            {"beta", cfg.beta},
            {"m", m},
            {"vertex_map", "(i-1)*p+j"},
            {"edges", h.size()}};
  if (cfg.certify)
    meta["certificates"] = json::array({certify_q_free(h, q_pattern(k, 3))});
  return std::move(h).with_meta(std::move(meta));
}

// ---------------------------------------------------------------------------
// Packing-split construction
// ---------------------------------------------------------------------------

/// X = [0, floor(n/2)), Y = the rest. Edges are P ∪ Q for P in a greedy
/// (|X|, r-1, r-2)-packing on X and Q any (k-r+1)-subset of Y.
struct split_config {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  bool certify = true;
};

inline hypergraph construct_split(const split_config &cfg) {
  const std::size_t n = cfg.n, k = cfg.k, r = cfg.r;
  if (r < 3 || r > k)
    throw param_error("split construction needs 3 <= r <= k");
  if (k > 2 * r - 2)
    throw param_error("split construction needs k <= 2r - 2");
  if (n < 2 * k)
    throw param_error("split construction needs n >= 2k");
  const std::size_t nx = n / 2, ny = n - nx;
  const auto h1 = greedy_packing(nx, r - 1, r - 2).edges;
  const std::size_t tail = k - r + 1;
  std::vector<vertex> flat;
  for (std::size_t i = 0; i < h1.size(); ++i)
    detail::for_each_combination(ny, tail, [&](std::span<const vertex> q) {
      auto e = h1.edge(i);
      flat.insert(flat.end(), e.begin(), e.end());
      for (auto v : q)
        flat.push_back(static_cast<vertex>(nx + v));
    });
  hypergraph h(n, k, std::move(flat));
  const auto h2 = detail::binomial(ny, tail);
  if (h.size() != h1.size() * h2)
    throw invariant_error("construct_split: edge count differs from |H1| C(|Y|, k-r+1)");
  json meta{{"construction", "split"}, {"n", n},   {"k", k},
            {"r", r},                  {"X", nx},  {"Y", ny},
            {"h1_edges", h1.size()},   {"h2_edges", h2}, {"edges", h.size()}};
  if (cfg.certify)
    meta["certificates"] = json::array({certify_q_free(h, q_pattern(k, r))});
  return std::move(h).with_meta(std::move(meta));
}

// ---------------------------------------------------------------------------
// Lift construction, k = 2r - 1
// ---------------------------------------------------------------------------

/// V1 = the base's vertices, V2 = n2 new ones. Edges are e ∪ T for e a base
/// edge and T an (r-1)-subset of V2.
struct lift_config {
  std::size_t r = 3;
  hypergraph base;
  std::size_t n2 = 0;
  bool certify = true;
};

inline hypergraph construct_lift(const lift_config &cfg) {
  const std::size_t r = cfg.r;
  if (r < 2)
    throw param_error("lift construction needs r >= 2");
  if (cfg.base.k() != r)
    throw param_error("lift construction: base must be r-uniform");
  if (auto copy = find_q_copy(cfg.base, q_pattern(r, r)))
    throw certificate_error("lift construction: base contains " + q_pattern(r, r).name(),
                            to_json(*copy, q_pattern(r, r)));
  if (auto pair = find_i_copy(cfg.base, i_pattern(r, r - 1)))
    throw certificate_error("lift construction: base contains " + i_pattern(r, r - 1).name(),
                            i_certificate_json(*pair, i_pattern(r, r - 1)));
  const std::size_t k = 2 * r - 1, n1 = cfg.base.n(), n = n1 + cfg.n2;
  std::vector<vertex> flat;
  for (std::size_t i = 0; i < cfg.base.size(); ++i)
    detail::for_each_combination(cfg.n2, r - 1, [&](std::span<const vertex> t) {
      auto e = cfg.base.edge(i);
      flat.insert(flat.end(), e.begin(), e.end());
      for (auto v : t)
        flat.push_back(static_cast<vertex>(n1 + v));
    });
  hypergraph h(n, k, std::move(flat));
  if (h.size() != cfg.base.size() * detail::binomial(cfg.n2, r - 1))
    throw invariant_error("construct_lift: edge count differs from |H1| C(n2, r-1)");
  json meta{{"construction", "lift"}, {"r", r},  {"k", k},
            {"n1", n1},               {"n2", cfg.n2}, {"base_edges", cfg.base.size()},
            {"base", cfg.base.edge_list()}, {"edges", h.size()}};
  if (cfg.certify)
    meta["certificates"] = json::array({certify_q_free(h, q_pattern(k, r))});
  return std::move(h).with_meta(std::move(meta));
}

// ---------------------------------------------------------------------------
// Centered family
// ---------------------------------------------------------------------------

/// Every k-set through vertex 0: C(n-1, k-1) edges.
inline hypergraph centered_family(std::size_t n, std::size_t k, bool certify = true) {
  if (k < 2 || n <= k)
    throw param_error("centered family needs n > k >= 2");
  std::vector<vertex> flat;
  detail::for_each_combination(n - 1, k - 1, [&](std::span<const vertex> c) {
    flat.push_back(0);
    for (auto v : c)
      flat.push_back(v + 1);
  });
  hypergraph h(n, k, std::move(flat));
  json meta{{"construction", "star"}, {"n", n}, {"k", k}, {"edges", h.size()}};
  if (certify)
    meta["certificates"] = json::array({certify_q_free(h, q_pattern(k, k))});
  return std::move(h).with_meta(std::move(meta));
}

/// Largest prime p with k < p <= floor(n / k).
inline std::uint64_t prime_select(std::uint64_t n, std::uint64_t k) {
  if (k == 0)
    throw param_error("prime_select: k must be positive");
  for (std::uint64_t p = n / k; p > k; --p)
    if (detail::is_prime(p))
      return p;
  throw param_error("prime_select: no prime in (k, n/k]");
}

} // namespace hypex
