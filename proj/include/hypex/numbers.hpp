#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "budget.hpp"
#include "detail/bits.hpp"
#include "detail/combinatorics.hpp"
#include "error.hpp"
#include "hypergraph.hpp"

namespace hypex {

// ---------------------------------------------------------------------------
// k-good sets in Z_p
// ---------------------------------------------------------------------------

enum class provenance { exact, behrend, user };

inline std::string to_string(provenance p) {
  switch (p) {
  case provenance::exact:
    return "exact";
  case provenance::behrend:
    return "behrend";
  case provenance::user:
    return "user";
  }
  return "user";
}

/// S ⊆ Z_p such that m1+m2+m3 ≡ 0 and m1 s1 + m2 s2 + m3 s3 ≡ 0 (mod p),
/// with every m_i in ±{1..k}, force s1 = s2 = s3.
struct good_set {
  std::uint64_t p = 0;
  std::uint64_t k = 0;
  std::vector<std::uint64_t> elements;
  hypex::provenance provenance = provenance::user;
  bool degenerate = false; ///< construction fell back to {0}
  json meta = json::object();
};

/// Witness that a set is not k-good.
struct good_set_violation {
  std::array<std::int64_t, 3> m{};
  std::array<std::uint64_t, 3> s{};
};

namespace detail {

inline void require_good_params(std::uint64_t p, std::uint64_t k) {
  if (k < 2)
    throw param_error("k-good sets need k >= 2");
  if (!is_prime(p))
    throw param_error("k-good sets need p prime (got " + std::to_string(p) + ")");
  if (p <= k)
    throw param_error("k-good sets need p > k");
}

/// Coefficient residues ±{1..k} mod p, each with its first integer
/// representative in the order 1, -1, 2, -2, ...
inline std::vector<std::pair<std::int64_t, std::int64_t>> coefficient_residues(std::uint64_t p,
                                                                               std::uint64_t k) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out; // (residue, representative)
  std::vector<char> seen(p, 0);
  for (std::int64_t v = 1; v <= static_cast<std::int64_t>(k); ++v)
    for (std::int64_t m : {v, -v}) {
      auto res = mod(m, static_cast<std::int64_t>(p));
      if (!seen[res]) {
        seen[res] = 1;
        out.emplace_back(res, m);
      }
    }
  return out;
}

inline std::vector<std::uint64_t> checked_set(std::span<const std::uint64_t> s, std::uint64_t p) {
  std::vector<std::uint64_t> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw param_error("set has repeated elements");
  if (!v.empty() && v.back() >= p)
    throw param_error("set element out of range [0, p)");
  return v;
}

} // namespace detail

/// First violation in iteration order, or nothing when S is k-good.
/// For each (m1, m2) the residue of m3 is forced; for each (s1, s2) the
/// value s3 is solved through the inverse of m3. O(k^2 |S|^2).
inline std::optional<good_set_violation>
find_good_set_violation(std::span<const std::uint64_t> set, std::uint64_t p, std::uint64_t k) {
  detail::require_good_params(p, k);
  auto s = detail::checked_set(set, p);
  const auto P = static_cast<std::int64_t>(p);
  std::vector<char> member(p, 0);
  for (auto x : s)
    member[x] = 1;
  auto coeffs = detail::coefficient_residues(p, k);
  std::vector<std::int64_t> rep_of(p, 0);
  for (auto [res, rep] : coeffs)
    rep_of[res] = rep;
  for (auto [r1, m1] : coeffs)
    for (auto [r2, m2] : coeffs) {
      auto r3 = detail::mod(-(r1 + r2), P);
      if (r3 == 0 || rep_of[r3] == 0)
        continue;
      auto inv3 = detail::mod_inverse(r3, P);
      for (auto s1 : s)
        for (auto s2 : s) {
          auto lhs = detail::mod(r1 * static_cast<std::int64_t>(s1) + r2 * static_cast<std::int64_t>(s2), P);
          auto s3 = static_cast<std::uint64_t>(detail::mod(-lhs * inv3, P));
          if (member[s3] && !(s1 == s2 && s2 == s3))
            return good_set_violation{{m1, m2, rep_of[r3]}, {s1, s2, s3}};
        }
    }
  return std::nullopt;
}

inline bool is_k_good(std::span<const std::uint64_t> set, std::uint64_t p, std::uint64_t k) {
  return !find_good_set_violation(set, p, k).has_value();
}

/// Re-validates a violation certificate arithmetically.
inline bool check_violation(const good_set_violation &v, std::span<const std::uint64_t> set,
                            std::uint64_t p, std::uint64_t k) {
  const auto P = static_cast<std::int64_t>(p);
  for (auto m : v.m)
    if (m == 0 || m > static_cast<std::int64_t>(k) || m < -static_cast<std::int64_t>(k))
      return false;
  for (auto x : v.s)
    if (std::find(set.begin(), set.end(), x) == set.end())
      return false;
  if (v.s[0] == v.s[1] && v.s[1] == v.s[2])
    return false;
  if (detail::mod(v.m[0] + v.m[1] + v.m[2], P) != 0)
    return false;
  std::int64_t sum = 0;
  for (int i = 0; i < 3; ++i)
    sum += v.m[i] * static_cast<std::int64_t>(v.s[i]);
  return detail::mod(sum, P) == 0;
}

namespace detail {

/// conflict[x * p + y] marks every z completing {x, y, z} into a violation.
/// Violations always use three distinct elements: with two equal the
/// relation collapses to m (s - s') ≡ 0 with m ≢ 0.
inline std::vector<bits> good_set_conflicts(std::uint64_t p, std::uint64_t k) {
  const auto P = static_cast<std::int64_t>(p);
  std::vector<bits> conflict(p * p, bits(p));
  auto coeffs = coefficient_residues(p, k);
  std::vector<char> is_coeff(p, 0);
  for (auto [res, rep] : coeffs)
    is_coeff[res] = 1;
  for (auto [r1, m1] : coeffs)
    for (auto [r2, m2] : coeffs) {
      auto r3 = mod(-(r1 + r2), P);
      if (r3 == 0 || !is_coeff[r3])
        continue;
      auto inv3 = mod_inverse(r3, P);
      for (std::int64_t s1 = 0; s1 < P; ++s1)
        for (std::int64_t s2 = 0; s2 < P; ++s2) {
          if (s1 == s2)
            continue;
          auto s3 = mod(-(r1 * s1 + r2 * s2) * inv3, P);
          if (s3 == s1 || s3 == s2)
            continue;
          conflict[s1 * p + s2].set(s3);
          conflict[s2 * p + s1].set(s3);
          conflict[s1 * p + s3].set(s2);
          conflict[s3 * p + s1].set(s2);
          conflict[s2 * p + s3].set(s1);
          conflict[s3 * p + s2].set(s1);
        }
    }
  return conflict;
}

} // namespace detail

/// A maximum k-good set (its size is s_k(p)), lexicographically least among
/// maxima.
///
/// Good sets are closed under x -> a x + b (a ≠ 0), so the least optimum
/// starts 0, 1 and the search fixes both. Branch-and-bound over the
/// remaining residues in increasing order, pruning on the count of still
/// compatible candidates.
inline good_set max_good_set(std::uint64_t p, std::uint64_t k, search_budget budget = {}) {
  detail::require_good_params(p, k);
  if (p > 521)
    throw param_error("max_good_set: p too large for exhaustive search");
  auto conflict = detail::good_set_conflicts(p, k);

  std::vector<std::uint64_t> chosen{0, 1}, best = chosen;
  std::uint64_t nodes = 0;

  auto dfs = [&](auto &self, const detail::bits &allowed) -> void {
    if (++nodes > budget.nodes)
      throw budget_error("max_good_set: node budget exhausted",
                         json{{"p", p}, {"k", k}, {"S", best}, {"lower_bound", best.size()}});
    if (chosen.size() > best.size())
      best = chosen;
    for (std::size_t x = allowed.next(0); x < p; x = allowed.next(x + 1)) {
      if (chosen.size() + allowed.count_from(x) <= best.size())
        return;
      detail::bits next = allowed;
      next.clear_below(x + 1);
      for (auto y : chosen)
        next.remove(conflict[x * p + y]);
      chosen.push_back(x);
      self(self, next);
      chosen.pop_back();
    }
  };

  detail::bits allowed(p);
  for (std::uint64_t x = 2; x < p; ++x)
    if (!conflict[0 * p + 1].test(x))
      allowed.set(x);
  dfs(dfs, allowed);

  good_set out{p, k, best, provenance::exact, false, {{"nodes", nodes}}};
  if (!is_k_good(out.elements, p, k))
    throw invariant_error("max_good_set: optimum failed is_k_good");
  return out;
}

/// Parameters of the digit-sphere construction.
///
/// Elements are sums Σ d_j base^j with 0 <= d_j <= digit_bound over
/// `dimension` digits, all with the same Σ d_j^2. In safe mode every
/// element stays below p / (2k) and 6k * digit_bound < base, which rules
/// out modular wraparound and digit carries in any relation with
/// coefficients in ±{1..2k}; the sphere then forces s1 = s2 = s3. Tuned
/// mode drops both limits, sweeps every base and digit bound, and keeps
/// only spheres that pass the exhaustive k-good check.
struct behrend_policy {
  bool tuned = false;
  std::uint64_t base = 0;        ///< 0 = sweep
  std::uint64_t digit_bound = 0; ///< 0 = sweep
  std::uint64_t dimension = 0;   ///< 0 = sweep
};

namespace detail {

struct sphere_pick {
  std::vector<std::uint64_t> set;
  std::uint64_t base = 0, digit_bound = 0, dimension = 0, radius = 0;
};

/// Every sphere of digit vectors for one (base, bound, dimension) whose
/// values stay <= limit, largest first (ties: smaller radius first).
inline std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>
digit_spheres(std::uint64_t base, std::uint64_t bound, std::uint64_t dim, std::uint64_t limit) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_radius;
  std::vector<std::uint64_t> digits(dim, 0);
  while (true) {
    std::uint64_t value = 0, radius = 0, power = 1;
    for (std::size_t j = 0; j < dim; ++j) {
      value += digits[j] * power;
      radius += digits[j] * digits[j];
      power *= base;
    }
    if (value <= limit)
      by_radius[radius].push_back(value);
    std::size_t j = 0;
    while (j < dim && digits[j] == bound)
      digits[j++] = 0;
    if (j == dim)
      break;
    ++digits[j];
  }
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> out(by_radius.begin(),
                                                                        by_radius.end());
  for (auto &[r, s] : out)
    std::sort(s.begin(), s.end());
  std::stable_sort(out.begin(), out.end(),
                   [](auto &a, auto &b) { return a.second.size() > b.second.size(); });
  return out;
}

inline std::uint64_t max_digit_value(std::uint64_t base, std::uint64_t bound, std::uint64_t dim) {
  std::uint64_t v = 0, power = 1;
  for (std::size_t j = 0; j < dim; ++j) {
    v += bound * power;
    power *= base;
  }
  return v;
}

} // namespace detail

/// A k-good set from the digit-sphere construction; always re-verified.
inline good_set behrend_good_set(std::uint64_t p, std::uint64_t k, behrend_policy policy = {}) {
  detail::require_good_params(p, k);
  const std::uint64_t limit = policy.tuned ? p - 1 : (p - 1) / (2 * k);
  if (!policy.tuned && policy.base && policy.digit_bound && 6 * k * policy.digit_bound >= policy.base)
    throw param_error("behrend_good_set: safe mode needs 6k * digit_bound < base");

  detail::sphere_pick best;
  best.set = {0};
  auto consider = [&](std::uint64_t base, std::uint64_t bound, std::uint64_t dim) {
    for (auto &[radius, set] : detail::digit_spheres(base, bound, dim, limit)) {
      if (set.size() <= best.set.size())
        break;
      if (policy.tuned && !is_k_good(set, p, k))
        continue;
      best = {set, base, bound, dim, radius};
      break;
    }
  };

  const std::uint64_t base_lo = policy.base ? policy.base : 2;
  const std::uint64_t base_hi = policy.base ? policy.base : std::max<std::uint64_t>(limit, 2);
  for (std::uint64_t base = base_lo; base <= base_hi; ++base) {
    std::uint64_t bound_hi = policy.tuned ? base - 1 : (base - 1) / (6 * k);
    if (policy.digit_bound)
      bound_hi = std::min(bound_hi, policy.digit_bound);
    std::uint64_t bound_lo = policy.digit_bound ? bound_hi : 1;
    for (std::uint64_t bound = bound_lo; bound >= 1 && bound <= bound_hi; ++bound) {
      if (policy.dimension) {
        if (detail::max_digit_value(base, bound, policy.dimension) <= limit || policy.dimension == 1)
          consider(base, bound, policy.dimension);
        continue;
      }
      // one digit only gives singleton spheres
      for (std::uint64_t dim = 2; detail::max_digit_value(base, bound, dim) <= limit; ++dim)
        consider(base, bound, dim);
    }
  }

  good_set out;
  out.p = p;
  out.k = k;
  out.provenance = provenance::behrend;
  out.elements = best.set;
  out.degenerate = best.set.size() <= 1;
  out.meta = {{"mode", policy.tuned ? "tuned" : "safe"},
              {"base", best.base},
              {"digit_bound", best.digit_bound},
              {"dimension", best.dimension},
              {"radius", best.radius}};
  if (out.degenerate) {
    out.elements = {0};
    out.meta["warning"] = "construction degenerate at this p; using {0}";
  }
  if (!is_k_good(out.elements, p, k))
    throw invariant_error("behrend_good_set: constructed set failed is_k_good");
  return out;
}

inline json to_json(const good_set &g) {
  json j{{"p", g.p}, {"k", g.k}, {"S", g.elements}, {"provenance", to_string(g.provenance)}};
  if (g.degenerate)
    j["degenerate"] = true;
  if (!g.meta.empty())
    j["meta"] = g.meta;
  return j;
}

inline json to_json(const good_set_violation &v) {
  return {{"m", v.m}, {"s", v.s}};
}

// ---------------------------------------------------------------------------
// AP_k-free sets
// ---------------------------------------------------------------------------

struct ap_free_set {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::vector<std::uint64_t> elements;
  json meta = json::object();
};

/// First k-term arithmetic progression (by start, then difference) inside A,
/// or nothing when A is AP_k-free.
inline std::optional<std::vector<std::uint64_t>>
find_progression(std::span<const std::uint64_t> a, std::uint64_t n, std::uint64_t k) {
  if (k < 3)
    throw param_error("find_progression: k must be at least 3");
  std::vector<std::uint64_t> v(a.begin(), a.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (!v.empty() && (v.front() < 1 || v.back() > n))
    throw param_error("find_progression: elements must lie in [1, n]");
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const auto d = v[j] - v[i];
      std::vector<std::uint64_t> prog{v[i], v[j]};
      while (prog.size() < k && std::binary_search(v.begin(), v.end(), prog.back() + d))
        prog.push_back(prog.back() + d);
      if (prog.size() == k)
        return prog;
    }
  return std::nullopt;
}

inline bool is_ap_free(std::span<const std::uint64_t> a, std::uint64_t n, std::uint64_t k) {
  return !find_progression(a, n, k).has_value();
}

/// A maximum AP_k-free subset of [n] (its size is r_k(n)), lexicographically
/// least. Any optimum can be shifted to contain 1, so 1 is fixed. Solves
/// every prefix length in turn; r_k(L) for L < n bounds how many elements
/// an interval of length L can still contribute.
inline ap_free_set max_ap_free(std::uint64_t n, std::uint64_t k, search_budget budget = {}) {
  if (k < 3)
    throw param_error("max_ap_free: k must be at least 3");
  if (n > 512)
    throw param_error("max_ap_free: n too large for exhaustive search");
  std::vector<std::uint64_t> r(n + 1, 0);
  std::vector<std::uint64_t> best_set;
  std::uint64_t nodes = 0;
  std::vector<char> in(n + 2, 0);

  for (std::uint64_t len = 1; len <= n; ++len) {
    std::vector<std::uint64_t> chosen{1}, best{1};
    std::fill(in.begin(), in.end(), 0);
    in[1] = 1;
    auto closes_progression = [&](std::uint64_t x) {
      for (auto y : chosen) {
        std::uint64_t d = x - y, run = 2;
        while (run < k && y >= d * (run - 1) + 1 && in[y - d * (run - 1)])
          ++run;
        if (run == k)
          return true;
      }
      return false;
    };
    auto dfs = [&](auto &self, std::uint64_t from) -> void {
      if (++nodes > budget.nodes)
        throw budget_error("max_ap_free: node budget exhausted",
                           json{{"n", n}, {"k", k}, {"A", best}, {"lower_bound", best.size()}});
      if (chosen.size() > best.size())
        best = chosen;
      for (std::uint64_t x = from; x <= len; ++x) {
        if (chosen.size() + r[len - x + 1] <= best.size())
          return;
        if (closes_progression(x))
          continue;
        chosen.push_back(x);
        in[x] = 1;
        self(self, x + 1);
        in[x] = 0;
        chosen.pop_back();
      }
    };
    dfs(dfs, 2);
    r[len] = best.size();
    best_set = best;
  }
  ap_free_set out{n, k, n == 0 ? std::vector<std::uint64_t>{} : best_set, {{"nodes", nodes}}};
  if (!is_ap_free(out.elements, n, k))
    throw invariant_error("max_ap_free: optimum contains a progression");
  return out;
}

inline json to_json(const ap_free_set &a) {
  return {{"n", a.n}, {"k", a.k}, {"A", a.elements}, {"provenance", "exact"}, {"meta", a.meta}};
}

// ---------------------------------------------------------------------------
// (n, r, t)-packings
// ---------------------------------------------------------------------------

/// r-sets on [n] with pairwise intersections below t.
struct packing {
  std::size_t n = 0, r = 0, t = 0;
  hypergraph edges;
};

namespace detail {

inline void require_packing_params(std::size_t n, std::size_t r, std::size_t t) {
  if (!(n >= r && r >= t && t >= 1))
    throw param_error("packing needs n >= r >= t >= 1");
}

/// Position tuples of all t-subsets of an r-set.
inline std::vector<std::vector<std::uint8_t>> subset_positions(std::size_t r, std::size_t t) {
  std::vector<std::vector<std::uint8_t>> out;
  for_each_combination(r, t, [&](std::span<const vertex> c) {
    out.emplace_back(c.begin(), c.end());
  });
  return out;
}

} // namespace detail

/// The greedy packing over r-sets in lexicographic order. It is maximal, so
/// it has at least C(n,t)/C(r,t)^2 edges; that floor is checked.
inline packing greedy_packing(std::size_t n, std::size_t r, std::size_t t) {
  detail::require_packing_params(n, r, t);
  const auto total_t = detail::binomial(n, t);
  if (total_t > (std::uint64_t{1} << 32))
    throw param_error("greedy_packing: too many t-subsets");
  std::vector<std::vector<std::uint64_t>> choose(n + 1, std::vector<std::uint64_t>(t + 2, 0));
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = 0; b <= t + 1; ++b)
      choose[a][b] = detail::binomial(a, b);
  const auto positions = detail::subset_positions(r, t);
  std::vector<char> covered(total_t, 0);
  std::vector<vertex> flat;
  std::vector<std::uint64_t> ranks(positions.size());
  detail::for_each_combination(n, r, [&](std::span<const vertex> c) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      std::uint64_t rank = 0;
      for (std::size_t j = 0; j < t; ++j)
        rank += choose[c[positions[i][j]]][j + 1];
      if (covered[rank])
        return;
      ranks[i] = rank;
    }
    for (auto rank : ranks)
      covered[rank] = 1;
    flat.insert(flat.end(), c.begin(), c.end());
  });
  packing out{n, r, t, hypergraph(n, r, std::move(flat))};
  const auto per_edge = detail::binomial(r, t);
  if (static_cast<unsigned __int128>(out.edges.size()) * per_edge * per_edge < total_t)
    throw invariant_error("greedy_packing: size below C(n,t)/C(r,t)^2");
  return out;
}

/// A maximum packing, P(n, r, t), by branch-and-bound. Candidates are the
/// r-sets in lexicographic order; the first edge is fixed to {0..r-1}. The
/// bound is the smaller of the compatible-candidate count and the number of
/// t-sets those candidates still cover divided by C(r, t).
inline packing exact_max_packing(std::size_t n, std::size_t r, std::size_t t,
                                 search_budget budget = {}) {
  detail::require_packing_params(n, r, t);
  const auto cand_count = detail::binomial(n, r);
  const auto t_count = detail::binomial(n, t);
  if (cand_count > 4096 || t_count > 4096)
    throw param_error("exact_max_packing: instance too large");
  std::vector<std::vector<vertex>> cands;
  detail::for_each_combination(n, r, [&](std::span<const vertex> c) {
    cands.emplace_back(c.begin(), c.end());
  });
  const std::size_t m = cands.size();
  std::vector<detail::bits> conflicts(m, detail::bits(m)), tsets(m, detail::bits(t_count));
  for (std::size_t a = 0; a < m; ++a) {
    detail::for_each_subset_of(cands[a], t, [&](std::span<const vertex> s) {
      tsets[a].set(detail::colex_rank(s));
    });
    for (std::size_t b = 0; b < m; ++b) {
      std::size_t common = 0;
      for (auto v : cands[a])
        common += std::binary_search(cands[b].begin(), cands[b].end(), v);
      if (a != b && common >= t)
        conflicts[a].set(b);
    }
  }
  const auto per_edge = detail::binomial(r, t);

  std::vector<std::size_t> chosen{0}, best{0};
  std::uint64_t nodes = 0;
  auto dfs = [&](auto &self, const detail::bits &allowed) -> void {
    if (++nodes > budget.nodes) {
      std::vector<std::vector<vertex>> es;
      for (auto i : best)
        es.push_back(cands[i]);
      throw budget_error("exact_max_packing: node budget exhausted",
                         json{{"n", n}, {"r", r}, {"t", t}, {"edges", es}, {"lower_bound", best.size()}});
    }
    if (chosen.size() > best.size())
      best = chosen;
    for (std::size_t x = allowed.next(0); x < m; x = allowed.next(x + 1)) {
      detail::bits rest = allowed;
      rest.clear_below(x);
      std::size_t bound = rest.count();
      if (chosen.size() + bound <= best.size())
        return;
      detail::bits reach(t_count);
      for (std::size_t y = rest.next(0); y < m; y = rest.next(y + 1))
        reach |= tsets[y];
      if (chosen.size() + reach.count() / per_edge <= best.size())
        return;
      detail::bits next = rest;
      next.clear_below(x + 1);
      next.remove(conflicts[x]);
      chosen.push_back(x);
      self(self, next);
      chosen.pop_back();
    }
  };
  detail::bits allowed(m);
  for (std::size_t x = 1; x < m; ++x)
    if (!conflicts[0].test(x))
      allowed.set(x);
  dfs(dfs, allowed);

  std::vector<std::vector<vertex>> edges;
  for (auto i : best)
    edges.push_back(cands[i]);
  packing out{n, r, t, hypergraph(n, r, edges).with_meta({{"nodes", nodes}})};
  return out;
}

inline bool is_packing(const hypergraph &h, std::size_t t) {
  for (std::size_t a = 0; a < h.size(); ++a)
    for (std::size_t b = a + 1; b < h.size(); ++b)
      if (h.intersection_size(a, b) >= t)
        return false;
  return true;
}

} // namespace hypex
