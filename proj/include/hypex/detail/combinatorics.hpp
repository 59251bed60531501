#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "../error.hpp"

namespace hypex {

using vertex = std::uint32_t;

namespace detail {

/// Binomial coefficient, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

/// Deterministic trial-division primality; inputs here stay small.
inline bool is_prime(std::uint64_t p) {
  if (p < 2)
    return false;
  if (p % 2 == 0)
    return p == 2;
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0)
      return false;
  return true;
}

inline std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

/// Inverse of a modulo prime p; a must be nonzero mod p.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = mod(a, p);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1)
    throw param_error("mod_inverse: value not invertible");
  return mod(t, p);
}

/// Advances `c` (strictly increasing, values < n) to the next combination in
/// lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<vertex> &c, std::size_t n) {
  const std::size_t k = c.size();
  if (k == 0)
    return false;
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j)
        c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Calls f(span) for every k-subset of {0..n-1} in lexicographic order.
template <class F> void for_each_combination(std::size_t n, std::size_t k, F &&f) {
  if (k > n)
    return;
  std::vector<vertex> c(k);
  std::iota(c.begin(), c.end(), vertex{0});
  do {
    f(std::span<const vertex>(c));
  } while (next_combination(c, n));
}

/// Calls f(subset) for every s-subset (as index positions) of `items`.
template <class F>
void for_each_subset_of(std::span<const vertex> items, std::size_t s, F &&f) {
  if (s > items.size())
    return;
  std::vector<vertex> pick(s);
  std::vector<vertex> idx(s);
  std::iota(idx.begin(), idx.end(), vertex{0});
  do {
    for (std::size_t i = 0; i < s; ++i)
      pick[i] = items[idx[i]];
    f(std::span<const vertex>(pick));
  } while (next_combination(idx, items.size()));
}

/// Colex rank of a sorted subset; a bijection onto [0, C(n, |c|)).
inline std::uint64_t colex_rank(std::span<const vertex> c) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    r += binomial(c[i], i + 1);
  return r;
}

/// Falling factorial n (n-1) ... (n-k+1).
inline unsigned __int128 falling(std::uint64_t n, std::uint64_t k) {
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (n < i)
      return 0;
    acc *= (n - i);
  }
  return acc;
}

} // namespace detail
} // namespace hypex
