#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace hypex {

/// Node budget for exact searches. Deterministic: counts search-tree nodes,
/// never wall-clock time.
struct search_budget {
  std::uint64_t nodes = default_nodes();

  /// HYPEX_BUDGET if set and numeric, else 200 million nodes.
  static std::uint64_t default_nodes() {
    if (const char *env = std::getenv("HYPEX_BUDGET")) {
      try {
        return std::stoull(env);
      } catch (...) {
      }
    }
    return 200'000'000ull;
  }
};

} // namespace hypex
