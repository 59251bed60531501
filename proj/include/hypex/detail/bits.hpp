#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace hypex::detail {

/// Fixed-size bit vector sized at runtime.
class bits {
public:
  bits() = default;
  explicit bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_; }
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { w_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_)
      c += std::popcount(x);
    return c;
  }

  /// Number of set bits at positions >= from.
  std::size_t count_from(std::size_t from) const {
    if (from >= n_)
      return 0;
    std::size_t c = std::popcount(w_[from / 64] & (~std::uint64_t{0} << (from % 64)));
    for (std::size_t i = from / 64 + 1; i < w_.size(); ++i)
      c += std::popcount(w_[i]);
    return c;
  }

  /// First set bit at position >= from, or size() when none.
  std::size_t next(std::size_t from) const {
    if (from >= n_)
      return n_;
    std::size_t i = from / 64;
    std::uint64_t x = w_[i] & (~std::uint64_t{0} << (from % 64));
    while (true) {
      if (x)
        return i * 64 + std::countr_zero(x);
      if (++i == w_.size())
        return n_;
      x = w_[i];
    }
  }

  bits &operator&=(const bits &o) {
    for (std::size_t i = 0; i < w_.size(); ++i)
      w_[i] &= o.w_[i];
    return *this;
  }

  bits &operator|=(const bits &o) {
    for (std::size_t i = 0; i < w_.size(); ++i)
      w_[i] |= o.w_[i];
    return *this;
  }

  /// this &= ~o
  bits &remove(const bits &o) {
    for (std::size_t i = 0; i < w_.size(); ++i)
      w_[i] &= ~o.w_[i];
    return *this;
  }

  bool intersects(const bits &o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i])
        return true;
    return false;
  }

  /// Clears every position < upto.
  void clear_below(std::size_t upto) {
    for (std::size_t i = 0; i < w_.size() && i * 64 < upto; ++i) {
      if ((i + 1) * 64 <= upto)
        w_[i] = 0;
      else
        w_[i] &= ~std::uint64_t{0} << (upto % 64);
    }
  }

  friend bool operator==(const bits &, const bits &) = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

} // namespace hypex::detail
