#pragma once

#include <cstdint>
#include <vector>

#include "core.hpp"

namespace revprime {

/// The base g with exact powers g^0..g^K.
class BaseContext {
 public:
  /// max_power < 0 picks the largest K with g^K representable in 128 bits.
  explicit BaseContext(unsigned g, int max_power = -1) : g_(g) {
    require(g >= 2, "base g must be at least 2");
    pow_.push_back(1);
    const uint128 top = ~uint128(0);
    while (max_power < 0 || static_cast<int>(pow_.size()) <= max_power) {
      if (pow_.back() > top / g) break;
      pow_.push_back(pow_.back() * g);
    }
  }

  unsigned g() const { return g_; }
  unsigned max_power() const { return static_cast<unsigned>(pow_.size() - 1); }
  const std::vector<uint128>& pow_cache() const { return pow_; }

  uint128 pow(unsigned k) const {
    if (k >= pow_.size()) throw precondition_error("g^k exceeds the power cache");
    return pow_[k];
  }

  /// g^k as uint64 if it fits, otherwise throws
  std::uint64_t pow64(unsigned k) const {
    const uint128 p = pow(k);
    if (p >> 64) throw precondition_error("g^k does not fit 64 bits");
    return static_cast<std::uint64_t>(p);
  }

  std::vector<unsigned> digits_of(uint128 n) const {
    std::vector<unsigned> d;
    while (n) {
      d.push_back(static_cast<unsigned>(n % g_));
      n /= g_;
    }
    return d;
  }

  unsigned digit(uint128 n, unsigned i) const {
    if (i >= pow_.size()) return 0;
    return static_cast<unsigned>((n / pow_[i]) % g_);
  }

  unsigned len(uint128 n) const {
    unsigned l = 0;
    while (n) {
      ++l;
      n /= g_;
    }
    return l;
  }

  uint128 from_digits(const std::vector<unsigned>& d) const {
    uint128 n = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) n = n * g_ + *it;
    return n;
  }

  uint128 reverse(uint128 n) const {
    uint128 r = 0;
    while (n) {
      r = r * g_ + static_cast<unsigned>(n % g_);
      n /= g_;
    }
    return r;
  }

  /// Digits at positions >= L are ignored.
  uint128 reverse_relative(uint128 n, unsigned L) const {
    uint128 r = 0;
    for (unsigned i = 0; i < L; ++i) {
      r = r * g_ + static_cast<unsigned>(n % g_);
      n /= g_;
    }
    return r;
  }

  /// rev_L(n) mod q without forming rev_L(n); valid for any L.
  std::uint64_t reverse_relative_mod(std::uint64_t n, unsigned L, std::uint64_t q) const {
    std::uint64_t r = 0;
    const std::uint64_t gq = g_ % q;
    for (unsigned i = 0; i < L; ++i) {
      r = (mulmod(r, gq, q) + (n % g_) % q) % q;
      n /= g_;
    }
    return r;
  }

 private:
  unsigned g_;
  std::vector<uint128> pow_;
};

inline std::vector<unsigned> digits_of(uint128 n, const BaseContext& ctx) { return ctx.digits_of(n); }
inline uint128 reverse(uint128 n, const BaseContext& ctx) { return ctx.reverse(n); }
inline uint128 reverse_relative(uint128 n, unsigned L, const BaseContext& ctx) {
  return ctx.reverse_relative(n, L);
}

}  // namespace revprime
