#pragma once

// Shared numeric plumbing: exact fractional parts, e(x), ||x||, exact
// rationals, the portable RNG and the deterministic parallel helpers.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace revprime {

using uint128 = unsigned __int128;
using int128 = __int128;
using complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class cost_budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class degenerate_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class sieve_limit_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw precondition_error(what);
}

// ---------------------------------------------------------------------------
// Fractional parts
// ---------------------------------------------------------------------------

/// x - floor(x), exact for every finite double.
inline double frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// Distance to the nearest integer, with round-half-to-even.
inline double dist(double x) { return std::fabs(x - std::nearbyint(x)); }

/// e(x) = exp(2 pi i x), argument reduced mod 1 first.
inline complex unit(double x) {
  const double t = 2.0 * std::numbers::pi * frac(x);
  return {std::cos(t), std::sin(t)};
}

namespace detail {

// beta = mant * 2^-shift with mant < 2^53; shift <= 0 means beta is an integer.
struct DyadicSplit {
  std::uint64_t mant = 0;
  int shift = 0;
};

inline DyadicSplit split_dyadic(double beta) {
  DyadicSplit out;
  if (beta == 0.0) return out;
  int e = 0;
  const double m = std::frexp(beta, &e);
  out.mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  out.shift = 53 - e;
  return out;
}

inline double to_unit_interval(uint128 residue, int shift) {
  const double v = std::ldexp(static_cast<double>(residue), -shift);
  return v >= 1.0 ? 0.0 : v;
}

}  // namespace detail

/// n -> frac(beta * n) with the dyadic split of beta done once.
class FracMul {
 public:
  explicit FracMul(double beta) : beta_(frac(beta)) {
    const auto split = detail::split_dyadic(beta_);
    mant_ = split.mant;
    shift_ = split.shift;
    if (shift_ > 0 && shift_ < 128) mask_ = (uint128(1) << shift_) - 1;
  }

  double operator()(uint128 n) const {
    if (beta_ == 0.0 || n == 0 || shift_ <= 0) return 0.0;
    if (shift_ < 128) return detail::to_unit_interval((uint128(mant_) * n) & mask_, shift_);
    const long double v = static_cast<long double>(beta_) * static_cast<long double>(n);
    return static_cast<double>(v - std::floor(v));
  }

 private:
  double beta_;
  std::uint64_t mant_ = 0;
  int shift_ = 0;
  uint128 mask_ = 0;
};

/// frac(beta * n), correctly rounded from the exact product whenever the
/// binary denominator of beta is below 2^128 (all |beta| >= 2^-74).
inline double frac_mul(double beta, uint128 n) { return FracMul(beta)(n); }

/// Walks frac(beta * g^i) for i = 0, 1, 2, ... using exact dyadic residues.
class FracPowerWalker {
 public:
  FracPowerWalker(double beta, unsigned g) : g_(g) {
    beta = frac(beta);
    const auto split = detail::split_dyadic(beta);
    shift_ = split.shift;
    if (beta == 0.0 || shift_ <= 0) {
      zero_ = true;
    } else if (shift_ < 128) {
      mask_ = (uint128(1) << shift_) - 1;
      residue_ = uint128(split.mant) & mask_;
    } else {
      fallback_ = beta;
    }
  }

  double value() const {
    if (zero_) return 0.0;
    if (shift_ < 128) return detail::to_unit_interval(residue_, shift_);
    return static_cast<double>(fallback_);
  }

  void advance() {
    if (zero_) return;
    if (shift_ < 128) {
      residue_ = (residue_ * g_) & mask_;
    } else {
      // binary denominators beyond 2^128 only arise for |beta| < 2^-74
      fallback_ *= g_;
      fallback_ -= std::floor(fallback_);
    }
  }

 private:
  unsigned g_;
  int shift_ = 0;
  bool zero_ = false;
  uint128 mask_ = 0;
  uint128 residue_ = 0;
  long double fallback_ = 0;
};

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((uint128(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// g^k mod 2^128 (wrapping).
inline uint128 pow_wrap(std::uint64_t g, std::uint64_t k) {
  uint128 r = 1, b = g;
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t q) {
  std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

inline std::uint64_t euler_phi_trial(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Largest k with g^k <= x (x >= 1).
inline unsigned floor_log(std::uint64_t x, unsigned g) {
  unsigned k = 0;
  uint128 p = g;
  while (p <= x) {
    ++k;
    p *= g;
  }
  return k;
}

/// [theta * log x / log g] with a small guard against log rounding.
inline long floor_log_scaled(double x, unsigned g, double theta) {
  const long double v = theta * std::log(static_cast<long double>(x)) /
                        std::log(static_cast<long double>(g));
  return static_cast<long>(std::floor(v + 1e-12L));
}

// ---------------------------------------------------------------------------
// Exact rationals (small, for densities)
// ---------------------------------------------------------------------------

struct Rational {
  int128 num = 0;
  int128 den = 1;

  Rational() = default;
  Rational(int128 n, int128 d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    int128 a = num < 0 ? -num : num, b = den;
    while (b) {
      int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (num == 0) den = 1;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return {a.num * b.den, a.den * b.num};
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  double to_double() const {
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
  }
  std::string str() const {
    auto to_s = [](int128 v) {
      if (v == 0) return std::string("0");
      bool neg = v < 0;
      uint128 u = neg ? uint128(-v) : uint128(v);
      std::string s;
      while (u) {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
      }
      return neg ? "-" + s : s;
    };
    return den == 1 ? to_s(num) : to_s(num) + "/" + to_s(den);
  }
};

// ---------------------------------------------------------------------------
// RNG: splitmix64, portable and specified by algorithm
// ---------------------------------------------------------------------------

inline constexpr const char* kRngAlgorithm = "splitmix64";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return splitmix64(seed ^ splitmix64(v + 0x632BE59BD9B4E019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// uniform integer in [lo, hi]
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(span == 0 ? next() : next() % span);
  }

 private:
  std::uint64_t state_;
};

inline double hash_to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Deterministic parallelism
// ---------------------------------------------------------------------------

/// Runs fn(i) for i in [0, n) on `threads` workers. Each index is processed
/// in isolation, so results written to per-index slots are independent of
/// the thread count.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        if (failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Pairwise (tree) summation; the association order depends only on size.
template <typename T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = data[0];
    for (std::size_t i = 1; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

inline constexpr std::size_t kReductionBlock = 4096;

/// Sums term(n) for n in [begin, end) in fixed-size blocks, block partials
/// combined pairwise; identical bits for any thread count.
template <typename T, typename Term>
T blocked_sum(std::uint64_t begin, std::uint64_t end, unsigned threads, Term&& term) {
  if (end <= begin) return T{};
  const std::uint64_t count = end - begin;
  const std::size_t blocks = static_cast<std::size_t>((count + kReductionBlock - 1) / kReductionBlock);
  std::vector<T> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t lo = begin + b * kReductionBlock;
    const std::uint64_t hi = std::min<std::uint64_t>(end, lo + kReductionBlock);
    std::vector<T> local;
    local.reserve(static_cast<std::size_t>(hi - lo));
    for (std::uint64_t n = lo; n < hi; ++n) local.push_back(term(n));
    partial[b] = pairwise_sum(local);
  });
  return pairwise_sum(partial);
}

}  // namespace revprime
