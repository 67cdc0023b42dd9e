#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace revprime {

/// Smallest-prime-factor table on [0, limit]; spf[0] = spf[1] = 0.
class PrimeTable {
 public:
  static constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t(2) << 30;
  static constexpr std::uint32_t kCacheVersion = 1;
  static constexpr char kCacheMagic[8] = {'R', 'V', 'P', 'S', 'P', 'F', '\0', '\0'};
  static constexpr std::uint64_t kSegment = std::uint64_t(1) << 16;

  PrimeTable() = default;

  static PrimeTable build(std::uint64_t limit, unsigned threads = 1,
                          std::uint64_t memory_budget = kDefaultMemoryBudget) {
    require(limit >= 2, "sieve limit must be at least 2");
    if (limit >= (std::uint64_t(1) << 32) - 1)
      throw sieve_limit_error("sieve limit must stay below 2^32");
    if ((limit + 1) * sizeof(std::uint32_t) > memory_budget)
      throw sieve_limit_error("sieve limit " + std::to_string(limit) + " exceeds the memory budget");

    PrimeTable t;
    t.limit_ = limit;
    t.spf_.assign(limit + 1, 0);

    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    while (root * root > limit) --root;
    while ((root + 1) * (root + 1) <= limit) ++root;

    // base primes up to sqrt(limit)
    std::vector<std::uint32_t> base;
    {
      std::vector<bool> composite(root + 1, false);
      for (std::uint64_t p = 2; p <= root; ++p) {
        if (composite[p]) continue;
        base.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= root; m += p) composite[m] = true;
      }
    }

    const std::uint64_t segments = (limit + 1 + kSegment - 1) / kSegment;
    parallel_for(segments, threads, [&](std::size_t s) {
      const std::uint64_t lo = s * kSegment;
      const std::uint64_t hi = std::min<std::uint64_t>(limit + 1, lo + kSegment);
      std::uint32_t* out = t.spf_.data();
      for (std::uint32_t p : base) {
        const std::uint64_t pp = std::uint64_t(p) * p;
        if (pp >= hi) break;
        std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
        for (std::uint64_t m = start; m < hi; m += p)
          if (out[m] == 0) out[m] = p;
      }
      for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n < hi; ++n)
        if (out[n] == 0) out[n] = static_cast<std::uint32_t>(n);
    });
    return t;
  }

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& raw() const { return spf_; }

  void check(std::uint64_t n) const {
    if (n > limit_)
      throw sieve_limit_error(std::to_string(n) + " is beyond the sieve limit " + std::to_string(limit_));
  }

  std::uint32_t spf(std::uint64_t n) const {
    check(n);
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const {
    check(n);
    return n >= 2 && spf_[n] == n;
  }

  std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) const {
    check(n);
    std::vector<std::pair<std::uint64_t, unsigned>> f;
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.emplace_back(p, e);
    }
    return f;
  }

  int mu(std::uint64_t n) const {
    check(n);
    if (n == 0) return 0;
    int s = 1;
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      n /= p;
      if (n % p == 0) return 0;
      s = -s;
    }
    return s;
  }

  double von_mangoldt(std::uint64_t n) const {
    check(n);
    if (n < 2) return 0.0;
    const std::uint32_t p = spf_[n];
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }

  std::uint64_t tau(std::uint64_t n) const {
    if (n == 0) return 0;
    std::uint64_t t = 1;
    for (auto [p, e] : factorize(n)) t *= e + 1;
    return t;
  }

  std::uint64_t totient(std::uint64_t n) const {
    if (n == 0) return 0;
    std::uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
  }

  /// divisors of n in increasing order
  std::vector<std::uint64_t> divisors(std::uint64_t n) const {
    std::vector<std::uint64_t> d{1};
    for (auto [p, e] : factorize(n)) {
      const std::size_t base = d.size();
      std::uint64_t pk = 1;
      for (unsigned k = 1; k <= e; ++k) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
      }
    }
    std::sort(d.begin(), d.end());
    return d;
  }

  std::uint64_t prime_count(std::uint64_t x) const {
    x = std::min(x, limit_);
    std::uint64_t c = 0;
    for (std::uint64_t n = 2; n <= x; ++n) c += spf_[n] == n;
    return c;
  }

  std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const {
    std::vector<std::uint64_t> out;
    if (hi == 0) return out;
    check(hi - 1);
    for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n < hi; ++n)
      if (spf_[n] == n) out.push_back(n);
    return out;
  }

  // -- persistence ----------------------------------------------------------

  static std::string cache_file_name(std::uint64_t limit) { return "spf_" + std::to_string(limit) + ".bin"; }

  bool save(const std::filesystem::path& path) const {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) return false;
      os.write(kCacheMagic, sizeof kCacheMagic);
      const std::uint32_t version = kCacheVersion;
      os.write(reinterpret_cast<const char*>(&version), sizeof version);
      os.write(reinterpret_cast<const char*>(&limit_), sizeof limit_);
      os.write(reinterpret_cast<const char*>(spf_.data()),
               static_cast<std::streamsize>(spf_.size() * sizeof(std::uint32_t)));
      if (!os) return false;
    }
    std::filesystem::rename(tmp, path, ec);
    return !ec;
  }

  /// nullopt on any header mismatch or short read
  static std::optional<PrimeTable> load(const std::filesystem::path& path, std::uint64_t limit) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    std::uint32_t version = 0;
    std::uint64_t stored = 0;
    is.read(magic, sizeof magic);
    is.read(reinterpret_cast<char*>(&version), sizeof version);
    is.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (!is || std::memcmp(magic, kCacheMagic, sizeof magic) != 0 || version != kCacheVersion ||
        stored != limit)
      return std::nullopt;
    PrimeTable t;
    t.limit_ = limit;
    t.spf_.resize(limit + 1);
    is.read(reinterpret_cast<char*>(t.spf_.data()),
            static_cast<std::streamsize>(t.spf_.size() * sizeof(std::uint32_t)));
    if (!is || is.peek() != std::char_traits<char>::eof()) return std::nullopt;
    return t;
  }

  /// Uses $REVPRIME_CACHE_DIR when set; a bad cache is rebuilt silently.
  static PrimeTable cached(std::uint64_t limit, unsigned threads = 1,
                           std::uint64_t memory_budget = kDefaultMemoryBudget) {
    const char* dir = std::getenv("REVPRIME_CACHE_DIR");
    if (!dir || !*dir) return build(limit, threads, memory_budget);
    const std::filesystem::path path = std::filesystem::path(dir) / cache_file_name(limit);
    if (auto t = load(path, limit)) return std::move(*t);
    PrimeTable t = build(limit, threads, memory_budget);
    t.save(path);
    return t;
  }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

// ---------------------------------------------------------------------------
// Vaughan decomposition of Lambda(n)
// ---------------------------------------------------------------------------

struct VaughanTerms {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double z = 0;
  double total() const { return a1 + a2 + a3 + a4; }
};

inline bool at_most(std::uint64_t d, double z) { return static_cast<double>(d) <= z; }

/// c_2(n) = sum_{d | n, d > z} Lambda(d)
inline double vaughan_c2(std::uint64_t n, double z, const PrimeTable& pt) {
  double s = 0;
  for (auto d : pt.divisors(n))
    if (!at_most(d, z)) s += pt.von_mangoldt(d);
  return s;
}

/// c_3(n) = sum_{dm = n, d, m <= z} mu(d) Lambda(m)
inline double vaughan_c3(std::uint64_t n, double z, const PrimeTable& pt) {
  double s = 0;
  for (auto d : pt.divisors(n)) {
    const std::uint64_t m = n / d;
    if (at_most(d, z) && at_most(m, z)) s += pt.mu(d) * pt.von_mangoldt(m);
  }
  return s;
}

inline VaughanTerms vaughan_terms(std::uint64_t n, double z, const PrimeTable& pt) {
  require(n >= 1, "vaughan terms need n >= 1");
  require(z > 0, "vaughan terms need z > 0");
  pt.check(n);
  VaughanTerms t;
  t.z = z;
  const auto divs = pt.divisors(n);
  for (auto d : divs) {
    const std::uint64_t m = n / d;
    if (at_most(d, z)) t.a1 += pt.mu(d) * std::log(static_cast<double>(m));
    if (!at_most(d, z) && !at_most(m, z)) t.a2 += pt.mu(d) * vaughan_c2(m, z, pt);
    if (at_most(d, z * z)) t.a3 -= vaughan_c3(d, z, pt);
  }
  if (at_most(n, z)) t.a4 = pt.von_mangoldt(n);
  return t;
}

}  // namespace revprime
