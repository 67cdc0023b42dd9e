#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "arith.hpp"
#include "expsum.hpp"

namespace revprime {

inline std::uint64_t gcd_signed(std::int64_t a, std::uint64_t q) {
  return std::gcd(static_cast<std::uint64_t>(a < 0 ? -a : a), q);
}

/// rho_g(a, q) in exact rational arithmetic.
inline Rational rho(unsigned g, std::int64_t a, std::uint64_t q) {
  require(g >= 2, "rho needs g >= 2");
  require(q >= 1, "rho needs q >= 1");
  const std::uint64_t g2m1 = std::uint64_t(g) * g - 1;
  const std::uint64_t aq = gcd_signed(a, q);
  if (std::gcd(aq, g2m1) != 1) return Rational(0);
  if (aq % g == 0) return Rational(0);
  const std::uint64_t qg = std::gcd(q, std::uint64_t(g));
  const bool qg_divides_a = mod_floor(a, static_cast<std::int64_t>(qg)) == 0;
  const Rational first = qg_divides_a ? Rational(1) - Rational(qg, g) : Rational(1);
  const std::uint64_t h = std::gcd(q, g2m1);
  return first * Rational(h, euler_phi_trial(h));
}

/// (q, g^L (g^2-1)) without forming g^L.
inline std::uint64_t sharp_modulus(unsigned g, unsigned L, std::uint64_t q) {
  const std::uint64_t r = mulmod(powmod(g, L, q), (std::uint64_t(g) * g - 1) % q, q);
  return std::gcd(q, r);
}

inline double census_main_term(unsigned g, unsigned L, const Rational& rho_value, std::uint64_t q) {
  const double gl = std::pow(double(g), double(L));
  return rho_value.to_double() / static_cast<double>(q) * gl / (L * std::log(double(g)));
}

struct CensusRecord {
  unsigned g = 0, L = 0;
  std::int64_t a = 0;
  std::uint64_t q = 1;
  std::uint64_t observed = 0;
  Rational rho_value;
  double main_term = 0;
  double relative_dev = 0;  // NaN when the main term is zero
  std::uint64_t sharp_observed = 0;
  std::uint64_t modulus_sharp = 1;
  std::uint64_t exceptional_cap = 0;  // number of primes dividing g q

  bool admissible() const { return main_term > 0; }
};

inline std::uint64_t distinct_prime_divisors(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ++c;
      while (n % p == 0) n /= p;
    }
  return c + (n > 1);
}

struct CensusQuery {
  std::int64_t a;
  std::uint64_t q;
};

/// One pass over the L-digit primes; each reverse is computed once and
/// binned for every requested modulus and its sharp modulus.
inline std::vector<CensusRecord> census_batch(unsigned g, unsigned L, const std::vector<CensusQuery>& queries,
                                              const PrimeTable& pt, unsigned threads = 1) {
  require(g >= 2 && L >= 1, "census needs g >= 2 and L >= 1");
  const BaseContext base(g);
  const std::uint64_t hi = base.pow64(L);
  const std::uint64_t lo = base.pow64(L - 1);
  pt.check(hi - 1);

  std::set<std::uint64_t> moduli;
  for (const auto& qu : queries) {
    require(qu.q >= 1, "census needs q >= 1");
    moduli.insert(qu.q);
    moduli.insert(sharp_modulus(g, L, qu.q));
  }
  const std::vector<std::uint64_t> mods(moduli.begin(), moduli.end());

  const std::uint64_t span = hi - lo;
  const std::uint64_t seg = std::max<std::uint64_t>(kReductionBlock * 16, 1);
  const std::size_t nseg = static_cast<std::size_t>((span + seg - 1) / seg);
  std::vector<std::vector<std::vector<std::uint64_t>>> partial(nseg);
  parallel_for(nseg, threads, [&](std::size_t s) {
    auto& counts = partial[s];
    counts.resize(mods.size());
    for (std::size_t k = 0; k < mods.size(); ++k) counts[k].assign(mods[k], 0);
    const std::uint64_t a = lo + s * seg, b = std::min(hi, a + seg);
    const auto& spf = pt.raw();
    for (std::uint64_t p = std::max<std::uint64_t>(a, 2); p < b; ++p) {
      if (spf[p] != p) continue;
      const uint128 r = base.reverse(p);
      for (std::size_t k = 0; k < mods.size(); ++k) ++counts[k][static_cast<std::size_t>(r % mods[k])];
    }
  });
  std::vector<std::vector<std::uint64_t>> counts(mods.size());
  for (std::size_t k = 0; k < mods.size(); ++k) {
    counts[k].assign(mods[k], 0);
    for (const auto& part : partial)
      for (std::uint64_t r = 0; r < mods[k]; ++r) counts[k][r] += part[k][r];
  }
  auto lookup = [&](std::uint64_t q, std::int64_t a) {
    const auto k = static_cast<std::size_t>(std::lower_bound(mods.begin(), mods.end(), q) - mods.begin());
    return counts[k][static_cast<std::size_t>(mod_floor(a, static_cast<std::int64_t>(q)))];
  };

  std::vector<CensusRecord> out;
  for (const auto& qu : queries) {
    CensusRecord rec;
    rec.g = g;
    rec.L = L;
    rec.a = qu.a;
    rec.q = qu.q;
    rec.observed = lookup(qu.q, qu.a);
    rec.rho_value = rho(g, qu.a, qu.q);
    rec.main_term = census_main_term(g, L, rec.rho_value, qu.q);
    rec.relative_dev = rec.main_term > 0 ? static_cast<double>(rec.observed) / rec.main_term - 1 : std::nan("");
    rec.modulus_sharp = sharp_modulus(g, L, qu.q);
    rec.sharp_observed = lookup(rec.modulus_sharp, qu.a);
    rec.exceptional_cap = distinct_prime_divisors(std::uint64_t(g) * qu.q);
    out.push_back(rec);
  }
  return out;
}

inline CensusRecord census(unsigned g, unsigned L, std::int64_t a, std::uint64_t q, const PrimeTable& pt,
                           unsigned threads = 1) {
  return census_batch(g, L, {{a, q}}, pt, threads).front();
}

/// Every residue a mod q.
inline std::vector<CensusQuery> full_residue_queries(const std::vector<std::uint64_t>& qs) {
  std::vector<CensusQuery> out;
  for (auto q : qs)
    for (std::uint64_t a = 0; a < q; ++a) out.push_back({static_cast<std::int64_t>(a), q});
  return out;
}

// ---------------------------------------------------------------------------
// The six counting sums
// ---------------------------------------------------------------------------

enum class CountKind { psi, theta, pi };

inline CountKind parse_count_kind(const std::string& s) {
  if (s == "psi") return CountKind::psi;
  if (s == "theta") return CountKind::theta;
  if (s == "pi") return CountKind::pi;
  throw precondition_error("unknown counting kind '" + s + "'");
}

/// psi/theta/pi over n <= x with rev_L(n) = a mod q, or mod (q, g^L(g^2-1)) when sharp.
inline double psi_theta_pi(unsigned g, unsigned L, double x, std::int64_t a, std::uint64_t q, const PrimeTable& pt,
                           CountKind kind, bool sharp) {
  require(q >= 1, "counting sums need q >= 1");
  if (x < 2) return 0.0;
  const BaseContext base(g);
  const auto X = static_cast<std::uint64_t>(std::floor(x));
  pt.check(X);
  const std::uint64_t Q = sharp ? sharp_modulus(g, L, q) : q;
  const std::uint64_t target = static_cast<std::uint64_t>(mod_floor(a, static_cast<std::int64_t>(Q)));
  std::vector<double> terms;
  for (std::uint64_t n = 2; n <= X; ++n) {
    double w = 0;
    if (kind == CountKind::psi) {
      w = pt.von_mangoldt(n);
    } else if (pt.is_prime(n)) {
      w = kind == CountKind::theta ? std::log(double(n)) : 1.0;
    }
    if (w == 0) continue;
    if (base.reverse_relative_mod(n, L, Q) == target) terms.push_back(w);
  }
  return pairwise_sum(terms);
}

inline std::uint64_t census_sharp(unsigned g, unsigned L, std::int64_t a, std::uint64_t q, const PrimeTable& pt,
                                  double x) {
  return static_cast<std::uint64_t>(std::llround(psi_theta_pi(g, L, x, a, q, pt, CountKind::pi, true)));
}

struct RelationSample {
  double lhs = 0, rhs = 0, deviation = 0;
  std::uint64_t modulus_sharp = 1;
};

/// psi_L(x,a,q) against ((q,g^L(g^2-1))/q) psi_sharp,L(x,a,q)
inline RelationSample sharp_relation(unsigned g, unsigned L, double x, std::int64_t a, std::uint64_t q,
                                     const PrimeTable& pt, CountKind kind) {
  RelationSample s;
  s.modulus_sharp = sharp_modulus(g, L, q);
  s.lhs = psi_theta_pi(g, L, x, a, q, pt, kind, false);
  s.rhs = static_cast<double>(s.modulus_sharp) / q * psi_theta_pi(g, L, x, a, q, pt, kind, true);
  s.deviation = (s.lhs - s.rhs) / x;
  return s;
}

/// pi(x,a,q) with absolute reverses against ((q,(g^2-1)g^L)/q) pi_sharp(x,a,q),
/// L = [log x / log g] + 1.
inline RelationSample pure_reverse_relation(unsigned g, std::uint64_t x, std::int64_t a, std::uint64_t q,
                                            const PrimeTable& pt) {
  pt.check(x);
  const BaseContext base(g);
  const unsigned L = floor_log(x, g) + 1;
  RelationSample s;
  s.modulus_sharp = sharp_modulus(g, L, q);
  const std::uint64_t Q = s.modulus_sharp;
  const auto tq = static_cast<std::uint64_t>(mod_floor(a, static_cast<std::int64_t>(q)));
  const auto tQ = static_cast<std::uint64_t>(mod_floor(a, static_cast<std::int64_t>(Q)));
  std::uint64_t full = 0, sharp = 0;
  for (std::uint64_t p = 2; p <= x; ++p) {
    if (!pt.is_prime(p)) continue;
    const uint128 r = base.reverse(p);
    full += static_cast<std::uint64_t>(r % q) == tq;
    sharp += static_cast<std::uint64_t>(r % Q) == tQ;
  }
  s.lhs = static_cast<double>(full);
  s.rhs = static_cast<double>(Q) / q * static_cast<double>(sharp);
  s.deviation = (s.lhs - s.rhs) / static_cast<double>(x);
  return s;
}

// ---------------------------------------------------------------------------
// Geometric progressions mod 1 and the blocked lower bound for sigma
// ---------------------------------------------------------------------------

/// Largest i with g^i <= g / ((g+1) t), t in (0, 1/2]
inline long landing_index(unsigned g, long double t) {
  long i = 0;
  long double p = g;
  while (p * (g + 1) * t <= g) {
    ++i;
    p *= g;
  }
  return i;
}

struct Landing {
  long i0 = 0;
  double value = 0;
};

inline Landing i0_landing(unsigned g, double alpha) {
  const double d = dist(alpha);
  if (d == 0) throw degenerate_input_error("alpha must not be an integer");
  Landing out;
  out.i0 = landing_index(g, d);
  FracPowerWalker w(alpha, g);
  for (long i = 0; i < out.i0; ++i) w.advance();
  out.value = dist(w.value());
  return out;
}

/// ||g^i (g^2-1) alpha|| for i = 0..n-1, exact for rational alpha.
inline std::vector<double> scaled_distances(unsigned g, const Coefficient& alpha, std::uint64_t n) {
  std::vector<double> out(n);
  const std::uint64_t g2m1 = std::uint64_t(g) * g - 1;
  if (alpha.exact) {
    const std::uint64_t q = alpha.q;
    std::uint64_t r = mulmod(static_cast<std::uint64_t>(mod_floor(alpha.h, static_cast<std::int64_t>(q))),
                             g2m1 % q, q);
    for (std::uint64_t i = 0; i < n; ++i) {
      out[i] = dist(static_cast<double>(r) / static_cast<double>(q));
      r = mulmod(r, g, q);
    }
  } else {
    FracPowerWalker w(frac_mul(alpha.value, g2m1), g);
    for (std::uint64_t i = 0; i < n; ++i) {
      out[i] = dist(w.value());
      w.advance();
    }
  }
  return out;
}

struct SigmaLowerBlocks {
  double sigma_hat = 0;
  long J = 0, K = 0;
  double blocked_sum = 0;
  double sigma_lambda = 0;
  BoundReport block_bound;  // K/(g+1)^2 <= blocked sum
  BoundReport chain_bound;  // coef/g^2 * blocked sum <= sigma_lambda
};

inline SigmaLowerBlocks sigma_lower_blocks(unsigned g, std::uint64_t L, std::uint64_t lambda, const Coefficient& alpha) {
  require(lambda <= L, "sigma lower bound needs lambda <= L");
  const auto d = scaled_distances(g, alpha, L + 1);
  SigmaLowerBlocks out;
  out.sigma_hat = *std::min_element(d.begin(), d.end());
  if (out.sigma_hat == 0)
    throw degenerate_input_error("g^i (g^2-1) alpha is an integer for some 0 <= i <= L");
  out.J = 1 + landing_index(g, out.sigma_hat);
  out.K = static_cast<long>(lambda) / out.J;
  double B = 0;
  for (std::uint64_t i = L - lambda; i < L; ++i) B += d[i] * d[i];
  out.blocked_sum = B;
  const ExpSumContext es(reverse_seed(g, L, alpha));
  out.sigma_lambda = es.sigma(lambda, 0);
  const double gp1 = g + 1.0;
  const json params{{"g", g}, {"L", L}, {"lambda", lambda}, {"alpha", alpha.str()},
                    {"J", out.J}, {"K", out.K}, {"sigma_hat", out.sigma_hat}};
  out.block_bound = make_report("sigma-lower-blocks", out.K / (gp1 * gp1), B, params);
  out.chain_bound =
      make_report("sigma-lower-chain", gamma_coefficient(g) / (double(g) * g) * B, out.sigma_lambda, params);
  return out;
}

}  // namespace revprime
