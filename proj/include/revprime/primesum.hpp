#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "arith.hpp"
#include "expsum.hpp"

namespace revprime {

inline constexpr std::uint64_t kPrimeSumBudget = 1'000'000;

/// e(f_L(n)) for 0 <= n <= x, phases taken from exact per-digit residues.
inline std::vector<complex> phase_values(const Seed& seed, unsigned L, std::uint64_t x, unsigned threads = 1) {
  std::vector<complex> out(x + 1);
  const auto T = phase_table(seed, L, 0);
  const unsigned g = seed.g();
  const std::size_t blocks = static_cast<std::size_t>((x + 1 + kReductionBlock - 1) / kReductionBlock);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t lo = b * kReductionBlock;
    const std::uint64_t hi = std::min<std::uint64_t>(x + 1, lo + kReductionBlock);
    for (std::uint64_t n = lo; n < hi; ++n) {
      double f = 0;
      std::uint64_t m = n;
      for (unsigned i = 0; i < L; ++i) {
        f += T[i][m % g];
        m /= g;
      }
      out[n] = unit(frac(f));
    }
  });
  return out;
}

inline void check_x_range(unsigned g, unsigned L, double x) {
  require(x >= 2, "x must be at least 2");
  const long double gl = std::pow(static_cast<long double>(g), static_cast<long double>(L));
  require(static_cast<long double>(x) <= gl, "x must not exceed g^L");
}

// ---------------------------------------------------------------------------
// Type I
// ---------------------------------------------------------------------------

struct TypeIParams {
  unsigned L = 0;
  double x = 0;
  double M = 1;
  long xi = 0;
  double kappa = 0;
};

inline TypeIParams make_type_i_params(const ExpSumContext& es, unsigned L, double x, double M) {
  TypeIParams p{L, x, M, 0, 0};
  p.xi = floor_log_scaled(x, es.g(), 1.0);
  p.kappa = es.sigma(static_cast<std::uint64_t>(std::max(0L, p.xi)), 0);
  return p;
}

/// sum_{m<=M} max_{1<=t<=x/m} |sum_{n<=t} e(f_L(mn))|, the sup realized exactly
/// as a running maximum over integer prefixes.
inline double type_i_sum(const ExpSumContext& es, const TypeIParams& p, const std::vector<complex>* table = nullptr) {
  check_x_range(es.g(), p.L, p.x);
  require(p.M >= 1, "Type I needs M >= 1");
  require(p.M * p.M <= p.x * (1 + 1e-15), "Type I needs M <= x^(1/2)");
  const auto X = static_cast<std::uint64_t>(std::floor(p.x));
  if (X > kPrimeSumBudget) throw cost_budget_error("Type I sum beyond x = 10^6");
  std::vector<complex> own;
  if (!table) {
    own = phase_values(es.seed(), p.L, X);
    table = &own;
  }
  const auto Mi = static_cast<std::uint64_t>(std::floor(p.M));
  std::vector<double> per_m(Mi, 0.0);
  for (std::uint64_t m = 1; m <= Mi; ++m) {
    const std::uint64_t T = X / m;
    complex run = 0;
    double best = 0;
    for (std::uint64_t n = 1; n <= T; ++n) {
      run += (*table)[m * n];
      best = std::max(best, std::abs(run));
    }
    per_m[m - 1] = best;
  }
  return pairwise_sum(per_m);
}

inline double type_i_shape(const TypeIParams& p, unsigned g) {
  const double lx = std::log(p.x);
  return p.x * std::pow(double(g), -p.kappa) * lx * lx;
}

// ---------------------------------------------------------------------------
// Type II
// ---------------------------------------------------------------------------

enum class CoefficientKind { mobius_c2, unimodular_random, zero };

inline CoefficientKind parse_coefficient_kind(const std::string& s) {
  if (s == "mobius-c2") return CoefficientKind::mobius_c2;
  if (s == "random") return CoefficientKind::unimodular_random;
  if (s == "zero") return CoefficientKind::zero;
  throw precondition_error("unknown coefficient generator '" + s + "'");
}

inline std::string to_string(CoefficientKind k) {
  switch (k) {
    case CoefficientKind::mobius_c2: return "mobius-c2";
    case CoefficientKind::unimodular_random: return "random";
    case CoefficientKind::zero: return "zero";
  }
  return "?";
}

struct TypeIIParams {
  unsigned L = 0;
  double x = 0, M = 1, N = 1, theta = 0;
  CoefficientKind coeffs = CoefficientKind::mobius_c2;
  std::uint64_t rng_seed = 0;
  long xi = 0;
  double kappa = 0;
  double R = 1;
  long lambda = 0;
  long mu = 0;
};

/// Fills xi, kappa, R = g^(2 kappa), lambda and mu as in the proof.
inline TypeIIParams make_type_ii_params(const ExpSumContext& es, unsigned L, double x, double M, double N,
                                        double theta, CoefficientKind coeffs, std::uint64_t rng_seed = 0) {
  TypeIIParams p;
  p.L = L;
  p.x = x;
  p.M = M;
  p.N = N;
  p.theta = theta;
  p.coeffs = coeffs;
  p.rng_seed = rng_seed;
  const unsigned g = es.g();
  p.xi = floor_log_scaled(x, g, theta);
  p.kappa = es.sigma(static_cast<std::uint64_t>(std::max(0L, p.xi)), 0) / 10;
  p.R = std::pow(double(g), 2 * p.kappa);
  // g^(lambda-1) <= M R^2 < g^lambda
  const double MR2 = M * p.R * p.R;
  long lam = 0;
  for (long double t = 1; t <= MR2; t *= g) ++lam;
  p.lambda = lam;
  long mu = 0;
  for (long double t = 1; t <= M; t *= g) ++mu;
  p.mu = mu;
  return p;
}

/// (a_m, b_n) for the configured generator; |a|, |b| <= 1.
struct TypeIICoefficients {
  std::vector<complex> a, b;  // indexed by m and n
};

inline TypeIICoefficients make_type_ii_coefficients(const TypeIIParams& p, const PrimeTable* pt) {
  const auto m_hi = static_cast<std::uint64_t>(std::floor(2 * p.M));
  const auto n_hi = static_cast<std::uint64_t>(std::floor(2 * p.N));
  TypeIICoefficients c;
  c.a.assign(m_hi + 1, 0.0);
  c.b.assign(n_hi + 1, 0.0);
  switch (p.coeffs) {
    case CoefficientKind::zero: break;
    case CoefficientKind::mobius_c2: {
      require(pt != nullptr, "mobius-c2 coefficients need a prime table");
      const double z = std::pow(p.x, 0.25);
      const double lx = std::log(p.x);
      for (std::uint64_t m = 1; m <= m_hi; ++m) c.a[m] = pt->mu(m);
      for (std::uint64_t n = 1; n <= n_hi; ++n) c.b[n] = vaughan_c2(n, z, *pt) / lx;
      break;
    }
    case CoefficientKind::unimodular_random: {
      for (std::uint64_t m = 1; m <= m_hi; ++m) c.a[m] = unit(hash_to_unit(hash_combine(p.rng_seed, 2 * m)));
      for (std::uint64_t n = 1; n <= n_hi; ++n) c.b[n] = unit(hash_to_unit(hash_combine(p.rng_seed, 2 * n + 1)));
      break;
    }
  }
  return c;
}

/// sum over M<m<=2M, N<n<=2N, mn<=x of a_m b_n e(f_L(mn))
inline complex type_ii_sum(const ExpSumContext& es, const TypeIIParams& p, const PrimeTable* pt = nullptr,
                           const std::vector<complex>* table = nullptr) {
  check_x_range(es.g(), p.L, p.x);
  require(p.M >= 1 && p.N >= 1, "Type II needs M, N >= 1");
  require(p.theta > 0, "Type II needs theta > 0");
  const double floor_val = std::pow(p.x, p.theta);
  require(p.M >= floor_val * (1 - 1e-12) && p.N >= floor_val * (1 - 1e-12), "Type II needs M, N >= x^theta");
  const auto X = static_cast<std::uint64_t>(std::floor(p.x));
  if (X > kPrimeSumBudget) throw cost_budget_error("Type II sum beyond x = 10^6");
  const auto coeff = make_type_ii_coefficients(p, pt);
  std::vector<complex> own;
  if (!table) {
    own = phase_values(es.seed(), p.L, X);
    table = &own;
  }
  const auto m_lo = static_cast<std::uint64_t>(std::floor(p.M)) + 1;
  const auto m_hi = static_cast<std::uint64_t>(std::floor(2 * p.M));
  const auto n_lo = static_cast<std::uint64_t>(std::floor(p.N)) + 1;
  const auto n_hi = static_cast<std::uint64_t>(std::floor(2 * p.N));
  std::vector<complex> rows;
  for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
    complex row = 0;
    for (std::uint64_t n = n_lo; n <= n_hi && m * n <= X; ++n) row += coeff.b[n] * (*table)[m * n];
    rows.push_back(coeff.a[m] * row);
  }
  return pairwise_sum(rows);
}

inline double type_ii_shape(const TypeIIParams& p, unsigned g) {
  return p.x * std::pow(double(g), -p.kappa) * std::log(p.x);
}

// ---------------------------------------------------------------------------
// Truncation set
// ---------------------------------------------------------------------------

struct TruncationCount {
  std::uint64_t set_size = 0;
  std::uint64_t superset_size = 0;
  std::uint64_t pairs = 0;
  bool contained = true;
  long lambda = 0;
};

/// lambda with g^(lambda-1) <= M R^2 < g^lambda
inline long truncation_lambda(unsigned g, double M, double R) {
  long lam = 0;
  const long double MR2 = static_cast<long double>(M) * R * R;
  for (long double t = 1; t <= MR2; t *= g) ++lam;
  return lam;
}

/// Enumerates M<m<=2M, N<n<=2N. The set predicate compares the digit tails
/// sum_{lambda<=i<L} alpha_i(eps_i(.)) of mn and m(n+r); the superset is
/// the existence of k with mn < k g^lambda <= m(n+r).
inline TruncationCount truncation_set_size(const ExpSumContext& es, double M, double N, double R, std::uint64_t r,
                                           unsigned L, long lambda) {
  const unsigned g = es.g();
  require(M >= 1 && N >= 1 && R >= 1, "truncation needs M, N, R >= 1");
  require(static_cast<double>(r) <= R, "truncation needs 0 <= r <= R");
  require(R * R <= N * (1 + 1e-15), "truncation needs R <= N^(1/2)");
  require(lambda == truncation_lambda(g, M, R), "lambda must satisfy g^(lambda-1) <= M R^2 < g^lambda");
  require(lambda <= static_cast<long>(L), "truncation needs lambda <= L");

  const auto& base = es.base();
  const std::uint64_t gl = base.pow64(static_cast<unsigned>(lambda));
  std::vector<std::vector<double>> tail_table(L, std::vector<double>(g));
  for (unsigned i = static_cast<unsigned>(lambda); i < L; ++i)
    for (unsigned d = 0; d < g; ++d) tail_table[i][d] = es.seed().eval(i, d);
  auto tail = [&](std::uint64_t v) {
    double s = 0;
    v /= gl;
    for (unsigned i = static_cast<unsigned>(lambda); i < L; ++i) {
      s += tail_table[i][v % g];
      v /= g;
    }
    return s;
  };

  TruncationCount out;
  out.lambda = lambda;
  const auto m_lo = static_cast<std::uint64_t>(std::floor(M)) + 1;
  const auto m_hi = static_cast<std::uint64_t>(std::floor(2 * M));
  const auto n_lo = static_cast<std::uint64_t>(std::floor(N)) + 1;
  const auto n_hi = static_cast<std::uint64_t>(std::floor(2 * N));
  for (std::uint64_t m = m_lo; m <= m_hi; ++m)
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
      const std::uint64_t u = m * n, v = m * (n + r);
      const bool in_set = tail(u) != tail(v);
      const bool in_superset = v / gl > u / gl;
      ++out.pairs;
      out.set_size += in_set;
      out.superset_size += in_superset;
      if (in_set && !in_superset) out.contained = false;
    }
  return out;
}

// ---------------------------------------------------------------------------
// van der Corput, sin-sum
// ---------------------------------------------------------------------------

/// (|sum z|^2, (N+R-1)/R sum_{|r|<R} (1-|r|/R) Re sum z_{n+r} conj(z_n))
inline std::pair<double, double> vdc_lhs_rhs(const std::vector<complex>& z, unsigned R) {
  require(!z.empty(), "van der Corput needs N >= 1");
  require(R >= 1, "van der Corput needs R >= 1");
  const long N = static_cast<long>(z.size());
  complex s = 0;
  for (const auto& v : z) s += v;
  double inner = 0;
  for (long r = -static_cast<long>(R) + 1; r < static_cast<long>(R); ++r) {
    complex c = 0;
    for (long n = 0; n < N; ++n)
      if (n + r >= 0 && n + r < N) c += z[n + r] * std::conj(z[n]);
    inner += (1.0 - std::fabs(double(r)) / R) * c.real();
  }
  return {std::norm(s), (double(N) + R - 1) / R * inner};
}

inline BoundReport sin_sum_check(std::int64_t a, std::uint64_t m, double b, double M) {
  require(m >= 1, "sin sum needs m >= 1");
  require(M > 0, "sin sum needs M > 0");
  const double pi = std::numbers::pi;
  const std::uint64_t d = std::gcd(static_cast<std::uint64_t>(a < 0 ? -a : a), m);
  double lhs = 0;
  for (std::uint64_t n = 0; n < m; ++n) {
    // sin(pi y) only depends on y mod 1 up to sign
    const double y = frac((static_cast<double>(mod_floor(a, static_cast<std::int64_t>(m))) * n + b) / m);
    const double s = std::fabs(std::sin(pi * y));
    lhs += s == 0 ? M : std::min(M, 1 / s);
  }
  const double dd = static_cast<double>(d), md = static_cast<double>(m);
  const double sb = std::sin(pi * dd / md * dist(b / dd));
  const double first = dd * (sb == 0 ? M : std::min(M, 1 / sb));
  const double rhs = first + dd / std::sin(pi * dd / (2 * md)) + 2 * md / pi * std::log(2 * md / (pi * dd));
  return make_report("sin-sum", lhs, rhs, json{{"a", a}, {"m", m}, {"b", b}, {"M", M}, {"d", d}});
}

// ---------------------------------------------------------------------------
// Prime exponential sum
// ---------------------------------------------------------------------------

struct PrimeSumResult {
  complex S = 0;
  double kappa = 0;
  long xi = 0;
  double bound_shape = 0;
  double ratio = 0;
  bool has_vaughan = false;
  complex S1 = 0, S2 = 0, S3 = 0, S4 = 0;
  complex vaughan_total() const { return S1 + S2 + S3 + S4; }
};

/// S = sum_{n<=x} Lambda(n) e(f_L(n)); optionally S1..S4 with z = x^(1/4).
inline PrimeSumResult prime_exp_sum(const ExpSumContext& es, unsigned L, double x, const PrimeTable& pt,
                                    bool vaughan = false, unsigned threads = 1) {
  check_x_range(es.g(), L, x);
  const auto X = static_cast<std::uint64_t>(std::floor(x));
  pt.check(X);
  if (X > kPrimeSumBudget) throw cost_budget_error("prime sum beyond x = 10^6");
  const auto E = phase_values(es.seed(), L, X, threads);

  PrimeSumResult res;
  res.S = blocked_sum<complex>(1, X + 1, threads,
                               [&](std::uint64_t n) { return pt.von_mangoldt(n) * E[n]; });
  res.xi = floor_log_scaled(x, es.g(), 0.25);
  res.kappa = es.sigma(static_cast<std::uint64_t>(std::max(0L, res.xi)), 0) / 10;
  const double lx = std::log(x);
  res.bound_shape = x * std::pow(double(es.g()), -res.kappa) * lx * lx * lx * lx;
  res.ratio = std::abs(res.S) / res.bound_shape;

  if (vaughan) {
    res.has_vaughan = true;
    const double z = std::pow(x, 0.25);
    const auto Z = static_cast<std::uint64_t>(std::floor(z + 1e-9 * z));
    auto le = [](std::uint64_t d, double zz) { return static_cast<double>(d) <= zz; };
    // S1: m <= z, mu(m) log n
    {
      std::vector<complex> rows;
      for (std::uint64_t m = 1; le(m, z) && m <= X; ++m) {
        const int mu = pt.mu(m);
        if (mu == 0) continue;
        std::vector<complex> inner;
        for (std::uint64_t n = 1; m * n <= X; ++n) inner.push_back(std::log(double(n)) * E[m * n]);
        rows.push_back(double(mu) * pairwise_sum(inner));
      }
      res.S1 = pairwise_sum(rows);
    }
    // S2: m, n > z, mu(m) c2(n); c2(n) = log n - sum_{d|n, d<=z} Lambda(d)
    {
      std::vector<double> c2(X + 1, 0.0);
      for (std::uint64_t n = 1; n <= X; ++n) c2[n] = std::log(double(n));
      for (std::uint64_t d = 2; le(d, z) && d <= X; ++d) {
        const double lam = pt.von_mangoldt(d);
        if (lam == 0) continue;
        for (std::uint64_t n = d; n <= X; n += d) c2[n] -= lam;
      }
      std::vector<complex> rows(X + 1, 0.0);
      parallel_for(X, threads, [&](std::size_t idx) {
        const std::uint64_t m = idx + 1;
        if (le(m, z)) return;
        const int mu = pt.mu(m);
        if (mu == 0) return;
        complex acc = 0;
        for (std::uint64_t n = Z + 1; m * n <= X; ++n)
          if (!le(n, z)) acc += c2[n] * E[m * n];
        rows[m] = double(mu) * acc;
      });
      res.S2 = pairwise_sum(rows);
    }
    // S3: -sum_{m <= z^2} c3(m) sum_{n <= x/m} e(f(mn))
    {
      const double z2 = z * z;
      std::vector<complex> rows;
      for (std::uint64_t m = 1; le(m, z2) && m <= X; ++m) {
        const double c3 = vaughan_c3(m, z, pt);
        if (c3 == 0) continue;
        complex acc = 0;
        for (std::uint64_t n = 1; m * n <= X; ++n) acc += E[m * n];
        rows.push_back(-c3 * acc);
      }
      res.S3 = pairwise_sum(rows);
    }
    // S4: sum_{n <= z} Lambda(n) e(f(n))
    for (std::uint64_t n = 1; le(n, z) && n <= X; ++n) res.S4 += pt.von_mangoldt(n) * E[n];
  }
  return res;
}

}  // namespace revprime
