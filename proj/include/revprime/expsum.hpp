#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bound.hpp"
#include "seeds.hpp"

namespace revprime {

// ---------------------------------------------------------------------------
// Closed-form constants depending only on g
// ---------------------------------------------------------------------------

/// (1-1/g){1 - (1 - 2/(g^2(g-1)))^(1/2)}, the surrogate for Theta_g.
inline double theta_lower_bound(unsigned g) {
  const double gd = g;
  const double u = 2 / (gd * gd * (gd - 1));
  return (1 - 1 / gd) * u / (1 + std::sqrt(1 - u));  // 1 - sqrt(1-u) without cancellation
}

inline double eta_first_branch(unsigned g) {
  return 0.5 - std::log(1.5) / (4 * std::log(double(g)) - 2 * std::log(2.0));
}

inline double eta_second_branch(unsigned g) {
  return 0.5 + std::log(1 - theta_lower_bound(g)) / (4 * std::log(double(g)));
}

inline double eta_tilde(unsigned g) { return std::max(eta_first_branch(g), eta_second_branch(g)); }

inline double omega_g(unsigned g) { return std::log(2.0) / std::log(double(g)) * (0.5 - eta_tilde(g)); }

/// 2 log 2 / ((g-1) g^4 (log g)^2)
inline double gamma_coefficient(unsigned g) {
  const double gd = g, lg = std::log(gd);
  return 2 * std::log(2.0) / ((gd - 1) * gd * gd * gd * gd * lg * lg);
}

/// log 2 / (4 g^3 (log g)^2), the ceiling of every gamma_i
inline double gamma_ceiling(unsigned g) {
  const double gd = g, lg = std::log(gd);
  return std::log(2.0) / (4 * gd * gd * gd * lg * lg);
}

inline bool divides(unsigned a, unsigned b) { return a != 0 && b % a == 0; }

inline std::vector<unsigned> divisors_of(unsigned n) {
  std::vector<unsigned> d;
  for (unsigned k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

// ---------------------------------------------------------------------------

/// F_lambda^[j], phi, gamma/sigma/Theta and Psi for one seed. Immutable.
class ExpSumContext {
 public:
  static constexpr std::uint64_t kDefaultDirectBudget = std::uint64_t(1) << 24;

  explicit ExpSumContext(Seed seed, std::uint64_t direct_budget = kDefaultDirectBudget)
      : base_(seed.g()),
        seed_(std::move(seed)),
        budget_(direct_budget),
        eta_tilde_(revprime::eta_tilde(seed_.g())),
        omega_(omega_g(seed_.g())),
        theta_lower_(theta_lower_bound(seed_.g())) {}

  unsigned g() const { return base_.g(); }
  const BaseContext& base() const { return base_; }
  const Seed& seed() const { return seed_; }
  double eta_tilde() const { return eta_tilde_; }
  double omega() const { return omega_; }
  double theta_lower() const { return theta_lower_; }
  std::uint64_t direct_budget() const { return budget_; }

  /// e(alpha_p(d)) for d < g
  std::vector<complex> digit_phases(std::uint64_t p) const {
    std::vector<complex> e(g());
    for (unsigned d = 0; d < g(); ++d) e[d] = unit(seed_.eval_mod1(p, d));
    return e;
  }

  /// phi_i^[j](beta), each term's phase reduced exactly before sin/cos
  double phi(std::uint64_t i, std::uint64_t j, double beta) const {
    const double b = frac(beta);
    complex acc = 0;
    for (unsigned n = 0; n < g(); ++n) acc += unit(seed_.eval_mod1(i + j, n) - frac_mul(b, n));
    return std::abs(acc);
  }

  /// |sum_n E[n] e(-n x)| by Horner, for inner loops with a precomputed table
  static double phi_from_table(const std::vector<complex>& E, double x) {
    const complex z = unit(-x);
    complex acc = E.back();
    for (std::size_t n = E.size() - 1; n-- > 0;) acc = acc * z + E[n];
    return std::abs(acc);
  }

  std::uint64_t direct_cost(unsigned lambda) const {
    uint128 c = 1;
    for (unsigned i = 0; i < lambda; ++i) {
      c *= g();
      if (c > budget_) return budget_ + 1;
    }
    return static_cast<std::uint64_t>(c);
  }

  /// (1/g^lambda) sum_{n<g^lambda} e(f_lambda^[j](n) - beta n), term by term.
  complex F_direct(unsigned lambda, std::uint64_t j, double beta, unsigned threads = 1) const {
    const std::uint64_t N = direct_cost(lambda);
    if (N > budget_)
      throw cost_budget_error("direct evaluation of F needs g^lambda terms above the budget of " +
                              std::to_string(budget_));
    const DigitSplitPhases f(seed_, lambda, j);
    const FracMul bn(beta);
    const complex total = blocked_sum<complex>(0, N, threads, [&](std::uint64_t n) {
      return unit(f(n) - bn(n));
    });
    return total / static_cast<double>(N);
  }

  /// frac(f_lambda^[j](n)) from two half-length digit tables:
  /// f(n) = f_low(n mod g^h) + f_high(n / g^h), each summed digit by digit.
  class DigitSplitPhases {
   public:
    DigitSplitPhases(const Seed& seed, unsigned lambda, std::uint64_t j) {
      const unsigned g = seed.g();
      const unsigned lo = lambda / 2, hi = lambda - lo;
      low_size_ = 1;
      for (unsigned i = 0; i < lo; ++i) low_size_ *= g;
      low_ = table(seed, lo, j, g);
      high_ = table(seed, hi, j + lo, g);
    }
    double operator()(std::uint64_t n) const { return frac(low_[n % low_size_] + high_[n / low_size_]); }

   private:
    static std::vector<double> table(const Seed& seed, unsigned len, std::uint64_t j, unsigned g) {
      std::uint64_t size = 1;
      for (unsigned i = 0; i < len; ++i) size *= g;
      const auto T = phase_table(seed, len, j);
      std::vector<double> out(size);
      for (std::uint64_t n = 0; n < size; ++n) {
        double s = 0;
        std::uint64_t m = n;
        for (unsigned i = 0; i < len; ++i) {
          s += T[i][m % g];
          m /= g;
        }
        out[n] = s;
      }
      return out;
    }
    std::uint64_t low_size_ = 1;
    std::vector<double> low_, high_;
  };

  /// g^-lambda prod_{i<lambda} phi_{i+j}(beta g^i), with frac(beta g^i) tracked exactly.
  double F_abs_product(unsigned lambda, std::uint64_t j, double beta) const {
    FracPowerWalker w(beta, g());
    double prod = 1;
    for (unsigned i = 0; i < lambda; ++i) {
      prod *= phi(i, j, w.value()) / g();
      w.advance();
    }
    return prod;
  }

  /// log |F| by the product route; -inf when a factor vanishes.
  double F_log_abs_product(std::uint64_t lambda, std::uint64_t j, double beta) const {
    FracPowerWalker w(beta, g());
    double acc = 0;
    const double lg = std::log(double(g()));
    for (std::uint64_t i = 0; i < lambda; ++i) {
      acc += std::log(phi(i, j, w.value())) - lg;
      w.advance();
    }
    return acc;
  }

  /// |F_lambda^[j](k/m)| with frac(k g^i / m) from integer arithmetic.
  double F_abs_rational(unsigned lambda, std::uint64_t j, std::int64_t k, std::uint64_t m) const {
    std::uint64_t r = static_cast<std::uint64_t>(mod_floor(k, static_cast<std::int64_t>(m)));
    double prod = 1;
    for (unsigned i = 0; i < lambda; ++i) {
      prod *= phi(i, j, static_cast<double>(r) / static_cast<double>(m)) / g();
      r = mulmod(r, g(), m);
    }
    return prod;
  }

  /// F as the complex product prod_i (1/g) sum_d e(alpha_{i+j}(d) - beta d g^i),
  /// together with its derivative in beta.
  std::pair<complex, complex> F_product_with_derivative(unsigned lambda, std::uint64_t j, double beta) const {
    std::vector<complex> c(lambda), dc(lambda);
    FracPowerWalker w(beta, g());
    double scale = 1;
    for (unsigned i = 0; i < lambda; ++i) {
      const double x = w.value();
      complex s = 0, ds = 0;
      for (unsigned d = 0; d < g(); ++d) {
        const complex t = unit(seed_.eval_mod1(i + j, d) - frac_mul(x, d));
        s += t;
        ds += t * complex(0, -2 * std::numbers::pi * d * scale);
      }
      c[i] = s / double(g());
      dc[i] = ds / double(g());
      w.advance();
      scale *= g();
    }
    std::vector<complex> prefix(lambda + 1, 1.0), suffix(lambda + 1, 1.0);
    for (unsigned i = 0; i < lambda; ++i) prefix[i + 1] = prefix[i] * c[i];
    for (unsigned i = lambda; i-- > 0;) suffix[i] = suffix[i + 1] * c[i];
    complex deriv = 0;
    for (unsigned i = 0; i < lambda; ++i) deriv += prefix[i] * dc[i] * suffix[i + 1];
    return {prefix[lambda], deriv};
  }

  // -- gamma, sigma, Theta ---------------------------------------------------

  /// w(d) = g alpha_{i+j}(d) - alpha_{i+j+1}(d), mod 1
  std::vector<double> gamma_phases(std::uint64_t i, std::uint64_t j) const {
    std::vector<double> w(g());
    for (unsigned d = 0; d < g(); ++d)
      w[d] = frac(g() * seed_.eval_mod1(i + j, d) - seed_.eval_mod1(i + j + 1, d));
    return w;
  }

  double gamma(std::uint64_t i, std::uint64_t j) const {
    const auto w = gamma_phases(i, j);
    double s = 0;
    for (unsigned m = 0; m < g(); ++m)
      for (unsigned n = m + 1; n < g(); ++n) {
        const double t = dist(w[m] - w[n]);
        s += t * t;
      }
    return gamma_coefficient(g()) * s;
  }

  double sigma(std::uint64_t lambda, std::uint64_t j) const {
    double s = 0;
    for (std::uint64_t i = 0; i < lambda; ++i) s += gamma(i, j);
    return s;
  }

  /// sigma_0..sigma_lambda at shift j
  std::vector<double> sigma_prefix(std::uint64_t lambda, std::uint64_t j) const {
    std::vector<double> out(lambda + 1, 0.0);
    for (std::uint64_t i = 0; i < lambda; ++i) out[i + 1] = out[i] + gamma(i, j);
    return out;
  }

  /// |sum_{0<=n,n+h<g} e(alpha_p(n+h) - alpha_p(n))|^2
  double autocorrelation_sq(std::uint64_t p, int h) const {
    const int gg = static_cast<int>(g());
    complex acc = 0;
    for (int n = 0; n < gg; ++n) {
      if (n + h < 0 || n + h >= gg) continue;
      acc += unit(seed_.eval_mod1(p, n + h) - seed_.eval_mod1(p, n));
    }
    return std::norm(acc);
  }

  double theta_i(std::uint64_t i, std::uint64_t j = 0) const {
    const double gd = g();
    double s = 0;
    for (int h = 1; h < static_cast<int>(g()); ++h) s += autocorrelation_sq(i + j, h);
    const double inner = std::max(0.0, 1 - 2 / (gd * gd * (gd - 1)) * s);
    return (1 - 1 / gd) * (1 - std::sqrt(inner));
  }

  // -- Psi ------------------------------------------------------------------

  double psi(std::uint64_t i, double t, unsigned R, unsigned S) const {
    if (!divides(R, g()) || !divides(S, g()))
      throw precondition_error("psi needs R | g and S | g");
    const double RS = double(R) * S;
    double total = 0;
    for (unsigned r = 0; r < R; ++r) {
      const double base = (t + r) / RS;
      double inner = 0;
      for (unsigned s = 0; s < S; ++s) inner += phi(i, 0, base + double(s) / S);
      total += phi(i + 1, 0, frac(g() * base)) * inner;
    }
    return total / (double(g()) * g());
  }

  // -- L1 moment ------------------------------------------------------------

  /// A[m][h] = |F_m^[j+lambda-m]((h+beta)/g^m)| for m <= lambda, h < g^m.
  /// Built level by level from the recursion in the product formula.
  std::vector<std::vector<double>> l1_levels(unsigned lambda, std::uint64_t j, double beta) const {
    if (direct_cost(lambda) > (std::uint64_t(1) << 26))
      throw cost_budget_error("L1 level arrays above 2^26 cells");
    const unsigned gg = g();
    std::vector<std::vector<double>> A(lambda + 1);
    A[0] = {1.0};
    std::uint64_t prev = 1;
    for (unsigned m = 1; m <= lambda; ++m) {
      const std::uint64_t size = prev * gg;
      const auto E = digit_phases(j + lambda - m);
      const double inv = 1.0 / static_cast<double>(size);
      A[m].resize(size);
      for (std::uint64_t h = 0; h < size; ++h) {
        const double x = (static_cast<double>(h) + beta) * inv;
        A[m][h] = A[m - 1][h % prev] * phi_from_table(E, x) / gg;
      }
      prev = size;
    }
    return A;
  }

  /// Sum over h < g^lambda, h = a mod k g^delta of |F_lambda^[j]((h+beta)/g^lambda)|.
  double l1_moment(unsigned lambda, std::uint64_t j, std::uint64_t k, unsigned delta, std::int64_t a,
                   double beta) const {
    check_l1_preconditions(lambda, k, delta);
    const std::uint64_t Q = k * base_.pow64(delta);
    const std::uint64_t N = base_.pow64(lambda);
    const std::uint64_t start = static_cast<std::uint64_t>(mod_floor(a, static_cast<std::int64_t>(Q)));
    double s = 0;
    for (std::uint64_t h = start; h < N; h += Q)
      s += F_abs_product(lambda, j, (static_cast<double>(h) + beta) / static_cast<double>(N));
    return s;
  }

  double l1_moment_rhs(unsigned lambda, std::uint64_t j, std::uint64_t k, unsigned delta, std::int64_t a,
                       double beta) const {
    check_l1_preconditions(lambda, k, delta);
    const double D = static_cast<double>(base_.pow64(delta));
    const double a_red = static_cast<double>(mod_floor(a, static_cast<std::int64_t>(base_.pow64(delta))));
    const double ratio = static_cast<double>(base_.pow64(lambda)) / (static_cast<double>(k) * D);
    return g() * std::pow(ratio, eta_tilde_) * F_abs_product(delta, j + lambda - delta, (a_red + beta) / D);
  }

  void check_l1_preconditions(unsigned lambda, std::uint64_t k, unsigned delta) const {
    if (delta > lambda) throw precondition_error("l1 moment needs delta <= lambda");
    if (k == 0) throw precondition_error("l1 moment needs k >= 1");
    if (k % g() == 0) throw precondition_error("l1 moment needs g not dividing k");
    const uint128 gl = base_.pow(lambda - delta);
    if (gl % k != 0) throw precondition_error("l1 moment needs k g^delta | g^lambda");
  }

  /// Every admissible (k, delta) pair with k <= k_max.
  std::vector<std::pair<std::uint64_t, unsigned>> l1_admissible(unsigned lambda, std::uint64_t k_max) const {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (unsigned delta = 0; delta <= lambda; ++delta)
      for (std::uint64_t k = 1; k <= k_max; ++k) {
        if (k % g() == 0) continue;
        if (base_.pow(lambda - delta) % k != 0) continue;
        out.emplace_back(k, delta);
      }
    return out;
  }

  // -- hybrid bound ---------------------------------------------------------

  /// sum_{M<=m<=2M} sum_{k<m,(k,m)=1} |F_lambda^[j](k/m)|
  double hybrid_sum(unsigned lambda, std::uint64_t j, double M) const {
    require(M >= 1, "hybrid sum needs M >= 1");
    const auto lo = static_cast<std::uint64_t>(std::ceil(M));
    const auto hi = static_cast<std::uint64_t>(std::floor(2 * M));
    double s = 0;
    for (std::uint64_t m = lo; m <= hi; ++m)
      for (std::uint64_t k = 0; k < m; ++k)
        if (std::gcd(k, m) == 1) s += F_abs_rational(lambda, j, static_cast<std::int64_t>(k), m);
    return s;
  }

  /// Right-hand shape of the hybrid bound, without its implicit constant.
  double hybrid_shape(unsigned lambda, std::uint64_t j, double M) const {
    const long mu = floor_log_scaled(M, g(), 1.0);
    const double lg = std::log(double(g()));
    if (2 * mu <= static_cast<long>(lambda)) {
      const double expo = -(0.5 - eta_tilde_) * 2 * mu - sigma(lambda - 2 * mu, j + 2 * mu);
      return M * std::exp(expo * lg);
    }
    return M * M * std::exp(-(1 - eta_tilde_) * lambda * lg);
  }

 private:
  BaseContext base_;
  Seed seed_;
  std::uint64_t budget_;
  double eta_tilde_;
  double omega_;
  double theta_lower_;
};

}  // namespace revprime
