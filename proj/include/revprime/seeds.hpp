#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "basedigits.hpp"

namespace revprime {

/// A real coefficient that is either an exact rational h/q or a double.
/// Rationals keep frac(a * d * g^k) exact for arbitrarily large k.
struct Coefficient {
  bool exact = false;
  std::int64_t h = 0;
  std::uint64_t q = 1;
  double value = 0.0;

  static Coefficient rational(std::int64_t h, std::uint64_t q) {
    require(q >= 1, "coefficient denominator must be positive");
    Coefficient c;
    c.exact = true;
    std::int64_t gg = std::gcd(h < 0 ? -h : h, static_cast<std::int64_t>(q));
    if (gg == 0) gg = 1;
    c.h = h / gg;
    c.q = q / static_cast<std::uint64_t>(gg);
    c.value = static_cast<double>(c.h) / static_cast<double>(c.q);
    return c;
  }
  static Coefficient real(double v) {
    Coefficient c;
    c.value = v;
    return c;
  }

  /// frac(a * m) for an integer m given as m mod q (exact) or m mod 2^128.
  double frac_times(std::uint64_t m_mod_q, uint128 m_wrapped) const {
    if (exact) {
      const std::uint64_t hm = static_cast<std::uint64_t>(mod_floor(h, static_cast<std::int64_t>(q)));
      return static_cast<double>(mulmod(hm, m_mod_q, q)) / static_cast<double>(q);
    }
    return frac_mul(value, m_wrapped);
  }

  std::string str() const {
    if (!exact) {
      std::ostringstream os;
      os.precision(17);
      os << value;
      return os.str();
    }
    return q == 1 ? std::to_string(h) : std::to_string(h) + "/" + std::to_string(q);
  }
};

enum class SeedFamily { zero, sod, reverse, random, table, callable };

/// alpha_i(d): value() is the real number, value_mod1() its fractional part
/// computed as exactly as the family allows.
class SeedModel {
 public:
  virtual ~SeedModel() = default;
  virtual double value(std::uint64_t i, unsigned d) const = 0;
  virtual double value_mod1(std::uint64_t i, unsigned d) const { return frac(value(i, d)); }
  virtual SeedFamily family() const = 0;
  virtual std::string label() const = 0;
};

class Seed {
 public:
  Seed() = default;
  Seed(std::shared_ptr<const SeedModel> model, unsigned g, std::uint64_t offset = 0)
      : model_(std::move(model)), g_(g), offset_(offset) {}

  double eval(std::uint64_t i, unsigned d) const { return model_->value(i + offset_, d); }
  double eval_mod1(std::uint64_t i, unsigned d) const { return model_->value_mod1(i + offset_, d); }

  Seed shift(std::uint64_t j) const { return Seed(model_, g_, offset_ + j); }

  unsigned g() const { return g_; }
  std::uint64_t offset() const { return offset_; }
  SeedFamily family() const { return model_->family(); }
  const SeedModel& model() const { return *model_; }
  std::string label() const {
    return offset_ == 0 ? model_->label() : model_->label() + "[+" + std::to_string(offset_) + "]";
  }

 private:
  std::shared_ptr<const SeedModel> model_;
  unsigned g_ = 2;
  std::uint64_t offset_ = 0;
};

inline Seed shift(const Seed& s, std::uint64_t j) { return s.shift(j); }

namespace detail {

class ZeroModel final : public SeedModel {
 public:
  double value(std::uint64_t, unsigned) const override { return 0.0; }
  double value_mod1(std::uint64_t, unsigned) const override { return 0.0; }
  SeedFamily family() const override { return SeedFamily::zero; }
  std::string label() const override { return "zero"; }
};

class SodModel final : public SeedModel {
 public:
  explicit SodModel(Coefficient a) : a_(a) {}
  double value(std::uint64_t, unsigned d) const override {
    if (a_.exact) return static_cast<double>(static_cast<long double>(a_.h) * d / a_.q);
    return a_.value * d;
  }
  double value_mod1(std::uint64_t, unsigned d) const override {
    return a_.frac_times(a_.exact ? d % a_.q : 0, d);
  }
  SeedFamily family() const override { return SeedFamily::sod; }
  std::string label() const override { return "sod:" + a_.str(); }
  const Coefficient& coefficient() const { return a_; }

 private:
  Coefficient a_;
};

// alpha_i(d) = a d g^(L-i-1)
class ReverseModel final : public SeedModel {
 public:
  ReverseModel(unsigned g, std::uint64_t L, Coefficient a) : g_(g), L_(L), a_(a) {}

  double value(std::uint64_t i, unsigned d) const override {
    const long double k = static_cast<long double>(L_) - static_cast<long double>(i) - 1;
    const long double a = a_.exact ? static_cast<long double>(a_.h) / a_.q : a_.value;
    return static_cast<double>(a * d * std::pow(static_cast<long double>(g_), k));
  }

  double value_mod1(std::uint64_t i, unsigned d) const override {
    if (d == 0) return 0.0;
    if (i + 1 <= L_) {
      const std::uint64_t k = L_ - i - 1;
      if (a_.exact) return a_.frac_times(mulmod(d, powmod(g_, k, a_.q), a_.q), 0);
      return a_.frac_times(0, uint128(d) * pow_wrap(g_, k));
    }
    // negative exponent: a d / g^s
    const std::uint64_t s = i + 1 - L_;
    if (a_.exact) {
      // frac(h d / (q g^s)) exactly while q g^s fits in 64 bits
      uint128 den = a_.q;
      bool fits = true;
      for (std::uint64_t t = 0; t < s && fits; ++t) {
        den *= g_;
        fits = den < (uint128(1) << 63);
      }
      if (fits) {
        const auto D = static_cast<std::int64_t>(den);
        const std::int64_t num = mod_floor(static_cast<std::int64_t>(
                                               (int128(a_.h) * d) % int128(D)),
                                           D);
        return static_cast<double>(num) / static_cast<double>(D);
      }
    }
    return frac(value(i, d));
  }

  SeedFamily family() const override { return SeedFamily::reverse; }
  std::string label() const override {
    return "reverse:" + a_.str() + "," + std::to_string(L_);
  }
  unsigned g() const { return g_; }
  std::uint64_t L() const { return L_; }
  const Coefficient& coefficient() const { return a_; }

 private:
  unsigned g_;
  std::uint64_t L_;
  Coefficient a_;
};

class RandomModel final : public SeedModel {
 public:
  explicit RandomModel(std::uint64_t seed) : seed_(seed) {}
  double value(std::uint64_t i, unsigned d) const override {
    return hash_to_unit(hash_combine(hash_combine(seed_, i), d));
  }
  SeedFamily family() const override { return SeedFamily::random; }
  std::string label() const override { return "random:" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
};

// rows cycle with period rows.size()
class TableModel final : public SeedModel {
 public:
  explicit TableModel(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {}
  double value(std::uint64_t i, unsigned d) const override { return rows_[i % rows_.size()][d]; }
  SeedFamily family() const override { return SeedFamily::table; }
  std::string label() const override { return "table:" + std::to_string(rows_.size()); }

 private:
  std::vector<std::vector<double>> rows_;
};

class CallableModel final : public SeedModel {
 public:
  CallableModel(std::function<double(std::uint64_t, unsigned)> fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)) {}
  double value(std::uint64_t i, unsigned d) const override { return fn_(i, d); }
  SeedFamily family() const override { return SeedFamily::callable; }
  std::string label() const override { return label_; }

 private:
  std::function<double(std::uint64_t, unsigned)> fn_;
  std::string label_;
};

}  // namespace detail

inline Seed zero_seed(unsigned g) { return Seed(std::make_shared<detail::ZeroModel>(), g); }

inline Seed sod_seed(unsigned g, Coefficient a) { return Seed(std::make_shared<detail::SodModel>(a), g); }
inline Seed sod_seed(unsigned g, double a) { return sod_seed(g, Coefficient::real(a)); }

inline Seed reverse_seed(unsigned g, std::uint64_t L, Coefficient a) {
  return Seed(std::make_shared<detail::ReverseModel>(g, L, a), g);
}
inline Seed reverse_seed(unsigned g, std::uint64_t L, double a) {
  return reverse_seed(g, L, Coefficient::real(a));
}

inline Seed random_seed(unsigned g, std::uint64_t rng_seed) {
  return Seed(std::make_shared<detail::RandomModel>(rng_seed), g);
}

inline Seed table_seed(unsigned g, std::vector<std::vector<double>> rows) {
  require(!rows.empty(), "table seed needs at least one row");
  for (const auto& r : rows) require(r.size() == g, "table seed rows must have g entries");
  return Seed(std::make_shared<detail::TableModel>(std::move(rows)), g);
}

inline Seed callable_seed(unsigned g, std::function<double(std::uint64_t, unsigned)> fn,
                          std::string label = "callable") {
  return Seed(std::make_shared<detail::CallableModel>(std::move(fn), std::move(label)), g);
}

/// f_lambda^[j](n) = sum_{i<lambda} alpha_{i+j}(eps_i(n)); zero digits count.
inline double f_eval(const Seed& s, unsigned lambda, std::uint64_t j, uint128 n) {
  const unsigned g = s.g();
  double acc = 0.0;
  for (unsigned i = 0; i < lambda; ++i) {
    acc += s.eval(i + j, static_cast<unsigned>(n % g));
    n /= g;
  }
  return acc;
}

/// frac(f_lambda^[j](n)), assembled from the exact per-digit fractional parts.
inline double f_phase(const Seed& s, unsigned lambda, std::uint64_t j, uint128 n) {
  const unsigned g = s.g();
  double acc = 0.0;
  for (unsigned i = 0; i < lambda; ++i) {
    acc += s.eval_mod1(i + j, static_cast<unsigned>(n % g));
    n /= g;
  }
  return frac(acc);
}

/// Table T[i][d] = frac(alpha_{i+j}(d)) for i < lambda.
inline std::vector<std::vector<double>> phase_table(const Seed& s, unsigned lambda, std::uint64_t j) {
  std::vector<std::vector<double>> t(lambda, std::vector<double>(s.g()));
  for (unsigned i = 0; i < lambda; ++i)
    for (unsigned d = 0; d < s.g(); ++d) t[i][d] = s.eval_mod1(i + j, d);
  return t;
}

/// Parses "h/q", an integer, or a decimal literal.
inline Coefficient parse_coefficient(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      return Coefficient::rational(std::stoll(text.substr(0, slash)),
                                   std::stoull(text.substr(slash + 1)));
    }
    std::size_t used = 0;
    const long long as_int = std::stoll(text, &used);
    if (used == text.size()) return Coefficient::rational(as_int, 1);
    return Coefficient::real(std::stod(text));
  } catch (const std::logic_error&) {
    throw precondition_error("bad seed coefficient '" + text + "'");
  }
}

/// "zero" | "sod:a" | "reverse:a,L" | "random:seed"
inline Seed parse_seed(const std::string& spec, unsigned g) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "zero") return zero_seed(g);
  if (name == "sod") {
    require(!args.empty(), "sod seed needs a coefficient: sod:a");
    return sod_seed(g, parse_coefficient(args));
  }
  if (name == "reverse") {
    const auto comma = args.find(',');
    require(comma != std::string::npos, "reverse seed needs reverse:a,L");
    return reverse_seed(g, std::stoull(args.substr(comma + 1)), parse_coefficient(args.substr(0, comma)));
  }
  if (name == "random") return random_seed(g, args.empty() ? 0 : std::stoull(args));
  throw precondition_error("unknown seed family '" + name + "'");
}

}  // namespace revprime
