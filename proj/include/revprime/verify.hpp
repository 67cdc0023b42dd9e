#pragma once

// Verifier suites. Each suite expands a parameter grid into cells, evaluates
// every cell in isolation (so any thread count gives the same bits) and
// folds the per-cell bound reports into named tallies in cell order.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "bound.hpp"
#include "expsum.hpp"
#include "primesum.hpp"
#include "report.hpp"
#include "revcount.hpp"
#include "seeds.hpp"

namespace revprime {

inline constexpr std::uint64_t kDefaultRngSeed = 20240601;

struct CellResult {
  json row = json::object();
  std::map<std::string, BoundTally> tallies;
  double ratio = -1;  // calibrated suites: lhs / shape for this cell

  void add(const BoundReport& r) {
    auto& t = tallies[r.name];
    t.name = r.name;
    t.add(r);
  }

  template <typename ParamsFn>
  void check(const std::string& name, double lhs, double rhs, ParamsFn&& params, double abs_slack = 0) {
    auto& t = tallies[name];
    t.name = name;
    t.add_lazy(name, lhs, rhs, abs_slack, std::forward<ParamsFn>(params));
  }
};

struct SuiteOutput {
  std::string suite;
  json params;
  bool calibrated = false;
  std::vector<json> rows;
  std::map<std::string, BoundTally> tallies;
  std::size_t cells = 0;
  double max_ratio = 0;

  bool pass() const {
    for (const auto& [name, t] : tallies)
      if (!t.pass()) return false;
    return true;
  }

  json summary() const {
    json s;
    s["suite"] = suite;
    s["cells"] = cells;
    json tl = json::array();
    for (const auto& [name, t] : tallies) tl.push_back(t.to_json());
    s["tallies"] = tl;
    if (calibrated) s["max_ratio"] = max_ratio;
    s["pass"] = pass();
    return s;
  }
};

/// Runs cell(i) for i < n and merges in index order.
inline SuiteOutput run_cells(std::string suite, json params, std::size_t n, unsigned threads,
                             const std::function<CellResult(std::size_t)>& cell, bool calibrated = false) {
  std::vector<CellResult> results(n);
  parallel_for(n, threads, [&](std::size_t i) { results[i] = cell(i); });
  SuiteOutput out;
  out.suite = std::move(suite);
  out.params = std::move(params);
  out.calibrated = calibrated;
  out.cells = n;
  for (auto& r : results) {
    out.rows.push_back(std::move(r.row));
    for (auto& [name, t] : r.tallies) {
      auto& dst = out.tallies[name];
      dst.name = name;
      dst.merge(t);
    }
    if (calibrated) out.max_ratio = std::max(out.max_ratio, r.ratio);
  }
  return out;
}

// ---------------------------------------------------------------------------
// parameter helpers
// ---------------------------------------------------------------------------

inline std::vector<unsigned> param_bases(const json& p) {
  std::vector<unsigned> gs;
  if (p.at("g").is_array())
    for (const auto& v : p.at("g")) gs.push_back(v.get<unsigned>());
  else
    gs.push_back(p.at("g").get<unsigned>());
  for (auto g : gs) require(g >= 2, "base g must be at least 2");
  return gs;
}

/// lambda_max may be a number or an object keyed by g.
inline unsigned param_lambda_max(const json& p, unsigned g, unsigned fallback) {
  if (!p.contains("lambda_max")) return fallback;
  const auto& v = p.at("lambda_max");
  if (v.is_number()) return v.get<unsigned>();
  const auto key = std::to_string(g);
  return v.contains(key) ? v.at(key).get<unsigned>() : fallback;
}

inline std::vector<std::string> param_strings(const json& p, const char* key) {
  std::vector<std::string> out;
  for (const auto& v : p.at(key)) out.push_back(v.get<std::string>());
  return out;
}

inline std::uint64_t param_seed(const json& p) { return p.value("rng_seed", kDefaultRngSeed); }

/// A seed of the named family with random parameters.
inline Seed sample_seed(const std::string& family, unsigned g, Rng& rng, std::uint64_t L_hint) {
  if (family == "zero") return zero_seed(g);
  if (family == "sod") return sod_seed(g, Coefficient::real(rng.uniform()));
  if (family == "sod-rational") {
    const auto q = static_cast<std::uint64_t>(rng.integer(2, 60));
    return sod_seed(g, Coefficient::rational(rng.integer(1, static_cast<std::int64_t>(q) - 1), q));
  }
  if (family == "reverse") {
    const auto q = static_cast<std::uint64_t>(rng.integer(2, 97));
    const auto L = L_hint + static_cast<std::uint64_t>(rng.integer(0, 5));
    return reverse_seed(g, L, Coefficient::rational(rng.integer(1, static_cast<std::int64_t>(q) - 1), q));
  }
  if (family == "reverse-real") {
    const auto L = L_hint + static_cast<std::uint64_t>(rng.integer(0, 5));
    return reverse_seed(g, L, Coefficient::real(rng.uniform()));
  }
  if (family == "random") return random_seed(g, rng.next());
  return parse_seed(family, g);
}

inline Rng cell_rng(const json& p, std::size_t cell, std::uint64_t salt = 0) {
  return Rng(hash_combine(hash_combine(param_seed(p), salt), cell));
}

// ---------------------------------------------------------------------------
// F sweeps: product formula, recursion, L-infinity
// ---------------------------------------------------------------------------

struct FCase {
  unsigned g = 2;
  std::string family;
  Seed seed;
  unsigned lambda = 0;
  std::uint64_t j = 0;
  double beta = 0;
  unsigned lambda_rec = 1;
};

inline FCase make_fcase(const json& p, std::size_t c) {
  const auto gs = param_bases(p);
  const auto fams = param_strings(p, "families");
  FCase fc;
  fc.g = gs[c % gs.size()];
  fc.family = fams[(c / gs.size()) % fams.size()];
  Rng rng = cell_rng(p, c);
  fc.lambda = static_cast<unsigned>(rng.integer(0, param_lambda_max(p, fc.g, 10)));
  fc.j = static_cast<std::uint64_t>(rng.integer(0, 3));
  fc.beta = rng.uniform();
  fc.lambda_rec = static_cast<unsigned>(rng.integer(1, 10));
  fc.seed = sample_seed(fc.family, fc.g, rng, fc.lambda + fc.j);
  return fc;
}

inline SuiteOutput suite_product_formula(const json& p, unsigned threads) {
  const auto n = p.at("cases").get<std::size_t>();
  const double tol = p.at("tolerance").get<double>();
  const auto budget = p.at("direct_budget").get<std::uint64_t>();
  return run_cells("product-formula", p, n, threads, [&](std::size_t c) {
    const FCase fc = make_fcase(p, c);
    const ExpSumContext es(fc.seed, budget);
    CellResult r;
    const double direct = std::abs(es.F_direct(fc.lambda, fc.j, fc.beta));
    const double product = es.F_abs_product(fc.lambda, fc.j, fc.beta);
    const json cell{{"case", c}, {"g", fc.g}, {"seed", fc.seed.label()}, {"lambda", fc.lambda}, {"j", fc.j},
                    {"beta", fc.beta}};
    r.add(make_report("product-formula", std::fabs(direct - product), tol, cell));
    r.add(make_report("unit-bound", product, 1.0, cell));
    // one step of the recursion at a possibly larger lambda
    const unsigned lr = fc.lambda_rec;
    const double whole = es.F_abs_product(lr, fc.j, fc.beta);
    const double split =
        es.F_abs_product(lr - 1, fc.j + 1, frac_mul(fc.beta, fc.g)) * es.phi(0, fc.j, fc.beta) / fc.g;
    r.add(make_report("recursion", std::fabs(whole - split), tol, {{"case", c}, {"lambda", lr}}));
    r.row = cell;
    r.row["direct_abs"] = direct;
    r.row["product"] = product;
    r.row["diff"] = std::fabs(direct - product);
    return r;
  });
}

inline SuiteOutput suite_linf(const json& p, unsigned threads) {
  const auto n = p.at("cases").get<std::size_t>();
  const auto direct_max = p.at("direct_max").get<std::uint64_t>();
  return run_cells("linf", p, n, threads, [&](std::size_t c) {
    const FCase fc = make_fcase(p, c);
    const ExpSumContext es(fc.seed, direct_max);
    CellResult r;
    const bool direct = es.direct_cost(fc.lambda) <= direct_max;
    const double F = direct ? std::abs(es.F_direct(fc.lambda, fc.j, fc.beta))
                            : es.F_abs_product(fc.lambda, fc.j, fc.beta);
    const double sigma = es.sigma(fc.lambda, fc.j);
    const double rhs = std::pow(double(fc.g), 0.05 - sigma);
    const json cell{{"case", c}, {"g", fc.g}, {"seed", fc.seed.label()}, {"lambda", fc.lambda}, {"j", fc.j},
                    {"beta", fc.beta}, {"route", direct ? "direct" : "product"}};
    r.add(make_report("linf", F, rhs, cell));
    r.row = cell;
    r.row["abs_F"] = F;
    r.row["sigma"] = sigma;
    r.row["rhs"] = rhs;
    return r;
  });
}

// ---------------------------------------------------------------------------
// L1 moment
// ---------------------------------------------------------------------------

inline SuiteOutput suite_l1_moment(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto fams = param_strings(p, "families");
  const auto betas = p.at("betas").get<std::size_t>();
  const auto k_max = p.at("k_max").get<std::uint64_t>();
  const double slack = p.at("abs_slack").get<double>();
  struct Cell {
    unsigned g, lambda;
    std::string family;
    std::size_t b;
  };
  std::vector<Cell> cells;
  for (auto g : gs)
    for (unsigned lam = 0; lam <= param_lambda_max(p, g, 8); ++lam)
      for (const auto& f : fams)
        for (std::size_t b = 0; b < betas; ++b) cells.push_back({g, lam, f, b});

  return run_cells("l1-moment", p, cells.size(), threads, [&](std::size_t c) {
    const Cell& cl = cells[c];
    Rng rng = cell_rng(p, c);
    const double beta = rng.uniform();
    const auto j = static_cast<std::uint64_t>(rng.integer(0, 2));
    const Seed seed = sample_seed(cl.family, cl.g, rng, cl.lambda + j);
    const ExpSumContext es(seed);
    const auto A = es.l1_levels(cl.lambda, j, beta);
    const std::uint64_t N = A[cl.lambda].size();
    const double eta = es.eta_tilde();
    const json base{{"g", cl.g}, {"lambda", cl.lambda}, {"seed", seed.label()}, {"j", j}, {"beta", beta}};
    CellResult r;

    // levels agree with the product route
    for (int t = 0; t < 3; ++t) {
      const auto h = static_cast<std::uint64_t>(rng.integer(0, static_cast<std::int64_t>(N) - 1));
      const double direct = es.F_abs_product(cl.lambda, j, (double(h) + beta) / double(N));
      r.add(make_report("l1-levels", std::fabs(direct - A[cl.lambda][h]), 1e-12, base));
    }

    // group admissible deltas by k; bucket sums for k g^delta fold out of
    // those for k g^(delta+1)
    std::map<std::uint64_t, std::vector<unsigned>> by_k;
    for (auto [k, delta] : es.l1_admissible(cl.lambda, k_max)) by_k[k].push_back(delta);
    const unsigned g = cl.g;
    for (auto& [k, deltas] : by_k) {
      const unsigned top = *std::max_element(deltas.begin(), deltas.end());
      std::uint64_t Q = k * es.base().pow64(top);
      std::vector<double> bucket(Q, 0.0);
      std::uint64_t res = 0;
      for (std::uint64_t h = 0; h < N; ++h) {
        bucket[res] += A[cl.lambda][h];
        if (++res == Q) res = 0;
      }
      for (int delta = static_cast<int>(top); delta >= 0; --delta) {
        if (delta < static_cast<int>(top)) {
          const std::uint64_t q = Q / g;
          std::vector<double> folded(q, 0.0);
          for (std::uint64_t a = 0; a < Q; ++a) folded[a % q] += bucket[a];
          bucket.swap(folded);
          Q = q;
        }
        if (std::find(deltas.begin(), deltas.end(), unsigned(delta)) == deltas.end()) continue;
        const std::uint64_t D = es.base().pow64(unsigned(delta));
        const double scale = double(g) * std::pow(double(N) / double(Q), eta);
        for (std::uint64_t a = 0; a < Q; ++a)
          r.check("l1-moment", bucket[a], scale * A[delta][a % D], [&] {
            json params = base;
            params["k"] = k;
            params["delta"] = delta;
            params["a"] = a;
            return params;
          }, slack);
      }
    }
    const auto& lt = r.tallies["l1-moment"];
    const std::size_t checked = lt.checked, violations = lt.violations;
    const double worst = lt.max_ratio;
    double total = 0;
    for (double v : A[cl.lambda]) total += v;
    const double pure_rhs = std::pow(double(cl.g), eta * cl.lambda + 1);
    r.add(make_report("l1-moment-pure", total, pure_rhs, base));
    r.row = base;
    r.row["checked"] = checked;
    r.row["violations"] = violations;
    r.row["max_ratio"] = worst;
    r.row["pure_lhs"] = total;
    r.row["pure_rhs"] = pure_rhs;
    return r;
  });
}

// ---------------------------------------------------------------------------
// Psi and Theta
// ---------------------------------------------------------------------------

inline SuiteOutput suite_psi(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto ts = p.at("t_samples").get<std::size_t>();
  const auto fams = param_strings(p, "families");
  return run_cells("psi", p, gs.size() * ts, threads, [&](std::size_t c) {
    const unsigned g = gs[c / ts];
    Rng rng = cell_rng(p, c);
    const std::string fam = fams[c % fams.size()];
    const Seed seed = sample_seed(fam, g, rng, 8);
    const ExpSumContext es(seed);
    const auto i = static_cast<std::uint64_t>(rng.integer(0, 5));
    const double t = rng.uniform(0, 2.0 * g);
    const double eta = es.eta_tilde();
    const double theta_i = es.theta_i(i);
    CellResult r;
    std::size_t evaluated = 0;
    for (unsigned R : divisors_of(g))
      for (unsigned S : divisors_of(g)) {
        const double psi = es.psi(i, t, R, S);
        ++evaluated;
        const json params{{"g", g}, {"seed", seed.label()}, {"i", i}, {"t", t}, {"R", R}, {"S", S}};
        const bool coprime = std::gcd(R, g / S) == 1;
        if (R == 1 && S == 1) r.add(make_report("psi-single-term", psi, 1.0, params));
        if (R >= 2 && S != g && coprime) {
          r.add(make_report("psi-two-thirds", psi * psi, 2.0 / 3.0 * R * S, params));
          const double ceiling_form = double(S) / g * std::ceil(double(g) / (double(R) * S)) * R * S;
          r.add(make_report("psi-ceiling-form", psi * psi, ceiling_form, params));
        }
        if (R >= 2 && S == g) r.add(make_report("psi-theta-defect", psi * psi, double(R) * g * (1 - theta_i), params));
        if (R >= 2 && coprime) r.add(make_report("psi-eta-power", psi, std::pow(double(R) * S, eta), params));
      }
    r.row = {{"g", g}, {"seed", seed.label()}, {"i", i}, {"t", t}, {"theta_i", theta_i}, {"pairs", evaluated}};
    return r;
  });
}

inline SuiteOutput suite_theta(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto n = p.at("seeds").get<std::size_t>();
  const auto g_sweep = p.at("eta_g_max").get<unsigned>();
  auto out = run_cells("theta", p, gs.size() * n + 1, threads, [&](std::size_t c) {
    CellResult r;
    if (c == gs.size() * n) {
      // closed-form constants over a range of bases
      for (unsigned g = 2; g <= g_sweep; ++g) {
        const double gd = g;
        const json params{{"g", g}};
        r.add(make_report("eta-upper", eta_tilde(g), 0.5 - 1 / (4 * gd * gd * gd * std::log(gd)), params));
        r.add(make_report("eta-lower", 0.2075187, eta_tilde(g), params));
        r.add(make_report("theta-floor-above-cube", 1 / (gd * gd * gd), theta_lower_bound(g), params));
      }
      r.row = {{"eta_sweep_g_max", g_sweep}};
      return r;
    }
    const unsigned g = gs[c / n];
    Rng rng = cell_rng(p, c);
    const Seed seed = random_seed(g, rng.next());
    const ExpSumContext es(seed);
    const auto i = static_cast<std::uint64_t>(rng.integer(0, 50));
    const double th = es.theta_i(i);
    r.add(make_report("theta-floor", theta_lower_bound(g), th, {{"g", g}, {"seed", seed.label()}, {"i", i}}, 1e-12));
    r.row = {{"g", g}, {"seed", seed.label()}, {"i", i}, {"theta_i", th}};
    return r;
  });
  return out;
}

// ---------------------------------------------------------------------------
// single-digit moment bounds
// ---------------------------------------------------------------------------

inline SuiteOutput suite_digit_bounds(const std::string& which, const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto n = p.at("cases").get<std::size_t>();
  const auto fams = param_strings(p, "families");
  return run_cells(which, p, n, threads, [&](std::size_t c) {
    const unsigned g = gs[c % gs.size()];
    Rng rng = cell_rng(p, c);
    const Seed seed = sample_seed(fams[(c / gs.size()) % fams.size()], g, rng, 12);
    const ExpSumContext es(seed);
    const auto i = static_cast<std::uint64_t>(rng.integer(0, 8));
    const auto j = static_cast<std::uint64_t>(rng.integer(0, 3));
    const double beta = rng.uniform();
    const json base{{"g", g}, {"seed", seed.label()}, {"i", i}, {"j", j}, {"beta", beta}};
    CellResult r;
    if (which == "pair-bound") {
      const double ph = es.phi(i, j, beta);
      for (unsigned m = 0; m < g; ++m)
        for (unsigned nn = m + 1; nn < g; ++nn) {
          const double d = dist(seed.eval_mod1(i + j, m) - seed.eval_mod1(i + j, nn) - beta * (double(m) - nn));
          r.add(make_report("pair-bound", ph, g * std::exp(-8.0 / g * d * d), base));
        }
    } else if (which == "consecutive-pair") {
      FracPowerWalker w(beta, g);
      for (std::uint64_t k = 0; k < i; ++k) w.advance();
      const double x0 = w.value();
      w.advance();
      const double x1 = w.value();
      const double lhs = std::sqrt(es.phi(i, j, x0) * es.phi(i + 1, j, x1));
      r.add(make_report("consecutive-pair", lhs, std::pow(double(g), 1 - es.gamma(i, j)), base));
    } else if (which == "l2-orthogonality") {
      for (unsigned R : divisors_of(g))
        for (unsigned a = 1; a <= R; ++a) {
          if (std::gcd(a, R) != 1) continue;
          double s = 0;
          for (unsigned rr = 0; rr < R; ++rr) {
            const double ph = es.phi(i, j, beta + double(a) * rr / R);
            s += ph * ph;
          }
          json params = base;
          params["R"] = R;
          params["a"] = a;
          r.add(make_report("l2-orthogonality", s, double(g) * g, params));
        }
    } else if (which == "l4-moment") {
      const auto U = static_cast<unsigned>(rng.integer(2 * g - 1, 4 * g));
      double lhs = 0;
      for (unsigned u = 0; u < U; ++u) {
        const double ph = es.phi(i, j, beta + double(u) / U);
        lhs += ph * ph * ph * ph;
      }
      double rhs = 0;
      for (int h = -static_cast<int>(g) + 1; h < static_cast<int>(g); ++h) rhs += es.autocorrelation_sq(i + j, h);
      rhs *= U;
      json params = base;
      params["U"] = U;
      r.add(make_report("l4-moment", std::fabs(lhs - rhs), 1e-8 * std::max(1.0, rhs), params));
    }
    r.row = base;
    return r;
  });
}

// ---------------------------------------------------------------------------
// sum cleanup
// ---------------------------------------------------------------------------

inline SuiteOutput suite_sum_cleanup(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto fams = param_strings(p, "families");
  const auto betas = p.at("betas").get<std::size_t>();
  struct Cell {
    unsigned g, L;
    std::string family;
  };
  std::vector<Cell> cells;
  for (auto g : gs)
    for (unsigned L = 0; L <= param_lambda_max(p, g, 6); ++L)
      for (const auto& f : fams)
        for (std::size_t b = 0; b < betas; ++b) cells.push_back({g, L, f});
  return run_cells("sum-cleanup", p, cells.size(), threads, [&](std::size_t c) {
    const Cell& cl = cells[c];
    Rng rng = cell_rng(p, c);
    const double beta = rng.uniform();
    const auto j = static_cast<std::uint64_t>(rng.integer(0, 3));
    const Seed seed = sample_seed(cl.family, cl.g, rng, cl.L + j);
    const ExpSumContext es(seed);
    std::vector<double> block(cl.L + 1);
    for (unsigned lam = 0; lam <= cl.L; ++lam)
      block[lam] = std::abs(es.F_direct(lam, j, beta)) * static_cast<double>(es.base().pow64(lam));
    const std::uint64_t N = es.base().pow64(cl.L);
    const ExpSumContext::DigitSplitPhases f(seed, cl.L, j);
    const FracMul bn(beta);
    CellResult r;
    complex run = 0;
    double worst = 0;
    unsigned top = 0;  // largest lambda with g^lambda <= x
    for (std::uint64_t x = 1; x <= N; ++x) {
      run += unit(f(x - 1) - bn(x - 1));
      while (top + 1 <= cl.L && es.base().pow64(top + 1) <= x) ++top;
      double rhs = 0;
      for (unsigned lam = 0; lam <= top; ++lam) rhs += block[lam];
      rhs *= cl.g - 1;
      worst = std::max(worst, safe_ratio(std::abs(run), rhs));
      r.check("sum-cleanup", std::abs(run), rhs, [&] {
        return json{{"g", cl.g}, {"L", cl.L}, {"x", x}, {"seed", seed.label()}, {"beta", beta}};
      });
    }
    r.row = {{"g", cl.g}, {"L", cl.L}, {"seed", seed.label()}, {"j", j}, {"beta", beta}, {"max_ratio", worst}};
    return r;
  });
}

// ---------------------------------------------------------------------------
// Gallagher-Sobolev on Farey points
// ---------------------------------------------------------------------------

inline SuiteOutput suite_gallagher_sobolev(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto fams = param_strings(p, "families");
  const double step = p.at("step").get<double>();
  struct Cell {
    unsigned g, lambda;
    std::string family;
  };
  std::vector<Cell> cells;
  for (auto g : gs)
    for (unsigned lam = 1; lam <= param_lambda_max(p, g, 6); ++lam)
      for (const auto& f : fams) cells.push_back({g, lam, f});
  return run_cells("gallagher-sobolev", p, cells.size(), threads, [&](std::size_t c) {
    const Cell& cl = cells[c];
    Rng rng = cell_rng(p, c);
    const auto j = static_cast<std::uint64_t>(rng.integer(0, 2));
    const Seed seed = sample_seed(cl.family, cl.g, rng, cl.lambda + j);
    const ExpSumContext es(seed);
    const auto M = static_cast<std::uint64_t>(rng.integer(2, 8));
    // Farey points k/m, M <= m <= 2M, are 1/(2M)^2-spaced mod 1
    const double delta = 1.0 / (4.0 * double(M) * double(M));
    double lhs = 0;
    std::size_t points = 0;
    for (std::uint64_t m = M; m <= 2 * M; ++m)
      for (std::uint64_t k = 0; k < m; ++k)
        if (std::gcd(k, m) == 1) {
          lhs += es.F_abs_rational(cl.lambda, j, static_cast<std::int64_t>(k), m);
          ++points;
        }
    const auto steps = static_cast<std::uint64_t>(std::llround(1.0 / step));
    double I0 = 0, I1 = 0, tv = 0;
    complex prev_d = 0;
    for (std::uint64_t s = 0; s <= steps; ++s) {
      const auto [F, dF] = es.F_product_with_derivative(cl.lambda, j, double(s) / double(steps));
      if (s < steps) {
        I0 += std::abs(F);
        I1 += std::abs(dF);
      }
      if (s > 0) tv += std::abs(dF - prev_d);
      prev_d = dF;
    }
    I0 /= double(steps);
    I1 /= double(steps);
    const double rhs = I0 / delta + 0.5 * I1;
    // left Riemann sums err by at most step times the total variation
    const double slack = step * (I1 / delta + 0.5 * tv);
    CellResult r;
    const json params{{"g", cl.g}, {"lambda", cl.lambda}, {"seed", seed.label()}, {"M", M}, {"delta", delta}};
    r.add(make_report("gallagher-sobolev", lhs, rhs, params, slack));
    r.row = params;
    r.row["points"] = points;
    r.row["lhs"] = lhs;
    r.row["int_abs_F"] = I0;
    r.row["int_abs_dF"] = I1;
    r.row["discretization_slack"] = slack;
    return r;
  });
}

// ---------------------------------------------------------------------------
// van der Corput, sin-sum
// ---------------------------------------------------------------------------

inline SuiteOutput suite_vdc(const json& p, unsigned threads) {
  const auto n = p.at("cases").get<std::size_t>();
  const auto N_max = p.at("N_max").get<std::int64_t>();
  const auto R_max = p.at("R_max").get<std::int64_t>();
  return run_cells("vdc", p, n + 2, threads, [&](std::size_t c) {
    Rng rng = cell_rng(p, c);
    std::vector<complex> z;
    unsigned R = 1;
    std::string kind = "random";
    if (c == n) {
      kind = "constant";
      z.assign(static_cast<std::size_t>(N_max), 1.0);
    } else if (c == n + 1) {
      kind = "alternating";
      for (std::int64_t k = 0; k < N_max; ++k) z.push_back(k % 2 ? -1.0 : 1.0);
      R = 2;
    } else {
      const auto N = rng.integer(1, N_max);
      R = static_cast<unsigned>(rng.integer(1, R_max));
      for (std::int64_t k = 0; k < N; ++k) z.push_back(rng.uniform(0, 1) * unit(rng.uniform()));
    }
    const auto [lhs, rhs] = vdc_lhs_rhs(z, R);
    double scale = 0;
    for (const auto& v : z) scale += std::abs(v);
    CellResult r;
    const json params{{"case", c}, {"kind", kind}, {"N", z.size()}, {"R", R}};
    r.add(make_report("vdc", lhs, rhs, params, 1e-9 * scale * scale));
    r.row = params;
    r.row["lhs"] = lhs;
    r.row["rhs"] = rhs;
    return r;
  });
}

inline SuiteOutput suite_sin_sum(const json& p, unsigned threads) {
  const auto n = p.at("cases").get<std::size_t>();
  const auto m_max = p.at("m_max").get<std::int64_t>();
  return run_cells("sin-sum", p, n + 2, threads, [&](std::size_t c) {
    Rng rng = cell_rng(p, c);
    BoundReport rep;
    if (c == n) {
      rep = sin_sum_check(0, 1, 0.5, 10.0);
    } else if (c == n + 1) {
      rep = sin_sum_check(2, 5, 0.3, 100.0);
    } else {
      const auto m = static_cast<std::uint64_t>(rng.integer(1, m_max));
      const std::int64_t a = rng.integer(-2 * m_max, 2 * m_max);
      const double b = rng.uniform(-5, 5);
      const double M = std::exp(rng.uniform(std::log(0.1), std::log(1e4)));
      rep = sin_sum_check(a, m, b, M);
    }
    CellResult r;
    r.add(rep);
    r.row = rep.to_json();
    return r;
  });
}

// ---------------------------------------------------------------------------
// truncation containment
// ---------------------------------------------------------------------------

inline SuiteOutput suite_truncation(const json& p, unsigned threads) {
  const unsigned g = param_bases(p).front();
  const auto fams = param_strings(p, "families");
  const auto M_max = p.at("M_max").get<unsigned>();
  const auto N_max = p.at("N_max").get<unsigned>();
  const auto R_max = p.at("R_max").get<unsigned>();
  const auto L = p.at("L").get<unsigned>();
  const std::size_t cells = fams.size() * M_max;
  return run_cells("truncation", p, cells, threads, [&](std::size_t c) {
    const std::string fam = fams[c / M_max];
    const unsigned M = static_cast<unsigned>(c % M_max) + 1;
    Rng rng = cell_rng(p, c / M_max);  // same seed for every M of a family
    const Seed seed = sample_seed(fam, g, rng, L);
    const ExpSumContext es(seed);
    CellResult r;
    std::uint64_t pairs = 0, in_set = 0, in_super = 0, configs = 0;
    for (unsigned N = 1; N <= N_max; ++N)
      for (unsigned R = 1; R <= R_max && R * R <= N; ++R) {
        const long lam = truncation_lambda(g, M, R);
        if (lam > static_cast<long>(L)) continue;
        for (unsigned rr = 0; rr <= R; ++rr) {
          const auto t = truncation_set_size(es, M, N, R, rr, L, lam);
          ++configs;
          pairs += t.pairs;
          in_set += t.set_size;
          in_super += t.superset_size;
          if (rr == 0)
            r.check("truncation-r-zero", double(t.set_size), 0.0, [&] { return json{{"M", M}, {"N", N}, {"R", R}}; });
          r.check("truncation-containment", t.contained ? 0.0 : 1.0, 0.0, [&] {
            return json{{"seed", seed.label()}, {"M", M}, {"N", N}, {"R", R}, {"r", rr}, {"lambda", lam},
                        {"set", t.set_size}, {"superset", t.superset_size}};
          });
        }
      }
    r.row = {{"seed", seed.label()}, {"M", M}, {"configs", configs}, {"pairs", pairs},
             {"set_total", in_set}, {"superset_total", in_super}};
    return r;
  });
}

// ---------------------------------------------------------------------------
// Vaughan identity and route
// ---------------------------------------------------------------------------

inline double parse_z(const json& v, std::uint64_t n) {
  if (v.is_string()) {
    require(v.get<std::string>() == "n^1/4", "z must be a number or \"n^1/4\"");
    return std::pow(double(n), 0.25);
  }
  return v.get<double>();
}

inline SuiteOutput suite_vaughan(const json& p, unsigned threads) {
  const auto limit = p.at("limit").get<std::uint64_t>();
  const auto zs = p.at("z");
  const std::uint64_t chunk = 1000;
  const std::uint64_t chunks = (limit + chunk - 1) / chunk;
  const PrimeTable pt = PrimeTable::build(std::max<std::uint64_t>(limit, 2));
  return run_cells("vaughan", p, zs.size() * chunks, threads, [&](std::size_t c) {
    const json& zspec = zs[c / chunks];
    const std::uint64_t lo = (c % chunks) * chunk + 1;
    const std::uint64_t hi = std::min(limit, lo + chunk - 1);
    CellResult r;
    double worst = 0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double z = parse_z(zspec, n);
      const auto t = vaughan_terms(n, z, pt);
      const double lam = pt.von_mangoldt(n);
      const double diff = std::fabs(t.total() - lam);
      worst = std::max(worst, diff);
      auto params = [&] { return json{{"n", n}, {"z", z}}; };
      r.check("vaughan-identity", diff, 1e-9, params);
      const double ln = std::log(double(n));
      r.check("c2-bound", std::fabs(vaughan_c2(n, z, pt)), ln, params, 1e-12);
      r.check("c3-bound", std::fabs(vaughan_c3(n, z, pt)), ln, params, 1e-12);
    }
    r.row = {{"z", zspec}, {"n_lo", lo}, {"n_hi", hi}, {"max_abs_error", worst}};
    return r;
  });
}

inline SuiteOutput suite_vaughan_route(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto fams = param_strings(p, "families");
  const auto xs = p.at("x");
  std::vector<std::tuple<unsigned, std::string, double>> cells;
  for (auto g : gs)
    for (const auto& f : fams)
      for (const auto& x : xs) cells.emplace_back(g, f, x.get<double>());
  double xmax = 2;
  for (const auto& x : xs) xmax = std::max(xmax, x.get<double>());
  const PrimeTable pt = PrimeTable::build(static_cast<std::uint64_t>(xmax));
  return run_cells("vaughan-route", p, cells.size(), threads, [&](std::size_t c) {
    const auto& [g, fam, x] = cells[c];
    Rng rng = cell_rng(p, c);
    const unsigned L = floor_log(static_cast<std::uint64_t>(x), g) + 1;
    const Seed seed = sample_seed(fam, g, rng, L);
    const ExpSumContext es(seed);
    const auto res = prime_exp_sum(es, L, x, pt, true);
    const complex V = res.vaughan_total();
    const double rel = std::abs(V - res.S) / std::max(1.0, std::abs(res.S));
    const json params{{"g", g}, {"L", L}, {"x", x}, {"seed", seed.label()}};
    CellResult r;
    r.add(make_report("vaughan-route", rel, 1e-6, params));
    r.add(make_report("kappa-sanity", res.kappa, res.xi / 20.0, params, 1e-12));
    r.row = params;
    r.row["S"] = {res.S.real(), res.S.imag()};
    r.row["S_vaughan"] = {V.real(), V.imag()};
    r.row["relative_difference"] = rel;
    return r;
  });
}

// ---------------------------------------------------------------------------
// sigma monotonicity and related exact checks
// ---------------------------------------------------------------------------

inline SuiteOutput suite_monotonicity(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto fams = param_strings(p, "families");
  const auto per = p.at("seeds_per_family").get<std::size_t>();
  const auto lmax = p.at("lambda_max").get<unsigned>();
  const auto jmax = p.at("j_max").get<unsigned>();
  const double tol = p.at("abs_tolerance").get<double>();
  const std::size_t n = gs.size() * fams.size() * per;
  return run_cells("monotonicity", p, n, threads, [&](std::size_t c) {
    const unsigned g = gs[c / (fams.size() * per)];
    const std::string fam = fams[(c / per) % fams.size()];
    Rng rng = cell_rng(p, c);
    const Seed seed = sample_seed(fam, g, rng, lmax + jmax + 2);
    const ExpSumContext es(seed);
    const double ceil_g = gamma_ceiling(g);
    const double eta = es.eta_tilde();
    const double lg = std::log(double(g));
    CellResult r;
    const json base{{"g", g}, {"seed", seed.label()}};
    // sigma tables for every shift
    std::vector<std::vector<double>> sig(jmax + lmax + 2);
    for (unsigned j = 0; j < sig.size(); ++j) sig[j] = es.sigma_prefix(lmax + 1, j);
    for (unsigned j = 0; j <= jmax; ++j) {
      for (unsigned i = 0; i <= lmax; ++i) {
        const double gm = es.gamma(i, j);
        r.check("gamma-range", gm, ceil_g, [&] { return base; }, 1e-15);
        r.check("gamma-nonnegative", -gm, 0.0, [&] { return base; });
      }
      for (unsigned lam = 0; lam <= lmax; ++lam) {
        json params = base;
        params["j"] = j;
        params["lambda"] = lam;
        r.check("sigma-range", sig[j][lam], lam / 20.0, [&] { return params; }, tol);
        if (lam >= 1) {
          const double s = sig[j][lam], s1 = sig[j + 1][lam - 1];
          r.check("sigma-one-shift-upper", s1, s, [&] { return params; }, tol);
          r.check("sigma-one-shift-lower", s - ceil_g, s1, [&] { return params; }, tol);
          r.check("sigma-shift-identity", std::fabs(s - s1 - es.gamma(0, j)), tol, [&] { return params; });
        }
        for (double A : {std::log(2.0) / lg, 1.0, 3.0}) {
          for (unsigned mu = 0; mu < lam; ++mu) {
            const double f0 = A * (0.5 - eta) * mu + sig[j + mu][lam - mu];
            const double f1 = A * (0.5 - eta) * (mu + 1) + sig[j + mu + 1][lam - mu - 1];
            json pm = params;
            pm["A"] = A;
            pm["mu"] = mu;
            r.check("sigma-with-eta", f0, f1, [&] { return pm; }, tol);
          }
        }
        if (lam < lmax + 1) {
          for (double A : {ceil_g, 2 * ceil_g, 0.1}) {
            json pm = params;
            pm["A"] = A;
            r.check("sigma-with-lambda", A * lam - sig[j][lam], A * (lam + 1) - sig[j][lam + 1],
                    [&] { return pm; }, tol);
          }
        }
      }
    }
    // kappa <= xi/20 <= log x / (80 log g) over a grid of x
    for (double x : {2.0, 10.0, 1e3, 1e5, 1e6, 1e9, 1e12}) {
      const long xi = floor_log_scaled(x, g, 0.25);
      const double kappa = es.sigma(static_cast<std::uint64_t>(std::max(0L, xi)), 0) / 10;
      json params = base;
      params["x"] = x;
      r.check("kappa-sanity", kappa, xi / 20.0, [&] { return params; }, tol);
      r.check("kappa-xi-log", xi / 20.0, std::log(x) / (80 * lg), [&] { return params; }, tol);
    }
    r.row = base;
    r.row["sigma_lambda_max"] = sig[0][lmax];
    return r;
  });
}

inline SuiteOutput suite_sigma_lower(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto qs = p.at("q");
  const auto Ls = p.at("L");
  const auto lams = p.at("lambda");
  std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>> cells;
  for (auto g : gs)
    for (const auto& q : qs)
      for (const auto& L : Ls) cells.emplace_back(g, q.get<std::uint64_t>(), L.get<std::uint64_t>());
  return run_cells("sigma-lower", p, cells.size(), threads, [&](std::size_t c) {
    const auto [g, q, L] = cells[c];
    CellResult r;
    const Coefficient alpha = Coefficient::rational(1, q);
    r.row = {{"g", g}, {"q", q}, {"L", L}};
    const std::uint64_t g2m1 = std::uint64_t(g) * g - 1;
    if (std::gcd(q, std::uint64_t(g)) != 1 || std::gcd(q, g2m1) != 1) {
      r.row["skipped"] = "q shares a factor with g(g^2-1)";
      return r;
    }
    for (const auto& lv : lams) {
      const auto lam = lv.get<std::uint64_t>();
      if (lam > L) continue;
      const auto s = sigma_lower_blocks(g, L, lam, alpha);
      r.add(s.block_bound);
      r.add(s.chain_bound);
    }
    // growth: sigma_{2 lambda} - sigma_lambda >= K(lambda) coef / (g^2 (g+1)^2)
    const ExpSumContext es(reverse_seed(g, L, alpha));
    const auto sig = es.sigma_prefix(L, 0);
    for (std::uint64_t lam = 1; 2 * lam <= L; lam *= 2) {
      const auto s = sigma_lower_blocks(g, L, lam, alpha);
      const double gd = g;
      const double step = s.K * gamma_coefficient(g) / (gd * gd * (gd + 1) * (gd + 1));
      r.add(make_report("sigma-growth", sig[lam] + step, sig[2 * lam], {{"g", g}, {"q", q}, {"L", L}, {"lambda", lam}},
                        1e-15));
    }
    for (std::uint64_t lam = 0; lam < L; ++lam)
      r.add(make_report("sigma-nondecreasing", sig[lam], sig[lam + 1], {{"g", g}, {"q", q}, {"lambda", lam}}));
    r.row["sigma_L"] = sig[L];
    return r;
  });
}

inline SuiteOutput suite_i0_landing(const json& p, unsigned threads) {
  const auto gs = param_bases(p);
  const auto n = p.at("cases").get<std::size_t>();
  const std::size_t chunk = 500;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  return run_cells("i0-landing", p, gs.size() * chunks, threads, [&](std::size_t c) {
    const unsigned g = gs[c / chunks];
    Rng rng = cell_rng(p, c);
    CellResult r;
    const std::size_t lo = (c % chunks) * chunk, hi = std::min(n, lo + chunk);
    for (std::size_t k = lo; k < hi; ++k) {
      double alpha = rng.uniform();
      if (k % 5 == 0) alpha = std::ldexp(rng.uniform(), -static_cast<int>(rng.integer(1, 40)));
      if (dist(alpha) == 0) continue;
      const auto land = i0_landing(g, alpha);
      r.add(make_report("i0-landing", 1.0 / (g + 1), land.value, {{"g", g}, {"alpha", alpha}, {"i0", land.i0}},
                        1e-12));
    }
    r.row = {{"g", g}, {"from", lo}, {"to", hi}};
    return r;
  });
}

// ---------------------------------------------------------------------------
// calibrated suites: ratio = lhs / shape per cell
// ---------------------------------------------------------------------------

inline std::uint64_t max_x(const json& cells) {
  double m = 2;
  for (const auto& c : cells) m = std::max(m, c.at("x").get<double>());
  return static_cast<std::uint64_t>(m);
}

inline SuiteOutput suite_type_i(const json& p, unsigned threads) {
  const auto& cells = p.at("cells");
  return run_cells("type-i", p, cells.size(), threads, [&](std::size_t c) {
    const auto& cl = cells[c];
    const auto g = cl.at("g").get<unsigned>();
    const auto L = cl.at("L").get<unsigned>();
    const double x = cl.at("x").get<double>();
    const double M = cl.at("M").get<double>();
    const ExpSumContext es(parse_seed(cl.at("seed").get<std::string>(), g));
    const auto params = make_type_i_params(es, L, x, M);
    const double S = type_i_sum(es, params);
    const double shape = type_i_shape(params, g);
    CellResult r;
    r.ratio = S / shape;
    r.row = cl;
    r.row["S_I"] = S;
    r.row["xi"] = params.xi;
    r.row["kappa"] = params.kappa;
    r.row["shape"] = shape;
    r.row["ratio"] = r.ratio;
    return r;
  }, true);
}

inline SuiteOutput suite_type_ii(const json& p, unsigned threads) {
  const auto& cells = p.at("cells");
  const PrimeTable pt = PrimeTable::build(std::max<std::uint64_t>(2, max_x(cells)));
  return run_cells("type-ii", p, cells.size(), threads, [&](std::size_t c) {
    const auto& cl = cells[c];
    const auto g = cl.at("g").get<unsigned>();
    const ExpSumContext es(parse_seed(cl.at("seed").get<std::string>(), g));
    const auto params = make_type_ii_params(es, cl.at("L").get<unsigned>(), cl.at("x").get<double>(),
                                            cl.at("M").get<double>(), cl.at("N").get<double>(),
                                            cl.at("theta").get<double>(),
                                            parse_coefficient_kind(cl.at("coeffs").get<std::string>()),
                                            hash_combine(param_seed(p), c));
    const complex S = type_ii_sum(es, params, &pt);
    const double shape = type_ii_shape(params, g);
    CellResult r;
    r.ratio = std::abs(S) / shape;
    r.row = cl;
    r.row["abs_S_II"] = std::abs(S);
    r.row["xi"] = params.xi;
    r.row["kappa"] = params.kappa;
    r.row["R"] = params.R;
    r.row["lambda"] = params.lambda;
    r.row["mu"] = params.mu;
    r.row["shape"] = shape;
    r.row["ratio"] = r.ratio;
    return r;
  }, true);
}

inline SuiteOutput suite_prime_sum(const json& p, unsigned threads) {
  const auto& cells = p.at("cells");
  const PrimeTable pt = PrimeTable::build(std::max<std::uint64_t>(2, max_x(cells)));
  return run_cells("prime-sum", p, cells.size(), threads, [&](std::size_t c) {
    const auto& cl = cells[c];
    const auto g = cl.at("g").get<unsigned>();
    const auto L = cl.at("L").get<unsigned>();
    const double x = cl.at("x").get<double>();
    const ExpSumContext es(parse_seed(cl.at("seed").get<std::string>(), g));
    const auto res = prime_exp_sum(es, L, x, pt);
    CellResult r;
    r.add(make_report("kappa-sanity", res.kappa, res.xi / 20.0, cl, 1e-12));
    r.ratio = res.ratio;
    r.row = cl;
    r.row["abs_S"] = std::abs(res.S);
    r.row["xi"] = res.xi;
    r.row["kappa"] = res.kappa;
    r.row["shape"] = res.bound_shape;
    r.row["ratio"] = res.ratio;
    return r;
  }, true);
}

inline SuiteOutput suite_hybrid(const json& p, unsigned threads) {
  const auto& cells = p.at("cells");
  return run_cells("hybrid", p, cells.size(), threads, [&](std::size_t c) {
    const auto& cl = cells[c];
    const auto g = cl.at("g").get<unsigned>();
    const auto lambda = cl.at("lambda").get<unsigned>();
    const double M = cl.at("M").get<double>();
    const ExpSumContext es(parse_seed(cl.at("seed").get<std::string>(), g));
    const double lhs = es.hybrid_sum(lambda, 0, M);
    const double shape = es.hybrid_shape(lambda, 0, M);
    CellResult r;
    r.ratio = lhs / shape;
    r.row = cl;
    r.row["lhs"] = lhs;
    r.row["shape"] = shape;
    r.row["ratio"] = r.ratio;
    return r;
  }, true);
}

inline SuiteOutput suite_truncation_card(const json& p, unsigned threads) {
  const auto& cells = p.at("cells");
  return run_cells("truncation-card", p, cells.size(), threads, [&](std::size_t c) {
    const auto& cl = cells[c];
    const auto g = cl.at("g").get<unsigned>();
    const auto L = cl.at("L").get<unsigned>();
    const double M = cl.at("M").get<double>(), N = cl.at("N").get<double>(), R = cl.at("R").get<double>();
    const ExpSumContext es(parse_seed(cl.at("seed").get<std::string>(), g));
    const long lam = truncation_lambda(g, M, R);
    std::uint64_t worst_set = 0;
    double worst = 0;
    CellResult r;
    for (std::uint64_t rr = 1; static_cast<double>(rr) <= R; ++rr) {
      const auto t = truncation_set_size(es, M, N, R, rr, L, lam);
      r.add(make_report("truncation-containment", t.contained ? 0.0 : 1.0, 0.0, cl));
      const double ratio = double(t.set_size) / (M * N / R);
      if (ratio > worst) {
        worst = ratio;
        worst_set = t.set_size;
      }
    }
    r.ratio = worst;
    r.row = cl;
    r.row["lambda"] = lam;
    r.row["max_set"] = worst_set;
    r.row["ratio"] = worst;
    return r;
  }, true);
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

struct SuiteSpec {
  std::string name;
  bool calibrated = false;
  json defaults;
  std::function<SuiteOutput(const json&, unsigned)> run;
};

inline json default_type_i_cells() {
  json cells = json::array();
  for (const char* s : {"reverse:1/3,14", "reverse:1/5,14", "reverse:1/7,14", "random:1", "sod:1/3"})
    for (double M : {1.0, 8.0, 32.0, 128.0})
      cells.push_back({{"g", 2}, {"L", 14}, {"x", 16384.0}, {"M", M}, {"seed", s}});
  for (const char* s : {"reverse:1/7,5", "reverse:1/11,5", "random:2"})
    for (double M : {1.0, 10.0, 100.0, 316.0})
      cells.push_back({{"g", 10}, {"L", 5}, {"x", 100000.0}, {"M", M}, {"seed", s}});
  return cells;
}

inline json default_type_ii_cells() {
  json cells = json::array();
  for (const char* s : {"reverse:1/3,16", "reverse:1/5,16", "random:3"})
    for (const char* coeffs : {"mobius-c2", "random"})
      for (auto [M, N] : {std::pair{16.0, 16.0}, {16.0, 256.0}, {32.0, 512.0}, {64.0, 128.0}, {128.0, 256.0}})
        cells.push_back({{"g", 2}, {"L", 16}, {"x", 65536.0}, {"M", M}, {"N", N}, {"theta", 0.25},
                         {"coeffs", coeffs}, {"seed", s}});
  for (const char* s : {"reverse:1/7,5", "random:4"})
    for (const char* coeffs : {"mobius-c2", "random"})
      for (auto [M, N] : {std::pair{10.0, 10.0}, {10.0, 1000.0}, {31.0, 1000.0}, {100.0, 300.0}})
        cells.push_back({{"g", 10}, {"L", 5}, {"x", 100000.0}, {"M", M}, {"N", N}, {"theta", 0.2},
                         {"coeffs", coeffs}, {"seed", s}});
  return cells;
}

inline json default_prime_sum_cells() {
  json cells = json::array();
  for (unsigned L : {10u, 12u, 14u, 16u})
    for (unsigned q : {5u, 7u, 11u, 13u})
      cells.push_back({{"g", 2}, {"L", L}, {"x", std::ldexp(1.0, int(L))},
                       {"seed", "reverse:1/" + std::to_string(q) + "," + std::to_string(L)}});
  for (unsigned L : {3u, 4u, 5u})
    for (unsigned q : {7u, 13u, 17u})
      for (unsigned h : {1u, 2u})
        cells.push_back({{"g", 10}, {"L", L}, {"x", std::pow(10.0, L)},
                         {"seed", "reverse:" + std::to_string(h) + "/" + std::to_string(q) + "," + std::to_string(L)}});
  return cells;
}

inline json default_hybrid_cells() {
  json cells = json::array();
  for (unsigned lam : {4u, 8u, 12u, 16u})
    for (double M : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
      for (const std::string& s : {"reverse:1/3," + std::to_string(lam + 2), std::string("random:5")})
        cells.push_back({{"g", 2}, {"lambda", lam}, {"M", M}, {"seed", s}});
  for (unsigned lam : {4u, 8u})
    for (double M : {1.0, 3.0, 9.0, 27.0})
      for (const std::string& s : {"reverse:1/7," + std::to_string(lam + 2), std::string("random:6")})
        cells.push_back({{"g", 3}, {"lambda", lam}, {"M", M}, {"seed", s}});
  return cells;
}

inline json default_truncation_card_cells() {
  json cells = json::array();
  for (const char* s : {"reverse:1/3,16", "random:7"})
    for (double M : {4.0, 8.0, 16.0})
      for (double N : {64.0, 128.0})
        for (double R : {2.0, 4.0, 8.0})
          cells.push_back({{"g", 2}, {"L", 16}, {"M", M}, {"N", N}, {"R", R}, {"seed", s}});
  return cells;
}

inline const std::vector<SuiteSpec>& suite_registry() {
  static const std::vector<SuiteSpec> reg = [] {
    const json families = {"zero", "sod", "reverse", "random"};
    std::vector<SuiteSpec> r;
    r.push_back({"product-formula", false,
                 {{"g", {2, 3, 10}}, {"cases", 3000}, {"lambda_max", {{"2", 10}, {"3", 10}, {"10", 6}}},
                  {"families", families}, {"tolerance", 1e-10}, {"direct_budget", 1 << 24}},
                 suite_product_formula});
    r.push_back({"linf", false,
                 {{"g", {2, 3, 10}}, {"cases", 3000}, {"lambda_max", {{"2", 10}, {"3", 10}, {"10", 6}}},
                  {"families", families}, {"direct_max", 1 << 17}},
                 suite_linf});
    r.push_back({"l1-moment", false,
                 {{"g", {2, 6}}, {"lambda_max", 8}, {"k_max", 5}, {"betas", 20}, {"families", {"reverse", "random"}},
                  {"abs_slack", 1e-12}},
                 suite_l1_moment});
    r.push_back({"psi", false,
                 {{"g", {2, 6, 10, 12}}, {"t_samples", 100}, {"families", {"random", "reverse", "sod", "zero"}}},
                 suite_psi});
    r.push_back({"theta", false, {{"g", {2, 3, 5}}, {"seeds", 1000}, {"eta_g_max", 1000}}, suite_theta});
    for (const char* which : {"pair-bound", "consecutive-pair", "l2-orthogonality", "l4-moment"}) {
      const std::string w = which;
      r.push_back({w, false,
                   {{"g", {2, 3, 5, 6, 10}}, {"cases", 1000}, {"families", {"zero", "sod", "reverse", "random"}}},
                   [w](const json& p, unsigned t) { return suite_digit_bounds(w, p, t); }});
    }
    r.push_back({"sum-cleanup", false,
                 {{"g", {2, 3}}, {"lambda_max", 6}, {"families", families}, {"betas", 3}}, suite_sum_cleanup});
    r.push_back({"gallagher-sobolev", false,
                 {{"g", {2, 3}}, {"lambda_max", {{"2", 8}, {"3", 6}}}, {"families", {"reverse", "random"}},
                  {"step", 1e-5}},
                 suite_gallagher_sobolev});
    r.push_back({"vdc", false, {{"cases", 1000}, {"N_max", 200}, {"R_max", 20}}, suite_vdc});
    r.push_back({"sin-sum", false, {{"cases", 1000}, {"m_max", 500}}, suite_sin_sum});
    r.push_back({"truncation", false,
                 {{"g", 2}, {"M_max", 16}, {"N_max", 128}, {"R_max", 8}, {"L", 16},
                  {"families", {"reverse", "random"}}},
                 suite_truncation});
    r.push_back({"vaughan", false, {{"limit", 10000}, {"z", {2, 5, "n^1/4", 50}}}, suite_vaughan});
    r.push_back({"vaughan-route", false,
                 {{"g", {2, 10}}, {"families", families}, {"x", {1000, 10000}}}, suite_vaughan_route});
    r.push_back({"monotonicity", false,
                 {{"g", {2, 3, 5, 10}}, {"families", {"zero", "sod", "reverse", "reverse:1/6,12", "random"}},
                  {"seeds_per_family", 4}, {"lambda_max", 30}, {"j_max", 3}, {"abs_tolerance", 1e-12}},
                 suite_monotonicity});
    r.push_back({"sigma-lower", false,
                 {{"g", {2, 3, 10}}, {"q", {7, 13, 17, 19, 23, 29, 31, 37}}, {"L", {20, 40, 80}},
                  {"lambda", {0, 5, 10, 20, 40, 80}}},
                 suite_sigma_lower});
    r.push_back({"i0-landing", false, {{"g", {2, 3, 10}}, {"cases", 10000}}, suite_i0_landing});
    r.push_back({"type-i", true, {{"cells", default_type_i_cells()}}, suite_type_i});
    r.push_back({"type-ii", true, {{"cells", default_type_ii_cells()}}, suite_type_ii});
    r.push_back({"prime-sum", true, {{"cells", default_prime_sum_cells()}}, suite_prime_sum});
    r.push_back({"hybrid", true, {{"cells", default_hybrid_cells()}}, suite_hybrid});
    r.push_back({"truncation-card", true, {{"cells", default_truncation_card_cells()}}, suite_truncation_card});
    for (auto& s : r) s.defaults["rng_seed"] = kDefaultRngSeed;
    return r;
  }();
  return reg;
}

inline const SuiteSpec* find_suite(const std::string& name) {
  for (const auto& s : suite_registry())
    if (s.name == name) return &s;
  return nullptr;
}

inline std::vector<std::string> calibrated_suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suite_registry())
    if (s.calibrated) out.push_back(s.name);
  return out;
}

/// Defaults with the overrides merged on top.
inline json suite_params(const SuiteSpec& spec, const json& overrides) {
  json p = spec.defaults;
  for (auto it = overrides.begin(); it != overrides.end(); ++it) p[it.key()] = it.value();
  return p;
}

inline SuiteOutput run_suite(const std::string& name, const json& overrides = json::object(), unsigned threads = 1) {
  const SuiteSpec* spec = find_suite(name);
  if (!spec) throw precondition_error("unknown suite '" + name + "'");
  const json p = suite_params(*spec, overrides);
  if (spec->calibrated && p.at("cells").empty()) throw precondition_error("empty calibration grid");
  return spec->run(p, threads);
}

// ---------------------------------------------------------------------------
// calibration table
// ---------------------------------------------------------------------------

/// grid hash excludes nothing: any change to the cells or rng seed changes it
inline json calibration_entry(const SuiteOutput& out) {
  json e;
  e["c_cal"] = out.max_ratio;
  e["cells"] = out.cells;
  e["grid_hash"] = config_hash(out.params);
  return e;
}

/// Compares a calibrated run against its stored constant: max ratio <= C_cal + 1e-9.
inline BoundReport calibrated_check(const SuiteOutput& out, const json& table) {
  json params{{"suite", out.suite}, {"grid_hash", config_hash(out.params)}};
  if (!table.contains("suites") || !table["suites"].contains(out.suite)) {
    BoundReport r = make_report("calibrated-ratio", out.max_ratio, 0.0, params);
    r.pass = false;
    r.params["error"] = "no stored constant for this suite";
    return r;
  }
  const auto& entry = table["suites"][out.suite];
  params["stored_grid_hash"] = entry.at("grid_hash");
  BoundReport r;
  r.name = "calibrated-ratio";
  r.lhs = out.max_ratio;
  r.rhs = entry.at("c_cal").get<double>();
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.slack = 1e-9;
  r.params = params;
  r.pass = r.lhs <= r.rhs + 1e-9;
  return r;
}

}  // namespace revprime
