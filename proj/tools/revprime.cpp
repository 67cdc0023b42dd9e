// revprime: census, verify <suite>, calibrate, list
//
// exit codes: 0 ok, 1 usage / bad input / budget, 2 tolerance or bound failure

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <revprime/revprime.hpp>

using namespace revprime;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content << std::flush;
  else
    atomic_write(out_path, content);
}

std::string default_calibration_path() {
  if (const char* env = std::getenv("REVPRIME_CALIBRATION")) return env;
#ifdef REVPRIME_DEFAULT_CALIBRATION
  return REVPRIME_DEFAULT_CALIBRATION;
#else
  return "calibration/c_cal.json";
#endif
}

json rng_header(std::uint64_t seed) { return json{{"algorithm", kRngAlgorithm}, {"seed", seed}}; }

// ---------------------------------------------------------------------------

struct CensusArgs {
  std::optional<unsigned> g;
  std::vector<unsigned> L;
  std::vector<std::uint64_t> q{1};
  std::optional<std::int64_t> a;
  std::optional<std::uint64_t> sieve_limit;
  std::optional<double> tolerance;
  std::string format = "csv";
  std::string out;
};

int run_census(CensusArgs args, const json& config, unsigned threads) {
  if (config.contains("census")) {
    const auto& c = config["census"];
    if (!args.g && c.contains("g")) args.g = c["g"].get<unsigned>();
    if (args.L.empty() && c.contains("L")) args.L = c["L"].get<std::vector<unsigned>>();
    if (c.contains("q") && args.q == std::vector<std::uint64_t>{1}) args.q = c["q"].get<std::vector<std::uint64_t>>();
    if (!args.a && c.contains("a")) args.a = c["a"].get<std::int64_t>();
    if (!args.sieve_limit && c.contains("sieve_limit")) args.sieve_limit = c["sieve_limit"].get<std::uint64_t>();
    if (!args.tolerance && c.contains("tolerance")) args.tolerance = c["tolerance"].get<double>();
  }
  if (!args.g) throw UsageError("census needs --g");
  if (args.L.empty()) throw UsageError("census needs --L");
  const unsigned g = *args.g;
  require(g >= 2, "base g must be at least 2");

  const BaseContext base(g);
  unsigned Lmax = 0;
  for (auto L : args.L) {
    require(L >= 1, "L must be at least 1");
    Lmax = std::max(Lmax, L);
  }
  for (auto q : args.q) require(q >= 1, "q must be at least 1");
  if (Lmax > base.max_power() || base.pow(Lmax) >= (uint128(1) << 32))
    throw sieve_limit_error("g^L is beyond the largest sieve (2^32)");
  const std::uint64_t need = base.pow64(Lmax);
  const std::uint64_t limit = args.sieve_limit.value_or(need);
  if (limit + 1 < need) throw sieve_limit_error("sieve limit " + std::to_string(limit) + " is below g^L - 1");
  const PrimeTable pt = PrimeTable::cached(limit, threads);

  std::vector<CensusQuery> queries;
  if (args.a)
    for (auto q : args.q) queries.push_back({*args.a, q});
  else
    queries = full_residue_queries(args.q);

  std::vector<CensusRecord> rows;
  for (auto L : args.L) {
    auto part = census_batch(g, L, queries, pt, threads);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  json params{{"command", "census"}, {"g", g}, {"L", args.L}, {"q", args.q}, {"sieve_limit", limit}};
  if (args.a) params["a"] = *args.a;
  if (args.tolerance) params["tolerance"] = *args.tolerance;
  const std::string hash = config_hash(params);

  bool ok = true;
  for (const auto& r : rows) {
    if (r.admissible()) {
      if (args.tolerance && std::fabs(r.relative_dev) > *args.tolerance) ok = false;
    } else if (r.observed > r.exceptional_cap) {
      ok = false;
    }
  }

  std::string text;
  if (args.format == "csv") {
    text = census_csv(rows, hash);
  } else {
    std::vector<json> js;
    for (const auto& r : rows) js.push_back(census_record_json(r));
    text = json_lines(json{{"config_hash", hash}, {"params", params}}, js);
    text += json{{"summary", {{"rows", rows.size()}, {"pass", ok}}}}.dump() + "\n";
  }
  emit(args.out, text);
  if (!ok) std::cerr << "census: tolerance or exceptional-cap failure\n";
  return ok ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::vector<unsigned> g;
  std::optional<unsigned> lambda_max;
  std::optional<std::uint64_t> limit;
  std::vector<double> x;
  std::vector<std::string> families;
  std::optional<std::uint64_t> rng_seed;
  std::string calibration;
  std::string out;
};

json suite_overrides(const std::string& suite, const json& config) {
  json o = json::object();
  if (config.contains("rng_seed")) o["rng_seed"] = config["rng_seed"];
  if (config.contains("suites") && config["suites"].contains(suite))
    for (const auto& [k, v] : config["suites"][suite].items()) o[k] = v;
  return o;
}

int run_verify(const VerifyArgs& args, const json& config, unsigned threads) {
  const SuiteSpec* spec = find_suite(args.suite);
  if (!spec) throw UsageError("unknown suite '" + args.suite + "' (see `revprime list`)");
  json o = suite_overrides(args.suite, config);
  if (!args.g.empty()) o["g"] = args.g;
  if (args.lambda_max) o["lambda_max"] = *args.lambda_max;
  if (args.limit) o["limit"] = *args.limit;
  if (!args.x.empty()) o["x"] = args.x;
  if (!args.families.empty()) o["families"] = args.families;
  if (args.rng_seed) o["rng_seed"] = *args.rng_seed;
  for (const auto& [k, v] : o.items())
    if (!spec->defaults.contains(k)) throw UsageError("suite '" + args.suite + "' has no parameter '" + k + "'");

  const json params = suite_params(*spec, o);
  if (spec->calibrated && params.at("cells").empty()) throw UsageError("empty grid");
  SuiteOutput out = spec->run(params, threads);
  if (out.cells == 0) throw UsageError("empty grid");

  if (spec->calibrated) {
    std::string path = args.calibration;
    if (path.empty() && config.contains("calibration")) path = config["calibration"].get<std::string>();
    if (path.empty()) path = default_calibration_path();
    const json table = load_json_file(path);
    const auto rep = calibrated_check(out, table);
    auto& t = out.tallies[rep.name];
    t.name = rep.name;
    t.add(rep);
  }

  json header{{"suite", out.suite}, {"config_hash", config_hash(params)},
              {"rng", rng_header(param_seed(params))}, {"params", params}};
  std::string text = json_lines(header, out.rows);
  text += json{{"summary", out.summary()}}.dump() + "\n";
  emit(args.out, text);
  for (const auto& [name, t] : out.tallies)
    if (!t.pass()) std::cerr << "verify " << out.suite << ": " << name << " has " << t.violations << " violation(s)\n";
  return out.pass() ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------

int run_calibrate(const std::vector<std::string>& names_in, const json& config, const std::string& out_path,
                  unsigned threads) {
  std::vector<std::string> names = names_in.empty() ? calibrated_suite_names() : names_in;
  const std::uint64_t seed = config.value("rng_seed", kDefaultRngSeed);
  json table;
  table["rng"] = rng_header(seed);
  table["suites"] = json::object();
  for (const auto& name : names) {
    const SuiteSpec* spec = find_suite(name);
    if (!spec) throw UsageError("unknown suite '" + name + "'");
    if (!spec->calibrated) throw UsageError("suite '" + name + "' has no calibrated constant");
    const json params = suite_params(*spec, suite_overrides(name, config));
    if (params.at("cells").empty()) throw UsageError("empty grid for '" + name + "'");
    const SuiteOutput out = spec->run(params, threads);
    if (!out.pass()) {
      std::cerr << "calibrate " << name << ": exact side checks failed\n";
      return kExitFail;
    }
    table["suites"][name] = calibration_entry(out);
  }
  emit(out_path, table.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revprime: digital reverse of primes, exponential sums and verifier suites"};
  app.require_subcommand(1);
  unsigned threads = 1;
  std::string config_path;
  app.add_option("--threads", threads, "worker threads (output does not depend on it)")->check(CLI::Range(1u, 256u));
  app.add_option("--config", config_path, "JSON config file");

  CensusArgs cargs;
  auto* census_cmd = app.add_subcommand("census", "count L-digit primes by reverse residue");
  census_cmd->add_option("--g", cargs.g, "base");
  census_cmd->add_option("--L", cargs.L, "digit lengths")->delimiter(',');
  census_cmd->add_option("--q", cargs.q, "moduli")->delimiter(',');
  census_cmd->add_option("--a", cargs.a, "residue (default: every residue)");
  census_cmd->add_option("--sieve-limit", cargs.sieve_limit, "sieve limit (default g^L)");
  census_cmd->add_option("--tolerance", cargs.tolerance, "max |relative_dev| on admissible rows");
  census_cmd->add_option("--format", cargs.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  census_cmd->add_option("--out", cargs.out, "output file (default stdout)");

  VerifyArgs vargs;
  auto* verify_cmd = app.add_subcommand("verify", "run a verifier suite");
  verify_cmd->add_option("suite", vargs.suite, "suite name")->required();
  verify_cmd->add_option("--g", vargs.g, "bases")->delimiter(',');
  verify_cmd->add_option("--lambda-max", vargs.lambda_max, "largest lambda");
  verify_cmd->add_option("--limit", vargs.limit, "n limit");
  verify_cmd->add_option("--x", vargs.x, "x values")->delimiter(',');
  verify_cmd->add_option("--seed-family", vargs.families, "seed families")->delimiter(',');
  verify_cmd->add_option("--rng-seed", vargs.rng_seed, "rng seed");
  verify_cmd->add_option("--calibration", vargs.calibration, "calibration table");
  verify_cmd->add_option("--out", vargs.out, "output file (default stdout)");

  std::vector<std::string> cal_names;
  std::string cal_out;
  auto* cal_cmd = app.add_subcommand("calibrate", "measure C_cal for the calibrated suites");
  cal_cmd->add_option("suites", cal_names, "suites (default: all calibrated)");
  cal_cmd->add_option("--out", cal_out, "output file (default stdout)");

  auto* list_cmd = app.add_subcommand("list", "list verifier suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const json config = config_path.empty() ? json::object() : load_json_file(config_path);
    if (*census_cmd) return run_census(cargs, config, threads);
    if (*verify_cmd) return run_verify(vargs, config, threads);
    if (*cal_cmd) return run_calibrate(cal_names, config, cal_out, threads);
    if (*list_cmd) {
      for (const auto& s : suite_registry())
        std::cout << s.name << (s.calibrated ? "  (calibrated)" : "") << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // precondition / degenerate input
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {  // sieve limit
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cost_budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: bad parameter: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
