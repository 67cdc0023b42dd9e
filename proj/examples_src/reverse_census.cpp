// Reversed 5-digit primes by residue mod 7, against the predicted density.
#include <cstdio>

#include <revprime/revprime.hpp>

int main() {
  using namespace revprime;
  const unsigned g = 10, L = 5;
  const std::uint64_t q = 7;
  const PrimeTable pt = PrimeTable::build(100000);
  const auto rows = census_batch(g, L, full_residue_queries({q}), pt);
  std::printf("%3s %8s %10s %8s\n", "a", "observed", "predicted", "dev");
  for (const auto& r : rows)
    std::printf("%3lld %8llu %10.1f %+7.3f   rho=%s\n", static_cast<long long>(r.a),
                static_cast<unsigned long long>(r.observed), r.main_term, r.relative_dev, r.rho_value.str().c_str());
}
