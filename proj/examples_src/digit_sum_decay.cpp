// |F_lambda(beta)| for the reverse seed alpha = 1/7 in base 10: direct sum,
// product formula and the explicit g^(1/20 - sigma) ceiling.
#include <cstdio>

#include <revprime/revprime.hpp>

int main() {
  using namespace revprime;
  const unsigned g = 10;
  const ExpSumContext es(reverse_seed(g, 8, Coefficient::rational(1, 7)));
  const double beta = 0.318309886;
  std::printf("%6s %14s %14s %14s\n", "lambda", "direct", "product", "ceiling");
  for (unsigned lam = 0; lam <= 6; ++lam) {
    const double direct = std::abs(es.F_direct(lam, 0, beta));
    const double product = es.F_abs_product(lam, 0, beta);
    const double ceiling = std::pow(double(g), 0.05 - es.sigma(lam, 0));
    std::printf("%6u %14.6e %14.6e %14.6e\n", lam, direct, product, ceiling);
  }
}
