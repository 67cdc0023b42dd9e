// sum_{n<=x} Lambda(n) e(f_L(n)) for the base 2 reverse seed, with the
// Vaughan split S1..S4 alongside.
#include <cstdio>

#include <revprime/revprime.hpp>

int main() {
  using namespace revprime;
  const unsigned g = 2, L = 14;
  const double x = 16384;
  const PrimeTable pt = PrimeTable::build(16384);
  const ExpSumContext es(reverse_seed(g, L, Coefficient::rational(1, 5)));
  const auto r = prime_exp_sum(es, L, x, pt, true);
  std::printf("|S| = %.6f   shape = %.6e   ratio = %.3e\n", std::abs(r.S), r.bound_shape, r.ratio);
  std::printf("S1+S2+S3+S4 = %.6f%+.6fi   S = %.6f%+.6fi\n", r.vaughan_total().real(), r.vaughan_total().imag(),
              r.S.real(), r.S.imag());
}
