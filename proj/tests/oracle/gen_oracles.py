"""Independent reference values for the unit tests (mpmath, exact fractions).

Run:  python3 tests/oracle/gen_oracles.py > tests/oracle_values.hpp
"""
from fractions import Fraction
from math import gcd
import mpmath as mp

mp.mp.dps = 40


def digits(n, g):
    out = []
    while n:
        out.append(n % g)
        n //= g
    return out


def rev(n, g):
    d = digits(n, g)
    return sum(e * g ** (len(d) - 1 - i) for i, e in enumerate(d))


def e(x):
    return mp.expj(2 * mp.pi * x)


def dist(x):
    return abs(x - mp.nint(x))


def reverse_alpha(g, L, a):
    return lambda i, d: a * d * mp.mpf(g) ** (L - i - 1)


def sod_alpha(a):
    return lambda i, d: a * d


def F_direct(alpha, g, lam, j, beta):
    s = mp.mpc(0)
    for n in range(g ** lam):
        ds = digits(n, g) + [0] * lam
        f = sum(alpha(i + j, ds[i]) for i in range(lam))
        s += e(f - beta * n)
    return s / g ** lam


def theta_lb(g):
    g = mp.mpf(g)
    return (1 - 1 / g) * (1 - mp.sqrt(1 - 2 / (g * g * (g - 1))))


def eta(g):
    g = mp.mpf(g)
    b1 = mp.mpf(1) / 2 - mp.log(1.5) / (4 * mp.log(g) - 2 * mp.log(2))
    b2 = mp.mpf(1) / 2 + mp.log(1 - theta_lb(g)) / (4 * mp.log(g))
    return b1, b2, max(b1, b2)


def gamma(alpha, g, i, j):
    coef = 2 * mp.log(2) / ((g - 1) * mp.mpf(g) ** 4 * mp.log(g) ** 2)
    w = [g * alpha(i + j, d) - alpha(i + j + 1, d) for d in range(g)]
    return coef * sum(dist(w[m] - w[n]) ** 2 for m in range(g) for n in range(m + 1, g))


def phi(alpha, g, i, beta):
    return abs(sum(e(alpha(i, n) - beta * n) for n in range(g)))


def psi(alpha, g, i, t, R, S):
    tot = 0
    for r in range(R):
        inner = sum(phi(alpha, g, i, (t + r) / mp.mpf(R * S) + mp.mpf(s) / S) for s in range(S))
        tot += phi(alpha, g, i + 1, g * (t + r) / mp.mpf(R * S)) * inner
    return tot / g ** 2


def sieve(n):
    s = bytearray([1]) * (n + 1)
    s[0] = s[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if s[p]:
            s[p * p::p] = bytearray(len(s[p * p::p]))
    return s


def totient(n):
    r, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            r -= r // p
        p += 1
    if m > 1:
        r -= r // m
    return r


def rho(g, a, q):
    qg = gcd(q, g)
    q2 = gcd(q, g * g - 1)
    if gcd(gcd(a, q), g * g - 1) != 1:
        return Fraction(0)
    aq = gcd(a, q)  # gcd(0, q) = q
    if aq % g == 0:
        return Fraction(0)
    ind = 1 if a % qg == 0 else 0
    return (1 - Fraction(ind * qg, g)) * Fraction(q2, totient(q2))


def mangoldt(n):
    if n < 2:
        return mp.mpf(0)
    for p in range(2, n + 1):
        if n % p == 0:
            m = n
            while m % p == 0:
                m //= p
            return mp.log(p) if m == 1 else mp.mpf(0)


def sin_sum(a, m, b, M):
    lhs = mp.mpf(0)
    for n in range(m):
        s = abs(mp.sin(mp.pi * (a * n + b) / m))
        lhs += M if s == 0 else min(M, 1 / s)
    d = gcd(a, m)
    bd = dist(mp.mpf(b) / d)
    s1 = mp.sin(mp.pi * mp.mpf(d) / m * bd)
    t1 = d * (M if s1 == 0 else min(M, 1 / s1))
    rhs = t1 + d / mp.sin(mp.pi * d / (2 * mp.mpf(m))) + 2 * m / mp.pi * mp.log(2 * m / (mp.pi * d))
    return lhs, rhs


def out(name, v):
    if isinstance(v, (int,)):
        print(f"inline constexpr long long {name} = {v};")
    else:
        print(f"inline constexpr double {name} = {mp.nstr(v, 17, min_fixed=-30, max_fixed=30)};")


print("#pragma once")
print("// generated by tests/oracle/gen_oracles.py (mpmath, exact fractions)")
print("namespace oracle {")
b1, b2, et = eta(2)
out("kThetaLower2", theta_lb(2))
out("kEtaFirst2", b1)
out("kEtaTilde2", et)
out("kOmega2", mp.log(2) / mp.log(2) * (mp.mpf(1) / 2 - et))
out("kEtaTilde10", eta(10)[2])
out("kGammaRev2L10a15i3", gamma(reverse_alpha(2, 10, mp.mpf(1) / 5), 2, 3, 0))
out("kGammaRev2L10a13i3", gamma(reverse_alpha(2, 10, mp.mpf(1) / 3), 2, 3, 0))
out("kGammaCeiling2", mp.log(2) / (4 * 8 * mp.log(2) ** 2))

F = F_direct(reverse_alpha(10, 6, mp.mpf(1) / 7), 10, 4, 1, mp.mpf("0.3"))
out("kFRev10L6a17lam4j1b03", abs(F))
F = F_direct(sod_alpha(mp.mpf(1) / 4), 3, 5, 0, mp.mpf("0.1"))
out("kFSod3a14lam5b01", abs(F))
out("kFSod3a14lam5b01Re", F.real)
out("kFSod3a14lam5b01Im", F.imag)

rs = reverse_alpha(10, 8, mp.mpf(1) / 7)
out("kSigmaRev10L8a17lam6", sum(gamma(rs, 10, i, 0) for i in range(6)))
out("kPsiZero6", psi(lambda i, d: 0, 6, 0, mp.mpf("0.37"), 2, 3))
rnd = lambda i, d: mp.mpf((7 * i + 3 * d * d + 1) % 11) / 11
out("kPsiTable10", psi(rnd, 10, 0, mp.mpf("1.3"), 5, 2))

s = sieve(100000)
out("kPi1e5", sum(s))
out("kCensus10L2", sum(s[10:100]))
out("kCensus10L5a1q3", sum(1 for p in range(10000, 100000) if s[p] and rev(p, 10) % 3 == 1))
out("kCensus10L5a3q7", sum(1 for p in range(10000, 100000) if s[p] and rev(p, 10) % 7 == 3))
out("kCensus2L16a1q3", sum(1 for p in range(2 ** 15, 2 ** 16) if s[p] and rev(p, 2) % 3 == 1))
out("kPsi1e4", mp.fsum(mangoldt(n) for n in range(1, 10001)))

sharp = [sum(1 for p in range(2 ** 15, 2 ** 16) if s[p] and rev(p, 2) % 3 == a) for a in range(3)]
for a in range(3):
    out(f"kCensus2L16q3a{a}", sharp[a])

# rho examples and the normalisation sum
print(f'inline constexpr const char* kRho10_0_1 = "{rho(10, 0, 1)}";')
print(f'inline constexpr const char* kRho10_1_3 = "{rho(10, 1, 3)}";')
print(f'inline constexpr const char* kRho10_5_10 = "{rho(10, 5, 10)}";')
print(f'inline constexpr const char* kRho2_1_15 = "{rho(2, 1, 15)}";')
print(f'inline constexpr const char* kRho3_4_12 = "{rho(3, 4, 12)}";')
for g in (2, 3, 10):
    tot = {sum((rho(g, a, q) / q for a in range(q)), Fraction(0)) for q in range(1, 201)}
    print(f'inline constexpr const char* kRhoSum{g} = "{",".join(str(t) for t in sorted(tot))}";')

lhs, rhs = sin_sum(2, 5, 0.3, 100)
out("kSinSumLhs", lhs)
out("kSinSumRhs", rhs)

# zero-seed hybrid sum, g=2, lambda=5, M=3: geometric series closed form
tot = 0
for m in range(3, 7):
    for k in range(m):
        if gcd(k, m) == 1:
            b = mp.mpf(k) / m
            tot += abs(sum(e(-b * n) for n in range(32))) / 32
out("kHybridZero2L5M3", tot)

# vdc alternating, N = 7, R = 2
z = [(-1) ** n for n in range(7)]
N, R = len(z), 2
inner = sum((1 - mp.mpf(abs(r)) / R) * sum(z[n + r] * z[n] for n in range(N) if 0 <= n + r < N) for r in range(-R + 1, R))
out("kVdcAltLhs", abs(sum(z)) ** 2)
out("kVdcAltRhs", mp.mpf(N + R - 1) / R * inner)

# type I, zero seed: sum_{m<=M} floor(x/m)
out("kTypeIZero", sum(10000 // m for m in range(1, 101)))
print("}  // namespace oracle")
