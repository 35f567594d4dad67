#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "maxorder/errors.hpp"
#include "maxorder/intmat.hpp"

namespace maxorder {

/// Miller–Rabin with the fixed base set {2,...,41}: deterministic for
/// n < 3.3·10^24; for larger n the same bases give a fixed, reproducible
/// compositeness test (error probability < 4^-13).
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  static const long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (long b : bases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  for (long b : bases) {
    Int x;
    Int base(b);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned long r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

struct Factorization {
  std::vector<std::pair<Int, unsigned>> factors;  // (prime, exponent), ascending
  Int unresolved = 1;                             // composite cofactor, or 1
  int sign = 1;

  Int reconstruct() const {
    Int n = unresolved * sign;
    for (const auto& [p, e] : factors) {
      Int pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      n *= pe;
    }
    return n;
  }
};

namespace detail {

/// Brent's cycle variant of Pollard rho; returns a nontrivial factor or 0
inline Int pollard_brent(const Int& n, unsigned long c, unsigned long budget) {
  Int x(2), y(2), d(1), q(1), ys(2);
  unsigned long r = 1;
  auto step = [&](Int& v) { v = (v * v + c) % n; };
  while (d == 1 && r <= budget) {
    y = x;
    for (unsigned long i = 0; i < r; ++i) step(x);
    unsigned long k = 0;
    while (k < r && d == 1) {
      ys = x;
      unsigned long lim = std::min<unsigned long>(128, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        step(x);
        Int diff = x - y;
        if (diff < 0) diff = -diff;
        q = (q * diff) % n;
      }
      d = gcd(q, n);
      k += lim;
    }
    r *= 2;
  }
  if (d == n) {
    // backtrack one step at a time
    d = 1;
    while (d == 1) {
      step(ys);
      Int diff = ys - y;
      if (diff < 0) diff = -diff;
      d = gcd(diff, n);
    }
    if (d == n) return 0;
  }
  return (d > 1 && d < n) ? d : Int(0);
}

inline void factor_rec(Int n, std::map<Int, unsigned>& out, Int& unresolved,
                       unsigned long budget) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    factor_rec(r, out, unresolved, budget);
    factor_rec(r, out, unresolved, budget);
    return;
  }
  for (unsigned long c = 1; c <= 6; ++c) {
    Int d = pollard_brent(n, c, budget);
    if (d != 0) {
      factor_rec(d, out, unresolved, budget);
      factor_rec(n / d, out, unresolved, budget);
      return;
    }
  }
  unresolved *= n;
}

}  // namespace detail

inline Factorization factor(const Int& n_in, unsigned long rho_budget = 1 << 18) {
  if (n_in == 0) throw Error("factor: zero input");
  Factorization f;
  Int n = n_in;
  if (n < 0) {
    f.sign = -1;
    n = -n;
  }
  std::map<Int, unsigned> found;
  for (long p = 2; p <= 1000000 && Int(p) * p <= n; p += (p == 2 ? 1 : 2))
    while (n % p == 0) {
      ++found[Int(p)];
      n /= p;
    }
  if (n > 1) detail::factor_rec(n, found, f.unresolved, rho_budget);
  for (auto& [p, e] : found) f.factors.emplace_back(p, e);
  return f;
}

}  // namespace maxorder
