#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "maxorder/errors.hpp"
#include "maxorder/intmat.hpp"

namespace maxorder {

/// Coefficients low-to-high. A polynomial is kept trimmed (no trailing zeros).
using Poly = std::vector<Int>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly derivative(const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(Int(static_cast<long>(i)) * f[i]);
  trim(d);
  return d;
}

// ---------------------------------------------------------------------------
// Rational-coefficient helpers (squarefreeness over Q)
// ---------------------------------------------------------------------------

using QPoly = std::vector<Rat>;

inline void qtrim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline QPoly qrem(QPoly a, const QPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rat c = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    qtrim(a);
  }
  return a;
}

inline QPoly qgcd(QPoly a, QPoly b) {
  qtrim(a);
  qtrim(b);
  while (!b.empty()) {
    QPoly r = qrem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

inline bool squarefree_over_q(const Poly& f) {
  QPoly qf(f.size()), qd;
  for (std::size_t i = 0; i < f.size(); ++i) qf[i] = f[i];
  Poly d = derivative(f);
  qd.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) qd[i] = d[i];
  return qgcd(qf, qd).size() <= 1;
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[x]; coefficients normalized into [0, p)
// ---------------------------------------------------------------------------

inline Poly pnorm(Poly f, const Int& p) {
  for (auto& c : f) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
  }
  trim(f);
  return f;
}

inline Poly padd(const Poly& a, const Poly& b, const Int& p) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return pnorm(std::move(r), p);
}

inline Poly psub(const Poly& a, const Poly& b, const Int& p) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return pnorm(std::move(r), p);
}

inline Poly pmul(const Poly& a, const Poly& b, const Int& p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return pnorm(std::move(r), p);
}

inline Int inv_mod(const Int& a, const Int& p) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0)
    throw Error("inv_mod: not invertible");
  return r;
}

/// (quotient, remainder) of a by b in F_p[x]; b nonzero.
inline std::pair<Poly, Poly> pdivmod(Poly a, const Poly& b, const Int& p) {
  Poly q;
  Int lead_inv = inv_mod(b.back(), p);
  if (a.size() >= b.size()) q.resize(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    Int c = (a.back() * lead_inv) % p;
    std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    a = pnorm(std::move(a), p);
  }
  return {pnorm(std::move(q), p), std::move(a)};
}

inline Poly pmod(const Poly& a, const Poly& b, const Int& p) {
  return pdivmod(Poly(a), b, p).second;
}

inline Poly pdiv(const Poly& a, const Poly& b, const Int& p) {
  return pdivmod(Poly(a), b, p).first;
}

inline Poly pmonic(Poly f, const Int& p) {
  if (f.empty() || f.back() == 1) return f;
  Int inv = inv_mod(f.back(), p);
  for (auto& c : f) c = (c * inv) % p;
  return f;
}

inline Poly pgcd(Poly a, Poly b, const Int& p) {
  while (!b.empty()) {
    Poly r = pmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return pmonic(std::move(a), p);
}

/// extended gcd over F_p: returns monic g with u·a + v·b ≡ g (mod p)
inline void pexgcd(Poly a, Poly b, const Int& p, Poly& g, Poly& u, Poly& v) {
  Poly u0{Int(1)}, v0, u1, v1{Int(1)};
  a = pnorm(std::move(a), p);
  b = pnorm(std::move(b), p);
  while (!b.empty()) {
    auto [q, r] = pdivmod(a, b, p);
    Poly u2 = psub(u0, pmul(q, u1, p), p);
    Poly v2 = psub(v0, pmul(q, v1, p), p);
    a = std::move(b);
    b = std::move(r);
    u0 = std::move(u1);
    u1 = std::move(u2);
    v0 = std::move(v1);
    v1 = std::move(v2);
  }
  if (a.empty()) {
    g = a;
    u = u0;
    v = v0;
    return;
  }
  Int inv = inv_mod(a.back(), p);
  auto scale = [&](Poly f) {
    for (auto& c : f) c = (c * inv) % p;
    return pnorm(std::move(f), p);
  };
  g = scale(a);
  u = scale(u0);
  v = scale(v0);
}

/// base^e modulo (m, p) by square-and-multiply.
inline Poly ppowmod(const Poly& base, const Int& e, const Poly& m, const Int& p) {
  Poly result{Int(1)};
  Poly b = pmod(base, m, p);
  Int k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = pmod(pmul(result, b, p), m, p);
    b = pmod(pmul(b, b, p), m, p);
    k >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Factorization over F_p: squarefree / distinct-degree / equal-degree
// ---------------------------------------------------------------------------

namespace detail {

// f = g(x^p) with vanishing derivative; returns g (prime field, c^{1/p} = c).
inline Poly pth_root(const Poly& f, const Int& p) {
  unsigned long pu = p.get_ui();
  Poly g;
  for (std::size_t i = 0; i < f.size(); i += pu) g.push_back(f[i]);
  trim(g);
  return g;
}

inline Poly random_poly(std::size_t deg_bound, const Int& p, std::mt19937_64& rng) {
  Poly a(deg_bound);
  for (auto& c : a) {
    Int v = static_cast<unsigned long>(rng());
    c = v % p;
  }
  trim(a);
  return a;
}

inline void equal_degree_split(const Poly& f, unsigned d, const Int& p,
                               std::mt19937_64& rng, std::vector<Poly>& out) {
  if (degree(f) == static_cast<int>(d)) {
    out.push_back(pmonic(Poly(f), p));
    return;
  }
  for (;;) {
    Poly a = random_poly(static_cast<std::size_t>(degree(f)), p, rng);
    if (degree(a) < 1) continue;
    Poly g;
    if (p == 2) {
      // trace polynomial a + a^2 + ... + a^{2^{d-1}} mod f
      Poly t = pmod(a, f, p);
      Poly acc = t;
      for (unsigned i = 1; i < d; ++i) {
        t = pmod(pmul(t, t, p), f, p);
        acc = padd(acc, t, p);
      }
      g = pgcd(Poly(f), acc, p);
    } else {
      Int e;
      mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), d);
      e = (e - 1) / 2;
      Poly b = ppowmod(a, e, f, p);
      b = psub(b, Poly{Int(1)}, p);
      g = pgcd(Poly(f), b, p);
    }
    if (degree(g) > 0 && degree(g) < degree(f)) {
      equal_degree_split(g, d, p, rng, out);
      equal_degree_split(pdiv(f, g, p), d, p, rng, out);
      return;
    }
  }
}

// distinct-degree factorization of a squarefree monic f
inline std::vector<std::pair<Poly, unsigned>> distinct_degree(Poly f, const Int& p) {
  std::vector<std::pair<Poly, unsigned>> out;
  Poly x{Int(0), Int(1)};
  Poly h = pmod(x, f, p);
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(degree(f)); ++d) {
    h = ppowmod(h, p, f, p);
    Poly g = pgcd(Poly(f), psub(h, x, p), p);
    if (degree(g) > 0) {
      out.emplace_back(g, d);
      f = pdiv(f, g, p);
      h = pmod(h, f, p);
    }
  }
  if (degree(f) > 0) out.emplace_back(f, static_cast<unsigned>(degree(f)));
  return out;
}

inline void squarefree_parts(const Poly& f, unsigned mult, const Int& p,
                             std::vector<std::pair<Poly, unsigned>>& parts) {
  if (degree(f) <= 0) return;
  Poly fp = pnorm(derivative(f), p);
  if (fp.empty()) {
    squarefree_parts(pth_root(f, p), mult * static_cast<unsigned>(p.get_ui()), p, parts);
    return;
  }
  Poly g = pgcd(Poly(f), fp, p);
  Poly w = pdiv(f, g, p);
  unsigned i = 1;
  while (degree(w) > 0) {
    Poly y = pgcd(w, g, p);
    Poly z = pdiv(w, y, p);
    if (degree(z) > 0) parts.emplace_back(pmonic(std::move(z), p), i * mult);
    w = std::move(y);
    g = pdiv(g, w, p);
    ++i;
  }
  if (degree(g) > 0)
    squarefree_parts(pth_root(g, p), mult * static_cast<unsigned>(p.get_ui()), p, parts);
}

}  // namespace detail

/// Complete factorization of monic f over F_p into (monic irreducible,
/// multiplicity) pairs, ordered by (degree, coefficients). Deterministic
/// for a fixed seed.
inline std::vector<std::pair<Poly, unsigned>> factor_mod_p(const Poly& f_in, const Int& p,
                                                           std::uint64_t seed = 0) {
  Poly f = pmonic(pnorm(Poly(f_in), p), p);
  if (degree(f) < 1) throw Error("factor_mod_p: polynomial is constant mod p");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::pair<Poly, unsigned>> parts;
  detail::squarefree_parts(f, 1, p, parts);
  std::vector<std::pair<Poly, unsigned>> factors;
  for (const auto& [part, mult] : parts) {
    for (const auto& [prod, d] : detail::distinct_degree(part, p)) {
      std::vector<Poly> irred;
      detail::equal_degree_split(prod, d, p, rng, irred);
      for (auto& g : irred) factors.emplace_back(std::move(g), mult);
    }
  }
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) {
              if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
              for (std::size_t i = a.first.size(); i-- > 0;)
                if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
              return a.second < b.second;
            });
  return factors;
}

}  // namespace maxorder
