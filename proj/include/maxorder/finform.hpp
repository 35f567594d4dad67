#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "maxorder/errors.hpp"
#include "maxorder/intmat.hpp"

namespace maxorder {

inline Int pow_int(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

/// reduce a rational into [0, 1)
inline Rat mod1(const Rat& q) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - Rat(fl);
}

/// Finite p-group ⊕_i Z/p^{e_i} carrying a symmetric Q/Z-valued pairing on
/// its standard generators.
struct FiniteFormModule {
  Int p;
  std::vector<unsigned> exps;  // nondecreasing, all >= 1
  RatMat gram;                 // r x r, entries in [0,1)

  std::size_t rank() const { return exps.size(); }
  Int size() const {
    unsigned long total = 0;
    for (unsigned e : exps) total += e;
    return pow_int(p, total);
  }
  Int annihilator() const { return exps.empty() ? Int(1) : pow_int(p, exps.back()); }
};

inline FiniteFormModule make_form(const Int& p, std::vector<unsigned> exps, RatMat gram) {
  const std::size_t r = exps.size();
  if (gram.rows != r || gram.cols != r) throw Error("make_form: gram shape mismatch");
  for (std::size_t i = 0; i + 1 < r; ++i)
    if (exps[i] > exps[i + 1]) throw Error("make_form: exponents not sorted");
  for (std::size_t i = 0; i < r; ++i) {
    if (exps[i] == 0) throw Error("make_form: zero exponent");
    for (std::size_t j = 0; j < r; ++j) {
      gram(i, j) = mod1(gram(i, j));
      if (gram(i, j) != gram(j, i)) throw Error("make_form: gram not symmetric");
      Rat scaled = gram(i, j) * Rat(pow_int(p, std::min(exps[i], exps[j])));
      if (scaled.get_den() != 1) throw Error("make_form: pairing incompatible with generator orders");
    }
  }
  return FiniteFormModule{p, std::move(exps), std::move(gram)};
}

/// Submodule of a FiniteFormModule in canonical form: the full-rank HNF of
/// the preimage lattice in Z^r (always contains the relation lattice
/// diag(p^{e_i})), so equality of submodules is equality of matrices.
struct Submodule {
  IntMat h;
  bool operator==(const Submodule& o) const { return h == o.h; }
  bool operator!=(const Submodule& o) const { return !(h == o.h); }
};

inline IntMat relations_mat(const FiniteFormModule& M) {
  const std::size_t r = M.rank();
  IntMat R(r, r);
  for (std::size_t i = 0; i < r; ++i) R(i, i) = pow_int(M.p, M.exps[i]);
  return R;
}

inline Submodule submodule_from_rows(const FiniteFormModule& M, const IntMat& rows) {
  const std::size_t r = M.rank();
  if (rows.cols != r) throw Error("submodule_from_rows: wrong width");
  IntMat R = relations_mat(M);
  IntMat stack(rows.rows + r, r);
  for (std::size_t i = 0; i < rows.rows; ++i)
    for (std::size_t j = 0; j < r; ++j) stack(i, j) = rows(i, j);
  for (std::size_t i = 0; i < r; ++i) stack(rows.rows + i, i) = R(i, i);
  IntMat H = hnf(stack).H;
  IntMat top(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) top(i, j) = H(i, j);
  return Submodule{std::move(top)};
}

inline Submodule zero_submodule(const FiniteFormModule& M) {
  return Submodule{relations_mat(M)};
}

inline Submodule full_submodule(const FiniteFormModule& M) {
  return Submodule{IntMat::identity(M.rank())};
}

/// membership of an integer coordinate vector via triangular reduction
inline bool submodule_contains(const Submodule& L, std::vector<Int> v) {
  const std::size_t n = L.h.rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] % L.h(i, i) != 0) return false;
    Int q = v[i] / L.h(i, i);
    for (std::size_t j = i; j < n; ++j) v[j] -= q * L.h(i, j);
  }
  return true;
}

inline bool submodule_subset(const Submodule& a, const Submodule& b) {
  for (std::size_t i = 0; i < a.h.rows; ++i) {
    std::vector<Int> v(a.h.cols);
    for (std::size_t j = 0; j < a.h.cols; ++j) v[j] = a.h(i, j);
    if (!submodule_contains(b, std::move(v))) return false;
  }
  return true;
}

inline Submodule submodule_sum(const FiniteFormModule& M, const Submodule& a, const Submodule& b) {
  IntMat stack(a.h.rows + b.h.rows, a.h.cols);
  for (std::size_t i = 0; i < a.h.rows; ++i)
    for (std::size_t j = 0; j < a.h.cols; ++j) stack(i, j) = a.h(i, j);
  for (std::size_t i = 0; i < b.h.rows; ++i)
    for (std::size_t j = 0; j < b.h.cols; ++j) stack(a.h.rows + i, j) = b.h(i, j);
  return submodule_from_rows(M, stack);
}

inline Submodule submodule_intersect(const FiniteFormModule& M, const Submodule& a,
                                     const Submodule& b) {
  const std::size_t n = M.rank();
  IntMat stack(2 * n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      stack(i, j) = a.h(i, j);
      stack(n + i, j) = -b.h(i, j);
    }
  IntMat K = kernel(stack);  // rows (x | y) with x·a = y·b
  IntMat rows(K.rows, n);
  for (std::size_t i = 0; i < K.rows; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) rows(i, j) += K(i, k) * a.h(k, j);
  return submodule_from_rows(M, rows);
}

/// number of elements of L as a subgroup of M
inline Int submodule_size(const FiniteFormModule& M, const Submodule& L) {
  Int idx = 1;  // [Z^r : L]
  for (std::size_t i = 0; i < L.h.rows; ++i) idx *= L.h(i, i);
  Int sz = M.size();
  if (sz % idx != 0) throw Error("submodule_size: inconsistent index");
  return sz / idx;
}

/// p^k · M
inline Submodule module_scale(const FiniteFormModule& M, unsigned k) {
  const std::size_t r = M.rank();
  IntMat rows(r, r);
  for (std::size_t i = 0; i < r; ++i) rows(i, i) = pow_int(M.p, std::min<unsigned>(k, M.exps[i]));
  return Submodule{std::move(rows)};
}

/// M[p^k] = kernel of multiplication by p^k
inline Submodule module_torsion(const FiniteFormModule& M, unsigned k) {
  const std::size_t r = M.rank();
  IntMat rows(r, r);
  for (std::size_t i = 0; i < r; ++i)
    rows(i, i) = pow_int(M.p, M.exps[i] > k ? M.exps[i] - k : 0);
  return Submodule{std::move(rows)};
}

/// lr(M) = Σ_k (p^k M ∩ M[p^k]); depends only on the exponent profile
inline Submodule lower_root(const FiniteFormModule& M) {
  Submodule acc = zero_submodule(M);
  unsigned top = M.exps.empty() ? 0 : M.exps.back();
  for (unsigned k = 1; k <= top; ++k)
    acc = submodule_sum(M, acc, submodule_intersect(M, module_scale(M, k), module_torsion(M, k)));
  return acc;
}

/// pairing of two coordinate vectors, reduced into [0,1)
inline Rat pair_value(const FiniteFormModule& M, const std::vector<Int>& x,
                      const std::vector<Int>& y) {
  Rat acc = 0;
  for (std::size_t i = 0; i < M.rank(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < M.rank(); ++j) acc += Rat(x[i] * y[j]) * M.gram(i, j);
  }
  return mod1(acc);
}

/// {y : ⟨x, y⟩ = 0 in Q/Z for all x in L}
inline Submodule orthocomplement(const FiniteFormModule& M, const Submodule& L) {
  const std::size_t n = M.rank();
  if (n == 0) return zero_submodule(M);
  const Int D = M.annihilator();
  // integer condition matrix: column k is the pairing of e_i with generator k
  IntMat W(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      Rat acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += M.gram(i, j) * Rat(L.h(k, j));
      Rat scaled = acc * Rat(D);
      if (scaled.get_den() != 1) throw Error("orthocomplement: non-integral scaled pairing");
      W(i, k) = scaled.get_num();
    }
  IntMat stack(2 * n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) stack(i, k) = W(i, k);
  for (std::size_t i = 0; i < n; ++i) stack(n + i, i) = D;
  IntMat K = kernel(stack);
  IntMat rows(K.rows, n);
  for (std::size_t i = 0; i < K.rows; ++i)
    for (std::size_t j = 0; j < n; ++j) rows(i, j) = K(i, j);
  return submodule_from_rows(M, rows);
}

inline Submodule radical(const FiniteFormModule& M) {
  return orthocomplement(M, full_submodule(M));
}

/// the form on M/M[p] valued via the canonical identification with Q/Z:
/// exponents drop by one (zero factors are removed), Gram entries scale by p
inline FiniteFormModule induced_quotient_form(const FiniteFormModule& M) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < M.rank(); ++i)
    if (M.exps[i] > 1) keep.push_back(i);
  std::vector<unsigned> exps;
  RatMat gram(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    exps.push_back(M.exps[keep[a]] - 1);
    for (std::size_t b = 0; b < keep.size(); ++b)
      gram(a, b) = mod1(M.gram(keep[a], keep[b]) * Rat(M.p));
  }
  return make_form(M.p, std::move(exps), std::move(gram));
}

/// the induced form on L^⊥ / L for L ⊆ L^⊥
inline FiniteFormModule subquotient_form(const FiniteFormModule& M, const Submodule& L) {
  Submodule P = orthocomplement(M, L);
  if (!submodule_subset(L, P)) throw NotIsotropicInput("subquotient_form: L not contained in its orthocomplement");
  const std::size_t n = M.rank();
  // express L in the basis of P and read off the quotient structure
  IntMat Xi(n, n);
  {
    RatMat sol = mul(RatMat(L.h), inverse(P.h));  // sol * P.h = L.h
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (sol(i, j).get_den() != 1) throw Error("subquotient_form: inclusion not integral");
        Xi(i, j) = sol(i, j).get_num();
      }
  }
  SnfResult s = snf(Xi);
  // generators of P/L: rows of V^{-1}·P.h, generator i has order divisors[i]
  RatMat lifts = solve_rational(s.V, RatMat(P.h));  // V * lifts = P.h
  std::vector<std::vector<Int>> gens;
  std::vector<unsigned> exps;
  for (std::size_t i = 0; i < n; ++i) {
    Int d = s.divisors[i];
    if (d == 1) continue;
    unsigned e = 0;
    Int t = d;
    while (t % M.p == 0) {
      t /= M.p;
      ++e;
    }
    if (t != 1) throw Error("subquotient_form: non p-power divisor");
    exps.push_back(e);
    std::vector<Int> g(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (lifts(i, j).get_den() != 1) throw Error("subquotient_form: non-integral lift");
      g[j] = lifts(i, j).get_num();
    }
    gens.push_back(std::move(g));
  }
  RatMat gram(gens.size(), gens.size());
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = 0; b < gens.size(); ++b) gram(a, b) = pair_value(M, gens[a], gens[b]);
  return make_form(M.p, std::move(exps), std::move(gram));
}

enum class Anisotropy { Anisotropic, QuasiAnisotropic, Undetermined };

inline const char* to_string(Anisotropy a) {
  switch (a) {
    case Anisotropy::Anisotropic: return "Anisotropic";
    case Anisotropy::QuasiAnisotropic: return "QuasiAnisotropic";
    default: return "Undetermined";
  }
}

namespace detail {
// sufficient criteria for anisotropy at odd p: cyclic, or two generators
// with odd total length
inline bool aniso_sufficient(const FiniteFormModule& M) {
  if (M.rank() <= 1) return true;
  if (M.rank() == 2) return (M.exps[0] + M.exps[1]) % 2 == 1;
  return false;
}
}  // namespace detail

inline Anisotropy anisotropy_status(const FiniteFormModule& M) {
  if (M.p == 2) return Anisotropy::Undetermined;
  if (detail::aniso_sufficient(M)) return Anisotropy::Anisotropic;
  if (detail::aniso_sufficient(induced_quotient_form(M))) return Anisotropy::QuasiAnisotropic;
  return Anisotropy::Undetermined;
}

struct RrResult {
  Submodule rr;
  long qualifying_count = 0;
};

namespace detail {

// small fixed-size HNF over int64 used only by the brute-force enumerator;
// entries stay below the module annihilator so no overflow is possible
inline void hnf64(std::vector<int64_t>& a, std::size_t rows, std::size_t n) {
  std::size_t r = 0;
  auto at = [&](std::size_t i, std::size_t j) -> int64_t& { return a[i * n + j]; };
  for (std::size_t j = 0; j < n && r < rows; ++j) {
    for (;;) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i)
        if (at(i, j) != 0 && (best == rows || std::llabs(at(i, j)) < std::llabs(at(best, j))))
          best = i;
      if (best == rows) break;
      if (best != r)
        for (std::size_t k = 0; k < n; ++k) std::swap(at(r, k), at(best, k));
      bool clean = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (at(i, j) == 0) continue;
        int64_t q = at(i, j) / at(r, j);
        for (std::size_t k = 0; k < n; ++k) at(i, k) -= q * at(r, k);
        if (at(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (at(r, j) != 0) {
      if (at(r, j) < 0)
        for (std::size_t k = 0; k < n; ++k) at(r, k) = -at(r, k);
      for (std::size_t i = 0; i < r; ++i) {
        int64_t q = at(i, j) / at(r, j);
        if (at(i, j) % at(r, j) < 0) --q;  // floor
        if (q != 0)
          for (std::size_t k = 0; k < n; ++k) at(i, k) -= q * at(r, k);
      }
      ++r;
    }
  }
}

inline std::vector<int64_t> canon64(std::vector<int64_t> rows, std::size_t nrows, std::size_t n,
                                    const std::vector<int64_t>& rel) {
  rows.resize((nrows + n) * n, 0);
  for (std::size_t i = 0; i < n; ++i) rows[(nrows + i) * n + i] = rel[i];
  hnf64(rows, nrows + n, n);
  rows.resize(n * n);
  return rows;
}

}  // namespace detail

/// Enumerates every submodule and intersects all L with pL^⊥ ⊆ L ⊆ L^⊥.
/// Anisotropy in the strict sense holds iff the count is 1 (the unique
/// qualifying L then being the lower root).
inline RrResult rr_bruteforce(const FiniteFormModule& M, const Int& bound = 15625) {
  const std::size_t n = M.rank();
  if (M.size() > bound) throw TooLarge("rr_bruteforce: module exceeds enumeration bound");
  if (n == 0) return RrResult{zero_submodule(M), 1};

  std::vector<int64_t> rel(n);
  for (std::size_t i = 0; i < n; ++i) rel[i] = pow_int(M.p, M.exps[i]).get_si();

  // all cyclic subgroups, canonicalized
  std::set<std::vector<int64_t>> cyclics;
  {
    std::vector<int64_t> x(n, 0);
    for (;;) {
      std::size_t i = 0;
      while (i < n && ++x[i] == rel[i]) x[i++] = 0;
      if (i == n) break;
      cyclics.insert(detail::canon64(x, 1, n, rel));
    }
  }

  std::set<std::vector<int64_t>> all;
  std::vector<std::vector<int64_t>> queue;
  auto push = [&](std::vector<int64_t> c) {
    if (all.insert(c).second) queue.push_back(std::move(c));
  };
  push(detail::canon64({}, 0, n, rel));
  const std::size_t cap = 120000;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::vector<int64_t> base = queue[qi];
    for (const auto& c : cyclics) {
      std::vector<int64_t> join(base);
      join.insert(join.end(), c.begin(), c.end());
      push(detail::canon64(std::move(join), 2 * n, n, rel));
      if (all.size() > cap) throw TooLarge("rr_bruteforce: submodule count exceeds cap");
    }
  }

  RrResult res;
  bool have = false;
  for (const auto& key : all) {
    IntMat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = Int(static_cast<long>(key[i * n + j]));
    Submodule L{std::move(h)};
    Submodule P = orthocomplement(M, L);
    if (!submodule_subset(L, P)) continue;
    // p · L^⊥
    IntMat scaled(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scaled(i, j) = M.p * P.h(i, j);
    Submodule pP = submodule_from_rows(M, scaled);
    if (!submodule_subset(pP, L)) continue;
    ++res.qualifying_count;
    res.rr = have ? submodule_intersect(M, res.rr, L) : L;
    have = true;
  }
  if (!have) throw Error("rr_bruteforce: no qualifying submodule (degenerate form?)");
  return res;
}

}  // namespace maxorder

#include "maxorder/order.hpp"

namespace maxorder {

/// The p-primary part of A†/A on SNF-adapted generators, together with
/// rational lift vectors into Q(A) and the data needed to map elements of
/// the trace dual back to module coordinates.
struct FormWithLifts {
  FiniteFormModule M;
  RatMat lifts;  // row i = coordinates in Q(A) of the generator y_i
  // internals for coordinate computations
  Lattice dual;
  IntMat V;                      // SNF column transform of the inclusion A ⊆ A†
  std::vector<std::size_t> idx;  // position of y_i among the SNF generators
  std::vector<Int> aunit;        // a_i with a_i·(d_i/p^{e_i}) ≡ 1 mod p^{e_i}

  /// coordinates (mod generator orders) of an element w ∈ A† whose class in
  /// A†/A lies in the p-primary part
  std::vector<Int> coords(const std::vector<Rat>& w) const {
    const std::size_t n = dual.basis.rows;
    RatMat rhs(n, 1);
    // solve t · (basis/den) = w, i.e. (basis/den)^T t^T = w^T
    IntMat bt(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) bt(i, j) = dual.basis(j, i);
    for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = w[i] * Rat(dual.den);
    RatMat t = solve_rational(bt, rhs);
    std::vector<Int> c(n);
    for (std::size_t j = 0; j < n; ++j) {
      Rat acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += t(k, 0) * Rat(V(k, j));
      if (acc.get_den() != 1) throw Error("coords: element not in the trace dual");
      c[j] = acc.get_num();
    }
    std::vector<Int> out(M.rank());
    for (std::size_t i = 0; i < M.rank(); ++i) {
      Int ord = pow_int(M.p, M.exps[i]);
      Int v = aunit[i] * c[idx[i]];
      mpz_fdiv_r(out[i].get_mpz_t(), v.get_mpz_t(), ord.get_mpz_t());
    }
    return out;
  }
};

inline FormWithLifts form_from_quotient(const TableOrder& A, const Int& p) {
  const std::size_t n = A.n;
  Lattice dual = trace_dual(A);
  QuotientPresentation q = quotient_presentation(unit_lattice(A), dual);

  FormWithLifts out;
  out.dual = dual;
  out.V = q.V;
  std::vector<unsigned> exps;
  std::vector<std::vector<Rat>> lift_rows;
  for (std::size_t i = 0; i < q.divisors.size(); ++i) {
    Int d = q.divisors[i];
    unsigned e = 0;
    while (d % p == 0) {
      d /= p;
      ++e;
    }
    if (e == 0) continue;
    const Int pe = pow_int(p, e);
    const Int m = q.divisors[i] / pe;
    exps.push_back(e);
    out.idx.push_back(i);
    Int a;
    if (!mpz_invert(a.get_mpz_t(), m.get_mpz_t(), pe.get_mpz_t()))
      throw Error("form_from_quotient: cofactor not invertible");
    out.aunit.push_back(a);
    std::vector<Rat> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = Rat(m) * q.lifts(i, j);
    lift_rows.push_back(std::move(y));
  }
  const std::size_t r = exps.size();
  out.lifts = RatMat(r, n);
  RatMat gram(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out.lifts(i, j) = lift_rows[i][j];
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      std::vector<Rat> prod = A.multiply(lift_rows[i], lift_rows[j]);
      Rat v = mod1(A.trace(prod));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  out.M = make_form(p, std::move(exps), std::move(gram));
  return out;
}

}  // namespace maxorder
