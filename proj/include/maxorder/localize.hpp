#pragma once

#include <utility>
#include <vector>

#include "maxorder/finform.hpp"
#include "maxorder/order.hpp"
#include "maxorder/poly.hpp"

namespace maxorder {

// ---------------------------------------------------------------------------
// Linear algebra over F_p
// ---------------------------------------------------------------------------

/// basis of the left kernel {x : x·M ≡ 0 mod p}, rows with entries in [0, p)
inline IntMat kernel_mod_p(const IntMat& M, const Int& p) {
  const std::size_t rows = M.rows, cols = M.cols;
  // track row operations against an identity block
  IntMat A = M;
  IntMat U = IntMat::identity(rows);
  for (auto& e : A.a) mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  std::size_t r = 0;
  for (std::size_t j = 0; j < cols && r < rows; ++j) {
    std::size_t piv = r;
    while (piv < rows && A(piv, j) == 0) ++piv;
    if (piv == rows) continue;
    A.swap_rows(r, piv);
    U.swap_rows(r, piv);
    Int inv = inv_mod(A(r, j), p);
    for (std::size_t k = 0; k < cols; ++k) A(r, k) = (A(r, k) * inv) % p;
    for (std::size_t k = 0; k < rows; ++k) U(r, k) = (U(r, k) * inv) % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A(i, j) == 0) continue;
      Int c = A(i, j);
      for (std::size_t k = 0; k < cols; ++k) {
        A(i, k) -= c * A(r, k);
        mpz_fdiv_r(A(i, k).get_mpz_t(), A(i, k).get_mpz_t(), p.get_mpz_t());
      }
      for (std::size_t k = 0; k < rows; ++k) {
        U(i, k) -= c * U(r, k);
        mpz_fdiv_r(U(i, k).get_mpz_t(), U(i, k).get_mpz_t(), p.get_mpz_t());
      }
    }
    ++r;
  }
  IntMat K(rows - r, rows);
  for (std::size_t i = r; i < rows; ++i)
    for (std::size_t k = 0; k < rows; ++k) K(i - r, k) = U(i, k);
  return K;
}

namespace detail {

inline std::vector<Int> mulvec_mod(const TableOrder& A, const std::vector<Int>& x,
                                   const std::vector<Int>& y, const Int& m) {
  std::vector<Int> z(A.n);
  for (std::size_t i = 0; i < A.n; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < A.n; ++j) {
      if (y[j] == 0) continue;
      Int c = (x[i] * y[j]) % m;
      for (std::size_t k = 0; k < A.n; ++k) z[k] += c * A.cc(i, j, k);
    }
  }
  for (auto& e : z) mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return z;
}

inline std::vector<Int> powvec_mod(const TableOrder& A, std::vector<Int> x, Int e, const Int& m) {
  std::vector<Int> r = A.unit;
  for (auto& c : r) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mulvec_mod(A, r, x, m);
    x = mulvec_mod(A, x, x, m);
    e >>= 1;
  }
  return r;
}

/// lattice pA + (mod-p row span), as a sublattice of A with denominator 1
inline Lattice lattice_from_modp_rows(const TableOrder& A, const IntMat& rows, const Int& p) {
  IntMat stack(rows.rows + A.n, A.n);
  for (std::size_t i = 0; i < rows.rows; ++i)
    for (std::size_t j = 0; j < A.n; ++j) stack(i, j) = rows(i, j);
  for (std::size_t i = 0; i < A.n; ++i) stack(rows.rows + i, i) = p;
  return make_lattice(A, 1, stack);
}

}  // namespace detail

/// The radical lattice J with pA ⊆ J ⊆ A, J/pA = nilradical of A/pA,
/// computed as the kernel of the iterated Frobenius x ↦ x^{p^s}, p^s ≥ n.
inline Lattice radical_mod_p(const TableOrder& A, const Int& p) {
  const std::size_t n = A.n;
  Int ps = p;
  while (ps < static_cast<long>(n)) ps *= p;
  IntMat F(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> ei(n);
    ei[i] = 1;
    std::vector<Int> img = detail::powvec_mod(A, std::move(ei), ps, p);
    for (std::size_t j = 0; j < n; ++j) F(i, j) = img[j];
  }
  return detail::lattice_from_modp_rows(A, kernel_mod_p(F, p), p);
}

/// tameness in the exact sense: the trace-form kernel mod p coincides with
/// the nilradical of A/pA
inline bool is_tame_exact(const TableOrder& A, const Int& p) {
  Lattice tk = detail::lattice_from_modp_rows(A, kernel_mod_p(A.trace_matrix(), p), p);
  return tk == radical_mod_p(A, p);
}

/// dimension over F_p of the trace-form kernel of A/pA
inline std::size_t trace_kernel_dim(const TableOrder& A, const Int& p) {
  return kernel_mod_p(A.trace_matrix(), p).rows;
}

// ---------------------------------------------------------------------------
// Maximal-ideal splitting via Hensel-lifted idempotents
// ---------------------------------------------------------------------------

struct SplitData {
  Int p;
  std::vector<std::pair<Poly, unsigned>> factors;  // (irreducible mod p, multiplicity)
  std::vector<unsigned> residue_degrees;
  std::vector<std::vector<Int>> idempotents;  // coordinates mod p^precision
  unsigned precision = 1;                     // N with modulus p^N
  std::vector<std::vector<unsigned>> exps_per_ideal;

  std::size_t ideal_count() const { return factors.size(); }
};

inline SplitData split_maximal_ideals(const TableOrder& A, const Int& p, const FormWithLifts& B,
                                      std::uint64_t seed = 0) {
  if (!A.source_poly) throw NotMonogenic("split_maximal_ideals: order has no defining polynomial");
  const Poly& f = *A.source_poly;
  const std::size_t n = A.n;

  SplitData sd;
  sd.p = p;
  sd.factors = factor_mod_p(f, p, seed);
  for (const auto& [g, mult] : sd.factors) sd.residue_degrees.push_back(degree(g));
  {
    unsigned long total = 0;
    for (std::size_t m = 0; m < sd.factors.size(); ++m)
      total += sd.factors[m].second * sd.residue_degrees[m];
    if (total != n) throw Error("split_maximal_ideals: degree bookkeeping failed");
  }
  sd.precision = B.M.exps.empty() ? 1 : B.M.exps.back();
  if (sd.precision > 64) throw PrecisionOverflow("split_maximal_ideals: precision out of range");

  // modulus p^{2^k} >= p^N
  unsigned lifted = 1;
  Int modulus = p;
  std::vector<Int> moduli{modulus};
  while (lifted < sd.precision) {
    lifted *= 2;
    modulus = modulus * modulus;
    moduli.push_back(modulus);
  }
  const Int pN = pow_int(p, sd.precision);

  // idempotents mod p via CRT, then quadratic Hensel lifting
  for (std::size_t m = 0; m < sd.factors.size(); ++m) {
    Poly gm = sd.factors[m].first;
    Poly gme{Int(1)};
    for (unsigned t = 0; t < sd.factors[m].second; ++t) gme = pmul(gme, gm, p);
    Poly h{Int(1)};
    for (std::size_t m2 = 0; m2 < sd.factors.size(); ++m2) {
      if (m2 == m) continue;
      for (unsigned t = 0; t < sd.factors[m2].second; ++t) h = pmul(h, sd.factors[m2].first, p);
    }
    Poly g, u, v;
    pexgcd(h, gme, p, g, u, v);
    if (degree(g) != 0) throw Error("split_maximal_ideals: factors not coprime");
    Poly e = pmod(pmul(u, h, p), f, p);
    for (std::size_t k = 1; k < moduli.size(); ++k) {
      const Int& md = moduli[k];
      // e <- e^2 (3 - 2e) mod (f, p^{2^k})
      Poly e2 = pmod(pmul(e, e, md), f, md);
      Poly three_minus = psub(Poly{Int(3)}, pmul(Poly{Int(2)}, e, md), md);
      e = pmod(pmul(e2, three_minus, md), f, md);
    }
    std::vector<Int> coords(n);
    for (std::size_t j = 0; j < e.size() && j < n; ++j)
      mpz_fdiv_r(coords[j].get_mpz_t(), e[j].get_mpz_t(), pN.get_mpz_t());
    sd.idempotents.push_back(std::move(coords));
  }

  // exact idempotent identities mod p^N
  {
    std::vector<Int> sum(n);
    for (const auto& e : sd.idempotents)
      for (std::size_t j = 0; j < n; ++j) sum[j] += e[j];
    for (std::size_t j = 0; j < n; ++j) {
      Int want = A.unit[j];
      if ((sum[j] - want) % pN != 0) throw Error("split_maximal_ideals: idempotents do not sum to 1");
    }
    for (std::size_t a = 0; a < sd.idempotents.size(); ++a)
      for (std::size_t b = 0; b < sd.idempotents.size(); ++b) {
        std::vector<Int> prod = detail::mulvec_mod(A, sd.idempotents[a], sd.idempotents[b], pN);
        for (std::size_t j = 0; j < n; ++j) {
          Int want = (a == b) ? sd.idempotents[a][j] : Int(0);
          if ((prod[j] - want) % pN != 0)
            throw Error("split_maximal_ideals: idempotents not orthogonal");
        }
      }
  }

  // split B through the idempotent action
  const std::size_t r = B.M.rank();
  for (std::size_t m = 0; m < sd.factors.size(); ++m) {
    std::vector<unsigned> comp;
    if (r > 0) {
      IntMat rows(r, r);
      std::vector<Rat> em(n);
      for (std::size_t j = 0; j < n; ++j) em[j] = Rat(sd.idempotents[m][j]);
      for (std::size_t i = 0; i < r; ++i) {
        std::vector<Rat> yi(n);
        for (std::size_t j = 0; j < n; ++j) yi[j] = B.lifts(i, j);
        std::vector<Int> c = B.coords(A.multiply(em, yi));
        for (std::size_t j = 0; j < r; ++j) rows(i, j) = c[j];
      }
      Submodule S = submodule_from_rows(B.M, rows);
      // structure of S: express the relations in the basis of S
      RatMat X = mul(RatMat(relations_mat(B.M)), inverse(S.h));
      IntMat Xi(r, r);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          if (X(i, j).get_den() != 1) throw Error("split_maximal_ideals: bad component lattice");
          Xi(i, j) = X(i, j).get_num();
        }
      for (const Int& d : snf(Xi).divisors) {
        unsigned e = 0;
        Int t = d;
        while (t % p == 0) {
          t /= p;
          ++e;
        }
        if (t != 1 && t != -1) throw Error("split_maximal_ideals: non p-power component order");
        if (e > 0) comp.push_back(e);
      }
      std::sort(comp.begin(), comp.end());
    }
    sd.exps_per_ideal.push_back(std::move(comp));
  }
  return sd;
}

/// sufficient tameness: dim(B_m / p B_m) < p for every maximal ideal m
inline bool tame_dim_test(const SplitData& sd) {
  for (const auto& comp : sd.exps_per_ideal)
    if (sd.p <= static_cast<long>(comp.size())) return false;
  return true;
}

}  // namespace maxorder
