#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxorder/errors.hpp"
#include "maxorder/intmat.hpp"
#include "maxorder/poly.hpp"

namespace maxorder {

/// A commutative ring structure on Z^n: e_i * e_j = sum_k c[i][j][k] e_k.
class TableOrder {
 public:
  std::size_t n{0};
  std::vector<Int> c;        // n^3 structure constants, [(i*n+j)*n+k]
  std::vector<Int> unit;     // coordinates of 1
  std::optional<Poly> source_poly;

  const Int& cc(std::size_t i, std::size_t j, std::size_t k) const {
    return c[(i * n + j) * n + k];
  }

  const IntMat& trace_matrix() const { return trace_mat_; }
  const Int& discriminant() const { return disc_; }

  /// Validates the table: commutativity, associativity, unit, nonzero
  /// discriminant. Throws the matching error naming the failing triple.
  static TableOrder from_table(std::size_t n, std::vector<Int> c, std::vector<Int> unit,
                               std::optional<Poly> source = std::nullopt) {
    TableOrder A;
    A.n = n;
    A.c = std::move(c);
    A.unit = std::move(unit);
    A.source_poly = std::move(source);
    A.validate();
    A.finish();
    return A;
  }

  /// Z[alpha] for a monic squarefree polynomial, basis 1, alpha, ..., alpha^{n-1}.
  static TableOrder from_poly(const Poly& f) {
    if (f.size() < 2) throw Error("order_from_poly: degree must be >= 1");
    if (f.back() != 1) throw Error("order_from_poly: polynomial must be monic");
    if (!squarefree_over_q(f))
      throw NotSquarefree("order_from_poly: gcd(f, f') is nonconstant");
    const std::size_t n = f.size() - 1;
    // powers[k] = coordinates of alpha^k, k = 0..2n-2
    std::vector<std::vector<Int>> powers(2 * n - 1, std::vector<Int>(n));
    powers[0][0] = 1;
    for (std::size_t k = 1; k < 2 * n - 1; ++k) {
      const auto& prev = powers[k - 1];
      auto& cur = powers[k];
      for (std::size_t i = 0; i + 1 < n; ++i) cur[i + 1] = prev[i];
      if (prev[n - 1] != 0)
        for (std::size_t i = 0; i < n; ++i) cur[i] -= prev[n - 1] * f[i];
    }
    std::vector<Int> tab(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) tab[(i * n + j) * n + k] = powers[i + j][k];
    std::vector<Int> unit(n);
    unit[0] = 1;
    return from_table(n, std::move(tab), std::move(unit), f);
  }

  /// Coordinates of x * e_j for x given by rational coordinates.
  /// Returned as the matrix R with row i = coordinates of e_i * x, so that
  /// coords(y * x) = coords(y) * R.
  RatMat mult_matrix(const std::vector<Rat>& x) const {
    RatMat R(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (x[j] == 0) continue;
        for (std::size_t k = 0; k < n; ++k) R(i, k) += x[j] * cc(i, j, k);
      }
    return R;
  }

  std::vector<Rat> multiply(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
    std::vector<Rat> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        for (std::size_t k = 0; k < n; ++k) z[k] += x[i] * y[j] * cc(i, j, k);
      }
    }
    return z;
  }

  Rat trace(const std::vector<Rat>& x) const {
    Rat t;
    for (std::size_t i = 0; i < n; ++i) t += x[i] * basis_traces_[i];
    return t;
  }

  /// Tr(x * y), the trace pairing.
  Rat trace_pair(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
    Rat t;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) t += x[i] * y[j] * Rat(trace_mat_(i, j));
    }
    return t;
  }

  const std::vector<Int>& basis_traces() const { return basis_traces_; }

 private:
  IntMat trace_mat_;
  std::vector<Int> basis_traces_;
  Int disc_;

  void validate() const {
    if (c.size() != n * n * n || unit.size() != n)
      throw Error("order_from_table: malformed table");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (cc(i, j, k) != cc(j, i, k))
            throw NotCommutative("e_" + std::to_string(i) + " * e_" + std::to_string(j) +
                                 " != e_" + std::to_string(j) + " * e_" + std::to_string(i));
    // (e_i e_j) e_k == e_i (e_j e_k), full basis-triple check
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t m = 0; m < n; ++m) {
            Int lhs, rhs;
            for (std::size_t l = 0; l < n; ++l) {
              lhs += cc(i, j, l) * cc(l, k, m);
              rhs += cc(j, k, l) * cc(i, l, m);
            }
            if (lhs != rhs)
              throw NotAssociative("(e_" + std::to_string(i) + " e_" + std::to_string(j) +
                                   ") e_" + std::to_string(k) + " != e_" + std::to_string(i) +
                                   " (e_" + std::to_string(j) + " e_" + std::to_string(k) + ")");
          }
        }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Int v;
        for (std::size_t i = 0; i < n; ++i) v += unit[i] * cc(i, j, k);
        if (v != (j == k ? 1 : 0))
          throw NoUnit("designated unit does not fix e_" + std::to_string(j));
      }
  }

  void finish() {
    basis_traces_.assign(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) basis_traces_[i] += cc(i, j, j);
    trace_mat_ = IntMat(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          trace_mat_(i, j) += cc(i, j, k) * basis_traces_[k];
    disc_ = det(trace_mat_);
    if (disc_ == 0)
      throw DegenerateTrace("trace form is degenerate: Q(A) is not etale");
  }
};

/// Element of Q(A) by rational coordinates in the order basis.
struct OrderElement {
  const TableOrder* order{nullptr};
  std::vector<Rat> v;
};

inline OrderElement mul(const OrderElement& x, const OrderElement& y) {
  return {x.order, x.order->multiply(x.v, y.v)};
}

/// Characteristic polynomial (low-to-high, monic) of multiplication by x,
/// by the Faddeev-LeVerrier recursion.
inline QPoly char_poly(const OrderElement& x) {
  const std::size_t n = x.order->n;
  RatMat M = x.order->mult_matrix(x.v);
  QPoly coeff(n + 1);
  coeff[n] = 1;
  RatMat Mk = M;
  for (std::size_t k = 1; k <= n; ++k) {
    Rat tr;
    for (std::size_t i = 0; i < n; ++i) tr += Mk(i, i);
    Rat ck = -tr / Rat(static_cast<long>(k));
    coeff[n - k] = ck;
    if (k == n) break;
    for (std::size_t i = 0; i < n; ++i) Mk(i, i) += ck;
    Mk = mul(M, Mk);
  }
  return coeff;
}

inline bool is_integral(const OrderElement& x) {
  for (const Rat& c : char_poly(x))
    if (c.get_den() != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lattices: full-rank Z-submodules of Q(A), denominator + HNF basis
// ---------------------------------------------------------------------------

/// (1/den) * rowspan(basis); basis is n x n, HNF, nonsingular;
/// gcd(den, all entries) = 1 and den > 0.
struct Lattice {
  const TableOrder* order{nullptr};
  Int den{1};
  IntMat basis;

  bool operator==(const Lattice& o) const {
    return den == o.den && basis == o.basis;
  }
};

/// Builds a lattice from integer generator rows scaled by 1/den.
/// Rows may be redundant; full rank n is required.
inline Lattice make_lattice(const TableOrder& A, Int den, const IntMat& rows) {
  IntMat H = hnf(rows).H;
  const std::size_t n = A.n;
  IntMat B(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < n; ++j) {
      B(i, j) = i < H.rows ? H(i, j) : 0;
      if (B(i, j) != 0) zero = false;
    }
    if (zero) throw Error("make_lattice: generators do not have full rank");
  }
  if (den < 0) throw Error("make_lattice: negative denominator");
  // normalize gcd(den, content) = 1
  Int g = den;
  for (const Int& e : B.a) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    if (g == 1) break;
  }
  if (g > 1) {
    den /= g;
    for (Int& e : B.a) e /= g;
  }
  return {&A, std::move(den), std::move(B)};
}

inline Lattice lattice_from_rat_rows(const TableOrder& A, const RatMat& rows) {
  Int den = 1;
  for (const Rat& r : rows.a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
  IntMat M(rows.rows, rows.cols);
  for (std::size_t i = 0; i < rows.a.size(); ++i) {
    Rat scaled = rows.a[i] * Rat(den);
    M.a[i] = scaled.get_num();
  }
  return make_lattice(A, den, M);
}

inline Lattice unit_lattice(const TableOrder& A) {
  return {&A, 1, IntMat::identity(A.n)};
}

/// Rational coordinates (in the order basis) of the i-th basis row.
inline std::vector<Rat> lattice_row(const Lattice& L, std::size_t i) {
  std::vector<Rat> v(L.basis.cols);
  for (std::size_t j = 0; j < L.basis.cols; ++j) v[j] = Rat(L.basis(i, j)) / Rat(L.den);
  return v;
}

/// Is an integer vector in the row span of a full-rank HNF matrix?
inline bool in_hnf_span(const IntMat& H, const std::vector<Int>& v) {
  std::vector<Int> w = v;
  for (std::size_t i = 0; i < H.rows; ++i) {
    if (w[i] % H(i, i) != 0) return false;
    Int q = w[i] / H(i, i);
    if (q != 0)
      for (std::size_t j = i; j < H.cols; ++j) w[j] -= q * H(i, j);
  }
  for (const Int& e : w)
    if (e != 0) return false;
  return true;
}

inline bool lattice_contains(const Lattice& L, const std::vector<Rat>& x) {
  std::vector<Int> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rat s = x[i] * Rat(L.den);
    if (s.get_den() != 1) return false;
    w[i] = s.get_num();
  }
  return in_hnf_span(L.basis, w);
}

inline bool lattice_subset(const Lattice& sub, const Lattice& sup) {
  for (std::size_t i = 0; i < sub.basis.rows; ++i)
    if (!lattice_contains(sup, lattice_row(sub, i))) return false;
  return true;
}

inline Lattice lattice_sum(const Lattice& L1, const Lattice& L2) {
  Int den;
  mpz_lcm(den.get_mpz_t(), L1.den.get_mpz_t(), L2.den.get_mpz_t());
  const std::size_t n = L1.basis.cols;
  IntMat rows(2 * n, n);
  Int s1 = den / L1.den, s2 = den / L2.den;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rows(i, j) = s1 * L1.basis(i, j);
      rows(n + i, j) = s2 * L2.basis(i, j);
    }
  return make_lattice(*L1.order, den, rows);
}

/// Lattice generated by all pairwise products of basis elements.
inline Lattice lattice_product(const Lattice& L1, const Lattice& L2) {
  const TableOrder& A = *L1.order;
  const std::size_t n = A.n;
  IntMat rows(n * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // integer product of scaled rows; denominator den1*den2
      for (std::size_t a = 0; a < n; ++a) {
        if (L1.basis(i, a) == 0) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (L2.basis(j, b) == 0) continue;
          for (std::size_t k = 0; k < n; ++k)
            rows(i * n + j, k) += L1.basis(i, a) * L2.basis(j, b) * A.cc(a, b, k);
        }
      }
    }
  }
  return make_lattice(A, L1.den * L2.den, rows);
}

/// colon(L1, L2) = {x in Q(A) : x * L2 is contained in L1}; L2 full rank.
inline Lattice colon(const Lattice& L1, const Lattice& L2) {
  const TableOrder& A = *L1.order;
  const std::size_t n = A.n;
  RatMat Binv = inverse(L1.basis);
  // stacked conditions: v * R_g * (den1 * Binv) integral for each generator g of L2
  RatMat T(n, n * n);
  for (std::size_t j = 0; j < n; ++j) {
    RatMat R = A.mult_matrix(lattice_row(L2, j));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        Rat acc;
        for (std::size_t l = 0; l < n; ++l) acc += R(i, l) * Binv(l, k);
        T(i, j * n + k) = acc * Rat(L1.den);
      }
  }
  Int e = 1;
  for (const Rat& r : T.a) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), r.get_den_mpz_t());
  IntMat S(n, n * n);
  for (std::size_t i = 0; i < T.a.size(); ++i) S.a[i] = Rat(T.a[i] * Rat(e)).get_num();
  // {v : v * S in e Z^{n^2}} is the dual of the column span of S scaled by e
  IntMat Ct = hnf(S.transposed()).H;  // row HNF of columns
  IntMat C(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) C(i, j) = Ct(i, j);
  RatMat Cinv = inverse(C);  // rows v with v * C^T = I come from (C^{-1})^T
  RatMat V(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) V(i, j) = Cinv(j, i) * Rat(e);
  return lattice_from_rat_rows(A, V);
}

/// Trace dual: lattice spanned by the rows of the inverse trace matrix.
inline Lattice trace_dual(const TableOrder& A) {
  RatMat inv = inverse(A.trace_matrix());
  return lattice_from_rat_rows(A, inv);
}

/// Index [sup : sub] for sub contained in sup.
inline Int lattice_index(const Lattice& sub, const Lattice& sup) {
  const std::size_t n = sub.basis.rows;
  Rat r = Rat(abs(det(sub.basis))) / Rat(abs(det(sup.basis)));
  Rat scale = Rat(sup.den) / Rat(sub.den);
  for (std::size_t i = 0; i < n; ++i) r *= scale;
  if (r.get_den() != 1) throw Error("lattice_index: not an integer index");
  return r.get_num();
}

/// Smallest multiplicatively closed lattice containing L (which must
/// contain the unit lattice and be bounded by the trace dual).
inline Lattice ring_generated(const TableOrder& A, Lattice L) {
  Lattice dual = trace_dual(A);
  if (!lattice_subset(unit_lattice(A), L))
    throw Error("ring_generated: L does not contain the unit lattice");
  if (!lattice_subset(L, dual))
    throw NotBoundedByDual("ring_generated: L is not contained in the trace dual");
  for (;;) {
    Lattice next = lattice_sum(L, lattice_product(L, L));
    if (!lattice_subset(next, dual))
      throw NotBoundedByDual("ring_generated: closure escaped the trace dual");
    if (next == L) return L;
    L = std::move(next);
  }
}

// ---------------------------------------------------------------------------
// Quotient presentations sup/sub
// ---------------------------------------------------------------------------

struct QuotientPresentation {
  std::vector<Int> divisors;  // elementary divisors, divisibility chain
  RatMat lifts;               // row i: coordinates in Q(A) of the generator with annihilator divisors[i]
  IntMat V;                   // SNF column transform: sup-basis coords t map to generator coords t·V
};

inline QuotientPresentation quotient_presentation(const Lattice& sub, const Lattice& sup) {
  const std::size_t n = sub.basis.rows;
  // X with X * Bsup = (den_sup/den_sub) * Bsub; integral iff sub is in sup
  RatMat rhs(n, n);
  Rat scale = Rat(sup.den) / Rat(sub.den);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rhs(j, i) = Rat(sub.basis(i, j)) * scale;
  RatMat Xt = solve_rational(sup.basis.transposed(), rhs);
  IntMat X(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (Xt(j, i).get_den() != 1) throw NotContained("quotient_presentation: sub not contained in sup");
      X(i, j) = Xt(j, i).get_num();
    }
  SnfResult s = snf(X);
  RatMat Vinv = inverse(s.V);
  // adapted basis of sup: rows of V^{-1} * Bsup / den_sup
  QuotientPresentation q;
  q.divisors = s.divisors;
  q.V = s.V;
  q.lifts = RatMat(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat acc;
      for (std::size_t k = 0; k < n; ++k) acc += Vinv(i, k) * Rat(sup.basis(k, j));
      q.lifts(i, j) = acc / Rat(sup.den);
    }
  return q;
}

// ---------------------------------------------------------------------------
// Viewing a ring lattice as an order in its own right
// ---------------------------------------------------------------------------

struct SubOrder {
  TableOrder order;       // structure constants on the lattice basis
  const TableOrder* ambient;
  Lattice embedding;      // the lattice inside the ambient order

  /// Ambient rational coordinates of the suborder basis element i.
  std::vector<Rat> basis_elem(std::size_t i) const { return lattice_row(embedding, i); }

  /// Lattice given in suborder coordinates, mapped to ambient coordinates.
  Lattice to_ambient(const Int& den, const IntMat& rows) const {
    RatMat out(rows.rows, rows.cols);
    for (std::size_t i = 0; i < rows.rows; ++i)
      for (std::size_t j = 0; j < rows.cols; ++j) {
        Rat acc;
        for (std::size_t k = 0; k < rows.cols; ++k)
          acc += Rat(rows(i, k)) * Rat(embedding.basis(k, j));
        out(i, j) = acc / (Rat(den) * Rat(embedding.den));
      }
    return lattice_from_rat_rows(*ambient, out);
  }
};

/// Interprets a multiplicatively closed lattice containing 1 as a TableOrder.
inline SubOrder as_suborder(const TableOrder& A, const Lattice& L) {
  const std::size_t n = A.n;
  RatMat Binv = inverse(L.basis);
  auto coords_in_L = [&](const std::vector<Rat>& x) {
    std::vector<Int> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      Rat acc;
      for (std::size_t j = 0; j < n; ++j) acc += x[j] * Binv(j, k);
      acc *= Rat(L.den);
      if (acc.get_den() != 1) throw Error("as_suborder: lattice is not multiplicatively closed");
      out[k] = acc.get_num();
    }
    return out;
  };
  std::vector<Int> tab(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::vector<Int> prod = coords_in_L(A.multiply(lattice_row(L, i), lattice_row(L, j)));
      for (std::size_t k = 0; k < n; ++k) {
        tab[(i * n + j) * n + k] = prod[k];
        tab[(j * n + i) * n + k] = prod[k];
      }
    }
  std::vector<Rat> one(n);
  for (std::size_t i = 0; i < n; ++i) one[i] = A.unit[i];
  std::vector<Int> unit = coords_in_L(one);
  SubOrder s{TableOrder::from_table(n, std::move(tab), std::move(unit)), &A, L};
  return s;
}

}  // namespace maxorder
