#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "maxorder/errors.hpp"

namespace maxorder {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense matrix of arbitrary-precision integers, row-major.
struct IntMat {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<Int> a;

  IntMat() = default;
  IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  IntMat(std::initializer_list<std::initializer_list<long>> init) {
    rows = init.size();
    cols = rows == 0 ? 0 : init.begin()->size();
    a.reserve(rows * cols);
    for (const auto& row : init)
      for (long v : row) a.emplace_back(v);
  }

  Int& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static IntMat identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  bool operator==(const IntMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  // row(i) += c * row(j)
  void add_row(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols; ++k) (*this)(i, k) += c * (*this)(j, k);
  }

  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols; ++k) (*this)(i, k) = -(*this)(i, k);
  }

  IntMat transposed() const {
    IntMat t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
};

inline IntMat mul(const IntMat& x, const IntMat& y) {
  IntMat z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

/// Dense matrix of rationals (always stored reduced by mpq_class).
struct RatMat {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<Rat> a;

  RatMat() = default;
  RatMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  explicit RatMat(const IntMat& m) : rows(m.rows), cols(m.cols), a(m.rows * m.cols) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = m.a[i];
  }

  Rat& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static RatMat identity(std::size_t n) {
    RatMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  bool operator==(const RatMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline RatMat mul(const RatMat& x, const RatMat& y) {
  RatMat z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

struct HnfResult {
  IntMat H;  // row-style Hermite normal form
  IntMat U;  // unimodular, U * M = H
};

/// Row-style Hermite normal form: pivots positive, entries above each
/// pivot reduced into [0, pivot), zero rows at the bottom.
inline HnfResult hnf(const IntMat& M) {
  IntMat H = M;
  IntMat U = IntMat::identity(M.rows);
  std::size_t r = 0;
  for (std::size_t j = 0; j < H.cols && r < H.rows; ++j) {
    // clear column j below row r down to one pivot via gcd steps
    for (;;) {
      std::size_t best = H.rows;
      for (std::size_t i = r; i < H.rows; ++i)
        if (H(i, j) != 0 && (best == H.rows || mpz_cmpabs(H(i, j).get_mpz_t(), H(best, j).get_mpz_t()) < 0))
          best = i;
      if (best == H.rows) break;  // column clear
      H.swap_rows(r, best);
      U.swap_rows(r, best);
      bool reduced_all = true;
      for (std::size_t i = r + 1; i < H.rows; ++i) {
        if (H(i, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(r, j).get_mpz_t());
        H.add_row(i, r, -q);
        U.add_row(i, r, -q);
        if (H(i, j) != 0) reduced_all = false;
      }
      if (reduced_all) break;
    }
    if (r < H.rows && H(r, j) != 0) {
      if (H(r, j) < 0) {
        H.negate_row(r);
        U.negate_row(r);
      }
      for (std::size_t i = 0; i < r; ++i) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(r, j).get_mpz_t());
        if (q != 0) {
          H.add_row(i, r, -q);
          U.add_row(i, r, -q);
        }
      }
      ++r;
    }
  }
  return {std::move(H), std::move(U)};
}

struct SnfResult {
  std::vector<Int> divisors;  // d_i | d_{i+1}, zeros last
  IntMat U;                   // unimodular
  IntMat V;                   // unimodular, U * M * V = diag(divisors)
};

inline SnfResult snf(const IntMat& M) {
  IntMat S = M;
  IntMat U = IntMat::identity(M.rows);
  IntMat V = IntMat::identity(M.cols);
  const std::size_t n = std::min(M.rows, M.cols);

  auto swap_cols = [&](IntMat& X, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < X.rows; ++k) std::swap(X(k, i), X(k, j));
  };
  // replace rows (or columns) t and i by unimodular combinations so that the
  // pivot becomes gcd(pivot, other) and the other entry becomes zero
  auto bezout_rows = [&](std::size_t t, std::size_t i, std::size_t piv_col) {
    const Int a = S(t, piv_col), b = S(i, piv_col);
    if (b % a == 0) {  // plain elimination keeps the pivot column intact
      const Int q = b / a;
      S.add_row(i, t, -q);
      U.add_row(i, t, -q);
      return;
    }
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const Int s = a / g, w = b / g;  // det [[u,v],[-w,s]] = 1
    for (IntMat* X : {&S, &U}) {
      for (std::size_t j = 0; j < X->cols; ++j) {
        Int xt = (*X)(t, j), xi = (*X)(i, j);
        (*X)(t, j) = u * xt + v * xi;
        (*X)(i, j) = s * xi - w * xt;
      }
    }
  };
  auto add_col = [](IntMat& X, std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < X.rows; ++k) X(k, i) += c * X(k, j);
  };
  auto bezout_cols = [&](std::size_t t, std::size_t j, std::size_t piv_row) {
    const Int a = S(piv_row, t), b = S(piv_row, j);
    if (b % a == 0) {
      const Int q = b / a;
      add_col(S, j, t, -q);
      add_col(V, j, t, -q);
      return;
    }
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const Int s = a / g, w = b / g;
    for (IntMat* X : {&S, &V}) {
      for (std::size_t k = 0; k < X->rows; ++k) {
        Int xt = (*X)(k, t), xj = (*X)(k, j);
        (*X)(k, t) = u * xt + v * xj;
        (*X)(k, j) = s * xj - w * xt;
      }
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    // move a nonzero entry of minimal absolute value into the pivot slot
    std::size_t pi = S.rows, pj = 0;
    for (std::size_t i = t; i < S.rows; ++i)
      for (std::size_t j = t; j < S.cols; ++j)
        if (S(i, j) != 0 &&
            (pi == S.rows || mpz_cmpabs(S(i, j).get_mpz_t(), S(pi, pj).get_mpz_t()) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi == S.rows) break;  // trailing block is zero
    S.swap_rows(t, pi);
    U.swap_rows(t, pi);
    swap_cols(S, t, pj);
    swap_cols(V, t, pj);

    for (;;) {
      for (std::size_t i = t + 1; i < S.rows; ++i)
        if (S(i, t) != 0) bezout_rows(t, i, t);
      bool dirty = false;
      for (std::size_t j = t + 1; j < S.cols; ++j)
        if (S(t, j) != 0) {
          if (S(t, j) % S(t, t) != 0) dirty = true;  // mixing refills column t
          bezout_cols(t, j, t);
        }
      if (dirty) continue;  // column ops may have refilled column t
      // row t and column t are clear; enforce divisibility on the block
      bool divides = true;
      for (std::size_t i = t + 1; i < S.rows && divides; ++i)
        for (std::size_t j = t + 1; j < S.cols && divides; ++j)
          if (S(i, j) % S(t, t) != 0) {
            S.add_row(t, i, 1);
            U.add_row(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (S(t, t) < 0) {
      S.negate_row(t);
      U.negate_row(t);
    }
  }

  SnfResult res;
  res.divisors.resize(n);
  for (std::size_t t = 0; t < n; ++t) res.divisors[t] = S(t, t);
  res.U = std::move(U);
  res.V = std::move(V);
  return res;
}

/// Determinant via fraction-free (Bareiss) elimination.
inline Int det(const IntMat& M) {
  if (M.rows != M.cols) throw SingularMatrix("det: matrix not square");
  const std::size_t n = M.rows;
  if (n == 0) return 1;
  IntMat A = M;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && A(s, k) == 0) ++s;
      if (s == n) return 0;
      A.swap_rows(k, s);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(A(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = A(k, k);
  }
  return sign > 0 ? A(n - 1, n - 1) : -A(n - 1, n - 1);
}

/// Exact solution X of M * X = target for square nonsingular M.
inline RatMat solve_rational(const IntMat& M, const RatMat& target) {
  if (M.rows != M.cols) throw SingularMatrix("solve_rational: matrix not square");
  const std::size_t n = M.rows;
  RatMat A(M);
  RatMat X = target;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && A(piv, k) == 0) ++piv;
    if (piv == n) throw SingularMatrix("solve_rational: singular matrix");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
    if (piv != k)
      for (std::size_t j = 0; j < X.cols; ++j) std::swap(X(k, j), X(piv, j));
    Rat inv = 1 / A(k, k);
    for (std::size_t j = k; j < n; ++j) A(k, j) *= inv;
    for (std::size_t j = 0; j < X.cols; ++j) X(k, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || A(i, k) == 0) continue;
      Rat c = A(i, k);
      for (std::size_t j = k; j < n; ++j) A(i, j) -= c * A(k, j);
      for (std::size_t j = 0; j < X.cols; ++j) X(i, j) -= c * X(k, j);
    }
  }
  return X;
}

inline RatMat inverse(const IntMat& M) {
  return solve_rational(M, RatMat::identity(M.rows));
}

/// Basis (rows) of the left integer kernel {x : x * M = 0}.
inline IntMat kernel(const IntMat& M) {
  HnfResult h = hnf(M);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < h.H.rows; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < h.H.cols; ++j)
      if (h.H(i, j) != 0) {
        zero = false;
        break;
      }
    if (!zero) ++rank;
  }
  IntMat K(M.rows - rank, M.rows);
  for (std::size_t i = rank; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.rows; ++j) K(i - rank, j) = h.U(i, j);
  return K;
}

}  // namespace maxorder
