#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "maxorder/order.hpp"

using namespace maxorder;

namespace {

Poly poly(std::initializer_list<long> coeffs_low_to_high) {
  Poly f;
  for (long c : coeffs_low_to_high) f.emplace_back(c);
  return f;
}

const Poly kExample1 = poly({2, 17, -20, -20, 1});             // x^4-20x^3-20x^2+17x+2
const Poly kExample2 = poly({-15625, -15625, -125, -625, 1});  // x^4-625x^3-125x^2-15625x-15625

std::vector<Rat> coords(std::initializer_list<Rat> v) { return std::vector<Rat>(v); }

TableOrder z_cross_z() {
  // componentwise product on basis (1,0), (0,1)
  std::vector<Int> tab(8);
  tab[(0 * 2 + 0) * 2 + 0] = 1;  // e0*e0 = e0
  tab[(1 * 2 + 1) * 2 + 1] = 1;  // e1*e1 = e1
  return TableOrder::from_table(2, tab, {Int(1), Int(1)});
}

}  // namespace

TEST_CASE("order_from_poly") {
  SECTION("x^2 - 5") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    CHECK(A.cc(1, 1, 0) == 5);  // alpha^2 = 5
    CHECK(A.cc(1, 1, 1) == 0);
  }
  SECTION("golden ratio order") {
    TableOrder A = TableOrder::from_poly(poly({-1, -1, 1}));
    CHECK(A.cc(1, 1, 0) == 1);  // alpha^2 = alpha + 1
    CHECK(A.cc(1, 1, 1) == 1);
  }
  SECTION("quartic accepted") {
    CHECK_NOTHROW(TableOrder::from_poly(kExample1));
  }
  SECTION("non-squarefree rejected") {
    CHECK_THROWS_AS(TableOrder::from_poly(poly({1, 2, 1})), NotSquarefree);
  }
}

TEST_CASE("order_from_table") {
  SECTION("round trip from polynomial table") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    TableOrder B = TableOrder::from_table(A.n, A.c, A.unit);
    CHECK(A.c == B.c);
    CHECK(A.discriminant() == B.discriminant());
  }
  SECTION("non-commutative table rejected") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    auto tab = A.c;
    tab[(0 * 2 + 1) * 2 + 0] += 1;  // e0*e1 != e1*e0
    CHECK_THROWS_AS(TableOrder::from_table(2, tab, A.unit), NotCommutative);
  }
  SECTION("Z x Z accepted with discriminant 1") {
    TableOrder A = z_cross_z();
    CHECK(A.discriminant() == 1);
    CHECK(A.trace_matrix() == IntMat::identity(2));
  }
}

TEST_CASE("element arithmetic and integrality") {
  SECTION("unit has char poly (t-1)^n") {
    TableOrder A = TableOrder::from_poly(kExample1);
    OrderElement one{&A, coords({1, 0, 0, 0})};
    QPoly cp = char_poly(one);
    // (t-1)^4 = t^4 - 4t^3 + 6t^2 - 4t + 1
    CHECK(cp == QPoly{1, -4, 6, -4, 1});
    CHECK(is_integral(one));
  }
  SECTION("known closure element is integral") {
    TableOrder A = TableOrder::from_poly(kExample1);
    OrderElement x{&A, coords({Rat(2, 7), 0, Rat(1, 7), Rat(3, 7)})};
    CHECK(is_integral(x));
  }
  SECTION("alpha/7 is not integral") {
    TableOrder A = TableOrder::from_poly(kExample1);
    OrderElement x{&A, coords({0, Rat(1, 7), 0, 0})};
    CHECK_FALSE(is_integral(x));
    QPoly cp = char_poly(x);
    CHECK(cp[0] == Rat(2, 2401));  // constant term 2/7^4
  }
}

TEST_CASE("trace matrix examples") {
  CHECK(TableOrder::from_poly(poly({-5, 0, 1})).trace_matrix() == IntMat({{2, 0}, {0, 10}}));
  CHECK(TableOrder::from_poly(poly({-1, -1, 1})).trace_matrix() == IntMat({{2, 1}, {1, 3}}));
  CHECK(z_cross_z().trace_matrix() == IntMat::identity(2));
}

TEST_CASE("discriminant examples") {
  CHECK(TableOrder::from_poly(poly({-5, 0, 1})).discriminant() == 20);
  CHECK(TableOrder::from_poly(kExample1).discriminant() == Int(2401) * 13 * 11897);
  Int d2 = TableOrder::from_poly(kExample2).discriminant();
  Int expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 5, 20);
  expected *= Int(13) * 457 * 8111;
  CHECK(abs(d2) == expected);
}

TEST_CASE("trace dual examples") {
  SECTION("Z[sqrt 5]") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    Lattice dual = trace_dual(A);
    CHECK(dual.den == 10);
    CHECK(dual.basis == IntMat({{5, 0}, {0, 1}}));
    CHECK(lattice_subset(unit_lattice(A), dual));
    CHECK(lattice_index(unit_lattice(A), dual) == 20);
  }
  SECTION("Z x Z is self-dual") {
    TableOrder A = z_cross_z();
    CHECK(trace_dual(A) == unit_lattice(A));
  }
  SECTION("golden ratio order has index-5 dual") {
    TableOrder A = TableOrder::from_poly(poly({-1, -1, 1}));
    CHECK(lattice_index(unit_lattice(A), trace_dual(A)) == 5);
  }
}

TEST_CASE("lattice arithmetic") {
  TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
  Lattice unit = unit_lattice(A);
  SECTION("colon(A, A) = A") {
    CHECK(colon(unit, unit) == unit);
    TableOrder B = TableOrder::from_poly(kExample1);
    CHECK(colon(unit_lattice(B), unit_lattice(B)) == unit_lattice(B));
  }
  SECTION("colon(m, m) for m = <2, 1+sqrt5>") {
    IntMat gens{{2, 0}, {1, 1}};
    Lattice m = make_lattice(A, 1, gens);
    Lattice mm = colon(m, m);
    CHECK(mm.den == 2);
    CHECK(mm.basis == IntMat({{1, 1}, {0, 2}}));
    // direct check: x * m in m for every basis x of colon(m, m)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(lattice_contains(m, A.multiply(lattice_row(mm, i), lattice_row(m, j))));
  }
  SECTION("sum with the dual gives the dual") {
    Lattice dual = trace_dual(A);
    CHECK(lattice_sum(unit, dual) == dual);
    TableOrder B = TableOrder::from_poly(kExample1);
    CHECK(lattice_sum(unit_lattice(B), trace_dual(B)) == trace_dual(B));
  }
}

TEST_CASE("ring_generated") {
  SECTION("an order is its own closure") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    CHECK(ring_generated(A, unit_lattice(A)) == unit_lattice(A));
  }
  SECTION("Z + Z(1+sqrt5)/2 is already a ring") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    RatMat rows(3, 2);
    rows(0, 0) = 1;
    rows(1, 1) = 1;
    rows(2, 0) = Rat(1, 2);
    rows(2, 1) = Rat(1, 2);
    Lattice L = lattice_from_rat_rows(A, rows);
    CHECK(ring_generated(A, L) == L);
  }
  SECTION("known closure of the quartic example is a ring") {
    TableOrder A = TableOrder::from_poly(kExample1);
    RatMat rows(5, 4);
    for (std::size_t i = 0; i < 4; ++i) rows(i, i) = 1;
    rows(4, 0) = Rat(2, 7);
    rows(4, 2) = Rat(1, 7);
    rows(4, 3) = Rat(3, 7);
    Lattice L = lattice_from_rat_rows(A, rows);
    CHECK(ring_generated(A, L) == L);
  }
}

TEST_CASE("quotient presentations") {
  SECTION("sub = sup gives trivial divisors") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    auto q = quotient_presentation(unit_lattice(A), unit_lattice(A));
    CHECK(q.divisors == std::vector<Int>{1, 1});
  }
  SECTION("Z[sqrt5] in its dual") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    auto q = quotient_presentation(unit_lattice(A), trace_dual(A));
    CHECK(q.divisors == std::vector<Int>{2, 10});
  }
  SECTION("example 1 in its dual") {
    TableOrder A = TableOrder::from_poly(kExample1);
    auto q = quotient_presentation(unit_lattice(A), trace_dual(A));
    std::vector<Int> nontrivial;
    for (const Int& d : q.divisors)
      if (d != 1) nontrivial.push_back(d);
    CHECK(nontrivial == std::vector<Int>{7, Int(343) * 13 * 11897});
  }
  SECTION("non-containment rejected") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    CHECK_THROWS_AS(quotient_presentation(trace_dual(A), unit_lattice(A)), NotContained);
  }
}

TEST_CASE("dual contains the order with index |disc|") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> dist(-20, 20);
  int done = 0;
  while (done < 20) {
    std::size_t deg = 2 + rng() % 4;
    Poly f(deg + 1);
    for (std::size_t i = 0; i < deg; ++i) f[i] = dist(rng);
    f[deg] = 1;
    if (!squarefree_over_q(f)) continue;
    TableOrder A = TableOrder::from_poly(f);
    Lattice dual = trace_dual(A);
    CHECK(lattice_subset(unit_lattice(A), dual));
    CHECK(lattice_index(unit_lattice(A), dual) == abs(A.discriminant()));
    ++done;
  }
}

TEST_CASE("closure lattices are integral rings") {
  TableOrder A = TableOrder::from_poly(kExample1);
  RatMat rows(5, 4);
  for (std::size_t i = 0; i < 4; ++i) rows(i, i) = 1;
  rows(4, 0) = Rat(2, 7);
  rows(4, 2) = Rat(1, 7);
  rows(4, 3) = Rat(3, 7);
  Lattice C = ring_generated(A, lattice_from_rat_rows(A, rows));
  CHECK(lattice_subset(lattice_product(C, C), C));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(is_integral(OrderElement{&A, lattice_row(C, i)}));
  // discriminant transfer disc(A) = [C:A]^2 disc(C)
  SubOrder S = as_suborder(A, C);
  Int idx = lattice_index(unit_lattice(A), C);
  CHECK(A.discriminant() == idx * idx * S.order.discriminant());
}

TEST_CASE("trace formula at squarefree primes") {
  // For p not dividing disc, the trace of x on A/pA equals the sum over the
  // irreducible factors g of f mod p of the residue-field traces.
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> dist(-9, 9);
  const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
  int done = 0;
  while (done < 20) {
    std::size_t deg = 3 + rng() % 2;
    Poly f(deg + 1);
    for (std::size_t i = 0; i < deg; ++i) f[i] = dist(rng);
    f[deg] = 1;
    if (!squarefree_over_q(f)) continue;
    TableOrder A = TableOrder::from_poly(f);
    Int p = primes[done];
    if (A.discriminant() % p == 0) {
      ++done;
      continue;
    }
    // random element x in A
    std::vector<Rat> xv(deg);
    for (auto& c : xv) c = dist(rng);
    OrderElement x{&A, xv};
    Rat tr = A.trace(xv);
    // residue-field traces: trace of multiplication by x mod (p, g)
    Int total = 0;
    Poly xpoly(deg);
    for (std::size_t i = 0; i < deg; ++i) xpoly[i] = xv[i].get_num();
    trim(xpoly);
    for (const auto& [g, mult] : factor_mod_p(f, p)) {
      REQUIRE(mult == 1);
      std::size_t d = g.size() - 1;
      // trace of mult-by-x on F_p[t]/(g): sum of traces of coefficient shifts
      Int t = 0;
      for (std::size_t i = 0; i < d; ++i) {
        // column i: x * t^i mod g; diagonal entry = coeff of t^i
        Poly xi{Int(0)};
        xi.resize(i + 1);
        xi[i] = 1;
        Poly prod = pmod(pmul(xpoly, xi, p), g, p);
        if (prod.size() > i) t += prod[i];
      }
      total += t;
    }
    Int lhs;
    mpz_fdiv_r(lhs.get_mpz_t(), tr.get_num_mpz_t(), p.get_mpz_t());
    Int rhs;
    mpz_fdiv_r(rhs.get_mpz_t(), total.get_mpz_t(), p.get_mpz_t());
    CHECK(lhs == rhs);
    ++done;
  }
}
