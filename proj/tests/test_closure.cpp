#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "maxorder/closure.hpp"

using namespace maxorder;

namespace {

Poly poly(std::initializer_list<long> coeffs_low_to_high) {
  Poly f;
  for (long c : coeffs_low_to_high) f.emplace_back(c);
  return f;
}

const Poly kExample1 = poly({2, 17, -20, -20, 1});
const Poly kExample2 = poly({-15625, -15625, -125, -625, 1});

Lattice example1_closure(const TableOrder& A) {
  RatMat rows(5, 4);
  for (std::size_t i = 0; i < 4; ++i) rows(i, i) = 1;
  rows(4, 0) = Rat(2, 7);
  rows(4, 2) = Rat(1, 7);
  rows(4, 3) = Rat(3, 7);
  return lattice_from_rat_rows(A, rows);
}

Lattice example2_closure(const TableOrder& A) {
  RatMat rows(4, 4);
  rows(0, 0) = 1;
  rows(1, 1) = Rat(1, 25);
  rows(1, 3) = Rat(3, 3125);
  rows(2, 2) = Rat(1, 125);
  rows(3, 3) = Rat(1, 625);
  return lattice_from_rat_rows(A, rows);
}

Lattice golden_ratio_ring(const TableOrder& A) {
  RatMat rows(2, 2);
  rows(0, 0) = 1;
  rows(1, 0) = Rat(1, 2);
  rows(1, 1) = Rat(1, 2);
  return lattice_from_rat_rows(A, rows);
}

}  // namespace

TEST_CASE("maximality_test_tame") {
  TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
  CHECK(maximality_test_tame(form_from_quotient(A, 5).M));
  TableOrder B = TableOrder::from_poly(kExample1);
  CHECK_FALSE(maximality_test_tame(form_from_quotient(B, 7).M));
  CHECK(maximality_test_tame(form_from_quotient(B, 3).M));  // zero module
}

TEST_CASE("idealizer") {
  SECTION("of pA for a p-maximal order is A") {
    TableOrder A = TableOrder::from_poly(poly({-1, -1, 1}));
    IntMat rows(2, 2);
    rows(0, 0) = 3;
    rows(1, 1) = 3;
    CHECK(idealizer(make_lattice(A, 1, rows)) == unit_lattice(A));
  }
  SECTION("of the radical of Z[sqrt5] at 2") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    CHECK(idealizer(radical_mod_p(A, 2)) == golden_ratio_ring(A));
  }
  SECTION("of the radical of the quartic example at 7") {
    TableOrder A = TableOrder::from_poly(kExample1);
    Lattice en = idealizer(radical_mod_p(A, 7));
    CHECK(lattice_index(unit_lattice(A), en) == 7);
    std::vector<Rat> x{Rat(2, 7), 0, Rat(1, 7), Rat(3, 7)};
    CHECK(lattice_contains(en, x));
  }
}

TEST_CASE("p_closure_oracle") {
  SECTION("Z[sqrt5] at 2") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    CHECK(p_closure_oracle(A, 2) == golden_ratio_ring(A));
  }
  SECTION("maximal orders are fixpoints") {
    TableOrder A = TableOrder::from_poly(poly({-1, -1, 1}));
    for (long p : {2, 3, 5, 7}) CHECK(p_closure_oracle(A, p) == unit_lattice(A));
  }
  SECTION("example 2 at 5 matches the worked basis") {
    TableOrder A = TableOrder::from_poly(kExample2);
    Lattice C = p_closure_oracle(A, 5);
    CHECK(C == example2_closure(A));
    CHECK(lattice_index(unit_lattice(A), C) == pow_int(5, 9));
  }
  SECTION("fixpoint property") {
    TableOrder A = TableOrder::from_poly(kExample1);
    Lattice C = p_closure_oracle(A, 7);
    SubOrder S = as_suborder(A, C);
    Lattice J = S.to_ambient(1, radical_mod_p(S.order, 7).basis);
    CHECK(idealizer(J) == C);
  }
}

TEST_CASE("lr_enlargement") {
  SECTION("example 1 at 7") {
    TableOrder A = TableOrder::from_poly(kExample1);
    LrEnlargement en = lr_enlargement(A, 7);
    CHECK(en.ring_check);
    CHECK(en.lattice == example1_closure(A));
  }
  SECTION("example 2 at 5") {
    TableOrder A = TableOrder::from_poly(kExample2);
    LrEnlargement en = lr_enlargement(A, 5);
    CHECK(en.ring_check);
    CHECK(en.lattice == example2_closure(A));
  }
  SECTION("Z[sqrt5] at 2: lower root is zero, closure is missed") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    LrEnlargement en = lr_enlargement(A, 2);
    CHECK(en.ring_check);
    CHECK(en.lattice == unit_lattice(A));
    CHECK(en.lattice != p_closure_oracle(A, 2));
  }
}

TEST_CASE("theorem3_condition") {
  CHECK(theorem3_condition(7, {1, 3}, 1));
  CHECK_FALSE(theorem3_condition(3, {1, 1, 1, 1}, 1));
  CHECK(theorem3_condition(5, {2, 2, 3, 3}, 2));
  CHECK_FALSE(theorem3_condition(7, {3, 7, 10}, 1));  // three exponents >= 2
  CHECK(theorem3_condition(5, {}, 1));
  CHECK_FALSE(theorem3_condition(5, {2, 2}, 1));  // n(2) = 2 not in {0, d}
}

TEST_CASE("certify_closure_at_p") {
  SECTION("example 1 at 7: TheoremNano, certified, index 7") {
    TableOrder A = TableOrder::from_poly(kExample1);
    PrimeReport r = certify_closure_at_p(A, 7);
    CHECK(r.tame == Tame::ProvedByDimension);
    CHECK(r.anisotropy == Anisotropy::QuasiAnisotropic);
    CHECK(r.method == Method::TheoremNano);
    CHECK(r.certified);
    CHECK(r.index_p == 7);
    CHECK(r.closure_p == example1_closure(A));
  }
  SECTION("example 1 at 13: already maximal") {
    TableOrder A = TableOrder::from_poly(kExample1);
    PrimeReport r = certify_closure_at_p(A, 13);
    CHECK(r.method == Method::AlreadyMaximal);
    CHECK(r.certified);
    CHECK(r.index_p == 1);
  }
  SECTION("Z[sqrt5] at 2: oracle fallback, not certified") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    PrimeReport r = certify_closure_at_p(A, 2);
    CHECK(r.method == Method::OracleFallback);
    CHECK_FALSE(r.certified);
    CHECK(r.index_p == 2);
    CHECK(r.closure_p == golden_ratio_ring(A));
  }
  SECTION("example 2 at 5: honest undetermined anisotropy, oracle fallback") {
    TableOrder A = TableOrder::from_poly(kExample2);
    PrimeReport r = certify_closure_at_p(A, 5);
    CHECK(r.anisotropy == Anisotropy::Undetermined);
    CHECK(r.method == Method::OracleFallback);
    CHECK_FALSE(r.certified);
    CHECK(r.index_p == pow_int(5, 9));
    CHECK(r.closure_p == example2_closure(A));
  }
}

TEST_CASE("glue_closure") {
  SECTION("example 1") {
    TableOrder A = TableOrder::from_poly(kExample1);
    std::vector<PrimeReport> reports{certify_closure_at_p(A, 7)};
    CHECK(glue_closure(A, reports, {Int(7)}) == example1_closure(A));
  }
  SECTION("maximal order glues to itself") {
    TableOrder A = TableOrder::from_poly(poly({-1, -1, 1}));
    CHECK(glue_closure(A, {}, {}) == unit_lattice(A));
  }
  SECTION("missing cover is an error") {
    TableOrder A = TableOrder::from_poly(kExample1);
    CHECK_THROWS_AS(glue_closure(A, {}, {Int(7)}), IncompleteCover);
  }
  SECTION("discriminant transfer after gluing") {
    TableOrder A = TableOrder::from_poly(poly({-5, 0, 1}));
    Lattice C = glue_closure(A, {certify_closure_at_p(A, 2)}, {Int(2)});
    SubOrder S = as_suborder(A, C);
    Int idx = lattice_index(unit_lattice(A), C);
    CHECK(A.discriminant() == idx * idx * S.order.discriminant());
    CHECK(S.order.discriminant() == 5);
  }
}

TEST_CASE("exponent criterion both directions on a random corpus") {
  // for p > deg f with p^2 | disc: p divides the closure index iff p^2
  // divides the exponent of the dual quotient
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<long> dist(-20, 20);
  int done = 0;
  while (done < 40) {
    std::size_t deg = 3 + rng() % 3;
    Poly f(deg + 1);
    for (std::size_t i = 0; i < deg; ++i) f[i] = dist(rng);
    f[deg] = 1;
    if (!squarefree_over_q(f)) continue;
    TableOrder A = TableOrder::from_poly(f);
    Int disc = abs(A.discriminant());
    bool used = false;
    for (long pl : {5, 7, 11, 13, 17, 19}) {
      Int p(pl);
      if (p <= static_cast<long>(deg)) continue;
      if (disc % (p * p) != 0) continue;
      used = true;
      FormWithLifts B = form_from_quotient(A, p);
      bool exp_sq = !B.M.exps.empty() && B.M.exps.back() >= 2;
      Lattice C = p_closure_oracle(A, p);
      bool enlarged = lattice_index(unit_lattice(A), C) % p == 0;
      CHECK(enlarged == exp_sq);
    }
    if (used) ++done;
  }
}

TEST_CASE("local idealizer quotient equals the torsion of pB") {
  // when A/pA is local with maximal ideal m, A tame and not p-maximal:
  // idealizer(m)/A = (pB)[m] inside B_p
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<long> dist(-20, 20);
  int done = 0;
  while (done < 25) {
    std::size_t deg = 4;
    Poly f(deg + 1);
    for (std::size_t i = 0; i < deg; ++i) f[i] = dist(rng);
    f[deg] = 1;
    if (!squarefree_over_q(f)) continue;
    TableOrder A = TableOrder::from_poly(f);
    Int disc = abs(A.discriminant());
    for (long pl : {5, 7, 11, 13}) {
      Int p(pl);
      if (disc % (p * p) != 0) continue;
      FormWithLifts B = form_from_quotient(A, p);
      if (B.M.exps.empty() || B.M.exps.back() < 2) continue;
      SplitData sd = split_maximal_ideals(A, p, B);
      if (sd.ideal_count() != 1 || !tame_dim_test(sd)) continue;
      // m = radical lattice; its idealizer modulo A inside B
      Lattice m = radical_mod_p(A, p);
      Lattice ide = idealizer(m);
      // submodule of B generated by the idealizer basis
      IntMat rows(A.n, B.M.rank());
      for (std::size_t i = 0; i < A.n; ++i) {
        std::vector<Int> c = B.coords(lattice_row(ide, i));
        for (std::size_t j = 0; j < B.M.rank(); ++j) rows(i, j) = c[j];
      }
      Submodule lhs = submodule_from_rows(B.M, rows);
      // (pB)[m]: elements of pB killed by m; m acts through p-part coords.
      // (pB)[m] = {x in pB : J·x ⊆ A} where J is the radical lattice; build
      // by scanning generators of pB against the radical action
      Submodule pB = module_scale(B.M, 1);
      // condition matrix: for generator g of pB (lift w), row per radical
      // basis element r: coords of r·w must vanish
      const std::size_t rk = B.M.rank();
      // solve over the module: x = sum over generators of pB with integer
      // coefficients t; require coords(r · lift(x)) = 0 for all r
      // assemble map T: t -> concatenated coords of r_i · (t · pB-lifts)
      std::vector<std::vector<Rat>> pb_lifts;
      for (std::size_t i = 0; i < rk; ++i) {
        std::vector<Rat> w(A.n);
        for (std::size_t j = 0; j < A.n; ++j) w[j] = Rat(p) * B.lifts(i, j);
        pb_lifts.push_back(std::move(w));
      }
      IntMat T(rk, A.n * rk);
      for (std::size_t i = 0; i < rk; ++i)
        for (std::size_t a = 0; a < A.n; ++a) {
          std::vector<Int> c = B.coords(A.multiply(lattice_row(m, a), pb_lifts[i]));
          for (std::size_t j = 0; j < rk; ++j) T(i, a * rk + j) = c[j];
        }
      // kernel of t -> t·T modulo the generator orders of B: stack order rows
      std::size_t extra = A.n * rk;
      IntMat stack(rk + extra, extra);
      for (std::size_t i = 0; i < rk; ++i)
        for (std::size_t j = 0; j < extra; ++j) stack(i, j) = T(i, j);
      for (std::size_t a = 0; a < A.n; ++a)
        for (std::size_t j = 0; j < rk; ++j)
          stack(rk + a * rk + j, a * rk + j) = pow_int(p, B.M.exps[j]);
      IntMat K = kernel(stack);
      IntMat sol(K.rows, rk);
      for (std::size_t i = 0; i < K.rows; ++i)
        for (std::size_t j = 0; j < rk; ++j) sol(i, j) = K(i, j);
      // x = t · (p·generators): coordinates p·t in the standard basis
      IntMat xrows(sol.rows, rk);
      for (std::size_t i = 0; i < sol.rows; ++i)
        for (std::size_t j = 0; j < rk; ++j) xrows(i, j) = p * sol(i, j);
      Submodule rhs = submodule_from_rows(B.M, xrows);
      rhs = submodule_intersect(B.M, rhs, pB);
      CHECK(lhs == rhs);
      ++done;
      break;
    }
  }
}
