#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "maxorder/intmat.hpp"

using namespace maxorder;

namespace {

IntMat diag(std::initializer_list<long> d) {
  IntMat m(d.size(), d.size());
  std::size_t i = 0;
  for (long v : d) m(i, i) = v, ++i;
  return m;
}

IntMat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
  IntMat m(r, c);
  std::uniform_int_distribution<long> dist(-bound, bound);
  for (auto& e : m.a) e = dist(rng);
  return m;
}

bool is_hnf(const IntMat& H) {
  std::size_t last_pivot = 0;
  bool seen_zero_row = false;
  for (std::size_t i = 0; i < H.rows; ++i) {
    std::size_t j = 0;
    while (j < H.cols && H(i, j) == 0) ++j;
    if (j == H.cols) {
      seen_zero_row = true;
      continue;
    }
    if (seen_zero_row) return false;
    if (H(i, j) <= 0) return false;
    if (i > 0 && j <= last_pivot) return false;
    for (std::size_t k = 0; k < i; ++k)
      if (H(k, j) < 0 || H(k, j) >= H(i, j)) return false;
    last_pivot = j;
  }
  return true;
}

}  // namespace

TEST_CASE("hnf on spec examples") {
  SECTION("already in HNF") {
    IntMat m = diag({2, 10});
    auto [H, U] = hnf(m);
    CHECK(H == m);
    CHECK(U == IntMat::identity(2));
  }
  SECTION("permutation of identity") {
    IntMat m{{0, 1}, {1, 0}};
    auto [H, U] = hnf(m);
    CHECK(H == IntMat::identity(2));
  }
  SECTION("hand row-reduction") {
    IntMat m{{2, 4}, {4, 2}};
    auto [H, U] = hnf(m);
    CHECK(H == IntMat({{2, 4}, {0, 6}}));
    CHECK(mul(U, m) == H);
    CHECK(abs(det(H)) == 12);
  }
}

TEST_CASE("snf on spec examples") {
  SECTION("already diagonal") {
    auto s = snf(diag({2, 10}));
    CHECK(s.divisors == std::vector<Int>{2, 10});
  }
  SECTION("gcd pivot") {
    auto s = snf(IntMat{{2, 4}, {4, 2}});
    CHECK(s.divisors == std::vector<Int>{2, 6});
  }
  SECTION("unimodular") {
    auto s = snf(IntMat{{0, 1}, {1, 0}});
    CHECK(s.divisors == std::vector<Int>{1, 1});
  }
}

TEST_CASE("solve_rational on spec examples") {
  SECTION("identity") {
    RatMat t(2, 1);
    t(0, 0) = Rat(3, 7);
    t(1, 0) = Rat(-2, 5);
    CHECK(solve_rational(IntMat::identity(2), t) == t);
  }
  SECTION("diagonal inverse") {
    RatMat x = solve_rational(diag({2, 10}), RatMat::identity(2));
    CHECK(x(0, 0) == Rat(1, 2));
    CHECK(x(1, 1) == Rat(1, 10));
    CHECK(x(0, 1) == 0);
  }
  SECTION("adjugate over determinant") {
    RatMat x = solve_rational(IntMat{{2, 1}, {1, 3}}, RatMat::identity(2));
    CHECK(x(0, 0) == Rat(3, 5));
    CHECK(x(0, 1) == Rat(-1, 5));
    CHECK(x(1, 0) == Rat(-1, 5));
    CHECK(x(1, 1) == Rat(2, 5));
  }
  SECTION("singular matrix rejected") {
    CHECK_THROWS_AS(solve_rational(IntMat{{1, 2}, {2, 4}}, RatMat::identity(2)), SingularMatrix);
  }
}

TEST_CASE("hnf is idempotent and preserves |det|") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng() % 5;
    IntMat m = random_matrix(rng, n, n, 50);
    auto [H, U] = hnf(m);
    CHECK(is_hnf(H));
    CHECK(mul(U, m) == H);
    CHECK(abs(det(U)) == 1);
    auto [H2, U2] = hnf(H);
    CHECK(H2 == H);
    Int d = det(m);
    if (d != 0) CHECK(abs(det(H)) == abs(d));
  }
}

TEST_CASE("snf randomized invariants") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    IntMat m = random_matrix(rng, r, c, 30);
    auto s = snf(m);
    CHECK(abs(det(s.U)) == 1);
    CHECK(abs(det(s.V)) == 1);
    IntMat D = mul(mul(s.U, m), s.V);
    for (std::size_t i = 0; i < D.rows; ++i)
      for (std::size_t j = 0; j < D.cols; ++j)
        CHECK(D(i, j) == (i == j && i < s.divisors.size() ? s.divisors[i] : 0));
    for (std::size_t i = 0; i + 1 < s.divisors.size(); ++i) {
      if (s.divisors[i + 1] == 0)
        CHECK((s.divisors[i] == 0 || true));
      else
        CHECK(s.divisors[i + 1] % s.divisors[i] == 0);
      if (s.divisors[i] == 0) CHECK(s.divisors[i + 1] == 0);
    }
    if (r == c) {
      Int d = det(m);
      Int prod = 1;
      for (const Int& x : s.divisors) prod *= x;
      CHECK(abs(prod) == abs(d));
    }
  }
}

TEST_CASE("kernel spans exactly the left null space") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = 2 + rng() % 5, c = 1 + rng() % 4;
    IntMat m = random_matrix(rng, r, c, 10);
    IntMat K = kernel(m);
    IntMat z = mul(K, m);
    for (const Int& e : z.a) CHECK(e == 0);
    // rank-nullity
    auto s = snf(m);
    std::size_t rank = 0;
    for (const Int& d : s.divisors)
      if (d != 0) ++rank;
    CHECK(K.rows == r - rank);
  }
}
