#include <doctest.h>

#include "siegel/arith.hpp"

#include <sstream>

using namespace siegel;

namespace {

// Hurwitz class number by counting reduced forms ax^2 + bxy + cy^2 of
// discriminant -N, weighting x^2 + y^2 and x^2 + xy + y^2 multiples.
mpq_class hurwitz_by_forms(long N) {
  mpq_class h = 0;
  for (long a = 1; 3 * a * a <= N; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b + N;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (a == c && b == 0) h += mpq_class(1, 2);
      else if (a == b && b == c) h += mpq_class(1, 3);
      else h += 1;
    }
  }
  return h;
}

}  // namespace

TEST_CASE("Kronecker symbol small table") {
  CHECK(kronecker(-3, 1) == 1);
  CHECK(kronecker(-3, 2) == -1);
  CHECK(kronecker(-3, 3) == 0);
  CHECK(kronecker(-4, 3) == -1);
  CHECK(kronecker(-4, 2) == 0);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(8, 3) == -1);
  CHECK(kronecker(-7, 2) == 1);
  // multiplicativity in n
  for (long D : {-3L, -4L, -7L, -8L, 5L, 12L, -23L}) {
    for (long m = 1; m < 30; ++m) {
      for (long n = 1; n < 30; ++n) CHECK(kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n));
    }
  }
}

TEST_CASE("fundamental discriminants and splitting") {
  CHECK(is_fundamental_discriminant(1));
  CHECK(is_fundamental_discriminant(-3));
  CHECK(is_fundamental_discriminant(-4));
  CHECK(is_fundamental_discriminant(-8));
  CHECK_FALSE(is_fundamental_discriminant(-12));
  CHECK_FALSE(is_fundamental_discriminant(-16));
  CHECK(split_discriminant(3) == std::make_pair(-3L, 1L));
  CHECK(split_discriminant(12) == std::make_pair(-3L, 2L));
  CHECK(split_discriminant(16) == std::make_pair(-4L, 2L));
  CHECK(split_discriminant(108) == std::make_pair(-3L, 6L));
  for (long N = 3; N < 2000; ++N) {
    if (N % 4 == 1 || N % 4 == 2) continue;
    auto [D, f] = split_discriminant(N);
    CHECK(D * f * f == -N);
    CHECK(is_fundamental_discriminant(D));
  }
}

TEST_CASE("Bernoulli numbers") {
  auto B = bernoulli_numbers(12);
  CHECK(B[0] == 1);
  CHECK(B[1] == mpq_class(-1, 2));
  CHECK(B[2] == mpq_class(1, 6));
  CHECK(B[3] == 0);
  CHECK(B[6] == mpq_class(1, 42));
  CHECK(B[12] == mpq_class(-691, 2730));
  CHECK(zeta_one_minus(4) == mpq_class(1, 120));
  CHECK(zeta_one_minus(6) == mpq_class(-1, 252));
}

TEST_CASE("generalized Bernoulli numbers") {
  CHECK(generalized_bernoulli(-3, 1) == mpq_class(-1, 3));
  CHECK(generalized_bernoulli(1, 6) == mpq_class(1, 42));
  CHECK(generalized_bernoulli(-4, 1) == mpq_class(-1, 2));
  CHECK(generalized_bernoulli(-3, 3) == mpq_class(2, 3));
  CHECK_THROWS_AS(generalized_bernoulli(-12, 1), std::invalid_argument);
  // B_{n,chi} vanishes when chi(-1) != (-1)^n.
  CHECK(generalized_bernoulli(-7, 2) == 0);
  CHECK(generalized_bernoulli(5, 3) == 0);
  CHECK(generalized_bernoulli(-4, 20) == 0);
  // n = 60 goes through the multiprecision power sums.
  CHECK(generalized_bernoulli(-4, 60) == 0);
  CHECK(generalized_bernoulli(-4, 61) != 0);
}

TEST_CASE("Cohen H values") {
  CHECK(cohen_h(3, 5) == 0);
  CHECK(cohen_h(5, 6) == 0);
  CHECK(cohen_h(3, 0) == mpq_class(-1, 252));
  CHECK(cohen_h(3, 3) == mpq_class(-2, 9));
  CHECK(cohen_h(3, 4) == mpq_class(-1, 2));
  CHECK(cohen_h(1, 3) == mpq_class(1, 3));
  CHECK(cohen_h(1, 4) == mpq_class(1, 2));
}

TEST_CASE("H(1, N) equals the Hurwitz class number from reduced forms") {
  for (long N = 3; N <= 600; ++N) {
    if (N % 4 == 1 || N % 4 == 2) continue;
    CHECK_MESSAGE(cohen_h(1, N) == hurwitz_by_forms(N), "N = " << N);
  }
}

TEST_CASE("H table memoizes and round-trips") {
  HTable h;
  h.fill(3, 40);
  CHECK(h.get(3, 3) == mpq_class(-2, 9));
  CHECK(h.extent(3) == 40);
  CHECK(h.extent(5) == -1);
  std::ostringstream out;
  h.write(out);
  HTable g;
  std::istringstream in(out.str());
  g.read(in);
  CHECK(g.size() == h.size());
  CHECK(g.extent(3) == 40);
  std::istringstream bad("COHENH 1\n3 4 abc\n");
  CHECK_THROWS(g.read(bad));
}

TEST_CASE("elliptic expansions") {
  auto e4 = elliptic_e4(10), e6 = elliptic_e6(10), d = elliptic_delta(30);
  CHECK(e4[1] == 240);
  CHECK(e4[2] == 2160);
  CHECK(e6[1] == -504);
  CHECK(d[0] == 0);
  CHECK(d[1] == 1);
  CHECK(d[2] == -24);
  CHECK(d[3] == 252);
  CHECK(d[11] == 534612);
  // Delta = (E4^3 - E6^2) / 1728 from the Eisenstein side.
  long n = 30;
  auto a4 = elliptic_e4(n), a6 = elliptic_e6(n);
  auto cube = elliptic_mul(elliptic_mul(a4, a4, n), a4, n);
  auto sq = elliptic_mul(a6, a6, n);
  for (long m = 0; m <= n; ++m) CHECK(cube[m] - sq[m] == 1728 * d[m]);
}
