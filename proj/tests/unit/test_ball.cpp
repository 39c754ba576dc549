#include <doctest.h>

#include "siegel/ball.hpp"

#include <random>

using namespace siegel;

namespace {

mpq_class random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 999983);
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// A tight ball around exp(q) (resp. sin, cos) from mpfr at 2000 bits.
Ball reference(const mpq_class& q, int which) {
  mpfr_t x, lo, hi;
  mpfr_inits2(2000, x, lo, hi, (mpfr_ptr)0);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  if (which == 0) {
    mpfr_exp(lo, x, MPFR_RNDD);
    mpfr_exp(hi, x, MPFR_RNDU);
  } else if (which == 1) {
    mpfr_sin(lo, x, MPFR_RNDD);
    mpfr_sin(hi, x, MPFR_RNDU);
  } else {
    mpfr_cos(lo, x, MPFR_RNDD);
    mpfr_cos(hi, x, MPFR_RNDU);
  }
  // x itself carries a rounding error of 2^-2000 relative; widen slightly.
  mpfr_nextbelow(lo);
  mpfr_nextabove(hi);
  Ball b = Ball::from_endpoints(lo, hi, 2000);
  mpfr_clears(x, lo, hi, (mpfr_ptr)0);
  return b;
}

}  // namespace

TEST_CASE("ball arithmetic contains exact rational results") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    mpq_class p = random_rational(rng), q = random_rational(rng);
    for (Precision prec : {30, 64, 200}) {
      Ball a = Ball::from_mpq(p, prec), b = Ball::from_mpq(q, prec);
      CHECK((a + b).contains_mpq(p + q));
      CHECK((a - b).contains_mpq(p - q));
      CHECK((a * b).contains_mpq(p * q));
      if (q != 0) CHECK((a / b).contains_mpq(p / q));
      CHECK((-a).contains_mpq(-p));
    }
  }
}

TEST_CASE("transcendental functions enclose high-precision references") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    mpq_class q = random_rational(rng) / 50000;
    Ball a = Ball::from_mpq(q, 100), e(100), s(100), c(100);
    exp(e, a);
    sin_cos(s, c, a);
    CHECK(e.contains(reference(q, 0)));
    CHECK(s.contains(reference(q, 1)));
    CHECK(c.contains(reference(q, 2)));
  }
}

TEST_CASE("complex products and exp_2pi_i") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    mpq_class a = random_rational(rng), b = random_rational(rng), c = random_rational(rng), d = random_rational(rng);
    ComplexBall x(Ball::from_mpq(a, 80), Ball::from_mpq(b, 80));
    ComplexBall y(Ball::from_mpq(c, 80), Ball::from_mpq(d, 80));
    ComplexBall z = x * y;
    CHECK(z.re().contains_mpq(a * c - b * d));
    CHECK(z.im().contains_mpq(a * d + b * c));
    if (c != 0 || d != 0) {
      ComplexBall w = x / y;
      mpq_class n2 = c * c + d * d;
      CHECK(w.re().contains_mpq((a * c + b * d) / n2));
      CHECK(w.im().contains_mpq((b * c - a * d) / n2));
    }
  }
  // exp(2 pi i * (1/4 + i)) = i * exp(-2 pi)
  ComplexBall w(Ball::from_string("0.25", 128), Ball::from_int(1, 128));
  ComplexBall q = exp_2pi_i(w);
  CHECK(q.re().contains_zero());
  CHECK(q.im().is_positive());
  CHECK(q.im().mid_double() == doctest::Approx(0.0018674427317079893));
}

TEST_CASE("radius grows monotonically and precision refinement nests") {
  Ball x = Ball::from_string("1/3", 64);
  Ball y = Ball::from_string("1/3", 256);
  CHECK(x.contains(y));
  CHECK_FALSE(y.contains(x));
  Ball w = x;
  w.add_error(Mag::pow2(-10));
  CHECK(w.contains(x));
}

TEST_CASE("division by a ball containing zero is refused") {
  Ball a = Ball::from_int(1, 64), z = Ball::from_int(0, 64);
  z.add_error(Mag::pow2(-5));
  CHECK_THROWS_AS(a / z, CertificationError);
}

TEST_CASE("unique_integer snapping") {
  Ball b = Ball::from_string("41.9", 64);
  b.add_error(Mag::from_double(0.3));
  REQUIRE(b.unique_integer().has_value());
  CHECK(*b.unique_integer() == 42);
  Ball c = Ball::from_string("41.5", 64);
  c.add_error(Mag::from_double(0.1));
  CHECK_FALSE(c.unique_integer().has_value());
  Ball big = Ball::from_string("-5759681178477373721671849774.1", 200);
  big.add_error(Mag::from_double(0.3));
  REQUIRE(big.unique_integer().has_value());
  CHECK(big.unique_integer()->get_str() == "-5759681178477373721671849774");
}

TEST_CASE("Mag arithmetic rounds upward") {
  Mag a = Mag::from_double(0.1), b = Mag::from_double(0.2);
  CHECK((a + b).to_double() >= 0.30000000000000004);
  CHECK(Mag::pow2(-5000) < Mag::pow2(-4999));
  CHECK(Mag::expm1(Mag::from_double(1e-30)).to_double() >= 1e-30);
  CHECK(Mag::sub_lower(a, b).is_zero());
}
