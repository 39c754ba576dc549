#include <doctest.h>

#include "siegel/evaluate.hpp"
#include "siegel/hecke.hpp"
#include "siegel/igusa.hpp"

#include <random>

using namespace siegel;

namespace {

HTable& htab() {
  static HTable h;
  return h;
}

TruncatedSeries random_series(std::mt19937_64& rng, long T) {
  std::uniform_int_distribution<int> coin(0, 3), val(-50, 50), den(1, 3);
  std::vector<SeriesTerm> terms;
  for (long t = 0; t <= T; ++t) {
    for (const auto& n : enumerate_indices(t)) {
      if (coin(rng) == 0) continue;
      terms.push_back({n, mpq_class(val(rng), den(rng))});
      terms.back().coeff.canonicalize();
    }
  }
  return TruncatedSeries(0, T, std::move(terms));
}

EvalPoint random_point(std::mt19937_64& rng, Precision prec) {
  std::uniform_int_distribution<int> re(-50, 50), im(5, 40), off(-4, 4);
  auto dec = [](int v) { return std::to_string(v) + "/20"; };
  EvalPoint Z{ComplexBall(prec), ComplexBall(prec), ComplexBall(prec)};
  int y1 = im(rng), y2 = im(rng), y3 = off(rng);
  if (4 * y3 * y3 >= y1 * y2) y3 = 0;
  Z.z1 = ComplexBall(Ball::from_string(dec(re(rng)), prec), Ball::from_string(dec(y1), prec));
  Z.z2 = ComplexBall(Ball::from_string(dec(re(rng)), prec), Ball::from_string(dec(y2), prec));
  Z.z3 = ComplexBall(Ball::from_string(dec(re(rng)), prec), Ball::from_string(dec(y3), prec));
  REQUIRE(Z.is_valid());
  return Z;
}

// Elliptic E4 at tau = i y from its divisor-sum expansion with an explicit tail bound.
Ball elliptic_e4_at(const std::string& y, Precision prec) {
  long n = 60;
  auto c = elliptic_e4(n);
  Ball q(prec), sum = Ball::from_int(0, prec);
  Ball x = Ball::pi(prec) * Ball::from_string(y, prec);
  mul_2si(x, x, 1);
  exp(q, -x);
  Ball pw = Ball::from_int(1, prec);
  for (long m = 0; m <= n; ++m) {
    sum = sum + Ball::from_mpz(c[m], prec) * pw;
    pw = pw * q;
  }
  // |240 sigma_3(m)| < 240 m^4 and q < 1/2 give a tail below 2^-100 here
  sum.add_error(Mag::pow2(-150));
  return sum;
}

bool bitwise_equal(const ComplexBall& x, const ComplexBall& y) { return x.key() == y.key(); }

}  // namespace

TEST_CASE("constant series evaluates to exactly one") {
  NumericSeries one(TruncatedSeries::unit(4), 128);
  auto v = evaluate_series(one, standard_point("2.7", 128), 4);
  CHECK(v.re().contains_mpq(1));
  CHECK(v.re().is_exact());
  CHECK(v.im().contains_mpq(0));
}

TEST_CASE("chi10 Horner evaluation overlaps the direct sum") {
  auto chi10 = igusa_generator(GeneratorId::Chi10, 3, htab());
  EvalPoint Z = imaginary_point("5", "6", "1", 200);
  auto h = evaluate_series(NumericSeries(chi10, 200), Z, 3);
  auto d = evaluate_direct(chi10, Z, 3, 200);
  CHECK(h.overlaps(d));
  CHECK(h.im().contains_zero());
  CHECK(h.radius().to_double() < 1e-40);
}

TEST_CASE("E4 on the diagonal factors into elliptic values") {
  auto e4 = igusa_generator(GeneratorId::E4, 10, htab());
  EvalPoint Z = imaginary_point("5", "6", "0", 256);
  auto v = evaluate_series(NumericSeries(e4, 256), Z, 10);
  Ball expect = elliptic_e4_at("5", 256) * elliptic_e4_at("6", 256);
  // the trace-10 truncation drops terms of size about exp(-2 pi 5 * 11)
  Ball diff = v.re() - expect;
  mpfr_t hi;
  mpfr_init2(hi, 64);
  abs(diff, diff);
  diff.upper(hi);
  CHECK(mpfr_get_d(hi, MPFR_RNDU) < 1e-20);
  mpfr_clear(hi);
  CHECK(v.im().contains_zero());
}

TEST_CASE("randomized Horner versus direct summation") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> tb(0, 6);
    long T = tb(rng);
    auto f = random_series(rng, 6);
    EvalPoint Z = random_point(rng, 128);
    NumericSeries nf(f, 128);
    auto h = evaluate_series(nf, Z, T);
    auto d = evaluate_direct(f, Z, T, 128);
    CHECK(h.overlaps(d));
    // refinement: four times the precision lands inside the coarse box
    auto fine = evaluate_series(NumericSeries(f, 512), Z.with_prec(512), T);
    CHECK(h.contains(fine));
  }
}

TEST_CASE("purely imaginary points give real values for real series") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_series(rng, 5);
    auto v = evaluate_series(NumericSeries(f, 128), standard_point("1.5", 128), 5);
    CHECK(v.im().contains_zero());
  }
}

TEST_CASE("batch kernel is bit-identical to the serial reference for any thread count") {
  long T = 6;
  std::array<TruncatedSeries, 4> gens = {igusa_generator(GeneratorId::E4, T, htab()),
                                         igusa_generator(GeneratorId::E6, T, htab()),
                                         igusa_generator(GeneratorId::Chi10, T, htab()),
                                         igusa_generator(GeneratorId::Chi12, T, htab())};
  std::vector<NumericSeries> ns;
  for (const auto& g : gens) ns.emplace_back(g, 160);
  SeriesSet set = {&ns[0], &ns[1], &ns[2], &ns[3]};
  EvalPoint Z = standard_point("2.7", 160);
  std::vector<EvalPoint> pts;
  for (const auto& r : tp_reps(3)) pts.push_back(act_on_point(r, Z).w);
  auto ref = evaluate_batch_reference(set, pts, T);
  BatchStats st;
  auto b1 = evaluate_batch(set, pts, T, 1, &st);
  auto b4 = evaluate_batch(set, pts, T, 4);
  CHECK(st.points == 40);
  CHECK(st.distinct_q3 < st.points);
  CHECK(st.distinct_q2q3 < st.points);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int g = 0; g < 4; ++g) {
      CHECK(bitwise_equal(ref[i][g], b1[i][g]));
      CHECK(bitwise_equal(b1[i][g], b4[i][g]));
    }
  }
  // a subset of generators
  SeriesSet partial = {nullptr, nullptr, &ns[2], nullptr};
  auto p = evaluate_batch(partial, pts, T, 2);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(bitwise_equal(p[i][2], ref[i][2]));
  CHECK_THROWS_AS(evaluate_batch(set, pts, T + 1, 1), std::invalid_argument);
}

TEST_CASE("trace-T shell equals the difference of consecutive truncations") {
  long T = 6;
  std::array<TruncatedSeries, 2> gens = {igusa_generator(GeneratorId::E4, T, htab()),
                                         igusa_generator(GeneratorId::Chi10, T, htab())};
  std::vector<NumericSeries> ns;
  for (const auto& g : gens) ns.emplace_back(g, 160);
  SeriesSet set = {&ns[0], nullptr, &ns[1], nullptr};
  EvalPoint Z = standard_point("2.7", 160);
  std::vector<EvalPoint> pts;
  for (const auto& r : tp_reps(2)) pts.push_back(act_on_point(r, Z).w);
  std::vector<GeneratorValues> shell;
  auto full = evaluate_batch(set, pts, T, 2, nullptr, &shell);
  auto lower = evaluate_batch(set, pts, T - 1, 1);
  auto plain = evaluate_batch(set, pts, T, 1);
  REQUIRE(shell.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int g : {0, 2}) {
      CHECK(bitwise_equal(full[i][g], plain[i][g]));
      CHECK((lower[i][g] + shell[i][g]).overlaps(full[i][g]));
      auto d = evaluate_direct(gens[g == 0 ? 0 : 1], pts[i], T, 160) -
               evaluate_direct(gens[g == 0 ? 0 : 1], pts[i], T - 1, 160);
      CHECK(d.overlaps(shell[i][g]));
    }
  }
}
