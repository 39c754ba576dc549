#include <doctest.h>

#include "siegel/bounds.hpp"
#include "siegel/point.hpp"

#include <cmath>

using namespace siegel;

namespace {

Ball table_alpha() { return alpha(imaginary_point("5", "6", "1", 256)); }

// The same inequality in long double, as an independent check of the scan.
bool holds(const CoefficientBound& b, long double a, long T, double h) {
  if (T <= (b.d + 2) / a) return false;
  long double lhs = std::log(6.0L * b.C * (b.d + 3)) - std::log(a) - a * T + (b.d + 2) * std::log((long double)T);
  return lhs < -h * std::log(10.0L);
}

}  // namespace

TEST_CASE("bound constants reproduce the eps = 2 envelope") {
  double a9 = bound_constant_a(2, 9) / 236;
  double a11 = bound_constant_a(2, 11) / 311;
  CHECK(a9 < 220439);
  CHECK(a9 > 220438);
  CHECK(a11 < 287248);
  CHECK(a11 > 287247);
  CHECK(bound_constant_a(2, 9) < bound_constant_a(2, 10));
  CHECK(bound_constant_a(2, 10) < bound_constant_a(2, 11));
  CHECK_THROWS_AS(bound_constant_a(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_constant_a(0, 9), std::invalid_argument);
}

TEST_CASE("generator bounds") {
  CHECK(generator_bound(GeneratorId::E4).C == 19230);
  CHECK(generator_bound(GeneratorId::E4).d == 5);
  CHECK(generator_bound(GeneratorId::E6).d == 9);
  CHECK(generator_bound(GeneratorId::Chi10).C == 220439);
  CHECK(generator_bound(GeneratorId::Chi12).d == 13);
}

TEST_CASE("truncation table") {
  Ball a = table_alpha();
  const long expected[4][4] = {{2, 2, 2, 2}, {3, 3, 3, 3}, {10, 10, 10, 11}, {86, 86, 87, 87}};
  const double digits[4] = {10, 20, 100, 1000};
  for (int row = 0; row < 4; ++row) {
    for (int g = 0; g < 4; ++g) {
      CHECK_MESSAGE(truncation_bound(generator_bound(kGenerators[g]), a, digits[row]) == expected[row][g],
                    "row " << row << " generator " << g);
    }
  }
}

TEST_CASE("truncation bound is minimal and monotone") {
  long double a_ld = (11.0L - std::sqrt(5.0L)) * 3.14159265358979323846L;
  for (auto id : kGenerators) {
    auto b = generator_bound(id);
    for (double h : {5.0, 10.0, 30.0, 60.0}) {
      for (const char* y : {"1", "2.7", "5"}) {
        Ball a = alpha(standard_point(y, 128));
        long T = truncation_bound(b, a, h);
        long double al = a.mid_double();
        CHECK(holds(b, al, T, h));
        CHECK_FALSE(holds(b, al, T - 1, h));
        CHECK(truncation_bound(b, a, h + 5) >= T);
      }
    }
    Ball small = alpha(standard_point("1", 128)), large = alpha(standard_point("5", 128));
    CHECK(truncation_bound(b, large, 20) <= truncation_bound(b, small, 20));
    CHECK(holds(b, a_ld, truncation_bound(b, table_alpha(), 20), 20));
  }
}

TEST_CASE("truncation envelope") {
  Ball a = table_alpha();
  auto b = generator_bound(GeneratorId::E4);
  long T = truncation_bound(b, a, 20);
  Mag e = truncation_envelope(b, a, T);
  CHECK(e.to_double() < 1e-20);
  CHECK(truncation_envelope(b, a, T + 1) < e);
  CHECK(truncation_envelope(b, a, 0).is_inf());
}
