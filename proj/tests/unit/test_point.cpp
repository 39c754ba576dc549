#include <doctest.h>

#include <cmath>

#include "siegel/point.hpp"

using namespace siegel;

TEST_CASE("delta and alpha") {
  auto d = delta(imaginary_point("2", "2", "0", 128));
  CHECK(d.contains_mpq(2));
  CHECK(d.rad().to_double() < 1e-30);

  auto a = alpha(imaginary_point("5", "6", "1", 128));
  CHECK(a.mid_double() == doctest::Approx(27.5327).epsilon(1e-3 / 27.5));
  // closed form: (11 - sqrt(5)) / 2 * 2 pi
  CHECK(std::fabs(a.mid_double() - (11 - std::sqrt(5.0)) * M_PI) < 1e-12);
}

TEST_CASE("delta at the default family lies below y11") {
  auto Z = standard_point("2.7", 128);
  auto d = delta(Z);
  CHECK(d.is_positive());
  Ball y = Ball::from_string("2.7", 128);
  CHECK((y - d).is_positive());
  // characteristic polynomial x^2 - (y1 + y2) x + (y1 y2 - 1) vanishes at delta
  Ball y2 = Ball::from_string("3.7", 128);
  Ball r = d * d - (y + y2) * d + (y * y2 - Ball::from_int(1, 128));
  CHECK(r.contains_zero());
}

TEST_CASE("invalid points are rejected") {
  CHECK_THROWS_AS(imaginary_point("1", "1", "2", 64), CertificationError);
  CHECK_THROWS_AS(imaginary_point("-1", "3", "0", 64), CertificationError);
  CHECK(standard_point("2.7", 64).is_purely_imaginary());
}
