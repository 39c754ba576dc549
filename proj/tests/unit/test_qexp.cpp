#include <doctest.h>

#include "siegel/qexp.hpp"

#include <random>
#include <sstream>

using namespace siegel;

namespace {

TruncatedSeries random_series(std::mt19937_64& rng, long weight, long T) {
  std::uniform_int_distribution<int> coin(0, 2), val(-20, 20), den(1, 4);
  std::vector<SeriesTerm> terms;
  for (long t = 0; t <= T; ++t) {
    for (const auto& n : enumerate_indices(t)) {
      if (coin(rng) == 0) continue;
      terms.push_back({n, mpq_class(val(rng), den(rng))});
      terms.back().coeff.canonicalize();
    }
  }
  return TruncatedSeries(weight, T, std::move(terms));
}

// Brute-force count of PSD [a,b,c] with a + c = t.
long brute_count(long t) {
  long n = 0;
  for (long a = 0; a <= t; ++a) {
    for (long b = -2 * t; b <= 2 * t; ++b) {
      if (4 * a * (t - a) - b * b >= 0) ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("enumerate_indices small traces") {
  auto t0 = enumerate_indices(0);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0] == FourierIndex{0, 0, 0});
  auto t1 = enumerate_indices(1);
  REQUIRE(t1.size() == 2);
  CHECK(t1[0] == FourierIndex{0, 0, 1});
  CHECK(t1[1] == FourierIndex{1, 0, 0});
  CHECK(enumerate_indices(2).size() == 7);
}

TEST_CASE("enumerate_indices agrees with brute force and the closed form") {
  for (long t = 0; t <= 40; ++t) {
    auto idx = enumerate_indices(t);
    CHECK(static_cast<long>(idx.size()) == brute_count(t));
    CHECK(static_cast<long>(idx.size()) == index_count(t));
    if (t >= 1) CHECK(static_cast<long>(idx.size()) <= 6 * t * t);
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
    for (const auto& n : idx) CHECK(n.is_valid());
  }
}

TEST_CASE("FourierIndex basics") {
  FourierIndex n{2, -2, 3};
  CHECK(n.trace() == 5);
  CHECK(n.disc() == 20);
  CHECK(n.content() == 1);
  CHECK(FourierIndex{0, 0, 0}.content() == 0);
  CHECK(FourierIndex{4, 2, 6}.content() == 2);
}

TEST_CASE("series constructor validates its input") {
  CHECK_THROWS_AS(TruncatedSeries(4, 2, {{FourierIndex{1, 3, 1}, mpq_class(1)}}), SeriesFormatError);
  CHECK_THROWS_AS(TruncatedSeries(4, 1, {{FourierIndex{1, 0, 1}, mpq_class(1)}}), SeriesFormatError);
  CHECK_THROWS_AS(TruncatedSeries(4, 2, {{FourierIndex{1, 0, 0}, mpq_class(1)}, {FourierIndex{0, 0, 1}, mpq_class(1)}}),
                  SeriesFormatError);
  TruncatedSeries f(4, 2, {{FourierIndex{0, 0, 1}, mpq_class(0)}});
  CHECK(f.size() == 0);
  CHECK(f.coefficient({0, 0, 1}) == 0);
  CHECK_THROWS_AS(f.coefficient({0, 0, 3}), std::out_of_range);
}

TEST_CASE("series_add identities") {
  std::mt19937_64 rng(5);
  auto f = random_series(rng, 10, 4);
  TruncatedSeries zero(10, 3);
  CHECK(series_add(f, zero) == f.truncated(3));
  CHECK(series_add(f, f.scaled(-1)).size() == 0);
  CHECK_THROWS_AS(series_add(f, TruncatedSeries(12, 4)), std::invalid_argument);
  auto g = series_add(f, f);
  for (const auto& t : f.terms()) CHECK(g.coefficient(t.index) == 2 * t.coeff);
}

TEST_CASE("series_mul ring laws on random series") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = random_series(rng, 4, 5), g = random_series(rng, 6, 5), h = random_series(rng, 10, 4);
    CHECK(series_mul(f, TruncatedSeries::unit(5)) == f);
    CHECK(series_mul(f, g) == series_mul(g, f).truncated(5));
    auto lhs = series_mul(series_mul(f, g), h);
    auto rhs = series_mul(f, series_mul(g, h));
    CHECK(lhs == rhs);
    CHECK(lhs.weight() == 20);
    CHECK(lhs.trace_bound() == 4);
  }
}

TEST_CASE("series_mul matches brute-force convolution") {
  std::mt19937_64 rng(13);
  auto f = random_series(rng, 2, 4), g = random_series(rng, 2, 4);
  auto fg = series_mul(f, g);
  for (long t = 0; t <= 4; ++t) {
    for (const auto& n : enumerate_indices(t)) {
      mpq_class s = 0;
      for (long t1 = 0; t1 <= t; ++t1) {
        for (const auto& n1 : enumerate_indices(t1)) {
          FourierIndex n2{n.a - n1.a, n.b - n1.b, n.c - n1.c};
          if (!n2.is_valid()) continue;
          s += f.coefficient(n1) * g.coefficient(n2);
        }
      }
      CHECK(fg.coefficient(n) == s);
    }
  }
}

TEST_CASE("diagonal restriction is multiplicative") {
  std::mt19937_64 rng(17);
  auto f = random_series(rng, 4, 6), g = random_series(rng, 4, 6);
  auto df = diagonal_restriction(f), dg = diagonal_restriction(g), dfg = diagonal_restriction(series_mul(f, g));
  for (long a = 0; a <= 6; ++a) {
    for (long c = 0; a + c <= 6; ++c) {
      mpq_class s = 0;
      for (auto& [k1, v1] : df) {
        auto it = dg.find({a - k1.first, c - k1.second});
        if (it != dg.end()) s += v1 * it->second;
      }
      auto it = dfg.find({a, c});
      CHECK((it == dfg.end() ? mpq_class(0) : it->second) == s);
    }
  }
  auto one = diagonal_restriction(TruncatedSeries::unit(0));
  REQUIRE(one.size() == 1);
  CHECK(one.at({0, 0}) == 1);
}

TEST_CASE("cache format round-trips bit-exactly") {
  std::mt19937_64 rng(21);
  auto f = random_series(rng, 12, 6);
  std::ostringstream out;
  write_series(out, f);
  std::istringstream in(out.str());
  auto g = read_series(in);
  CHECK(g == f);
  std::ostringstream again;
  write_series(again, g);
  CHECK(again.str() == out.str());
}

TEST_CASE("malformed cache data is rejected") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_series(in);
  };
  CHECK_THROWS_AS(parse("SIEGELQEXP 2\n4 1 0\n"), SeriesFormatError);
  CHECK_THROWS_AS(parse("SIEGELQEXP 1\n4 1 2\n0 0 0 1/1\n"), SeriesFormatError);
  CHECK_THROWS_AS(parse("SIEGELQEXP 1\n4 1 1\n0 0 0 x\n"), SeriesFormatError);
  CHECK_THROWS_AS(parse("SIEGELQEXP 1\n4 1 2\n1 0 0 1/1\n0 0 1 1/1\n"), SeriesFormatError);
  CHECK_THROWS_AS(parse("SIEGELQEXP 1\n4 1 1\n0 0 0 0/1\n"), SeriesFormatError);
  CHECK(parse("SIEGELQEXP 1\n4 1 1\n0 0 0 1/1\n").coefficient({0, 0, 0}) == 1);
}
