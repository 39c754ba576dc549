#include <doctest.h>

#include "siegel/eigenform.hpp"
#include "siegel/engine.hpp"
#include "siegel/igusa.hpp"

#include <algorithm>

using namespace siegel;

namespace {

// Elements of Q[x]/(poly) as coefficient vectors of length deg.
struct Field {
  std::vector<mpq_class> poly;  // constant term first

  std::size_t deg() const { return poly.size() - 1; }

  std::vector<mpq_class> reduce(std::vector<mpq_class> a) const {
    const mpq_class lead = poly.back();
    for (std::size_t i = a.size(); i-- > deg();) {
      if (a[i] == 0) continue;
      mpq_class f = a[i] / lead;
      for (std::size_t j = 0; j <= deg(); ++j) a[i - deg() + j] -= f * poly[j];
    }
    a.resize(deg());
    return a;
  }
  std::vector<mpq_class> mul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) const {
    std::vector<mpq_class> c(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return reduce(c);
  }
};

mpq_class coefficient(const TruncatedSeries& f, long a, long b, long c) {
  if (a < 0 || c < 0 || 4 * a * c - b * b < 0) return 0;
  // GL2(Z) reduction to |b| <= a <= c keeps the trace minimal
  for (;;) {
    if (a > c) std::swap(a, c);
    if (a == 0) {
      b = 0;
      break;
    }
    if (b <= a && b >= -a) break;
    long n = b >= 0 ? (b + a) / (2 * a) : -((-b + a) / (2 * a));
    c = c - b * n + a * n * n;
    b -= 2 * n * a;
  }
  return f.coefficient({a, b, c});
}

// a(T(p) F; [a, b, c]) for F of weight k
mpq_class hecke_coefficient(const TruncatedSeries& f, long p, long k, long a, long b, long c) {
  mpz_class pk2, p2k3;
  mpz_ui_pow_ui(pk2.get_mpz_t(), p, k - 2);
  mpz_ui_pow_ui(p2k3.get_mpz_t(), p, 2 * k - 3);
  mpq_class s = coefficient(f, p * a, p * b, p * c);
  if (a % p == 0 && b % p == 0 && c % p == 0) s += p2k3 * coefficient(f, a / p, b / p, c / p);
  mpq_class mid = c % p == 0 ? coefficient(f, p * a, b, c / p) : mpq_class(0);
  for (long j = 0; j < p; ++j) {
    long n = a + b * j + c * j * j;
    if (n % p == 0) mid += coefficient(f, n / p, b + 2 * c * j, p * c);
  }
  return s + pk2 * mid;
}

}  // namespace

TEST_CASE("Fourier-coefficient T(2) recovers known eigenvalues") {
  GeneratorCache cache;
  const long T = 8;
  auto chi10 = cache.get(GeneratorId::Chi10, T);
  for (long t = 0; t <= T / 2; ++t) {
    for (const auto& n : enumerate_indices(t)) {
      CHECK(hecke_coefficient(chi10, 2, 10, n.a, n.b, n.c) == 240 * chi10.coefficient(n));
    }
  }
}

TEST_CASE("weight 28 document is a T(2) eigenform with eigenvalue its field generator") {
  auto spec = load_eigenform(SIEGEL_TEST_DATA_DIR "/ups28.json");
  REQUIRE(spec.field.has_value());
  CHECK(spec.weight == 28);
  Field K;
  for (const auto& c : spec.field->poly) K.poly.push_back(mpq_class(c));
  REQUIRE(K.deg() == 3);

  const long t0 = 4, T = 2 * t0;
  GeneratorCache cache;
  std::array<TruncatedSeries, 4> g = {cache.get(GeneratorId::E4, T), cache.get(GeneratorId::E6, T),
                                      cache.get(GeneratorId::Chi10, T), cache.get(GeneratorId::Chi12, T)};
  std::vector<TruncatedSeries> mono;
  for (const auto& term : spec.terms) {
    TruncatedSeries s = TruncatedSeries::unit(T);
    for (int j = 0; j < 4; ++j)
      for (int e = 0; e < term.expo[j]; ++e) s = series_mul(s, g[j]);
    mono.push_back(std::move(s));
  }
  std::vector<std::vector<mpq_class>> coeff;
  for (const auto& term : spec.terms) {
    std::vector<mpq_class> c = term.coeff;
    c.resize(K.deg(), 0);
    coeff.push_back(c);
  }
  const std::vector<mpq_class> alpha = {0, 1, 0};
  int nonzero = 0;
  for (long t = 0; t <= t0; ++t) {
    for (const auto& n : enumerate_indices(t)) {
      std::vector<mpq_class> F(K.deg(), 0), TF(K.deg(), 0);
      for (std::size_t i = 0; i < mono.size(); ++i) {
        mpq_class a = mono[i].coefficient(n);
        mpq_class ta = hecke_coefficient(mono[i], 2, 28, n.a, n.b, n.c);
        for (std::size_t d = 0; d < K.deg(); ++d) {
          F[d] += a * coeff[i][d];
          TF[d] += ta * coeff[i][d];
        }
      }
      CHECK(TF == K.mul(alpha, F));
      if (std::any_of(F.begin(), F.end(), [](const mpq_class& x) { return x != 0; })) ++nonzero;
      if (t < 2) CHECK(std::all_of(F.begin(), F.end(), [](const mpq_class& x) { return x == 0; }));
    }
  }
  CHECK(nonzero > 10);
  // normalized so that a([1, 0, 1]) = 1
  std::vector<mpq_class> first(K.deg(), 0);
  for (std::size_t i = 0; i < mono.size(); ++i) {
    for (std::size_t d = 0; d < K.deg(); ++d) first[d] += mono[i].coefficient({1, 0, 1}) * coeff[i][d];
  }
  CHECK(first == std::vector<mpq_class>{1, 0, 0});
}

TEST_CASE("numerical lambda_2 of the weight 28 document is its selected root") {
  auto spec = load_eigenform(SIEGEL_TEST_DATA_DIR "/ups28.json");
  GeneratorCache cache;
  Engine engine(cache, EngineConfig{});
  auto r = engine.eigenvalue(spec, 2, HeckeOp::Tp, 6);
  auto root = refine_root(*spec.field, 128);
  CHECK(r.normalized.overlaps(root));
  CHECK(r.normalized.re().rad().to_double() < 1e-6);
}
