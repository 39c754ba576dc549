#include "siegel/verify.hpp"

#include "siegel/arith.hpp"
#include "siegel/bounds.hpp"
#include "siegel/eigenform.hpp"
#include "siegel/engine.hpp"
#include "siegel/evaluate.hpp"
#include "siegel/hecke.hpp"
#include "siegel/point.hpp"

#include <complex>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace siegel {

namespace {

CheckResult run(const std::string& name, const std::function<std::string()>& body) {
  CheckResult r{name, false, ""};
  try {
    r.detail = body();
    r.ok = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

std::string check_cosets() {
  for (long p : {2L, 3L, 5L}) {
    for (HeckeOp op : {HeckeOp::Tp, HeckeOp::Tp2_1}) {
      auto reps = coset_reps(op, p);
      std::size_t want = op == HeckeOp::Tp ? p * p * p + p * p + p + 1 : p * p * p * p + p * p * p + p * p + p;
      if (reps.size() != want) return op_name(op) + " degree mismatch at p=" + std::to_string(p);
      std::set<Mat4> hnf;
      long sim = op == HeckeOp::Tp ? p : p * p;
      for (const auto& r : reps) {
        if (similitude_of(r.m) != sim) return "similitude mismatch";
        hnf.insert(row_hnf(r.m));
      }
      if (hnf.size() != reps.size()) return "repeated coset";
      auto partner = conjugate_partners(reps);
      for (std::size_t i = 0; i < reps.size(); ++i) {
        if (partner[partner[i]] != i) return "conjugate pairing is not an involution";
      }
    }
  }
  return "";
}

std::string check_restrictions(GeneratorCache& cache) {
  const long T = 8;
  auto e4 = elliptic_e4(T), e6 = elliptic_e6(T), delta = elliptic_delta(T);
  auto d4 = diagonal_restriction(cache.get(GeneratorId::E4, T));
  auto d6 = diagonal_restriction(cache.get(GeneratorId::E6, T));
  auto d10 = diagonal_restriction(cache.get(GeneratorId::Chi10, T));
  auto d12 = diagonal_restriction(cache.get(GeneratorId::Chi12, T));
  if (!d10.empty()) return "chi10 does not vanish on the diagonal";
  auto at = [](const auto& m, long a, long c) {
    auto it = m.find({a, c});
    return it == m.end() ? mpq_class(0) : it->second;
  };
  for (long a = 0; a <= T; ++a) {
    for (long c = 0; a + c <= T; ++c) {
      if (at(d4, a, c) != e4[a] * e4[c]) return "E4 restriction";
      if (at(d6, a, c) != e6[a] * e6[c]) return "E6 restriction";
      if (at(d12, a, c) != 12 * delta[a] * delta[c]) return "chi12 restriction";
    }
  }
  return "";
}

std::string check_truncation_table() {
  Ball a = alpha(imaginary_point("5", "6", "1", 256));
  const long expected[4][4] = {{2, 2, 2, 2}, {3, 3, 3, 3}, {10, 10, 10, 11}, {86, 86, 87, 87}};
  const double digits[4] = {10, 20, 100, 1000};
  for (int row = 0; row < 4; ++row) {
    for (int g = 0; g < 4; ++g) {
      if (truncation_bound(generator_bound(kGenerators[g]), a, digits[row]) != expected[row][g]) {
        return "row " + std::to_string(row) + " generator " + generator_name(kGenerators[g]);
      }
    }
  }
  return "";
}

std::string check_evaluation(GeneratorCache& cache, int threads) {
  const long T = 5;
  const Precision prec = 128;
  std::vector<NumericSeries> ns;
  for (auto id : kGenerators) ns.emplace_back(cache.get(id, T), prec);
  SeriesSet set = {&ns[0], &ns[1], &ns[2], &ns[3]};
  EvalPoint Z = standard_point("2.7", prec);
  std::vector<EvalPoint> pts;
  for (const auto& r : tp_reps(2)) pts.push_back(act_on_point(r, Z).w);
  auto ref = evaluate_batch_reference(set, pts, T);
  auto par = evaluate_batch(set, pts, T, threads);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int g = 0; g < 4; ++g) {
      if (ref[i][g].key() != par[i][g].key()) return "batch differs from the serial reference";
      auto d = evaluate_direct(cache.get(kGenerators[g], T), pts[i], T, prec);
      if (!d.overlaps(ref[i][g])) return "Horner and direct summation disagree";
    }
  }
  return "";
}

std::string check_quotient_lemma() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    std::complex<double> x(u(rng), u(rng)), y(u(rng) + 2, u(rng)), ex(u(rng), u(rng)), ey(u(rng), u(rng));
    ex *= 1e-3;
    ey *= 1e-3;
    std::complex<double> xa = x - ex, ya = y - ey, za = xa / ya;
    std::complex<double> lhs = x / y - za, rhs = (ex - ey * za) / (ya + ey);
    if (std::abs(lhs - rhs) > 1e-12 * (1 + std::abs(lhs))) return "lemma identity fails";
  }
  return "";
}

std::string check_catalog() {
  for (const auto& f : builtin_catalog()) {
    validate(f);
    if (!(parse_eigenform(serialize_eigenform(f)) == f)) return "round trip of " + f.name;
  }
  return "";
}

std::string check_degree(GeneratorCache& cache) {
  EigenformSpec one;
  one.name = "one";
  one.weight = 0;
  one.terms.push_back({{mpq_class(1)}, {0, 0, 0, 0}});
  Engine engine(cache, EngineConfig{});
  FormEvaluator F(one, 64);
  for (long p : {2L, 3L}) {
    auto reps = tp_reps(p);
    auto img = engine.hecke_image_at(F, standard_point("2.7", 64), reps, Mag::from_double(1e-10), 0);
    if (!img.value.re().contains_mpq(mpq_class(static_cast<long>(reps.size())))) return "degree of T_p";
  }
  return "";
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(GeneratorCache& cache, int threads) {
  return {
      run("coset lists", check_cosets),
      run("diagonal restrictions", [&] { return check_restrictions(cache); }),
      run("truncation table", check_truncation_table),
      run("evaluation paths", [&] { return check_evaluation(cache, threads); }),
      run("quotient lemma", check_quotient_lemma),
      run("eigenform catalog", check_catalog),
      run("hecke degree", [&] { return check_degree(cache); }),
  };
}

}  // namespace siegel
