#include <doctest.h>

#include "siegel/hecke.hpp"

#include <set>

using namespace siegel;

namespace {

// alpha beta^{-1} integral, with beta^{-1} = (1/lambda) J^{-1} beta^T J.
bool same_left_coset(const CosetRep& x, const CosetRep& y) {
  const Mat4& J = symplectic_j();
  Mat4 Jinv = mat_mul(mat_mul(J, J), J);  // J^{-1} = -J = J^3
  Mat4 prod = mat_mul(x.m, mat_mul(mat_mul(Jinv, mat_transpose(y.m)), J));
  for (const auto& row : prod) {
    for (long v : row) {
      if (v % y.similitude != 0) return false;
    }
  }
  return true;
}

long degree(HeckeOp op, long p) {
  return op == HeckeOp::Tp ? p * p * p + p * p + p + 1 : p * p * p * p + p * p * p + p * p + p;
}

}  // namespace

TEST_CASE("coset counts and similitudes") {
  CHECK(tp_reps(2).size() == 15);
  CHECK(tp_reps(3).size() == 40);
  CHECK(tp2_1_reps(2).size() == 30);
  CHECK(tp2_1_reps(3).size() == 120);
  CHECK_THROWS_AS(tp_reps(4), std::invalid_argument);
  for (long p : {2L, 3L, 5L, 7L}) {
    for (HeckeOp op : {HeckeOp::Tp, HeckeOp::Tp2_1}) {
      auto reps = coset_reps(op, p);
      CHECK(static_cast<long>(reps.size()) == degree(op, p));
      long lambda = op == HeckeOp::Tp ? p : p * p;
      for (const auto& r : reps) {
        CHECK(r.similitude == lambda);
        auto s = similitude_of(r.m);
        REQUIRE(s.has_value());
        CHECK(*s == lambda);
      }
    }
  }
}

TEST_CASE("third T_{p^2,1} family at p = 2") {
  auto reps = tp2_1_reps(2);
  // families: 2, 1, then the conic triples
  std::set<std::array<long, 3>> triples;
  for (std::size_t i = 3; i < 6; ++i) triples.insert({reps[i].m[0][2], reps[i].m[0][3], reps[i].m[1][3]});
  CHECK(triples == std::set<std::array<long, 3>>{{1, 1, 1}, {1, 0, 0}, {0, 0, 1}});
}

TEST_CASE("representatives lie in the right double coset") {
  for (long p : {2L, 3L, 5L}) {
    for (const auto& r : tp_reps(p)) CHECK(determinantal_divisors(r.m) == std::array<long, 4>{1, 1, p, p * p});
    for (const auto& r : tp2_1_reps(p)) {
      CHECK(determinantal_divisors(r.m) == std::array<long, 4>{1, p, p * p, p * p * p * p});
    }
  }
}

TEST_CASE("representatives give distinct left cosets") {
  for (long p : {2L, 3L}) {
    for (HeckeOp op : {HeckeOp::Tp, HeckeOp::Tp2_1}) {
      auto reps = coset_reps(op, p);
      for (std::size_t i = 0; i < reps.size(); ++i) {
        CHECK(same_left_coset(reps[i], reps[i]));
        for (std::size_t j = i + 1; j < reps.size(); ++j) CHECK_FALSE(same_left_coset(reps[i], reps[j]));
      }
    }
  }
  for (long p : {5L, 7L}) {
    for (HeckeOp op : {HeckeOp::Tp, HeckeOp::Tp2_1}) {
      auto reps = coset_reps(op, p);
      std::set<Mat4> forms;
      for (const auto& r : reps) forms.insert(row_hnf(r.m));
      CHECK(forms.size() == reps.size());
    }
  }
}

TEST_CASE("row_hnf is a left-coset invariant") {
  // gamma in Sp4(Z): translation (I S; 0 I) and the involution J
  Mat4 T = {{{1, 0, 2, -1}, {0, 1, -1, 3}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  for (const auto& r : tp2_1_reps(3)) {
    CHECK(row_hnf(mat_mul(T, r.m)) == row_hnf(r.m));
    CHECK(row_hnf(mat_mul(symplectic_j(), r.m)) == row_hnf(r.m));
    CosetRep moved{mat_mul(symplectic_j(), mat_mul(T, r.m)), r.similitude};
    CHECK(same_left_coset(moved, r));
  }
}

TEST_CASE("conjugate partners form an involution") {
  for (long p : {2L, 3L, 5L}) {
    for (HeckeOp op : {HeckeOp::Tp, HeckeOp::Tp2_1}) {
      auto reps = coset_reps(op, p);
      auto partner = conjugate_partners(reps);
      for (std::size_t i = 0; i < reps.size(); ++i) CHECK(partner[partner[i]] == i);
    }
  }
}

TEST_CASE("act_on_point on simple representatives") {
  EvalPoint Z = standard_point("2.7", 128);
  CosetRep scale{{{{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}}, 3};
  auto img = act_on_point(scale, Z);
  CHECK(img.det.re().contains_mpq(1));
  CHECK(img.w.z1.im().contains_mpq(mpq_class(81, 10)));
  CHECK(img.w.z3.im().contains_mpq(3));

  CosetRep shrink{{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}}}, 3};
  img = act_on_point(shrink, Z);
  CHECK(img.det.re().contains_mpq(9));
  CHECK(img.w.z1.im().contains_mpq(mpq_class(27, 30)));

  // (Z + B) / p for the translation family
  CosetRep tr{{{{1, 0, 1, 2}, {0, 1, 2, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}}}, 3};
  img = act_on_point(tr, Z);
  CHECK(img.det.re().contains_mpq(9));
  CHECK(img.w.z1.re().contains_mpq(mpq_class(1, 3)));
  CHECK(img.w.z3.re().contains_mpq(mpq_class(2, 3)));
  CHECK(img.w.z2.re().contains_mpq(0));
  CHECK(img.w.z2.im().contains_mpq(mpq_class(37, 30)));
}

TEST_CASE("every image stays in the upper half-space and shrinks with its input") {
  EvalPoint Z = standard_point("2.7", 128);
  EvalPoint wide = Z;
  for (ComplexBall* z : {&wide.z1, &wide.z2, &wide.z3}) {
    z->re().add_error(Mag::pow2(-40));
    z->im().add_error(Mag::pow2(-40));
  }
  for (long p : {2L, 3L, 5L}) {
    for (HeckeOp op : {HeckeOp::Tp, HeckeOp::Tp2_1}) {
      for (const auto& r : coset_reps(op, p)) {
        auto tight = act_on_point(r, Z);
        auto loose = act_on_point(r, wide);
        CHECK(delta(tight.w).is_positive());
        CHECK(loose.w.z1.contains(tight.w.z1));
        CHECK(loose.w.z2.contains(tight.w.z2));
        CHECK(loose.w.z3.contains(tight.w.z3));
      }
    }
  }
}

TEST_CASE("general path with a nonzero C block") {
  // J itself: Z -> -Z^{-1}, det(CZ + D) = det(-Z)
  CosetRep j{symplectic_j(), 1};
  EvalPoint Z = imaginary_point("2", "2", "0", 128);
  auto img = act_on_point(j, Z);
  CHECK(img.w.z1.im().contains_mpq(mpq_class(1, 2)));
  CHECK(img.w.z1.re().contains_mpq(0));
  CHECK(img.det.re().contains_mpq(-4));
}

TEST_CASE("format_rep is row-major") {
  CHECK(format_rep(tp_reps(2)[0]) == "2 0 0 0 0 2 0 0 0 0 1 0 0 0 0 1");
}
