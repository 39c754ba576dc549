#include "siegel/point.hpp"

#include <cmath>

namespace siegel {

bool EvalPoint::is_valid() const {
  const Ball& y1 = z1.im();
  const Ball& y2 = z2.im();
  const Ball& y3 = z3.im();
  if (!y1.is_positive()) return false;
  return (y1 * y2 - y3 * y3).is_positive();
}

bool EvalPoint::is_purely_imaginary() const {
  for (const ComplexBall* z : {&z1, &z2, &z3}) {
    if (!z->re().is_exact() || mpfr_sgn(z->re().mid()) != 0) return false;
  }
  return true;
}

EvalPoint EvalPoint::with_prec(Precision prec) const {
  EvalPoint out = *this;
  out.z1.set_prec(prec);
  out.z2.set_prec(prec);
  out.z3.set_prec(prec);
  return out;
}

std::string EvalPoint::to_string(int digits) const {
  return "z1=" + z1.to_string(digits) + " z2=" + z2.to_string(digits) + " z3=" + z3.to_string(digits);
}

EvalPoint imaginary_point(const std::string& y1, const std::string& y2, const std::string& y3, Precision prec) {
  EvalPoint Z{ComplexBall(prec), ComplexBall(prec), ComplexBall(prec)};
  Z.z1.im() = Ball::from_string(y1, prec);
  Z.z2.im() = Ball::from_string(y2, prec);
  Z.z3.im() = Ball::from_string(y3, prec);
  if (!Z.is_valid()) throw CertificationError("imaginary part of Z is not certified positive definite");
  return Z;
}

EvalPoint standard_point(const std::string& y11, Precision prec) {
  EvalPoint Z{ComplexBall(prec), ComplexBall(prec), ComplexBall(prec)};
  Z.z1.im() = Ball::from_string(y11, prec);
  Z.z2.im() = Z.z1.im() + Ball::from_int(1, prec);
  Z.z3.im() = Ball::from_int(1, prec);
  if (!Z.is_valid()) throw CertificationError("imaginary part of Z is not certified positive definite");
  return Z;
}

Ball delta(const EvalPoint& Z) {
  Precision prec = Z.prec();
  const Ball& y1 = Z.z1.im();
  const Ball& y2 = Z.z2.im();
  const Ball& y3 = Z.z3.im();
  Ball d = y1 - y2;
  Ball y3sq = y3 * y3;
  mul_2si(y3sq, y3sq, 2);
  Ball root(prec);
  sqrt_nonneg(root, d * d + y3sq);
  // ((y1 + y2) - root) / 2 rewritten as 2 det / ((y1 + y2) + root) to avoid cancellation
  Ball det = y1 * y2 - y3 * y3;
  if (!det.is_positive()) throw CertificationError("delta(Z) is not certified positive");
  Ball out = det / (y1 + y2 + root);
  mul_2si(out, out, 1);
  return out;
}

namespace {

// U Z U^T for U = (u11 u12; u21 u22)
EvalPoint congruent(const EvalPoint& Z, long u11, long u12, long u21, long u22) {
  const Precision prec = Z.prec();
  auto c = [prec](long v) { return ComplexBall::from_int(v, prec); };
  EvalPoint R = Z;
  R.z1 = c(u11 * u11) * Z.z1 + c(2 * u11 * u12) * Z.z3 + c(u12 * u12) * Z.z2;
  R.z3 = c(u11 * u21) * Z.z1 + c(u11 * u22 + u12 * u21) * Z.z3 + c(u12 * u22) * Z.z2;
  R.z2 = c(u21 * u21) * Z.z1 + c(2 * u21 * u22) * Z.z3 + c(u22 * u22) * Z.z2;
  return R;
}

}  // namespace

EvalPoint gl2_reduce(const EvalPoint& Z) {
  EvalPoint W = Z;
  for (int step = 0; step < 256; ++step) {
    double y1 = W.z1.im().mid_double(), y2 = W.z2.im().mid_double(), y3 = W.z3.im().mid_double();
    if (y1 > y2) {
      W = congruent(W, 0, 1, 1, 0);
      continue;
    }
    long n = std::lround(y3 / y1);
    if (n == 0) break;
    W = congruent(W, 1, 0, -n, 1);
  }
  return W;
}

Ball alpha(const EvalPoint& Z) {
  Ball a = delta(Z) * Ball::pi(Z.prec());
  mul_2si(a, a, 1);
  return a;
}

}  // namespace siegel
