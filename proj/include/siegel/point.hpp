#pragma once

#include "siegel/ball.hpp"

#include <string>

namespace siegel {

/// Point Z = (z1 z3; z3 z2) of the Siegel upper half-space. Fourier terms
/// are e(a z1 + b z3 + c z2) for the index [a, b, c].
struct EvalPoint {
  ComplexBall z1, z2, z3;

  Precision prec() const { return z1.prec(); }
  /// Certified Im z1 > 0 and Im z1 Im z2 - (Im z3)^2 > 0.
  bool is_valid() const;
  /// True if every coordinate has a real part that is exactly zero.
  bool is_purely_imaginary() const;
  EvalPoint with_prec(Precision prec) const;
  std::string to_string(int digits = 12) const;
};

/// Z = (y11 i, i; i, (y11 + 1) i), the default evaluation point family.
EvalPoint standard_point(const std::string& y11, Precision prec);
/// Z = (y1 i, y3 i; y3 i, y2 i) from exact decimal or rational strings.
EvalPoint imaginary_point(const std::string& y1, const std::string& y2, const std::string& y3, Precision prec);

/// U Z U^T for U in GL2(Z) chosen from midpoints so that Im Z becomes
/// Gauss reduced (|2 y3| <= y1 <= y2). Forms of even weight take the same
/// value at both points; the smallest eigenvalue of Im Z does not decrease.
EvalPoint gl2_reduce(const EvalPoint& Z);

/// Smallest eigenvalue of Im Z; throws CertificationError unless certified positive.
Ball delta(const EvalPoint& Z);
/// 2 pi delta(Z).
Ball alpha(const EvalPoint& Z);

}  // namespace siegel
