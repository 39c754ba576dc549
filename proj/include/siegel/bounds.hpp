#pragma once

#include "siegel/ball.hpp"
#include "siegel/igusa.hpp"

namespace siegel {

/// Envelope |a_N| <= C t^d with t the trace of N.
struct CoefficientBound {
  double C = 0;
  int d = 0;
};

/// A(eps, s) rounded upward. The exp factor is exp(9 eps^{-1} 2^{3/eps});
/// see the README for the constant's reading.
double bound_constant_a(double eps, double s);

CoefficientBound generator_bound(GeneratorId id);

/// Minimal T > (d + 2) / alpha with 6C(d+3)/alpha exp(-alpha T) T^{d+2} < 10^{-h},
/// using the lower endpoint of alpha.
long truncation_bound(const CoefficientBound& b, const Ball& alpha, double h);

/// Upper bound for 6C(d+3)/alpha exp(-alpha T) T^{d+2}; infinity if
/// T <= (d + 2) / alpha, where the tail estimate does not apply.
Mag truncation_envelope(const CoefficientBound& b, const Ball& alpha, long T);

/// Upper bound for |g(W)| given alpha(W): |a_0| + sum_{t >= 1} 6C t^{d+2} exp(-alpha t).
Mag generator_magnitude_bound(GeneratorId id, const Ball& alpha);

/// Some h with 10^{-h} <= tol (tol > 0 and finite).
double decimal_digits(const Mag& tol);

}  // namespace siegel
