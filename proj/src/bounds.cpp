#include "siegel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace siegel {

namespace {

constexpr mpfr_prec_t kPrec = 128;

struct Mpfr {
  mpfr_t v;
  Mpfr() { mpfr_init2(v, kPrec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

// log of the envelope, rounded upward, given alpha_lo > 0.
void log_envelope_up(mpfr_t out, const CoefficientBound& b, const mpfr_t alpha_lo, long T) {
  Mpfr t, u;
  // log(6 C (d + 3))
  mpfr_set_d(t.v, b.C, MPFR_RNDU);
  mpfr_mul_ui(t.v, t.v, static_cast<unsigned long>(6 * (b.d + 3)), MPFR_RNDU);
  mpfr_log(out, t.v, MPFR_RNDU);
  // - log(alpha)
  mpfr_log(u.v, alpha_lo, MPFR_RNDD);
  mpfr_sub(out, out, u.v, MPFR_RNDU);
  // - alpha T
  mpfr_mul_si(u.v, alpha_lo, T, MPFR_RNDD);
  mpfr_sub(out, out, u.v, MPFR_RNDU);
  // + (d + 2) log T
  mpfr_set_si(u.v, T, MPFR_RNDN);
  mpfr_log(u.v, u.v, MPFR_RNDU);
  mpfr_mul_si(u.v, u.v, b.d + 2, MPFR_RNDU);
  mpfr_add(out, out, u.v, MPFR_RNDU);
}

// T must exceed (d + 2) / alpha; returns the smallest admissible T.
long first_admissible(const CoefficientBound& b, const mpfr_t alpha_lo) {
  Mpfr q;
  mpfr_si_div(q.v, b.d + 2, alpha_lo, MPFR_RNDU);
  return static_cast<long>(mpfr_get_si(q.v, MPFR_RNDZ)) + 1;
}

void alpha_lower(mpfr_t out, const Ball& alpha) {
  alpha.lower(out);
  if (mpfr_sgn(out) <= 0) throw CertificationError("alpha(Z) is not certified positive");
}

}  // namespace

double bound_constant_a(double eps, double s) {
  if (!(eps > 0)) throw std::invalid_argument("bound_constant_a: eps must be positive");
  if (!(s - 0.5 - eps > 0)) throw std::invalid_argument("bound_constant_a: s - 1/2 - eps must be positive");
  Mpfr a, t, u;
  // (2 pi)^{-1/4}
  mpfr_const_pi(t.v, MPFR_RNDD);
  mpfr_mul_2ui(t.v, t.v, 1, MPFR_RNDD);
  mpfr_rec_sqrt(t.v, t.v, MPFR_RNDU);
  mpfr_sqrt(a.v, t.v, MPFR_RNDU);
  // exp(9 / eps * 2^{3 / eps})
  mpfr_set_d(t.v, 3.0, MPFR_RNDU);
  mpfr_div_d(t.v, t.v, eps, MPFR_RNDU);
  mpfr_ui_pow(t.v, 2, t.v, MPFR_RNDU);
  mpfr_mul_ui(t.v, t.v, 9, MPFR_RNDU);
  mpfr_div_d(t.v, t.v, eps, MPFR_RNDU);
  mpfr_exp(t.v, t.v, MPFR_RNDU);
  mpfr_mul(a.v, a.v, t.v, MPFR_RNDU);
  // zeta(1 + eps); zeta is decreasing on (1, inf)
  mpfr_set_d(t.v, 1.0, MPFR_RNDD);
  mpfr_add_d(t.v, t.v, eps, MPFR_RNDD);
  mpfr_zeta(t.v, t.v, MPFR_RNDU);
  mpfr_mul(a.v, a.v, t.v, MPFR_RNDU);
  // max(1, sqrt(Gamma(s + 1/2 + eps) / Gamma(s - 1/2 - eps))), both arguments > 0 and
  // the numerator argument >= 2 so Gamma is increasing there
  mpfr_set_d(t.v, s, MPFR_RNDU);
  mpfr_add_d(t.v, t.v, 0.5 + eps, MPFR_RNDU);
  mpfr_gamma(t.v, t.v, MPFR_RNDU);
  mpfr_set_d(u.v, s, MPFR_RNDN);
  mpfr_sub_d(u.v, u.v, 0.5 + eps, MPFR_RNDN);
  mpfr_gamma(u.v, u.v, MPFR_RNDD);
  mpfr_div(t.v, t.v, u.v, MPFR_RNDU);
  mpfr_sqrt(t.v, t.v, MPFR_RNDU);
  if (mpfr_cmp_ui(t.v, 1) > 0) mpfr_mul(a.v, a.v, t.v, MPFR_RNDU);
  return mpfr_get_d(a.v, MPFR_RNDU);
}

CoefficientBound generator_bound(GeneratorId id) {
  switch (id) {
    case GeneratorId::E4: return {19230, 5};
    case GeneratorId::E6: return {12169, 9};
    case GeneratorId::Chi10: return {220439, 11};
    case GeneratorId::Chi12: return {287248, 13};
  }
  throw std::invalid_argument("unknown generator");
}

long truncation_bound(const CoefficientBound& b, const Ball& alpha, double h) {
  Mpfr a, lhs, rhs;
  alpha_lower(a.v, alpha);
  // -h log 10, rounded downward
  mpfr_set_ui(rhs.v, 10, MPFR_RNDN);
  mpfr_log(rhs.v, rhs.v, MPFR_RNDU);
  mpfr_mul_d(rhs.v, rhs.v, -h, MPFR_RNDD);
  for (long T = first_admissible(b, a.v);; ++T) {
    log_envelope_up(lhs.v, b, a.v, T);
    if (mpfr_less_p(lhs.v, rhs.v)) return T;
  }
}

Mag truncation_envelope(const CoefficientBound& b, const Ball& alpha, long T) {
  Mpfr a, e;
  alpha_lower(a.v, alpha);
  if (T < first_admissible(b, a.v)) return Mag::infinity();
  log_envelope_up(e.v, b, a.v, T);
  mpfr_exp(e.v, e.v, MPFR_RNDU);
  return Mag::upper_abs(e.v);
}

Mag generator_magnitude_bound(GeneratorId id, const Ball& alpha) {
  CoefficientBound b = generator_bound(id);
  Mpfr a, sum, t, u;
  alpha_lower(a.v, alpha);
  long T1 = std::max(first_admissible(b, a.v), 1L);
  mpfr_set_ui(sum.v, (id == GeneratorId::E4 || id == GeneratorId::E6) ? 1 : 0, MPFR_RNDU);
  for (long n = 1; n <= T1; ++n) {
    // 6C n^{d+2} exp(-alpha n)
    mpfr_mul_si(t.v, a.v, -n, MPFR_RNDU);
    mpfr_exp(t.v, t.v, MPFR_RNDU);
    mpfr_set_si(u.v, n, MPFR_RNDN);
    mpfr_pow_si(u.v, u.v, b.d + 2, MPFR_RNDU);
    mpfr_mul(t.v, t.v, u.v, MPFR_RNDU);
    mpfr_mul_d(t.v, t.v, 6 * b.C, MPFR_RNDU);
    mpfr_add(sum.v, sum.v, t.v, MPFR_RNDU);
  }
  log_envelope_up(t.v, b, a.v, T1);
  mpfr_exp(t.v, t.v, MPFR_RNDU);
  mpfr_add(sum.v, sum.v, t.v, MPFR_RNDU);
  return Mag::upper_abs(sum.v);
}

double decimal_digits(const Mag& tol) {
  if (tol.is_zero() || tol.is_inf()) throw std::invalid_argument("decimal_digits: tolerance must be positive and finite");
  double h = -(std::log10(tol.mantissa()) + static_cast<double>(tol.exponent()) * std::log10(2.0));
  return h + 1e-9 * (1.0 + std::fabs(h));
}

}  // namespace siegel
