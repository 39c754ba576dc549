#include "siegel/ball.hpp"

#include "siegel/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace siegel {

// ---------------------------------------------------------------------------
// Mag

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double x) { return std::nextafter(x, kInf); }
double down(double x) { return x > 0.0 ? std::nextafter(x, 0.0) : 0.0; }

}  // namespace

Mag Mag::normalize(double man, std::int64_t exp) {
  if (man == 0.0) return Mag{};
  if (std::isinf(man)) return infinity();
  int e = 0;
  double f = std::frexp(man, &e);
  return Mag(f, exp + e);
}

Mag Mag::from_double(double x) { return normalize(std::fabs(x), 0); }

Mag Mag::pow2(std::int64_t e) { return Mag(0.5, e + 1); }

Mag Mag::infinity() { return Mag(kInf, 0); }

bool Mag::is_inf() const { return std::isinf(man_); }

Mag Mag::upper_abs(const mpfr_t x) {
  if (mpfr_zero_p(x)) return Mag{};
  if (!mpfr_number_p(x)) return infinity();
  long e = 0;
  double d = mpfr_get_d_2exp(&e, x, MPFR_RNDA);
  return normalize(std::fabs(d), e);
}

Mag Mag::lower_abs(const mpfr_t x) {
  if (mpfr_zero_p(x) || mpfr_nan_p(x)) return Mag{};
  if (mpfr_inf_p(x)) return infinity();
  long e = 0;
  double d = mpfr_get_d_2exp(&e, x, MPFR_RNDZ);
  return normalize(std::fabs(d), e);
}

double Mag::to_double() const {
  if (is_zero()) return 0.0;
  if (is_inf() || exp_ > 1024) return kInf;
  if (exp_ < -1100) return std::numeric_limits<double>::denorm_min();
  double r = std::ldexp(man_, static_cast<int>(exp_));
  return exp_ < -1020 ? up(r) : r;
}

void Mag::to_mpfr(mpfr_t out) const {
  if (is_inf()) {
    mpfr_set_inf(out, 1);
    return;
  }
  mpfr_set_d(out, man_, MPFR_RNDU);
  mpfr_mul_2si(out, out, static_cast<long>(exp_), MPFR_RNDU);
}

Mag operator+(const Mag& a, const Mag& b) {
  if (a.is_inf() || b.is_inf()) return Mag::infinity();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Mag& hi = a.exp_ >= b.exp_ ? a : b;
  const Mag& lo = a.exp_ >= b.exp_ ? b : a;
  std::int64_t d = hi.exp_ - lo.exp_;
  if (d > 60) return Mag::normalize(up(hi.man_), hi.exp_);
  return Mag::normalize(up(hi.man_ + std::ldexp(lo.man_, -static_cast<int>(d))), hi.exp_);
}

Mag operator*(const Mag& a, const Mag& b) {
  if (a.is_zero() || b.is_zero()) return Mag{};
  if (a.is_inf() || b.is_inf()) return Mag::infinity();
  return Mag::normalize(up(a.man_ * b.man_), a.exp_ + b.exp_);
}

Mag Mag::div(const Mag& a, const Mag& b) {
  if (a.is_zero()) return Mag{};
  if (b.is_zero() || a.is_inf()) return infinity();
  if (b.is_inf()) return Mag{};
  return normalize(up(a.man_ / b.man_), a.exp_ - b.exp_);
}

Mag Mag::mul_lower(const Mag& a, const Mag& b) {
  if (a.is_zero() || b.is_zero()) return Mag{};
  if (a.is_inf() || b.is_inf()) return infinity();
  return normalize(down(a.man_ * b.man_), a.exp_ + b.exp_);
}

Mag Mag::sub_lower(const Mag& a, const Mag& b) {
  if (!(b < a)) return Mag{};
  if (b.is_zero()) return a;
  if (a.is_inf()) return a;
  std::int64_t d = a.exp_ - b.exp_;
  if (d > 60) return normalize(down(a.man_), a.exp_);
  return normalize(down(a.man_ - std::ldexp(b.man_, -static_cast<int>(d))), a.exp_);
}

Mag Mag::sqrt(const Mag& a) {
  if (a.is_zero() || a.is_inf()) return a;
  double m = a.man_;
  std::int64_t e = a.exp_;
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return normalize(up(std::sqrt(m)), e / 2);
}

Mag Mag::sqrt_lower(const Mag& a) {
  if (a.is_zero() || a.is_inf()) return a;
  double m = a.man_;
  std::int64_t e = a.exp_;
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return normalize(down(std::sqrt(m)), e / 2);
}

Mag Mag::expm1(const Mag& r) {
  if (r.is_zero()) return Mag{};
  if (r < pow2(-20)) return r + r * r;
  double x = r.to_double();
  if (x > 700.0) return infinity();
  return from_double(std::expm1(x)) * from_double(1.0 + 0x1p-50);
}

bool operator<(const Mag& a, const Mag& b) {
  if (a.is_inf()) return false;
  if (b.is_inf()) return true;
  if (a.is_zero()) return !b.is_zero();
  if (b.is_zero()) return false;
  if (a.exp_ != b.exp_) return a.exp_ < b.exp_;
  return a.man_ < b.man_;
}

// ---------------------------------------------------------------------------
// Ball

namespace {

Mag ulp_of(mpfr_srcptr x) {
  if (!mpfr_regular_p(x)) return Mag{};
  return Mag::pow2(static_cast<std::int64_t>(mpfr_get_exp(x)) - static_cast<std::int64_t>(mpfr_get_prec(x)));
}

// mid +/- rad computed exactly when the needed precision is moderate,
// otherwise rounded outward (lower endpoint down, upper endpoint up).
class Endpoint {
 public:
  Endpoint(mpfr_srcptr mid, const Mag& rad, bool upper) {
    if (rad.is_inf()) {
      mpfr_init2(value_, 2);
      mpfr_set_inf(value_, upper ? 1 : -1);
      return;
    }
    Precision prec = mpfr_get_prec(mid) + 64;
    if (!rad.is_zero() && mpfr_regular_p(mid)) {
      long top = std::max<long>(mpfr_get_exp(mid), static_cast<long>(rad.exponent()));
      long bottom = std::min<long>(mpfr_get_exp(mid) - mpfr_get_prec(mid), static_cast<long>(rad.exponent()) - 53);
      long need = top - bottom + 4;
      prec = std::clamp<long>(need, prec, 1L << 16);
    }
    mpfr_init2(value_, prec);
    mpfr_t r;
    mpfr_init2(r, 64);
    rad.to_mpfr(r);
    if (upper) {
      mpfr_add(value_, mid, r, MPFR_RNDU);
    } else {
      mpfr_sub(value_, mid, r, MPFR_RNDD);
    }
    mpfr_clear(r);
  }
  ~Endpoint() { mpfr_clear(value_); }
  Endpoint(const Endpoint&) = delete;
  Endpoint& operator=(const Endpoint&) = delete;
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

}  // namespace

Ball::Ball(Precision prec) {
  mpfr_init2(mid_, prec);
  mpfr_set_zero(mid_, 1);
}

Ball::Ball(const Ball& other) : rad_(other.rad_) {
  mpfr_init2(mid_, other.prec());
  mpfr_set(mid_, other.mid_, MPFR_RNDN);
}

Ball::Ball(Ball&& other) noexcept : rad_(other.rad_) {
  mpfr_init2(mid_, MPFR_PREC_MIN);
  mpfr_swap(mid_, other.mid_);
}

Ball& Ball::operator=(const Ball& other) {
  if (this != &other) {
    if (prec() != other.prec()) mpfr_set_prec(mid_, other.prec());
    mpfr_set(mid_, other.mid_, MPFR_RNDN);
    rad_ = other.rad_;
  }
  return *this;
}

Ball& Ball::operator=(Ball&& other) noexcept {
  mpfr_swap(mid_, other.mid_);
  rad_ = other.rad_;
  return *this;
}

Ball::~Ball() { mpfr_clear(mid_); }

void Ball::add_rounding_error(int ternary) {
  if (ternary != 0) rad_ += ulp_of(mid_);
}

Ball Ball::from_int(long v, Precision prec) {
  Ball b(prec);
  b.add_rounding_error(mpfr_set_si(b.mid_, v, MPFR_RNDN));
  return b;
}

Ball Ball::from_mpz(const mpz_class& v, Precision prec) {
  Ball b(prec);
  b.add_rounding_error(mpfr_set_z(b.mid_, v.get_mpz_t(), MPFR_RNDN));
  return b;
}

Ball Ball::from_mpq(const mpq_class& v, Precision prec) {
  Ball b(prec);
  b.add_rounding_error(mpfr_set_q(b.mid_, v.get_mpq_t(), MPFR_RNDN));
  return b;
}

Ball Ball::from_string(const std::string& s, Precision prec) { return from_mpq(parse_rational(s), prec); }

Ball Ball::from_endpoints(const mpfr_t lo, const mpfr_t hi, Precision prec) {
  if (mpfr_cmp(lo, hi) > 0) throw CertificationError("ball from empty interval");
  Ball b(prec);
  mpfr_t sum;
  mpfr_init2(sum, std::max(mpfr_get_prec(lo), mpfr_get_prec(hi)) + 2);
  mpfr_add(sum, lo, hi, MPFR_RNDN);
  mpfr_div_2ui(sum, sum, 1, MPFR_RNDN);
  mpfr_set(b.mid_, sum, MPFR_RNDN);
  mpfr_t d;
  mpfr_init2(d, 64);
  mpfr_sub(d, hi, b.mid_, MPFR_RNDU);
  Mag r1 = Mag::upper_abs(d);
  mpfr_sub(d, b.mid_, lo, MPFR_RNDU);
  Mag r2 = Mag::upper_abs(d);
  b.rad_ = r1 < r2 ? r2 : r1;
  mpfr_clear(d);
  mpfr_clear(sum);
  return b;
}

Ball Ball::pi(Precision prec) {
  Ball b(prec);
  b.add_rounding_error(mpfr_const_pi(b.mid_, MPFR_RNDN));
  return b;
}

void Ball::set_prec(Precision prec) {
  if (prec == this->prec()) return;
  add_rounding_error(mpfr_prec_round(mid_, prec, MPFR_RNDN));
}

void Ball::zero() {
  mpfr_set_zero(mid_, 1);
  rad_ = Mag{};
}

void Ball::lower(mpfr_t out) const {
  mpfr_t r;
  mpfr_init2(r, 64);
  rad_.to_mpfr(r);
  mpfr_sub(out, mid_, r, MPFR_RNDD);
  mpfr_clear(r);
}

void Ball::upper(mpfr_t out) const {
  mpfr_t r;
  mpfr_init2(r, 64);
  rad_.to_mpfr(r);
  mpfr_add(out, mid_, r, MPFR_RNDU);
  mpfr_clear(r);
}

bool Ball::contains_zero() const {
  if (mpfr_zero_p(mid_)) return true;
  if (rad_ < Mag::lower_abs(mid_)) return false;
  Endpoint lo(mid_, rad_, false), hi(mid_, rad_, true);
  return mpfr_sgn(lo.get()) <= 0 && mpfr_sgn(hi.get()) >= 0;
}

bool Ball::is_positive() const {
  if (mpfr_sgn(mid_) <= 0) return false;
  Endpoint lo(mid_, rad_, false);
  return mpfr_sgn(lo.get()) > 0;
}

bool Ball::is_negative() const {
  if (mpfr_sgn(mid_) >= 0) return false;
  Endpoint hi(mid_, rad_, true);
  return mpfr_sgn(hi.get()) < 0;
}

bool Ball::contains(const Ball& other) const {
  Endpoint lo(mid_, rad_, false), hi(mid_, rad_, true);
  Endpoint olo(other.mid_, other.rad_, false), ohi(other.mid_, other.rad_, true);
  return mpfr_lessequal_p(lo.get(), olo.get()) && mpfr_lessequal_p(ohi.get(), hi.get());
}

bool Ball::overlaps(const Ball& other) const {
  Endpoint lo(mid_, rad_, false), hi(mid_, rad_, true);
  Endpoint olo(other.mid_, other.rad_, false), ohi(other.mid_, other.rad_, true);
  return mpfr_lessequal_p(lo.get(), ohi.get()) && mpfr_lessequal_p(olo.get(), hi.get());
}

bool Ball::contains_mpq(const mpq_class& q) const {
  Endpoint lo(mid_, rad_, false), hi(mid_, rad_, true);
  return mpfr_cmp_q(lo.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi.get(), q.get_mpq_t()) >= 0;
}

std::optional<mpz_class> Ball::unique_integer() const {
  if (rad_.is_inf()) return std::nullopt;
  Endpoint lo(mid_, rad_, false), hi(mid_, rad_, true);
  mpz_class n;
  mpfr_get_z(n.get_mpz_t(), lo.get(), MPFR_RNDU);
  if (mpfr_cmp_z(hi.get(), n.get_mpz_t()) < 0) return std::nullopt;
  mpz_class next = n + 1;
  if (mpfr_cmp_z(hi.get(), next.get_mpz_t()) >= 0) return std::nullopt;
  return n;
}

std::string Ball::key() const {
  std::string k;
  auto put = [&k](const void* p, std::size_t n) { k.append(static_cast<const char*>(p), n); };
  Precision p = prec();
  put(&p, sizeof p);
  if (mpfr_regular_p(mid_)) {
    int sign = mpfr_sgn(mid_);
    mpfr_exp_t e = mpfr_get_exp(mid_);
    put(&sign, sizeof sign);
    put(&e, sizeof e);
    std::size_t limbs = (static_cast<std::size_t>(p) + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
    put(mid_->_mpfr_d, limbs * sizeof(mp_limb_t));
  } else {
    k.push_back(mpfr_zero_p(mid_) ? 'z' : 's');
  }
  double m = rad_.mantissa();
  std::int64_t re = rad_.exponent();
  put(&m, sizeof m);
  put(&re, sizeof re);
  return k;
}

std::string Ball::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits, mid_);
  std::string s(buf);
  mpfr_free_str(buf);
  if (rad_.is_zero()) return s;
  mpfr_t r;
  mpfr_init2(r, 64);
  rad_.to_mpfr(r);
  mpfr_asprintf(&buf, " +/- %.3Re", r);
  s += buf;
  mpfr_free_str(buf);
  mpfr_clear(r);
  return s;
}

void add(Ball& out, const Ball& a, const Ball& b) {
  Mag r = a.rad_ + b.rad_;
  int t = mpfr_add(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void sub(Ball& out, const Ball& a, const Ball& b) {
  Mag r = a.rad_ + b.rad_;
  int t = mpfr_sub(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void mul(Ball& out, const Ball& a, const Ball& b) {
  Mag r = Mag::upper_abs(a.mid_) * b.rad_ + Mag::upper_abs(b.mid_) * a.rad_ + a.rad_ * b.rad_;
  int t = mpfr_mul(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void div(Ball& out, const Ball& a, const Ball& b) {
  Mag bl = Mag::lower_abs(b.mid_);
  if (!(b.rad_ < bl)) throw CertificationError("division by a ball that may contain zero");
  Mag num = Mag::upper_abs(b.mid_) * a.rad_ + Mag::upper_abs(a.mid_) * b.rad_;
  Mag den = Mag::mul_lower(bl, Mag::sub_lower(bl, b.rad_));
  Mag r = Mag::div(num, den);
  int t = mpfr_div(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void neg(Ball& out, const Ball& a) {
  Mag r = a.rad_;
  int t = mpfr_neg(out.mid_, a.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void mul_si(Ball& out, const Ball& a, long s) {
  Mag r = a.rad_ * Mag::from_double(static_cast<double>(s));
  int t = mpfr_mul_si(out.mid_, a.mid_, s, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void div_si(Ball& out, const Ball& a, long s) {
  if (s == 0) throw CertificationError("division by zero");
  Mag r = Mag::div(a.rad_, Mag::from_double(static_cast<double>(s)));
  int t = mpfr_div_si(out.mid_, a.mid_, s, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void mul_2si(Ball& out, const Ball& a, long e) {
  Mag r = a.rad_ * Mag::pow2(e);
  int t = mpfr_mul_2si(out.mid_, a.mid_, e, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void sqrt(Ball& out, const Ball& a) {
  if (a.rad_.is_zero()) {
    if (mpfr_sgn(a.mid_) < 0) throw CertificationError("square root of a negative number");
    int t = mpfr_sqrt(out.mid_, a.mid_, MPFR_RNDN);
    out.rad_ = Mag{};
    out.add_rounding_error(t);
    return;
  }
  if (!a.is_positive()) throw CertificationError("square root of a ball that is not certified positive");
  Mag r = Mag::div(a.rad_, Mag::sqrt_lower(Mag::lower_abs(a.mid_)));
  int t = mpfr_sqrt(out.mid_, a.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void sqrt_nonneg(Ball& out, const Ball& a) {
  if (a.rad_.is_zero() || a.is_positive()) {
    sqrt(out, a);
    return;
  }
  mpfr_t hi;
  mpfr_init2(hi, a.prec() + 64);
  a.upper(hi);
  if (mpfr_sgn(hi) < 0) {
    mpfr_clear(hi);
    throw CertificationError("square root of a negative ball");
  }
  mpfr_t s;
  mpfr_init2(s, out.prec());
  mpfr_sqrt(s, hi, MPFR_RNDU);
  mpfr_div_2ui(s, s, 1, MPFR_RNDU);
  mpfr_set(out.mid_, s, MPFR_RNDN);
  out.rad_ = Mag::upper_abs(s) + ulp_of(out.mid_);
  mpfr_clear(s);
  mpfr_clear(hi);
}

void exp(Ball& out, const Ball& a) {
  Mag r = a.rad_;
  int t = mpfr_exp(out.mid_, a.mid_, MPFR_RNDN);
  Mag true_center = Mag::upper_abs(out.mid_) + ulp_of(out.mid_);
  out.rad_ = true_center * Mag::expm1(r);
  out.add_rounding_error(t);
}

void sin_cos(Ball& s, Ball& c, const Ball& a) {
  Mag r = a.rad_;
  if (Mag::from_double(2.0) < r) r = Mag::from_double(2.0);
  int t = mpfr_sin_cos(s.mid_, c.mid_, a.mid_, MPFR_RNDN);
  s.rad_ = r;
  c.rad_ = r;
  s.add_rounding_error(t);
  c.add_rounding_error(t);
}

void abs(Ball& out, const Ball& a) {
  Mag r = a.rad_;
  int t = mpfr_abs(out.mid_, a.mid_, MPFR_RNDN);
  out.rad_ = r;
  out.add_rounding_error(t);
}

void intersect(Ball& out, const Ball& a, const Ball& b) {
  Endpoint alo(a.mid_, a.rad_, false), ahi(a.mid_, a.rad_, true);
  Endpoint blo(b.mid_, b.rad_, false), bhi(b.mid_, b.rad_, true);
  mpfr_srcptr lo = mpfr_greater_p(alo.get(), blo.get()) ? alo.get() : blo.get();
  mpfr_srcptr hi = mpfr_less_p(ahi.get(), bhi.get()) ? ahi.get() : bhi.get();
  if (mpfr_greater_p(lo, hi)) throw CertificationError("intersection of disjoint balls");
  out = Ball::from_endpoints(lo, hi, std::max(a.prec(), b.prec()));
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  add(r, a, b);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  sub(r, a, b);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  mul(r, a, b);
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  div(r, a, b);
  return r;
}

Ball operator-(const Ball& a) {
  Ball r(a.prec());
  neg(r, a);
  return r;
}

// ---------------------------------------------------------------------------
// ComplexBall

ComplexBall ComplexBall::from_int(long v, Precision prec) { return {Ball::from_int(v, prec), Ball(prec)}; }

ComplexBall ComplexBall::from_mpq(const mpq_class& v, Precision prec) { return {Ball::from_mpq(v, prec), Ball(prec)}; }

void ComplexBall::zero() {
  re_.zero();
  im_.zero();
}

void ComplexBall::set_prec(Precision prec) {
  re_.set_prec(prec);
  im_.set_prec(prec);
}

Mag ComplexBall::radius() const { return re_.rad() < im_.rad() ? im_.rad() : re_.rad(); }

Mag ComplexBall::abs_upper() const {
  Mag x = Mag::upper_abs(re_.mid()) + re_.rad();
  Mag y = Mag::upper_abs(im_.mid()) + im_.rad();
  return Mag::sqrt(x * x + y * y);
}

Mag ComplexBall::abs_lower() const {
  Mag x = Mag::sub_lower(Mag::lower_abs(re_.mid()), re_.rad());
  Mag y = Mag::sub_lower(Mag::lower_abs(im_.mid()), im_.rad());
  Mag s = Mag::mul_lower(x, x);
  Mag t = Mag::mul_lower(y, y);
  // lower bound of s + t: the larger term alone, rounded down
  return Mag::sqrt_lower(s < t ? t : s);
}

std::string ComplexBall::to_string(int digits) const {
  return "(" + re_.to_string(digits) + ") + (" + im_.to_string(digits) + ")*I";
}

void add(ComplexBall& out, const ComplexBall& a, const ComplexBall& b) {
  add(out.re_, a.re_, b.re_);
  add(out.im_, a.im_, b.im_);
}

void sub(ComplexBall& out, const ComplexBall& a, const ComplexBall& b) {
  sub(out.re_, a.re_, b.re_);
  sub(out.im_, a.im_, b.im_);
}

namespace {

struct Scratch {
  mpfr_t v;
  Scratch() { mpfr_init2(v, 64); }
  ~Scratch() { mpfr_clear(v); }
};

}  // namespace

void mul(ComplexBall& out, const ComplexBall& a, const ComplexBall& b) {
  const Mag ar = Mag::upper_abs(a.re_.mid_), ai = Mag::upper_abs(a.im_.mid_);
  const Mag br = Mag::upper_abs(b.re_.mid_), bi = Mag::upper_abs(b.im_.mid_);
  const Mag& arr = a.re_.rad_;
  const Mag& air = a.im_.rad_;
  const Mag& brr = b.re_.rad_;
  const Mag& bir = b.im_.rad_;
  Mag rad_re = ar * brr + br * arr + arr * brr + ai * bir + bi * air + air * bir;
  Mag rad_im = ar * bir + bi * arr + arr * bir + ai * brr + br * air + air * brr;

  thread_local Scratch scratch;
  if (mpfr_get_prec(scratch.v) != out.im_.prec()) mpfr_set_prec(scratch.v, out.im_.prec());
  int tim = mpfr_fmma(scratch.v, a.re_.mid_, b.im_.mid_, a.im_.mid_, b.re_.mid_, MPFR_RNDN);
  int tre = mpfr_fmms(out.re_.mid_, a.re_.mid_, b.re_.mid_, a.im_.mid_, b.im_.mid_, MPFR_RNDN);
  mpfr_swap(out.im_.mid_, scratch.v);
  out.re_.rad_ = rad_re;
  out.im_.rad_ = rad_im;
  out.re_.add_rounding_error(tre);
  out.im_.add_rounding_error(tim);
}

void addmul(ComplexBall& acc, const ComplexBall& a, const ComplexBall& b, ComplexBall& scratch) {
  mul(scratch, a, b);
  add(acc, acc, scratch);
}

void mul_real(ComplexBall& out, const ComplexBall& a, const Ball& r) {
  mul(out.im_, a.im_, r);
  mul(out.re_, a.re_, r);
}

void div(ComplexBall& out, const ComplexBall& a, const ComplexBall& b) {
  ComplexBall inverse(out.prec());
  inv(inverse, b);
  mul(out, a, inverse);
}

void inv(ComplexBall& out, const ComplexBall& a) {
  Precision p = std::max(out.prec(), a.prec());
  Ball n(p), t(p);
  mul(n, a.re_, a.re_);
  mul(t, a.im_, a.im_);
  add(n, n, t);
  if (!n.is_positive()) throw CertificationError("division by a complex box that may contain zero");
  Ball re(p), im(p);
  div(re, a.re_, n);
  div(im, a.im_, n);
  neg(im, im);
  out.re_ = std::move(re);
  out.im_ = std::move(im);
}

void neg(ComplexBall& out, const ComplexBall& a) {
  neg(out.re_, a.re_);
  neg(out.im_, a.im_);
}

void conj(ComplexBall& out, const ComplexBall& a) {
  if (&out != &a) out.re_ = a.re_;
  neg(out.im_, a.im_);
}

void mul_si(ComplexBall& out, const ComplexBall& a, long s) {
  mul_si(out.re_, a.re_, s);
  mul_si(out.im_, a.im_, s);
}

void sqr(ComplexBall& out, const ComplexBall& a) { mul(out, a, a); }

void pow_ui(ComplexBall& out, const ComplexBall& a, unsigned long n) {
  ComplexBall result = ComplexBall::from_int(1, std::max(out.prec(), a.prec()));
  ComplexBall base = a;
  while (n > 0) {
    if (n & 1UL) mul(result, result, base);
    n >>= 1;
    if (n > 0) mul(base, base, base);
  }
  out = std::move(result);
}

void exp(ComplexBall& out, const ComplexBall& a) {
  Precision p = out.prec();
  Ball e(p), s(p), c(p);
  exp(e, a.re_);
  sin_cos(s, c, a.im_);
  mul(out.re_, c, e);
  mul(out.im_, s, e);
}

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
  ComplexBall r(std::max(a.prec(), b.prec()));
  add(r, a, b);
  return r;
}

ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
  ComplexBall r(std::max(a.prec(), b.prec()));
  sub(r, a, b);
  return r;
}

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  ComplexBall r(std::max(a.prec(), b.prec()));
  mul(r, a, b);
  return r;
}

ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
  ComplexBall r(std::max(a.prec(), b.prec()));
  div(r, a, b);
  return r;
}

ComplexBall operator-(const ComplexBall& a) {
  ComplexBall r(a.prec());
  neg(r, a);
  return r;
}

ComplexBall exp_2pi_i(const ComplexBall& w) {
  Precision p = w.prec();
  Ball two_pi = Ball::pi(p + 16);
  mul_2si(two_pi, two_pi, 1);
  ComplexBall arg(p);
  mul(arg.re(), w.im(), two_pi);
  neg(arg.re(), arg.re());
  mul(arg.im(), w.re(), two_pi);
  ComplexBall out(p);
  exp(out, arg);
  return out;
}

}  // namespace siegel
