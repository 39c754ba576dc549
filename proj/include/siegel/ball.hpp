#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace siegel {

using Precision = mpfr_prec_t;

class ComplexBall;

/// Raised when interval arithmetic cannot certify a result (division by a
/// box containing zero, square root of a possibly-negative ball, ...).
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonnegative magnitude m * 2^e with a 53-bit mantissa and a 64-bit
/// exponent, so radii far below the double range stay representable.
/// Arithmetic rounds upward unless the name says otherwise.
class Mag {
 public:
  Mag() = default;

  static Mag from_double(double x);
  static Mag pow2(std::int64_t e);
  static Mag infinity();
  /// Upper bound for |x|.
  static Mag upper_abs(const mpfr_t x);
  /// Lower bound for |x|.
  static Mag lower_abs(const mpfr_t x);

  bool is_zero() const { return man_ == 0.0; }
  bool is_inf() const;
  double mantissa() const { return man_; }
  std::int64_t exponent() const { return exp_; }

  /// Closest double at or above the value (may be +inf or a denormal).
  double to_double() const;
  /// Exact conversion into an mpfr variable of at least 53 bits.
  void to_mpfr(mpfr_t out) const;

  friend Mag operator+(const Mag& a, const Mag& b);
  friend Mag operator*(const Mag& a, const Mag& b);
  Mag& operator+=(const Mag& b) { return *this = *this + b; }
  Mag& operator*=(const Mag& b) { return *this = *this * b; }

  /// Upper bound of a / b given b > 0.
  static Mag div(const Mag& a, const Mag& b);
  /// Lower bounds for the corresponding operations; sub clamps at zero.
  static Mag mul_lower(const Mag& a, const Mag& b);
  static Mag sub_lower(const Mag& a, const Mag& b);
  static Mag sqrt_lower(const Mag& a);
  static Mag sqrt(const Mag& a);
  /// Upper bound of exp(r) - 1.
  static Mag expm1(const Mag& r);

  friend bool operator<(const Mag& a, const Mag& b);
  friend bool operator<=(const Mag& a, const Mag& b) { return !(b < a); }
  friend bool operator==(const Mag& a, const Mag& b) { return a.man_ == b.man_ && a.exp_ == b.exp_; }

 private:
  Mag(double man, std::int64_t exp) : man_(man), exp_(exp) {}
  static Mag normalize(double man, std::int64_t exp);

  double man_ = 0.0;  // 0, +inf, or in [0.5, 1)
  std::int64_t exp_ = 0;
};

/// Real ball [mid - rad, mid + rad] with an mpfr midpoint.
class Ball {
 public:
  explicit Ball(Precision prec = 64);
  Ball(const Ball& other);
  Ball(Ball&& other) noexcept;
  Ball& operator=(const Ball& other);
  Ball& operator=(Ball&& other) noexcept;
  ~Ball();

  static Ball from_int(long v, Precision prec);
  static Ball from_mpz(const mpz_class& v, Precision prec);
  static Ball from_mpq(const mpq_class& v, Precision prec);
  /// Exact decimal or rational literal such as "2.7", "-1/3", "1e-5".
  static Ball from_string(const std::string& s, Precision prec);
  /// Smallest ball containing [lo, hi].
  static Ball from_endpoints(const mpfr_t lo, const mpfr_t hi, Precision prec);
  static Ball pi(Precision prec);

  Precision prec() const { return mpfr_get_prec(mid_); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_ptr mid_mut() { return mid_; }
  const Mag& rad() const { return rad_; }
  void set_rad(const Mag& r) { rad_ = r; }
  void add_error(const Mag& e) { rad_ += e; }

  /// Changes the midpoint precision, rounding into the radius if needed.
  void set_prec(Precision prec);
  void zero();
  bool is_exact() const { return rad_.is_zero(); }

  /// Directed endpoints written to `out` (its precision is respected).
  void lower(mpfr_t out) const;
  void upper(mpfr_t out) const;
  double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }

  bool contains_zero() const;
  bool is_positive() const;  // certified > 0
  bool is_negative() const;  // certified < 0
  bool contains(const Ball& other) const;
  bool overlaps(const Ball& other) const;
  bool contains_mpq(const mpq_class& q) const;

  /// Smallest integer in the ball if the ball holds exactly one integer.
  std::optional<mpz_class> unique_integer() const;

  /// Bit-level identity of midpoint and radius; used as cache key.
  std::string key() const;
  std::string to_string(int digits = 20) const;

  friend void add(Ball& out, const Ball& a, const Ball& b);
  friend void sub(Ball& out, const Ball& a, const Ball& b);
  friend void mul(Ball& out, const Ball& a, const Ball& b);
  friend void div(Ball& out, const Ball& a, const Ball& b);
  friend void neg(Ball& out, const Ball& a);
  friend void mul_si(Ball& out, const Ball& a, long s);
  friend void div_si(Ball& out, const Ball& a, long s);
  friend void mul_2si(Ball& out, const Ball& a, long e);
  friend void sqrt(Ball& out, const Ball& a);
  /// sqrt of a ball whose true value is known to be nonnegative even if the
  /// ball dips below zero.
  friend void sqrt_nonneg(Ball& out, const Ball& a);
  friend void exp(Ball& out, const Ball& a);
  friend void sin_cos(Ball& s, Ball& c, const Ball& a);
  friend void abs(Ball& out, const Ball& a);
  /// Ball hull of the intersection; throws if disjoint.
  friend void intersect(Ball& out, const Ball& a, const Ball& b);

 private:
  friend class ComplexBall;
  friend void mul(ComplexBall& out, const ComplexBall& a, const ComplexBall& b);
  void add_rounding_error(int ternary);

  mpfr_t mid_;
  Mag rad_;
};

Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator*(const Ball& a, const Ball& b);
Ball operator/(const Ball& a, const Ball& b);
Ball operator-(const Ball& a);

/// Rectangle re + i*im in the complex plane, each side a real ball.
class ComplexBall {
 public:
  explicit ComplexBall(Precision prec = 64) : re_(prec), im_(prec) {}
  ComplexBall(Ball re, Ball im) : re_(std::move(re)), im_(std::move(im)) {}

  static ComplexBall from_int(long v, Precision prec);
  static ComplexBall from_mpq(const mpq_class& v, Precision prec);

  Precision prec() const { return re_.prec(); }
  const Ball& re() const { return re_; }
  const Ball& im() const { return im_; }
  Ball& re() { return re_; }
  Ball& im() { return im_; }

  void zero();
  void set_prec(Precision prec);
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool contains(const ComplexBall& o) const { return re_.contains(o.re_) && im_.contains(o.im_); }
  bool overlaps(const ComplexBall& o) const { return re_.overlaps(o.re_) && im_.overlaps(o.im_); }
  /// Larger of the two side radii.
  Mag radius() const;
  /// Upper bound for |z|.
  Mag abs_upper() const;
  /// Lower bound for |z| (zero if the box meets the origin).
  Mag abs_lower() const;

  std::string key() const { return re_.key() + im_.key(); }
  std::string to_string(int digits = 20) const;

  friend void add(ComplexBall& out, const ComplexBall& a, const ComplexBall& b);
  friend void sub(ComplexBall& out, const ComplexBall& a, const ComplexBall& b);
  friend void mul(ComplexBall& out, const ComplexBall& a, const ComplexBall& b);
  /// acc += a * b.
  friend void addmul(ComplexBall& acc, const ComplexBall& a, const ComplexBall& b, ComplexBall& scratch);
  friend void mul_real(ComplexBall& out, const ComplexBall& a, const Ball& r);
  friend void div(ComplexBall& out, const ComplexBall& a, const ComplexBall& b);
  friend void inv(ComplexBall& out, const ComplexBall& a);
  friend void neg(ComplexBall& out, const ComplexBall& a);
  friend void conj(ComplexBall& out, const ComplexBall& a);
  friend void mul_si(ComplexBall& out, const ComplexBall& a, long s);
  friend void sqr(ComplexBall& out, const ComplexBall& a);
  friend void pow_ui(ComplexBall& out, const ComplexBall& a, unsigned long n);
  friend void exp(ComplexBall& out, const ComplexBall& a);

 private:
  Ball re_;
  Ball im_;
};

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator-(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator/(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator-(const ComplexBall& a);

/// exp(2*pi*i*w).
ComplexBall exp_2pi_i(const ComplexBall& w);

}  // namespace siegel
