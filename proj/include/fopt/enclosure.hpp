#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace fopt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when an enclosure cannot be made meaningful at the working
// precision (division by an interval containing zero, radius blow-up,
// indeterminate predicate at the escalation cap).
struct PrecisionError : Error {
  using Error::Error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

struct Precision {
  int bits = 256;
  explicit Precision(int b = 256) : bits(b) {
    if (b < 64) throw Error("precision must be at least 64 bits");
  }
};

// Midpoint-radius real enclosure. Every operation returns an enclosure
// containing the exact result for any members of the inputs. The midpoint
// carries the working precision; the radius is a 64-bit upper bound.
class Enclosure {
 public:
  static constexpr int kRadiusBits = 64;

  Enclosure() : Enclosure(Precision{}) {}
  explicit Enclosure(Precision prec);
  Enclosure(const Enclosure& o);
  Enclosure(Enclosure&& o) noexcept;
  Enclosure& operator=(const Enclosure& o);
  Enclosure& operator=(Enclosure&& o) noexcept;
  ~Enclosure();

  static Enclosure exact(long v, Precision prec = Precision{});
  static Enclosure exact_double(double v, Precision prec = Precision{});
  static Enclosure from_rational(const mpq_class& q, Precision prec = Precision{});
  // Decimal string (optionally exponent "1e-20"); result contains the exact value.
  static Enclosure from_decimal(const std::string& s, Precision prec = Precision{});
  static Enclosure from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec);
  static Enclosure pi(Precision prec = Precision{});
  static Enclosure zero(Precision prec = Precision{}) { return exact(0, prec); }

  int precision_bits() const { return static_cast<int>(mpfr_get_prec(mid_)); }
  Precision precision() const { return Precision{precision_bits()}; }
  // Exact re-representation at a higher precision (identity on the interval);
  // at a lower precision the interval is widened to preserve inclusion.
  Enclosure with_precision(Precision prec) const;

  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }
  double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

  // Directed endpoints (computed outward at the midpoint precision).
  void lower(mpfr_ptr out) const;  // RNDD
  void upper(mpfr_ptr out) const;  // RNDU
  double lower_double() const;
  double upper_double() const;
  // mag = upper bound of |x| over the interval, mig = lower bound of |x|.
  void mag(mpfr_ptr out) const;
  void mig(mpfr_ptr out) const;

  bool is_exact() const { return mpfr_zero_p(rad_); }
  bool contains_zero() const;
  bool contains(const mpq_class& q) const;
  bool is_positive() const;     // entire interval > 0
  bool is_nonnegative() const;  // entire interval >= 0
  bool overlaps(const Enclosure& o) const;
  bool contained_in(const Enclosure& o) const;

  Enclosure operator-() const;
  Enclosure& operator+=(const Enclosure& o);
  Enclosure& operator-=(const Enclosure& o);
  Enclosure& operator*=(const Enclosure& o);
  Enclosure& operator/=(const Enclosure& o);

  // acc += a*b with one rounding step; the workhorse of matrix kernels.
  void addmul(const Enclosure& a, const Enclosure& b);
  void submul(const Enclosure& a, const Enclosure& b);

  Enclosure mul_rational(const mpq_class& q) const;
  Enclosure mul_si(long v) const;
  Enclosure div_si(long v) const;
  Enclosure mul_2exp(long e) const;

  Enclosure abs_interval() const;  // enclosure of |x|
  Enclosure sqrt_interval() const;
  Enclosure exp_interval() const;
  Enclosure pow_ui(unsigned long k) const;

  // Midpoint rendered with the given number of significant decimal digits
  // (round to nearest); used for deterministic file emission.
  std::string mid_decimal(int digits) const;
  std::string debug_string() const;  // "[m +- r]"

 private:
  friend Enclosure add(const Enclosure&, const Enclosure&);
  friend Enclosure sub(const Enclosure&, const Enclosure&);
  friend Enclosure mul(const Enclosure&, const Enclosure&);
  friend Enclosure div(const Enclosure&, const Enclosure&);
  void bump_radius_ulp(int ternary);
  mpfr_t mid_;
  mpfr_t rad_;
};

Enclosure add(const Enclosure& a, const Enclosure& b);
Enclosure sub(const Enclosure& a, const Enclosure& b);
Enclosure mul(const Enclosure& a, const Enclosure& b);
Enclosure div(const Enclosure& a, const Enclosure& b);

inline Enclosure operator+(Enclosure a, const Enclosure& b) { return add(a, b); }
inline Enclosure operator-(Enclosure a, const Enclosure& b) { return sub(a, b); }
inline Enclosure operator*(Enclosure a, const Enclosure& b) { return mul(a, b); }
inline Enclosure operator/(Enclosure a, const Enclosure& b) { return div(a, b); }

// Upper bound on sup{max(y,0) : y in e}: max(mid + rad, 0), rounded up.
// Returned as an exact enclosure so callers can keep accumulating rigorously.
Enclosure sup_clip_positive(const Enclosure& e);

// Enclosure of erfc(x) = (2/sqrt(pi)) int_x^inf e^{-t^2} dt.
Enclosure erfc_enclosure(const Enclosure& x);

// Enclosure of the upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1}e^{-t} dt.
// s must be exact (zero radius) with s > 0; x >= 0.
Enclosure upper_incomplete_gamma(const Enclosure& s, const Enclosure& x);

// Gamma(two_s/2, x) for half-integer s via the stable upward recurrence
// anchored at Gamma(1/2,x) = sqrt(pi) erfc(sqrt(x)) and Gamma(1,x) = e^{-x}.
Enclosure upper_incomplete_gamma_half(long two_s, const Enclosure& x);

// Gamma(two_s/2) for positive half-integers (complete gamma).
Enclosure gamma_half(long two_s, Precision prec);

}  // namespace fopt
