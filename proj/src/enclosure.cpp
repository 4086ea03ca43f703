#include "fopt/enclosure.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace fopt {

namespace {

// Stack temporary at a given precision.
struct Tmp {
  mpfr_t x;
  explicit Tmp(int prec) { mpfr_init2(x, prec); }
  ~Tmp() { mpfr_clear(x); }
  operator mpfr_ptr() { return x; }
  operator mpfr_srcptr() const { return x; }
};

void check_finite(mpfr_srcptr m, mpfr_srcptr r) {
  if (!mpfr_number_p(m) || !mpfr_number_p(r))
    throw PrecisionError("enclosure radius or midpoint is not finite");
}

}  // namespace

Enclosure::Enclosure(Precision prec) {
  mpfr_init2(mid_, prec.bits);
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Enclosure::Enclosure(const Enclosure& o) {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Enclosure::Enclosure(Enclosure&& o) noexcept {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_init2(rad_, kRadiusBits);
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

Enclosure& Enclosure::operator=(const Enclosure& o) {
  if (this != &o) {
    mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
  }
  return *this;
}

Enclosure& Enclosure::operator=(Enclosure&& o) noexcept {
  if (this != &o) {
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
  }
  return *this;
}

Enclosure::~Enclosure() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

void Enclosure::bump_radius_ulp(int ternary) {
  if (ternary == 0) return;
  if (mpfr_zero_p(mid_)) throw PrecisionError("inexact zero midpoint");
  // |round(x) - x| <= 2^(exp-1-prec) for RNDN; use 2^(exp-prec) for margin.
  Tmp u(kRadiusBits);
  mpfr_set_ui_2exp(u, 1, mpfr_get_exp(mid_) - mpfr_get_prec(mid_), MPFR_RNDU);
  mpfr_add(rad_, rad_, u, MPFR_RNDU);
}

Enclosure Enclosure::exact(long v, Precision prec) {
  Enclosure e(prec);
  int t = mpfr_set_si(e.mid_, v, MPFR_RNDN);
  e.bump_radius_ulp(t);
  return e;
}

Enclosure Enclosure::exact_double(double v, Precision prec) {
  Enclosure e(prec);
  int t = mpfr_set_d(e.mid_, v, MPFR_RNDN);
  e.bump_radius_ulp(t);
  return e;
}

Enclosure Enclosure::from_rational(const mpq_class& q, Precision prec) {
  Enclosure e(prec);
  int t = mpfr_set_q(e.mid_, q.get_mpq_t(), MPFR_RNDN);
  e.bump_radius_ulp(t);
  return e;
}

Enclosure Enclosure::from_decimal(const std::string& s, Precision prec) {
  Enclosure e(prec);
  char* end = nullptr;
  int t = mpfr_strtofr(e.mid_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || (end && *end != '\0'))
    throw ParseError("invalid decimal literal: '" + s + "'");
  e.bump_radius_ulp(t);
  return e;
}

Enclosure Enclosure::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec) {
  if (mpfr_cmp(lo, hi) > 0) throw Error("from_endpoints: lo > hi");
  Enclosure e(prec);
  int t = mpfr_add(e.mid_, lo, hi, MPFR_RNDN);
  t |= mpfr_div_2ui(e.mid_, e.mid_, 1, MPFR_RNDN);
  Tmp h(prec.bits + 16);
  mpfr_sub(h, hi, lo, MPFR_RNDU);
  mpfr_div_2ui(h, h, 1, MPFR_RNDU);
  mpfr_set(e.rad_, h.x, MPFR_RNDU);
  e.bump_radius_ulp(t != 0);
  check_finite(e.mid_, e.rad_);
  return e;
}

Enclosure Enclosure::pi(Precision prec) {
  Enclosure e(prec);
  int t = mpfr_const_pi(e.mid_, MPFR_RNDN);
  e.bump_radius_ulp(t);
  return e;
}

Enclosure Enclosure::with_precision(Precision prec) const {
  Enclosure e(prec);
  int t = mpfr_set(e.mid_, mid_, MPFR_RNDN);
  mpfr_set(e.rad_, rad_, MPFR_RNDU);
  e.bump_radius_ulp(t);
  return e;
}

void Enclosure::lower(mpfr_ptr out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void Enclosure::upper(mpfr_ptr out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

double Enclosure::lower_double() const {
  Tmp t(precision_bits());
  lower(t);
  return mpfr_get_d(t, MPFR_RNDD);
}

double Enclosure::upper_double() const {
  Tmp t(precision_bits());
  upper(t);
  return mpfr_get_d(t, MPFR_RNDU);
}

void Enclosure::mag(mpfr_ptr out) const {
  mpfr_abs(out, mid_, MPFR_RNDU);
  mpfr_add(out, out, rad_, MPFR_RNDU);
}

void Enclosure::mig(mpfr_ptr out) const {
  mpfr_abs(out, mid_, MPFR_RNDD);
  mpfr_sub(out, out, rad_, MPFR_RNDD);
  if (mpfr_sgn(out) < 0) mpfr_set_zero(out, 1);
}

bool Enclosure::contains_zero() const {
  Tmp a(kRadiusBits);
  mpfr_abs(a, mid_, MPFR_RNDD);  // round |mid| down: conservative
  return mpfr_cmp(a, rad_) <= 0;
}

bool Enclosure::contains(const mpq_class& q) const {
  Tmp d(precision_bits() + 64);
  mpfr_set_q(d, q.get_mpq_t(), MPFR_RNDN);
  mpfr_sub(d, mid_, d, MPFR_RNDA);
  mpfr_abs(d, d, MPFR_RNDD);
  // |mid - q| computed with directed rounding can overshoot by one ulp;
  // compare against rad with a conservative direction.
  return mpfr_cmp(d, rad_) <= 0;
}

bool Enclosure::is_positive() const {
  Tmp lo(precision_bits());
  lower(lo);
  return mpfr_sgn(lo.x) > 0;
}

bool Enclosure::is_nonnegative() const {
  Tmp lo(precision_bits());
  lower(lo);
  return mpfr_sgn(lo.x) >= 0;
}

bool Enclosure::overlaps(const Enclosure& o) const {
  int p = std::max(precision_bits(), o.precision_bits());
  Tmp a(p), b(p);
  upper(a);
  o.lower(b);
  if (mpfr_cmp(a, b) < 0) return false;
  o.upper(a);
  lower(b);
  return mpfr_cmp(a, b) >= 0;
}

bool Enclosure::contained_in(const Enclosure& o) const {
  int p = std::max(precision_bits(), o.precision_bits());
  Tmp a(p), b(p);
  lower(a);
  o.lower(b);
  if (mpfr_cmp(a, b) < 0) return false;
  upper(a);
  o.upper(b);
  return mpfr_cmp(a, b) <= 0;
}

Enclosure Enclosure::operator-() const {
  Enclosure e(*this);
  mpfr_neg(e.mid_, e.mid_, MPFR_RNDN);  // exact
  return e;
}

Enclosure add(const Enclosure& a, const Enclosure& b) {
  Enclosure e(Precision{std::max(a.precision_bits(), b.precision_bits())});
  int t = mpfr_add(e.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(e.rad_, a.rad_, b.rad_, MPFR_RNDU);
  e.bump_radius_ulp(t);
  check_finite(e.mid_, e.rad_);
  return e;
}

Enclosure sub(const Enclosure& a, const Enclosure& b) {
  Enclosure e(Precision{std::max(a.precision_bits(), b.precision_bits())});
  int t = mpfr_sub(e.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(e.rad_, a.rad_, b.rad_, MPFR_RNDU);
  e.bump_radius_ulp(t);
  check_finite(e.mid_, e.rad_);
  return e;
}

namespace {
// rad(out) = |am|*br + |bm|*ar + ar*br, rounded up.
void mul_radius(mpfr_ptr out, mpfr_srcptr am, mpfr_srcptr ar, mpfr_srcptr bm, mpfr_srcptr br) {
  Tmp t1(Enclosure::kRadiusBits), t2(Enclosure::kRadiusBits);
  mpfr_abs(t1, am, MPFR_RNDU);
  mpfr_mul(t1, t1, br, MPFR_RNDU);
  mpfr_abs(t2, bm, MPFR_RNDU);
  mpfr_mul(t2, t2, ar, MPFR_RNDU);
  mpfr_add(t1, t1, t2, MPFR_RNDU);
  mpfr_mul(t2, ar, br, MPFR_RNDU);
  mpfr_add(out, t1, t2, MPFR_RNDU);
}
}  // namespace

Enclosure mul(const Enclosure& a, const Enclosure& b) {
  Enclosure e(Precision{std::max(a.precision_bits(), b.precision_bits())});
  Tmp r(Enclosure::kRadiusBits);
  mul_radius(r, a.mid_, a.rad_, b.mid_, b.rad_);
  int t = mpfr_mul(e.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_set(e.rad_, r.x, MPFR_RNDU);
  e.bump_radius_ulp(t);
  check_finite(e.mid_, e.rad_);
  return e;
}

void Enclosure::addmul(const Enclosure& a, const Enclosure& b) {
  Enclosure p = mul(a, b);
  *this += p;
}

void Enclosure::submul(const Enclosure& a, const Enclosure& b) {
  Enclosure p = mul(a, b);
  *this -= p;
}

Enclosure div(const Enclosure& a, const Enclosure& b) {
  int prec = std::max(a.precision_bits(), b.precision_bits());
  // Require b bounded away from zero.
  Tmp bmig(Enclosure::kRadiusBits);
  mpfr_abs(bmig, b.mid_, MPFR_RNDD);
  mpfr_sub(bmig, bmig, b.rad_, MPFR_RNDD);
  if (mpfr_sgn(bmig.x) <= 0)
    throw PrecisionError("division by an enclosure containing zero");
  Enclosure e{Precision{prec}};
  int t = mpfr_div(e.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // |x/y - am/bm| <= (|am|*br + |bm|*ar) / (|bm| * (|bm| - br))
  Tmp num(Enclosure::kRadiusBits), t2(Enclosure::kRadiusBits), den(Enclosure::kRadiusBits);
  mpfr_abs(num, a.mid_, MPFR_RNDU);
  mpfr_mul(num, num, b.rad_, MPFR_RNDU);
  mpfr_abs(t2, b.mid_, MPFR_RNDU);
  mpfr_mul(t2, t2, a.rad_, MPFR_RNDU);
  mpfr_add(num, num, t2, MPFR_RNDU);
  mpfr_abs(den, b.mid_, MPFR_RNDD);
  mpfr_mul(den, den, bmig, MPFR_RNDD);
  mpfr_div(e.rad_, num, den, MPFR_RNDU);
  e.bump_radius_ulp(t);
  check_finite(e.mid_, e.rad_);
  return e;
}

Enclosure& Enclosure::operator+=(const Enclosure& o) { return *this = add(*this, o); }
Enclosure& Enclosure::operator-=(const Enclosure& o) { return *this = sub(*this, o); }
Enclosure& Enclosure::operator*=(const Enclosure& o) { return *this = mul(*this, o); }
Enclosure& Enclosure::operator/=(const Enclosure& o) { return *this = div(*this, o); }

Enclosure Enclosure::mul_rational(const mpq_class& q) const {
  int prec = precision_bits();
  Tmp qf_lo(prec + 16), qf_hi(prec + 16);
  mpfr_set_q(qf_lo, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(qf_hi, q.get_mpq_t(), MPFR_RNDU);
  Enclosure qe = from_endpoints(qf_lo, qf_hi, Precision{prec});
  return mul(*this, qe);
}

Enclosure Enclosure::mul_si(long v) const {
  Enclosure e(*this);
  int t = mpfr_mul_si(e.mid_, e.mid_, v, MPFR_RNDN);
  Tmp av(kRadiusBits);
  mpfr_set_si(av, v, MPFR_RNDU);
  mpfr_abs(av, av, MPFR_RNDU);
  mpfr_mul(e.rad_, e.rad_, av, MPFR_RNDU);
  e.bump_radius_ulp(t);
  check_finite(e.mid_, e.rad_);
  return e;
}

Enclosure Enclosure::div_si(long v) const {
  if (v == 0) throw PrecisionError("division by zero");
  Enclosure e(*this);
  int t = mpfr_div_si(e.mid_, e.mid_, v, MPFR_RNDN);
  Tmp av(kRadiusBits);
  mpfr_set_si(av, v, MPFR_RNDD);
  mpfr_abs(av, av, MPFR_RNDD);
  mpfr_div(e.rad_, e.rad_, av, MPFR_RNDU);
  e.bump_radius_ulp(t);
  check_finite(e.mid_, e.rad_);
  return e;
}

Enclosure Enclosure::mul_2exp(long e2) const {
  Enclosure e(*this);
  mpfr_mul_2si(e.mid_, e.mid_, e2, MPFR_RNDN);  // exact
  mpfr_mul_2si(e.rad_, e.rad_, e2, MPFR_RNDU);
  return e;
}

Enclosure Enclosure::abs_interval() const {
  int prec = precision_bits();
  Tmp lo(prec), hi(prec);
  mig(lo);
  mag(hi);
  return from_endpoints(lo, hi, Precision{prec});
}

Enclosure Enclosure::sqrt_interval() const {
  int prec = precision_bits();
  Tmp lo(prec), hi(prec), r(prec);
  lower(lo);
  if (mpfr_sgn(lo.x) < 0) throw PrecisionError("sqrt of enclosure with negative lower endpoint");
  upper(hi);
  mpfr_sqrt(r, lo, MPFR_RNDD);
  Tmp r2(prec);
  mpfr_sqrt(r2, hi, MPFR_RNDU);
  return from_endpoints(r, r2, Precision{prec});
}

Enclosure Enclosure::exp_interval() const {
  int prec = precision_bits();
  Tmp lo(prec), hi(prec), a(prec), b(prec);
  lower(lo);
  upper(hi);
  mpfr_exp(a, lo, MPFR_RNDD);
  mpfr_exp(b, hi, MPFR_RNDU);
  return from_endpoints(a, b, Precision{prec});
}

Enclosure Enclosure::pow_ui(unsigned long k) const {
  int prec = precision_bits();
  if (k == 0) return exact(1, Precision{prec});
  Tmp lo(prec), hi(prec), a(prec), b(prec);
  if (k % 2 == 0) {
    // even power: monotone in |x|
    mig(lo);
    mag(hi);
    mpfr_pow_ui(a, lo, k, MPFR_RNDD);
    mpfr_pow_ui(b, hi, k, MPFR_RNDU);
    return from_endpoints(a, b, Precision{prec});
  }
  lower(lo);
  upper(hi);
  mpfr_pow_ui(a, lo, k, MPFR_RNDD);
  mpfr_pow_ui(b, hi, k, MPFR_RNDU);
  return from_endpoints(a, b, Precision{prec});
}

std::string Enclosure::mid_decimal(int digits) const {
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRe", digits - 1);
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), fmt, mid_);
  return std::string(buf.data());
}

std::string Enclosure::debug_string() const {
  std::vector<char> buf(128);
  mpfr_snprintf(buf.data(), buf.size(), "[%.20Re +- %.5Re]", mid_, rad_);
  return std::string(buf.data());
}

Enclosure sup_clip_positive(const Enclosure& e) {
  int prec = e.precision_bits();
  Tmp up(prec);
  e.upper(up);
  if (mpfr_sgn(up.x) > 0) return Enclosure::from_endpoints(up, up, Precision{prec});
  return Enclosure::zero(Precision{prec});
}

Enclosure erfc_enclosure(const Enclosure& x) {
  int prec = x.precision_bits();
  Tmp lo(prec), hi(prec), a(prec + 16), b(prec + 16);
  x.lower(lo);
  x.upper(hi);
  // erfc is decreasing
  mpfr_erfc(a, hi, MPFR_RNDD);
  mpfr_erfc(b, lo, MPFR_RNDU);
  return Enclosure::from_endpoints(a, b, Precision{prec});
}

Enclosure upper_incomplete_gamma(const Enclosure& s, const Enclosure& x) {
  if (!s.is_exact())
    throw PrecisionError("upper_incomplete_gamma: s must be an exact enclosure");
  if (mpfr_sgn(static_cast<mpfr_srcptr>(s.mid())) <= 0) throw Error("upper_incomplete_gamma: s must be positive");
  int prec = std::max(s.precision_bits(), x.precision_bits());
  Tmp lo(prec), hi(prec), a(prec + 16), b(prec + 16);
  x.lower(lo);
  if (mpfr_sgn(lo.x) < 0) {
    if (mpfr_sgn(static_cast<mpfr_srcptr>(x.mid())) < 0) throw Error("upper_incomplete_gamma: x must be >= 0");
    mpfr_set_zero(lo, 1);
  }
  x.upper(hi);
  // Gamma(s, .) is decreasing in x
  mpfr_gamma_inc(a, s.mid(), hi, MPFR_RNDD);
  mpfr_gamma_inc(b, s.mid(), lo, MPFR_RNDU);
  return Enclosure::from_endpoints(a, b, Precision{prec});
}

Enclosure upper_incomplete_gamma_half(long two_s, const Enclosure& x) {
  if (two_s <= 0) throw Error("upper_incomplete_gamma_half: s must be positive");
  int prec = x.precision_bits();
  Precision P{prec};
  if (!x.is_nonnegative()) throw Error("upper_incomplete_gamma_half: x must be >= 0");
  Enclosure ex = (-x).exp_interval();
  Enclosure g(P);
  long base;
  if (two_s % 2 == 1) {
    // Gamma(1/2, x) = sqrt(pi) * erfc(sqrt(x))
    g = Enclosure::pi(P).sqrt_interval() * erfc_enclosure(x.sqrt_interval());
    base = 1;
  } else {
    g = ex;  // Gamma(1, x) = e^{-x}
    base = 2;
  }
  // Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}, climbing s by 1 (two_s by 2).
  Enclosure xs(P);
  bool xs_init = false;
  for (long ts = base; ts < two_s; ts += 2) {
    // xs = x^{ts/2}
    if (!xs_init) {
      xs = (ts % 2 == 1) ? x.sqrt_interval() : x;
      if (ts == 2) xs = x;
      xs_init = true;
    } else {
      xs *= x;
    }
    Enclosure term = xs * ex;
    g = g.mul_si(ts).div_si(2) + term;
  }
  return g;
}

Enclosure gamma_half(long two_s, Precision prec) {
  if (two_s <= 0) throw Error("gamma_half: s must be positive");
  Enclosure g(prec);
  if (two_s % 2 == 1) {
    g = Enclosure::pi(prec).sqrt_interval();  // Gamma(1/2)
    for (long ts = 1; ts < two_s; ts += 2) g = g.mul_si(ts).div_si(2);
  } else {
    g = Enclosure::exact(1, prec);  // Gamma(1)
    for (long ts = 2; ts < two_s; ts += 2) g = g.mul_si(ts).div_si(2);
  }
  return g;
}

}  // namespace fopt
