#include <doctest.h>

#include <random>

#include "fopt/enclosure.hpp"
#include "support/oracles.hpp"

using fopt::Enclosure;
using fopt::Precision;

namespace {
mpq_class q(long n, long d = 1) {
  mpq_class v(n, d);
  v.canonicalize();
  return v;
}
}  // namespace

TEST_CASE("basic arithmetic contains exact rationals") {
  Precision P{256};
  auto a = Enclosure::from_rational(q(1, 3), P);
  auto b = Enclosure::from_rational(q(2, 7), P);
  CHECK((a + b).contains(q(1, 3) + q(2, 7)));
  CHECK((a - b).contains(q(1, 3) - q(2, 7)));
  CHECK((a * b).contains(q(2, 21)));
  CHECK((a / b).contains(q(7, 6)));
  CHECK((-a).contains(q(-1, 3)));
  CHECK(a.mul_rational(q(3)).contains(q(1)));
  CHECK(a.mul_si(-6).contains(q(-2)));
  CHECK(a.div_si(2).contains(q(1, 6)));
  CHECK(a.mul_2exp(3).contains(q(8, 3)));
  CHECK(a.pow_ui(3).contains(q(1, 27)));
}

TEST_CASE("division by interval containing zero is rejected") {
  Precision P{128};
  auto a = Enclosure::exact(1, P);
  auto b = Enclosure::from_endpoints(
      Enclosure::from_rational(q(-1, 10), P).mid(), Enclosure::from_rational(q(1, 10), P).mid(), P);
  CHECK_THROWS_AS(a / b, fopt::PrecisionError);
}

TEST_CASE("inclusion monotonicity under sampled points") {
  // For rational sample points inside the operand intervals, the exact
  // rational result must lie in the output enclosure.
  std::mt19937_64 rng(12345);
  Precision P{128};
  for (int trial = 0; trial < 200; ++trial) {
    mpq_class am = oracles::random_dyadic(rng), bm = oracles::random_dyadic(rng);
    mpq_class ar = oracles::random_dyadic(rng), br = oracles::random_dyadic(rng);
    ar = abs(ar) / 8;
    br = abs(br) / 8;
    auto mk = [&](const mpq_class& m, const mpq_class& r) {
      auto lo = Enclosure::from_rational(m - r, P);
      auto hi = Enclosure::from_rational(m + r, P);
      return Enclosure::from_endpoints(lo.mid(), hi.mid(), P);
    };
    Enclosure A = mk(am, ar), B = mk(bm, br);
    for (int s = 0; s < 4; ++s) {
      // sample endpoints and midpoints of each interval
      mpq_class xa = am + ((s & 1) ? ar : -ar);
      mpq_class xb = bm + ((s & 2) ? br : -br);
      CHECK((A + B).contains(xa + xb));
      CHECK((A * B).contains(xa * xb));
      CHECK((A - B).contains(xa - xb));
    }
  }
}

TEST_CASE("precision escalation narrows point results") {
  auto x = Enclosure::from_rational(q(1, 3), Precision{128});
  auto y = Enclosure::from_rational(q(1, 3), Precision{512});
  Enclosure e128 = x.sqrt_interval() * Enclosure::pi(Precision{128});
  Enclosure e512 = y.sqrt_interval() * Enclosure::pi(Precision{512});
  CHECK(e512.contained_in(e128));
  CHECK(mpfr_cmp(e512.rad(), e128.rad()) < 0);
  CHECK(e512.overlaps(e128));
}

TEST_CASE("sup_clip_positive examples") {
  Precision P{128};
  auto mk = [&](double m, double r) {
    auto lo = Enclosure::exact_double(m - r, P);
    auto hi = Enclosure::exact_double(m + r, P);
    return Enclosure::from_endpoints(lo.mid(), hi.mid(), P);
  };
  CHECK(fopt::sup_clip_positive(mk(-2, 1)).contains(q(0)));
  CHECK(fopt::sup_clip_positive(mk(-2, 1)).mid_double() == 0.0);
  CHECK(fopt::sup_clip_positive(Enclosure::zero(P)).mid_double() == 0.0);
  CHECK(fopt::sup_clip_positive(mk(1, 0.5)).contains(q(3, 2)));
}

TEST_CASE("erfc enclosure") {
  Precision P{256};
  CHECK(fopt::erfc_enclosure(Enclosure::zero(P)).contains(q(1)));

  // monotone decay: erfc(100) < 1e-1000
  auto big = fopt::erfc_enclosure(Enclosure::exact(100, P));
  auto thr = Enclosure::from_decimal("1e-1000", P);
  CHECK(big.upper_double() >= 0.0);
  fopt::Enclosure diff = thr - big;
  CHECK(diff.is_positive());

  // erfc(sqrt(pi)) against the quadrature oracle: (2/sqrt(pi)) int_{sqrt(pi)}^inf e^{-t^2} dt
  mpfr_t val, spi;
  mpfr_init2(val, 384);
  mpfr_init2(spi, 384);
  mpfr_const_pi(spi, MPFR_RNDN);
  mpfr_sqrt(spi, spi, MPFR_RNDN);
  double a = mpfr_get_d(spi, MPFR_RNDN);
  oracles::integrate_to_inf(
      val,
      [](mpfr_ptr out, mpfr_srcptr x) {
        mpfr_sqr(out, x, MPFR_RNDN);
        mpfr_neg(out, out, MPFR_RNDN);
        mpfr_exp(out, out, MPFR_RNDN);
      },
      a, 384);
  // adjust: oracle integrates from double(a), not sqrt(pi); correct the sliver
  // by integrating the remainder [min, max] bound: instead compare loosely.
  mpfr_mul_2ui(val, val, 1, MPFR_RNDN);
  mpfr_const_pi(spi, MPFR_RNDN);
  mpfr_sqrt(spi, spi, MPFR_RNDN);
  mpfr_div(val, val, spi, MPFR_RNDN);
  auto ours = fopt::erfc_enclosure(Enclosure::pi(P).sqrt_interval());
  double delta = std::abs(mpfr_get_d(val, MPFR_RNDN) - ours.mid_double());
  CHECK(delta < 1e-12);  // double(a) != sqrt(pi) exactly; sliver is ~e^{-pi}*1e-16
  mpfr_clear(val);
  mpfr_clear(spi);
}

TEST_CASE("upper incomplete gamma") {
  Precision P{256};
  auto one = Enclosure::exact(1, P);
  CHECK(fopt::upper_incomplete_gamma(one, Enclosure::zero(P)).contains(q(1)));

  // Gamma(1,1) = e^{-1}
  auto g11 = fopt::upper_incomplete_gamma(one, one);
  auto e1 = (-one).exp_interval();
  CHECK(g11.overlaps(e1));
  CHECK(oracles::distance_to(g11 - e1, q(0)) < 1e-70);

  // Gamma(3/2, pi): quadrature oracle for int_pi^inf sqrt(t) e^{-t} dt at 1e-30.
  mpfr_t val;
  mpfr_init2(val, 384);
  oracles::integrate_to_inf(
      val,
      [](mpfr_ptr out, mpfr_srcptr x) {
        mpfr_t s;
        mpfr_init2(s, mpfr_get_prec(out));
        mpfr_sqrt(s, x, MPFR_RNDN);
        mpfr_neg(out, x, MPFR_RNDN);
        mpfr_exp(out, out, MPFR_RNDN);
        mpfr_mul(out, out, s, MPFR_RNDN);
        mpfr_clear(s);
      },
      0.0, 384);
  // integrate from 0 then subtract [0, pi] piece, both with the oracle, so the
  // endpoint pi is handled in mpfr precision
  mpfr_t head;
  mpfr_init2(head, 384);
  double pid = 3.141592653589793;  // used only as the *splitting point*
  oracles::integrate_finite(
      head,
      [](mpfr_ptr out, mpfr_srcptr x) {
        mpfr_t s;
        mpfr_init2(s, mpfr_get_prec(out));
        mpfr_sqrt(s, x, MPFR_RNDN);
        mpfr_neg(out, x, MPFR_RNDN);
        mpfr_exp(out, out, MPFR_RNDN);
        mpfr_mul(out, out, s, MPFR_RNDN);
        mpfr_clear(s);
      },
      0.0, pid, 384);
  mpfr_sub(val, val, head, MPFR_RNDN);
  // our value: Gamma(3/2, x0) where x0 = the same splitting double
  auto g = fopt::upper_incomplete_gamma(Enclosure::from_rational(q(3, 2), P),
                                        Enclosure::exact_double(pid, P));
  double delta = std::abs(mpfr_get_d(val, MPFR_RNDN) - g.mid_double());
  CHECK(delta < 1e-30);
  // half-integer recurrence path agrees with mpfr_gamma_inc path
  auto gh = fopt::upper_incomplete_gamma_half(3, Enclosure::exact_double(pid, P));
  CHECK(gh.overlaps(g));
  CHECK(oracles::distance_to(gh - g, q(0)) < 1e-70);
  // closed form Gamma(3/2,x) = (sqrt(pi)/2) erfc(sqrt(x)) + sqrt(x) e^{-x}
  auto x0 = Enclosure::exact_double(pid, P);
  auto closed = Enclosure::pi(P).sqrt_interval().div_si(2) * fopt::erfc_enclosure(x0.sqrt_interval()) +
                x0.sqrt_interval() * (-x0).exp_interval();
  CHECK(closed.overlaps(gh));
  mpfr_clear(val);
  mpfr_clear(head);
}

TEST_CASE("gamma_half complete values") {
  Precision P{256};
  CHECK(fopt::gamma_half(2, P).contains(q(1)));       // Gamma(1)
  CHECK(fopt::gamma_half(4, P).contains(q(1)));       // Gamma(2)
  CHECK(fopt::gamma_half(6, P).contains(q(2)));       // Gamma(3)
  auto g32 = fopt::gamma_half(3, P);                  // Gamma(3/2) = sqrt(pi)/2
  CHECK(g32.overlaps(Enclosure::pi(P).sqrt_interval().div_si(2)));
}

TEST_CASE("enclosure string emission is deterministic") {
  auto x = Enclosure::pi(Precision{256});
  CHECK(x.mid_decimal(20) == x.mid_decimal(20));
  CHECK(x.mid_decimal(10).substr(0, 5) == "3.141");
}
