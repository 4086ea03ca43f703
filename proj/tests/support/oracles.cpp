#include "support/oracles.hpp"

#include <cmath>

namespace oracles {

namespace {

struct T {
  mpfr_t x;
  explicit T(int p) { mpfr_init2(x, p); }
  ~T() { mpfr_clear(x); }
  operator mpfr_ptr() { return x; }
  operator mpfr_srcptr() const { return x; }
};

// One trapezoid level of the transformed integrand, step h, |t| <= tmax.
// map(out_x, out_w, t) fills the abscissa and weight.
using Map = std::function<void(mpfr_ptr x, mpfr_ptr w, mpfr_srcptr t)>;

void levels(mpfr_ptr out, const Integrand& f, const Map& map, int prec) {
  T sum(prec), prev(prec), cur(prec), t(prec), x(prec), w(prec), fx(prec), term(prec), h(prec),
      tol(prec), diff(prec), scale(prec);
  mpfr_set_d(h, 1.0, MPFR_RNDN);
  mpfr_set_ui_2exp(tol, 1, -(prec - 48), MPFR_RNDN);
  mpfr_set_zero(prev, 1);
  double tmax = std::log(2.0 * prec);  // sinh(tmax) ~ prec digits of decay
  for (int level = 0; level < 14; ++level) {
    mpfr_set_zero(sum, 1);
    long n = (long)std::ceil(tmax / mpfr_get_d(h, MPFR_RNDN));
    for (long i = -n; i <= n; ++i) {
      if (level > 0 && i % 2 == 0) continue;  // refine: only new points
      mpfr_mul_si(t, h, i, MPFR_RNDN);
      map(x, w, t);
      f(fx, x);
      mpfr_mul(term, fx, w, MPFR_RNDN);
      mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    mpfr_mul(sum, sum, h, MPFR_RNDN);
    if (level == 0) {
      mpfr_set(cur.x, sum.x, MPFR_RNDN);
    } else {
      mpfr_div_2ui(cur, prev, 1, MPFR_RNDN);
      mpfr_add(cur, cur, sum, MPFR_RNDN);
      mpfr_sub(diff, cur, prev, MPFR_RNDN);
      mpfr_abs(diff, diff, MPFR_RNDN);
      mpfr_abs(scale, cur, MPFR_RNDN);
      mpfr_add_ui(scale, scale, 1, MPFR_RNDN);
      mpfr_mul(scale, scale, tol, MPFR_RNDN);
      if (level > 3 && mpfr_cmp(diff, scale) < 0) {
        mpfr_set(out, cur.x, MPFR_RNDN);
        return;
      }
    }
    mpfr_set(prev.x, cur.x, MPFR_RNDN);
    mpfr_div_2ui(h, h, 1, MPFR_RNDN);
  }
  mpfr_set(out, prev.x, MPFR_RNDN);
}

}  // namespace

void integrate_finite(mpfr_ptr out, const Integrand& f, double a, double b, int prec) {
  // x = (a+b)/2 + (b-a)/2 tanh((pi/2) sinh t), w = (b-a)/2 (pi/2) cosh t / cosh^2((pi/2) sinh t)
  int wp = prec + 64;
  Map map = [&, wp](mpfr_ptr x, mpfr_ptr w, mpfr_srcptr t) {
    T sh(wp), ch(wp), arg(wp), th(wp), sech2(wp), pih(wp);
    mpfr_const_pi(pih, MPFR_RNDN);
    mpfr_div_2ui(pih, pih, 1, MPFR_RNDN);
    mpfr_sinh_cosh(sh, ch, t, MPFR_RNDN);
    mpfr_mul(arg, pih, sh, MPFR_RNDN);
    mpfr_tanh(th, arg, MPFR_RNDN);
    mpfr_cosh(sech2, arg, MPFR_RNDN);
    mpfr_sqr(sech2, sech2, MPFR_RNDN);
    mpfr_set_d(x, (b - a) / 2, MPFR_RNDN);
    mpfr_mul(w, x, pih, MPFR_RNDN);
    mpfr_mul(w, w, ch, MPFR_RNDN);
    mpfr_div(w, w, sech2, MPFR_RNDN);
    mpfr_mul(x, x, th, MPFR_RNDN);
    mpfr_add_d(x, x, (a + b) / 2, MPFR_RNDN);
  };
  levels(out, f, map, wp);
  mpfr_prec_round(out, prec, MPFR_RNDN);
}

void integrate_to_inf(mpfr_ptr out, const Integrand& f, double a, int prec) {
  // x = a + exp((pi/2) sinh t), w = (pi/2) cosh t * exp((pi/2) sinh t)
  int wp = prec + 64;
  Map map = [&, wp](mpfr_ptr x, mpfr_ptr w, mpfr_srcptr t) {
    T sh(wp), ch(wp), arg(wp), ex(wp), pih(wp);
    mpfr_const_pi(pih, MPFR_RNDN);
    mpfr_div_2ui(pih, pih, 1, MPFR_RNDN);
    mpfr_sinh_cosh(sh, ch, t, MPFR_RNDN);
    mpfr_mul(arg, pih, sh, MPFR_RNDN);
    mpfr_exp(ex, arg, MPFR_RNDN);
    mpfr_add_d(x, ex, a, MPFR_RNDN);
    mpfr_mul(w, pih, ch, MPFR_RNDN);
    mpfr_mul(w, w, ex, MPFR_RNDN);
  };
  levels(out, f, map, wp);
  mpfr_prec_round(out, prec, MPFR_RNDN);
}

std::vector<mpq_class> char_poly(const std::vector<std::vector<mpq_class>>& M) {
  int n = (int)M.size();
  std::vector<std::vector<mpq_class>> Mk = M;
  std::vector<mpq_class> c(n + 1, mpq_class(0));
  c[n] = 1;
  for (int k = 1; k <= n; ++k) {
    mpq_class tr(0);
    for (int i = 0; i < n; ++i) tr += Mk[i][i];
    c[n - k] = -tr / k;
    if (k == n) break;
    // Mk <- M (Mk + c[n-k] I)
    std::vector<std::vector<mpq_class>> next(n, std::vector<mpq_class>(n, mpq_class(0)));
    for (int i = 0; i < n; ++i) Mk[i][i] += c[n - k];
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (M[i][l] == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += M[i][l] * Mk[l][j];
      }
    Mk = std::move(next);
  }
  return c;
}

bool is_psd_exact(const std::vector<std::vector<mpq_class>>& M) {
  int n = (int)M.size();
  auto c = char_poly(M);
  for (int k = 0; k < n; ++k) {
    mpq_class v = c[k];
    if ((n - k) % 2 != 0) v = -v;
    if (v < 0) return false;
  }
  return true;
}

mpq_class random_dyadic(std::mt19937_64& rng) {
  long num = (long)(rng() % 131073) - 65536;
  mpq_class q(num, 65536);
  q.canonicalize();
  return q;
}

double distance_to(const fopt::Enclosure& e, const mpq_class& q) {
  fopt::Enclosure d = e - fopt::Enclosure::from_rational(q, e.precision());
  fopt::Enclosure a = d.abs_interval();
  return a.upper_double();
}

}  // namespace oracles
