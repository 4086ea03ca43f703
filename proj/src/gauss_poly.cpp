#include "fopt/gauss_poly.hpp"

#include <algorithm>

namespace fopt {

namespace {

Precision coeff_precision(const EvenGaussianPoly& p) {
  int bits = 64;
  for (const auto& c : p.coeffs) bits = std::max(bits, c.precision_bits());
  return Precision{bits};
}

// pi^k ladder at a given precision.
std::vector<Enclosure> pi_powers(int kmax, Precision prec) {
  std::vector<Enclosure> pw;
  pw.reserve(kmax + 1);
  pw.push_back(Enclosure::exact(1, prec));
  Enclosure pi = Enclosure::pi(prec);
  for (int k = 1; k <= kmax; ++k) pw.push_back(pw.back() * pi);
  return pw;
}

}  // namespace

RatPoly laguerre_coeffs(int k) {
  if (k < 0) throw DimensionError("laguerre_coeffs: negative degree");
  RatPoly prev2{mpq_class(1)};
  if (k == 0) return prev2;
  RatPoly prev{mpq_class(1, 2), mpq_class(-1)};
  if (k == 1) return prev;
  for (int n = 1; n < k; ++n) {
    // (n+1) L_{n+1} = (2n+1/2 - w) L_n - (n-1/2) L_{n-1}
    RatPoly cur(n + 2, mpq_class(0));
    mpq_class c1(4 * n + 1, 2), c2(2 * n - 1, 2);
    for (int m = 0; m <= n; ++m) {
      cur[m] += c1 * prev[m];
      cur[m + 1] -= prev[m];
    }
    for (int m = 0; m <= n - 1; ++m) cur[m] -= c2 * prev2[m];
    mpq_class inv(1, n + 1);
    for (auto& c : cur) c *= inv;
    prev2 = std::move(prev);
    prev = std::move(cur);
  }
  return prev;
}

LaguerreTable::LaguerreTable(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw DimensionError("LaguerreTable: negative degree");
  int N = max_degree;
  lag_mon_.reserve(N + 1);
  lag_mon_.push_back(RatPoly{mpq_class(1)});
  if (N >= 1) lag_mon_.push_back(RatPoly{mpq_class(1, 2), mpq_class(-1)});
  for (int n = 1; n < N; ++n) {
    RatPoly cur(n + 2, mpq_class(0));
    mpq_class c1(4 * n + 1, 2), c2(2 * n - 1, 2);
    const RatPoly& p1 = lag_mon_[n];
    const RatPoly& p2 = lag_mon_[n - 1];
    for (int m = 0; m <= n; ++m) {
      cur[m] += c1 * p1[m];
      cur[m + 1] -= p1[m];
    }
    for (int m = 0; m <= n - 1; ++m) cur[m] -= c2 * p2[m];
    mpq_class inv(1, n + 1);
    for (auto& c : cur) c *= inv;
    lag_mon_.push_back(std::move(cur));
  }
  // w^m in Laguerre coordinates via the multiplication-by-w recurrence:
  // (W x)_i = -i x_{i-1} + (2i+1/2) x_i - (i+1/2) x_{i+1}
  mon_lag_.reserve(N + 1);
  mon_lag_.push_back(RatPoly{mpq_class(1)});
  for (int m = 1; m <= N; ++m) {
    const RatPoly& x = mon_lag_[m - 1];
    RatPoly y(m + 1, mpq_class(0));
    for (int i = 0; i <= m; ++i) {
      mpq_class t(0);
      if (i >= 1 && i - 1 < (int)x.size()) t -= mpq_class(i) * x[i - 1];
      if (i < (int)x.size()) t += mpq_class(4 * i + 1, 2) * x[i];
      if (i + 1 < (int)x.size()) t -= mpq_class(2 * i + 1, 2) * x[i + 1];
      y[i] = t;
    }
    mon_lag_.push_back(std::move(y));
  }
  fact_.reserve(2 * N + 2);
  fact_.push_back(mpz_class(1));
  for (int k = 1; k <= 2 * N + 1; ++k) fact_.push_back(fact_.back() * k);
  lag0_.reserve(N + 1);
  for (int k = 0; k <= N; ++k) {
    // C(2k,k)/4^k
    mpz_class num = fact_[2 * k] / (fact_[k] * fact_[k]);
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 2 * k);
    mpq_class q(num, den);
    q.canonicalize();
    lag0_.push_back(q);
  }
}

const RatPoly& LaguerreTable::lag_mon(int k) const {
  if (k < 0 || k > max_degree_) throw DimensionError("lag_mon: degree out of range");
  return lag_mon_[k];
}

const RatPoly& LaguerreTable::mon_lag(int m) const {
  if (m < 0 || m > max_degree_) throw DimensionError("mon_lag: degree out of range");
  return mon_lag_[m];
}

const mpq_class& LaguerreTable::lag_at_zero(int k) const {
  if (k < 0 || k > max_degree_) throw DimensionError("lag_at_zero: degree out of range");
  return lag0_[k];
}

const mpz_class& LaguerreTable::factorial(int k) const {
  if (k < 0 || k >= (int)fact_.size()) throw DimensionError("factorial: out of range");
  return fact_[k];
}

mpq_class LaguerreTable::product_coeff(int a, int b, int k) const {
  if (a < 0 || b < 0 || k < 0) throw DimensionError("product_coeff: negative index");
  if (k < std::abs(a - b) || k > a + b) return mpq_class(0);
  // (-1)^{a+b+k} (2a)! (2b)! 4^k k! / (2^{a+b+k} a! b! (b+k-a)! (a+k-b)! (a+b-k)!)
  mpz_class num = fact_[2 * a] * fact_[2 * b] * fact_[k];
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), 2 * k);
  mpz_class den = fact_[a] * fact_[b] * fact_[b + k - a] * fact_[a + k - b] * fact_[a + b - k];
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), a + b + k);
  mpq_class q(num, den);
  q.canonicalize();
  if ((a + b + k) % 2 != 0) q = -q;
  return q;
}

SymEncMatrix::SymEncMatrix(int n, Precision prec) : n_(n) {
  up_.assign(static_cast<size_t>(n) * (n + 1) / 2, Enclosure::zero(prec));
}

Enclosure& SymEncMatrix::at(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_) throw DimensionError("SymEncMatrix::at out of range");
  return up_[static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i)];
}

const Enclosure& SymEncMatrix::at(int i, int j) const {
  return const_cast<SymEncMatrix*>(this)->at(i, j);
}

SymEncMatrix SymEncMatrix::with_precision(Precision prec) const {
  SymEncMatrix m(n_, prec);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) m.at(i, j) = at(i, j).with_precision(prec);
  return m;
}

EvenGaussianPoly to_monomial(const EvenGaussianPoly& p, const LaguerreTable& tab) {
  if (p.basis == Basis::Monomial) return p;
  int deg = p.degree();
  if (deg > tab.max_degree()) throw DimensionError("to_monomial: degree exceeds table");
  Precision prec = coeff_precision(p);
  std::vector<Enclosure> mono(deg + 1, Enclosure::zero(prec));
  for (int k = 0; k <= deg; ++k) {
    const RatPoly& row = tab.lag_mon(k);
    for (int m = 0; m <= k; ++m)
      if (row[m] != 0) mono[m] += p.coeffs[k].mul_rational(row[m]);
  }
  // w^m -> pi^m u^m
  auto pw = pi_powers(deg, prec);
  for (int m = 0; m <= deg; ++m) mono[m] *= pw[m];
  return EvenGaussianPoly{Basis::Monomial, std::move(mono)};
}

EvenGaussianPoly to_laguerre(const EvenGaussianPoly& p, const LaguerreTable& tab) {
  if (p.basis == Basis::Laguerre) return p;
  int deg = p.degree();
  if (deg > tab.max_degree()) throw DimensionError("to_laguerre: degree exceeds table");
  Precision prec = coeff_precision(p);
  auto pw = pi_powers(deg, prec);
  std::vector<Enclosure> lag(deg + 1, Enclosure::zero(prec));
  for (int m = 0; m <= deg; ++m) {
    Enclosure am = p.coeffs[m] / pw[m];  // coefficient of w^m
    const RatPoly& row = tab.mon_lag(m);
    for (int k = 0; k <= m; ++k)
      if (row[k] != 0) lag[k] += am.mul_rational(row[k]);
  }
  return EvenGaussianPoly{Basis::Laguerre, std::move(lag)};
}

EvenGaussianPoly fourier_transform(const EvenGaussianPoly& p, const LaguerreTable& tab) {
  EvenGaussianPoly mono = to_monomial(p, tab);
  int deg = mono.degree();
  Precision prec = coeff_precision(mono);
  auto pw = pi_powers(deg, prec);
  std::vector<Enclosure> out(deg + 1, Enclosure::zero(prec));
  for (int k = 0; k <= deg; ++k) {
    mpq_class f(tab.factorial(k));
    out[k] = mono.coeffs[k].mul_rational(f) / pw[k];
  }
  return EvenGaussianPoly{Basis::Laguerre, std::move(out)};
}

EvenGaussianPoly multiply(const EvenGaussianPoly& p, const EvenGaussianPoly& q,
                          const LaguerreTable& tab) {
  if (p.basis != q.basis) throw Error("multiply: operands must share a basis");
  EvenGaussianPoly a = to_monomial(p, tab);
  EvenGaussianPoly b = to_monomial(q, tab);
  int deg = a.degree() + b.degree();
  if (deg > tab.max_degree())
    throw DimensionError("multiply: product degree exceeds the table cap");
  Precision prec{std::max(coeff_precision(a).bits, coeff_precision(b).bits)};
  std::vector<Enclosure> c(deg + 1, Enclosure::zero(prec));
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) c[i + j].addmul(a.coeffs[i], b.coeffs[j]);
  EvenGaussianPoly prod{Basis::Monomial, std::move(c)};
  if (p.basis == Basis::Laguerre) return to_laguerre(prod, tab);
  return prod;
}

EvenGaussianPoly quadratic_form_expand(const SymEncMatrix& Q, const SymEncMatrix& R, int d,
                                       const LaguerreTable& tab) {
  if (Q.size() != d + 1) throw DimensionError("quadratic_form_expand: Q must be (d+1)x(d+1)");
  if (R.size() != d && !(d == 0 && R.size() == 0))
    throw DimensionError("quadratic_form_expand: R must be dxd");
  if (2 * d > tab.max_degree())
    throw DimensionError("quadratic_form_expand: table too small for degree 2d");
  int bits = 64;
  for (int i = 0; i <= d; ++i)
    for (int j = i; j <= d; ++j) bits = std::max(bits, Q.at(i, j).precision_bits());
  for (int i = 0; i < R.size(); ++i)
    for (int j = i; j < R.size(); ++j) bits = std::max(bits, R.at(i, j).precision_bits());
  Precision prec{bits};

  // Cache the basis rows as enclosures once.
  auto enc_rows = [&](int kmax) {
    std::vector<std::vector<Enclosure>> rows(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
      const RatPoly& r = tab.lag_mon(k);
      rows[k].reserve(k + 1);
      for (int m = 0; m <= k; ++m) rows[k].push_back(Enclosure::from_rational(r[m], prec));
    }
    return rows;
  };
  auto rowsQ = enc_rows(d);

  // Monomial coefficients of v^T Q v: first S[a] = sum_b Q_ab L_b, then
  // accumulate L_a * S[a].
  std::vector<Enclosure> mono(2 * d + 1, Enclosure::zero(prec));
  {
    std::vector<std::vector<Enclosure>> S(d + 1,
                                          std::vector<Enclosure>(d + 1, Enclosure::zero(prec)));
    for (int a = 0; a <= d; ++a)
      for (int b = 0; b <= d; ++b) {
        const Enclosure& q = Q.at(a, b);
        for (int m = 0; m <= b; ++m) S[a][m].addmul(q, rowsQ[b][m]);
      }
    for (int a = 0; a <= d; ++a)
      for (int m1 = 0; m1 <= a; ++m1)
        for (int m2 = 0; m2 <= d; ++m2) mono[m1 + m2].addmul(rowsQ[a][m1], S[a][m2]);
  }
  if (R.size() > 0) {
    int dr = R.size() - 1;  // R is d x d, indices 0..d-1
    std::vector<Enclosure> monoR(2 * dr + 1, Enclosure::zero(prec));
    std::vector<std::vector<Enclosure>> S(dr + 1,
                                          std::vector<Enclosure>(dr + 1, Enclosure::zero(prec)));
    for (int a = 0; a <= dr; ++a)
      for (int b = 0; b <= dr; ++b) {
        const Enclosure& r = R.at(a, b);
        for (int m = 0; m <= b; ++m) S[a][m].addmul(r, rowsQ[b][m]);
      }
    for (int a = 0; a <= dr; ++a)
      for (int m1 = 0; m1 <= a; ++m1)
        for (int m2 = 0; m2 <= dr; ++m2) monoR[m1 + m2].addmul(rowsQ[a][m1], S[a][m2]);
    // u * (...) = (w/pi) * (...): shift and divide by pi.
    Enclosure pi = Enclosure::pi(prec);
    for (int m = 0; m < (int)monoR.size(); ++m) mono[m + 1] += monoR[m] / pi;
  }
  // Back to Laguerre coordinates.
  std::vector<Enclosure> lag(2 * d + 1, Enclosure::zero(prec));
  for (int m = 0; m <= 2 * d; ++m) {
    const RatPoly& row = tab.mon_lag(m);
    for (int k = 0; k <= m; ++k)
      if (row[k] != 0) lag[k] += mono[m].mul_rational(row[k]);
  }
  return EvenGaussianPoly{Basis::Laguerre, std::move(lag)};
}

Enclosure full_moment(long m, Precision prec) {
  if (m < 0 || m % 2 != 0) throw Error("full_moment: m must be even and nonnegative");
  Enclosure g = gamma_half(m + 1, prec);
  Enclosure pi = Enclosure::pi(prec);
  Enclosure den = pi.pow_ui(m / 2) * pi.sqrt_interval();
  return g / den;
}

Enclosure tail_moment(long m, const Enclosure& T) {
  if (m < 0 || m % 2 != 0) throw Error("tail_moment: m must be even and nonnegative");
  if (!T.is_positive()) throw Error("tail_moment: T must be positive");
  Precision prec = T.precision();
  Enclosure pi = Enclosure::pi(prec);
  Enclosure g = upper_incomplete_gamma_half(m + 1, pi * T * T);
  Enclosure den = pi.pow_ui(m / 2) * pi.sqrt_interval();
  return g / den.mul_si(2);
}

Enclosure eval_at_zero(const EvenGaussianPoly& p, const LaguerreTable& tab) {
  Precision prec = coeff_precision(p);
  if (p.basis == Basis::Monomial) return p.coeffs.empty() ? Enclosure::zero(prec) : p.coeffs[0];
  Enclosure v = Enclosure::zero(prec);
  for (int k = 0; k <= p.degree(); ++k) v += p.coeffs[k].mul_rational(tab.lag_at_zero(k));
  return v;
}

Enclosure integral_over_line(const EvenGaussianPoly& p, const LaguerreTable& tab) {
  Precision prec = coeff_precision(p);
  if (p.basis == Basis::Laguerre)
    return p.coeffs.empty() ? Enclosure::zero(prec) : p.coeffs[0];
  Enclosure v = Enclosure::zero(prec);
  for (int k = 0; k <= p.degree(); ++k) v += p.coeffs[k] * full_moment(2 * k, prec);
  (void)tab;
  return v;
}

Enclosure eval(const EvenGaussianPoly& p, const Enclosure& x, const LaguerreTable& tab) {
  EvenGaussianPoly mono = to_monomial(p, tab);
  Precision prec{std::max(coeff_precision(mono).bits, x.precision_bits())};
  Enclosure u = x * x;
  Enclosure acc = Enclosure::zero(prec);
  for (int m = mono.degree(); m >= 0; --m) acc = acc * u + mono.coeffs[m];
  Enclosure pi = Enclosure::pi(prec);
  return acc * (-(pi * u)).exp_interval();
}

}  // namespace fopt
