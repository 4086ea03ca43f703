#pragma once

#include <vector>

#include "fopt/enclosure.hpp"

namespace fopt {

// Polynomial in the scaled variable w = pi*u with exact rational coefficients,
// index = power of w.
using RatPoly = std::vector<mpq_class>;

// L_k^{-1/2}(w) in monomials of w, via the three-term recurrence.
RatPoly laguerre_coeffs(int k);

// Structure tables for the Laguerre-of-(pi u) basis, valid up to max_degree.
// All entries are exact rationals; pi enters downstream only through the
// monomial bridge x^{2k} = w^k / pi^k.
class LaguerreTable {
 public:
  explicit LaguerreTable(int max_degree);

  int max_degree() const { return max_degree_; }
  // L_k(w) = sum_m lag_mon(k)[m] w^m
  const RatPoly& lag_mon(int k) const;
  // w^m = sum_k mon_lag(m)[k] L_k(w)
  const RatPoly& mon_lag(int m) const;
  // L_k(0) = C(2k,k)/4^k
  const mpq_class& lag_at_zero(int k) const;
  // k!
  const mpz_class& factorial(int k) const;
  // Linearization gamma with L_a L_b = sum_k gamma(a,b,k) L_k; zero outside
  // |a-b| <= k <= a+b (Hermite triple-product support).
  mpq_class product_coeff(int a, int b, int k) const;

 private:
  int max_degree_;
  std::vector<RatPoly> lag_mon_;
  std::vector<RatPoly> mon_lag_;
  std::vector<mpq_class> lag0_;
  std::vector<mpz_class> fact_;
};

enum class Basis { Monomial, Laguerre };

// Even function p(x^2) e^{-pi x^2}.
//   Monomial: f(x) = sum_k c_k x^{2k} e^{-pi x^2}
//   Laguerre: f(x) = sum_k c_k L_k^{-1/2}(pi x^2) e^{-pi x^2}
struct EvenGaussianPoly {
  Basis basis = Basis::Laguerre;
  std::vector<Enclosure> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Symmetric matrix of enclosures; only the upper triangle is stored.
class SymEncMatrix {
 public:
  SymEncMatrix() : n_(0) {}
  SymEncMatrix(int n, Precision prec);
  int size() const { return n_; }
  Enclosure& at(int i, int j);
  const Enclosure& at(int i, int j) const;
  SymEncMatrix with_precision(Precision prec) const;

 private:
  int n_;
  std::vector<Enclosure> up_;
};

EvenGaussianPoly to_laguerre(const EvenGaussianPoly& p, const LaguerreTable& tab);
EvenGaussianPoly to_monomial(const EvenGaussianPoly& p, const LaguerreTable& tab);

// Fourier transform; uses FT(x^{2k} e^{-pi x^2}) = k!/pi^k L_k^{-1/2}(pi t^2) e^{-pi t^2}.
// Result is in the Laguerre basis.
EvenGaussianPoly fourier_transform(const EvenGaussianPoly& p, const LaguerreTable& tab);

// Product of the polynomial parts (the Gaussian factor is the caller's).
// Returns the product in the callers' basis (both inputs must agree).
EvenGaussianPoly multiply(const EvenGaussianPoly& p, const EvenGaussianPoly& q,
                          const LaguerreTable& tab);

// p(u) = v_d(u)^T Q v_d(u) + u * v_{d-1}(u)^T R v_{d-1}(u), expanded in the
// Laguerre basis. Q is (d+1)x(d+1), R is dxd.
EvenGaussianPoly quadratic_form_expand(const SymEncMatrix& Q, const SymEncMatrix& R, int d,
                                       const LaguerreTable& tab);

// int_R x^m e^{-pi x^2} dx = Gamma((m+1)/2) / pi^{(m+1)/2}, m even.
Enclosure full_moment(long m, Precision prec);
// int_T^inf x^m e^{-pi x^2} dx = Gamma((m+1)/2, pi T^2) / (2 pi^{(m+1)/2}), m even, T > 0.
Enclosure tail_moment(long m, const Enclosure& T);

Enclosure eval_at_zero(const EvenGaussianPoly& p, const LaguerreTable& tab);
Enclosure integral_over_line(const EvenGaussianPoly& p, const LaguerreTable& tab);

// f(x) including the Gaussian factor; x may be an interval.
Enclosure eval(const EvenGaussianPoly& p, const Enclosure& x, const LaguerreTable& tab);

}  // namespace fopt
