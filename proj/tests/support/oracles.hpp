#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <random>
#include <vector>

#include "fopt/enclosure.hpp"

// Test-only oracles, independent of the enclosure implementation paths they
// check: a double-exponential quadrature at fixed high precision, and an
// exact rational PSD test via the characteristic polynomial.
namespace oracles {

using Integrand = std::function<void(mpfr_ptr out, mpfr_srcptr x)>;

// integral of f over [a, b] (tanh-sinh), plain mpfr at `prec` bits.
void integrate_finite(mpfr_ptr out, const Integrand& f, double a, double b, int prec);

// integral of f over [a, +inf) (exp-sinh).
void integrate_to_inf(mpfr_ptr out, const Integrand& f, double a, int prec);

// Characteristic polynomial of a symmetric rational matrix by
// Faddeev-LeVerrier: p(x) = x^n + c[n-1] x^{n-1} + ... + c[0].
std::vector<mpq_class> char_poly(const std::vector<std::vector<mpq_class>>& M);

// Exact PSD test for symmetric rational matrices (sign pattern of char poly).
bool is_psd_exact(const std::vector<std::vector<mpq_class>>& M);

// Deterministic dyadic rationals in [-1, 1] with denominator 2^16.
mpq_class random_dyadic(std::mt19937_64& rng);

// |enclosure value - q| as a double upper bound (for tolerance asserts).
double distance_to(const fopt::Enclosure& e, const mpq_class& q);

}  // namespace oracles
