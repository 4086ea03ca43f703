#include "fopt/certify.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace fopt {

namespace {

struct Tmp {
  mpfr_t x;
  explicit Tmp(int prec) { mpfr_init2(x, prec); }
  ~Tmp() { mpfr_clear(x); }
  operator mpfr_ptr() { return x; }
  operator mpfr_srcptr() const { return x; }
};

std::string decimal_down(const Enclosure& e, int digits) {
  Tmp lo(e.precision_bits());
  e.lower(lo);
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRDe", digits - 1);
  std::vector<char> buf(digits + 48);
  mpfr_snprintf(buf.data(), buf.size(), fmt, lo.x);
  return std::string(buf.data());
}

std::string decimal_up(const Enclosure& e, int digits) {
  Tmp hi(e.precision_bits());
  e.upper(hi);
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRUe", digits - 1);
  std::vector<char> buf(digits + 48);
  mpfr_snprintf(buf.data(), buf.size(), fmt, hi.x);
  return std::string(buf.data());
}

Enclosure exact_lower(const Enclosure& e) {
  Tmp lo(e.precision_bits());
  e.lower(lo);
  return Enclosure::from_endpoints(lo, lo, e.precision());
}

Enclosure exact_upper(const Enclosure& e) {
  Tmp hi(e.precision_bits());
  e.upper(hi);
  return Enclosure::from_endpoints(hi, hi, e.precision());
}

}  // namespace

PsdBound psd_lower_bound(const SymEncMatrix& M) {
  int n = M.size();
  int prec = n > 0 ? M.at(0, 0).precision_bits() : 256;
  Precision P{prec};
  if (n == 0) {
    PsdBound r{Enclosure::zero(P), Enclosure::zero(P)};
    return r;
  }
  Eigen::MatrixXd mid(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = M.at(i, j).mid_double();
      if (!std::isfinite(v))
        throw CertificationError("indeterminate", "matrix midpoint overflows double");
      mid(i, j) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mid);
  if (es.info() != Eigen::Success)
    throw CertificationError("indeterminate", "floating eigendecomposition failed");
  const Eigen::MatrixXd& V = es.eigenvectors();

  // D = V^T M V and E = V^T V - I in enclosure arithmetic (V entries exact).
  std::vector<std::vector<Enclosure>> Ve(n, std::vector<Enclosure>(n, Enclosure::zero(P)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Ve[i][j] = Enclosure::exact_double(V(i, j), P);
  // T1 = M V
  std::vector<std::vector<Enclosure>> T1(n, std::vector<Enclosure>(n, Enclosure::zero(P)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Enclosure acc = Enclosure::zero(P);
      for (int k = 0; k < n; ++k) acc.addmul(M.at(i, k), Ve[k][j]);
      T1[i][j] = std::move(acc);
    }
  // row Gershgorin bounds of D = V^T T1, and defect rows of E
  Enclosure g_low(P);
  Enclosure ray_up(P);
  bool first = true;
  Tmp e_up(Enclosure::kRadiusBits);
  mpfr_set_zero(e_up, 1);
  for (int i = 0; i < n; ++i) {
    Enclosure row_bound(P);     // D_ii - sum_{j != i} |D_ij|
    Enclosure diag(P);          // D_ii
    Enclosure erow(P);          // sum_j |E_ij|
    row_bound = Enclosure::zero(P);
    erow = Enclosure::zero(P);
    for (int j = 0; j < n; ++j) {
      Enclosure dij = Enclosure::zero(P);
      Enclosure eij = Enclosure::zero(P);
      for (int k = 0; k < n; ++k) {
        dij.addmul(Ve[k][i], T1[k][j]);
        eij.addmul(Ve[k][i], Ve[k][j]);
      }
      if (j == i) {
        diag = dij;
        eij -= Enclosure::exact(1, P);
      } else {
        row_bound -= dij.abs_interval();
      }
      erow += eij.abs_interval();
    }
    row_bound += diag;
    Tmp up(prec);
    erow.upper(up);
    if (mpfr_cmp(up.x, e_up.x) > 0) mpfr_set(e_up.x, up.x, MPFR_RNDU);
    // Rayleigh quotient upper bound: lambda_min <= D_ii / (1 + E_ii);
    // bound E_ii crudely by the row sum enclosure [-erow, erow].
    Enclosure one_plus = Enclosure::exact(1, P) + Enclosure::from_endpoints(
        [&] { Tmp lo(prec); (-erow).lower(lo); return Enclosure::from_endpoints(lo, up, P); }()
            .mid(),
        up, P);
    (void)one_plus;
    if (first) {
      g_low = row_bound;
      ray_up = diag;  // refined below
      first = false;
    } else {
      Tmp a(prec), bnd(prec);
      row_bound.lower(a);
      g_low.lower(bnd);
      if (mpfr_cmp(a.x, bnd.x) < 0) g_low = row_bound;
      Tmp du(prec), ru(prec);
      diag.upper(du);
      ray_up.upper(ru);
      if (mpfr_cmp(du.x, ru.x) < 0) ray_up = diag;
    }
  }
  // e = max row sum of |E|; require e < 1.
  Enclosure e_enc = Enclosure::from_endpoints(e_up, e_up, P);
  Tmp onechk(Enclosure::kRadiusBits);
  mpfr_set_ui(onechk, 1, MPFR_RNDN);
  if (mpfr_cmp(e_up.x, onechk.x) >= 0)
    throw CertificationError("indeterminate", "eigenvector congruence defect >= 1");
  Enclosure one = Enclosure::exact(1, P);
  // lambda_min(M) >= g/(1+e) if g >= 0 else g/(1-e)
  Enclosure denom = g_low.is_nonnegative() ? (one + e_enc) : (one - e_enc);
  Enclosure lower = g_low / denom;
  // lambda_min(M) <= min_i D_ii / (1 + E_ii) <= min_i D_ii/(1-e) for D_ii < 0,
  // D_ii/(1+e) is not an upper bound; use the conservative direction.
  Enclosure rden = ray_up.is_nonnegative() ? (one - e_enc) : (one + e_enc);
  Enclosure rayleigh = ray_up / rden;
  PsdBound out{Enclosure::from_endpoints([&] {
                 Tmp lo(prec);
                 lower.lower(lo);
                 return Enclosure::from_endpoints(lo, lo, P);
               }()
                   .mid(),
               [&] {
                 Tmp lo(prec);
                 lower.lower(lo);
                 return Enclosure::from_endpoints(lo, lo, P);
               }()
                   .mid(),
               P),
               Enclosure::from_endpoints([&] {
                 Tmp hi(prec);
                 rayleigh.upper(hi);
                 return Enclosure::from_endpoints(hi, hi, P);
               }()
                   .mid(),
               [&] {
                 Tmp hi(prec);
                 rayleigh.upper(hi);
                 return Enclosure::from_endpoints(hi, hi, P);
               }()
                   .mid(),
               P)};
  return out;
}

EvenGaussianPoly residual_polynomial(const SosTuple& t, const LaguerreTable& tab) {
  int d = t.d;
  EvenGaussianPoly p1 = quadratic_form_expand(t.Q[0], t.R[0], d, tab);
  EvenGaussianPoly p2 = quadratic_form_expand(t.Q[1], t.R[1], d, tab);
  EvenGaussianPoly p3 = quadratic_form_expand(t.Q[2], t.R[2], d, tab);
  EvenGaussianPoly p4 = quadratic_form_expand(t.Q[3], t.R[3], d, tab);
  EvenGaussianPoly f1 = fourier_transform(p1, tab);
  EvenGaussianPoly f2 = fourier_transform(p2, tab);
  EvenGaussianPoly r;
  r.basis = Basis::Laguerre;
  size_t n = f1.coeffs.size();
  r.coeffs.reserve(n);
  for (size_t k = 0; k < n; ++k)
    r.coeffs.push_back(f1.coeffs[k] - f2.coeffs[k] - p3.coeffs[k] + p4.coeffs[k]);
  return r;
}

TridiagonalRep to_tridiagonal(const EvenGaussianPoly& r, int d, const LaguerreTable& tab) {
  if (r.basis != Basis::Laguerre) throw Error("to_tridiagonal: Laguerre basis required");
  if (r.degree() > 2 * d) throw DimensionError("to_tridiagonal: degree exceeds 2d");
  int prec = 64;
  for (const auto& c : r.coeffs) prec = std::max(prec, c.precision_bits());
  Precision P{prec};
  TridiagonalRep t;
  t.diag.assign(d + 1, Enclosure::zero(P));
  t.offdiag.assign(d, Enclosure::zero(P));
  // back-substitution from the top coefficient: the unknown with leading
  // Laguerre index k is diag[k/2] (k even) or offdiag[(k-1)/2] (k odd)
  for (int k = 2 * d; k >= 0; --k) {
    Enclosure rhs = (k <= r.degree()) ? r.coeffs[k] : Enclosure::zero(P);
    if (k % 2 == 0) {
      int i = k / 2;
      for (int j = i + 1; j <= d; ++j) {
        mpq_class g = tab.product_coeff(j, j, k);
        if (g != 0) rhs -= t.diag[j].mul_rational(g);
      }
      for (int j = i; j <= d - 1; ++j) {
        mpq_class g = tab.product_coeff(j, j + 1, k);
        if (g != 0) rhs -= t.offdiag[j].mul_rational(g).mul_si(2);
      }
      mpq_class piv = tab.product_coeff(i, i, k);
      t.diag[i] = rhs.mul_rational(mpq_class(1) / piv);
    } else {
      int i = (k - 1) / 2;
      for (int j = i + 1; j <= d; ++j) {
        mpq_class g = tab.product_coeff(j, j, k);
        if (g != 0) rhs -= t.diag[j].mul_rational(g);
      }
      for (int j = i + 1; j <= d - 1; ++j) {
        mpq_class g = tab.product_coeff(j, j + 1, k);
        if (g != 0) rhs -= t.offdiag[j].mul_rational(g).mul_si(2);
      }
      mpq_class piv = 2 * tab.product_coeff(i, i + 1, k);
      t.offdiag[i] = rhs.mul_rational(mpq_class(1) / piv);
    }
  }
  return t;
}

namespace {

// max(|diag_i|, |2 offdiag_i|) upper bound: the coefficients in the
// {L_i^2, L_i L_{i+1}} basis, matching the Gershgorin argument.
Enclosure residual_B(const TridiagonalRep& t, Precision P) {
  Tmp best(P.bits);
  mpfr_set_zero(best, 1);
  Tmp cur(P.bits);
  for (const auto& e : t.diag) {
    e.mag(cur);
    if (mpfr_cmp(cur.x, best.x) > 0) mpfr_set(best.x, cur.x, MPFR_RNDU);
  }
  for (const auto& e : t.offdiag) {
    e.mul_si(2).mag(cur);
    if (mpfr_cmp(cur.x, best.x) > 0) mpfr_set(best.x, cur.x, MPFR_RNDU);
  }
  return Enclosure::from_endpoints(best, best, P);
}

Enclosure residual_B_low(const TridiagonalRep& t, Precision P) {
  Tmp best(P.bits);
  mpfr_set_zero(best, 1);
  Tmp cur(P.bits);
  for (const auto& e : t.diag) {
    e.mig(cur);
    if (mpfr_cmp(cur.x, best.x) > 0) mpfr_set(best.x, cur.x, MPFR_RNDD);
  }
  for (const auto& e : t.offdiag) {
    e.mul_si(2).mig(cur);
    if (mpfr_cmp(cur.x, best.x) > 0) mpfr_set(best.x, cur.x, MPFR_RNDD);
  }
  return Enclosure::from_endpoints(best, best, P);
}

// 2 int_1^inf p(u(t)) e^{-pi t^2} dt for p in any basis.
Enclosure tail_integral(const EvenGaussianPoly& p, const LaguerreTable& tab, Precision P) {
  EvenGaussianPoly mono = to_monomial(p, tab);
  Enclosure one = Enclosure::exact(1, P);
  Enclosure acc = Enclosure::zero(P);
  for (int m = 0; m <= mono.degree(); ++m)
    acc += mono.coeffs[m] * tail_moment(2 * m, one).mul_si(2);
  return acc;
}

CertifiedBound certify_at(const SosTuple& t0, const mpq_class& A, Precision P) {
  SosTuple t;
  t.d = t0.d;
  t.epsilon = t0.epsilon;
  t.warnings = t0.warnings;
  for (int i = 0; i < 4; ++i) {
    t.Q[i] = t0.Q[i].with_precision(P);
    t.R[i] = t0.R[i].with_precision(P);
  }
  int d = t.d;
  LaguerreTable tab(2 * d + 2);

  CertifiedBound out;
  out.A = A;
  out.degree = d;
  out.provenance = "sdp-solution";
  out.precision_bits = P.bits;
  out.warnings = t.warnings;

  static const char* names[] = {"Q1", "Q2", "Q3", "R1", "R2", "R3", "R4"};
  const SymEncMatrix* blocks[] = {&t.Q[0], &t.Q[1], &t.Q[2], &t.R[0], &t.R[1], &t.R[2], &t.R[3]};
  for (int i = 0; i < 7; ++i) {
    PsdBound pb = psd_lower_bound(*blocks[i]);
    out.per_block_eigen_lower.push_back(pb.lower.lower_double());
    if (pb.passes()) continue;
    if (pb.definitely_fails())
      throw CertificationError("psd-failure",
                               std::string(names[i]) + " is not positive semidefinite (lambda_min <= " +
                                   std::to_string(pb.rayleigh_upper.upper_double()) + ")");
    throw CertificationError("indeterminate",
                             std::string(names[i]) + " PSD check indeterminate at " +
                                 std::to_string(P.bits) + " bits");
  }
  PsdBound q4 = psd_lower_bound(t.Q[3]);
  out.b = q4.lower;
  out.per_block_eigen_lower.push_back(q4.lower.lower_double());

  EvenGaussianPoly r = residual_polynomial(t, tab);
  TridiagonalRep tri = to_tridiagonal(r, d, tab);
  out.B = residual_B(tri, P);

  // b >= 2B makes Q4 -/+ Q4' positive semidefinite (|lambda(Q4')| <= 2B).
  Enclosure margin = out.b - out.B.mul_si(2);
  if (!margin.is_nonnegative()) {
    Enclosure worst = out.b - residual_B_low(tri, P).mul_si(2);
    Tmp wu(P.bits);
    worst.upper(wu);
    if (mpfr_sgn(wu.x) < 0)
      throw CertificationError("gershgorin-failure",
                               "residual absorption fails: b = " +
                                   std::to_string(out.b.lower_double()) +
                                   " < 2B = " + std::to_string(2 * out.B.upper_double()));
    throw CertificationError("indeterminate", "b >= 2B indeterminate at " +
                                                  std::to_string(P.bits) + " bits");
  }

  // After replacing Q4 by the absorbed matrix the tuple is exactly feasible;
  // the quotient does not involve Q4.
  EvenGaussianPoly p1 = quadratic_form_expand(t.Q[0], t.R[0], d, tab);
  EvenGaussianPoly p2 = quadratic_form_expand(t.Q[1], t.R[1], d, tab);
  EvenGaussianPoly p3 = quadratic_form_expand(t.Q[2], t.R[2], d, tab);
  Enclosure numer = eval_at_zero(p1, tab) - eval_at_zero(p2, tab) -
                    tail_integral(p3, tab, P).mul_rational(A);
  Enclosure denom = integral_over_line(p1, tab) + integral_over_line(p2, tab);
  if (!denom.is_positive())
    throw CertificationError("indeterminate", "normalization denominator not provably positive");
  out.bound = numer / denom;
  Tmp lo(P.bits);
  out.bound.lower(lo);
  out.certified_lower = Enclosure::from_endpoints(lo, lo, P);
  return out;
}

}  // namespace

CertifiedBound absorb_and_certify(const SosTuple& t, const mpq_class& A,
                                  const CertifyConfig& cfg) {
  int bits = cfg.start.bits;
  for (;;) {
    try {
      return certify_at(t, A, Precision{bits});
    } catch (const CertificationError& e) {
      if (e.kind != "indeterminate" || 2 * bits > cfg.max_bits) throw;
      bits *= 2;
    }
  }
}

std::string CertifiedBound::to_json() const {
  nlohmann::json j;
  j["schema"] = "fopt-certificate/1";
  j["A"] = A.get_str();
  j["degree"] = degree;
  j["certified_lower"] = decimal_down(certified_lower, 30);
  j["bound_midpoint"] = bound.mid_decimal(30);
  j["bound_radius"] = decimal_up(bound - bound, 8).substr(0, 0) == "" ? [&] {
    // radius as decimal
    Tmp r(64);
    mpfr_set(r.x, bound.rad(), MPFR_RNDU);
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.6RUe", r.x);
    return std::string(buf);
  }()
                                                                      : "";
  j["b"] = decimal_down(b, 20);
  j["B"] = decimal_up(B, 20);
  j["precision_bits"] = precision_bits;
  j["provenance"] = provenance;
  j["per_block_eigen_lower"] = per_block_eigen_lower;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j.dump(2);
}

}  // namespace fopt
