#pragma once

#include <string>
#include <vector>

#include "fopt/sdp.hpp"

namespace fopt {

// A verification predicate failed (or stayed indeterminate at the precision
// cap). `kind` is one of "psd-failure", "gershgorin-failure", "indeterminate".
struct CertificationError : Error {
  CertificationError(std::string k, const std::string& msg)
      : Error(k + ": " + msg), kind(std::move(k)) {}
  std::string kind;
};

struct PsdBound {
  Enclosure lower;           // rigorous lower bound on lambda_min
  Enclosure rayleigh_upper;  // rigorous upper bound on lambda_min
  bool passes() const { return lower.is_nonnegative(); }
  bool definitely_fails() const { return !rayleigh_upper.is_nonnegative(); }
};

// Approximate diagonalization at floating precision, conjugation in enclosure
// arithmetic, Gershgorin rows on the near-diagonal result; the congruence
// defect V^T V - I is absorbed into the bound.
PsdBound psd_lower_bound(const SymEncMatrix& M);

// (fhat1 - fhat2) - (f3 - f4) in the Laguerre basis, degree <= 2d.
EvenGaussianPoly residual_polynomial(const SosTuple& t, const LaguerreTable& tab);

// r = sum_i diag_i L_i^2 + sum_i 2 offdiag_i L_i L_{i+1}
struct TridiagonalRep {
  std::vector<Enclosure> diag;     // d+1
  std::vector<Enclosure> offdiag;  // d
};

TridiagonalRep to_tridiagonal(const EvenGaussianPoly& r, int d, const LaguerreTable& tab);

struct CertifyConfig {
  Precision start{256};
  int max_bits = 4096;
};

struct CertifiedBound {
  mpq_class A;
  int degree = 0;
  Enclosure bound;            // enclosure of the certified quotient
  Enclosure certified_lower;  // exact lower endpoint of `bound`
  std::string provenance;     // "sdp-solution" | "explicit-candidate"
  Enclosure b;                // lower bound on lambda_min(Q4)
  Enclosure B;                // upper bound on the residual coefficients
  std::vector<double> per_block_eigen_lower;
  int precision_bits = 0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// The verification pipeline: PSD-certify Q1..Q3, R1..R4; bound lambda_min(Q4)
// from below by b; absorb the residual into Q4 via its tridiagonal
// representation (sound when b >= 2B by Gershgorin); evaluate the certified
// quotient. Escalates the working precision by doubling on indeterminate
// predicates, up to cfg.max_bits.
CertifiedBound absorb_and_certify(const SosTuple& t, const mpq_class& A,
                                  const CertifyConfig& cfg = {});

}  // namespace fopt
