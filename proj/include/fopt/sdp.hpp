#pragma once

#include <array>
#include <string>
#include <vector>

#include "fopt/gauss_poly.hpp"

namespace fopt {

// The degree-d semidefinite program for C+(A): eight PSD blocks
// (Q1..Q4 of size d+1, R1..R4 of size d), one residual constraint per
// Laguerre coefficient of (fhat1 - fhat2) - (f3 - f4), plus the
// normalization int f1 + int f2 = 1. The solver variables are the shifted
// blocks (Q_i = Qtilde_i + eps I), so the eps offsets are folded into the
// right-hand sides and the objective constant.
struct SdpProblem {
  mpq_class A;
  int d = 0;
  mpq_class epsilon;
  Precision prec{256};
  int emit_digits = 60;

  int constraint_count() const { return 2 * d + 2; }
  std::vector<int> block_sizes() const;

  // 1 - 2 eps (sum_a int L_a^2 + (1/pi) sum_a int u L_a^2) per the shift fold-in.
  Enclosure normalization_rhs() const;
  // Constant added to the solver objective by the shift: -A eps tr(tail terms).
  Enclosure objective_constant() const;
};

SdpProblem assemble(const mpq_class& A, int d, const mpq_class& epsilon,
                    Precision prec = Precision{256});

// Emits SDPA sparse format (.dat-s). Entries are exact where the coefficient
// is rational and rounded to emit_digits significant decimals otherwise;
// byte output is deterministic for fixed inputs. Entries are grouped by
// upper-triangle pair (a,b), then constraint; the format is order-free.
void write_sdpa(const SdpProblem& p, const std::string& path);

struct SdpaEntry {
  int matno, blkno, i, j;  // i, j 1-based, i <= j
  std::string value;
};

struct SdpaInfo {
  int m = 0;
  std::vector<int> block_sizes;
  std::vector<std::string> rhs;
  std::vector<SdpaEntry> entries;
};

SdpaInfo read_sdpa(const std::string& path);

// The eight matrices parametrizing a feasible tuple, with the eps shift
// already applied. Entries are zero-radius enclosures at the working
// precision except for the eps contribution on the diagonals.
struct SosTuple {
  int d = 0;
  std::array<SymEncMatrix, 4> Q;
  std::array<SymEncMatrix, 4> R;
  mpq_class epsilon;
  std::vector<std::string> warnings;
};

// Parses the PSD-block solution (the yMat section of SDPA-style solver
// output), symmetrizes, and applies the eps shift from the problem.
SosTuple read_solution(const std::string& path, const SdpProblem& p);

}  // namespace fopt
