#include "fopt/sdp.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fopt {

namespace {

// Gamma(m+1/2, pi)/sqrt(pi) ladder for the tail functionals.
std::vector<Enclosure> tail_gamma_ladder(int mmax, Precision prec) {
  std::vector<Enclosure> g;
  g.reserve(mmax + 1);
  Enclosure pi = Enclosure::pi(prec);
  Enclosure spi = pi.sqrt_interval();
  Enclosure ex = (-pi).exp_interval();
  // Gamma(1/2, pi) = sqrt(pi) erfc(sqrt(pi))
  Enclosure cur = spi * erfc_enclosure(spi);
  g.push_back(cur / spi);
  Enclosure xs = spi;  // pi^s at s = 1/2
  for (int m = 1; m <= mmax; ++m) {
    // Gamma(s+1, pi) = s Gamma(s, pi) + pi^s e^{-pi}, s = m - 1/2
    cur = cur.mul_si(2 * m - 1).div_si(2) + xs * ex;
    xs *= pi;
    g.push_back(cur / spi);
  }
  return g;
}

// Coefficient of L_k in w * L_a L_b, from the closed-form linearization.
mpq_class wprod_coeff(const LaguerreTable& tab, int a, int b, int k) {
  mpq_class v(0);
  if (k >= 1) v -= mpq_class(k) * tab.product_coeff(a, b, k - 1);
  v += mpq_class(4 * k + 1, 2) * tab.product_coeff(a, b, k);
  v -= mpq_class(2 * k + 1, 2) * tab.product_coeff(a, b, k + 1);
  return v;
}

}  // namespace

std::vector<int> SdpProblem::block_sizes() const {
  return {d + 1, d + 1, d + 1, d + 1, d, d, d, d};
}

Enclosure SdpProblem::normalization_rhs() const {
  LaguerreTable tab(2 * d + 2);
  mpq_class sq(0), sr(0);
  for (int a = 0; a <= d; ++a) sq += tab.product_coeff(a, a, 0);
  for (int a = 0; a <= d - 1; ++a) sr += wprod_coeff(tab, a, a, 0);
  Enclosure pi = Enclosure::pi(prec);
  Enclosure tr = Enclosure::from_rational(sq, prec) + Enclosure::from_rational(sr, prec) / pi;
  return Enclosure::exact(1, prec) - tr.mul_rational(epsilon).mul_si(2);
}

Enclosure SdpProblem::objective_constant() const {
  LaguerreTable tab(2 * d + 2);
  auto G = tail_gamma_ladder(2 * d + 2, prec);
  Enclosure pi = Enclosure::pi(prec);
  Enclosure acc = Enclosure::zero(prec);
  for (int a = 0; a <= d; ++a) {
    // monomial coefficients of L_a^2
    const RatPoly& la = tab.lag_mon(a);
    RatPoly m2(2 * a + 1, mpq_class(0));
    for (int i = 0; i <= a; ++i)
      for (int j = 0; j <= a; ++j) m2[i + j] += la[i] * la[j];
    Enclosure tq = Enclosure::zero(prec);
    for (int m = 0; m <= 2 * a; ++m)
      if (m2[m] != 0) tq += G[m].mul_rational(m2[m]);
    acc += tq;
    if (a <= d - 1) {
      Enclosure tr = Enclosure::zero(prec);
      for (int m = 0; m <= 2 * a; ++m)
        if (m2[m] != 0) tr += G[m + 1].mul_rational(m2[m]);
      acc += tr / pi;
    }
  }
  return -acc.mul_rational(A * epsilon);
}

SdpProblem assemble(const mpq_class& A, int d, const mpq_class& epsilon, Precision prec) {
  if (d < 2) throw Error("assemble: d must be at least 2");
  if (A < 1) throw Error("assemble: A must be >= 1");
  SdpProblem p;
  p.A = A;
  p.d = d;
  p.epsilon = epsilon;
  p.prec = prec;
  return p;
}

void write_sdpa(const SdpProblem& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_sdpa: cannot open '" + path + "' for writing");
  const int d = p.d;
  const int m = p.constraint_count();
  LaguerreTable tab(2 * d + 2);
  auto G = tail_gamma_ladder(2 * d + 2, p.prec);
  Enclosure pi = Enclosure::pi(p.prec);
  Enclosure invpi = Enclosure::exact(1, p.prec) / pi;
  const int digits = p.emit_digits;

  auto fmt_enc = [&](const Enclosure& e) { return e.mid_decimal(digits); };
  auto fmt_rat = [&](const mpq_class& q) {
    return Enclosure::from_rational(q, p.prec).mid_decimal(digits);
  };

  out << "\"fopt sum-of-squares program: A=" << p.A << " d=" << d << " epsilon=" << p.epsilon
      << "\n";
  out << m << "\n";
  out << 8 << "\n";
  {
    auto bs = p.block_sizes();
    for (size_t i = 0; i < bs.size(); ++i) out << (i ? " " : "") << bs[i];
    out << "\n";
  }
  for (int k = 0; k < m - 1; ++k) out << (k ? " " : "") << "0";
  out << " " << fmt_enc(p.normalization_rhs()) << "\n";

  auto emit = [&](int matno, int blk, int a, int b, const std::string& v) {
    out << matno << " " << blk << " " << (a + 1) << " " << (b + 1) << " " << v << "\n";
  };

  // Rolling monomial-coefficient rows of L_a L_b over all b; row a is built
  // from rows a-1 and a-2 (multiplication by w is a shift in monomials).
  std::vector<RatPoly> prev2, prev1, cur;
  for (int a = 0; a <= d; ++a) {
    cur.assign(d + 1, RatPoly{});
    for (int b = 0; b <= d; ++b) {
      int n_ab = a + b;
      RatPoly& M = cur[b];
      if (a == 0) {
        M = tab.lag_mon(b);
      } else if (a == 1) {
        const RatPoly& pm = prev1[b];
        M.assign(n_ab + 1, mpq_class(0));
        for (int i = 0; i < (int)pm.size(); ++i) {
          M[i] += pm[i] / 2;
          M[i + 1] -= pm[i];
        }
      } else {
        mpq_class c1(4 * (a - 1) + 1, 2), c2(2 * (a - 1) - 1, 2);
        const RatPoly& pm = prev1[b];
        const RatPoly& pm2 = prev2[b];
        M.assign(n_ab + 1, mpq_class(0));
        for (int i = 0; i < (int)pm.size(); ++i) {
          M[i] += c1 * pm[i];
          M[i + 1] -= pm[i];
        }
        for (int i = 0; i < (int)pm2.size(); ++i) M[i] -= c2 * pm2[i];
        mpq_class inv(1, a);
        for (auto& c : M) c *= inv;
      }
      if (b < a) continue;  // emit upper triangle only

      bool in_r = (a <= d - 1 && b <= d - 1);
      // objective F0
      {
        mpq_class v0 = tab.lag_at_zero(a) * tab.lag_at_zero(b);
        emit(0, 1, a, b, fmt_rat(v0));
        emit(0, 2, a, b, fmt_rat(-v0));
        Enclosure tq = Enclosure::zero(p.prec);
        for (int mm = 0; mm <= n_ab; ++mm)
          if (M[mm] != 0) tq += G[mm].mul_rational(M[mm]);
        emit(0, 3, a, b, fmt_enc(-tq.mul_rational(p.A)));
        if (in_r) {
          Enclosure tr = Enclosure::zero(p.prec);
          for (int mm = 0; mm <= n_ab; ++mm)
            if (M[mm] != 0) tr += G[mm + 1].mul_rational(M[mm]);
          emit(0, 7, a, b, fmt_enc(-(tr * invpi).mul_rational(p.A)));
        }
      }
      // residual constraints k = 0..2d  ->  matno k+1
      for (int k = 0; k <= 2 * d; ++k) {
        // Fourier side on Q1/Q2: k! * (monomial coefficient k)
        if (k <= n_ab && M[k] != 0) {
          mpq_class h = mpq_class(tab.factorial(k)) * M[k];
          emit(k + 1, 1, a, b, fmt_rat(h));
          emit(k + 1, 2, a, b, fmt_rat(-h));
        }
        // time side on Q3/Q4
        mpq_class t = tab.product_coeff(a, b, k);
        if (t != 0) {
          emit(k + 1, 3, a, b, fmt_rat(-t));
          emit(k + 1, 4, a, b, fmt_rat(t));
        }
        if (in_r) {
          // Fourier side on R1/R2: (1/pi) k! M[k-1]
          if (k >= 1 && k - 1 <= n_ab && M[k - 1] != 0) {
            mpq_class h = mpq_class(tab.factorial(k)) * M[k - 1];
            Enclosure v = invpi.mul_rational(h);
            emit(k + 1, 5, a, b, fmt_enc(v));
            emit(k + 1, 6, a, b, fmt_enc(-v));
          }
          // time side on R3/R4: (1/pi) (coefficient of L_k in w L_a L_b)
          mpq_class wt = wprod_coeff(tab, a, b, k);
          if (wt != 0) {
            Enclosure v = invpi.mul_rational(wt);
            emit(k + 1, 7, a, b, fmt_enc(-v));
            emit(k + 1, 8, a, b, fmt_enc(v));
          }
        }
      }
      // normalization  ->  matno m
      {
        mpq_class t = tab.product_coeff(a, b, 0);
        if (t != 0) {
          emit(m, 1, a, b, fmt_rat(t));
          emit(m, 2, a, b, fmt_rat(t));
        }
        if (in_r) {
          mpq_class wt = wprod_coeff(tab, a, b, 0);
          if (wt != 0) {
            Enclosure v = invpi.mul_rational(wt);
            emit(m, 5, a, b, fmt_enc(v));
            emit(m, 6, a, b, fmt_enc(v));
          }
        }
      }
    }
    prev2 = std::move(prev1);
    prev1 = std::move(cur);
  }
  out.flush();
  if (!out) throw Error("write_sdpa: I/O failure writing '" + path + "'");
}

SdpaInfo read_sdpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_sdpa: cannot open '" + path + "'");
  SdpaInfo info;
  std::string linestr;
  int stage = 0;
  int nblocks = 0;
  while (std::getline(in, linestr)) {
    if (linestr.empty()) continue;
    char c0 = linestr[0];
    if (c0 == '"' || c0 == '*') continue;
    std::istringstream ls(linestr);
    if (stage == 0) {
      ls >> info.m;
      if (!ls) throw ParseError("read_sdpa: bad constraint count line");
      stage = 1;
    } else if (stage == 1) {
      ls >> nblocks;
      if (!ls) throw ParseError("read_sdpa: bad block count line");
      stage = 2;
    } else if (stage == 2) {
      int v;
      while (ls >> v) info.block_sizes.push_back(v);
      if ((int)info.block_sizes.size() != nblocks)
        throw ParseError("read_sdpa: block size list does not match block count");
      stage = 3;
    } else if (stage == 3) {
      std::string tok;
      while (ls >> tok) info.rhs.push_back(tok);
      if ((int)info.rhs.size() != info.m)
        throw ParseError("read_sdpa: right-hand side count does not match m");
      stage = 4;
    } else {
      SdpaEntry e;
      ls >> e.matno >> e.blkno >> e.i >> e.j >> e.value;
      if (!ls) throw ParseError("read_sdpa: malformed entry line: '" + linestr + "'");
      info.entries.push_back(std::move(e));
    }
  }
  if (stage < 4) throw ParseError("read_sdpa: truncated header");
  return info;
}

namespace {

// Token scanner for the brace-format matrix sections of solver output.
struct BraceLexer {
  const std::string& s;
  size_t pos = 0;
  explicit BraceLexer(const std::string& str) : s(str) {}
  // returns '{', '}', 'n' (number, filled into out), or 0 at end
  char next(std::string* out) {
    while (pos < s.size()) {
      char c = s[pos];
      if (c == '{' || c == '}') {
        ++pos;
        return c;
      }
      if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
        continue;
      }
      size_t start = pos;
      while (pos < s.size() && s[pos] != ',' && s[pos] != '{' && s[pos] != '}' &&
             !std::isspace(static_cast<unsigned char>(s[pos])))
        ++pos;
      *out = s.substr(start, pos - start);
      return 'n';
    }
    return 0;
  }
};

}  // namespace

SosTuple read_solution(const std::string& path, const SdpProblem& p) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_solution: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string all = buf.str();
  size_t ypos = all.find("yMat");
  if (ypos == std::string::npos)
    throw ParseError("read_solution: no yMat section in '" + path + "'");
  std::string body = all.substr(ypos + 4);
  size_t open = body.find('{');
  if (open == std::string::npos) throw ParseError("read_solution: yMat has no opening brace");
  body = body.substr(open);

  auto sizes = p.block_sizes();
  SosTuple t;
  t.d = p.d;
  t.epsilon = p.epsilon;
  Precision prec = p.prec;

  BraceLexer lex(body);
  std::string tok;
  if (lex.next(&tok) != '{') throw ParseError("read_solution: yMat structure error");
  double max_skew = 0.0;

  for (int blk = 0; blk < 8; ++blk) {
    int n = sizes[blk];
    char c = lex.next(&tok);
    if (c != '{')
      throw ParseError("read_solution: missing block " + std::to_string(blk + 1) + " in yMat");
    std::vector<std::vector<Enclosure>> mat(n, std::vector<Enclosure>(n, Enclosure::zero(prec)));
    for (int i = 0; i < n; ++i) {
      c = lex.next(&tok);
      if (c != '{')
        throw ParseError("read_solution: missing row " + std::to_string(i + 1) + " of block " +
                         std::to_string(blk + 1));
      for (int j = 0; j < n; ++j) {
        c = lex.next(&tok);
        if (c != 'n')
          throw ParseError("read_solution: block " + std::to_string(blk + 1) +
                           " row too short (dimension mismatch)");
        mat[i][j] = Enclosure::from_decimal(tok, prec);
      }
      c = lex.next(&tok);
      if (c != '}')
        throw ParseError("read_solution: block " + std::to_string(blk + 1) +
                         " row too long (dimension mismatch)");
    }
    c = lex.next(&tok);
    if (c != '}')
      throw ParseError("read_solution: block " + std::to_string(blk + 1) + " not closed");

    SymEncMatrix sym(n, prec);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        sym.at(i, j) = (mat[i][j] + mat[j][i]).div_si(2);
        Enclosure skew = (mat[i][j] - mat[j][i]).abs_interval();
        max_skew = std::max(max_skew, skew.upper_double());
      }
    if (p.epsilon != 0) {
      Enclosure eps = Enclosure::from_rational(p.epsilon, prec);
      for (int i = 0; i < n; ++i) sym.at(i, i) += eps;
    }
    if (blk < 4)
      t.Q[blk] = std::move(sym);
    else
      t.R[blk - 4] = std::move(sym);
  }
  if (max_skew > 1e-40)
    t.warnings.push_back("solution matrices have skew up to " + std::to_string(max_skew) +
                         "; symmetrized");
  return t;
}

}  // namespace fopt
