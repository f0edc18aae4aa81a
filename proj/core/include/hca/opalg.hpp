// Exact noncommutative operator algebra over the generators {N, Delta}.
//
// Operators are finite sums of words with coefficients q * pi^(p/2), q an
// arbitrary-precision rational and p an integer. This is the smallest ring
// containing every scalar appearing in the D_k recursion: all Gamma ratios
// reduce to rationals times half-integer powers of pi.
//
// Convention: the leftmost letter of a word acts last, i.e. the word "ND"
// denotes the composition N∘Delta ("apply Delta, then N").

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hca::opalg {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);
std::string rational_str(const Rational& q);  // always "num/den"

// Scalar q * pi^(p/2). Zero is canonical (q == 0 forces p == 0).
struct SqrtPiCoeff {
  Rational q;
  int p = 0;

  SqrtPiCoeff() = default;
  SqrtPiCoeff(Rational q_, int p_) : q(std::move(q_)), p(p_) {
    if (q == 0) p = 0;
  }

  bool is_zero() const { return q == 0; }
  double value() const;
  std::string str() const;  // "num/den * pi^(p/2)"

  friend bool operator==(const SqrtPiCoeff& a, const SqrtPiCoeff& b) {
    return a.q == b.q && a.p == b.p;
  }
};

// Throws std::logic_error when both operands are nonzero with distinct p:
// such sums never occur inside a fixed D_k and indicate a bug upstream.
SqrtPiCoeff add(const SqrtPiCoeff& a, const SqrtPiCoeff& b);
SqrtPiCoeff mul(const SqrtPiCoeff& a, const SqrtPiCoeff& b);
SqrtPiCoeff neg(const SqrtPiCoeff& a);

enum class Gen : char { N = 'N', Delta = 'D' };

inline int degree(Gen g) { return g == Gen::N ? 1 : 2; }

// Word over {N, Delta}; empty word is the identity operator.
struct Word {
  std::string letters;  // 'N' and 'D' only

  int degree() const;
  std::string str() const;  // "Id" for the empty word, else e.g. "ND"
};

// Canonical order: by degree, then lexicographic (D < N).
struct WordOrder {
  bool operator()(const Word& a, const Word& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.letters < b.letters;
  }
};

bool operator==(const Word& a, const Word& b);

// Finite formal sum of words; zero coefficients are never stored.
struct OperatorPoly {
  std::map<Word, SqrtPiCoeff, WordOrder> terms;

  bool is_zero() const { return terms.empty(); }
  static OperatorPoly zero() { return {}; }
  static OperatorPoly identity();
  static OperatorPoly gen(Gen g);

  std::string str() const;  // canonical text serialization

  friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) {
    return a.terms == b.terms;
  }
};

OperatorPoly add(const OperatorPoly& a, const OperatorPoly& b);
OperatorPoly scale(const SqrtPiCoeff& c, const OperatorPoly& p);
OperatorPoly scale(const Rational& c, const OperatorPoly& p);
// p∘q: p acts after q (word concatenation p.q).
OperatorPoly compose(const OperatorPoly& p, const OperatorPoly& q);

// P applied to the constant 1. Words ending in Delta vanish; words ending in
// N contribute their prefix applied to the symbol H := Delta(delta); the
// identity word contributes a constant.
struct ReducedPoly {
  SqrtPiCoeff constant_part;
  std::map<Word, SqrtPiCoeff, WordOrder> h_terms;
};

ReducedPoly apply_to_one(const OperatorPoly& p);

// {k,j} = Gamma(k+j+1/2) / ((k+j)! * Gamma(k+1/2)), exact.
// For j < 0 the Gamma ratio is the reciprocal telescoping product; requires
// k+j >= 0 (the factorial must be defined).
Rational gamma_bracket(int k, int j);

// Gamma(m+1/2) / sqrt(pi) = (2m)! / (4^m m!) as an exact rational; m >= 0.
Rational gamma_half(int m);

// Recursion tables of the first family (R_kj, S_kj) and second family
// (P_kj, Q_kj). Entries are zero for k < 0, j < 0 or k < j.
struct RSTables {
  std::map<std::pair<int, int>, OperatorPoly> R, S;
  const OperatorPoly& r(int k, int j) const;
  const OperatorPoly& s(int k, int j) const;
};
struct PQTables {
  std::map<std::pair<int, int>, OperatorPoly> P, Q;
  const OperatorPoly& p(int k, int j) const;
  const OperatorPoly& q(int k, int j) const;
};

const RSTables& rs_tables(int k_max);
const PQTables& pq_tables(int k_max);

OperatorPoly z_operator(int k);  // Z_k, with Z_0 = 0
OperatorPoly a_operator(int k);  // A_k

// D_k; memoized, thread-safe for concurrent readers. k >= 1.
const OperatorPoly& d_operator(int k);

}  // namespace hca::opalg
