#include "hca/opalg.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace hca::opalg {

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << numerator(q) << "/" << denominator(q);
  return os.str();
}

double SqrtPiCoeff::value() const {
  constexpr double pi = 3.14159265358979323846;
  return to_double(q) * std::pow(pi, p / 2.0);
}

std::string SqrtPiCoeff::str() const {
  std::ostringstream os;
  os << rational_str(q) << " * pi^(" << p << "/2)";
  return os.str();
}

SqrtPiCoeff add(const SqrtPiCoeff& a, const SqrtPiCoeff& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.p != b.p)
    throw std::logic_error("SqrtPiCoeff: mixed pi-power addition (p=" +
                           std::to_string(a.p) + " vs p=" + std::to_string(b.p) + ")");
  return SqrtPiCoeff(a.q + b.q, a.p);
}

SqrtPiCoeff mul(const SqrtPiCoeff& a, const SqrtPiCoeff& b) {
  return SqrtPiCoeff(a.q * b.q, a.p + b.p);
}

SqrtPiCoeff neg(const SqrtPiCoeff& a) { return SqrtPiCoeff(-a.q, a.p); }

int Word::degree() const {
  int d = 0;
  for (char c : letters) d += (c == 'N') ? 1 : 2;
  return d;
}

std::string Word::str() const { return letters.empty() ? "Id" : letters; }

bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }

OperatorPoly OperatorPoly::identity() {
  OperatorPoly p;
  p.terms[Word{}] = SqrtPiCoeff(1, 0);
  return p;
}

OperatorPoly OperatorPoly::gen(Gen g) {
  OperatorPoly p;
  p.terms[Word{std::string(1, static_cast<char>(g))}] = SqrtPiCoeff(1, 0);
  return p;
}

std::string OperatorPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << " * " << w.str();
  }
  return os.str();
}

OperatorPoly add(const OperatorPoly& a, const OperatorPoly& b) {
  OperatorPoly out = a;
  for (const auto& [w, c] : b.terms) {
    auto it = out.terms.find(w);
    if (it == out.terms.end()) {
      out.terms.emplace(w, c);
    } else {
      SqrtPiCoeff s = add(it->second, c);
      if (s.is_zero())
        out.terms.erase(it);
      else
        it->second = s;
    }
  }
  return out;
}

OperatorPoly scale(const SqrtPiCoeff& c, const OperatorPoly& p) {
  OperatorPoly out;
  if (c.is_zero()) return out;
  for (const auto& [w, pc] : p.terms) out.terms.emplace(w, mul(c, pc));
  return out;
}

OperatorPoly scale(const Rational& c, const OperatorPoly& p) {
  return scale(SqrtPiCoeff(c, 0), p);
}

OperatorPoly compose(const OperatorPoly& p, const OperatorPoly& q) {
  OperatorPoly out;
  for (const auto& [wp, cp] : p.terms) {
    for (const auto& [wq, cq] : q.terms) {
      Word w{wp.letters + wq.letters};
      SqrtPiCoeff c = mul(cp, cq);
      auto it = out.terms.find(w);
      if (it == out.terms.end()) {
        out.terms.emplace(std::move(w), c);
      } else {
        SqrtPiCoeff s = add(it->second, c);
        if (s.is_zero())
          out.terms.erase(it);
        else
          it->second = s;
      }
    }
  }
  return out;
}

ReducedPoly apply_to_one(const OperatorPoly& p) {
  ReducedPoly out;
  for (const auto& [w, c] : p.terms) {
    if (w.letters.empty()) {
      out.constant_part = add(out.constant_part, c);
      continue;
    }
    if (w.letters.back() == 'D') continue;  // Delta(1) = 0
    Word prefix{w.letters.substr(0, w.letters.size() - 1)};
    auto it = out.h_terms.find(prefix);
    if (it == out.h_terms.end()) {
      out.h_terms.emplace(std::move(prefix), c);
    } else {
      SqrtPiCoeff s = add(it->second, c);
      if (s.is_zero())
        out.h_terms.erase(it);
      else
        it->second = s;
    }
  }
  return out;
}

Rational gamma_half(int m) {
  if (m < 0) throw std::domain_error("gamma_half: m < 0");
  Rational r = 1;
  for (int i = 0; i < m; ++i) r *= Rational(2 * i + 1, 2);
  return r;
}

Rational gamma_bracket(int k, int j) {
  if (k + j < 0) throw std::domain_error("gamma_bracket: k+j < 0");
  Rational ratio = 1;  // Gamma(k+j+1/2)/Gamma(k+1/2)
  if (j >= 0) {
    for (int i = 0; i < j; ++i) ratio *= Rational(2 * (k + i) + 1, 2);
  } else {
    for (int i = 0; i < -j; ++i) {
      Rational f(2 * (k + j + i) + 1, 2);
      if (f == 0) throw std::domain_error("gamma_bracket: Gamma pole");
      ratio /= f;
    }
  }
  Rational fact = 1;
  for (int i = 2; i <= k + j; ++i) fact *= i;
  return ratio / fact;
}

namespace {

std::mutex g_mutex;  // serializes every table insertion below

RSTables g_rs;
int g_rs_built = -1;
PQTables g_pq;
int g_pq_built = -1;
std::map<int, OperatorPoly> g_d;
const OperatorPoly g_zero{};

// Builds both families with the shared recursion skeleton.
void build_rs_locked(int k_max) {
  if (k_max <= g_rs_built) return;
  if (g_rs_built < 0) {
    g_rs.R[{0, 0}] = OperatorPoly::identity();
    g_rs.S[{0, 0}] = OperatorPoly::zero();
    g_rs_built = 0;
  }
  OperatorPoly N = OperatorPoly::gen(Gen::N);
  OperatorPoly Delta = OperatorPoly::gen(Gen::Delta);
  OperatorPoly NN_minus_D = add(compose(N, N), scale(Rational(-1), Delta));
  for (int k = g_rs_built + 1; k <= k_max; ++k) {
    for (int j = 0; j <= k; ++j) {
      auto at = [&](const std::map<std::pair<int, int>, OperatorPoly>& t, int kk,
                    int jj) -> const OperatorPoly& {
        if (kk < 0 || jj < 0 || kk < jj) return g_zero;
        auto it = t.find({kk, jj});
        return it == t.end() ? g_zero : it->second;
      };
      // R_kj = -(N^2 - Delta) R_{k-1,j} + N S_{k-1,j}
      OperatorPoly R = add(scale(Rational(-1), compose(NN_minus_D, at(g_rs.R, k - 1, j))),
                           compose(N, at(g_rs.S, k - 1, j)));
      // S_kj = N R_{k-1,j-1} - Delta N R_{k-1,j} + Delta S_{k-1,j}
      OperatorPoly S = add(
          add(compose(N, at(g_rs.R, k - 1, j - 1)),
              scale(Rational(-1), compose(compose(Delta, N), at(g_rs.R, k - 1, j)))),
          compose(Delta, at(g_rs.S, k - 1, j)));
      g_rs.R[{k, j}] = std::move(R);
      g_rs.S[{k, j}] = std::move(S);
    }
  }
  g_rs_built = k_max;
}

void build_pq_locked(int k_max) {
  if (k_max <= g_pq_built) return;
  if (g_pq_built < 0) {
    g_pq.P[{0, 0}] = OperatorPoly::zero();
    g_pq.Q[{0, 0}] = OperatorPoly::identity();
    g_pq_built = 0;
  }
  OperatorPoly N = OperatorPoly::gen(Gen::N);
  OperatorPoly Delta = OperatorPoly::gen(Gen::Delta);
  OperatorPoly NN_minus_D = add(compose(N, N), scale(Rational(-1), Delta));
  for (int k = g_pq_built + 1; k <= k_max; ++k) {
    for (int j = 0; j <= k; ++j) {
      auto at = [&](const std::map<std::pair<int, int>, OperatorPoly>& t, int kk,
                    int jj) -> const OperatorPoly& {
        if (kk < 0 || jj < 0 || kk < jj) return g_zero;
        auto it = t.find({kk, jj});
        return it == t.end() ? g_zero : it->second;
      };
      OperatorPoly P = add(scale(Rational(-1), compose(NN_minus_D, at(g_pq.P, k - 1, j))),
                           compose(N, at(g_pq.Q, k - 1, j)));
      OperatorPoly Q = add(
          add(compose(N, at(g_pq.P, k - 1, j - 1)),
              scale(Rational(-1), compose(compose(Delta, N), at(g_pq.P, k - 1, j)))),
          compose(Delta, at(g_pq.Q, k - 1, j)));
      g_pq.P[{k, j}] = std::move(P);
      g_pq.Q[{k, j}] = std::move(Q);
    }
  }
  g_pq_built = k_max;
}

}  // namespace

const OperatorPoly& RSTables::r(int k, int j) const {
  if (k < 0 || j < 0 || k < j) return g_zero;
  auto it = R.find({k, j});
  return it == R.end() ? g_zero : it->second;
}
const OperatorPoly& RSTables::s(int k, int j) const {
  if (k < 0 || j < 0 || k < j) return g_zero;
  auto it = S.find({k, j});
  return it == S.end() ? g_zero : it->second;
}
const OperatorPoly& PQTables::p(int k, int j) const {
  if (k < 0 || j < 0 || k < j) return g_zero;
  auto it = P.find({k, j});
  return it == P.end() ? g_zero : it->second;
}
const OperatorPoly& PQTables::q(int k, int j) const {
  if (k < 0 || j < 0 || k < j) return g_zero;
  auto it = Q.find({k, j});
  return it == Q.end() ? g_zero : it->second;
}

namespace {

OperatorPoly z_locked(int k) {
  if (k == 0) return OperatorPoly::zero();
  build_rs_locked(2 * k);
  OperatorPoly out;
  for (int j = 0; j <= k - 1; ++j)
    out = add(out, scale(gamma_bracket(k, j - 1), g_rs.r(k + j - 1, j)));
  return out;
}

OperatorPoly a_locked(int k) {
  build_rs_locked(2 * k + 2);
  OperatorPoly out;
  for (int j = 0; j <= k + 1; ++j)
    out = add(out, scale(gamma_bracket(k, j), g_rs.s(k + j, j)));
  return out;
}

// Assumes g_mutex held; recursion per the inductive definition.
const OperatorPoly& d_locked(int k) {
  auto it = g_d.find(k);
  if (it != g_d.end()) return it->second;

  OperatorPoly out;
  if (k == 1) {
    out = scale(SqrtPiCoeff(2, -1), OperatorPoly::identity());
  } else if (k % 2 == 0) {
    int n = k / 2;
    Rational nfact = 1;
    for (int i = 2; i <= n; ++i) nfact *= i;
    for (int i = 1; i <= n; ++i) {
      // Gamma(i+1/2) Gamma(n-i+1/2) / n! = gh(i) gh(n-i) / n! * pi; the
      // overall 1/sqrt(pi) leaves a net factor pi^(1/2).
      SqrtPiCoeff c(gamma_half(i) * gamma_half(n - i) / nfact, 1);
      out = add(out, scale(c, compose(d_locked(2 * i - 1), a_locked(n - i))));
    }
  } else {
    int n = (k - 1) / 2;
    out = scale(SqrtPiCoeff(1, -1), z_locked(n + 1));
    for (int i = 1; i <= n; ++i) {
      Rational ifact = 1;
      for (int m = 2; m <= i; ++m) ifact *= m;
      // i! Gamma(n-i+1/2) / Gamma(n+3/2) is rational; keep the 1/sqrt(pi).
      SqrtPiCoeff c(ifact * gamma_half(n - i) / gamma_half(n + 1), -1);
      out = add(out, scale(c, compose(d_locked(2 * i), a_locked(n - i))));
    }
  }
  return g_d.emplace(k, std::move(out)).first->second;
}

}  // namespace

const RSTables& rs_tables(int k_max) {
  std::lock_guard<std::mutex> lk(g_mutex);
  build_rs_locked(k_max);
  return g_rs;
}

const PQTables& pq_tables(int k_max) {
  std::lock_guard<std::mutex> lk(g_mutex);
  build_pq_locked(k_max);
  return g_pq;
}

OperatorPoly z_operator(int k) {
  if (k < 0) throw std::domain_error("z_operator: k < 0");
  std::lock_guard<std::mutex> lk(g_mutex);
  return z_locked(k);
}

OperatorPoly a_operator(int k) {
  if (k < 0) throw std::domain_error("a_operator: k < 0");
  std::lock_guard<std::mutex> lk(g_mutex);
  return a_locked(k);
}

const OperatorPoly& d_operator(int k) {
  if (k < 1) throw std::domain_error("d_operator: k < 1");
  std::lock_guard<std::mutex> lk(g_mutex);
  return d_locked(k);
}

}  // namespace hca::opalg
