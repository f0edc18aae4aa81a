#include "hca/symcalc.hpp"

#include <cstdlib>
#include <limits>
#include <sstream>

namespace hca::symcalc {

namespace {

constexpr int kInfTrunc = std::numeric_limits<int>::max() / 4;

int min_order(const HomogeneousSeries& a) {
  for (const auto& [k, v] : a.c)
    if (v != 0) return k;
  return kInfTrunc;  // zero series: every order reliable
}

void drop_beyond_trunc(HomogeneousSeries& a) {
  for (auto it = a.c.begin(); it != a.c.end();) {
    if (it->first > a.trunc) {
      if (it->second != 0) a.loss = true;
      it = a.c.erase(it);
    } else if (it->second == 0) {
      it = a.c.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

HomogeneousSeries hs_add(const HomogeneousSeries& a, const HomogeneousSeries& b) {
  if (min_order(a) == kInfTrunc) {
    HomogeneousSeries out = b;
    out.trunc = std::min(a.trunc, b.trunc);
    out.loss = a.loss || b.loss;
    if (out.c.empty()) out.weight = a.weight;
    drop_beyond_trunc(out);
    return out;
  }
  if (min_order(b) == kInfTrunc) return hs_add(b, a);
  if (a.weight != b.weight)
    throw std::logic_error("hs_add: weight mismatch");
  HomogeneousSeries out = a;
  for (const auto& [k, v] : b.c) out.c[k] += v;
  out.trunc = std::min(a.trunc, b.trunc);
  out.loss = a.loss || b.loss;
  drop_beyond_trunc(out);
  return out;
}

HomogeneousSeries hs_scale(const Rational& s, const HomogeneousSeries& a) {
  HomogeneousSeries out = a;
  if (s == 0) {
    out.c.clear();
    return out;
  }
  for (auto& [k, v] : out.c) v *= s;
  return out;
}

HomogeneousSeries hs_mul(const HomogeneousSeries& a, const HomogeneousSeries& b) {
  HomogeneousSeries out;
  out.weight = a.weight + b.weight;
  out.loss = a.loss || b.loss;
  // c_k of the product needs a_i with i <= k - min(b) and b_j likewise, so
  // the product is reliable through min(Ta + min(b), Tb + min(a)).
  long t = std::min<long>(static_cast<long>(a.trunc) + min_order(b),
                          static_cast<long>(b.trunc) + min_order(a));
  out.trunc = static_cast<int>(std::min<long>(t, kInfTrunc));
  for (const auto& [i, av] : a.c)
    for (const auto& [j, bv] : b.c) out.c[i + j] += av * bv;
  drop_beyond_trunc(out);
  return out;
}

namespace {

// d/dr: c_k (w-2k) z^k r^(w-2k-1).
HomogeneousSeries hs_dr(const HomogeneousSeries& u) {
  HomogeneousSeries out;
  out.weight = u.weight - 1;
  out.trunc = u.trunc;
  out.loss = u.loss;
  for (const auto& [k, v] : u.c) out.c[k] = v * (u.weight - 2 * k);
  drop_beyond_trunc(out);
  return out;
}

// d/dz: coefficient at k comes from (k+1) c_{k+1}; one order is consumed.
HomogeneousSeries hs_dz(const HomogeneousSeries& u) {
  HomogeneousSeries out;
  out.weight = u.weight - 2;
  out.trunc = u.trunc - 1;
  out.loss = u.loss;
  for (const auto& [k, v] : u.c)
    if (k >= 1) out.c[k - 1] = v * k;
  drop_beyond_trunc(out);
  return out;
}

HomogeneousSeries hs_shift_weight(const HomogeneousSeries& u, int dw) {
  HomogeneousSeries out = u;  // multiply by r^dw
  out.weight += dw;
  return out;
}

}  // namespace

HomogeneousSeries hseries_laplacian(const HomogeneousSeries& u) {
  // u_rr + u_r / r + (r^2/4) u_zz
  HomogeneousSeries urr = hs_dr(hs_dr(u));
  HomogeneousSeries ur_over_r = hs_shift_weight(hs_dr(u), -1);
  HomogeneousSeries uzz = hs_scale(Rational(1, 4), hs_shift_weight(hs_dz(hs_dz(u)), 2));
  return hs_add(hs_add(urr, ur_over_r), uzz);
}

HomogeneousSeries hseries_grad_pair(const HomogeneousSeries& u,
                                    const HomogeneousSeries& v) {
  // u_r v_r + (r^2/4) u_z v_z
  HomogeneousSeries a = hs_mul(hs_dr(u), hs_dr(v));
  HomogeneousSeries b =
      hs_scale(Rational(1, 4), hs_shift_weight(hs_mul(hs_dz(u), hs_dz(v)), 2));
  return hs_add(a, b);
}

namespace {

using Poly = std::vector<Rational>;  // truncated power series, index = order

Poly pmul(const Poly& a, const Poly& b, int n) {
  Poly out(n, 0);
  for (int i = 0; i < static_cast<int>(a.size()) && i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < static_cast<int>(b.size()) && i + j < n; ++j)
      out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly padd(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

// arctan(u) for a series u with u(0) = 0.
Poly atan_series(const Poly& u, int n) {
  Poly out(n, 0), upow = u;
  upow.resize(n, 0);
  Poly u2 = pmul(u, u, n);
  for (int i = 1; i < n; i += 2) {
    Rational sgn = (i % 4 == 1) ? 1 : -1;
    for (int m = 0; m < n; ++m) out[m] += sgn * upow[m] / i;
    upow = pmul(upow, u2, n);
  }
  return out;
}

// (1+u)^(-1/2) for a series u with u(0) = 0.
Poly invsqrt1p(const Poly& u, int n) {
  Poly res(n, 0), up(n, 0);
  up[0] = 1;
  Rational binom = 1;  // binom(-1/2, i)
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) res[m] += binom * up[m];
    up = pmul(up, u, n);
    binom *= Rational(-1 - 2 * i, 2 * (i + 1));
  }
  return res;
}

// G(xi) = 4 xi + y + (1 + y^2) arctan(y) for the current y-series.
Poly defect(const Poly& y, int n) {
  Poly one_plus_y2(n, 0);
  one_plus_y2[0] = 1;
  Poly y2 = pmul(y, y, n);
  one_plus_y2 = padd(one_plus_y2, y2);
  Poly G = pmul(one_plus_y2, atan_series(y, n), n);
  G = padd(G, y);
  if (n > 1) G[1] += 4;
  return G;
}

}  // namespace

std::vector<Rational> y0_taylor(int n) {
  if (n < 1) throw std::domain_error("y0_taylor: n < 1");
  Poly y(n, 0);
  // Order-by-order implicit solve; dG/dy at the origin equals 2, so each new
  // coefficient is fixed by a_m -= E_m / 2 where E is the current defect.
  for (int m = 1; m < n; ++m) {
    Poly E = defect(y, m + 1);
    y[m] -= E[m] / 2;
  }
  return y;
}

std::vector<Rational> f_taylor(int n) {
  if (n < 1) throw std::domain_error("f_taylor: n < 1");
  Poly y = y0_taylor(n);
  Poly num = y;
  if (n > 1) num[1] += 4;  // 4 xi + y0
  Poly y2 = pmul(y, y, n);
  return pmul(num, invsqrt1p(y2, n), n);
}

HomogeneousSeries delta_series(int K) {
  if (K < 1) throw std::domain_error("delta_series: K < 1");
  std::vector<Rational> F = f_taylor(K + 1);
  HomogeneousSeries out;
  out.weight = 1;
  out.trunc = K;
  for (int k = 0; k <= K && k < static_cast<int>(F.size()); ++k)
    if (F[k] != 0) out.c[k] = F[k];
  return out;
}

EvalContext EvalContext::interval(Rational L) {
  EvalContext c;
  c.geom = Geometry::Interval;
  c.L = std::move(L);
  return c;
}
EvalContext EvalContext::disk(Rational R) {
  EvalContext c;
  c.geom = Geometry::Disk;
  c.R = std::move(R);
  return c;
}
EvalContext EvalContext::heisenberg(int K) {
  EvalContext c;
  c.geom = Geometry::HeisenbergPlane;
  c.K = K;
  return c;
}

bool BoundaryIntegrand::is_zero() const {
  for (const auto& [m, v] : terms)
    if (!v.is_zero()) return false;
  return true;
}

std::pair<int, SqrtPiCoeff> BoundaryIntegrand::monomial() const {
  std::pair<int, SqrtPiCoeff> out{0, SqrtPiCoeff()};
  int nonzero = 0;
  for (const auto& [m, v] : terms) {
    if (v.is_zero()) continue;
    ++nonzero;
    out = {m, v};
  }
  if (nonzero > 1)
    throw std::logic_error("BoundaryIntegrand::monomial: not a monomial");
  return out;
}

std::string BoundaryIntegrand::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, v] : terms) {
    if (v.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << v.str();
    if (m != 0) os << " * r^(" << -m << ")";
  }
  return os.str();
}

LaurentRadial disk_lap(const LaurentRadial& f) {
  // (c r^m)'' + (c r^m)'/r = c m^2 r^(m-2)
  LaurentRadial out;
  for (const auto& [m, v] : f.c)
    if (m != 0 && v != 0) out.c[m - 2] += v * m * m;
  return out;
}

LaurentRadial disk_n(const LaurentRadial& f) {
  // N f = 2 g(grad f, grad delta) + f Delta delta = -2 f' - f / r
  LaurentRadial out;
  for (const auto& [m, v] : f.c)
    if (v != 0) out.c[m - 1] += -v * (2 * m + 1);
  return out;
}

HomogeneousSeries heis_n(const HomogeneousSeries& f, const HomogeneousSeries& delta,
                         const HomogeneousSeries& delta_lap) {
  return hs_add(hs_scale(Rational(2), hseries_grad_pair(f, delta)),
                hs_mul(f, delta_lap));
}

namespace {

Rational laurent_eval(const LaurentRadial& f, const Rational& R) {
  Rational out = 0;
  for (const auto& [m, v] : f.c) {
    Rational p = 1;
    for (int i = 0; i < std::abs(m); ++i) p *= R;
    if (m >= 0)
      out += v * p;
    else
      out += v / p;
  }
  return out;
}

void integrand_accum(BoundaryIntegrand& bi, int m, const SqrtPiCoeff& v) {
  if (v.is_zero()) return;
  auto it = bi.terms.find(m);
  if (it == bi.terms.end()) {
    bi.terms.emplace(m, v);
  } else {
    SqrtPiCoeff s = opalg::add(it->second, v);
    if (s.is_zero())
      bi.terms.erase(it);
    else
      it->second = s;
  }
}

}  // namespace

BoundaryIntegrand eval_reduced(const EvalContext& ctx, const ReducedPoly& rp) {
  BoundaryIntegrand out;
  out.geom = ctx.geom;
  if (!rp.constant_part.is_zero()) integrand_accum(out, 0, rp.constant_part);

  switch (ctx.geom) {
    case Geometry::Interval:
      // H = Delta delta = 0 in one dimension: all H-terms vanish.
      return out;
    case Geometry::Disk: {
      LaurentRadial H;
      H.c[-1] = -1;  // Delta delta = -1/r for delta = R - r
      for (const auto& [w, coeff] : rp.h_terms) {
        LaurentRadial f = H;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
          f = (*it == 'D') ? disk_lap(f) : disk_n(f);
        Rational val = laurent_eval(f, ctx.R);
        integrand_accum(out, 0, opalg::mul(coeff, SqrtPiCoeff(val, 0)));
      }
      return out;
    }
    case Geometry::HeisenbergPlane: {
      HomogeneousSeries delta = delta_series(ctx.K);
      HomogeneousSeries H = hseries_laplacian(delta);
      for (const auto& [w, coeff] : rp.h_terms) {
        HomogeneousSeries f = H;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
          f = (*it == 'D') ? hseries_laplacian(f) : heis_n(f, delta, H);
        if (f.trunc < 0)
          throw TruncationInsufficient(
              "eval_reduced: z^0 coefficient beyond truncation (K = " +
              std::to_string(ctx.K) + ")");
        Rational c0 = f.coeff(0);
        if (c0 != 0)
          integrand_accum(out, -f.weight, opalg::mul(coeff, SqrtPiCoeff(c0, 0)));
      }
      return out;
    }
  }
  throw std::logic_error("eval_reduced: bad geometry");
}

BoundaryIntegrand heisenberg_integrand(int k, int K) {
  if (K < 1) throw std::domain_error("heisenberg_integrand: K < 1");
  ReducedPoly rp = opalg::apply_to_one(opalg::d_operator(k));
  // doubling always terminates: D_k needs a fixed finite number of orders
  for (int cap = std::max(K, 2 * k + 8); K <= cap; K *= 2) {
    try {
      return eval_reduced(EvalContext::heisenberg(K), rp);
    } catch (const TruncationInsufficient&) {
    }
  }
  return eval_reduced(EvalContext::heisenberg(4 * k + 16), rp);
}

SqrtPiCoeff coefficient(const EvalContext& ctx, int k) {
  if (k < 0) throw std::domain_error("coefficient: k < 0");
  switch (ctx.geom) {
    case Geometry::Interval:
      if (k == 0) return SqrtPiCoeff(ctx.L, 0);
      if (k == 1) return SqrtPiCoeff(-4, -1);  // -(2/sqrt(pi)) * sigma, sigma = 2
      return SqrtPiCoeff();                    // flat boundary: D_k(1) = 0
    case Geometry::Disk: {
      if (k == 0) return SqrtPiCoeff(ctx.R * ctx.R, 2);  // pi R^2
      if (k == 1) return SqrtPiCoeff(-4 * ctx.R, 1);     // -(2/sqrt(pi)) 2 pi R
      ReducedPoly rp = opalg::apply_to_one(opalg::d_operator(k));
      BoundaryIntegrand bi = eval_reduced(ctx, rp);
      auto [m, v] = bi.monomial();
      // a_k = -(D_k(1) at r=R) * 2 pi R
      return opalg::mul(v, SqrtPiCoeff(-2 * ctx.R, 2));
    }
    case Geometry::HeisenbergPlane:
      throw std::domain_error(
          "coefficient: Sigma is non-compact; use heisenberg_integrand");
  }
  throw std::logic_error("coefficient: bad geometry");
}

}  // namespace hca::symcalc
