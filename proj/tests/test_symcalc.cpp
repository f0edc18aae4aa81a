// Evaluation contexts: implicit Taylor data for the Heisenberg distance,
// eikonal and Laplacian checks, boundary restrictions, and global a_k.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hca/opalg.hpp"
#include "hca/symcalc.hpp"

using namespace hca::symcalc;
using hca::opalg::apply_to_one;
using hca::opalg::d_operator;
using hca::opalg::Rational;
using hca::opalg::SqrtPiCoeff;

TEST_CASE("y0 and F Taylor data") {
  auto y = y0_taylor(10);
  std::vector<Rational> y_want = {0,
                                  -2,
                                  0,
                                  Rational(8, 3),
                                  0,
                                  Rational(-64, 5),
                                  0,
                                  Rational(5248, 63),
                                  0,
                                  Rational(-252928, 405)};
  CHECK(y == y_want);

  auto f = f_taylor(10);
  std::vector<Rational> f_want = {0,
                                  2,
                                  0,
                                  Rational(-4, 3),
                                  0,
                                  Rational(68, 15),
                                  0,
                                  Rational(-7304, 315),
                                  0,
                                  Rational(408452, 2835)};
  CHECK(f == f_want);
}

TEST_CASE("delta series: eikonal identity and Laplacian") {
  auto d = delta_series(10);
  CHECK(d.weight == 1);
  CHECK(d.coeff(0) == 0);  // the plane itself is the zero level set
  CHECK(d.coeff(1) == 2);

  auto g = hseries_grad_pair(d, d);  // |grad delta|^2 = 1 exactly
  CHECK(g.weight == 0);
  CHECK(g.coeff(0) == 1);
  for (int k = 1; k <= g.trunc; ++k) CHECK(g.coeff(k) == 0);

  auto h = hseries_laplacian(d);
  CHECK(h.weight == -1);
  CHECK(h.coeff(0) == 0);
  CHECK(h.coeff(1) == 0);
  CHECK(h.coeff(2) == 0);
  CHECK(h.coeff(3) == Rational(-32, 3));  // z^3 r^(-7) term
}

TEST_CASE("series algebra") {
  auto d = delta_series(8);
  auto one = HomogeneousSeries{0, {{0, 1}}, 100, false};
  auto n_of_one = heis_n(one, d, hseries_laplacian(d));
  // N(1) = 2 g(grad 1, grad delta) + 1 * Delta delta = Delta delta
  auto h = hseries_laplacian(d);
  CHECK(n_of_one.weight == h.weight);
  for (int k = 0; k <= std::min(n_of_one.trunc, h.trunc); ++k)
    CHECK(n_of_one.coeff(k) == h.coeff(k));

  auto sq = hs_mul(d, d);
  CHECK(sq.weight == 2);
  CHECK(sq.coeff(0) == 0);
  CHECK(sq.coeff(1) == 0);
  CHECK(sq.coeff(2) == 4);  // (2 z / r)^2
}

TEST_CASE("disk generator actions") {
  LaurentRadial f{{{2, 1}}};  // r^2
  auto lap = disk_lap(f);
  CHECK(lap.c.at(0) == 4);
  auto n = disk_n(f);
  CHECK(n.c.at(1) == -5);  // -(2m+1) r^(m-1)

  LaurentRadial h{{{-1, -1}}};  // H = -1/r
  CHECK(disk_n(h).c.at(-2) == -1);
}

TEST_CASE("boundary integrands per geometry") {
  auto ctx_i = EvalContext::interval(1);
  CHECK(eval_reduced(ctx_i, apply_to_one(d_operator(2))).is_zero());
  CHECK(eval_reduced(ctx_i, apply_to_one(d_operator(4))).is_zero());

  auto ctx_d = EvalContext::disk(1);
  auto b3 = eval_reduced(ctx_d, apply_to_one(d_operator(3)));
  CHECK(b3.monomial().second == SqrtPiCoeff(Rational(-1, 6), -1));

  // D_k(1) restricted to the Heisenberg plane
  for (int k : {2, 3, 4, 6}) CHECK(heisenberg_integrand(k).is_zero());
  auto b5 = heisenberg_integrand(5);
  CHECK(b5.monomial().first == 4);
  CHECK(b5.monomial().second == SqrtPiCoeff(Rational(-4, 15), -1));
  auto b7 = heisenberg_integrand(7);
  CHECK(b7.monomial().first == 6);
  CHECK(b7.monomial().second == SqrtPiCoeff(Rational(-16, 21), -1));
}

TEST_CASE("automatic truncation retry") {
  auto lo = heisenberg_integrand(7, 1);  // starts far too small, retries
  auto hi = heisenberg_integrand(7, 16);
  CHECK(lo.terms == hi.terms);
}

TEST_CASE("global coefficients") {
  auto ctx_i = EvalContext::interval(3);
  CHECK(coefficient(ctx_i, 0) == SqrtPiCoeff(3, 0));
  CHECK(coefficient(ctx_i, 1) == SqrtPiCoeff(-4, -1));
  CHECK(coefficient(ctx_i, 2).is_zero());
  CHECK(coefficient(ctx_i, 5).is_zero());

  auto ctx_d = EvalContext::disk(2);
  CHECK(coefficient(ctx_d, 0) == SqrtPiCoeff(4, 2));    // pi R^2
  CHECK(coefficient(ctx_d, 1) == SqrtPiCoeff(-8, 1));   // -4 sqrt(pi) R
  CHECK(coefficient(ctx_d, 2).value() == doctest::Approx(3.14159265358979323846).epsilon(1e-14));

  CHECK_THROWS(coefficient(EvalContext::heisenberg(), 2));
}
