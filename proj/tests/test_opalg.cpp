// Frozen exact values for the operator algebra: scalar ring laws, Gamma
// ratios, the recursion tables, and the D_k operators through k = 8.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hca/opalg.hpp"

using namespace hca::opalg;

namespace {

OperatorPoly mk(std::vector<std::tuple<std::string, Rational, int>> terms) {
  OperatorPoly p;
  for (auto& [w, q, pp] : terms) {
    SqrtPiCoeff c(q, pp);
    if (!c.is_zero()) p.terms[Word{w}] = c;
  }
  return p;
}

Rational frac(long long n, long long d) { return Rational(n, d); }

}  // namespace

TEST_CASE("scalar ring") {
  SqrtPiCoeff z(0, 5);
  CHECK(z.is_zero());
  CHECK(z.p == 0);  // zero is canonical

  SqrtPiCoeff a(frac(1, 2), -1), b(frac(1, 3), -1);
  CHECK(add(a, b) == SqrtPiCoeff(frac(5, 6), -1));
  CHECK(mul(a, b) == SqrtPiCoeff(frac(1, 6), -2));
  CHECK(add(a, neg(a)).is_zero());
  CHECK_THROWS_AS(add(a, SqrtPiCoeff(1, 0)), std::logic_error);
  CHECK(add(a, SqrtPiCoeff()) == a);

  CHECK(SqrtPiCoeff(frac(2, 3), 1).str() == "2/3 * pi^(1/2)");
  CHECK(SqrtPiCoeff(2, -1).value() == doctest::Approx(2 / std::sqrt(3.14159265358979323846)).epsilon(1e-15));
}

TEST_CASE("gamma ratios") {
  CHECK(gamma_bracket(0, 0) == 1);
  CHECK(gamma_bracket(2, 0) == frac(1, 2));
  CHECK(gamma_bracket(1, 1) == frac(3, 4));
  CHECK(gamma_bracket(1, -1) == 2);
  CHECK_THROWS_AS(gamma_bracket(0, -1), std::domain_error);

  CHECK(gamma_half(0) == 1);
  CHECK(gamma_half(1) == frac(1, 2));
  CHECK(gamma_half(2) == frac(3, 4));
  CHECK(gamma_half(3) == frac(15, 8));
}

TEST_CASE("words and serialization") {
  CHECK(Word{""}.degree() == 0);
  CHECK(Word{"ND"}.degree() == 3);
  CHECK(Word{""}.str() == "Id");
  WordOrder lt;
  CHECK(lt(Word{"D"}, Word{"NN"}));   // degree ties broken after degree
  CHECK(lt(Word{"DN"}, Word{"ND"}));  // same degree, D < N
  CHECK(OperatorPoly::zero().str() == "0");
  CHECK(d_operator(2).str() == "1/2 * pi^(0/2) * N");
  CHECK(d_operator(1).str() == "2/1 * pi^(-1/2) * Id");
}

TEST_CASE("recursion tables, first entries") {
  const auto& rs = rs_tables(2);
  CHECK(rs.r(0, 0) == OperatorPoly::identity());
  CHECK(rs.s(0, 0).is_zero());
  CHECK(rs.r(1, 0) == mk({{"NN", -1, 0}, {"D", 1, 0}}));
  CHECK(rs.s(1, 0) == mk({{"DN", -1, 0}}));
  CHECK(rs.s(1, 1) == mk({{"N", 1, 0}}));
  CHECK(rs.r(-1, 0).is_zero());
  CHECK(rs.r(1, 2).is_zero());  // k < j

  const auto& pq = pq_tables(1);
  CHECK(pq.p(0, 0).is_zero());
  CHECK(pq.q(0, 0) == OperatorPoly::identity());
  CHECK(pq.p(1, 0) == mk({{"N", 1, 0}}));
  CHECK(pq.q(1, 0) == mk({{"D", 1, 0}}));
  CHECK(pq.p(1, 1).is_zero());
  CHECK(pq.q(1, 1).is_zero());
}

TEST_CASE("Z and A operators") {
  CHECK(z_operator(0).is_zero());
  CHECK(z_operator(1) == mk({{"", 2, 0}}));
  CHECK(a_operator(0) == mk({{"N", frac(1, 2), 0}}));
  CHECK(a_operator(1) ==
        mk({{"DN", frac(-1, 4), 0}, {"ND", frac(3, 4), 0}, {"NNN", frac(-1, 8), 0}}));
}

TEST_CASE("D_k exact, k <= 5") {
  CHECK(d_operator(1) == mk({{"", 2, -1}}));
  CHECK(d_operator(2) == mk({{"N", frac(1, 2), 0}}));
  CHECK(d_operator(3) == mk({{"D", frac(2, 3), -1}, {"NN", frac(1, 6), -1}}));
  CHECK(d_operator(4) == mk({{"DN", frac(1, 16), 0}, {"ND", frac(3, 16), 0}}));
  CHECK(d_operator(5) == mk({{"DD", frac(1, 5), -1},
                             {"NDN", frac(1, 30), -1},
                             {"NND", frac(1, 15), -1},
                             {"NNNN", frac(-1, 240), -1}}));
}

TEST_CASE("D_k exact, 6 <= k <= 8") {
  CHECK(d_operator(6) == mk({{"DDN", frac(1, 96), 0},
                             {"DND", frac(1, 48), 0},
                             {"DNNN", frac(-1, 768), 0},
                             {"NDD", frac(5, 96), 0},
                             {"NDNN", frac(-1, 768), 0},
                             {"NNDN", frac(1, 768), 0},
                             {"NNND", frac(1, 768), 0}}));
  CHECK(d_operator(7) == mk({{"DDD", frac(1, 21), -1},
                             {"DDNN", frac(-1, 840), -1},
                             {"DNDN", frac(1, 840), -1},
                             {"DNND", frac(1, 840), -1},
                             {"NDDN", frac(1, 168), -1},
                             {"NDND", frac(3, 280), -1},
                             {"NDNNN", frac(-1, 1680), -1},
                             {"NNDD", frac(1, 56), -1},
                             {"NNDNN", frac(-1, 1680), -1},
                             {"NNNDN", frac(-1, 1680), -1},
                             {"NNNND", frac(-1, 840), -1},
                             {"NNNNNN", frac(1, 6720), -1}}));
  // spot checks in D_8 plus full grading
  const auto& d8 = d_operator(8);
  CHECK(d8.terms.at(Word{"NDDD"}) == SqrtPiCoeff(frac(35, 3072), 0));
  CHECK(d8.terms.at(Word{"NNNNND"}) == SqrtPiCoeff(frac(-1, 24576), 0));
  CHECK(d8.terms.at(Word{"DNNNNN"}) == SqrtPiCoeff(frac(1, 24576), 0));
  for (int k = 1; k <= 8; ++k)
    for (const auto& [w, c] : d_operator(k).terms) {
      CHECK(w.degree() == k - 1);
      CHECK(c.p == (k % 2 ? -1 : 0));
    }
}

TEST_CASE("apply_to_one") {
  auto rp = apply_to_one(mk({{"ND", 1, 0}}));  // ends in Delta: kills 1
  CHECK(rp.constant_part.is_zero());
  CHECK(rp.h_terms.empty());

  rp = apply_to_one(mk({{"NDN", frac(1, 3), 0}, {"", 5, -1}}));
  CHECK(rp.constant_part == SqrtPiCoeff(5, -1));
  REQUIRE(rp.h_terms.size() == 1);
  CHECK(rp.h_terms.at(Word{"ND"}) == SqrtPiCoeff(frac(1, 3), 0));

  rp = apply_to_one(d_operator(5));
  REQUIRE(rp.h_terms.size() == 2);
  CHECK(rp.h_terms.at(Word{"ND"}) == SqrtPiCoeff(frac(1, 30), -1));
  CHECK(rp.h_terms.at(Word{"NNN"}) == SqrtPiCoeff(frac(-1, 240), -1));
}
