// Numerical layer: quadrature, half-line kernel and Duhamel formulas,
// heat-content oracles, and the half-power fitter.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hca/heatnum.hpp"

using namespace hca::heatnum;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("adaptive Simpson") {
  double v = adaptive_simpson([](double x) { return x * x; }, 0, 1, 1e-12);
  CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
  v = adaptive_simpson([](double x) { return std::exp(-x * x); }, -8, 8, 1e-12);
  CHECK(v == doctest::Approx(std::sqrt(kPi)).epsilon(1e-11));
}

TEST_CASE("Neumann kernel") {
  CHECK(neumann_kernel(0.2, 0.4, 0.9) ==
        doctest::Approx(neumann_kernel(0.2, 0.9, 0.4)).epsilon(1e-15));
  // unit mass (Neumann boundary conserves heat)
  for (double r : {0.0, 0.5, 2.0}) {
    double mass = adaptive_simpson(
        [r](double s) { return neumann_kernel(0.3, r, s); }, 0, 30, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }
  // derivative vanishes at r = 0 (reflection symmetry): finite difference
  double h = 1e-6;
  double d = (neumann_kernel(0.3, h, 0.7) - neumann_kernel(0.3, 0.0, 0.7)) / h;
  CHECK(std::fabs(d) < 1e-5);
}

TEST_CASE("Duhamel representation recovers a manufactured solution") {
  // v = e^{-r}: v_t - v_rr = -e^{-r}, v_r(t, 0) = -1
  HalfLineProblem p;
  p.f = [](double, double r) { return -std::exp(-r); };
  p.v0 = [](double r) { return std::exp(-r); };
  p.v1 = [](double) { return -1.0; };
  p.support = 45.0;
  p.tol = 1e-9;
  for (double t : {0.1, 0.5})
    for (double r : {0.0, 0.3, 1.2})
      CHECK(duhamel_eval(p, t, r) == doctest::Approx(std::exp(-r)).epsilon(1e-6));
}

TEST_CASE("interval heat content") {
  double L = 1.0;
  CHECK(interval_heat_content(L, 1e-8) ==
        doctest::Approx(L - 4 * std::sqrt(1e-8 / kPi)).epsilon(1e-12));
  for (double t : {1e-4, 1e-5, 1e-6}) {
    double q = interval_heat_content(L, t);
    CHECK(std::fabs(q - (L - 4 * std::sqrt(t / kPi))) < 1e-10);
  }
  CHECK(interval_heat_content(L, 0.2) < interval_heat_content(L, 0.1));
}

TEST_CASE("disk heat content basics") {
  DiskGrid g{600, 100};
  auto s = disk_heat_content(1.0, {1e-4, 1e-3, 1e-2}, g);
  REQUIRE(s.tq.size() == 3);
  CHECK(s.tq[0].second == doctest::Approx(kPi).epsilon(2e-2));
  CHECK(s.tq[1].second < s.tq[0].second);
  CHECK(s.tq[2].second < s.tq[1].second);
  auto u = disk_profile(1.0, 1e-3, g);
  REQUIRE(u.size() == 601u);
  CHECK(u.back() == 0.0);  // Dirichlet boundary
  CHECK(u.front() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("half-power fit round-trip") {
  std::vector<double> a = {2.0, -1.3, 0.7, 0.25};
  HeatContentSamples s;
  s.geom = hca::symcalc::Geometry::Interval;
  for (int i = 0; i < 12; ++i) {
    double t = 1e-2 * std::pow(4.0, -i);
    double q = 0;
    for (int k = 0; k < 4; ++k) q += a[k] * std::pow(t, k / 2.0);
    s.tq.emplace_back(t, q);
  }
  std::sort(s.tq.begin(), s.tq.end());
  auto fit = fit_halfpowers(s, 3);
  for (int k = 0; k < 4; ++k)
    CHECK(fit.coeffs[k] == doctest::Approx(a[k]).epsilon(1e-9));

  // permutation invariance: reversed input gives identical coefficients
  HeatContentSamples r = s;
  std::reverse(r.tq.begin(), r.tq.end());
  auto fit2 = fit_halfpowers(r, 3);
  CHECK(fit2.coeffs == fit.coeffs);

  CHECK_THROWS(fit_halfpowers(HeatContentSamples{}, 3));
}

TEST_CASE("mean value residual") {
  CHECK(mean_value_residual(hca::symcalc::Geometry::Disk, 1.0,
                            [](double) { return 1.0; }, 0.4) < 1e-8);
  CHECK(mean_value_residual(hca::symcalc::Geometry::Interval, 1.0,
                            [](double) { return 1.0; }, 0.2) < 1e-8);
  // residual is the pure central-difference error pi h^2 for v = s^2
  CHECK(mean_value_residual(hca::symcalc::Geometry::Disk, 1.0,
                            [](double v) { return v * v; }, 0.3) < 1e-5);
}

TEST_CASE("samples csv") {
  HeatContentSamples s;
  s.geom = hca::symcalc::Geometry::Interval;
  s.tq = {{0.25, 0.5}, {1.0, 0.125}};
  std::string csv = samples_csv(s);
  CHECK(csv.rfind("t,Q", 0) == 0);
  CHECK(csv.find("0.25") != std::string::npos);
}
