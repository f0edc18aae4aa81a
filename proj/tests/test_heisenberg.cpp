// Double-precision geodesics and the distance-to-plane solver.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hca/heisenberg.hpp"
#include "hca/symcalc.hpp"

using namespace hca::heisenberg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("geodesic endpoints") {
  Point p = geodesic_point(1.5, 0.0, 0.0);
  CHECK(p.x == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.z == 0.0);

  // at t = r0 pi / 2 the geodesic reaches the z axis
  double r0 = 2.0, t = r0 * kPi / 2;
  Point q = geodesic_point(r0, 0.0, t);
  CHECK(q.r() < 1e-12);
  CHECK(q.z == doctest::Approx(r0 * r0 * kPi / 8).epsilon(1e-14));
  // and the Jacobian of the normal exponential map degenerates there
  CHECK(std::fabs(exp_jacobian_det(r0, t)) < 1e-13);
  CHECK(exp_jacobian_det(r0, 0.5 * t) > 0);

  CHECK_THROWS_AS(geodesic_point(0, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(geodesic_point(1, 0, -1.0), std::domain_error);
}

TEST_CASE("k and t parametrizations") {
  CHECK(k_fun(0.5, 0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(t_fun(0.5, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  // small xi: y0 = -2 xi + (8/3) xi^3 + O(xi^5)
  double xi = 1e-3;
  double y0 = y0_solve(xi, 0);
  CHECK(y0 == doctest::Approx(-2 * xi + 8.0 / 3 * xi * xi * xi).epsilon(1e-10));
  CHECK(std::fabs(k_fun(xi, y0)) < 1e-14);
  // branch 1 is absent for small xi
  CHECK_THROWS_AS(y0_solve(1e-3, 1), NoBranch);
}

TEST_CASE("distance to the plane") {
  CHECK(distance_to_plane(Point{1.0, -0.5, 0.0}).value == 0.0);
  CHECK(distance_to_plane(Point{0, 0, 2.0}).value == std::sqrt(4 * kPi));
  CHECK(distance_to_plane(Point{0, 0, -2.0}).value == std::sqrt(4 * kPi));

  // endpoint identity along a geodesic from the plane
  Point p = geodesic_point(1.0, 0.7, 0.9);
  auto d = distance_to_plane(p);
  CHECK(d.value == doctest::Approx(0.9).epsilon(1e-12));
  REQUIRE(d.foot);
  CHECK(d.foot->x0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.foot->y0 == doctest::Approx(0.7).epsilon(1e-9));

  // parabolic dilation homogeneity and rotation/reflection invariance
  Point q{0.8, -0.3, 0.6};
  double base = distance_to_plane(q).value;
  CHECK(distance_to_plane(Point{2 * q.x, 2 * q.y, 4 * q.z}).value ==
        doctest::Approx(2 * base).epsilon(1e-14));
  double phi = 1.1, c = std::cos(phi), s = std::sin(phi);
  CHECK(distance_to_plane(Point{c * q.x - s * q.y, s * q.x + c * q.y, q.z}).value ==
        doctest::Approx(base).epsilon(1e-14));
  CHECK(distance_to_plane(Point{q.y, q.x, -q.z}).value ==
        doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("blowup integrals") {
  hca::symcalc::BoundaryIntegrand bi;
  bi.geom = hca::symcalc::Geometry::HeisenbergPlane;
  bi.terms[4] = hca::opalg::SqrtPiCoeff(1, 0);  // r^(-4)
  CHECK(blowup_integral(0.5, 2.0, bi) ==
        doctest::Approx(2 * kPi * (1 / 0.5 - 1 / 2.0)).epsilon(1e-14));
  CHECK(blowup_integral(1.0, 1.0, bi) == 0.0);

  hca::symcalc::BoundaryIntegrand log_case;
  log_case.geom = hca::symcalc::Geometry::HeisenbergPlane;
  log_case.terms[3] = hca::opalg::SqrtPiCoeff(1, 0);
  CHECK(blowup_integral(0.25, 1.0, log_case) ==
        doctest::Approx(2 * kPi * std::log(4.0)).epsilon(1e-14));

  CHECK_THROWS_AS(blowup_integral(0.0, 1.0, bi), std::domain_error);
}

TEST_CASE("distance grid") {
  GridSpec spec;
  spec.r_min = 0.5;
  spec.r_max = 1.5;
  spec.n_r = 3;
  spec.phi_min = 0;
  spec.phi_max = kPi;
  spec.n_phi = 2;
  spec.z_min = -1;
  spec.z_max = 1;
  spec.n_z = 4;
  std::string csv = distance_grid_csv(spec);
  int rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 1 + 3 * 2 * 4);  // header + grid product
  CHECK(distance_grid_csv(spec) == csv);  // deterministic
}
