// Numerical geometry of the first Heisenberg group: geodesics leaving the
// plane Sigma = {z = 0} orthogonally, the exponential map on the annihilator
// bundle, its focal locus, and the global distance-to-plane solver.
//
// Everything here is double precision; the geometry is transcendental.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hca/symcalc.hpp"

namespace hca::heisenberg {

struct Point {
  double x = 0, y = 0, z = 0;

  double r() const;
  double phi() const;
  static Point from_cylindrical(double r, double phi, double z);
};

struct GeodesicFoot {
  double x0 = 0, y0 = 0;
  double time = 0;
  int branch_k = 0;
};

struct DistanceResult {
  double value = 0;
  std::optional<GeodesicFoot> foot;
  bool on_axis = false;
};

struct NoBranch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geodesic from (x0, y0, 0) in Sigma_0 with initial covector 2/r0 dz.
Point geodesic_point(double x0, double y0, double t);

// det dE in polar coordinates; zeros at the focal times r0 (pi/2 + k pi).
double exp_jacobian_det(double r0, double t);

// Endpoint-system functions for the reduced point (1, 0, xi), xi > 0.
double k_fun(double xi, double y);
double t_fun(double xi, double y);

// Root of k_fun(xi, .) = branch_k; branch 0 on (-4 xi, 0), branch 1 on
// [1/(4 xi), inf). Throws NoBranch when branch 1 does not exist.
double y0_solve(double xi, int branch_k);

DistanceResult distance_to_plane(const Point& p);

// Integral over {r_min < r < r_max} of |c| r^(-m) against d sigma = r^2 dr dphi
// for a monomial boundary integrand; closed form.
double blowup_integral(double r_min, double r_max,
                       const symcalc::BoundaryIntegrand& integrand);

struct GridSpec {
  double r_min = 0.1, r_max = 2.0;
  int n_r = 8;
  double phi_min = 0.0, phi_max = 6.283185307179586;
  int n_phi = 1;
  double z_min = 0.0, z_max = 1.0;
  int n_z = 8;
};

// CSV rows "x,y,z,delta,on_axis,foot_x0,foot_y0,time", deterministic order.
std::string distance_grid_csv(const GridSpec& spec);

}  // namespace hca::heisenberg
