// Numerical verification layer: Neumann half-line kernel and Duhamel
// formulas, heat-content oracles (exact interval eigen-series, radial
// Crank-Nicolson disk solver), half-power asymptotic fitting, and the
// mean-value-lemma residual check.

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hca/symcalc.hpp"

namespace hca::heatnum {

// Adaptive Simpson on [a, b]; absolute tolerance, subdivision depth cap.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 30);

// Neumann heat kernel on the half-line, built by reflection.
double neumann_kernel(double t, double r, double s);

// Lv = f on r > 0, v(0,r) = v0(r), dv/dr(t,0) = v1(t), L = d/dt - d^2/dr^2.
struct HalfLineProblem {
  std::function<double(double, double)> f;   // (t, r)
  std::function<double(double)> v0;          // (r)
  std::function<double(double)> v1;          // (t)
  double support = 10.0;                     // f(t,.), v0 vanish beyond this
  double tol = 1e-8;
};

double duhamel_eval(const HalfLineProblem& p, double t, double r);

// Caller-supplied closed forms of the iterated data. L^k F(0, .) may contain
// a point mass at r = 0 (distributional limit); lk_initial is its regular
// part and lk_initial_mass the mass.
struct IteratedDuhamelData {
  std::function<double(int, double)> lk_initial;          // (k, r)
  std::function<double(int)> lk_initial_mass;             // (k)
  std::function<double(int, double)> lk_boundary;         // (k, tau): d_r L^k F(tau, 0)
  // (tau, r): L^(m+1) F. Assumed to decay at the diffusive scale sqrt(tau),
  // which holds for the heat-kernel iterates this represents.
  std::function<double(double, double)> l_next;
  double support = 10.0;
  double tol = 1e-9;
};

struct IteratedDuhamelResult {
  std::vector<double> initial_terms;   // k = 0..m
  std::vector<double> boundary_terms;  // k = 0..m (sign included)
  double remainder = 0;
  double total = 0;  // sum of all terms + remainder
};

IteratedDuhamelResult iterated_duhamel_eval(const IteratedDuhamelData& d, int m,
                                            double t);

// Exact Dirichlet eigen-series for the interval (0, L), unit initial datum.
double interval_heat_content(double L, double t);

struct HeatContentSamples {
  symcalc::Geometry geom;
  std::vector<std::pair<double, double>> tq;  // (t, Q), t ascending
};

struct DiskGrid {
  int n_r = 4000;
  int n_t = 400;  // time steps per sample
};

// Radial Crank-Nicolson (Rannacher-started) for u_t = u_rr + u_r/r on (0, R),
// u(R) = 0, u_r(0) = 0, u0 = 1; Q = 2 pi int u r dr (trapezoid).
HeatContentSamples disk_heat_content(double R, const std::vector<double>& t_list,
                                     const DiskGrid& grid = {});

// Full radial profile at time t on the same grid (n_r + 1 nodes incl. r = R).
std::vector<double> disk_profile(double R, double t, const DiskGrid& grid = {});

struct AsymptoticFit {
  std::vector<double> coeffs;  // a_0 .. a_m multiplying t^(k/2)
  double residual_norm = 0;
  double condition = 0;
  bool used_fallback = false;  // least squares instead of peel-off
};

// Sequential Richardson peel-off on a geometric grid, falling back to least
// squares in the scaled basis (t/t_max)^(k/2); deterministic, permutation
// invariant (samples are sorted internally).
AsymptoticFit fit_halfpowers(const HeatContentSamples& samples, int m);

// |F''(r) - (int_{Omega(r)} Delta v - int_{boundary} v Delta delta dsigma)|
// with F(r) = int_{Omega(r)} v; v is a radial function of the distance from
// the center; central differences with step h, adaptive quadrature.
double mean_value_residual(symcalc::Geometry geom, double size,
                           const std::function<double(double)>& v, double r,
                           double h = 1e-3, double tol = 1e-10);

std::string samples_csv(const HeatContentSamples& s);

}  // namespace hca::heatnum
