// Evaluation contexts turning abstract words over {N, Delta} into concrete
// functions for three geometries: interval, Euclidean disk, and the xy-plane
// in the first Heisenberg group. All arithmetic is exact.
//
// Heisenberg conventions (z > 0 side, cylindrical (r, z), axisymmetric):
// with the generating frame X1 = dx - (y/2) dz, X2 = dy + (x/2) dz one finds,
// for u = u(r, z),
//
//   Delta u = u_rr + u_r / r + (r^2/4) u_zz,
//   g(grad u, grad v) = u_r v_r + (r^2/4) u_z v_z,
//
// (each X_i contributes first-order parts; cross terms cancel by symmetry).
// The distance to the plane is delta = r F(|z|/r^2), parabolically
// homogeneous of weight 1 where z has weight 2 and r weight 1.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hca/opalg.hpp"

namespace hca::symcalc {

using opalg::Rational;
using opalg::ReducedPoly;
using opalg::SqrtPiCoeff;

// Thrown when a series restriction would need coefficients beyond the stored
// truncation order; callers retry with a larger K.
struct TruncationInsufficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sum over k >= 0 of c_k z^k r^(w-2k); coefficients beyond trunc are
// unreliable (dropped); trunc < 0 means no reliable orders remain.
struct HomogeneousSeries {
  int weight = 0;
  std::map<int, Rational> c;
  int trunc = 0;
  bool loss = false;  // set when truncation discarded potentially nonzero data

  Rational coeff(int k) const {
    auto it = c.find(k);
    return it == c.end() ? Rational(0) : it->second;
  }
};

HomogeneousSeries hs_add(const HomogeneousSeries& a, const HomogeneousSeries& b);
HomogeneousSeries hs_scale(const Rational& s, const HomogeneousSeries& a);
HomogeneousSeries hs_mul(const HomogeneousSeries& a, const HomogeneousSeries& b);
HomogeneousSeries hseries_laplacian(const HomogeneousSeries& u);
HomogeneousSeries hseries_grad_pair(const HomogeneousSeries& u,
                                    const HomogeneousSeries& v);

// Taylor coefficients (orders 0..n-1) of the implicit branch y0(xi) with
// y0(0) = 0 solving 4 xi + y + (1+y^2) arctan(y) = 0, and of
// F(xi) = (4 xi + y0) / sqrt(1 + y0^2).
std::vector<Rational> y0_taylor(int n);
std::vector<Rational> f_taylor(int n);

// delta = sum_k F_k z^k r^(1-2k), weight 1, truncated at K.
HomogeneousSeries delta_series(int K);

// Laurent polynomial in r; the disk function representation.
struct LaurentRadial {
  std::map<int, Rational> c;  // exponent -> coefficient
};

enum class Geometry { Interval, Disk, HeisenbergPlane };

struct EvalContext {
  Geometry geom;
  Rational L = 1;        // Interval length
  Rational R = 1;        // Disk radius
  int K = 12;            // HeisenbergPlane truncation

  static EvalContext interval(Rational L);
  static EvalContext disk(Rational R);
  static EvalContext heisenberg(int K = 12);
};

// Boundary restriction of an operator image: exact monomials in r.
struct BoundaryIntegrand {
  Geometry geom;
  // Interval: single value (identical at both endpoints by symmetry).
  // Disk: value at r = R. HeisenbergPlane: sum of terms c * r^(-m) on
  // Sigma_0, keyed by m.
  std::map<int, SqrtPiCoeff> terms;

  bool is_zero() const;
  // Requires a monomial (at most one nonzero term); returns (m, coeff) for
  // c * r^(-m). Zero integrands report m = 0, c = 0.
  std::pair<int, SqrtPiCoeff> monomial() const;
  std::string str() const;
};

// Applies each H-prefix word of rp in the context, restricts to the boundary.
BoundaryIntegrand eval_reduced(const EvalContext& ctx, const ReducedPoly& rp);

// Heisenberg boundary integrand of D_k(1) with automatic retry at doubled
// truncation when K is insufficient.
BoundaryIntegrand heisenberg_integrand(int k, int K = 12);

// Global coefficient a_k for compact-boundary geometries (Interval, Disk);
// a_0 is the volume, a_1 = -(2/sqrt(pi)) sigma(boundary), higher orders are
// -integral of D_k(1). Rejects HeisenbergPlane (non-compact Sigma).
SqrtPiCoeff coefficient(const EvalContext& ctx, int k);

// N and Delta actions exposed for tests.
LaurentRadial disk_lap(const LaurentRadial& f);
LaurentRadial disk_n(const LaurentRadial& f);
HomogeneousSeries heis_n(const HomogeneousSeries& f, const HomogeneousSeries& delta,
                         const HomogeneousSeries& delta_lap);

}  // namespace hca::symcalc
