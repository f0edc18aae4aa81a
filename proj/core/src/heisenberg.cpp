#include "hca/heisenberg.hpp"

#include <cmath>
#include <sstream>

namespace hca::heisenberg {

namespace {
constexpr double kPi = 3.14159265358979323846;
// Below this radius the off-axis solve degenerates (xi = |z|/r^2 overflows);
// switch to the closed-form axis distance.
double axis_threshold(double z) { return 1e-10 * std::max(1.0, std::sqrt(std::fabs(z))); }
}  // namespace

double Point::r() const { return std::hypot(x, y); }
double Point::phi() const { return std::atan2(y, x); }
Point Point::from_cylindrical(double r, double phi, double z) {
  return Point{r * std::cos(phi), r * std::sin(phi), z};
}

Point geodesic_point(double x0, double y0, double t) {
  double r0 = std::hypot(x0, y0);
  if (r0 == 0) throw std::domain_error("geodesic_point: characteristic origin");
  if (t < 0) throw std::domain_error("geodesic_point: t < 0");
  double th = 2 * t / r0;
  double c = std::cos(th), s = std::sin(th);
  return Point{0.5 * (x0 * (1 + c) - y0 * s), 0.5 * (y0 * (1 + c) + x0 * s),
               r0 * r0 / 8 * (th + s)};
}

double exp_jacobian_det(double r0, double t) {
  if (r0 <= 0) throw std::domain_error("exp_jacobian_det: r0 <= 0");
  double th = 2 * t / r0;
  return 0.25 * (r0 * (1 + std::cos(th)) + t * std::sin(th));
}

double k_fun(double xi, double y) {
  return (4 * xi + y + (1 + y * y) * std::atan(y)) / ((1 + y * y) * kPi);
}

double t_fun(double xi, double y) {
  return (4 * xi + y) / std::sqrt(1 + y * y);
}

namespace {

double dk_dy(double xi, double y) {
  double g = 4 * xi + y + (1 + y * y) * std::atan(y);
  double gp = 2 + 2 * y * std::atan(y);
  double d = 1 + y * y;
  return (gp * d - g * 2 * y) / (d * d * kPi);
}

}  // namespace

double y0_solve(double xi, int branch_k) {
  if (!(xi > 0)) throw std::domain_error("y0_solve: xi <= 0");
  if (branch_k != 0 && branch_k != 1)
    throw std::domain_error("y0_solve: branch_k must be 0 or 1");

  double lo, hi;
  if (branch_k == 0) {
    lo = -4 * xi;
    hi = 0;
  } else {
    double ym = 1 / (4 * xi);
    if (k_fun(xi, ym) < 1)
      throw NoBranch("y0_solve: branch 1 absent (max k < 1)");
    // k is decreasing on [ym, inf) with limit 1/2, so a finite cap exists.
    lo = ym;
    hi = std::max(2 * ym, 1.0);
    while (k_fun(xi, hi) >= 1) hi *= 2;
  }

  // Bisection on k - branch_k, then Newton polish.
  double flo = k_fun(xi, lo) - branch_k;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double fm = k_fun(xi, mid) - branch_k;
    if ((fm <= 0) == (flo <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double y = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    double f = k_fun(xi, y) - branch_k;
    double d = dk_dy(xi, y);
    if (d == 0) break;
    double step = f / d;
    double yn = y - step;
    if (!std::isfinite(yn)) break;
    y = yn;
  }
  return y;
}

DistanceResult distance_to_plane(const Point& p) {
  DistanceResult res;
  double r = p.r(), z = p.z;
  if (z == 0) {
    res.value = 0;
    if (r > 0) res.foot = GeodesicFoot{p.x, p.y, 0.0, 0};
    return res;
  }
  if (r < axis_threshold(z)) {
    res.value = std::sqrt(2 * kPi * std::fabs(z));
    res.on_axis = true;
    return res;
  }

  double xi = std::fabs(z) / (r * r);
  double y0 = y0_solve(xi, 0);
  double t0 = t_fun(xi, y0);
  try {
    double y1 = y0_solve(xi, 1);
    double t1 = t_fun(xi, y1);
    if (t1 < t0) t0 = t1;  // never observed; branch 0 dominates
  } catch (const NoBranch&) {
  }
  res.value = r * t0;

  // Reduced foot is (1, y0); undo the normalization (dilation by r, rotation
  // by phi, and the z < 0 reflection (x,y,z) -> (y,x,-z)).
  double fx = 1, fy = y0;
  if (z < 0) std::swap(fx, fy);
  double phi = p.phi();
  double c = std::cos(phi), s = std::sin(phi);
  res.foot = GeodesicFoot{r * (c * fx - s * fy), r * (s * fx + c * fy),
                          res.value, 0};
  return res;
}

double blowup_integral(double r_min, double r_max,
                       const symcalc::BoundaryIntegrand& integrand) {
  if (!(r_min > 0) || r_min > r_max)
    throw std::domain_error("blowup_integral: need 0 < r_min <= r_max");
  auto [m, coeff] = integrand.monomial();
  double c = std::fabs(coeff.value());
  if (c == 0 || r_min == r_max) return 0;
  // integral of c r^(-m) r^2 dr dphi over the annulus
  double q = 3 - m;
  double radial = (m == 3) ? std::log(r_max / r_min)
                           : (std::pow(r_max, q) - std::pow(r_min, q)) / q;
  return 2 * kPi * c * radial;
}

std::string distance_grid_csv(const GridSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,z,delta,on_axis,foot_x0,foot_y0,time\n";
  auto coord = [](double a, double b, int n, int i) {
    return n <= 1 ? a : a + (b - a) * i / (n - 1);
  };
  for (int iz = 0; iz < spec.n_z; ++iz)
    for (int ip = 0; ip < spec.n_phi; ++ip)
      for (int ir = 0; ir < spec.n_r; ++ir) {
        double r = coord(spec.r_min, spec.r_max, spec.n_r, ir);
        double phi = coord(spec.phi_min, spec.phi_max, spec.n_phi, ip);
        double z = coord(spec.z_min, spec.z_max, spec.n_z, iz);
        Point p = Point::from_cylindrical(r, phi, z);
        DistanceResult d = distance_to_plane(p);
        os << p.x << "," << p.y << "," << p.z << "," << d.value << ","
           << (d.on_axis ? 1 : 0) << ",";
        if (d.foot)
          os << d.foot->x0 << "," << d.foot->y0 << "," << d.foot->time;
        else
          os << ",,";
        os << "\n";
      }
  return os.str();
}

}  // namespace hca::heisenberg
