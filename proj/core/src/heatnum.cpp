#include "hca/heatnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace hca::heatnum {

namespace {
constexpr double kPi = 3.14159265358979323846;

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15 * tol)
    return left + right + delta / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double neumann_kernel(double t, double r, double s) {
  if (!(t > 0)) throw std::domain_error("neumann_kernel: t <= 0");
  double c = 1.0 / std::sqrt(4 * kPi * t);
  double dm = r - s, dp = r + s;
  return c * (std::exp(-dm * dm / (4 * t)) + std::exp(-dp * dp / (4 * t)));
}

namespace {

// int_0^S e(t, r, s) f(s) ds in the Gaussian variable u = (s -+ r)/(2 sqrt t),
// so the kernel never degenerates into a spike the sampler can miss.
double kernel_integral(double t, double r, double S,
                       const std::function<double(double)>& f, double tol) {
  double w = 2 * std::sqrt(t);
  double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  double acc = 0;
  {  // direct image: s = r + w u
    double lo = std::max(-8.0, -r / w), hi = std::min(8.0, (S - r) / w);
    if (lo < hi)
      acc += inv_sqrt_pi * adaptive_simpson(
                               [&](double u) {
                                 return std::exp(-u * u) * f(r + w * u);
                               },
                               lo, hi, tol);
  }
  {  // reflected image: s = -r + w u
    double lo = std::max(r / w, -8.0), hi = std::min(8.0, (S + r) / w);
    if (lo < hi)
      acc += inv_sqrt_pi * adaptive_simpson(
                               [&](double u) {
                                 return std::exp(-u * u) * f(-r + w * u);
                               },
                               lo, hi, tol);
  }
  return acc;
}

}  // namespace

double duhamel_eval(const HalfLineProblem& p, double t, double r) {
  if (!(t > 0)) throw std::domain_error("duhamel_eval: t <= 0");
  double S = p.support;
  double out = 0;

  if (p.v0) out += kernel_integral(t, r, S, p.v0, p.tol);

  // Source and flux terms via tau = t sin^2(theta): the Jacobian
  // 2 t sin(theta) cos(theta) absorbs inverse-sqrt endpoint singularities.
  auto tau_of = [&](double th) { double s = std::sin(th); return t * s * s; };
  auto jac = [&](double th) { return 2 * t * std::sin(th) * std::cos(th); };

  if (p.f) {
    out += adaptive_simpson(
        [&](double th) {
          double tau = tau_of(th);
          double eps = t - tau;
          double inner;
          if (eps < 1e-14 * t) {
            inner = p.f(tau, r);  // kernel collapses to a delta
          } else {
            inner = kernel_integral(eps, r, S,
                                    [&](double s) { return p.f(tau, s); }, p.tol);
          }
          return inner * jac(th);
        },
        0, kPi / 2, p.tol);
  }

  if (p.v1) {
    // lower limit shifted off the v1 singularity at tau = 0
    out -= adaptive_simpson(
        [&](double th) {
          double tau = tau_of(th);
          double eps = t - tau;
          if (eps <= 0) return 0.0;
          return neumann_kernel(eps, r, 0) * p.v1(tau) * jac(th);
        },
        1e-9, kPi / 2, p.tol);
  }
  return out;
}

IteratedDuhamelResult iterated_duhamel_eval(const IteratedDuhamelData& d, int m,
                                            double t) {
  if (!(t > 0)) throw std::domain_error("iterated_duhamel_eval: t <= 0");
  IteratedDuhamelResult res;
  res.initial_terms.assign(m + 1, 0.0);
  res.boundary_terms.assign(m + 1, 0.0);

  double sqrt_pi = std::sqrt(kPi);
  double kfact = 1;
  double tpow = 1;
  auto tau_of = [&](double th) { double s = std::sin(th); return t * s * s; };
  auto jac = [&](double th) { return 2 * t * std::sin(th) * std::cos(th); };

  for (int k = 0; k <= m; ++k) {
    if (k > 0) {
      kfact *= k;
      tpow *= t;
    }
    double init = 0;
    if (d.lk_initial)
      init += kernel_integral(t, 0.0, d.support,
                              [&](double r) { return d.lk_initial(k, r); }, d.tol);
    if (d.lk_initial_mass) init += d.lk_initial_mass(k) * neumann_kernel(t, 0, 0);
    res.initial_terms[k] = tpow / kfact * init;

    if (d.lk_boundary) {
      double b = adaptive_simpson(
          [&](double th) {
            double tau = tau_of(th);
            double eps = t - tau;
            if (eps <= 0) return 0.0;
            return d.lk_boundary(k, tau) * std::pow(eps, k - 0.5) * jac(th);
          },
          1e-9, kPi / 2, d.tol);
      res.boundary_terms[k] = -b / (sqrt_pi * kfact);
    }
  }

  double mfact = 1;
  for (int i = 2; i <= m; ++i) mfact *= i;
  if (d.l_next) {
    res.remainder =
        adaptive_simpson(
            [&](double th) {
              double tau = tau_of(th);
              double eps = t - tau;
              double inner;
              if (eps < 1e-14 * t) {
                inner = d.l_next(tau, 0.0);
              } else {
                // l_next decays at the diffusive scale sqrt(tau); the product
                // with the kernel concentrates at the harmonic width, so
                // integrate in that variable (a spike an eps-scaled sampler
                // would miss when tau << eps).
                double w = 2 * std::sqrt(eps * tau / (eps + tau));
                double hi = std::min(d.support / w, 12.0);
                inner = w * adaptive_simpson(
                                [&](double u) {
                                  double r = w * u;
                                  return neumann_kernel(eps, r, 0) *
                                         d.l_next(tau, r);
                                },
                                0, hi, d.tol);
              }
              return std::pow(eps, m) * inner * jac(th);
            },
            1e-4, kPi / 2, d.tol) /
        mfact;
  }

  res.total = res.remainder;
  for (int k = 0; k <= m; ++k)
    res.total += res.initial_terms[k] + res.boundary_terms[k];
  return res;
}

double interval_heat_content(double L, double t) {
  if (!(L > 0) || !(t > 0))
    throw std::domain_error("interval_heat_content: need L, t > 0");
  double acc = 0;
  for (int n = 1; n < 2000001; n += 2) {
    double lam = n * kPi / L;
    double term = 8 * L / (n * n * kPi * kPi) * std::exp(-lam * lam * t);
    acc += term;
    if (term < 1e-18 * std::max(acc, 1e-300)) break;
  }
  return acc;
}

namespace {

// One Crank-Nicolson (theta) step of the radial solver; u has n_r interior
// values, u[n_r] = 0 is implicit. Thomas solve of the tridiagonal system.
struct RadialOperator {
  std::vector<double> lo, di, up;  // L u at node i

  explicit RadialOperator(int n_r, double h) : lo(n_r), di(n_r), up(n_r) {
    di[0] = -4 / (h * h);  // r = 0: Laplacian by symmetry, 4(u1 - u0)/h^2
    up[0] = 4 / (h * h);
    for (int i = 1; i < n_r; ++i) {
      double ri = i * h;
      lo[i] = 1 / (h * h) - 1 / (2 * h * ri);
      di[i] = -2 / (h * h);
      up[i] = 1 / (h * h) + 1 / (2 * h * ri);
    }
  }

  void step(std::vector<double>& u, double dt, double theta) const {
    int n = static_cast<int>(u.size());
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
      double Lu = di[i] * u[i];
      if (i > 0) Lu += lo[i] * u[i - 1];
      if (i + 1 < n) Lu += up[i] * u[i + 1];
      rhs[i] = u[i] + (1 - theta) * dt * Lu;
    }
    std::vector<double> cp(n), dp(n);
    double b0 = 1 - theta * dt * di[0];
    cp[0] = -theta * dt * up[0] / b0;
    dp[0] = rhs[0] / b0;
    for (int i = 1; i < n; ++i) {
      double a = -theta * dt * lo[i];
      double b = 1 - theta * dt * di[i];
      double c = -theta * dt * up[i];
      double m = b - a * cp[i - 1];
      cp[i] = c / m;
      dp[i] = (rhs[i] - a * dp[i - 1]) / m;
    }
    u[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = dp[i] - cp[i] * u[i + 1];
  }
};

std::vector<double> disk_solve(double R, double t, const DiskGrid& grid) {
  if (!(R > 0) || !(t > 0)) throw std::domain_error("disk solver: need R, t > 0");
  int n_r = grid.n_r, n_t = grid.n_t;
  double h = R / n_r;
  RadialOperator op(n_r, h);
  std::vector<double> u(n_r, 1.0);
  double dt = t / n_t;
  int rann = std::min(4, n_t);
  for (int s = 0; s < rann; ++s) {  // Rannacher start: damped half-steps
    op.step(u, dt / 2, 1.0);
    op.step(u, dt / 2, 1.0);
  }
  for (int s = rann; s < n_t; ++s) op.step(u, dt, 0.5);
  return u;
}

double disk_Q(const std::vector<double>& u, double R) {
  int n_r = static_cast<int>(u.size());
  double h = R / n_r;
  double acc = 0;
  for (int i = 0; i < n_r; ++i) {
    double ri = i * h, rj = (i + 1) * h;
    double ui = u[i], uj = (i + 1 < n_r) ? u[i + 1] : 0.0;
    acc += 0.5 * (ui * ri + uj * rj) * h;
  }
  return 2 * kPi * acc;
}

}  // namespace

HeatContentSamples disk_heat_content(double R, const std::vector<double>& t_list,
                                     const DiskGrid& grid) {
  HeatContentSamples out;
  out.geom = symcalc::Geometry::Disk;
  for (double t : t_list) out.tq.emplace_back(t, disk_Q(disk_solve(R, t, grid), R));
  std::sort(out.tq.begin(), out.tq.end());
  return out;
}

std::vector<double> disk_profile(double R, double t, const DiskGrid& grid) {
  std::vector<double> u = disk_solve(R, t, grid);
  u.push_back(0.0);  // boundary node
  return u;
}

namespace {

// Least squares in the scaled basis (t/t_max)^(k/2) via Householder QR.
AsymptoticFit ls_fit(const std::vector<std::pair<double, double>>& tq, int m) {
  int n = static_cast<int>(tq.size()), p = m + 1;
  double tmax = tq.back().first;
  std::vector<std::vector<double>> A(n, std::vector<double>(p));
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) {
    double x = std::sqrt(tq[i].first / tmax);
    double pw = 1;
    for (int k = 0; k < p; ++k) {
      A[i][k] = pw;
      pw *= x;
    }
    b[i] = tq[i].second;
  }
  // Householder QR, overwriting A with R and applying reflections to b.
  for (int k = 0; k < p; ++k) {
    double norm = 0;
    for (int i = k; i < n; ++i) norm += A[i][k] * A[i][k];
    norm = std::sqrt(norm);
    if (norm == 0) continue;
    double alpha = A[k][k] > 0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    for (int i = k; i < n; ++i) v[i] = A[i][k];
    v[k] -= alpha;
    double vnorm2 = 0;
    for (int i = k; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0) continue;
    for (int j = k; j < p; ++j) {
      double dot = 0;
      for (int i = k; i < n; ++i) dot += v[i] * A[i][j];
      double f = 2 * dot / vnorm2;
      for (int i = k; i < n; ++i) A[i][j] -= f * v[i];
    }
    double dot = 0;
    for (int i = k; i < n; ++i) dot += v[i] * b[i];
    double f = 2 * dot / vnorm2;
    for (int i = k; i < n; ++i) b[i] -= f * v[i];
  }
  std::vector<double> x(p, 0.0);
  for (int k = p - 1; k >= 0; --k) {
    double s = b[k];
    for (int j = k + 1; j < p; ++j) s -= A[k][j] * x[j];
    x[k] = (A[k][k] != 0) ? s / A[k][k] : 0.0;
  }
  AsymptoticFit fit;
  fit.coeffs.resize(p);
  double scale = 1;
  for (int k = 0; k < p; ++k) {
    fit.coeffs[k] = x[k] / scale;
    scale *= std::sqrt(tmax);
  }
  double rmax = 0, rmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < p; ++k) {
    double d = std::fabs(A[k][k]);
    rmax = std::max(rmax, d);
    rmin = std::min(rmin, d);
  }
  fit.condition = (rmin > 0) ? rmax / rmin : std::numeric_limits<double>::infinity();
  double rn = 0;
  for (int i = p; i < n; ++i) rn += b[i] * b[i];
  fit.residual_norm = std::sqrt(rn);
  fit.used_fallback = true;
  return fit;
}

double fit_residual(const std::vector<std::pair<double, double>>& tq,
                    const std::vector<double>& a) {
  double rn = 0;
  for (const auto& [t, Q] : tq) {
    double pred = 0, pw = 1, x = std::sqrt(t);
    for (double ak : a) {
      pred += ak * pw;
      pw *= x;
    }
    rn += (Q - pred) * (Q - pred);
  }
  return std::sqrt(rn);
}

// Richardson peel-off on a geometric grid (ratio rho in t): each stage
// eliminates the first few half powers and reads the constant at the
// smallest t, then subtracts and divides by sqrt(t).
std::optional<std::vector<double>> peel_fit(
    const std::vector<std::pair<double, double>>& tq, int m) {
  int n = static_cast<int>(tq.size());
  if (n < m + 4) return std::nullopt;
  double rho = tq[1].first / tq[0].first;
  for (int i = 0; i + 1 < n; ++i) {
    double r = tq[i + 1].first / tq[i].first;
    if (std::fabs(r - rho) > 1e-8 * rho) return std::nullopt;
  }
  if (rho <= 1.1) return std::nullopt;
  double f = std::sqrt(rho);
  std::vector<double> cur(n), t(n);
  for (int i = 0; i < n; ++i) {
    cur[i] = tq[i].second;
    t[i] = tq[i].first;
  }
  std::vector<double> coeffs;
  for (int k = 0; k <= m; ++k) {
    std::vector<double> V = cur;
    int sweeps = std::min(3, static_cast<int>(V.size()) - 1);
    for (int j = 1; j <= sweeps; ++j) {
      double fj = std::pow(f, j);
      for (size_t i = 0; i + 1 < V.size(); ++i)
        V[i] = (fj * V[i] - V[i + 1]) / (fj - 1);
      V.pop_back();
    }
    if (V.empty()) return std::nullopt;
    double ak = V.front();
    coeffs.push_back(ak);
    for (int i = 0; i < n; ++i) cur[i] = (cur[i] - ak) / std::sqrt(t[i]);
  }
  return coeffs;
}

}  // namespace

AsymptoticFit fit_halfpowers(const HeatContentSamples& samples, int m) {
  if (static_cast<int>(samples.tq.size()) < 2 * (m + 1))
    throw std::domain_error("fit_halfpowers: need at least 2(m+1) samples");
  auto tq = samples.tq;
  std::sort(tq.begin(), tq.end());
  AsymptoticFit ls = ls_fit(tq, m);
  ls.residual_norm = fit_residual(tq, ls.coeffs);
  auto peel = peel_fit(tq, m);
  if (peel) {
    double pr = fit_residual(tq, *peel);
    if (pr <= ls.residual_norm) {
      AsymptoticFit fit;
      fit.coeffs = *peel;
      fit.residual_norm = pr;
      fit.condition = ls.condition;
      fit.used_fallback = false;
      return fit;
    }
  }
  return ls;
}

double mean_value_residual(symcalc::Geometry geom, double size,
                           const std::function<double(double)>& v, double r,
                           double h, double tol) {
  if (h <= 0) throw std::domain_error("mean_value_residual: h <= 0");
  auto dv = [&](double s) { return (v(s + h) - v(s - h)) / (2 * h); };
  auto ddv = [&](double s) { return (v(s + h) - 2 * v(s) + v(s - h)) / (h * h); };

  std::function<double(double)> F, rhs;
  if (geom == symcalc::Geometry::Disk) {
    double R = size;
    F = [&, R](double rr) {
      return 2 * kPi *
             adaptive_simpson([&](double s) { return v(s) * s; }, 0, R - rr, tol);
    };
    rhs = [&, R](double rr) {
      double lap = 2 * kPi * adaptive_simpson(
                                 [&](double s) { return ddv(s) * s + dv(s); }, 0,
                                 R - rr, tol);
      double bd = -2 * kPi * v(R - rr);  // v * (Delta delta) * length at R - r
      return lap - bd;
    };
  } else if (geom == symcalc::Geometry::Interval) {
    double L = size;
    F = [&, L](double rr) {
      return 2 * adaptive_simpson(v, 0, L / 2 - rr, tol);
    };
    rhs = [&, L](double rr) {
      return 2 * adaptive_simpson(ddv, 0, L / 2 - rr, tol);  // Delta delta = 0
    };
  } else {
    throw std::domain_error("mean_value_residual: Interval or Disk only");
  }
  double f2 = (F(r + h) - 2 * F(r) + F(r - h)) / (h * h);
  return std::fabs(f2 - rhs(r));
}

std::string samples_csv(const HeatContentSamples& s) {
  std::ostringstream os;
  os.precision(17);
  os << "t,Q\n";
  for (const auto& [t, Q] : s.tq) os << t << "," << Q << "\n";
  return os.str();
}

}  // namespace hca::heatnum
