// hca: command-line front end for the heat-content asymptotics library.
//
// Every subcommand echoes its full effective configuration, emits a
// versioned JSON document ("schema": "1"), and is byte-deterministic once
// --no-timestamp is passed. Output files are never overwritten without
// --force. Failures exit nonzero with a machine-readable error document.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hca/heatnum.hpp"
#include "hca/heisenberg.hpp"
#include "hca/opalg.hpp"
#include "hca/selfcheck.hpp"
#include "hca/symcalc.hpp"

using json = nlohmann::json;
using namespace hca;

namespace {

struct Common {
  std::string geometry = "interval";
  int k = 1;
  int trunc = 12;
  double tol = 1e-8;
  double length = 1.0;
  double radius = 1.0;
  std::string out;
  std::string format = "json";
  bool force = false;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, Common& c, bool wants_geometry, bool wants_k) {
  if (wants_geometry)
    cmd->add_option("--geometry", c.geometry, "interval | disk | heisenberg-plane")
        ->check(CLI::IsMember({"interval", "disk", "heisenberg-plane"}));
  if (wants_k) cmd->add_option("--k", c.k, "coefficient index k");
  cmd->add_option("--trunc", c.trunc, "series truncation order K");
  cmd->add_option("--tol", c.tol, "numeric tolerance");
  cmd->add_option("--length", c.length, "interval length L");
  cmd->add_option("--radius", c.radius, "disk radius R");
  cmd->add_option("--out", c.out, "output path (default stdout)");
  cmd->add_option("--format", c.format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_flag("--force", c.force, "allow overwriting --out");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp field");
}

json config_json(const std::string& cmd, const Common& c) {
  json cfg;
  cfg["subcommand"] = cmd;
  cfg["geometry"] = c.geometry;
  cfg["k"] = c.k;
  cfg["trunc"] = c.trunc;
  cfg["tol"] = c.tol;
  cfg["length"] = c.length;
  cfg["radius"] = c.radius;
  cfg["format"] = c.format;
  return cfg;
}

json document(const std::string& cmd, const Common& c) {
  json doc;
  doc["schema"] = "1";
  doc["command"] = cmd;
  doc["config"] = config_json(cmd, c);
  if (!c.no_timestamp) {
    std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc["timestamp"] = buf;
  }
  return doc;
}

void emit(const std::string& payload, const Common& c) {
  if (c.out.empty()) {
    std::cout << payload;
    if (payload.empty() || payload.back() != '\n') std::cout << "\n";
    return;
  }
  if (std::filesystem::exists(c.out) && !c.force)
    throw std::runtime_error("output file exists (use --force): " + c.out);
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + c.out);
  os << payload;
  if (payload.empty() || payload.back() != '\n') os << "\n";
}

void emit_doc(const json& doc, const Common& c) { emit(doc.dump(2), c); }

json coeff_json(const opalg::SqrtPiCoeff& v) {
  json j;
  j["q"] = opalg::rational_str(v.q);
  j["pi_half_power"] = v.p;
  j["float"] = v.value();
  return j;
}

json rational_json(const opalg::Rational& q) {
  json j;
  j["q"] = opalg::rational_str(q);
  j["float"] = opalg::to_double(q);
  return j;
}

json poly_json(const opalg::OperatorPoly& p) {
  json j;
  j["text"] = p.str();
  j["terms"] = json::array();
  for (const auto& [w, coeff] : p.terms) {
    json t;
    t["word"] = w.str();
    t["coeff"] = coeff_json(coeff);
    j["terms"].push_back(t);
  }
  return j;
}

json reduced_json(const opalg::ReducedPoly& rp) {
  json j;
  j["constant"] = coeff_json(rp.constant_part);
  j["h_terms"] = json::array();
  for (const auto& [w, coeff] : rp.h_terms) {
    json t;
    t["word"] = w.str();
    t["coeff"] = coeff_json(coeff);
    j["h_terms"].push_back(t);
  }
  return j;
}

json integrand_json(const symcalc::BoundaryIntegrand& bi) {
  json j;
  j["text"] = bi.str();
  j["terms"] = json::array();
  for (const auto& [m, coeff] : bi.terms) {
    json t;
    t["r_power"] = -m;
    t["coeff"] = coeff_json(coeff);
    j["terms"].push_back(t);
  }
  return j;
}

symcalc::EvalContext make_context(const Common& c) {
  // Geometry sizes enter exactly; accept only short decimal inputs.
  auto to_rational = [](double x) {
    opalg::Rational r(static_cast<long long>(std::llround(x * 1e6)), 1000000);
    return r;
  };
  if (c.geometry == "interval") return symcalc::EvalContext::interval(to_rational(c.length));
  if (c.geometry == "disk") return symcalc::EvalContext::disk(to_rational(c.radius));
  return symcalc::EvalContext::heisenberg(c.trunc);
}

int cmd_dk(const Common& c) {
  if (c.k < 1) throw std::invalid_argument("dk: need --k >= 1");
  if (c.format == "csv") throw std::invalid_argument("dk: csv format not supported");
  const auto& dk = opalg::d_operator(c.k);
  auto rp = opalg::apply_to_one(dk);
  if (c.format == "text") {
    std::ostringstream os;
    os << "D_" << c.k << " = " << dk.str() << "\n";
    os << "D_" << c.k << "(1): constant " << rp.constant_part.str();
    for (const auto& [w, coeff] : rp.h_terms)
      os << " + " << coeff.str() << " * " << w.str() << " H";
    emit(os.str(), c);
    return 0;
  }
  json doc = document("dk", c);
  doc["result"]["k"] = c.k;
  doc["result"]["operator"] = poly_json(dk);
  doc["result"]["applied_to_one"] = reduced_json(rp);
  emit_doc(doc, c);
  return 0;
}

int cmd_integrand(const Common& c) {
  if (c.k < 1) throw std::invalid_argument("integrand: need --k >= 1");
  if (c.format == "csv") throw std::invalid_argument("integrand: csv format not supported");
  symcalc::BoundaryIntegrand bi;
  if (c.geometry == "heisenberg-plane") {
    bi = symcalc::heisenberg_integrand(c.k, c.trunc);
  } else {
    auto ctx = make_context(c);
    bi = symcalc::eval_reduced(ctx, opalg::apply_to_one(opalg::d_operator(c.k)));
  }
  // integrand of a_k = -D_k(1) restricted to the boundary
  for (auto& [m, coeff] : bi.terms) coeff = opalg::neg(coeff);

  json doc = document("integrand", c);
  doc["result"]["k"] = c.k;
  doc["result"]["integrand"] = integrand_json(bi);
  if (c.geometry == "heisenberg-plane" && (c.k == 3 || c.k == 5)) {
    // reference constants from the literature, for comparison only
    constexpr double kPi = 3.14159265358979323846;
    double ref = c.k == 3 ? -3.0 / (8.0 * std::sqrt(kPi))
                          : 73.0 / (640.0 * std::sqrt(kPi));
    auto [m, coeff] = bi.monomial();
    json cmp;
    cmp["r_power"] = -m;
    cmp["computed"] = coeff.value();
    cmp["reference"] = ref;
    cmp["matches"] = std::fabs(coeff.value() - ref) < 1e-12;
    doc["result"]["reference_comparison"] = cmp;
  }
  emit_doc(doc, c);
  return 0;
}

int cmd_distance(const Common& c, double x, double y, double z) {
  if (c.format == "csv") throw std::invalid_argument("distance: csv format not supported");
  auto d = heisenberg::distance_to_plane(heisenberg::Point{x, y, z});
  if (c.format == "text") {
    std::ostringstream os;
    os.precision(17);
    os << "delta(" << x << ", " << y << ", " << z << ") = " << d.value
       << (d.on_axis ? "  (axis formula)" : "");
    emit(os.str(), c);
    return 0;
  }
  json doc = document("distance", c);
  doc["result"]["point"] = {x, y, z};
  doc["result"]["delta"] = d.value;
  doc["result"]["on_axis"] = d.on_axis;
  if (d.foot) {
    doc["result"]["foot"]["x0"] = d.foot->x0;
    doc["result"]["foot"]["y0"] = d.foot->y0;
    doc["result"]["foot"]["time"] = d.foot->time;
  }
  emit_doc(doc, c);
  return 0;
}

int cmd_distance_grid(const Common& c, const heisenberg::GridSpec& spec) {
  std::string csv = heisenberg::distance_grid_csv(spec);
  if (c.format == "csv" || c.format == "text") {
    emit(csv, c);
    return 0;
  }
  json doc = document("distance-grid", c);
  doc["result"]["rows"] = spec.n_r * spec.n_phi * spec.n_z;
  doc["result"]["csv"] = csv;
  emit_doc(doc, c);
  return 0;
}

int cmd_heatfit(const Common& c, int m) {
  heatnum::HeatContentSamples samples;
  symcalc::EvalContext ctx = make_context(c);
  if (c.geometry == "interval") {
    samples.geom = symcalc::Geometry::Interval;
    for (int i = 0; i < 12; ++i) {
      double t = 1e-2 * std::pow(4.0, -i) * c.length * c.length;
      samples.tq.emplace_back(t, heatnum::interval_heat_content(c.length, t));
    }
    std::sort(samples.tq.begin(), samples.tq.end());
  } else if (c.geometry == "disk") {
    std::vector<double> ts;
    for (int i = 0; i < 12; ++i)
      ts.push_back(1e-2 * std::pow(2.0, -i) * c.radius * c.radius);
    samples = heatnum::disk_heat_content(c.radius, ts);
  } else {
    throw std::invalid_argument("heatfit: geometry must be interval or disk");
  }
  if (c.format == "csv") {
    emit(heatnum::samples_csv(samples), c);
    return 0;
  }
  auto fit = heatnum::fit_halfpowers(samples, m);

  if (c.format == "text") {
    std::ostringstream os;
    os.precision(12);
    os << "k   fitted            exact             abs_err\n";
    for (int k = 0; k <= m; ++k) {
      auto exact = symcalc::coefficient(ctx, k);
      os << k << "   " << fit.coeffs[k] << "   " << exact.value() << "   "
         << std::fabs(fit.coeffs[k] - exact.value()) << "\n";
    }
    os << "residual " << fit.residual_norm << ", condition " << fit.condition
       << (fit.used_fallback ? " (least squares)" : " (peel-off)") << "\n";
    emit(os.str(), c);
    return 0;
  }

  json doc = document("heatfit", c);
  doc["config"]["m"] = m;
  json sj = json::array();
  for (auto& [t, q] : samples.tq) sj.push_back({{"t", t}, {"Q", q}});
  doc["result"]["samples"] = sj;
  doc["result"]["fit"]["coefficients"] = fit.coeffs;
  doc["result"]["fit"]["residual"] = fit.residual_norm;
  doc["result"]["fit"]["condition"] = fit.condition;
  doc["result"]["fit"]["used_fallback"] = fit.used_fallback;
  json cmpj = json::array();
  for (int k = 0; k <= m; ++k) {
    auto exact = symcalc::coefficient(ctx, k);
    json row;
    row["k"] = k;
    row["fitted"] = fit.coeffs[k];
    row["exact"] = coeff_json(exact);
    row["abs_err"] = std::fabs(fit.coeffs[k] - exact.value());
    cmpj.push_back(row);
  }
  doc["result"]["comparison"] = cmpj;
  emit_doc(doc, c);
  return 0;
}

int cmd_blowup(const Common& c, double r_min, double r_max) {
  if (c.format == "csv") throw std::invalid_argument("blowup: csv format not supported");
  auto bi = symcalc::heisenberg_integrand(c.k, c.trunc);
  double integral = heisenberg::blowup_integral(r_min, r_max, bi);
  double halved = heisenberg::blowup_integral(r_min / 2, r_max, bi);
  json doc = document("blowup", c);
  doc["config"]["r_min"] = r_min;
  doc["config"]["r_max"] = r_max;
  doc["result"]["integrand"] = integrand_json(bi);
  doc["result"]["integral"] = integral;
  doc["result"]["integral_half_rmin"] = halved;
  doc["result"]["ratio"] =
      integral == 0 ? 0.0 : halved / integral;
  emit_doc(doc, c);
  return 0;
}

int cmd_selftest(const Common& c) {
  auto results = selfcheck::run_all();
  bool all = true;
  for (auto& r : results) all = all && r.passed;
  if (c.format == "json") {
    json doc = document("selftest", c);
    json arr = json::array();
    for (auto& r : results) {
      json row;
      row["id"] = r.id;
      row["name"] = r.name;
      row["passed"] = r.passed;
      row["detail"] = r.detail;
      row["seconds"] = r.seconds;
      arr.push_back(row);
    }
    doc["result"]["criteria"] = arr;
    doc["result"]["all_passed"] = all;
    emit_doc(doc, c);
  } else {
    emit(selfcheck::format_table(results), c);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heat-content asymptotics toolkit"};
  app.require_subcommand(1);

  Common c;
  double x = 0, y = 0, z = 0;
  int fit_m = 3;
  heisenberg::GridSpec spec;
  spec.r_min = 0.1;
  spec.r_max = 2.0;
  spec.n_r = 16;
  spec.phi_min = 0.0;
  spec.phi_max = 3.141592653589793;
  spec.n_phi = 8;
  spec.z_min = -1.0;
  spec.z_max = 1.0;
  spec.n_z = 9;

  auto* dk = app.add_subcommand("dk", "print D_k and D_k(1) exactly");
  add_common(dk, c, false, true);

  auto* integrand = app.add_subcommand("integrand", "boundary integrand of a_k");
  add_common(integrand, c, true, true);

  auto* distance = app.add_subcommand("distance", "distance from a point to the plane");
  add_common(distance, c, false, false);
  distance->add_option("x", x, "x coordinate")->required();
  distance->add_option("y", y, "y coordinate")->required();
  distance->add_option("z", z, "z coordinate")->required();

  auto* grid = app.add_subcommand("distance-grid", "distance on a cylindrical grid (CSV)");
  add_common(grid, c, false, false);
  grid->add_option("--rmin", spec.r_min);
  grid->add_option("--rmax", spec.r_max);
  grid->add_option("--nr", spec.n_r);
  grid->add_option("--phimin", spec.phi_min);
  grid->add_option("--phimax", spec.phi_max);
  grid->add_option("--nphi", spec.n_phi);
  grid->add_option("--zmin", spec.z_min);
  grid->add_option("--zmax", spec.z_max);
  grid->add_option("--nz", spec.n_z);

  auto* heatfit = app.add_subcommand("heatfit", "numeric Q(t), half-power fit, exact comparison");
  add_common(heatfit, c, true, false);
  heatfit->add_option("--m", fit_m, "highest fitted half-power");

  double r_min = 1e-2, r_max = 1.0;
  auto* blowup = app.add_subcommand("blowup", "local boundary integral of the a_k integrand");
  add_common(blowup, c, false, true);
  blowup->add_option("--rmin", r_min);
  blowup->add_option("--rmax", r_max);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(selftest, c, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (dk->parsed()) return cmd_dk(c);
    if (integrand->parsed()) return cmd_integrand(c);
    if (distance->parsed()) return cmd_distance(c, x, y, z);
    if (grid->parsed()) return cmd_distance_grid(c, spec);
    if (heatfit->parsed()) return cmd_heatfit(c, fit_m);
    if (blowup->parsed()) {
      if (blowup->get_option("--k")->count() == 0) c.k = 5;
      c.geometry = "heisenberg-plane";
      return cmd_blowup(c, r_min, r_max);
    }
    if (selftest->parsed()) return cmd_selftest(c);
  } catch (const std::exception& e) {
    json err;
    err["schema"] = "1";
    err["error"]["type"] =
        dynamic_cast<const std::invalid_argument*>(&e)   ? "invalid_argument"
        : dynamic_cast<const std::domain_error*>(&e)     ? "domain_error"
        : dynamic_cast<const heisenberg::NoBranch*>(&e)  ? "no_branch"
        : dynamic_cast<const symcalc::TruncationInsufficient*>(&e)
            ? "truncation_insufficient"
            : "runtime_error";
    err["error"]["message"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 1;
  }
  return 0;
}
