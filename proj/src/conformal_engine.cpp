#include "phcert/conformal_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phcert/errors.hpp"

namespace phcert {

namespace {

struct OmegaJet {
  double value, d1, d2;
};

OmegaJet omega_jet(const RadialSample& s, bool unit) {
  if (unit) return {1.0, 0.0, 0.0};
  const double n1 = 1.0 + s.N;
  return {0.25 * (n1 * n1 - s.phi * s.phi), 0.5 * (n1 * s.dN - s.phi * s.dphi),
          0.5 * (s.dN * s.dN + n1 * s.d2N - s.dphi * s.dphi - s.phi * s.d2phi)};
}

// Geometry of Omega^2 (f^-2 dr^2 + r^2 dOmega^2) from Omega, f and their r-derivatives.
void fill_direct(ConformalCurvature& c, double r, double f, double df, const OmegaJet& om) {
  const double R = om.value * r;
  const double R1 = om.d1 * r + om.value;
  const double R2 = om.d2 * r + 2.0 * om.d1;
  const double A = om.value / f;
  const double A1 = (om.d1 * f - om.value * df) / (f * f);
  const double Rl = R1 / A;
  const double Rll = (R2 - R1 * A1 / A) / (A * A);
  c.r = r;
  c.omega = om.value;
  c.area_radius = R;
  c.K_radial = -Rll / R;
  c.K_tangential = (1.0 - Rl * Rl) / (R * R);
  c.R_hat_direct = 4.0 * c.K_radial + 2.0 * c.K_tangential;
  c.mass = 0.5 * R * (1.0 - Rl * Rl);
}

double identity_value(const RadialSample& s, const OmegaJet& om, bool unit) {
  if (s.N == 0.0) {
    throw RefusalError("scalar-curvature identity",
                       "identity divides by the lapse, which vanishes on the minimal boundary");
  }
  if (unit) return 2.0 * s.f * s.f * s.dphi * s.dphi / (s.N * s.N);
  const double w = (1.0 - s.N * s.N - s.phi * s.phi) * s.dphi + 2.0 * s.phi * s.N * s.dN;
  const double o2 = om.value * om.value;
  return 2.0 * s.f * s.f * w * w / (16.0 * s.N * s.N * o2 * o2);
}

std::vector<double> tail_radii(const RadialProfile& p, int levels, double r_start) {
  std::vector<double> out;
  if (levels < 3) throw InvalidInput("tail sequence needs at least three radii");
  double r0 = r_start;
  if (!(r0 > 0.0)) {
    r0 = std::isfinite(p.r_max()) ? p.r_max() / std::ldexp(1.0, levels - 1)
                                  : 10.0 * std::max(p.length_scale(), p.r_min());
  }
  for (int k = 0; k < levels; ++k) {
    const double r = r0 * std::ldexp(1.0, k);
    if (r < p.r_min()) continue;
    out.push_back(std::min(r, p.r_max()));
  }
  if (out.size() < 3) throw InvalidInput("profile tail too short for extrapolation");
  return out;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Two Richardson levels assuming a + b/r + c/r^2 on radii doubling each step.
double richardson(const std::vector<double>& v) {
  std::vector<double> e1, e2;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) e1.push_back(2.0 * v[k + 1] - v[k]);
  for (std::size_t k = 0; k + 1 < e1.size(); ++k) e2.push_back((4.0 * e1[k + 1] - e1[k]) / 3.0);
  return e2.empty() ? e1.back() : e2.back();
}

}  // namespace

const char* to_string(DerivativeMode m) {
  return m == DerivativeMode::analytic ? "analytic" : "central_difference";
}

double conformal_factor(double signed_lapse, double phi) {
  const double n1 = 1.0 + signed_lapse;
  return 0.25 * (n1 * n1 - phi * phi);
}

double conformal_factor(const GluedProfile& gp, Side side, double r, std::size_t branch, bool inner) {
  const auto s = gp.at(branch, side, r, inner);
  return conformal_factor(s.N, s.phi);
}

std::vector<GridPoint> branch_grid(const GluedBranch& b, const GridOptions& opts) {
  std::vector<GridPoint> g;
  const double s = b.boundary(), rc = b.locus();
  const int n = std::max(opts.points_per_piece, 4);
  const double lo = opts.clearance, hi = 1.0 - opts.clearance;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    const double t = lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * u));
    g.push_back({s + (rc - s) * t, true});
  }
  const double a = rc * (1.0 + opts.clearance);
  const double z = std::min(b.r_max(), opts.outer_radius_factor * rc);
  if (z > a) {
    for (int k = 5; k >= 1; --k) {
      const double r = rc * (1.0 + std::pow(10.0, -k));
      if (r > a && r < z) g.push_back({r, false});
    }
    for (int i = 0; i < n; ++i) {
      const double r = a * std::pow(z / a, static_cast<double>(i) / (n - 1));
      g.push_back({std::min(r, z), false});
    }
  }
  std::stable_sort(g.begin(), g.end(), [](const GridPoint& x, const GridPoint& y) { return x.r < y.r; });
  return g;
}

BoundarySignTest boundary_sign_test(const PhotonSphereComponent& c) {
  BoundarySignTest t;
  t.radius = c.r;
  const double half = 0.5 * c.H * c.N0;
  t.margin_plus = c.r * (half + c.nuPhi);
  t.margin_minus = c.r * (half - c.nuPhi);
  const double q = charge(c);
  t.hr_above_one = c.H * c.r > 1.0;
  t.charge_ratio_below_quarter = q * q / (c.r * c.r) < 0.25;
  t.passed = t.margin_plus > 0.0 && t.margin_minus > 0.0;
  return t;
}

PositivityReport positivity_check(const GluedProfile& gp, const GridOptions& opts) {
  if (!gp.doubled) throw InvalidInput("positivity check runs on the doubled profile");
  PositivityReport rep;
  rep.interior_margin = kInfinity;
  rep.omega_plus_min = kInfinity;
  rep.omega_minus_scaled_min = kInfinity;
  for (std::size_t bi = 0; bi < gp.branches.size(); ++bi) {
    const auto& b = gp.branches[bi];
    const double L = b.locus();
    auto pts = branch_grid(b, opts);
    pts.push_back({b.boundary(), true});
    pts.push_back({L, true});
    pts.push_back({L, false});
    for (const auto& p : pts) {
      const auto s = gp.at(bi, Side::plus, p.r, p.inner);
      const double margin = (1.0 - s.N - std::abs(s.phi)) * p.r / L;
      if (margin < rep.interior_margin) {
        rep.interior_margin = margin;
        rep.interior_margin_radius = p.r;
      }
      rep.omega_plus_min = std::min(rep.omega_plus_min, conformal_factor(s.N, s.phi));
      const double om = conformal_factor(-s.N, s.phi);
      rep.omega_minus_scaled_min = std::min(rep.omega_minus_scaled_min, om * (p.r / L) * (p.r / L));
    }
    const auto t = boundary_sign_test(b.component);
    if (!t.passed) {
      rep.diagnostics.push_back("boundary sign test fails at photon sphere r = " +
                                std::to_string(b.component.r));
    }
    rep.boundary.push_back(t);
  }
  if (!(rep.interior_margin > 0.0)) {
    rep.diagnostics.push_back("N - 1 +- Phi < 0 fails near r = " +
                              std::to_string(rep.interior_margin_radius));
  }
  if (!(rep.omega_plus_min > 0.0)) rep.diagnostics.push_back("conformal factor not positive on the plus side");
  if (!(rep.omega_minus_scaled_min > 0.0)) {
    rep.diagnostics.push_back("conformal factor not positive on the minus side");
  }
  rep.strict = rep.interior_margin > 0.0 && rep.omega_plus_min > 0.0 &&
               rep.omega_minus_scaled_min > 0.0 &&
               std::all_of(rep.boundary.begin(), rep.boundary.end(),
                           [](const BoundarySignTest& t) { return t.passed; });
  return rep;
}

PositivityReport positivity_check(const RadialProfile& profile, const std::vector<double>& radii) {
  PositivityReport rep;
  rep.interior_margin = kInfinity;
  rep.omega_plus_min = kInfinity;
  rep.omega_minus_scaled_min = kInfinity;
  const double L = std::max(profile.length_scale(), 1e-300);
  for (double r : radii) {
    const auto s = profile.at(r);
    const double margin = (1.0 - s.N - std::abs(s.phi)) * r / L;
    if (margin < rep.interior_margin) {
      rep.interior_margin = margin;
      rep.interior_margin_radius = r;
    }
    rep.omega_plus_min = std::min(rep.omega_plus_min, conformal_factor(s.N, s.phi));
    rep.omega_minus_scaled_min =
        std::min(rep.omega_minus_scaled_min, conformal_factor(-s.N, s.phi) * (r / L) * (r / L));
  }
  rep.strict = rep.interior_margin > 0.0 && rep.omega_plus_min > 0.0;
  if (!rep.strict) {
    rep.diagnostics.push_back("non-strict: N - 1 +- Phi reaches 0 near r = " +
                              std::to_string(rep.interior_margin_radius));
  }
  return rep;
}

double ConformalCurvature::identity_residual() const {
  const double R2 = area_radius * area_radius;
  return R2 * std::abs(R_hat_identity - R_hat_direct) / std::max(1.0, R2 * std::abs(R_hat_identity));
}

double ConformalCurvature::flatness_residual() const {
  const double R2 = area_radius * area_radius;
  return std::max(R2 * std::abs(K_radial), R2 * std::abs(K_tangential));
}

ConformalCurvature conformal_curvature(const RadialSample& s, bool unit_factor) {
  ConformalCurvature c;
  const auto om = omega_jet(s, unit_factor);
  fill_direct(c, s.r, s.f, s.df, om);
  c.R_hat_identity = identity_value(s, om, unit_factor);
  return c;
}

ConformalCurvature scalar_curvature_hat(const GluedProfile& gp, Side side, double r,
                                        DerivativeMode mode, double h, std::size_t branch,
                                        bool inner) {
  const auto s = gp.at(branch, side, r, inner);
  if (mode == DerivativeMode::analytic) return conformal_curvature(s);

  const auto& piece = gp.branches.at(branch).piece(r, inner);
  const double room = std::min(r - piece.r_min(), piece.r_max() - r);
  if (!(h < room)) {
    throw StencilError("central difference at r = " + std::to_string(r) + " leaves its piece",
                       room);
  }
  const auto sm = gp.at(branch, side, r - h, inner);
  const auto sp = gp.at(branch, side, r + h, inner);
  const double om0 = conformal_factor(s.N, s.phi);
  const double omm = conformal_factor(sm.N, sm.phi);
  const double omp = conformal_factor(sp.N, sp.phi);
  const OmegaJet om{om0, (omp - omm) / (2.0 * h), (omp - 2.0 * om0 + omm) / (h * h)};
  ConformalCurvature c;
  fill_direct(c, r, s.f, (sp.f - sm.f) / (2.0 * h), om);
  c.R_hat_identity = identity_value(s, omega_jet(s, false), false);
  return c;
}

CurvatureSweep curvature_sweep(const GluedProfile& gp, const GridOptions& opts,
                               DerivativeMode mode, double h) {
  CurvatureSweep sw;
  sw.loci = gp.loci();
  sw.min_identity = kInfinity;
  double worst = -1.0;
  auto take = [&](const ConformalCurvature& c, Side side) {
    const double R2 = c.area_radius * c.area_radius;
    sw.max_identity_residual = std::max(sw.max_identity_residual, c.identity_residual());
    sw.min_identity = std::min(sw.min_identity, c.R_hat_identity);
    sw.max_radial = std::max(sw.max_radial, R2 * std::abs(c.K_radial));
    sw.max_tangential = std::max(sw.max_tangential, R2 * std::abs(c.K_tangential));
    if (c.flatness_residual() > worst) {
      worst = c.flatness_residual();
      sw.worst_radius = c.r;
      sw.worst_side = side;
    }
  };
  for (std::size_t bi = 0; bi < gp.branches.size(); ++bi) {
    const auto& b = gp.branches[bi];
    for (const auto& p : branch_grid(b, opts)) {
      double step = h;
      if (mode == DerivativeMode::central_difference) {
        const auto& piece = b.piece(p.r, p.inner);
        step = std::min(h, 0.5 * std::min(p.r - piece.r_min(), piece.r_max() - p.r));
      }
      auto c = scalar_curvature_hat(gp, Side::plus, p.r, mode, step, bi, p.inner);
      take(c, Side::plus);
      sw.plus.push_back(c);
      if (gp.doubled) {
        c = scalar_curvature_hat(gp, Side::minus, p.r, mode, step, bi, p.inner);
        take(c, Side::minus);
        sw.minus.push_back(c);
      }
    }
  }
  if (sw.plus.empty()) sw.min_identity = 0.0;
  return sw;
}

FlatnessReport flatness_check(const CurvatureSweep& sweep, double tol) {
  FlatnessReport f;
  f.max_radial = sweep.max_radial;
  f.max_tangential = sweep.max_tangential;
  f.residual = std::max(f.max_radial, f.max_tangential);
  f.tolerance = tol;
  f.worst_radius = sweep.worst_radius;
  f.worst_side = sweep.worst_side;
  f.flat = f.residual < tol;
  return f;
}

FlatnessReport flatness_check(const GluedProfile& gp, double tol, const GridOptions& opts,
                              DerivativeMode mode, double h) {
  return flatness_check(curvature_sweep(gp, opts, mode, h), tol);
}

FlatnessReport flatness_check(const RadialProfile& profile, const std::vector<double>& radii,
                              double tol, bool unit_factor) {
  FlatnessReport f;
  f.tolerance = tol;
  for (double r : radii) {
    const auto s = profile.at(r);
    ConformalCurvature c;
    fill_direct(c, r, s.f, s.df, omega_jet(s, unit_factor));
    const double R2 = c.area_radius * c.area_radius;
    f.max_radial = std::max(f.max_radial, R2 * std::abs(c.K_radial));
    f.max_tangential = std::max(f.max_tangential, R2 * std::abs(c.K_tangential));
    if (c.flatness_residual() >= f.residual) {
      f.residual = c.flatness_residual();
      f.worst_radius = r;
    }
  }
  f.flat = f.residual < tol;
  return f;
}

MassReport adm_mass_hat(const RadialProfile& exterior, const MassOptions& opts) {
  MassReport rep;
  rep.radii = tail_radii(exterior, opts.levels, opts.r_start);
  for (double r : rep.radii) {
    const auto s = exterior.at(r);
    ConformalCurvature c;
    fill_direct(c, r, s.f, s.df, omega_jet(s, opts.unit_factor));
    rep.area_radii.push_back(c.area_radius);
    rep.masses.push_back(c.mass);
  }
  for (std::size_t k = 1; k < rep.area_radii.size(); ++k) {
    if (!(rep.area_radii[k] > rep.area_radii[k - 1])) rep.monotone = false;
  }
  if (!rep.monotone) {
    rep.diagnostic = "conformal area radius is not increasing on the tail; area-radius gauge fails";
  }
  rep.extrapolated = richardson(rep.masses);

  std::vector<double> lx, ly;
  const double floor = 1e-12 * std::max(1.0, std::abs(rep.extrapolated));
  for (std::size_t k = 0; k < rep.masses.size(); ++k) {
    const double d = std::abs(rep.masses[k] - rep.extrapolated);
    if (d > floor * std::max(1.0, rep.radii[k])) {
      lx.push_back(std::log(rep.area_radii[k]));
      ly.push_back(std::log(d));
    }
  }
  if (lx.size() >= 3) rep.decay_exponent = slope_fit(lx, ly);
  return rep;
}

MassReport adm_mass_hat(const GluedProfile& gp, std::size_t branch, const MassOptions& opts) {
  return adm_mass_hat(gp.branches.at(branch).exterior, opts);
}

CompactificationReport minus_end_compactification_check(const RadialProfile& exterior, double M,
                                                        double Q, int levels) {
  const double d = M * M - Q * Q;
  if (std::abs(d) <= kExtremalTolerance * std::max(1.0, M * M)) {
    throw RefusalError("non-degenerate horizon",
                       "M^2 = Q^2: the minus end is not compactified to a point");
  }
  CompactificationReport rep;
  rep.radii = tail_radii(exterior, levels, 0.0);
  rep.predicted_coefficient = 0.25 * d;
  std::vector<double> scaled;
  for (double r : rep.radii) {
    const auto s = exterior.at(r);
    const double one_minus = 1.0 - s.N;
    const double om = 0.25 * (one_minus * one_minus - s.phi * s.phi);
    rep.area_radii.push_back(om * r);
    scaled.push_back(om * r * r);
  }
  for (std::size_t k = 1; k < rep.area_radii.size(); ++k) {
    if (!(rep.area_radii[k] < rep.area_radii[k - 1])) rep.decreasing = false;
  }
  const std::size_t half = rep.radii.size() / 2;
  std::vector<double> lx, ly;
  for (std::size_t k = half; k < rep.radii.size(); ++k) {
    if (rep.area_radii[k] > 0.0) {
      lx.push_back(std::log(rep.radii[k]));
      ly.push_back(std::log(rep.area_radii[k]));
    }
  }
  rep.fitted_exponent = lx.size() >= 2 ? slope_fit(lx, ly) : 0.0;
  rep.fitted_coefficient = richardson(scaled);
  return rep;
}

}  // namespace phcert
