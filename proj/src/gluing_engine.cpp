#include "phcert/gluing_engine.hpp"

#include <algorithm>
#include <cmath>

#include "phcert/errors.hpp"
#include "phcert/rn_model.hpp"

namespace phcert {

namespace {

constexpr double kAlignmentTolerance = 1e-12;

double scaled_jump(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Fields and derivatives at r0 seen from one side (dir = +1 outward piece,
// dir = -1 inward piece).
RadialSample side_jet(const RadialProfile& p, double r0, int dir, double h) {
  RadialSample s = p.at(r0);
  if (p.kind() == ProfileKind::closed_form) return s;

  const double reach = dir > 0 ? p.r_max() - r0 : r0 - p.r_min();
  if (!(3.0 * h <= reach)) {
    throw StencilError("one-sided stencil at r = " + std::to_string(r0) + " leaves its piece",
                       reach / 3.0);
  }
  RadialSample pts[4];
  pts[0] = s;
  for (int k = 1; k < 4; ++k) pts[k] = p.at(r0 + dir * k * h);
  auto d1 = [&](double RadialSample::*field) {
    return dir * (-3.0 * (pts[0].*field) + 4.0 * (pts[1].*field) - (pts[2].*field)) / (2.0 * h);
  };
  auto d2 = [&](double RadialSample::*field) {
    return (2.0 * (pts[0].*field) - 5.0 * (pts[1].*field) + 4.0 * (pts[2].*field) -
            (pts[3].*field)) /
           (h * h);
  };
  s.df = d1(&RadialSample::f);
  s.dN = d1(&RadialSample::N);
  s.dphi = d1(&RadialSample::phi);
  s.d2f = d2(&RadialSample::f);
  s.d2N = d2(&RadialSample::N);
  s.d2phi = d2(&RadialSample::phi);
  return s;
}

struct LocusFields {
  double N, nuN, phi, nuPhi, area, d_area, gpp, d_gpp, H, identity, hess;
};

LocusFields locus_fields(const RadialSample& j) {
  LocusFields L;
  const double nu_psi = j.f * j.dN;
  L.N = j.N;
  L.nuN = nu_psi;
  L.phi = j.phi;
  L.nuPhi = j.f * j.dphi;
  L.area = j.r * j.r;
  L.d_area = 2.0 * j.r * j.f / nu_psi;
  L.hess = j.f * (j.df * j.dN + j.f * j.d2N);
  L.gpp = 1.0 / (nu_psi * nu_psi);
  L.d_gpp = gpp_normal_derivative(j);
  L.H = 2.0 * j.f / j.r;
  L.identity = L.nuPhi * L.nuPhi / j.N - L.H * L.nuN;
  return L;
}

double hessian_mismatch(const LocusFields& L) {
  const double scale = std::max({std::abs(L.hess), L.nuPhi * L.nuPhi / std::abs(L.N),
                                 std::abs(L.H * L.nuN), 1e-300});
  return std::abs(L.hess - L.identity) / scale;
}

}  // namespace

double gpp_normal_derivative(const RadialSample& s) {
  const double nu_psi = s.f * s.dN;
  const double hess = s.f * (s.df * s.dN + s.f * s.d2N);
  return -2.0 * hess / std::pow(nu_psi, 4);
}

const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

RadialProfile build_neck(const NeckData& nd, const PhotonSphereComponent& c) {
  if (!(nd.mu * nd.mu > nd.q * nd.q) || !(nd.mu > 0.0)) {
    throw RefusalError("sub-extremality (H r > 1)", "neck needs mu^2 > q^2 and mu > 0");
  }
  if (std::abs(nd.r - c.r) > kAlignmentTolerance * c.r) {
    throw AlignmentError("neck data and component disagree on the gluing radius");
  }
  return rescaled_rn_profile(nd.mu, nd.q, nd.alpha, nd.beta, nd.s, nd.r);
}

const RadialProfile& GluedBranch::piece(double r, bool inner) const {
  if (r < locus() || (inner && r == locus())) return neck_profile;
  return exterior;
}

RadialSample GluedProfile::at(std::size_t branch, Side side, double r, bool inner) const {
  if (branch >= branches.size()) throw InvalidInput("branch index out of range");
  if (side == Side::minus && !doubled) throw InvalidInput("minus side exists only after doubling");
  RadialSample s = branches[branch].piece(r, inner).at(r);
  if (side == Side::minus) {
    s.N = -s.N;
    s.dN = -s.dN;
    s.d2N = -s.d2N;
  }
  return s;
}

std::vector<double> GluedProfile::loci() const {
  std::vector<double> out;
  for (const auto& b : branches) out.push_back(b.locus());
  return out;
}

GluedProfile glue(const std::vector<RadialProfile>& exteriors,
                  const std::vector<PhotonSphereComponent>& components,
                  const std::vector<NeckData>& necks) {
  if (exteriors.size() != components.size() || necks.size() != components.size()) {
    throw AlignmentError("need one exterior and one neck per component");
  }
  GluedProfile gp;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const auto& ext = exteriors[i];
    const double tol = kAlignmentTolerance * c.r;
    if (std::abs(ext.r_min() - c.r) > tol) {
      throw AlignmentError("exterior " + std::to_string(i) + " starts at r = " +
                           std::to_string(ext.r_min()) + ", component radius is " +
                           std::to_string(c.r));
    }
    if (std::abs(necks[i].r - c.r) > tol) {
      throw AlignmentError("neck " + std::to_string(i) + " ends at r = " +
                           std::to_string(necks[i].r) + ", component radius is " +
                           std::to_string(c.r));
    }
    GluedBranch b{c, necks[i], build_neck(necks[i], c), ext};
    gp.branches.push_back(std::move(b));
  }
  return gp;
}

GluedProfile glue(const RadialProfile& exterior, const std::vector<PhotonSphereComponent>& components,
                  const std::vector<NeckData>& necks) {
  std::vector<RadialProfile> exts;
  for (const auto& c : components) {
    if (!(c.r >= exterior.r_min() - kAlignmentTolerance * c.r) || !(c.r < exterior.r_max())) {
      throw AlignmentError("component radius " + std::to_string(c.r) +
                           " lies outside the exterior profile");
    }
    exts.push_back(exterior.restricted(std::max(c.r, exterior.r_min()), exterior.r_max()));
  }
  // restricted() keeps r_min at the clamped value; re-anchor to the exact radius.
  for (std::size_t i = 0; i < exts.size(); ++i) {
    if (exts[i].r_min() != components[i].r) {
      exts[i] = RadialProfile(components[i].r, exts[i].r_max(), exts[i].kind(),
                              [base = exts[i]](double r) {
                                return base.at(std::max(r, base.r_min()));
                              },
                              exts[i].label(), exts[i].length_scale());
    }
  }
  return glue(exts, components, necks);
}

double LocusRegularity::max_jump() const {
  double m = std::max(mean_curvature_jump, hessian_identity_jump);
  for (const auto& c : channels) m = std::max({m, c.value_jump, c.derivative_jump});
  return m;
}

double RegularityReport::max_jump() const {
  double m = 0.0;
  for (const auto& l : loci) m = std::max(m, l.max_jump());
  return m;
}

RegularityReport check_C11(const GluedProfile& gp, double h) {
  if (!(h > 0.0)) throw InvalidInput("stencil step must be positive");
  RegularityReport rep;
  rep.step = h;
  for (const auto& b : gp.branches) {
    const double r0 = b.locus();
    const auto in = locus_fields(side_jet(b.neck_profile, r0, -1, h));
    const auto out = locus_fields(side_jet(b.exterior, r0, +1, h));

    LocusRegularity L;
    L.radius = r0;
    L.channels = {
        {"lapse", scaled_jump(in.N, out.N), scaled_jump(in.nuN, out.nuN)},
        {"potential", scaled_jump(in.phi, out.phi), scaled_jump(in.nuPhi, out.nuPhi)},
        {"induced_metric", scaled_jump(in.area, out.area), scaled_jump(in.d_area, out.d_area)},
        {"g_psipsi", scaled_jump(in.gpp, out.gpp), scaled_jump(in.d_gpp, out.d_gpp)},
    };
    L.mean_curvature_inner = in.H;
    L.mean_curvature_outer = out.H;
    L.mean_curvature_jump = scaled_jump(in.H, out.H);
    L.mean_curvature_positive = in.H > 0.0 && out.H > 0.0;
    L.hessian_identity_jump = scaled_jump(in.identity, out.identity);
    double direct = 0.0;
    if (b.neck_profile.kind() == ProfileKind::closed_form) direct = hessian_mismatch(in);
    if (b.exterior.kind() == ProfileKind::closed_form) direct = std::max(direct, hessian_mismatch(out));
    L.hessian_direct_residual = direct;
    const auto sb = b.neck_profile.at(b.boundary());
    L.minimal_sphere_mean_curvature = 2.0 * sb.f / sb.r;
    rep.loci.push_back(std::move(L));
  }
  return rep;
}

double DoublingReport::max_symmetry_residual() const {
  return std::max({area_radius_even, conformal_factor_inversion, lapse_isotropic, lapse_odd,
                   potential_even});
}

double DoublingReport::max_derivative_jump() const {
  return std::max({lapse_derivative_jump, potential_derivative_jump,
                   conformal_factor_derivative_jump, lapse_slope_residual});
}

DoubledProfile double_across_boundary(const GluedProfile& gp, int samples) {
  DoubledProfile out;
  out.profile = gp;
  out.profile.doubled = true;
  samples = std::max(samples, 2);

  for (const auto& b : gp.branches) {
    const auto& nd = b.neck;
    DoublingReport rep;
    rep.boundary_metric_function = 1.0 - 2.0 * nd.mu / nd.s + nd.q * nd.q / (nd.s * nd.s);
    if (std::abs(rep.boundary_metric_function) > 1e-12) {
      throw RefusalError("vanishing lapse on the minimal boundary",
                         "neck lapse does not vanish at s; doubling would be singular");
    }
    const double d2 = nd.mu * nd.mu - nd.q * nd.q;
    if (!(d2 > 0.0)) throw RefusalError("non-degenerate horizon", "rho_h = 0: extremal neck");
    const double rh = 0.5 * std::sqrt(d2);
    rep.rho_h = rh;
    const double rh2 = rh * rh;
    const auto& neck = b.neck_profile;

    // rho + mu + rh^2/rho, written relative to s so it is exact at rho_h.
    auto area = [&](double rho) { return nd.s + (rho - rh) * (rho - rh) / rho; };
    auto w = [&](double rho) { return area(rho) / rho; };
    auto iso_lapse = [&](double rho) { return nd.alpha * (1.0 - rh2 / (rho * rho)) / w(rho); };
    auto iso_phi = [&](double rho) { return nd.alpha * nd.q / area(rho) + nd.beta; };
    auto rho_of_r = [&](double r) {
      const double a = r - nd.mu;
      return 0.5 * (a + std::sqrt(std::max(0.0, a * a - 4.0 * rh2)));
    };

    // Plus side from the neck profile; minus side by reflection.
    auto lapse = [&](double rho) {
      return rho >= rh ? neck.at(std::min(area(rho), nd.r)).N
                       : -neck.at(std::min(area(rh2 / rho), nd.r)).N;
    };
    auto potential = [&](double rho) {
      const double rr = rho >= rh ? area(rho) : area(rh2 / rho);
      return neck.at(std::min(rr, nd.r)).phi;
    };
    auto metric = [&](double rho) {
      if (rho >= rh) return w(rho);
      const double rp = rh2 / rho;
      return w(rp) * (rh / rho) * (rh / rho);
    };

    const double rho_max = rho_of_r(nd.r);
    const double rho_lo = rh * (1.0 + 1e-3);
    for (int i = 0; i < samples; ++i) {
      const double rho = rho_lo * std::pow(rho_max / rho_lo, static_cast<double>(i) / (samples - 1));
      const double rp = rh2 / rho;
      const double r = area(rho);
      const double n_plus = neck.at(std::min(r, nd.r)).N;
      const double p_plus = neck.at(std::min(r, nd.r)).phi;
      rep.area_radius_even = std::max(rep.area_radius_even, std::abs(area(rp) - r) / r);
      rep.conformal_factor_inversion =
          std::max(rep.conformal_factor_inversion,
                   std::abs(w(rp) * (rh / rho) * (rh / rho) - w(rho)) / w(rho));
      rep.lapse_isotropic =
          std::max(rep.lapse_isotropic, std::abs(n_plus - iso_lapse(rho)) / nd.alpha);
      rep.lapse_odd = std::max(rep.lapse_odd, std::abs(iso_lapse(rp) + n_plus) / nd.alpha);
      rep.potential_even = std::max(
          rep.potential_even,
          std::abs(iso_phi(rp) - p_plus) / std::max(1.0, std::abs(p_plus)));
    }

    const double h = 1e-3 * rh;
    rep.step = h;
    auto right = [&](auto&& F) { return (-3.0 * F(rh) + 4.0 * F(rh + h) - F(rh + 2.0 * h)) / (2.0 * h); };
    auto left = [&](auto&& F) {
      return (3.0 * F(rh) - 4.0 * F(rh - h) + F(rh - 2.0 * h)) / (2.0 * h);
    };
    const double nr = right(lapse), nl = left(lapse);
    rep.lapse_derivative_jump = scaled_jump(nr, nl);
    rep.potential_derivative_jump = scaled_jump(right(potential), left(potential));
    rep.conformal_factor_derivative_jump = scaled_jump(right(metric), left(metric));
    const double slope = 2.0 * nd.alpha / nd.s;
    rep.lapse_slope_residual = std::abs(nr - slope) / slope;
    out.reports.push_back(rep);
  }
  return out;
}

}  // namespace phcert
