#include "phcert/surface_data.hpp"

#include <algorithm>
#include <cmath>

#include "phcert/errors.hpp"

namespace phcert {

namespace {

ExtremalityClass sign_class(double x, double tol) {
  if (std::abs(x) <= tol) return ExtremalityClass::extremal;
  return x > 0.0 ? ExtremalityClass::sub_extremal : ExtremalityClass::super_extremal;
}

}  // namespace

ComponentValidation validate_component(const PhotonSphereComponent& c, double tol) {
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw InvalidInput("component area radius must be positive");
  if (!(c.N0 > 0.0) || !std::isfinite(c.N0)) throw InvalidInput("component lapse must be positive");

  ComponentValidation v;
  const double r = c.r, r2 = r * r;
  const double e = c.nuPhi / c.N0;
  v.scalar_curvature_residual = r2 * (1.5 * c.H * c.H + 2.0 * e * e) - 2.0;
  v.lapse_relation_residual = r * (c.N0 * c.H - 2.0 * c.nuN) / c.N0;
  v.constraint_residual = 4.0 / 3.0 - r2 * c.H * c.H - (4.0 / 3.0) * r2 * e * e;
  v.mean_curvature_positive = c.H > 0.0;
  v.torus_branch = c.H == 0.0 && c.nuPhi == 0.0;

  const bool small = std::abs(v.scalar_curvature_residual) < tol &&
                     std::abs(v.lapse_relation_residual) < tol &&
                     std::abs(v.constraint_residual) < tol;
  v.passed = small && v.mean_curvature_positive;
  if (v.torus_branch) {
    v.diagnostic =
        "H = 0 and nuPhi = 0: flat-torus branch, excluded for asymptotically flat data "
        "(positive mean curvature of photon-sphere components)";
  } else if (!v.mean_curvature_positive) {
    v.diagnostic = "mean curvature must be positive on a photon-sphere component";
  } else if (!small) {
    v.diagnostic = "photon-sphere constant relations not satisfied within tolerance";
  }
  return v;
}

double charge(const PhotonSphereComponent& c) { return -c.nuPhi * c.r * c.r / c.N0; }

double neck_mass(const PhotonSphereComponent& c) {
  const double q = charge(c);
  return c.r / 3.0 + 2.0 * q * q / (3.0 * c.r);
}

double neck_mass_factorization_residual(const PhotonSphereComponent& c) {
  const double q2 = charge(c) * charge(c), mu = neck_mass(c), r2 = c.r * c.r;
  const double lhs = mu * mu - q2;
  const double rhs = (r2 - q2) * (r2 - 4.0 * q2) / (9.0 * r2);
  return std::abs(lhs - rhs) / std::max(mu * mu, 1e-300);
}

double komar_mass(const PhotonSphereComponent& c) { return c.r * c.r * c.nuN; }

ComponentClassification classify_component(const PhotonSphereComponent& c, double tol) {
  const double q = charge(c), q2 = q * q, mu = neck_mass(c), r2 = c.r * c.r;
  ComponentClassification out;
  out.hr_minus_one = c.H * c.r - 1.0;
  out.by_mean_curvature = sign_class(out.hr_minus_one, tol);
  out.by_radius = sign_class((r2 - 4.0 * q2) / r2, tol);
  out.by_neck_mass = sign_class((mu * mu - q2) / (mu * mu), tol);
  out.consistent = out.by_mean_curvature == out.by_radius && out.by_radius == out.by_neck_mass;
  return out;
}

NeckInterval neck_interval(const PhotonSphereComponent& c, double tol) {
  const auto cls = classify_component(c, tol);
  if (cls.by_mean_curvature != ExtremalityClass::sub_extremal) {
    throw RefusalError("sub-extremality (H r > 1)",
                       std::string("neck construction needs a sub-extremal component with a "
                                   "non-degenerate horizon; component is ") +
                           to_string(cls.by_mean_curvature));
  }
  NeckInterval nd;
  nd.r = c.r;
  nd.q = charge(c);
  nd.mu = neck_mass(c);
  const double q2 = nd.q * nd.q;
  nd.s = nd.mu + std::sqrt(std::max(0.0, nd.mu * nd.mu - q2));
  const double endpoint = 1.5 * nd.mu + 0.5 * std::sqrt(std::max(0.0, 9.0 * nd.mu * nd.mu - 8.0 * q2));
  nd.endpoint_residual = std::abs(c.r - endpoint) / c.r;
  if (nd.endpoint_residual > 1e-10) {
    throw RefusalError("neck endpoint identity",
                       "photon-sphere radius does not match the neck's outer photon sphere");
  }
  if (!(nd.s < nd.r)) throw RefusalError("neck interval", "neck horizon is not inside the component");
  return nd;
}

MatchingConstants matching_constants(const PhotonSphereComponent& c, const NeckInterval& nd) {
  const double fr = rn_metric_function(nd.mu, nd.q, nd.r);
  if (!(fr > 0.0)) {
    throw RefusalError("lapse matching", "neck metric function vanishes at the gluing radius");
  }
  MatchingConstants mc;
  mc.alpha = c.N0 / fr;
  mc.beta = c.Phi0 - mc.alpha * nd.q / nd.r;

  const double r = nd.r, q2 = nd.q * nd.q;
  const double denom = (r * r - q2) * (r * r - 2.0 * nd.mu * r + q2);
  mc.alpha_komar = denom > 0.0 ? std::sqrt(3.0) * komar_mass(c) * r / std::sqrt(denom)
                               : std::numeric_limits<double>::infinity();
  mc.alpha_komar_residual = std::abs(mc.alpha_komar - mc.alpha) / mc.alpha;
  return mc;
}

NeckData make_neck_data(const PhotonSphereComponent& c, double tol) {
  const auto iv = neck_interval(c, tol);
  const auto mc = matching_constants(c, iv);
  return NeckData{iv.q, iv.mu, iv.s, iv.r, mc.alpha, mc.beta};
}

double mass_decomposition_check(const GlobalCharges& gc, const PhotonSphereComponent& c) {
  return std::abs(gc.M - gc.m - c.Phi0 * gc.Q);
}

double boundary_lapse_identity(const GlobalCharges& gc, const PhotonSphereComponent& c) {
  if (gc.Q == 0.0) {
    throw RefusalError("boundary lapse identity",
                       "identity divides by the total charge, which vanishes");
  }
  const double q2 = gc.Q * gc.Q;
  return std::abs(c.N0 * c.N0 - (q2 + gc.m * gc.m - gc.M * gc.M) / q2);
}

double functional_relation_check(const RadialProfile& profile, const GlobalCharges& gc, int points) {
  if (gc.Q == 0.0) {
    throw RefusalError("lapse-potential functional relation",
                       "relation is written with M/Q and needs nonzero total charge");
  }
  const double L = profile.length_scale();
  const double lo = profile.r_min() > 0.0 ? profile.r_min() * (1.0 + 1e-6) : 1e-3 * L;
  const double hi = std::min(profile.r_max(), 1e3 * std::max(L, lo));
  points = std::max(points, 2);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const auto s = profile.at(std::min(r, hi));
    const double cross = 2.0 * (gc.M / gc.Q) * s.phi;
    const double res = s.N * s.N - 1.0 - s.phi * s.phi + cross;
    const double scale = std::max({1.0, s.N * s.N, s.phi * s.phi, std::abs(cross)});
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

TrichotomyResult extremality_trichotomy(const GlobalCharges& gc, const PhotonSphereComponent& c,
                                        double tol) {
  if (gc.m == 0.0) throw RefusalError("extremality trichotomy", "Komar mass vanishes");
  TrichotomyResult t;
  const double hr = c.H * c.r;
  t.residual = std::abs(1.0 / (hr * hr) - 1.0 - (gc.Q * gc.Q - gc.M * gc.M) / (4.0 * gc.m * gc.m));
  t.from_charges = classify(RNParams{gc.M, gc.Q}, tol);
  t.from_component = classify_component(c, tol).by_mean_curvature;
  t.agree = t.from_charges == t.from_component;
  return t;
}

PhotonSphereComponent rn_component(const RNParams& p, double r) {
  const double f = rn_metric_function(p.M, p.Q, r);
  PhotonSphereComponent c;
  c.r = r;
  c.N0 = f;
  c.H = 2.0 * f / r;
  c.nuN = p.M / (r * r) - p.Q * p.Q / (r * r * r);  // f N' with N = f
  c.nuPhi = -f * p.Q / (r * r);
  c.Phi0 = p.Q / r;
  return c;
}

}  // namespace phcert
