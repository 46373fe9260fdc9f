#include "phcert/rn_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phcert {

namespace {

double extremal_scale(double M) { return std::max(1.0, M * M); }

RadialSample rn_sample(double mass, double charge, double alpha, double beta, double r) {
  const double q2 = charge * charge;
  const double F1 = 2.0 * mass / (r * r) - 2.0 * q2 / (r * r * r);        // (f^2)'
  const double F2 = -4.0 * mass / (r * r * r) + 6.0 * q2 / (r * r * r * r);  // (f^2)''
  RadialSample s;
  s.r = r;
  s.f = rn_metric_function(mass, charge, r);
  s.df = F1 / (2.0 * s.f);
  s.d2f = F2 / (2.0 * s.f) - F1 * F1 / (4.0 * s.f * s.f * s.f);
  s.N = alpha * s.f;
  s.dN = alpha * s.df;
  s.d2N = alpha * s.d2f;
  s.phi = alpha * charge / r + beta;
  s.dphi = -alpha * charge / (r * r);
  s.d2phi = 2.0 * alpha * charge / (r * r * r);
  return s;
}

}  // namespace

const char* to_string(ExtremalityClass c) {
  switch (c) {
    case ExtremalityClass::sub_extremal: return "sub_extremal";
    case ExtremalityClass::extremal: return "extremal";
    case ExtremalityClass::super_extremal: return "super_extremal";
  }
  return "?";
}

ExtremalityClass classify(const RNParams& p, double tol) {
  const double d = p.Q * p.Q - p.M * p.M;
  if (std::abs(d) <= tol * extremal_scale(p.M)) return ExtremalityClass::extremal;
  return d < 0.0 ? ExtremalityClass::sub_extremal : ExtremalityClass::super_extremal;
}

std::optional<double> horizon_radius(const RNParams& p) {
  const auto cls = classify(p);
  if (cls == ExtremalityClass::super_extremal) return std::nullopt;
  const double disc = std::max(0.0, p.M * p.M - p.Q * p.Q);
  const double R = cls == ExtremalityClass::extremal ? p.M : p.M + std::sqrt(disc);
  if (!(R > 0.0)) return std::nullopt;
  return R;
}

std::vector<double> photon_sphere_radii(const RNParams& p) {
  const double M = p.M, q2 = p.Q * p.Q;
  const double disc = 9.0 * M * M - 8.0 * q2;
  std::vector<double> out;
  if (std::abs(disc) <= kExtremalTolerance * extremal_scale(M)) {
    if (1.5 * M > 0.0) out.push_back(1.5 * M);
    return out;
  }
  if (disc < 0.0) return out;
  const double r_plus = 1.5 * M + 0.5 * std::sqrt(disc);
  if (!(r_plus > 0.0)) return out;
  out.push_back(r_plus);
  if (classify(p) == ExtremalityClass::super_extremal) {
    // Vieta: r+ r- = 2 Q^2, avoids the cancellation in 3M/2 - sqrt(...)/2.
    const double r_minus = 2.0 * q2 / r_plus;
    if (r_minus > 0.0) out.push_back(r_minus);
  }
  return out;
}

double rn_metric_function(double mass, double charge, double r) {
  const double q2 = charge * charge;
  const double disc = mass * mass - q2;
  if (mass > 0.0 && disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double r_plus = mass + root;
    const double r_minus = q2 / r_plus;
    const double prod = (r - r_plus) * (r - r_minus);
    return std::sqrt(std::max(0.0, prod)) / r;
  }
  return std::sqrt(std::max(0.0, 1.0 - 2.0 * mass / r + q2 / (r * r)));
}

RadialProfile rn_profile(const RNParams& p) {
  const double r_min = horizon_radius(p).value_or(0.0);
  std::ostringstream label;
  label << "RN(M=" << p.M << ", Q=" << p.Q << ")";
  const double scale = std::max(std::abs(p.M), std::abs(p.Q));
  return RadialProfile(
      r_min, kInfinity, ProfileKind::closed_form,
      [M = p.M, Q = p.Q](double r) { return rn_sample(M, Q, 1.0, 0.0, r); }, label.str(), scale);
}

RadialProfile rescaled_rn_profile(double mass, double charge, double alpha, double beta,
                                  double r_lo, double r_hi) {
  std::ostringstream label;
  label << "RN-neck(mu=" << mass << ", q=" << charge << ", alpha=" << alpha << ", beta=" << beta
        << ")";
  return RadialProfile(
      r_lo, r_hi, ProfileKind::closed_form,
      [=](double r) { return rn_sample(mass, charge, alpha, beta, r); }, label.str(),
      std::max(std::abs(mass), std::abs(charge)));
}

}  // namespace phcert
