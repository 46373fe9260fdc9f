#include "phcert/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "phcert/errors.hpp"

namespace phcert {

const char* to_string(ProfileKind kind) {
  return kind == ProfileKind::closed_form ? "closed_form" : "tabulated";
}

RadialProfile::RadialProfile(double r_min, double r_max, ProfileKind kind, Evaluator eval,
                             std::string label, double length_scale)
    : r_min_(r_min),
      r_max_(r_max),
      kind_(kind),
      eval_(std::move(eval)),
      label_(std::move(label)),
      length_scale_(length_scale > 0.0 ? length_scale : 1.0) {
  if (!(r_min >= 0.0) || !(r_max > r_min)) {
    throw InvalidInput("radial profile needs 0 <= r_min < r_max");
  }
}

RadialSample RadialProfile::at(double r) const {
  if (!contains(r)) {
    std::ostringstream os;
    os.precision(17);
    os << "radius " << r << " outside profile '" << label_ << "' domain [" << r_min_ << ", "
       << r_max_ << "]";
    throw DomainError(os.str());
  }
  return eval_(r);
}

RadialProfile RadialProfile::restricted(double r_lo, double r_hi) const {
  const double lo = std::max(r_lo, r_min_);
  const double hi = std::min(r_hi, r_max_);
  return RadialProfile(lo, hi, kind_, eval_, label_, length_scale_);
}

RadialProfile flat_profile() {
  return RadialProfile(
      0.0, kInfinity, ProfileKind::closed_form,
      [](double r) {
        RadialSample s;
        s.r = r;
        s.f = 1.0;
        s.N = 1.0;
        return s;
      },
      "flat");
}

RadialProfile perturbed(const RadialProfile& base, PerturbedField field, double amplitude,
                        double center, double width) {
  auto eval = [base, field, amplitude, center, width](double r) {
    RadialSample s = base.at(r);
    const double x = (r - center) / width;
    const double g = std::exp(-x * x);
    const double b = 1.0 + amplitude * g;
    const double db = amplitude * g * (-2.0 * x / width);
    const double d2b = amplitude * g * (4.0 * x * x - 2.0) / (width * width);
    auto apply = [&](double& u, double& du, double& d2u) {
      const double u0 = u, du0 = du, d2u0 = d2u;
      u = u0 * b;
      du = du0 * b + u0 * db;
      d2u = d2u0 * b + 2.0 * du0 * db + u0 * d2b;
    };
    switch (field) {
      case PerturbedField::f: apply(s.f, s.df, s.d2f); break;
      case PerturbedField::N: apply(s.N, s.dN, s.d2N); break;
      case PerturbedField::phi: apply(s.phi, s.dphi, s.d2phi); break;
    }
    return s;
  };
  return RadialProfile(base.r_min(), base.r_max(), base.kind(), std::move(eval),
                       base.label() + "+bump", base.length_scale());
}

double ElectroVacuumResidual::max_abs() const {
  return std::max({std::abs(maxwell), std::abs(lapse), std::abs(ricci_normal),
                   std::abs(ricci_tangential), std::abs(scalar_curvature)});
}

double scalar_curvature(const RadialSample& s) {
  const double r = s.r;
  return -4.0 * s.f * s.df / r + 2.0 * (1.0 - s.f * s.f) / (r * r);
}

ElectroVacuumResidual electrovacuum_residual(const RadialSample& s) {
  const double r = s.r, f = s.f, N = s.N;
  const double f2 = f * f;
  const double dphi2 = f2 * s.dphi * s.dphi;  // |dPhi|^2

  ElectroVacuumResidual out;
  // (f/r^2) d/dr (r^2 f Phi' / N)
  out.maxwell = (f / (r * r)) *
                (2.0 * r * f * s.dphi / N + r * r * s.df * s.dphi / N + r * r * f * s.d2phi / N -
                 r * r * f * s.dphi * s.dN / (N * N));
  const double laplace_N = 2.0 * f2 * s.dN / r + f * s.df * s.dN + f2 * s.d2N;
  out.lapse = laplace_N - dphi2 / N;

  const double ric_nn = -2.0 * f * s.df / r;
  const double ric_tt = -f * s.df / r + (1.0 - f2) / (r * r);
  const double hess_nn = f * s.df * s.dN + f2 * s.d2N;
  const double hess_tt = f2 * s.dN / r;
  out.ricci_normal = N * ric_nn - hess_nn - (dphi2 - 2.0 * dphi2) / N;
  out.ricci_tangential = N * ric_tt - hess_tt - dphi2 / N;
  out.scalar_curvature = scalar_curvature(s) - 2.0 * dphi2 / (N * N);
  return out;
}

double effective_potential_slope(const RadialSample& s) {
  const double r = s.r;
  return 2.0 * s.N * s.dN / (r * r) - 2.0 * s.N * s.N / (r * r * r);
}

}  // namespace phcert
