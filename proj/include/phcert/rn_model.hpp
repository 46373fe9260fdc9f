#pragma once

#include <optional>
#include <vector>

#include "phcert/radial_profile.hpp"

namespace phcert {

/// Mass and charge of a Reissner-Nordström solution, geometric units.
struct RNParams {
  double M = 0.0;
  double Q = 0.0;
};

enum class ExtremalityClass { sub_extremal, extremal, super_extremal };

const char* to_string(ExtremalityClass c);

/// |Q^2 - M^2| <= kExtremalTolerance * max(1, M^2) counts as extremal.
inline constexpr double kExtremalTolerance = 1e-12;

ExtremalityClass classify(const RNParams& p, double tol = kExtremalTolerance);

/// Outer horizon M + sqrt(M^2 - Q^2); absent for naked singularities and
/// whenever that value is not positive.
std::optional<double> horizon_radius(const RNParams& p);

/// Exterior roots of r^2 - 3 M r + 2 Q^2 = 0, largest first. Only r+ when
/// Q^2 <= M^2 (r- sits at or inside the horizon), both roots for
/// M^2 < Q^2 < 9 M^2 / 8, the double root 3M/2 when 8 Q^2 = 9 M^2, none
/// beyond. Non-positive roots are dropped.
std::vector<double> photon_sphere_radii(const RNParams& p);

/// Closed-form RN in area-radius gauge: f = N, Phi = Q / r. Domain starts at
/// the horizon when there is one, at 0 otherwise.
RadialProfile rn_profile(const RNParams& p);

/// RN(mass, charge) metric with rescaled fields N = alpha f, Phi = alpha q / r + beta
/// on [r_lo, r_hi]. The electro-vacuum equations are invariant under this rescaling.
RadialProfile rescaled_rn_profile(double mass, double charge, double alpha, double beta,
                                  double r_lo, double r_hi);

/// sqrt(1 - 2 mass / r + charge^2 / r^2), factored through the horizons when
/// they exist so it vanishes exactly at the outer one.
double rn_metric_function(double mass, double charge, double r);

}  // namespace phcert
