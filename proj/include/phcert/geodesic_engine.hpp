#pragma once

#include <iosfwd>
#include <vector>

#include "phcert/radial_profile.hpp"

namespace phcert {

/// Equatorial null geodesic. p_r = dr/dlambda, E = N^2 dt/dlambda and
/// L = r^2 dphi/dlambda are the conserved Killing quantities.
struct NullGeodesicState {
  double r = 0.0;
  double phi = 0.0;
  double p_r = 0.0;
  double E = 0.0;
  double L = 0.0;
};

struct GeodesicDerivative {
  double dr = 0.0;
  double dp_r = 0.0;
  double dphi = 0.0;
};

/// Geodesic equations for g = -N^2 dt^2 + f^-2 dr^2 + r^2 dOmega^2:
///   r'' = (f'/f) r'^2 + f^2 (L^2 / r^3 - E^2 N' / N^3),  phi' = L / r^2.
GeodesicDerivative radial_rhs(const RadialProfile& profile, const NullGeodesicState& s);

/// -E^2/N^2 + p_r^2/f^2 + L^2/r^2 divided by the sum of the magnitudes of its terms.
double null_constraint_residual(const RadialProfile& profile, const NullGeodesicState& s);

/// Roots of d/dr (N^2 / r^2) inside [lo, hi], largest first. Sign changes on a
/// logarithmic scan are refined with TOMS 748; touching (double) roots are
/// picked up by minimising |slope| where the scan shows a dip without a sign change.
std::vector<double> find_circular_null_orbits(const RadialProfile& profile, double lo, double hi,
                                              int scan_points = 4000);

enum class Termination { lambda_max, domain_exit, horizon_approach, step_underflow };

const char* to_string(Termination t);

struct TrajectoryPoint {
  double lambda = 0.0;
  double r = 0.0;
  double phi = 0.0;
  double p_r = 0.0;
  double constraint_residual = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  double E = 0.0;
  double L = 0.0;
  Termination termination = Termination::lambda_max;
};

struct IntegratorOptions {
  double lapse_floor = 1e-10;   ///< stop once N drops below this
  double min_step = 1e-14;      ///< relative to the current radius
  double max_step = 0.0;        ///< 0: lambda_max / 200
};

/// Adaptive Dormand-Prince 5(4) integration from `initial` up to affine
/// parameter lambda_max, with absolute and relative tolerance `tol`.
Trajectory integrate_null_geodesic(const RadialProfile& profile, const NullGeodesicState& initial,
                                   double lambda_max, double tol,
                                   const IntegratorOptions& opts = {});

/// State at r0 with p_r = 0 on the null cone. L is chosen so that a circular
/// orbit sweeps `sweep_radians` over lambda_max; E = L N(r0) / r0.
NullGeodesicState tangent_launch(const RadialProfile& profile, double r0, double lambda_max,
                                 double sweep_radians);

enum class TrappingVerdict { trapped, escaped, plunged };

const char* to_string(TrappingVerdict v);

struct TrappingOptions {
  double relative_tolerance = 1e-6;  ///< trapped iff sup |r - r0| < this * r0
  double sweep_radians = 10.0;       ///< angle a circular orbit covers over lambda_max
};

struct TrappingReport {
  double r0 = 0.0;
  double max_deviation = 0.0;
  double affine_length = 0.0;
  double max_constraint_residual = 0.0;
  TrappingVerdict verdict = TrappingVerdict::escaped;
  Termination termination = Termination::lambda_max;
};

/// Launches tangentially at r0 and watches the radius. Not trapped means the
/// orbit left the band; escaped/plunged records the direction it left in first.
///
/// Circular photon orbits are unstable, so the affine length, integrator
/// tolerance and sweep angle go together: a 10 radian sweep amplifies a
/// 1e-12 error by roughly e^10 around an RN outer photon sphere, which keeps
/// the true orbit inside the 1e-6 band.
TrappingReport trapping_test(const RadialProfile& profile, double r0, double lambda_max,
                             double tol, const TrappingOptions& opts = {});

/// Columns: lambda,r,phi,p_r,constraint_residual
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

}  // namespace phcert
