#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phcert/gluing_engine.hpp"
#include "phcert/radial_profile.hpp"
#include "phcert/surface_data.hpp"

namespace phcert {

/// Omega = ((1 + N)^2 - Phi^2) / 4 with the signed lapse.
double conformal_factor(double signed_lapse, double phi);
double conformal_factor(const GluedProfile& gp, Side side, double r, std::size_t branch = 0,
                        bool inner = false);

/// Radii at which doubled-profile sweeps are evaluated.
struct GridOptions {
  int points_per_piece = 200;
  double outer_radius_factor = 1e3;  ///< exterior sweep ends at min(r_max, factor * locus)
  double clearance = 1e-6;           ///< relative distance kept from s and from the locus
};

struct GridPoint {
  double r = 0.0;
  bool inner = false;  ///< evaluate on the neck side
};

/// Neck radii clustered toward both ends, exterior radii log-spaced with
/// extra points near the locus. s and the locus are excluded.
std::vector<GridPoint> branch_grid(const GluedBranch& b, const GridOptions& opts);

/// Sign test at a photon-sphere component: nu(N) +- nu(Phi) = H N0 / 2 +- nuPhi,
/// scaled by r. Both are positive iff q^2 / r^2 < 1/4 iff H^2 r^2 > 1.
struct BoundarySignTest {
  double radius = 0.0;
  double margin_plus = 0.0;   ///< r (H N0 / 2 + nuPhi)
  double margin_minus = 0.0;  ///< r (H N0 / 2 - nuPhi)
  bool hr_above_one = false;
  bool charge_ratio_below_quarter = false;
  bool passed = false;
  double margin() const { return std::min(margin_plus, margin_minus); }
};

BoundarySignTest boundary_sign_test(const PhotonSphereComponent& c);

struct PositivityReport {
  /// min over the plus-side grid of (1 - N - |Phi|) r / L, L the locus radius;
  /// positive iff N - 1 +- Phi < 0 everywhere.
  double interior_margin = 0.0;
  double interior_margin_radius = 0.0;
  std::vector<BoundarySignTest> boundary;
  double omega_plus_min = 0.0;
  /// min over the minus-side grid of Omega (r / L)^2; Omega decays like r^-2 there.
  double omega_minus_scaled_min = 0.0;
  bool strict = false;
  std::vector<std::string> diagnostics;
};

/// Requires a doubled profile.
PositivityReport positivity_check(const GluedProfile& gp, const GridOptions& opts = {});

/// Interior margin only, for a bare profile on the given radii. Zero margin
/// (e.g. N = 1, Phi = 0) is reported as non-strict.
PositivityReport positivity_check(const RadialProfile& profile, const std::vector<double>& radii);

enum class DerivativeMode { analytic, central_difference };

const char* to_string(DerivativeMode m);

/// Curvature of g_hat = Omega^2 (f^-2 dr^2 + r^2 dOmega^2) at one radius.
/// With l the g_hat arclength and R = Omega r the g_hat area radius:
///   K_radial = -R_ll / R, K_tangential = (1 - R_l^2) / R^2,
///   R_hat = 4 K_radial + 2 K_tangential.
struct ConformalCurvature {
  double r = 0.0;
  double omega = 0.0;
  double area_radius = 0.0;  ///< R
  double R_hat_identity = 0.0;
  double R_hat_direct = 0.0;
  double K_radial = 0.0;
  double K_tangential = 0.0;
  double mass = 0.0;  ///< (R / 2)(1 - R_l^2)

  /// R^2 |R_hat_identity - R_hat_direct| / max(1, R^2 |R_hat_identity|)
  double identity_residual() const;
  /// max(R^2 |K_radial|, R^2 |K_tangential|)
  double flatness_residual() const;
};

/// From a single sample with analytic derivatives. The identity side is
///   (Omega^4 / 2) R_hat = |(1 - N^2 - Phi^2) dPhi + 2 Phi N dN|^2 / (4 N)^2.
/// `unit_factor` replaces Omega by 1. Throws RefusalError at N = 0.
ConformalCurvature conformal_curvature(const RadialSample& s, bool unit_factor = false);

/// Direct curvature from central differences of Omega and f (step h, same piece).
ConformalCurvature scalar_curvature_hat(const GluedProfile& gp, Side side, double r,
                                        DerivativeMode mode = DerivativeMode::analytic,
                                        double h = 1e-4, std::size_t branch = 0,
                                        bool inner = false);

struct CurvatureSweep {
  std::vector<ConformalCurvature> plus, minus;
  double max_identity_residual = 0.0;
  double min_identity = 0.0;
  double max_radial = 0.0;      ///< R^2 |K_radial|
  double max_tangential = 0.0;  ///< R^2 |K_tangential|
  double worst_radius = 0.0;
  Side worst_side = Side::plus;
  std::vector<double> loci;     ///< curvature there is one-sided only
};

CurvatureSweep curvature_sweep(const GluedProfile& gp, const GridOptions& opts = {},
                               DerivativeMode mode = DerivativeMode::analytic, double h = 1e-4);

struct FlatnessReport {
  double max_radial = 0.0;
  double max_tangential = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  double worst_radius = 0.0;
  Side worst_side = Side::plus;
  bool flat = false;
};

FlatnessReport flatness_check(const CurvatureSweep& sweep, double tol);
FlatnessReport flatness_check(const GluedProfile& gp, double tol, const GridOptions& opts = {},
                              DerivativeMode mode = DerivativeMode::analytic, double h = 1e-4);
/// Bare profile, Omega = 1 when `unit_factor`.
FlatnessReport flatness_check(const RadialProfile& profile, const std::vector<double>& radii,
                              double tol, bool unit_factor);

struct MassOptions {
  bool unit_factor = false;  ///< Omega = 1: plain quasi-local mass of the input
  int levels = 12;           ///< radii r_start * 2^k
  double r_start = 0.0;      ///< 0: ten times the length scale, or r_max / 2^(levels-1)
};

struct MassReport {
  std::vector<double> radii, area_radii, masses;
  double extrapolated = 0.0;  ///< two Richardson levels in 1/r
  std::optional<double> decay_exponent;  ///< fit of |m_hat - limit| against r_hat
  bool monotone = true;
  std::string diagnostic;
};

/// Quasi-local mass of g_hat on the plus-side tail of the profile.
MassReport adm_mass_hat(const RadialProfile& exterior, const MassOptions& opts = {});
MassReport adm_mass_hat(const GluedProfile& gp, std::size_t branch = 0, const MassOptions& opts = {});

struct CompactificationReport {
  std::vector<double> radii, area_radii;
  double fitted_exponent = 0.0;
  double fitted_coefficient = 0.0;     ///< lim r * r_hat
  double predicted_exponent = -1.0;
  double predicted_coefficient = 0.0;  ///< (M^2 - Q^2) / 4
  bool decreasing = true;
};

/// On the minus side r_hat = Omega r with Omega ~ (M^2 - Q^2) / (4 r^2).
/// Refuses when M^2 = Q^2.
CompactificationReport minus_end_compactification_check(const RadialProfile& exterior, double M,
                                                        double Q, int levels = 12);

}  // namespace phcert
