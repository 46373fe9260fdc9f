#pragma once

#include <string>
#include <vector>

#include "phcert/radial_profile.hpp"
#include "phcert/surface_data.hpp"

namespace phcert {

enum class Side { plus, minus };

const char* to_string(Side s);

/// RN(mu, q) neck on [s, r] with lapse alpha f_{mu,q} and potential alpha q/r + beta.
/// Throws RefusalError unless mu^2 > q^2.
RadialProfile build_neck(const NeckData& nd, const PhotonSphereComponent& c);

/// One photon-sphere component with its neck glued in: neck on [s, r_c],
/// exterior on [r_c, r_max].
struct GluedBranch {
  PhotonSphereComponent component;
  NeckData neck;
  RadialProfile neck_profile;
  RadialProfile exterior;

  double locus() const noexcept { return neck.r; }
  double boundary() const noexcept { return neck.s; }
  double r_max() const noexcept { return exterior.r_max(); }

  /// Piece containing r; at the locus itself the exterior is used unless
  /// `inner` asks for the neck side.
  const RadialProfile& piece(double r, bool inner = false) const;
};

/// Doubled manifolds keep one copy of the data: the minus side is the
/// reflection with the lapse sign flipped and the potential unchanged.
struct GluedProfile {
  std::vector<GluedBranch> branches;
  bool doubled = false;

  /// Fields at area radius r on the given side of a branch, lapse signed.
  RadialSample at(std::size_t branch, Side side, double r, bool inner = false) const;
  std::vector<double> loci() const;
};

/// Throws AlignmentError when an exterior does not start at its component's
/// radius or a neck ends elsewhere (relative mismatch above 1e-12).
GluedProfile glue(const std::vector<RadialProfile>& exteriors,
                  const std::vector<PhotonSphereComponent>& components,
                  const std::vector<NeckData>& necks);

/// Same exterior for every component, restricted to start at each radius.
GluedProfile glue(const RadialProfile& exterior, const std::vector<PhotonSphereComponent>& components,
                  const std::vector<NeckData>& necks);

/// d/dpsi of g_psipsi = 1/nu(psi)^2 with psi = N, from -2 Hess psi(nu, nu) / nu(psi)^4.
double gpp_normal_derivative(const RadialSample& s);

/// Value and derivative jumps of one field across a gluing sphere. Jumps are
/// |a - b| / max(1, |a|, |b|).
struct ChannelJump {
  std::string channel;
  double value_jump = 0.0;
  double derivative_jump = 0.0;
};

struct LocusRegularity {
  double radius = 0.0;
  /// lapse (N, nu(N)), potential (Phi, nu(Phi)), induced_metric (r^2, d_psi r^2),
  /// g_psipsi (1/nu(psi)^2, d_psi g_psipsi), with psi the lapse.
  std::vector<ChannelJump> channels;
  double mean_curvature_inner = 0.0;
  double mean_curvature_outer = 0.0;
  double mean_curvature_jump = 0.0;
  bool mean_curvature_positive = false;
  /// Jump of nu(Phi)^2 / N - H nu(N), which equals Hess psi (nu, nu).
  double hessian_identity_jump = 0.0;
  /// Largest |Hess N(nu, nu) - (nu(Phi)^2/N - H nu(N))| over the two sides,
  /// relative; only sides with closed-form derivatives count.
  double hessian_direct_residual = 0.0;
  /// Mean curvature 2 f(s)/s of the minimal sphere bounding the neck.
  double minimal_sphere_mean_curvature = 0.0;

  double max_jump() const;
};

struct RegularityReport {
  double step = 0.0;
  std::vector<LocusRegularity> loci;
  double max_jump() const;
};

/// One-sided comparison across every gluing sphere. Closed-form pieces use
/// analytic derivatives; tabulated pieces use second-order one-sided
/// differences with step h (four points, up to 3h away). Throws StencilError
/// with the largest admissible step when a stencil would leave its piece.
RegularityReport check_C11(const GluedProfile& gp, double h);

/// Even/odd residuals of the doubled neck in the isotropic coordinate rho,
/// r = rho + mu + rho_h^2 / rho, rho_h = sqrt(mu^2 - q^2) / 2, reflection rho -> rho_h^2 / rho.
struct DoublingReport {
  double rho_h = 0.0;
  double boundary_metric_function = 0.0;  ///< 1 - 2 mu/s + q^2/s^2
  double area_radius_even = 0.0;
  double conformal_factor_inversion = 0.0;  ///< w(rho_h^2/rho) (rho_h/rho)^2 vs w(rho), w = r/rho
  double lapse_isotropic = 0.0;   ///< profile lapse vs alpha (1 - rho_h^2/rho^2) / w
  double lapse_odd = 0.0;
  double potential_even = 0.0;
  /// One-sided derivative jumps at rho_h of the signed lapse, potential and w.
  double lapse_derivative_jump = 0.0;
  double potential_derivative_jump = 0.0;
  double conformal_factor_derivative_jump = 0.0;
  double lapse_slope_residual = 0.0;  ///< |dN/drho(rho_h) - 2 alpha / s|, relative
  double step = 0.0;

  double max_symmetry_residual() const;
  double max_derivative_jump() const;
};

struct DoubledProfile {
  GluedProfile profile;
  std::vector<DoublingReport> reports;
};

/// Throws RefusalError when the neck lapse does not vanish at s (|f^2(s)| > 1e-12)
/// or rho_h = 0.
DoubledProfile double_across_boundary(const GluedProfile& gp, int samples = 200);

}  // namespace phcert
