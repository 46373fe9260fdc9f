#pragma once

#include <string>

#include "phcert/radial_profile.hpp"
#include "phcert/rn_model.hpp"

namespace phcert {

/// Constants carried by one connected photon-sphere component: area radius,
/// lapse, outward mean curvature, normal derivatives of lapse and potential,
/// and the potential itself.
struct PhotonSphereComponent {
  double r = 0.0;
  double N0 = 0.0;
  double H = 0.0;
  double nuN = 0.0;
  double nuPhi = 0.0;
  double Phi0 = 0.0;
  bool operator==(const PhotonSphereComponent&) const = default;
};

inline constexpr double kComponentTolerance = 1e-8;
inline constexpr double kClassificationTolerance = 1e-10;

struct ComponentValidation {
  /// r^2 ((3/2) H^2 + 2 (nuPhi/N0)^2) - 2: the induced sphere is round with area radius r.
  double scalar_curvature_residual = 0.0;
  /// r (N0 H - 2 nuN) / N0
  double lapse_relation_residual = 0.0;
  /// 4/3 - r^2 H^2 - (4/3) (r nuPhi / N0)^2
  double constraint_residual = 0.0;
  bool mean_curvature_positive = false;
  bool torus_branch = false;  ///< H = nuPhi = 0: the flat-torus alternative
  bool passed = false;
  std::string diagnostic;
};

/// Throws InvalidInput for r <= 0 or N0 <= 0. Non-positive H fails the
/// verdict; H = nuPhi = 0 gets the torus diagnostic.
ComponentValidation validate_component(const PhotonSphereComponent& c,
                                       double tol = kComponentTolerance);

/// q = -nuPhi r^2 / N0
double charge(const PhotonSphereComponent& c);

/// mu = r/3 + 2 q^2 / (3 r)
double neck_mass(const PhotonSphereComponent& c);

/// |mu^2 - q^2 - (r^2 - q^2)(r^2 - 4 q^2) / (9 r^2)|, relative to mu^2.
double neck_mass_factorization_residual(const PhotonSphereComponent& c);

/// m = r^2 nuN
double komar_mass(const PhotonSphereComponent& c);

struct ComponentClassification {
  ExtremalityClass by_mean_curvature = ExtremalityClass::sub_extremal;  ///< H r vs 1
  ExtremalityClass by_radius = ExtremalityClass::sub_extremal;          ///< r^2 vs 4 q^2
  ExtremalityClass by_neck_mass = ExtremalityClass::sub_extremal;       ///< mu^2 vs q^2
  double hr_minus_one = 0.0;
  bool consistent = true;
};

ComponentClassification classify_component(const PhotonSphereComponent& c,
                                           double tol = kClassificationTolerance);

/// Charge, mass and horizon of the RN neck that fills in a sub-extremal component.
struct NeckInterval {
  double q = 0.0;
  double mu = 0.0;
  double s = 0.0;  ///< mu + sqrt(mu^2 - q^2)
  double r = 0.0;  ///< the component's area radius
  /// |r - (3 mu / 2 + sqrt(9 mu^2 - 8 q^2) / 2)| / r
  double endpoint_residual = 0.0;
};

/// Throws RefusalError unless the component is sub-extremal.
NeckInterval neck_interval(const PhotonSphereComponent& c, double tol = kClassificationTolerance);

struct MatchingConstants {
  double alpha = 1.0;  ///< N0 / f_{mu,q}(r)
  double beta = 0.0;   ///< Phi0 - alpha q / r
  /// sqrt(3) m r / sqrt((r^2 - q^2)(r^2 - 2 mu r + q^2)) with m the Komar mass
  double alpha_komar = 1.0;
  double alpha_komar_residual = 0.0;  ///< relative
};

/// Throws RefusalError when f_{mu,q}(r) vanishes.
MatchingConstants matching_constants(const PhotonSphereComponent& c, const NeckInterval& nd);

struct NeckData {
  double q = 0.0, mu = 0.0, s = 0.0, r = 0.0;
  double alpha = 1.0, beta = 0.0;
};

NeckData make_neck_data(const PhotonSphereComponent& c, double tol = kClassificationTolerance);

/// Total mass, total charge and Komar mass of the inner boundary.
struct GlobalCharges {
  double M = 0.0;
  double Q = 0.0;
  double m = 0.0;
};

/// |M - m - Phi0 Q|, valid for a single boundary component.
double mass_decomposition_check(const GlobalCharges& gc, const PhotonSphereComponent& c);

/// |N0^2 - (Q^2 + m^2 - M^2) / Q^2|. Refuses when Q = 0.
double boundary_lapse_identity(const GlobalCharges& gc, const PhotonSphereComponent& c);

/// max over a logarithmic grid on the profile of |N^2 - 1 - Phi^2 + 2 (M/Q) Phi|,
/// each term scaled by the largest of 1 and the magnitudes of its terms.
/// Refuses when Q = 0.
double functional_relation_check(const RadialProfile& profile, const GlobalCharges& gc,
                                 int points = 200);

struct TrichotomyResult {
  double residual = 0.0;  ///< |1/(H r)^2 - 1 - (Q^2 - M^2) / (4 m^2)|
  ExtremalityClass from_charges = ExtremalityClass::sub_extremal;
  ExtremalityClass from_component = ExtremalityClass::sub_extremal;
  bool agree = true;
};

/// Refuses when m = 0.
TrichotomyResult extremality_trichotomy(const GlobalCharges& gc, const PhotonSphereComponent& c,
                                        double tol = kClassificationTolerance);

/// Photon-sphere constants read off an RN solution at radius r.
PhotonSphereComponent rn_component(const RNParams& p, double r);

}  // namespace phcert
