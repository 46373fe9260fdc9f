#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "phcert/certifier.hpp"

namespace nlohmann {

template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) j = *v;
    else j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
  }
};

}  // namespace nlohmann

namespace phcert {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PhotonSphereComponent, r, N0, H, nuN, nuPhi, Phi0)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Tolerances, component, classification, electrovacuum, recovery,
                                   appendix, regularity, stencil_step, doubling_symmetry,
                                   doubling_derivative, curvature_identity, mass, flatness,
                                   compactification_exponent, compactification_coefficient,
                                   trapping, integrator, decay_exponent)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Check, name, relation, value, comparison, threshold, passed,
                                   diagnostic, detail)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Violation, check, relation, detail)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TrappingSummary, verdict, max_deviation,
                                   max_constraint_residual, termination)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NeckRecord, q, mu, s, r, alpha, beta, endpoint_residual,
                                   factorization_residual, alpha_footnote, alpha_footnote_residual)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ComponentRecord, component, q, mu, komar_mass,
                                   class_by_mean_curvature, class_by_radius, class_by_neck_mass,
                                   classes_consistent, valid, validation_diagnostic, trapping, neck,
                                   refusal)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ChannelRecord, channel, value_jump, derivative_jump)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LocusRecord, radius, channels, mean_curvature_inner,
                                   mean_curvature_outer, mean_curvature_jump, hessian_identity_jump,
                                   hessian_direct_residual, minimal_sphere_mean_curvature)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DoublingRecord, rho_h, symmetry_residual, derivative_jump,
                                   lapse_slope_residual)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PositivityRecord, interior_margin, boundary_margin,
                                   omega_plus_min, omega_minus_scaled_min, boundary_hr_above_one,
                                   boundary_charge_ratio_below_quarter)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CurvatureRecord, derivatives, max_identity_residual,
                                   min_identity, max_radial, max_tangential, worst_radius,
                                   worst_side, one_sided_loci)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MassRecord, extrapolated, decay_exponent, monotone, area_radii,
                                   masses)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CompactificationRecord, fitted_exponent, fitted_coefficient,
                                   predicted_exponent, predicted_coefficient, decreasing)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DecayRecord, lapse_exponent, potential_exponent)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CertificationReport, schema_version, source, profile_kind,
                                   tolerances, M, Q, charges_from, components, regularity, doubling,
                                   positivity, curvature, mass, compactification, decay,
                                   electrovacuum_residual, checks, violations, diagnostics, verdict)

void to_json(nlohmann::json& j, const BodyHypothesis& h);
void to_json(nlohmann::json& j, const NBodyVerdict& v);

/// Pretty-printed, keys sorted, trailing newline. Byte-identical for equal reports.
std::string emit_json(const CertificationReport& r);
CertificationReport parse_report(const std::string& text);

}  // namespace phcert
