#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phcert/conformal_engine.hpp"
#include "phcert/geodesic_engine.hpp"
#include "phcert/gluing_engine.hpp"
#include "phcert/radial_profile.hpp"
#include "phcert/rn_model.hpp"
#include "phcert/surface_data.hpp"

namespace phcert {

inline constexpr int kSpecSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

/// Every numerical threshold the certifier uses. Printed in the report header.
struct Tolerances {
  double component = 1e-8;             ///< photon-sphere constant relations
  double classification = 1e-10;       ///< H r - 1 and friends
  double electrovacuum = 1e-9;         ///< r^2-scaled field-equation residuals
  double recovery = 1e-9;              ///< (mu, q) against (M, Q), relative to max(1, M)
  double appendix = 1e-10;             ///< mass decomposition, boundary lapse, trichotomy
  double regularity = 1e-9;            ///< gluing jumps
  double stencil_step = 1e-4;          ///< one-sided step on tabulated pieces
  double doubling_symmetry = 1e-9;
  double doubling_derivative = 1e-5;   ///< one-sided slopes at the minimal sphere
  double curvature_identity = 1e-8;
  double mass = 1e-6;                  ///< |m_hat| / M
  double flatness = 1e-7;
  double compactification_exponent = 0.05;
  double compactification_coefficient = 1e-3;  ///< relative
  double trapping = 1e-6;              ///< relative radial band
  double integrator = 1e-12;
  double decay_exponent = 1.5;         ///< fitted decay must exceed this
  bool operator==(const Tolerances&) const = default;
};

Tolerances default_tolerances(ProfileKind kind);

struct Perturbation {
  PerturbedField field = PerturbedField::N;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// Non-degenerate horizon boundary counted by the n-body check.
struct BlackHoleRecord {
  std::string label;
  double surface_gravity = 0.0;
};

struct SpacetimeSpec {
  int schema_version = kSpecSchemaVersion;
  std::optional<RNParams> rn;
  std::optional<std::filesystem::path> table;
  std::string label;
  std::optional<Perturbation> perturbation;
  bool derive = true;  ///< components "derive": detect photon spheres on the profile
  std::vector<PhotonSphereComponent> components;
  std::vector<BlackHoleRecord> black_holes;
  std::optional<double> mass_override;    ///< M, Q for tabulated sources when known
  std::optional<double> charge_override;
  Tolerances tolerances;
  GridOptions grid;
  std::optional<double> decay_threshold;  ///< decay exponent the tail must beat
};

/// Schema errors throw ParseError naming the offending field.
SpacetimeSpec parse_spec(const std::string& json_text, const std::filesystem::path& base_dir = ".");
SpacetimeSpec load_spec(const std::filesystem::path& path);

/// Closed-form or tabulated profile, with the optional perturbation applied.
RadialProfile build_profile(const SpacetimeSpec& spec);

/// Detects circular null orbits and reads off the photon-sphere constants:
/// N0 = N, H = 2 f / r, nuN = f N', nuPhi = f Phi', Phi0 = Phi.
std::vector<PhotonSphereComponent> derive_components(const RadialProfile& profile,
                                                     std::string* diagnostic = nullptr);

/// Search bracket used by derive_components.
std::pair<double, double> orbit_bracket(const RadialProfile& profile);

/// One machine-checkable line of the report. `comparison` is "<" (value below
/// the threshold) or ">" (value above it). Diagnostics never affect the verdict.
struct Check {
  std::string name;
  std::string relation;
  double value = 0.0;
  std::string comparison = "<";
  double threshold = 0.0;
  bool passed = false;
  bool diagnostic = false;
  std::string detail;
  bool operator==(const Check&) const = default;
};

struct Violation {
  std::string check;
  std::string relation;
  std::string detail;
  bool operator==(const Violation&) const = default;
};

struct TrappingSummary {
  std::string verdict;
  double max_deviation = 0.0;
  double max_constraint_residual = 0.0;
  std::string termination;
  bool operator==(const TrappingSummary&) const = default;
};

struct NeckRecord {
  double q = 0.0, mu = 0.0, s = 0.0, r = 0.0, alpha = 1.0, beta = 0.0;
  double endpoint_residual = 0.0;
  double factorization_residual = 0.0;
  double alpha_footnote = 0.0;
  double alpha_footnote_residual = 0.0;
  bool operator==(const NeckRecord&) const = default;
};

struct ComponentRecord {
  PhotonSphereComponent component;
  double q = 0.0;
  double mu = 0.0;
  double komar_mass = 0.0;
  std::string class_by_mean_curvature;
  std::string class_by_radius;
  std::string class_by_neck_mass;
  bool classes_consistent = true;
  bool valid = false;
  std::string validation_diagnostic;
  std::optional<TrappingSummary> trapping;
  std::optional<NeckRecord> neck;
  std::optional<std::string> refusal;
  bool operator==(const ComponentRecord&) const = default;
};

struct ChannelRecord {
  std::string channel;
  double value_jump = 0.0;
  double derivative_jump = 0.0;
  bool operator==(const ChannelRecord&) const = default;
};

struct LocusRecord {
  double radius = 0.0;
  std::vector<ChannelRecord> channels;
  double mean_curvature_inner = 0.0;
  double mean_curvature_outer = 0.0;
  double mean_curvature_jump = 0.0;
  double hessian_identity_jump = 0.0;
  double hessian_direct_residual = 0.0;
  double minimal_sphere_mean_curvature = 0.0;
  bool operator==(const LocusRecord&) const = default;
};

struct DoublingRecord {
  double rho_h = 0.0;
  double symmetry_residual = 0.0;
  double derivative_jump = 0.0;
  double lapse_slope_residual = 0.0;
  bool operator==(const DoublingRecord&) const = default;
};

struct PositivityRecord {
  double interior_margin = 0.0;
  double boundary_margin = 0.0;
  double omega_plus_min = 0.0;
  double omega_minus_scaled_min = 0.0;
  bool boundary_hr_above_one = false;
  bool boundary_charge_ratio_below_quarter = false;
  bool operator==(const PositivityRecord&) const = default;
};

struct CurvatureRecord {
  std::string derivatives;
  double max_identity_residual = 0.0;
  double min_identity = 0.0;
  double max_radial = 0.0;
  double max_tangential = 0.0;
  double worst_radius = 0.0;
  std::string worst_side;
  std::vector<double> one_sided_loci;
  bool operator==(const CurvatureRecord&) const = default;
};

struct MassRecord {
  double extrapolated = 0.0;
  std::optional<double> decay_exponent;
  bool monotone = true;
  std::vector<double> area_radii;
  std::vector<double> masses;
  bool operator==(const MassRecord&) const = default;
};

struct CompactificationRecord {
  double fitted_exponent = 0.0;
  double fitted_coefficient = 0.0;
  double predicted_exponent = -1.0;
  double predicted_coefficient = 0.0;
  bool decreasing = true;
  bool operator==(const CompactificationRecord&) const = default;
};

struct DecayRecord {
  std::optional<double> lapse_exponent;      ///< absent when below round-off on the tail
  std::optional<double> potential_exponent;
  bool operator==(const DecayRecord&) const = default;
};

struct CertificationReport {
  int schema_version = kReportSchemaVersion;
  std::string source;
  std::string profile_kind;
  Tolerances tolerances;
  double M = 0.0;
  double Q = 0.0;
  std::string charges_from;  ///< "spec" or "tail"
  std::vector<ComponentRecord> components;
  std::vector<LocusRecord> regularity;
  std::vector<DoublingRecord> doubling;
  std::optional<PositivityRecord> positivity;
  std::optional<CurvatureRecord> curvature;
  std::optional<MassRecord> mass;
  std::optional<CompactificationRecord> compactification;
  std::optional<DecayRecord> decay;
  double electrovacuum_residual = 0.0;
  std::vector<Check> checks;
  std::vector<Violation> violations;
  std::vector<std::string> diagnostics;
  std::string verdict;

  bool consistent() const { return violations.empty(); }
  bool operator==(const CertificationReport&) const = default;
};

CertificationReport certify(const SpacetimeSpec& spec);

struct BodyHypothesis {
  std::size_t index = 0;
  bool valid = false;
  std::string extremality;
  bool passed = false;
  std::string reason;
};

struct NBodyVerdict {
  std::size_t bodies = 0;
  std::size_t black_holes = 0;
  std::vector<BodyHypothesis> hypotheses;
  bool excluded = false;
  bool hypothesis_failure = false;
  std::string verdict;
  std::string reason;
};

/// Static equilibria of k bodies, each inside its own sub-extremal photon
/// sphere, together with n non-degenerate black holes: excluded when k + n > 1.
NBodyVerdict nbody_check(const SpacetimeSpec& spec);

}  // namespace phcert
