#pragma once

#include <functional>
#include <limits>
#include <string>

namespace phcert {

/// Values and first/second radial derivatives of an electrostatic system in
/// area-radius gauge, g = f(r)^-2 dr^2 + r^2 dOmega^2, at one radius.
struct RadialSample {
  double r = 0.0;
  double f = 0.0, df = 0.0, d2f = 0.0;
  double N = 0.0, dN = 0.0, d2N = 0.0;
  double phi = 0.0, dphi = 0.0, d2phi = 0.0;
};

enum class ProfileKind { closed_form, tabulated };

const char* to_string(ProfileKind kind);

/// A static spherically symmetric electrostatic system (f, N, Phi) on
/// [r_min, r_max]. Cheap to copy; the evaluator is shared.
class RadialProfile {
 public:
  using Evaluator = std::function<RadialSample(double)>;

  RadialProfile(double r_min, double r_max, ProfileKind kind, Evaluator eval,
                std::string label, double length_scale = 1.0);

  /// Throws DomainError outside [r_min, r_max].
  RadialSample at(double r) const;

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  ProfileKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  /// Typical length of the configuration (e.g. max(|M|, |Q|) for RN); used to
  /// place default search brackets and grids.
  double length_scale() const noexcept { return length_scale_; }
  bool contains(double r) const noexcept { return r >= r_min_ && r <= r_max_; }

  /// Same evaluator on a sub-interval of the current domain.
  RadialProfile restricted(double r_lo, double r_hi) const;

 private:
  double r_min_;
  double r_max_;
  ProfileKind kind_;
  Evaluator eval_;
  std::string label_;
  double length_scale_;
};

/// Euclidean space with N = 1, Phi = 0 on (0, inf).
RadialProfile flat_profile();

enum class PerturbedField { f, N, phi };

/// Multiplies one field by (1 + amplitude * exp(-((r - center)/width)^2)),
/// with derivatives from the product rule. Kind is preserved.
RadialProfile perturbed(const RadialProfile& base, PerturbedField field, double amplitude,
                        double center, double width);

/// Residuals of the reduced Einstein-Maxwell system for a radial profile.
struct ElectroVacuumResidual {
  double maxwell = 0.0;           ///< div(grad Phi / N)
  double lapse = 0.0;             ///< Laplacian N - |dPhi|^2 / N
  double ricci_normal = 0.0;      ///< (N Ric - Hess N - (|dPhi|^2 g - 2 dPhi dPhi)/N)(nu, nu)
  double ricci_tangential = 0.0;  ///< same, on a unit tangent vector
  double scalar_curvature = 0.0;  ///< R - 2 |dPhi|^2 / N^2

  double max_abs() const;
};

ElectroVacuumResidual electrovacuum_residual(const RadialSample& s);

/// Scalar curvature of f^-2 dr^2 + r^2 dOmega^2.
double scalar_curvature(const RadialSample& s);

/// d/dr (N^2 / r^2); its zeros are the circular null orbits.
double effective_potential_slope(const RadialSample& s);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace phcert
