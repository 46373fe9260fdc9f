#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "phcert/certifier.hpp"

namespace phcert {

/// CSV headers, in column order.
inline constexpr const char* kEffectivePotentialHeader = "r,N2_over_r2";
inline constexpr const char* kOmegaHeader = "side,r,omega";
inline constexpr const char* kScalarCurvatureHeader = "side,r,R_hat_identity,R_hat_direct";
inline constexpr const char* kMassHeader = "r,r_hat,m_hat";

void write_effective_potential_csv(std::ostream& out, const RadialProfile& profile, int points = 400);

/// Writes effective_potential.csv, omega.csv, scalar_curvature_hat.csv,
/// mass_hat.csv and one trace_<i>.csv per photon-sphere component into `dir`.
/// The conformal curves need a sub-extremal component and are skipped otherwise.
/// Throws InvalidInput when the directory cannot be created or written.
std::vector<std::filesystem::path> emit_curves(const SpacetimeSpec& spec,
                                               const std::filesystem::path& dir);

}  // namespace phcert
