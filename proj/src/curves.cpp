#include "phcert/curves.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "phcert/errors.hpp"

namespace phcert {

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << std::setprecision(17) << header << "\n";
  return out;
}

std::optional<DoubledProfile> doubled_from(const RadialProfile& profile,
                                           const std::vector<PhotonSphereComponent>& comps,
                                           const Tolerances& tol) {
  std::vector<PhotonSphereComponent> used;
  std::vector<NeckData> necks;
  for (const auto& c : comps) {
    try {
      const auto iv = neck_interval(c, tol.classification);
      const auto mc = matching_constants(c, iv);
      used.push_back(c);
      necks.push_back({iv.q, iv.mu, iv.s, iv.r, mc.alpha, mc.beta});
    } catch (const RefusalError&) {
    }
  }
  if (used.empty()) return std::nullopt;
  try {
    return double_across_boundary(glue(profile, used, necks));
  } catch (const RefusalError&) {
    return std::nullopt;
  }
}

}  // namespace

void write_effective_potential_csv(std::ostream& out, const RadialProfile& profile, int points) {
  const auto [lo, hi] = orbit_bracket(profile);
  out << std::setprecision(17) << kEffectivePotentialHeader << "\n";
  for (int i = 0; i < points; ++i) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const auto s = profile.at(std::min(r, hi));
    out << s.r << "," << s.N * s.N / (s.r * s.r) << "\n";
  }
}

std::vector<std::filesystem::path> emit_curves(const SpacetimeSpec& spec,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create " + dir.string() + ": " + ec.message());

  const RadialProfile profile = build_profile(spec);
  std::vector<std::filesystem::path> written;

  {
    const auto path = dir / "effective_potential.csv";
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    write_effective_potential_csv(out, profile);
    written.push_back(path);
  }

  const auto comps = spec.derive ? derive_components(profile) : spec.components;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double r0 = comps[i].r;
    if (!(r0 > profile.r_min() && r0 < profile.r_max())) continue;
    const auto init = tangent_launch(profile, r0, 100.0 * r0, 10.0);
    const auto tr = integrate_null_geodesic(profile, init, 100.0 * r0, spec.tolerances.integrator);
    const auto path = dir / ("trace_" + std::to_string(i) + ".csv");
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    write_trajectory_csv(out, tr);
    written.push_back(path);
  }

  const auto dbl = doubled_from(profile, comps, spec.tolerances);
  if (!dbl) return written;
  const GluedProfile& gp = dbl->profile;

  {
    const auto path = dir / "omega.csv";
    auto out = open_csv(path, kOmegaHeader);
    for (std::size_t b = 0; b < gp.branches.size(); ++b) {
      for (const auto& g : branch_grid(gp.branches[b], spec.grid)) {
        for (Side side : {Side::plus, Side::minus}) {
          out << to_string(side) << "," << g.r << ","
              << conformal_factor(gp, side, g.r, b, g.inner) << "\n";
        }
      }
    }
    written.push_back(path);
  }

  {
    const auto path = dir / "scalar_curvature_hat.csv";
    auto out = open_csv(path, kScalarCurvatureHeader);
    const auto sweep = curvature_sweep(gp, spec.grid);
    for (const auto* side : {&sweep.plus, &sweep.minus}) {
      const char* name = side == &sweep.plus ? "plus" : "minus";
      for (const auto& c : *side) {
        out << name << "," << c.r << "," << c.R_hat_identity << "," << c.R_hat_direct << "\n";
      }
    }
    written.push_back(path);
  }

  {
    const auto path = dir / "mass_hat.csv";
    auto out = open_csv(path, kMassHeader);
    const auto mr = adm_mass_hat(gp, 0);
    for (std::size_t i = 0; i < mr.radii.size(); ++i) {
      out << mr.radii[i] << "," << mr.area_radii[i] << "," << mr.masses[i] << "\n";
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace phcert
