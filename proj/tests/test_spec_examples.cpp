#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "phcert/certifier.hpp"
#include "phcert/errors.hpp"
#include "phcert/report_json.hpp"

using namespace phcert;

namespace {
const std::filesystem::path kFixtures = PHCERT_FIXTURE_DIR;

GluedProfile rn_glued(double M, double Q) {
  const RNParams p{M, Q};
  const auto c = rn_component(p, photon_sphere_radii(p)[0]);
  return glue(rn_profile(p), {c}, {make_neck_data(c)});
}

PhotonSphereComponent schwarzschild_like(double r, double N0) {
  return oracle::component_with_ratio(r, N0, 0.0, 0.0);
}
}  // namespace

TEST_CASE("rn_model examples") {
  CHECK(*horizon_radius({1.0, 1.0}) == doctest::Approx(1.0));
  CHECK_FALSE(horizon_radius({1.0, 1.2}).has_value());
  const auto two = photon_sphere_radii({1.0, 1.05});
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(1.71213).epsilon(1e-5));
  CHECK(two[1] == doctest::Approx(1.28787).epsilon(1e-5));
  CHECK(rn_profile({1.0, 0.0}).at(2.0).N == 0.0);
  CHECK(rn_profile({1.0, 0.6}).at(1.8).N == 0.0);
  const auto far = rn_profile({1.0, 0.6}).at(1e12);
  CHECK(std::abs(far.N - 1.0) < 1e-11);
  CHECK(std::abs(far.phi) < 1e-11);
  CHECK(classify({1.0, -1.5}) == ExtremalityClass::super_extremal);
  CHECK(photon_sphere_radii({-1.0, 0.0}).empty());
}

TEST_CASE("rn_model invariants on random parameters") {
  oracle::Rng g(11);
  for (int i = 0; i < 500; ++i) {
    const double M = std::exp(g.uniform(-3, 3));
    const double Q = g.uniform(-1.06, 1.06) * M;
    const RNParams p{M, Q};
    const auto h = horizon_radius(p);
    for (double r : photon_sphere_radii(p)) {
      CHECK(std::abs(r * r - 3 * M * r + 2 * Q * Q) < 1e-12 * std::max(1.0, M * M));
      if (h) CHECK(r > *h);
    }
  }
  for (double Q : {0.0, 0.6, 0.95}) {
    const auto prof = rn_profile({1.0, Q});
    for (int i = 0; i < 100; ++i) {
      const auto s = prof.at(prof.r_min() * 1.01 * std::pow(1e3, i / 99.0));
      CHECK(electrovacuum_residual(s).max_abs() < 1e-9);
      const double want = 2 * s.dphi * s.dphi * s.f * s.f / (s.N * s.N);
      CHECK(std::abs(scalar_curvature(s) - want) < 1e-9 * std::max(1.0, want));
    }
  }
}

TEST_CASE("geodesic_engine examples") {
  const auto flat = flat_profile();
  const auto d0 = radial_rhs(flat, {5.0, 0.0, 1.0, 1.0, 0.0});
  CHECK(d0.dphi == 0.0);
  CHECK(d0.dp_r == 0.0);
  const auto sch = rn_profile({1.0, 0.0});
  const auto s3 = tangent_launch(sch, 3.0, 300.0, 10.0);
  const auto d3 = radial_rhs(sch, s3);
  CHECK(d3.dr == 0.0);
  CHECK(std::abs(d3.dp_r) < 1e-16);
  CHECK(std::abs(radial_rhs(sch, tangent_launch(sch, 4.0, 400.0, 10.0)).dp_r) > 1e-5);

  CHECK(find_circular_null_orbits(sch, 2.1, 10.0) == std::vector<double>{3.0});
  const auto o = find_circular_null_orbits(rn_profile({1.0, 0.6}), 1.9, 10.0);
  REQUIRE(o.size() == 1);
  CHECK(std::abs(o[0] - (3 + std::sqrt(6.12)) / 2) < 1e-12);
  CHECK(find_circular_null_orbits(flat, 0.1, 10.0).empty());

  const auto ray = integrate_null_geodesic(sch, {10.0, 0.0, std::sqrt(1 - 0.2), 1.0, 0.0}, 50.0, 1e-12);
  for (std::size_t i = 1; i < ray.points.size(); ++i) CHECK(ray.points[i].r > ray.points[i - 1].r);

  const auto drift = integrate_null_geodesic(sch, tangent_launch(sch, 3.1, 310.0, 10.0), 310.0, 1e-12);
  for (std::size_t i = 1; i < drift.points.size(); ++i) CHECK(drift.points[i].r >= drift.points[i - 1].r);
}

TEST_CASE("trapping and root duality") {
  const auto inner = trapping_test(rn_profile({1.0, 1.05}), photon_sphere_radii({1.0, 1.05})[1], 130.0, 1e-12);
  CHECK(inner.verdict == TrappingVerdict::trapped);
  for (double Q : {0.0, 0.3, 0.6, 0.9, 1.0, 1.02, 1.05}) {
    const auto p = rn_profile({1.0, Q});
    for (double r : photon_sphere_radii({1.0, Q})) {
      CHECK(trapping_test(p, r, 100 * r, 1e-12).verdict == TrappingVerdict::trapped);
      CHECK(trapping_test(p, 1.05 * r, 105 * r, 1e-12).verdict != TrappingVerdict::trapped);
    }
  }
}

TEST_CASE("surface_data examples") {
  auto c = rn_component({1.0, 0.0}, 3.0);
  c.H *= 2;
  CHECK_FALSE(validate_component(c).passed);
  CHECK(std::abs(validate_component(c).constraint_residual) > 1.0);

  CHECK(charge(schwarzschild_like(3.0, 0.4)) == 0.0);
  CHECK(charge(oracle::component_with_ratio(2.0, 0.5, -0.2, 0.0)) < 0.0);  // nuPhi > 0
  CHECK(neck_mass(schwarzschild_like(3.0, 0.4)) == doctest::Approx(1.0));
  CHECK(classify_component(oracle::component_with_ratio(1.0, 0.5, 0.0, 0.0)).by_mean_curvature ==
        ExtremalityClass::sub_extremal);
  PhotonSphereComponent hr09 = schwarzschild_like(1.0, 0.5);
  hr09.H = 0.9;
  CHECK(classify_component(hr09, 1e-10).hr_minus_one == doctest::Approx(-0.1));

  const auto iv = neck_interval(schwarzschild_like(3.0, 0.4));
  CHECK(iv.s == doctest::Approx(2.0));
  CHECK(iv.r == 3.0);

  // q = 0: alpha = 3 m / r.
  const auto z = schwarzschild_like(3.0, 0.4);
  const auto mc = matching_constants(z, neck_interval(z));
  CHECK(mc.alpha == doctest::Approx(3.0 * komar_mass(z) / 3.0).epsilon(1e-12));
  CHECK(mc.alpha == doctest::Approx(0.4 * std::sqrt(3.0)).epsilon(1e-12));

  // Komar mass homogeneity.
  auto k = rn_component({1.0, 0.3}, photon_sphere_radii({1.0, 0.3})[0]);
  auto k2 = k;
  k2.r *= 2;
  k2.nuN /= 2;
  CHECK(komar_mass(k2) == doctest::Approx(2 * komar_mass(k)));
  PhotonSphereComponent flat_nu = k;
  flat_nu.nuN = 0.0;
  CHECK(komar_mass(flat_nu) == 0.0);
  CHECK_FALSE(validate_component(flat_nu).passed);
}

TEST_CASE("appendix examples") {
  const double r = photon_sphere_radii({1.0, 0.6})[0];
  const auto c = rn_component({1.0, 0.6}, r);
  const double m = komar_mass(c);
  CHECK(mass_decomposition_check({1.0, 0.6, m + 1e-3}, c) == doctest::Approx(1e-3).epsilon(1e-6));
  const auto s = rn_component({1.0, 0.0}, 3.0);
  CHECK(mass_decomposition_check({1.0, 0.0, komar_mass(s)}, s) < 1e-14);
  PhotonSphereComponent unit = c;
  unit.N0 = 1.0;
  CHECK(boundary_lapse_identity({1.0, 0.6, 1.0}, unit) < 1e-15);

  const auto pp = perturbed(rn_profile({1.0, 0.6}), PerturbedField::phi, 1e-3, 4.0, 1.0);
  const double fr = functional_relation_check(pp, {1.0, 0.6, 0.0});
  CHECK(fr > 1e-5);
  CHECK(fr < 1e-2);
  CHECK(functional_relation_check(rn_profile({1.0, 0.6}), {1.0, 0.6, 0.0}) < 1e-12);
  CHECK_THROWS_AS(functional_relation_check(rn_profile({1.0, 0.0}), {1.0, 0.0, 1.0}), RefusalError);

  const auto ext = rn_component({1.0, 1.0}, 2.0);
  const auto te = extremality_trichotomy({1.0, 1.0, komar_mass(ext)}, ext);
  CHECK(te.from_charges == ExtremalityClass::extremal);
  CHECK(te.from_component == ExtremalityClass::extremal);
  // Hr > 1 but Q^2 > M^2 injected.
  const auto bad = extremality_trichotomy({1.0, 1.3, komar_mass(c)}, c);
  CHECK_FALSE(bad.agree);
  CHECK(bad.residual > 1e-3);
}

TEST_CASE("gluing examples") {
  const auto z = rn_component({1.0, 0.0}, 3.0);
  const auto nd = make_neck_data(z);
  const auto neck = build_neck(nd, z);
  CHECK(neck.r_min() == doctest::Approx(2.0));
  CHECK(neck.r_max() == doctest::Approx(3.0));
  CHECK(neck.at(2.5).N == doctest::Approx(std::sqrt(1 - 2 / 2.5)).epsilon(1e-14));
  CHECK(neck.at(neck.r_min()).N == 0.0);

  const auto gp = rn_glued(1.0, 0.6);
  const auto ex = rn_profile({1.0, 0.6});
  for (double r : {1.85, 2.2, 2.7, 5.0, 100.0}) {
    const auto a = gp.at(0, Side::plus, r, true), b = ex.at(r);
    CHECK(std::abs(a.N - b.N) < 1e-14);
    CHECK(std::abs(a.phi - b.phi) < 1e-14);
    CHECK(std::abs(a.dN - b.dN) < 1e-12);
  }

  // Two components on two exteriors: two loci.
  const auto c1 = rn_component({1.0, 0.3}, photon_sphere_radii({1.0, 0.3})[0]);
  const auto c2 = rn_component({2.0, 0.2}, photon_sphere_radii({2.0, 0.2})[0]);
  const auto two = glue(std::vector<RadialProfile>{rn_profile({1.0, 0.3}).restricted(c1.r, 1e6),
                                                   rn_profile({2.0, 0.2}).restricted(c2.r, 1e6)},
                        {c1, c2}, {make_neck_data(c1), make_neck_data(c2)});
  CHECK(check_C11(two, 1e-4).loci.size() == 2);

  // Mismatched lapse constant: value jump reported.
  auto nd_bad = make_neck_data(c1);
  nd_bad.alpha *= 1.01;
  CHECK(check_C11(glue(rn_profile({1.0, 0.3}), {c1}, {nd_bad}), 1e-4).max_jump() > 1e-3);
  // Neck mass off by 1e-3: nu(N) jump of that order.
  auto nd_mu = make_neck_data(c1);
  nd_mu.mu += 1e-3;
  nd_mu.s = nd_mu.mu + std::sqrt(nd_mu.mu * nd_mu.mu - nd_mu.q * nd_mu.q);
  nd_mu.alpha = c1.N0 / rn_metric_function(nd_mu.mu, nd_mu.q, c1.r);
  const auto rep = check_C11(glue(rn_profile({1.0, 0.3}), {c1}, {nd_mu}), 1e-4);
  CHECK(rep.loci[0].channels[0].channel == "lapse");
  CHECK(rep.loci[0].channels[0].derivative_jump > 1e-4);
  CHECK(rep.loci[0].channels[0].derivative_jump < 1e-2);
}

TEST_CASE("doubling examples") {
  const auto d0 = double_across_boundary(rn_glued(1.0, 0.0));
  CHECK(d0.reports[0].rho_h == doctest::Approx(0.5));
  CHECK(d0.reports[0].lapse_odd < 1e-12);
  const auto d6 = double_across_boundary(rn_glued(1.0, 0.6));
  CHECK(d6.reports[0].rho_h == doctest::Approx(0.4));
  CHECK(d6.reports[0].potential_even < 1e-12);
  // An extremal neck cannot be doubled: it is refused before it is built.
  CHECK_THROWS_AS(make_neck_data(rn_component({1.0, 1.0}, 2.0)), RefusalError);
}

TEST_CASE("conformal examples") {
  const auto gp = double_across_boundary(rn_glued(1.0, 0.6)).profile;
  CHECK(std::abs(conformal_factor(gp, Side::plus, 1e9) - 1.0) < 1e-8);
  const double s = gp.branches[0].boundary();
  const double phi_s = 0.6 / s;
  CHECK(conformal_factor(gp, Side::plus, s, 0, true) == doctest::Approx(0.25 * (1 - phi_s * phi_s)));
  const auto g0 = double_across_boundary(rn_glued(1.0, 0.0)).profile;
  CHECK(conformal_factor(g0, Side::plus, 2.0, 0, true) == doctest::Approx(0.25));

  // Vacuum: the identity side vanishes.
  for (const auto& c : curvature_sweep(g0).plus) CHECK(c.R_hat_identity == 0.0);

  // Omega = 1 on Schwarzschild: the quasi-local mass tends to M; flat space has none.
  MassOptions unit;
  unit.unit_factor = true;
  CHECK(adm_mass_hat(rn_profile({1.0, 0.0}), unit).extrapolated == doctest::Approx(1.0).epsilon(1e-6));
  const auto fm = adm_mass_hat(flat_profile(), unit);
  for (double m : fm.masses) CHECK(m == 0.0);

  const auto cc = minus_end_compactification_check(rn_profile({1.0, 0.0}), 1.0, 0.0);
  CHECK(cc.predicted_coefficient == doctest::Approx(0.25));
  CHECK(cc.fitted_coefficient == doctest::Approx(0.25).epsilon(1e-6));

  std::vector<double> rs;
  for (int i = 1; i < 50; ++i) rs.push_back(0.1 * i);
  CHECK(flatness_check(flat_profile(), rs, 1e-12, true).flat);
}

TEST_CASE("curvature response to a potential bump") {
  // The identity side is a square that vanishes on RN, so it responds at
  // second order in the amplitude; the direct curvature responds at first order.
  const auto base = rn_profile({1.0, 0.6});
  for (double r : {4.0, 5.5}) {
    double id[2], dir[2];
    int k = 0;
    for (double amp : {1e-4, 1e-3}) {
      const auto pp = perturbed(base, PerturbedField::phi, amp, 5.0, 1.0);
      const auto a = conformal_curvature(pp.at(r)), b = conformal_curvature(base.at(r));
      id[k] = a.R_hat_identity - b.R_hat_identity;
      dir[k] = a.R_hat_direct - b.R_hat_direct;
      ++k;
    }
    CHECK(id[1] / id[0] == doctest::Approx(100.0).epsilon(1e-2));
    CHECK(dir[1] / dir[0] == doctest::Approx(10.0).epsilon(1e-2));
    CHECK(std::abs(dir[1]) > 1e3 * std::abs(id[1]));
  }
}

TEST_CASE("certifier examples") {
  const auto s = parse_spec(R"({"schema_version": 1, "source": {"rn": {"M": 1, "Q": 0.6}}})");
  REQUIRE(s.rn.has_value());
  CHECK(build_profile(s).kind() == ProfileKind::closed_form);

  const auto one = derive_components(rn_profile({1.0, 0.0}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].r == doctest::Approx(3.0));
  CHECK(validate_component(one[0]).passed);
  CHECK(derive_components(rn_profile({1.0, 1.05})).size() == 2);
  CHECK(derive_components(flat_profile()).empty());

  auto two = load_spec(kFixtures / "two_body.json");
  two.components[1] = oracle::component_with_ratio(1.0, 0.5, 0.7, 0.0);
  const auto v = nbody_check(two);
  CHECK(v.hypothesis_failure);
  CHECK_FALSE(v.excluded);

  const auto rep = certify(load_spec(kFixtures / "rn_1_06.json"));
  const auto j = nlohmann::json::parse(emit_json(rep));
  CHECK(j.at("violations").is_array());
  CHECK(j.at("violations").empty());
}

TEST_CASE("verdict soundness and RN round trip over the grid") {
  for (double Q : {0.0, 0.3, 0.6, 0.9, 0.99}) {
    SpacetimeSpec spec;
    spec.rn = RNParams{1.0, Q};
    spec.tolerances = default_tolerances(ProfileKind::closed_form);
    const auto rep = certify(spec);
    CHECK_MESSAGE(rep.consistent(), "Q = " << Q);
    REQUIRE(rep.components.size() == 1);
    REQUIRE(rep.components[0].neck.has_value());
    CHECK(std::abs(rep.components[0].neck->mu - 1.0) < 1e-9);
    CHECK(std::abs(rep.components[0].neck->q - Q) < 1e-9);
    for (const auto& c : rep.checks) {
      if (c.diagnostic) continue;
      const bool holds = c.comparison == "<" ? c.value < c.threshold : c.value > c.threshold;
      CHECK_MESSAGE(holds == c.passed, c.name);
    }
  }
}
