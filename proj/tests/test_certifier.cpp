#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "phcert/certifier.hpp"
#include "phcert/errors.hpp"
#include "phcert/report_json.hpp"
#include "phcert/tabulated_profile.hpp"

using namespace phcert;

namespace {
const std::filesystem::path kFixtures = PHCERT_FIXTURE_DIR;

std::string field_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "";
}

bool has_failed_check(const CertificationReport& r, const std::string& fragment) {
  for (const auto& c : r.checks) {
    if (!c.passed && !c.diagnostic && c.name.find(fragment) != std::string::npos) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("spec schema errors name the field") {
  CHECK(field_of("{") == "/");
  CHECK(field_of(R"({"source": {"rn": {"M": 1, "Q": 0}}})") == "/schema_version");
  CHECK(field_of(R"({"schema_version": 2})") == "/schema_version");
  CHECK(field_of(R"({"schema_version": 1, "colour": 1})") == "/colour");
  CHECK(field_of(R"({"schema_version": 1, "source": {"rn": {"M": 1}}})") == "/source/rn/Q");
  CHECK(field_of(R"({"schema_version": 1, "source": {"rn": {"M": 1, "Q": 0}, "tabulated": {}}})") ==
        "/source");
  CHECK(field_of(R"({"schema_version": 1, "components": [{"r": 3}]})").rfind("/components/0", 0) == 0);
  CHECK(field_of(R"({"schema_version": 1, "components": "guess"})") == "/components");
  CHECK(field_of(R"({"schema_version": 1, "grid": {"points_per_piece": 2}})") ==
        "/grid/points_per_piece");
  CHECK(field_of(R"({"schema_version": 1, "perturbation": {"field": "g", "amplitude": 1,
                     "center": 1, "width": 1}})") == "/perturbation/field");
}

TEST_CASE("tolerance overrides and defaults") {
  const auto s = parse_spec(R"({"schema_version": 1, "source": {"rn": {"M": 1, "Q": 0.2}},
                                "tolerances": {"flatness": 1e-3}})");
  CHECK(s.tolerances.flatness == 1e-3);
  CHECK(s.tolerances.mass == default_tolerances(ProfileKind::closed_form).mass);
  CHECK(default_tolerances(ProfileKind::tabulated).electrovacuum >
        default_tolerances(ProfileKind::closed_form).electrovacuum);
}

TEST_CASE("tabulated table validation") {
  ProfileTable t;
  for (int i = 0; i < 10; ++i) {
    t.r.push_back(1 + i), t.f.push_back(1), t.N.push_back(1), t.phi.push_back(0);
  }
  CHECK_THROWS_AS(validate_table(t), DataError);
  for (int i = 10; i < 60; ++i) {
    t.r.push_back(1 + i), t.f.push_back(1), t.N.push_back(1), t.phi.push_back(0);
  }
  validate_table(t);
  t.r[5] = t.r[4];
  CHECK_THROWS_AS(validate_table(t), DataError);
  std::istringstream in("r,f,N\n1,1,1\n");
  try {
    parse_profile_csv(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("Φ") != std::string::npos);
  }
}

TEST_CASE("tabulated RN samples match the closed form to interpolation error") {
  const auto tab = fixture::tabulated_rn(1.0, 0.0, 2.5, 6.0, 1e4, 1e-2, 800);
  const auto ex = rn_profile({1.0, 0.0});
  for (double r : {2.8, 3.0, 3.005, 4.2, 10.0, 333.0}) {
    const auto a = tab.at(r), b = ex.at(r);
    CHECK(std::abs(a.N - b.N) < 1e-9);
    CHECK(std::abs(a.dN - b.dN) < 1e-8);
    CHECK(std::abs(a.d2N - b.d2N) < 1e-6);
  }
}

TEST_CASE("closed-form RN certifies consistent; report round-trips byte for byte") {
  const auto spec = load_spec(kFixtures / "rn_1_06.json");
  const auto r1 = certify(spec);
  CHECK(r1.consistent());
  CHECK(r1.verdict == "consistent-with-unique-RN(M=1, Q=0.6)");
  const auto r2 = certify(spec);
  CHECK(emit_json(r1) == emit_json(r2));
  const auto back = parse_report(emit_json(r1));
  CHECK(back == r1);
  CHECK(emit_json(back) == emit_json(r1));
  CHECK(r1.tolerances == default_tolerances(ProfileKind::closed_form));
  CHECK_THROWS_AS(parse_report("{}"), ParseError);
}

TEST_CASE("tabulated RN certifies consistent, with charges from the tail too") {
  for (const char* f : {"tabulated_rn.json", "tabulated_rn_tail.json"}) {
    const auto r = certify(load_spec(kFixtures / f));
    CHECK_MESSAGE(r.consistent(), f);
    CHECK(std::abs(r.M - 1.0) < 1e-6);
    CHECK(std::abs(r.Q - 0.6) < 1e-6);
  }
}

TEST_CASE("perturbed inputs are flagged") {
  for (const char* f : {"perturbed.json", "tabulated_perturbed.json"}) {
    const auto r = certify(load_spec(kFixtures / f));
    CHECK_FALSE(r.consistent());
    CHECK(r.verdict == "violations");
    CHECK((has_failed_check(r, "flat") || has_failed_check(r, "electro-vacuum")));
  }
}

TEST_CASE("super-extremal RN: refusals are recorded as violations") {
  const auto r = certify(load_spec(kFixtures / "rn_super.json"));
  CHECK_FALSE(r.consistent());
  REQUIRE(r.components.size() == 2);
  for (const auto& c : r.components) {
    CHECK(c.refusal.has_value());
    CHECK(c.class_by_mean_curvature == "super_extremal");
  }
  bool named = false;
  for (const auto& v : r.violations) named = named || v.relation == "sub-extremality (H r > 1)";
  CHECK(named);
}

TEST_CASE("n-body verdicts") {
  CHECK(nbody_check(load_spec(kFixtures / "two_body.json")).excluded);
  const auto one = nbody_check(load_spec(kFixtures / "one_body.json"));
  CHECK_FALSE(one.excluded);
  CHECK_FALSE(one.hypothesis_failure);
  CHECK(nbody_check(load_spec(kFixtures / "body_and_black_hole.json")).excluded);
  const auto deg = nbody_check(load_spec(kFixtures / "degenerate_hole.json"));
  CHECK(deg.hypothesis_failure);
  CHECK_FALSE(deg.excluded);
}
