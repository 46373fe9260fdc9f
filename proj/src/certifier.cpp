#include "phcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "phcert/errors.hpp"
#include "phcert/tabulated_profile.hpp"

namespace phcert {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// ---- spec parsing ---------------------------------------------------------

double number_at(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ParseError(path + "/" + key, "required field missing");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(path + "/" + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(path + "/" + key, "expected a finite number");
  return x;
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) return std::nullopt;
  return number_at(j, key, path);
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> known) {
  const std::set<std::string> ok(known.begin(), known.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw ParseError(path + "/" + k, "unknown field");
  }
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
}

PhotonSphereComponent parse_component(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"r", "N0", "H", "nuN", "nuPhi", "Phi0"});
  PhotonSphereComponent c;
  c.r = number_at(j, "r", path);
  c.N0 = number_at(j, "N0", path);
  c.H = number_at(j, "H", path);
  c.nuN = number_at(j, "nuN", path);
  c.nuPhi = number_at(j, "nuPhi", path);
  c.Phi0 = number_at(j, "Phi0", path);
  return c;
}

void apply_tolerance_overrides(Tolerances& t, const json& j) {
  expect_object(j, "/tolerances");
  const std::pair<const char*, double Tolerances::*> fields[] = {
      {"component", &Tolerances::component},
      {"classification", &Tolerances::classification},
      {"electrovacuum", &Tolerances::electrovacuum},
      {"recovery", &Tolerances::recovery},
      {"appendix", &Tolerances::appendix},
      {"regularity", &Tolerances::regularity},
      {"stencil_step", &Tolerances::stencil_step},
      {"doubling_symmetry", &Tolerances::doubling_symmetry},
      {"doubling_derivative", &Tolerances::doubling_derivative},
      {"curvature_identity", &Tolerances::curvature_identity},
      {"mass", &Tolerances::mass},
      {"flatness", &Tolerances::flatness},
      {"compactification_exponent", &Tolerances::compactification_exponent},
      {"compactification_coefficient", &Tolerances::compactification_coefficient},
      {"trapping", &Tolerances::trapping},
      {"integrator", &Tolerances::integrator},
      {"decay_exponent", &Tolerances::decay_exponent},
  };
  for (const auto& [k, v] : j.items()) {
    bool found = false;
    for (const auto& [name, member] : fields) {
      if (k == name) {
        const double x = number_at(j, k, "/tolerances");
        if (!(x > 0.0)) throw ParseError("/tolerances/" + k, "must be positive");
        t.*member = x;
        found = true;
      }
    }
    if (!found) throw ParseError("/tolerances/" + k, "unknown tolerance");
  }
}

// ---- report assembly ------------------------------------------------------

class Ledger {
 public:
  explicit Ledger(CertificationReport& rep) : rep_(rep) {}

  void below(const std::string& name, const std::string& relation, double value, double threshold,
             const std::string& detail = {}) {
    add(name, relation, value, "<", threshold, value < threshold, false, detail);
  }
  void above(const std::string& name, const std::string& relation, double value, double threshold,
             const std::string& detail = {}) {
    add(name, relation, value, ">", threshold, value > threshold, false, detail);
  }
  void holds(const std::string& name, const std::string& relation, bool ok, const std::string& detail) {
    add(name, relation, ok ? 1.0 : 0.0, ">", 0.5, ok, false, detail);
  }
  void note_below(const std::string& name, const std::string& relation, double value,
                  double threshold, const std::string& detail = {}) {
    add(name, relation, value, "<", threshold, value < threshold, true, detail);
  }
  void note_above(const std::string& name, const std::string& relation, double value,
                  double threshold, const std::string& detail = {}) {
    add(name, relation, value, ">", threshold, value > threshold, true, detail);
  }
  void refusal(const std::string& name, const RefusalError& e) {
    add(name, e.relation(), 0.0, ">", 0.5, false, false, e.what());
  }

 private:
  void add(const std::string& name, const std::string& relation, double value, const char* cmp,
           double threshold, bool ok, bool diagnostic, const std::string& detail) {
    if (!std::isfinite(value)) {
      ok = false;
      value = std::copysign(1e308, value);
    }
    rep_.checks.push_back({name, relation, value, cmp, threshold, ok, diagnostic, detail});
    if (!ok && !diagnostic) {
      std::string d = detail.empty() ? name + " = " + fmt(value) + ", needs " + cmp + " " + fmt(threshold)
                                     : detail;
      rep_.violations.push_back({name, relation, d});
    }
  }
  CertificationReport& rep_;
};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  out.back() = hi;
  return out;
}

double electrovacuum_sweep(const RadialProfile& p, double lo, double hi, int n) {
  double worst = 0.0;
  for (double r : log_grid(lo, hi, n)) {
    const auto s = p.at(r);
    worst = std::max(worst, r * r * electrovacuum_residual(s).max_abs());
  }
  return worst;
}

double richardson_tail(const std::vector<double>& v) {
  std::vector<double> e1, e2;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) e1.push_back(2.0 * v[k + 1] - v[k]);
  for (std::size_t k = 0; k + 1 < e1.size(); ++k) e2.push_back((4.0 * e1[k + 1] - e1[k]) / 3.0);
  return e2.empty() ? e1.back() : e2.back();
}

std::vector<double> doubling_tail(const RadialProfile& p, int levels) {
  const double top = std::isfinite(p.r_max()) ? p.r_max() : 1e4 * p.length_scale();
  std::vector<double> rs;
  for (int k = levels - 1; k >= 0; --k) {
    const double r = top / std::ldexp(1.0, k);
    if (r > p.r_min()) rs.push_back(r);
  }
  return rs;
}

std::optional<double> decay_fit(const std::vector<double>& rs, const std::vector<double>& vals) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (std::abs(vals[i]) > 1e-13) {
      lx.push_back(std::log(rs[i]));
      ly.push_back(std::log(std::abs(vals[i])));
    }
  }
  if (lx.size() < 3) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sx += lx[i], sy += ly[i], sxx += lx[i] * lx[i], sxy += lx[i] * ly[i];
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Tolerances default_tolerances(ProfileKind kind) {
  Tolerances t;
  if (kind == ProfileKind::tabulated) {
    t.component = 1e-7;
    t.electrovacuum = 1e-5;
    t.recovery = 1e-6;
    t.appendix = 1e-6;
    t.regularity = 1e-5;
    t.curvature_identity = 1e-5;
    t.mass = 1e-4;
    t.flatness = 1e-5;
    t.compactification_coefficient = 1e-2;
  }
  return t;
}

SpacetimeSpec parse_spec(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("/", std::string("not valid JSON: ") + e.what());
  }
  expect_object(j, "");
  reject_unknown(j, "", {"schema_version", "label", "source", "perturbation", "components",
                         "black_holes", "tolerances", "grid", "decay"});

  SpacetimeSpec spec;
  if (!j.contains("schema_version")) throw ParseError("/schema_version", "required field missing");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSpecSchemaVersion) {
    throw ParseError("/schema_version", "unsupported schema version (expected " +
                                             std::to_string(kSpecSchemaVersion) + ")");
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw ParseError("/label", "expected a string");
    spec.label = j["label"].get<std::string>();
  }

  ProfileKind kind = ProfileKind::closed_form;
  if (j.contains("source")) {
    const auto& src = j["source"];
    expect_object(src, "/source");
    reject_unknown(src, "/source", {"rn", "tabulated"});
    if (src.contains("rn") == src.contains("tabulated")) {
      throw ParseError("/source", "exactly one of rn, tabulated is required");
    }
    if (src.contains("rn")) {
      const auto& rn = src["rn"];
      expect_object(rn, "/source/rn");
      reject_unknown(rn, "/source/rn", {"M", "Q"});
      spec.rn = RNParams{number_at(rn, "M", "/source/rn"), number_at(rn, "Q", "/source/rn")};
    } else {
      const auto& tb = src["tabulated"];
      expect_object(tb, "/source/tabulated");
      reject_unknown(tb, "/source/tabulated", {"path", "M", "Q"});
      if (!tb.contains("path") || !tb["path"].is_string()) {
        throw ParseError("/source/tabulated/path", "expected a file path string");
      }
      std::filesystem::path p = tb["path"].get<std::string>();
      spec.table = p.is_absolute() ? p : base_dir / p;
      spec.mass_override = optional_number(tb, "M", "/source/tabulated");
      spec.charge_override = optional_number(tb, "Q", "/source/tabulated");
      kind = ProfileKind::tabulated;
    }
  }
  spec.tolerances = default_tolerances(kind);

  if (j.contains("perturbation")) {
    const auto& pj = j["perturbation"];
    expect_object(pj, "/perturbation");
    reject_unknown(pj, "/perturbation", {"field", "amplitude", "center", "width"});
    Perturbation pt;
    const std::string field = pj.value("field", "N");
    if (field == "N") pt.field = PerturbedField::N;
    else if (field == "f") pt.field = PerturbedField::f;
    else if (field == "Phi" || field == "Φ") pt.field = PerturbedField::phi;
    else throw ParseError("/perturbation/field", "expected one of N, f, Phi");
    pt.amplitude = number_at(pj, "amplitude", "/perturbation");
    pt.center = number_at(pj, "center", "/perturbation");
    pt.width = number_at(pj, "width", "/perturbation");
    if (!(pt.width > 0.0)) throw ParseError("/perturbation/width", "must be positive");
    spec.perturbation = pt;
  }

  if (j.contains("components")) {
    const auto& cj = j["components"];
    if (cj.is_string()) {
      if (cj.get<std::string>() != "derive") {
        throw ParseError("/components", "expected \"derive\" or a list of components");
      }
      spec.derive = true;
    } else if (cj.is_array()) {
      spec.derive = false;
      for (std::size_t i = 0; i < cj.size(); ++i) {
        spec.components.push_back(parse_component(cj[i], "/components/" + std::to_string(i)));
      }
    } else {
      throw ParseError("/components", "expected \"derive\" or a list of components");
    }
  }

  if (j.contains("black_holes")) {
    const auto& bj = j["black_holes"];
    if (!bj.is_array()) throw ParseError("/black_holes", "expected a list");
    for (std::size_t i = 0; i < bj.size(); ++i) {
      const std::string path = "/black_holes/" + std::to_string(i);
      expect_object(bj[i], path);
      reject_unknown(bj[i], path, {"label", "surface_gravity"});
      BlackHoleRecord b;
      b.label = bj[i].value("label", "black hole " + std::to_string(i));
      b.surface_gravity = number_at(bj[i], "surface_gravity", path);
      spec.black_holes.push_back(b);
    }
  }

  if (j.contains("tolerances")) apply_tolerance_overrides(spec.tolerances, j["tolerances"]);

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    expect_object(g, "/grid");
    reject_unknown(g, "/grid", {"points_per_piece", "outer_radius_factor", "clearance"});
    if (g.contains("points_per_piece")) {
      if (!g["points_per_piece"].is_number_integer() || g["points_per_piece"].get<int>() < 4) {
        throw ParseError("/grid/points_per_piece", "expected an integer >= 4");
      }
      spec.grid.points_per_piece = g["points_per_piece"].get<int>();
    }
    if (auto v = optional_number(g, "outer_radius_factor", "/grid")) {
      if (!(*v > 1.0)) throw ParseError("/grid/outer_radius_factor", "must exceed 1");
      spec.grid.outer_radius_factor = *v;
    }
    if (auto v = optional_number(g, "clearance", "/grid")) {
      if (!(*v > 0.0 && *v < 0.1)) throw ParseError("/grid/clearance", "must lie in (0, 0.1)");
      spec.grid.clearance = *v;
    }
  }

  if (j.contains("decay")) {
    const auto& d = j["decay"];
    expect_object(d, "/decay");
    reject_unknown(d, "/decay", {"tau"});
    spec.decay_threshold = number_at(d, "tau", "/decay");
  }
  return spec;
}

SpacetimeSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

RadialProfile build_profile(const SpacetimeSpec& spec) {
  std::optional<RadialProfile> base;
  if (spec.rn) {
    base = rn_profile(*spec.rn);
  } else if (spec.table) {
    base = make_tabulated_profile(read_profile_csv(*spec.table),
                                  spec.label.empty() ? spec.table->filename().string() : spec.label);
  } else {
    throw InvalidInput("spec has no source profile");
  }
  if (spec.perturbation) {
    const auto& p = *spec.perturbation;
    return perturbed(*base, p.field, p.amplitude, p.center, p.width);
  }
  return *base;
}

std::pair<double, double> orbit_bracket(const RadialProfile& profile) {
  const double L = profile.length_scale();
  const double lo = profile.r_min() > 0.0 ? profile.r_min() * (1.0 + 1e-6) : 1e-3 * L;
  const double hi = std::isfinite(profile.r_max()) ? profile.r_max() : 1e3 * std::max(L, lo);
  return {lo, hi};
}

std::vector<PhotonSphereComponent> derive_components(const RadialProfile& profile,
                                                     std::string* diagnostic) {
  const auto [lo, hi] = orbit_bracket(profile);
  std::vector<PhotonSphereComponent> out;
  for (double r : find_circular_null_orbits(profile, lo, hi)) {
    const auto s = profile.at(r);
    PhotonSphereComponent c;
    c.r = r;
    c.N0 = s.N;
    c.H = 2.0 * s.f / r;
    c.nuN = s.f * s.dN;
    c.nuPhi = s.f * s.dphi;
    c.Phi0 = s.phi;
    out.push_back(c);
  }
  if (out.empty() && diagnostic) {
    *diagnostic = "no circular null orbit in [" + fmt(lo) + ", " + fmt(hi) + "]";
  }
  return out;
}

CertificationReport certify(const SpacetimeSpec& spec) {
  const Tolerances& tol = spec.tolerances;
  const RadialProfile profile = build_profile(spec);
  const bool closed = profile.kind() == ProfileKind::closed_form;

  CertificationReport rep;
  rep.tolerances = tol;
  rep.source = spec.label.empty() ? profile.label() : spec.label;
  rep.profile_kind = to_string(profile.kind());
  Ledger ledger(rep);

  // Global charges.
  if (spec.rn) {
    rep.M = spec.rn->M;
    rep.Q = spec.rn->Q;
    rep.charges_from = "spec";
  } else if (spec.mass_override && spec.charge_override) {
    rep.M = *spec.mass_override;
    rep.Q = *spec.charge_override;
    rep.charges_from = "spec";
  } else {
    const auto rs = doubling_tail(profile, 8);
    std::vector<double> ms, qs;
    for (double r : rs) {
      const auto s = profile.at(r);
      ms.push_back(0.5 * r * (1.0 - s.f * s.f));
      qs.push_back(r * s.phi);
    }
    rep.M = spec.mass_override.value_or(richardson_tail(ms));
    rep.Q = spec.charge_override.value_or(richardson_tail(qs));
    rep.charges_from = "tail";
  }
  const double M = rep.M, Q = rep.Q;
  const double mass_scale = std::max(1.0, std::abs(M));

  // Photon-sphere components.
  std::string derive_note;
  const auto comps = spec.derive ? derive_components(profile, &derive_note) : spec.components;
  if (!derive_note.empty()) rep.diagnostics.push_back(derive_note);
  ledger.above("photon sphere present", "photon-sphere existence", static_cast<double>(comps.size()),
               0.5, comps.empty() ? "no photon-sphere component found" : "");
  if (comps.size() > 1) {
    ledger.below("photon sphere connected", "photon-sphere connectedness",
                 static_cast<double>(comps.size()), 1.5,
                 std::to_string(comps.size()) + " components; a sub-extremal photon sphere of a "
                 "static electro-vacuum spacetime is connected");
  }

  std::vector<PhotonSphereComponent> glued_components;
  std::vector<NeckData> necks;
  double inner_radius = kInfinity;

  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& c = comps[i];
    const std::string tag = "component " + std::to_string(i) + ": ";
    ComponentRecord rec;
    rec.component = c;
    inner_radius = std::min(inner_radius, c.r);

    const auto v = validate_component(c, tol.component);
    rec.valid = v.passed;
    rec.validation_diagnostic = v.diagnostic;
    ledger.below(tag + "round-sphere scalar curvature", "photon-sphere scalar curvature",
                 std::abs(v.scalar_curvature_residual), tol.component);
    ledger.below(tag + "lapse relation N0 H = 2 nu(N)", "photon-sphere lapse relation",
                 std::abs(v.lapse_relation_residual), tol.component);
    ledger.below(tag + "photon-sphere constraint", "photon-sphere constraint",
                 std::abs(v.constraint_residual), tol.component);
    ledger.holds(tag + "positive mean curvature", "positive mean curvature of photon spheres",
                 v.mean_curvature_positive, v.diagnostic);

    rec.q = charge(c);
    rec.mu = neck_mass(c);
    rec.komar_mass = komar_mass(c);
    const auto cls = classify_component(c, tol.classification);
    rec.class_by_mean_curvature = to_string(cls.by_mean_curvature);
    rec.class_by_radius = to_string(cls.by_radius);
    rec.class_by_neck_mass = to_string(cls.by_neck_mass);
    rec.classes_consistent = cls.consistent;
    ledger.above(tag + "H r - 1", "sub-extremality (H r > 1)", cls.hr_minus_one, tol.classification);
    ledger.holds(tag + "sub-extremality tests agree", "sub-extremality equivalences", cls.consistent,
                 "H r vs 1: " + rec.class_by_mean_curvature + ", r^2 vs 4 q^2: " +
                     rec.class_by_radius + ", mu^2 vs q^2: " + rec.class_by_neck_mass);

    if (c.r > profile.r_min() && c.r < profile.r_max()) {
      TrappingOptions topt;
      topt.relative_tolerance = tol.trapping;
      const auto tr = trapping_test(profile, c.r, 100.0 * c.r, tol.integrator, topt);
      rec.trapping = TrappingSummary{to_string(tr.verdict), tr.max_deviation,
                                     tr.max_constraint_residual, to_string(tr.termination)};
      ledger.below(tag + "tangent null geodesic stays on the sphere", "photon-sphere trapping",
                   tr.max_deviation / c.r, tol.trapping,
                   std::string("verdict ") + to_string(tr.verdict));
    }

    try {
      const auto iv = neck_interval(c, tol.classification);
      const auto mc = matching_constants(c, iv);
      NeckRecord nr{iv.q, iv.mu, iv.s, iv.r, mc.alpha, mc.beta, iv.endpoint_residual,
                    neck_mass_factorization_residual(c), mc.alpha_komar, mc.alpha_komar_residual};
      rec.neck = nr;
      ledger.below(tag + "neck endpoint identity", "neck endpoint identity", iv.endpoint_residual, 1e-10);
      ledger.below(tag + "neck mass factorization", "neck mass factorization",
                   nr.factorization_residual, 1e-10);
      ledger.below(tag + "lapse rescaling from Komar mass", "lapse rescaling constant",
                   mc.alpha_komar_residual, closed ? 1e-9 : tol.component * 10.0);
      const double rec_err = std::max(std::abs(iv.mu - M), std::abs(std::abs(iv.q) - std::abs(Q))) /
                             mass_scale;
      ledger.below(tag + "(mu, q) = (M, Q)", "recovery of the global mass and charge", rec_err,
                   tol.recovery, "mu = " + fmt(iv.mu) + ", q = " + fmt(iv.q) + "; M = " + fmt(M) +
                                     ", Q = " + fmt(Q));
      glued_components.push_back(c);
      necks.push_back({iv.q, iv.mu, iv.s, iv.r, mc.alpha, mc.beta});
    } catch (const RefusalError& e) {
      rec.refusal = e.what();
      ledger.refusal(tag + "neck construction", e);
    }

    if (comps.size() == 1) {
      const GlobalCharges gc{M, Q, rec.komar_mass};
      ledger.below("mass decomposition M = m + Phi0 Q", "mass decomposition",
                   mass_decomposition_check(gc, c) / mass_scale, tol.appendix);
      if (Q != 0.0) {
        ledger.below("boundary lapse identity", "boundary lapse identity",
                     boundary_lapse_identity(gc, c), tol.appendix);
      } else {
        rep.diagnostics.push_back("boundary lapse identity not applicable: Q = 0");
      }
      if (gc.m != 0.0) {
        const auto t = extremality_trichotomy(gc, c, tol.classification);
        ledger.below("extremality trichotomy", "extremality trichotomy", t.residual, tol.appendix);
        ledger.holds("trichotomy agrees with component class", "extremality trichotomy", t.agree,
                     std::string("charges: ") + to_string(t.from_charges) +
                         ", component: " + to_string(t.from_component));
      }
    }
    rep.components.push_back(std::move(rec));
  }

  if (Q != 0.0) {
    const double fr = functional_relation_check(profile, GlobalCharges{M, Q, 0.0});
    if (closed) {
      ledger.below("lapse-potential functional relation", "lapse-potential functional relation", fr,
                   tol.appendix);
    } else {
      ledger.note_below("lapse-potential functional relation", "lapse-potential functional relation",
                        fr, tol.appendix);
    }
  }

  // Field equations on the region outside the photon sphere.
  {
    const auto [lo0, hi0] = orbit_bracket(profile);
    const double lo = std::isfinite(inner_radius) ? std::max(inner_radius, lo0) : lo0;
    const double hi = std::min(hi0, 1e3 * std::max(lo, profile.length_scale()));
    if (hi > lo) rep.electrovacuum_residual = electrovacuum_sweep(profile, lo, hi, 400);
    ledger.below("electro-vacuum equations", "static electro-vacuum equations",
                 rep.electrovacuum_residual, tol.electrovacuum);
  }

  if (!glued_components.empty()) {
    const GluedProfile gp = glue(profile, glued_components, necks);
    for (std::size_t b = 0; b < gp.branches.size(); ++b) {
      const auto& br = gp.branches[b];
      const double s = br.boundary(), rc = br.locus();
      const double ev = electrovacuum_sweep(br.neck_profile, s + 1e-3 * (rc - s), rc, 100);
      ledger.below("neck " + std::to_string(b) + " electro-vacuum equations",
                   "static electro-vacuum equations", ev, closed ? tol.electrovacuum : 1e-9);
    }

    try {
      const auto reg = check_C11(gp, tol.stencil_step);
      for (const auto& L : reg.loci) {
        const std::string tag = "gluing at r = " + fmt(L.radius) + ": ";
        LocusRecord lr;
        lr.radius = L.radius;
        for (const auto& ch : L.channels) {
          lr.channels.push_back({ch.channel, ch.value_jump, ch.derivative_jump});
          ledger.below(tag + ch.channel + " value jump", "C^{1,1} matching", ch.value_jump, tol.regularity);
          ledger.below(tag + ch.channel + " derivative jump", "C^{1,1} matching", ch.derivative_jump,
                       tol.regularity);
        }
        lr.mean_curvature_inner = L.mean_curvature_inner;
        lr.mean_curvature_outer = L.mean_curvature_outer;
        lr.mean_curvature_jump = L.mean_curvature_jump;
        lr.hessian_identity_jump = L.hessian_identity_jump;
        lr.hessian_direct_residual = L.hessian_direct_residual;
        lr.minimal_sphere_mean_curvature = L.minimal_sphere_mean_curvature;
        ledger.below(tag + "mean curvature jump", "C^{1,1} matching", L.mean_curvature_jump,
                     tol.regularity);
        ledger.holds(tag + "mean curvature positive on both sides", "outward mean curvature sign",
                     L.mean_curvature_positive,
                     "inner " + fmt(L.mean_curvature_inner) + ", outer " + fmt(L.mean_curvature_outer));
        ledger.below(tag + "Hessian identity jump", "Hessian identity for the collar function",
                     L.hessian_identity_jump, tol.regularity);
        ledger.below(tag + "Hessian direct vs identity", "Hessian identity for the collar function",
                     L.hessian_direct_residual, tol.regularity);
        ledger.below(tag + "minimal sphere mean curvature", "totally geodesic minimal boundary",
                     std::abs(L.minimal_sphere_mean_curvature) * L.radius, tol.regularity);
        rep.regularity.push_back(std::move(lr));
      }
    } catch (const StencilError& e) {
      ledger.below("gluing stencil fits its piece", "C^{1,1} matching", tol.stencil_step,
                   e.max_step(), e.what());
    }

    std::optional<DoubledProfile> dbl;
    try {
      dbl = double_across_boundary(gp);
      for (const auto& d : dbl->reports) {
        rep.doubling.push_back(
            {d.rho_h, d.max_symmetry_residual(), d.max_derivative_jump(), d.lapse_slope_residual});
        ledger.below("doubling symmetry", "reflection across the minimal boundary",
                     d.max_symmetry_residual(), tol.doubling_symmetry);
        ledger.below("doubling smoothness", "reflection across the minimal boundary",
                     d.max_derivative_jump(), tol.doubling_derivative);
      }
    } catch (const RefusalError& e) {
      ledger.refusal("doubling", e);
    }

    if (dbl) {
      const auto& dp = dbl->profile;
      const auto pos = positivity_check(dp, spec.grid);
      PositivityRecord prc;
      prc.interior_margin = pos.interior_margin;
      prc.omega_plus_min = pos.omega_plus_min;
      prc.omega_minus_scaled_min = pos.omega_minus_scaled_min;
      prc.boundary_margin = kInfinity;
      prc.boundary_hr_above_one = true;
      prc.boundary_charge_ratio_below_quarter = true;
      for (const auto& t : pos.boundary) {
        prc.boundary_margin = std::min(prc.boundary_margin, t.margin());
        prc.boundary_hr_above_one = prc.boundary_hr_above_one && t.hr_above_one;
        prc.boundary_charge_ratio_below_quarter =
            prc.boundary_charge_ratio_below_quarter && t.charge_ratio_below_quarter;
      }
      rep.positivity = prc;
      ledger.above("N - 1 +- Phi < 0 margin", "conformal factor positivity", pos.interior_margin, 0.0);
      ledger.above("boundary sign test margin", "boundary sign chain", prc.boundary_margin, 0.0);
      ledger.above("conformal factor on the plus side", "conformal factor positivity",
                   pos.omega_plus_min, 0.0);
      ledger.above("conformal factor on the minus side", "conformal factor positivity",
                   pos.omega_minus_scaled_min, 0.0);
      for (const auto& d : pos.diagnostics) rep.diagnostics.push_back(d);

      const auto sweep = curvature_sweep(dp, spec.grid, DerivativeMode::analytic);
      CurvatureRecord cr;
      cr.derivatives = to_string(DerivativeMode::analytic);
      cr.max_identity_residual = sweep.max_identity_residual;
      cr.min_identity = sweep.min_identity;
      cr.max_radial = sweep.max_radial;
      cr.max_tangential = sweep.max_tangential;
      cr.worst_radius = sweep.worst_radius;
      cr.worst_side = to_string(sweep.worst_side);
      cr.one_sided_loci = sweep.loci;
      rep.curvature = cr;
      ledger.below("scalar-curvature identity vs direct curvature", "conformal scalar-curvature identity",
                   sweep.max_identity_residual, tol.curvature_identity);
      ledger.above("conformal scalar curvature nonnegative", "conformal scalar-curvature identity",
                   sweep.min_identity, -1e-10);
      const auto flat = flatness_check(sweep, tol.flatness);
      ledger.below("conformal metric flat", "flatness of the conformal metric", flat.residual,
                   tol.flatness,
                   "largest R^2 |K| = " + fmt(flat.residual) + " at r = " + fmt(flat.worst_radius) +
                       " (" + to_string(flat.worst_side) + " side)");

      const auto mr = adm_mass_hat(dp, 0);
      rep.mass = MassRecord{mr.extrapolated, mr.decay_exponent, mr.monotone, mr.area_radii, mr.masses};
      ledger.below("conformal mass", "zero mass of the conformal metric",
                   std::abs(mr.extrapolated) / std::max(std::abs(M), 1e-300), tol.mass);
      ledger.holds("conformal area radius increasing on the tail", "zero mass of the conformal metric",
                   mr.monotone, mr.diagnostic);

      try {
        const auto cc = minus_end_compactification_check(dp.branches[0].exterior, M, Q);
        rep.compactification = CompactificationRecord{cc.fitted_exponent, cc.fitted_coefficient,
                                                      cc.predicted_exponent, cc.predicted_coefficient,
                                                      cc.decreasing};
        ledger.below("minus-end decay exponent", "compactification of the minus end",
                     std::abs(cc.fitted_exponent - cc.predicted_exponent), tol.compactification_exponent);
        ledger.below("minus-end decay coefficient", "compactification of the minus end",
                     std::abs(cc.fitted_coefficient - cc.predicted_coefficient) /
                         std::abs(cc.predicted_coefficient),
                     tol.compactification_coefficient);
        ledger.holds("minus-end area radius shrinks", "compactification of the minus end", cc.decreasing,
                     "conformal area radius must decrease toward the added point");
      } catch (const RefusalError& e) {
        ledger.refusal("minus-end compactification", e);
      }
    }
  }

  // Asymptotic decay rates (diagnostic).
  {
    const auto rs = doubling_tail(profile, 8);
    std::vector<double> dn, dp;
    for (double r : rs) {
      const auto s = profile.at(r);
      dn.push_back(s.N - 1.0 + M / r);
      dp.push_back(s.phi - Q / r);
    }
    DecayRecord dr{decay_fit(rs, dn), decay_fit(rs, dp)};
    const double tau = spec.decay_threshold.value_or(tol.decay_exponent);
    if (dr.lapse_exponent) {
      ledger.note_above("lapse decay exponent", "asymptotic flatness", *dr.lapse_exponent, tau);
    }
    if (dr.potential_exponent) {
      ledger.note_above("potential decay exponent", "asymptotic flatness", *dr.potential_exponent, tau);
    }
    rep.decay = dr;
  }

  rep.verdict = rep.violations.empty()
                    ? "consistent-with-unique-RN(M=" + fmt(M) + ", Q=" + fmt(Q) + ")"
                    : "violations";
  return rep;
}

NBodyVerdict nbody_check(const SpacetimeSpec& spec) {
  NBodyVerdict out;
  std::vector<PhotonSphereComponent> bodies = spec.components;
  if (spec.derive && (spec.rn || spec.table)) bodies = derive_components(build_profile(spec));
  out.bodies = bodies.size();
  out.black_holes = spec.black_holes.size();

  std::vector<std::string> failures;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    BodyHypothesis h;
    h.index = i;
    try {
      const auto v = validate_component(bodies[i], spec.tolerances.component);
      h.valid = v.passed;
      const auto cls = classify_component(bodies[i], spec.tolerances.classification);
      h.extremality = to_string(cls.by_mean_curvature);
      h.passed = h.valid && cls.by_mean_curvature == ExtremalityClass::sub_extremal;
      if (!h.valid) h.reason = v.diagnostic;
      else if (!h.passed) h.reason = "photon sphere is " + h.extremality + ", not sub-extremal";
    } catch (const InvalidInput& e) {
      h.reason = e.what();
    }
    if (!h.passed) failures.push_back("body " + std::to_string(i) + ": " + h.reason);
    out.hypotheses.push_back(h);
  }
  for (const auto& b : spec.black_holes) {
    if (!(b.surface_gravity > 0.0)) {
      failures.push_back(b.label + ": degenerate horizon (surface gravity " + fmt(b.surface_gravity) + ")");
    }
  }

  if (!failures.empty()) {
    out.hypothesis_failure = true;
    out.verdict = "hypothesis failure";
    std::string r;
    for (const auto& f : failures) r += (r.empty() ? "" : "; ") + f;
    out.reason = r;
  } else if (out.bodies + out.black_holes > 1) {
    out.excluded = true;
    out.verdict = "configuration excluded by uniqueness";
    out.reason = std::to_string(out.bodies) + " bodies and " + std::to_string(out.black_holes) +
                 " black holes: k + n > 1, while uniqueness leaves a single sub-extremal RN "
                 "exterior with connected photon sphere or horizon";
  } else {
    out.verdict = "not excluded";
    out.reason = "k + n <= 1: the uniqueness argument says nothing about a single object";
  }
  return out;
}

}  // namespace phcert
