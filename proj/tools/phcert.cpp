#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "phcert/certifier.hpp"
#include "phcert/curves.hpp"
#include "phcert/errors.hpp"
#include "phcert/report_json.hpp"

using namespace phcert;

namespace {

enum Exit { kOk = 0, kViolations = 1, kInputError = 2 };

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

int photon_spheres(double M, double Q) {
  const RNParams p{M, Q};
  nlohmann::json j;
  j["M"] = M;
  j["Q"] = Q;
  j["class"] = to_string(classify(p));
  j["radii"] = photon_sphere_radii(p);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int run_certify(const std::string& spec_path, const std::string& out) {
  const auto rep = certify(load_spec(spec_path));
  write_text(out, emit_json(rep));
  std::cerr << rep.verdict << " (" << rep.violations.size() << " violations)\n";
  return rep.consistent() ? kOk : kViolations;
}

int run_nbody(const std::string& spec_path) {
  const auto v = nbody_check(load_spec(spec_path));
  std::cout << nlohmann::json(v).dump(2) << "\n";
  return v.hypothesis_failure ? kViolations : kOk;
}

int run_trace(const std::string& spec_path, double r0, double lambda_max, double sweep,
              const std::string& out) {
  const auto spec = load_spec(spec_path);
  const auto profile = build_profile(spec);
  if (!(r0 > profile.r_min() && r0 < profile.r_max())) {
    throw InvalidInput("r0 outside the profile domain");
  }
  const double lam = lambda_max > 0.0 ? lambda_max : 100.0 * r0;
  const auto init = tangent_launch(profile, r0, lam, sweep);
  const auto tr = integrate_null_geodesic(profile, init, lam, spec.tolerances.integrator);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  write_text(out, os.str());
  std::cerr << "termination: " << to_string(tr.termination) << "\n";
  return kOk;
}

int run_emit(const std::string& spec_path, const std::string& dir) {
  for (const auto& p : emit_curves(load_spec(spec_path), dir)) std::cout << p.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-sphere uniqueness certifier for static electro-vacuum data"};
  app.require_subcommand(1);

  double M = 0.0, Q = 0.0;
  auto* ps = app.add_subcommand("photon-spheres", "RN photon-sphere radii as JSON");
  ps->add_option("M", M, "mass")->required();
  ps->add_option("Q", Q, "charge")->required();

  std::string spec_path, out;
  auto* cert = app.add_subcommand("certify", "Run the certification pipeline; JSON report");
  cert->add_option("spec", spec_path, "spec.json")->required();
  cert->add_option("--out,-o", out, "report path (default stdout)");

  auto* nb = app.add_subcommand("nbody", "Multi-body exclusion verdict");
  nb->add_option("spec", spec_path, "spec.json")->required();

  double r0 = 0.0, lambda_max = 0.0, sweep = 10.0;
  auto* tr = app.add_subcommand("trace", "Tangent null geodesic as CSV");
  tr->add_option("spec", spec_path, "spec.json")->required();
  tr->add_option("--r0", r0, "launch radius")->required();
  tr->add_option("--lambda", lambda_max, "affine length (default 100 r0)");
  tr->add_option("--sweep", sweep, "angle a circular orbit covers over the affine length");
  tr->add_option("--out,-o", out, "CSV path (default stdout)");

  std::string dir;
  auto* em = app.add_subcommand("emit-curves", "Write CSV curve bundles");
  em->add_option("spec", spec_path, "spec.json")->required();
  em->add_option("--out,-o", dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*ps) return photon_spheres(M, Q);
    if (*cert) return run_certify(spec_path, out);
    if (*nb) return run_nbody(spec_path);
    if (*tr) return run_trace(spec_path, r0, lambda_max, sweep, out);
    if (*em) return run_emit(spec_path, dir);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
