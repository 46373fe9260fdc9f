#include "phcert/report_json.hpp"

#include "phcert/errors.hpp"

namespace phcert {

using nlohmann::json;

void to_json(json& j, const BodyHypothesis& h) {
  j = json{{"index", h.index},
           {"valid", h.valid},
           {"extremality", h.extremality},
           {"passed", h.passed},
           {"reason", h.reason}};
}

void to_json(json& j, const NBodyVerdict& v) {
  j = json{{"bodies", v.bodies},
           {"black_holes", v.black_holes},
           {"hypotheses", v.hypotheses},
           {"excluded", v.excluded},
           {"hypothesis_failure", v.hypothesis_failure},
           {"verdict", v.verdict},
           {"reason", v.reason}};
}

std::string emit_json(const CertificationReport& r) { return json(r).dump(2) + "\n"; }

CertificationReport parse_report(const std::string& text) {
  try {
    return json::parse(text).get<CertificationReport>();
  } catch (const json::exception& e) {
    throw ParseError("/", std::string("not a certification report: ") + e.what());
  }
}

}  // namespace phcert
