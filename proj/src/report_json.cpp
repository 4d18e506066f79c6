#include "srec/report_json.hpp"

#include <sstream>

#include "srec/operator_json.hpp"

namespace srec {

using nlohmann::json;

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::certified: return "certified";
    case VerdictStatus::refuted_by_spectrum: return "refuted_by_spectrum";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(FinalStatus s) {
  switch (s) {
    case FinalStatus::super_recurrent: return "super_recurrent";
    case FinalStatus::not_super_recurrent: return "not_super_recurrent";
    case FinalStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::yes: return "yes";
    case Tristate::no: return "no";
    case Tristate::unknown: return "unknown";
  }
  return "unknown";
}

json spectrum_to_json(const SpectrumReport& rep) {
  json points = json::array();
  for (const cplx& p : rep.points) points.push_back(complex_to_json(p));
  json adj = json::array();
  for (const cplx& p : rep.adjoint_points) adj.push_back(complex_to_json(p));
  json clusters = json::array();
  for (const EigenCluster& c : rep.clusters) {
    clusters.push_back(json{{"value", complex_to_json(c.value)},
                            {"algebraic", c.algebraic},
                            {"geometric", c.geometric}});
  }
  json j{{"points", points},
         {"moduli", rep.moduli},
         {"modulus_spread", rep.modulus_spread},
         {"adjoint_points", adj},
         {"diagonalizable", to_string(rep.diagonalizable)},
         {"clusters", clusters},
         {"dense_range", rep.dense_range},
         {"determinant", complex_to_json(rep.determinant_witness)},
         {"truncation_artifact", rep.truncation_artifact},
         {"notes", rep.notes}};
  if (rep.circle_radius) {
    j["circle_radius"] = *rep.circle_radius;
  } else {
    j["circle_radius"] = nullptr;
  }
  return j;
}

json certificate_to_json(const ReturnCertificate& cert) {
  return json{{"n", cert.n},
              {"lambda", complex_to_json(cert.lambda)},
              {"residual", cert.residual}};
}

json verdict_to_json(const RecurrenceVerdict& verdict) {
  json certs = json::array();
  for (const ReturnCertificate& c : verdict.certificates) {
    certs.push_back(certificate_to_json(c));
  }
  return json{{"status", to_string(verdict.status)},
              {"certificates", certs},
              {"params", json{{"epsilon", verdict.params.epsilon},
                              {"n_max", verdict.params.n_max},
                              {"n_min", verdict.params.n_min}}},
              {"notes", verdict.notes}};
}

json classification_to_json(const SRecClassification& c) {
  json probes = json::array();
  for (const ProbeOutcome& p : c.probes) {
    json pj{{"index", p.index},
            {"standard_basis", p.standard_basis},
            {"status", to_string(p.status)}};
    if (p.certificate) pj["certificate"] = certificate_to_json(*p.certificate);
    probes.push_back(std::move(pj));
  }
  return json{{"operator_id", c.operator_id},
              {"final", to_string(c.final_status)},
              {"necessary_pass", c.necessary_pass},
              {"sufficient_pass", c.sufficient.passed},
              {"sufficient_reason", c.sufficient.reason},
              {"certified_fraction", c.certified_fraction},
              {"dynamic_status", to_string(c.dynamic_status)},
              {"witness", c.witness},
              {"notes", c.notes},
              {"spectrum", spectrum_to_json(c.spectral)},
              {"probes", probes}};
}

json return_solution_to_json(const ReturnSolution& sol) {
  return json{{"n", sol.n},
              {"distances", sol.distances},
              {"method", sol.method == ReturnMethod::scan ? "scan" : "lll"},
              {"fell_back_to_scan", sol.fell_back_to_scan}};
}

json suite_case_to_json(const SuiteCase& c) {
  return json{{"case", c.index},
              {"generator", c.generator},
              {"property", c.property},
              {"pass", c.pass},
              {"witness", c.witness}};
}

std::string suite_to_jsonl(const SuiteReport& rep) {
  std::ostringstream out;
  for (const SuiteCase& c : rep.cases) out << suite_case_to_json(c).dump() << "\n";
  out << json{{"seed", rep.seed},
              {"max_dim", rep.sizes.max_dim},
              {"cases_per_check", rep.sizes.cases_per_check},
              {"total", rep.cases.size()},
              {"passed", rep.passed},
              {"failed", rep.failed}}
             .dump()
      << "\n";
  return out.str();
}

namespace {

std::string csv_escape(const std::string& s) {
  bool needs_quote = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quote) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string suite_to_csv(const SuiteReport& rep) {
  std::ostringstream out;
  out << "case,generator,property,pass,witness\n";
  for (const SuiteCase& c : rep.cases) {
    out << c.index << "," << csv_escape(c.generator) << "," << csv_escape(c.property)
        << "," << (c.pass ? "true" : "false") << "," << csv_escape(c.witness) << "\n";
  }
  return out.str();
}

}  // namespace srec
