#pragma once

#include <string>

#include <json.hpp>

#include "srec/diophantine.hpp"
#include "srec/recurrence.hpp"
#include "srec/verdict.hpp"

namespace srec {

// JSON serializations of report types. All output derives from data only,
// so identical inputs yield byte-identical text.

nlohmann::json spectrum_to_json(const SpectrumReport& rep);
nlohmann::json certificate_to_json(const ReturnCertificate& cert);
nlohmann::json verdict_to_json(const RecurrenceVerdict& verdict);
nlohmann::json classification_to_json(const SRecClassification& c);
nlohmann::json return_solution_to_json(const ReturnSolution& sol);
nlohmann::json suite_case_to_json(const SuiteCase& c);

std::string to_string(VerdictStatus s);
std::string to_string(FinalStatus s);
std::string to_string(Tristate t);

// JSON-lines body (one case per line plus a totals line) and a CSV summary
// with one row per case.
std::string suite_to_jsonl(const SuiteReport& rep);
std::string suite_to_csv(const SuiteReport& rep);

}  // namespace srec
