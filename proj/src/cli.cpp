#include "srec/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srec/operator_json.hpp"
#include "srec/report_json.hpp"

namespace srec {

namespace {

using nlohmann::json;

struct ExperimentConfig {
  std::vector<OperatorSpec> operators;
  std::vector<Vector> vectors;  // optional probe vectors
  DetectionParams params;
  std::uint64_t seed = 0;
};

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw invalid_input("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw invalid_input("config: expected a JSON object");
  if (j.contains("schema") && j["schema"].is_number_integer() &&
      j["schema"].get<int>() != 1) {
    throw invalid_input("config: unsupported schema version");
  }
  ExperimentConfig cfg;
  if (!j.contains("operators") || !j["operators"].is_array() || j["operators"].empty()) {
    throw invalid_input("config: \"operators\" must be a nonempty array");
  }
  for (size_t i = 0; i < j["operators"].size(); ++i) {
    cfg.operators.push_back(operator_from_json(
        j["operators"][i], "operators[" + std::to_string(i) + "]"));
  }
  if (j.contains("vectors")) {
    if (!j["vectors"].is_array()) throw invalid_input("config: \"vectors\" must be an array");
    for (size_t i = 0; i < j["vectors"].size(); ++i) {
      cfg.vectors.push_back(
          vector_from_json(j["vectors"][i], "vectors[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw invalid_input("config: \"params\" must be an object");
    if (p.contains("epsilon")) cfg.params.epsilon = p["epsilon"].get<double>();
    if (p.contains("n_max")) cfg.params.n_max = p["n_max"].get<long>();
    if (p.contains("n_min")) cfg.params.n_min = p["n_min"].get<long>();
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Report sink: stdout by default, a file with --out. Relative paths are
// resolved against SREC_OUT_DIR when that variable is set.
class ReportSink {
public:
  ReportSink(const std::string& out_path, std::ostream& fallback)
      : fallback_(fallback) {
    if (out_path.empty()) return;
    std::filesystem::path p(out_path);
    if (p.is_relative()) {
      if (const char* dir = std::getenv("SREC_OUT_DIR")) {
        p = std::filesystem::path(dir) / p;
      }
    }
    file_.open(p);
    if (!file_) throw invalid_input("cannot open output file " + p.string());
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void write_header(std::ostream& os, const std::string& command) {
  os << json{{"schema", 1}, {"command", command}, {"timestamp", timestamp_utc()}}.dump()
     << "\n";
}

std::vector<Vector> probes_for(const ExperimentConfig& cfg, const OperatorSpec& op) {
  if (!cfg.vectors.empty()) {
    for (const Vector& v : cfg.vectors) {
      if (v.size() != static_cast<size_t>(op.dim())) {
        throw invalid_input("config: vector dimension does not match operator");
      }
    }
    return cfg.vectors;
  }
  std::vector<Vector> out;
  for (int i = 0; i < op.dim(); ++i) {
    Vector e(op.dim(), cplx(0.0));
    e[i] = 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

int cmd_spectrum(const std::string& config_path, const std::string& out_path,
                 std::ostream& out) {
  ExperimentConfig cfg = load_config(config_path);
  ReportSink sink(out_path, out);
  write_header(sink.stream(), "spectrum");
  for (size_t i = 0; i < cfg.operators.size(); ++i) {
    SpectrumReport rep = spectrum(cfg.operators[i]);
    json line = spectrum_to_json(rep);
    line["op"] = i;
    sink.stream() << line.dump() << "\n";
  }
  return 0;
}

int cmd_detect(const std::string& config_path, const std::string& out_path,
               const std::string& mode, std::ostream& out) {
  ExperimentConfig cfg = load_config(config_path);
  ReportSink sink(out_path, out);
  write_header(sink.stream(), "detect");
  for (size_t i = 0; i < cfg.operators.size(); ++i) {
    const OperatorSpec& op = cfg.operators[i];
    std::vector<Vector> probes = probes_for(cfg, op);
    for (size_t k = 0; k < probes.size(); ++k) {
      RecurrenceVerdict v = (mode == "recurrence")
                                ? detect_recurrence(op, probes[k], cfg.params)
                                : detect_super_recurrence(op, probes[k], cfg.params);
      json line = verdict_to_json(v);
      line["op"] = i;
      line["vector"] = k;
      sink.stream() << line.dump() << "\n";
    }
  }
  return 0;
}

int cmd_classify(const std::string& config_path, const std::string& out_path,
                 std::ostream& out) {
  ExperimentConfig cfg = load_config(config_path);
  ReportSink sink(out_path, out);
  write_header(sink.stream(), "classify");
  for (size_t i = 0; i < cfg.operators.size(); ++i) {
    ClassificationParams params;
    params.detection = cfg.params;
    params.seed = cfg.seed;
    SRecClassification c =
        classify(cfg.operators[i], params, "op" + std::to_string(i));
    json line = classification_to_json(c);
    line["op"] = i;
    sink.stream() << line.dump() << "\n";
  }
  return 0;
}

int cmd_suite(std::uint64_t seed, int dims, int cases, const std::string& out_path,
              const std::string& csv_path, std::ostream& out) {
  SuiteReport rep = property_suite(seed, SuiteSizes{dims, cases});
  ReportSink sink(out_path, out);
  write_header(sink.stream(), "suite");
  sink.stream() << suite_to_jsonl(rep);
  if (!csv_path.empty()) {
    ReportSink csv_sink(csv_path, out);
    csv_sink.stream() << suite_to_csv(rep);
  }
  if (!out_path.empty()) {
    out << "suite: " << rep.passed << "/" << rep.cases.size() << " cases passed\n";
  }
  return 0;  // failing cases are data, not an error
}

int cmd_returns(const std::vector<double>& thetas, double delta,
                const std::string& method, long long n_max,
                const std::string& out_path, std::ostream& out) {
  AngleSystem sys{thetas, delta};
  std::optional<ReturnSolution> sol;
  if (method == "lll") {
    sol = simultaneous_return_lll(sys);
  } else {
    // Default budget: the pigeonhole bound, capped so hard systems report
    // infeasible-within-budget instead of scanning for hours.
    long long budget = n_max > 0 ? n_max
                                 : std::min(pigeonhole_budget(sys), 100'000'000LL);
    sol = scan_return(sys, budget);
  }
  ReportSink sink(out_path, out);
  write_header(sink.stream(), "returns");
  if (sol) {
    sink.stream() << return_solution_to_json(*sol).dump() << "\n";
  } else {
    sink.stream() << json{{"infeasible_within_budget", true}}.dump() << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"super-recurrence laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  std::string mode = "super";
  std::string method = "scan";
  std::uint64_t seed = 42;
  int dims = 6;
  int cases = 50;
  long long n_max = 0;
  std::string thetas_arg;
  double delta = 0.01;

  auto* sc_spectrum = app.add_subcommand("spectrum", "spectrum reports for a config");
  sc_spectrum->add_option("config", config_path, "experiment config (JSON)")->required();
  sc_spectrum->add_option("-o,--out", out_path, "report file (JSON-lines)");

  auto* sc_detect = app.add_subcommand("detect", "recurrence detection verdicts");
  sc_detect->add_option("config", config_path, "experiment config (JSON)")->required();
  sc_detect->add_option("-o,--out", out_path, "report file (JSON-lines)");
  sc_detect->add_option("--mode", mode, "super | recurrence")
      ->check(CLI::IsMember({"super", "recurrence"}));

  auto* sc_classify = app.add_subcommand("classify", "operator-level classifications");
  sc_classify->add_option("config", config_path, "experiment config (JSON)")->required();
  sc_classify->add_option("-o,--out", out_path, "report file (JSON-lines)");

  auto* sc_suite = app.add_subcommand("suite", "run the theorem suite");
  sc_suite->add_option("--seed", seed, "suite seed");
  sc_suite->add_option("--dims", dims, "max generator dimension");
  sc_suite->add_option("--cases", cases, "cases per check");
  sc_suite->add_option("-o,--out", out_path, "report file (JSON-lines)");
  sc_suite->add_option("--csv", csv_path, "CSV summary file");

  auto* sc_returns = app.add_subcommand("returns", "simultaneous return times");
  sc_returns->add_option("--thetas", thetas_arg, "comma-separated angles in [0,1)")
      ->required();
  sc_returns->add_option("--delta", delta, "target torus resolution")->required();
  sc_returns->add_option("--method", method, "scan | lll")
      ->check(CLI::IsMember({"scan", "lll"}));
  sc_returns->add_option("--n-max", n_max, "scan budget (default: pigeonhole bound)");
  sc_returns->add_option("-o,--out", out_path, "report file (JSON-lines)");

  std::vector<const char*> argv;
  argv.push_back("srec");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (sc_spectrum->parsed()) return cmd_spectrum(config_path, out_path, out);
    if (sc_detect->parsed()) return cmd_detect(config_path, out_path, mode, out);
    if (sc_classify->parsed()) return cmd_classify(config_path, out_path, out);
    if (sc_suite->parsed()) return cmd_suite(seed, dims, cases, out_path, csv_path, out);
    if (sc_returns->parsed()) {
      std::vector<double> thetas;
      std::stringstream ss(thetas_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          thetas.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw invalid_input("--thetas: cannot parse \"" + tok + "\"");
        }
      }
      return cmd_returns(thetas, delta, method, n_max, out_path, out);
    }
  } catch (const invalid_input& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const non_convergence& e) {
    err << "non-convergence: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace srec
