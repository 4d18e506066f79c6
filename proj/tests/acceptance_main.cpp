// Acceptance suite: one check per criterion, one pass/fail line each.
// Exits nonzero if any criterion fails. argv[1] (optional) is the path to
// the CLI binary, used by the determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "srec/diophantine.hpp"
#include "srec/generators.hpp"
#include "srec/recurrence.hpp"
#include "srec/report_json.hpp"
#include "srec/verdict.hpp"

using namespace srec;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << index << " (" << name
            << ")" << (detail.empty() ? "" : ": " + detail) << "\n";
  if (!pass) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// ---- criterion 1: equal-modulus diagonal reproduction --------------------

void criterion_equal_modulus_reproduction() {
  Timer timer;
  std::mt19937_64 rng(0xc1);
  const double radii[3] = {0.5, 1.0, 2.0};
  int certified = 0, expected = 0;
  int recurrence_hits = 0;
  bool budget_ok = true;
  std::string detail;

  for (int case_i = 0; case_i < 20; ++case_i) {
    int dim = 2 + case_i % 5;
    double r = radii[case_i % 3];
    PlantedOperator gen = planted_equal_modulus_diagonal(rng, dim, r);
    long budget = dirichlet_budget(gen.op, 1e-6);
    DetectionParams params{1e-6, std::min<long>(budget, 20000), 1};

    std::vector<Vector> probes;
    for (int i = 0; i < dim; ++i) {
      Vector e(dim, cplx(0.0));
      e[i] = 1.0;
      probes.push_back(std::move(e));
    }
    for (int i = 0; i < 8; ++i) probes.push_back(random_unit_vector(rng, dim));

    for (const Vector& x : probes) {
      ++expected;
      RecurrenceVerdict v = detect_super_recurrence(gen.op, x, params);
      if (v.status == VerdictStatus::certified) {
        ++certified;
        if (v.certificates.front().n > budget) budget_ok = false;
      } else if (detail.empty()) {
        detail = "uncertified probe on " + gen.label;
      }
    }

    if (r != 1.0) {
      for (const Vector& x : probes) {
        RecurrenceVerdict v = detect_recurrence(gen.op, x, {0.1, 10000, 1});
        if (v.status == VerdictStatus::certified) ++recurrence_hits;
      }
    }
  }
  double elapsed = timer.seconds();
  bool pass = certified == expected && recurrence_hits == 0 && budget_ok &&
              elapsed < 10.0;
  std::ostringstream d;
  d << certified << "/" << expected << " probes certified at eps=1e-6, "
    << recurrence_hits << " spurious recurrence certificates (R != 1), "
    << "runtime " << elapsed << " s";
  if (!detail.empty()) d << "; " << detail;
  report(1, "equal-modulus diagonal reproduction", pass, d.str());
}

// ---- criterion 2: separation of the implication diagram ------------------

void criterion_separation_diagram() {
  const cplx I{0.0, 1.0};
  bool pass = true;
  std::string detail;

  // (a) recurrent implies super-recurrent, realized on diag(i, -1).
  OperatorSpec rot = OperatorSpec::diagonal({I, -1.0});
  RecurrenceVerdict rec = detect_recurrence(rot, {1.0, 1.0}, {1e-9, 100, 1});
  RecurrenceVerdict sup = detect_super_recurrence(rot, {1.0, 1.0}, {1e-9, 100, 1});
  if (rec.status != VerdictStatus::certified || sup.status != VerdictStatus::certified) {
    pass = false;
    detail += "unimodular rotation not certified both ways; ";
  }

  // (b) strictness: diag(2i, 2) is super-recurrent but never recurrent.
  OperatorSpec flagship = OperatorSpec::diagonal({2.0 * I, 2.0});
  SRecClassification cls = classify(flagship, ClassificationParams{});
  bool non_recurrent = true;
  for (int i = 0; i < 6; ++i) {
    std::mt19937_64 rng(100 + i);
    Vector x = (i < 2) ? Vector{i == 0 ? cplx(1.0) : cplx(0.0),
                                i == 0 ? cplx(0.0) : cplx(1.0)}
                       : random_unit_vector(rng, 2);
    if (detect_recurrence(flagship, x, {0.1, 10000, 1}).status ==
        VerdictStatus::certified) {
      non_recurrent = false;
    }
  }
  if (cls.final_status != FinalStatus::super_recurrent || !non_recurrent) {
    pass = false;
    detail += "diag(2i,2) separation failed; ";
  }

  // (c) a super-recurrent vector without operator super-recurrence:
  // diag(lambda, 0, ..., 0) keeps e1 certified but fails dense range.
  OperatorSpec rank_one = OperatorSpec::diagonal({cplx(1.3, 0.4), 0.0, 0.0, 0.0});
  SRecClassification rc = classify(rank_one, ClassificationParams{});
  RecurrenceVerdict e1 =
      detect_super_recurrence(rank_one, {1.0, 0.0, 0.0, 0.0}, {1e-9, 100, 1});
  if (rc.final_status != FinalStatus::not_super_recurrent ||
      rc.witness.find("dense range") == std::string::npos ||
      e1.status != VerdictStatus::certified) {
    pass = false;
    detail += "rank-one example failed; ";
  }
  report(2, "separation diagram", pass,
         pass ? "all three strict implications realized" : detail);
}

// ---- criterion 3: power theorem -------------------------------------------

void criterion_power_theorem() {
  std::mt19937_64 rng(0xc3);
  const int powers[3] = {2, 3, 5};
  int cases = 0, exact_ok = 0, converse_ok = 0;
  std::string detail;
  for (int case_i = 0; case_i < 50; ++case_i) {
    int dim = 2 + case_i % 5;
    double r = (case_i % 3 == 0) ? 0.5 : (case_i % 3 == 1 ? 1.0 : 2.0);
    // Denominators capped at 120 keep lambda = R^{-pn} in double range for
    // R = 2, p = 5.
    PlantedOperator gen = (case_i % 2)
                              ? planted_conjugated_equal_modulus(rng, dim, r, 120)
                              : planted_equal_modulus_diagonal(rng, dim, r, 120);
    Vector x = random_unit_vector(rng, dim);
    for (int pi = 0; pi < 3; ++pi) {
      int p = powers[pi];
      ++cases;
      OperatorSpec tp = OperatorSpec::power(p, gen.op);
      RecurrenceVerdict vp = detect_super_recurrence(tp, x, {1e-6, 20000, 1});
      if (vp.status != VerdictStatus::certified) {
        if (detail.empty()) detail = "T^p certification missing on " + gen.label;
        continue;
      }
      const ReturnCertificate& cert = vp.certificates.front();
      double res_t = verify_certificate(gen.op, x, {cert.n * p, cert.lambda, 0.0});
      if (std::abs(res_t - cert.residual) <= 1e-10) ++exact_ok;

      RecurrenceVerdict vt = detect_super_recurrence(gen.op, x, {1e-6, 20000, 1});
      if (vt.status == VerdictStatus::certified) {
        RecurrenceVerdict back = detect_super_recurrence(tp, x, {1e-5, 20000, 1});
        if (back.status == VerdictStatus::certified) ++converse_ok;
      }
    }
  }
  bool pass = exact_ok == cases && converse_ok == cases;
  std::ostringstream d;
  d << "exact transfer " << exact_ok << "/" << cases << ", converse certification "
    << converse_ok << "/" << cases;
  if (!detail.empty()) d << "; " << detail;
  report(3, "power theorem certificate transfer", pass, d.str());
}

// ---- criterion 4: spectral necessity ---------------------------------------

void criterion_spectral_necessity() {
  std::mt19937_64 rng(0xc4);
  int refuted = 0, confirmed = 0, recovered = 0;
  const int half = 50;
  std::string detail;
  for (int case_i = 0; case_i < half; ++case_i) {
    int dim = 2 + case_i % 5;
    PlantedOperator control =
        planted_unequal_modulus_control(rng, dim, 0.05, case_i % 2 == 1);
    SRecClassification c = classify(control.op, ClassificationParams{});
    if (c.final_status == FinalStatus::not_super_recurrent && !c.witness.empty()) {
      ++refuted;
    } else if (detail.empty()) {
      detail = "control not refuted: " + control.label;
    }
    if (optimal_pairing_distance(c.spectral.points, control.eigenvalues) <= 1e-6) {
      ++recovered;
    }
  }
  for (int case_i = 0; case_i < half; ++case_i) {
    int dim = 2 + case_i % 5;
    double r = (case_i % 3 == 0) ? 0.5 : (case_i % 3 == 1 ? 1.0 : 2.0);
    PlantedOperator gen = planted_conjugated_equal_modulus(rng, dim, r);
    SRecClassification c = classify(gen.op, ClassificationParams{});
    if (c.final_status == FinalStatus::super_recurrent) {
      ++confirmed;
    } else if (detail.empty()) {
      detail = "spread-0 case not confirmed: " + gen.label;
    }
    if (optimal_pairing_distance(c.spectral.points, gen.eigenvalues) <= 1e-6) {
      ++recovered;
    }
  }
  bool pass = refuted == half && confirmed == half && recovered == 2 * half;
  std::ostringstream d;
  d << refuted << "/" << half << " controls refuted with witness, " << confirmed << "/"
    << half << " spread-0 cases super_recurrent, spectral recovery " << recovered << "/"
    << 2 * half;
  if (!detail.empty()) d << "; " << detail;
  report(4, "spectral necessity", pass, d.str());
}

// ---- criterion 5: hyperplane theorem ----------------------------------------

void criterion_hyperplane() {
  std::mt19937_64 rng(0xc5);
  int operators_checked = 0, eigen_checked = 0, eigen_ok = 0;
  double worst_invariance = 0.0;
  std::string detail;
  for (int case_i = 0; case_i < 20; ++case_i) {
    int dim = 3 + case_i % 4;
    double r = (case_i % 3 == 0) ? 0.5 : (case_i % 3 == 1 ? 1.0 : 2.0);
    PlantedOperator gen = (case_i % 2) ? planted_conjugated_equal_modulus(rng, dim, r)
                                       : planted_equal_modulus_diagonal(rng, dim, r);
    ++operators_checked;
    for (const cplx& lambda : gen.eigenvalues) {
      ++eigen_checked;
      HyperplaneResult hr = hyperplane_restriction(gen.op, lambda, 1e-6);
      if (hr.status != HyperplaneStatus::ok) {
        if (detail.empty()) detail = "decomposition failed on " + gen.label;
        continue;
      }
      worst_invariance =
          std::max(worst_invariance, hr.decomposition->invariance_residual);
      if (hr.decomposition->invariance_residual > 1e-8) {
        if (detail.empty()) detail = "invariance residual too large on " + gen.label;
        continue;
      }
      OperatorSpec rotated =
          OperatorSpec::scaled(1.0 / lambda, hr.decomposition->compressed);
      const int d0 = rotated.dim();
      bool all_recurrent = true;
      for (int j = 0; j < d0 + 2; ++j) {
        Vector probe;
        if (j < d0) {
          probe.assign(d0, cplx(0.0));
          probe[j] = 1.0;
        } else {
          probe = random_unit_vector(rng, d0);
        }
        RecurrenceVerdict v = detect_recurrence(rotated, probe, {1e-4, 100000, 1});
        if (v.status != VerdictStatus::certified) {
          all_recurrent = false;
          break;
        }
      }
      if (all_recurrent) {
        ++eigen_ok;
      } else if (detail.empty()) {
        detail = "compressed operator not recurrent on " + gen.label;
      }
    }
  }
  bool pass = eigen_ok == eigen_checked && operators_checked == 20;
  std::ostringstream d;
  d << eigen_ok << "/" << eigen_checked << " adjoint eigenvalues verified across "
    << operators_checked << " operators, worst invariance residual " << worst_invariance;
  if (!detail.empty()) d << "; " << detail;
  report(5, "hyperplane theorem", pass, d.str());
}

// ---- criterion 6: diophantine cross-validation -----------------------------

void criterion_diophantine() {
  std::mt19937_64 rng(0xc6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool pass = true;
  std::string detail;

  // Grid of angle systems: rational, golden-mean, random; k <= 3.
  std::vector<AngleSystem> grid;
  grid.push_back({{1.0 / 3.0}, 0.01});
  grid.push_back({{0.25, 1.0 / 6.0}, 0.01});
  grid.push_back({{1.0 / 7.0, 2.0 / 9.0, 0.4}, 0.02});
  grid.push_back({{0.6180339887}, 0.01});
  grid.push_back({{0.6180339887, 1.0 / 3.0}, 0.02});
  for (int i = 0; i < 9; ++i) {
    int k = 1 + i % 3;
    std::vector<double> thetas;
    for (int j = 0; j < k; ++j) thetas.push_back(u(rng));
    grid.push_back({thetas, 0.01 + 0.01 * (i % 3)});
  }

  for (const AngleSystem& sys : grid) {
    auto scan = scan_return(sys, 100000);
    auto lll = simultaneous_return_lll(sys);
    if (scan.has_value() != lll.has_value()) {
      pass = false;
      detail = "feasibility disagreement";
      continue;
    }
    if (!scan) continue;
    // Every lll solution validates by direct torus distance.
    for (size_t j = 0; j < sys.thetas.size(); ++j) {
      if (torus_distance(sys.thetas[j], lll->n) >= sys.delta) {
        pass = false;
        detail = "lll solution failed validation";
      }
    }
    // Scan minimality against a brute-force recheck below 1e4.
    if (scan->n <= 10000) {
      for (long long n = 1; n < scan->n; ++n) {
        bool feasible = true;
        for (double t : sys.thetas) {
          if (torus_distance(t, n) >= sys.delta) {
            feasible = false;
            break;
          }
        }
        if (feasible) {
          pass = false;
          detail = "scan missed a smaller return";
          break;
        }
      }
    }
  }

  // Golden-mean returns are continued-fraction denominators.
  for (double delta : {0.05, 1e-3, 1e-4}) {
    AngleSystem sys{{0.6180339887}, delta};
    auto lll = simultaneous_return_lll(sys);
    if (!lll) {
      pass = false;
      detail = "golden-mean system infeasible";
      continue;
    }
    auto conv = continued_fraction_convergents(0.6180339887, 40);
    bool found = false;
    for (const Convergent& c : conv) found = found || (c.q == lll->n);
    if (!found) {
      pass = false;
      detail = "golden-mean return " + std::to_string(lll->n) +
               " is not a convergent denominator";
    }
  }
  report(6, "diophantine cross-validation", pass, pass ? "scan and lll agree" : detail);
}

// ---- criterion 7: nested-ball construction ---------------------------------

void criterion_nested_balls() {
  const cplx I{0.0, 1.0};
  OperatorSpec op = OperatorSpec::diagonal({2.0 * I, 2.0});
  Vector seed{1.0, 1.0};
  const double r0 = 1.0;
  NestedBallTrace trace = refine_srec_vector(op, seed, r0, 8, {1e-6, 20000, 1});
  bool pass = trace.completed && trace.certificates.size() == 8;
  std::string detail;
  if (!pass) detail = "trace incomplete: " + trace.notes;
  double worst_margin = 0.0;
  if (pass) {
    const Vector& y = trace.centers.back();
    double yn = vec_norm(y);
    for (size_t k = 1; k <= trace.certificates.size(); ++k) {
      if (trace.radii[k] >= std::ldexp(r0, -static_cast<int>(k))) {
        pass = false;
        detail = "radius bound violated at level " + std::to_string(k);
        break;
      }
      double res = verify_certificate(op, y, trace.certificates[k - 1]) * yn;
      double bound = std::ldexp(r0, 1 - static_cast<int>(k));
      worst_margin = std::max(worst_margin, res / bound);
      if (res > bound) {
        pass = false;
        detail = "residual bound violated at level " + std::to_string(k);
        break;
      }
    }
  }
  std::ostringstream d;
  d << "depth 8, worst residual/bound ratio " << worst_margin;
  if (!detail.empty()) d << "; " << detail;
  report(7, "nested-ball construction", pass, d.str());
}

// ---- criterion 8: commutant inequality --------------------------------------

void criterion_commutant() {
  std::mt19937_64 rng(0xc8);
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  int checked = 0, ok = 0;
  double worst_slack = 0.0;
  std::string detail;
  while (checked < 200) {
    int dim = 2 + checked % 5;
    double r = (checked % 3 == 0) ? 0.5 : (checked % 3 == 1 ? 1.0 : 2.0);
    PlantedOperator gen = (checked % 2) ? planted_conjugated_equal_modulus(rng, dim, r)
                                        : planted_equal_modulus_diagonal(rng, dim, r);
    Vector x = random_unit_vector(rng, dim);
    RecurrenceVerdict v = detect_super_recurrence(gen.op, x, {1e-6, 20000, 1});
    if (v.status != VerdictStatus::certified) {
      if (detail.empty()) detail = "generator probe not certified: " + gen.label;
      ++checked;
      continue;
    }
    const ReturnCertificate& cert = v.certificates.front();
    int deg = 1 + checked % 3;
    Vector coeffs(deg + 1);
    for (cplx& c : coeffs) {
      double m = mag(rng), a = ang(rng);
      c = cplx(m * std::cos(a), m * std::sin(a));
    }
    OperatorSpec s = OperatorSpec::polynomial(coeffs, gen.op);
    Vector sx = s.apply(x);
    double sxn = vec_norm(sx);
    NormEstimate sn = operator_norm_estimate(s);
    ++checked;
    if (sxn <= 1e-9 * sn.value) {
      ++ok;  // degenerate draw: Sx ~ 0 is excluded by the statement
      continue;
    }
    double lhs = verify_certificate(gen.op, sx, cert);
    double rhs = sn.value * vec_norm(x) / sxn * cert.residual + 1e-10;
    if (lhs <= rhs) {
      ++ok;
      worst_slack = std::max(worst_slack, lhs - (rhs - 1e-10));
    } else if (detail.empty()) {
      detail = "inequality violated: lhs=" + std::to_string(lhs) +
               " rhs=" + std::to_string(rhs);
    }
  }
  bool pass = ok == checked;
  std::ostringstream d;
  d << ok << "/" << checked << " pairs satisfy the inequality, worst slack used "
    << worst_slack;
  if (!detail.empty()) d << "; " << detail;
  report(8, "commutant residual inequality", pass, d.str());
}

// ---- criterion 9: determinism ------------------------------------------------

std::vector<std::string> file_body_lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (first) {
      first = false;
      continue;
    }
    lines.push_back(line);
  }
  return lines;
}

void criterion_determinism(const std::string& cli_path) {
  if (cli_path.empty()) {
    report(9, "suite determinism", false, "no CLI binary path provided");
    return;
  }
  fs::path tmp = fs::temp_directory_path() / "srec_acceptance_determinism";
  fs::create_directories(tmp);
  fs::path out1 = tmp / "run1.jsonl";
  fs::path out2 = tmp / "run2.jsonl";
  std::string base = "\"" + cli_path + "\" suite --seed 42 --out ";
  int rc1 = std::system((base + "\"" + out1.string() + "\"").c_str());
  int rc2 = std::system((base + "\"" + out2.string() + "\"").c_str());
  bool pass = rc1 == 0 && rc2 == 0;
  std::string detail;
  if (!pass) {
    detail = "CLI runs failed";
  } else {
    auto b1 = file_body_lines(out1);
    auto b2 = file_body_lines(out2);
    pass = !b1.empty() && b1 == b2;
    detail = pass ? "bodies byte-identical (" + std::to_string(b1.size()) + " lines)"
                  : "bodies differ";
    if (pass) {
      // The default suite run is also expected to be all-pass.
      auto last = nlohmann::json::parse(b1.back());
      if (last["failed"].get<int>() != 0) {
        pass = false;
        detail = "suite reported failing cases";
      }
    }
  }
  std::error_code ec;
  fs::remove_all(tmp, ec);
  report(9, "suite determinism", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path = argc > 1 ? argv[1] : "";
  Timer total;
  criterion_equal_modulus_reproduction();
  criterion_separation_diagram();
  criterion_power_theorem();
  criterion_spectral_necessity();
  criterion_hyperplane();
  criterion_diophantine();
  criterion_nested_balls();
  criterion_commutant();
  criterion_determinism(cli_path);
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << " (" << total.seconds() << " s)\n";
  return failures == 0 ? 0 : 1;
}
