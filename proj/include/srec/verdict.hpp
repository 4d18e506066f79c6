#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srec/recurrence.hpp"

namespace srec {

struct ClassificationParams {
  DetectionParams detection{1e-6, 10000, 1};
  double spread_tol = 1e-6;
  // Operator-level acceptance threshold on the certified probe fraction.
  // A finite probe set is a proxy for a dense set of certified vectors,
  // never a proof; the default is a policy knob, not a theorem constant.
  double probe_certified_threshold = 0.9;
  int random_probes = 16;
  std::uint64_t seed = 0;
};

enum class FinalStatus { super_recurrent, not_super_recurrent, inconclusive };

struct SufficientCheck {
  bool passed = false;
  std::string reason;
};

// Eigenvector-supply criterion: diagonalizable with all eigenvalue moduli
// equal (within tol) and nonzero. In finite dimension the eigenvectors then
// span the space, which is the density hypothesis.
SufficientCheck sufficient_condition_check(const SpectrumReport& report, double tol);
SufficientCheck sufficient_condition_check(const OperatorSpec& op, double tol = 1e-6);

struct ProbeOutcome {
  int index = 0;
  bool standard_basis = false;
  VerdictStatus status = VerdictStatus::inconclusive;
  std::optional<ReturnCertificate> certificate;
  std::string note;
};

struct SRecClassification {
  std::string operator_id;
  SpectrumReport spectral;
  CircleCheck circle;
  CircleCheck adjoint_circle;
  bool necessary_pass = false;
  SufficientCheck sufficient;
  std::vector<ProbeOutcome> probes;
  double certified_fraction = 0.0;
  VerdictStatus dynamic_status = VerdictStatus::inconclusive;
  FinalStatus final_status = FinalStatus::inconclusive;
  std::string witness;  // attached evidence for refutations
  std::string notes;
};

// Runs the dense-range, circle, adjoint-circle and sufficiency checks plus
// dynamic probing on the standard basis and seeded random unit vectors.
// not_super_recurrent only ever carries a spectral or dense-range witness;
// super_recurrent requires the sufficient condition or a certified probe
// fraction above the threshold. Root-finder non-convergence degrades to
// inconclusive.
SRecClassification classify(const OperatorSpec& op, const ClassificationParams& params,
                            const std::string& operator_id = "");

struct SuiteSizes {
  int max_dim = 6;
  int cases_per_check = 50;
};

struct SuiteCase {
  int index = 0;
  std::string generator;
  std::string property;
  bool pass = false;
  std::string witness;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  SuiteSizes sizes;
  std::vector<SuiteCase> cases;
  int passed = 0;
  int failed = 0;
};

// Theorem suite over seeded corpora with planted ground truth. Checks:
// commutant_invariance, polynomial_images, similarity_transfer,
// direct_sum_factors, power_equivalence, spectral_necessity,
// hyperplane_recurrence, dense_srec. Failures are data, not errors; every
// failing case carries a replayable witness.
SuiteReport property_suite(std::uint64_t seed, const SuiteSizes& sizes);

}  // namespace srec
