#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srec/operator_spec.hpp"
#include "srec/spectral.hpp"

namespace srec {

struct DetectionParams {
  double epsilon = 1e-6;  // relative return tolerance (scaled by ||x||)
  long n_max = 10000;
  long n_min = 1;
};

// max(10^4, ceil(1/epsilon)^k) where k is the number of distinct eigenvalue
// arguments; saturates at 2^62. This is the pigeonhole budget below which a
// return is guaranteed for equal-modulus diagonalizable operators.
long dirichlet_budget(const OperatorSpec& op, double epsilon);

// Replayable witness of an approximate scaled return:
// ||lambda T^n x - x|| <= residual * ||x||, recomputable by anyone.
struct ReturnCertificate {
  long n = 0;
  cplx lambda{1.0, 0.0};
  double residual = 0.0;
};

enum class VerdictStatus { certified, refuted_by_spectrum, inconclusive };

struct RecurrenceVerdict {
  VerdictStatus status = VerdictStatus::inconclusive;
  std::vector<ReturnCertificate> certificates;  // up to 10
  DetectionParams params;
  std::string notes;
};

// Scans n in [n_min, n_max] for ||T^n x - x|| <= epsilon ||x|| (lambda
// fixed to 1 in the certificates).
RecurrenceVerdict detect_recurrence(const OperatorSpec& op, const Vector& x,
                                    const DetectionParams& params);

// Scans the renormalized orbit for a projective return: certifies when the
// gap between x and the direction of T^n x drops to epsilon; lambda is the
// optimal scalar recovered through the log ledger. Emitted residuals are
// recomputed by direct replay.
RecurrenceVerdict detect_super_recurrence(const OperatorSpec& op, const Vector& x,
                                          const DetectionParams& params);

// Recomputes ||lambda T^n x - x|| / ||x|| by direct application, without the
// log ledger. Interim magnitudes are kept in range by exact power-of-two
// rescaling, so certificates on expanding operators replay cleanly.
double verify_certificate(const OperatorSpec& op, const Vector& x,
                          const ReturnCertificate& cert);

struct PerturbedCheckResult {
  bool passed = false;
  Vector witness_z;
  ReturnCertificate witness;  // ||lambda T^n z - x|| <= epsilon ||x||
  std::string notes;
};

// Searches for z with ||z - x|| <= epsilon ||x|| and a pair (n, lambda) with
// ||lambda T^n z - x|| <= epsilon ||x||. Probes x itself first, then points
// displaced along dominant singular directions of T^n.
PerturbedCheckResult perturbed_characterization_check(const OperatorSpec& op,
                                                      const Vector& x,
                                                      const DetectionParams& params);

// Nested-ball refinement trace: strictly shrinking balls, one return
// certificate per level, final center an increasingly high-quality
// super-recurrent vector.
struct NestedBallTrace {
  std::vector<Vector> centers;  // centers[0] = seed center
  std::vector<double> radii;    // radii[0] = seed radius; radii[k] < 2^-k radii[0]
  std::vector<ReturnCertificate> certificates;  // certificate of level k (1-based)
  bool completed = false;
  std::string notes;
};

// Constructive refinement: at level k, find a return pair inside the current
// ball, then shrink the radius far enough that both the new ball and its
// image under the return map stay inside the previous ball. The final
// center y then satisfies ||lambda_k T^{n_k} y - y|| <= 2^{1-k} radii[0]
// for every recorded level.
NestedBallTrace refine_srec_vector(const OperatorSpec& op, const Vector& seed_center,
                                   double seed_radius, int depth,
                                   const DetectionParams& params);

struct HyperplaneDecomposition {
  Vector functional;           // unit dual eigenvector x0*
  std::vector<Vector> basis;   // orthonormal basis of X0 = ker<., x0*>
  OperatorSpec compressed;     // operator on X0 in that basis, dim-1
  double invariance_residual = 0.0;
};

enum class HyperplaneStatus { ok, inconclusive };

struct HyperplaneResult {
  HyperplaneStatus status = HyperplaneStatus::inconclusive;
  std::optional<HyperplaneDecomposition> decomposition;
  std::string notes;
};

// For lambda in the dual point spectrum (which in finite dimension equals
// sigma(T) as a multiset), computes the conjugate-transpose eigenvector for
// conj(lambda) by inverse iteration, an orthonormal basis of its orthogonal
// complement, and the compressed operator there. Throws invalid_input when
// lambda is not an adjoint eigenvalue within tol; defective eigenvalues
// yield an inconclusive result.
HyperplaneResult hyperplane_restriction(const OperatorSpec& op, cplx lambda,
                                        double tol = 1e-6);

}  // namespace srec
