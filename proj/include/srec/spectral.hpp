#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srec/operator_spec.hpp"

namespace srec {

// Monic characteristic polynomial, coefficients in ascending degree
// (coeffs[degree] == 1).
struct CharPoly {
  Vector coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Faddeev-LeVerrier trace recursion on the dense materialization.
// Throws invalid_input for dim > 64.
CharPoly characteristic_polynomial(const OperatorSpec& op);

struct RootResult {
  std::vector<cplx> roots;   // sorted by (re, im) for reproducibility
  double max_residual = 0.0; // max |p(root)|
  int sweeps = 0;
};
// Aberth-Ehrlich simultaneous iteration from a perturbed-circle start.
// A root counts as settled when its update drops below tol or its residual
// reaches the Horner rounding floor (multiple roots never pass the plain
// update test in floating point). Throws non_convergence with the best
// iterate after 500 sweeps.
RootResult polynomial_roots(const CharPoly& p, double tol = 1e-11);

enum class Tristate { yes, no, unknown };

struct EigenCluster {
  cplx value;         // cluster centroid
  int algebraic = 0;
  int geometric = 0;  // dim - rank(T - value I)
  double radius = 0.0;  // max member distance to the centroid (root scatter)
};

struct SpectrumReport {
  std::vector<cplx> points;  // sigma(T) with algebraic multiplicity
  std::vector<double> moduli;
  double modulus_spread = 0.0;  // (max-min)/max, 0 for all-zero spectrum
  std::optional<double> circle_radius;  // present iff spread <= tol and > 0
  std::vector<cplx> adjoint_points;     // conjugates of points
  Tristate diagonalizable = Tristate::unknown;
  std::vector<EigenCluster> clusters;
  bool dense_range = false;
  cplx determinant_witness;
  bool truncation_artifact = false;  // operator contains a truncated shift
  std::string notes;
};

// Structural shortcuts first (diagonal entries, scaling, spectral mapping
// for powers, direct-sum union, {0} for shift truncations); dense and
// polynomial nodes go through the characteristic polynomial.
SpectrumReport spectrum(const OperatorSpec& op, double tol = 1e-6);

struct CircleCheck {
  bool passed = false;
  std::optional<double> radius;
  std::optional<std::pair<cplx, cplx>> witness;  // extreme-modulus pair on FAIL
  bool degenerate = false;  // all-zero spectrum: vacuous pass, R must be > 0
  std::string note;
};

// Finite dimension: each spectral point is its own connected component, so
// the component condition reduces to all moduli agreeing within tol.
CircleCheck component_circle_check(const SpectrumReport& report, double tol = 1e-6);
// Same test on the adjoint point spectrum.
CircleCheck adjoint_point_spectrum_check(const SpectrumReport& report,
                                         double tol = 1e-6);

// Min over pairings of the max pointwise distance between two multisets
// (exact search for n <= 9, greedy beyond). Throws on size mismatch.
double optimal_pairing_distance(const std::vector<cplx>& a,
                                const std::vector<cplx>& b);

}  // namespace srec
