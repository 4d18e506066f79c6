#pragma once

#include <string>
#include <vector>

#include "srec/operator_spec.hpp"

namespace srec {

// One renormalized orbit step: T^n(base) = exp(log_magnitude) * direction,
// with direction a unit vector. Keeping magnitudes in a log ledger means
// orbits of expanding or contracting operators never overflow.
struct OrbitStep {
  long n = 0;
  Vector direction;
  double log_magnitude = 0.0;
};

struct OrbitRecord {
  Vector base;
  std::vector<OrbitStep> steps;  // n = 0..N, strictly increasing
  bool reached_kernel = false;
  long kernel_step = -1;  // first n with T^n(base) == 0, when reached
};

// Per-step renormalization: apply op to the previous unit direction and
// accumulate the norm into the ledger. Truncates with reached_kernel when
// an intermediate image is exactly zero.
OrbitRecord iterate_orbit(const OperatorSpec& op, const Vector& x, long n_steps);

// min over complex lambda of ||lambda x^ - y^|| for unit-normalized inputs:
// sqrt(1 - |<x^, y^>|^2). Zero iff the vectors are complex-collinear;
// symmetric; invariant under nonzero complex scaling of either argument.
double projective_gap(const Vector& x, const Vector& y);

// argmin over lambda of ||lambda y - x|| = <x, y>/<y, y>.
cplx best_scalar(const Vector& x, const Vector& y);

// One step per line, for plotting pipelines.
std::string orbit_to_jsonl(const OrbitRecord& record);

}  // namespace srec
