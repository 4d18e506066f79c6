#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "srec/complex_linalg.hpp"

namespace srec {

// Angles theta_j in [0,1) with a target torus resolution delta in (0, 0.5).
struct AngleSystem {
  std::vector<double> thetas;
  double delta = 0.0;
};

enum class ReturnMethod { scan, lll };

struct ReturnSolution {
  long long n = 0;
  std::vector<double> distances;  // torus distance of n*theta_j per angle
  ReturnMethod method = ReturnMethod::scan;
  bool fell_back_to_scan = false;  // lll path exhausted and scanned instead
};

// Distance from n*theta to the nearest integer. The product is formed
// exactly (fma two-product) and reduced with exact fmod, so the result
// carries only one rounding of the final sum even for n up to ~2^52.
double torus_distance(double theta, long long n);

// Smallest n <= n_max with max_j torus_distance(theta_j, n) < delta.
// Guaranteed to succeed when n_max >= ceil(1/delta)^k (Dirichlet
// pigeonhole); returns nullopt only when the budget runs out first.
std::optional<ReturnSolution> scan_return(const AngleSystem& sys, long long n_max);

// Dirichlet pigeonhole budget ceil(1/delta)^k, saturating at 2^62.
long long pigeonhole_budget(const AngleSystem& sys);

struct Convergent {
  long long p = 0;
  long long q = 1;
};
// Continued-fraction convergents of the fractional part (the integer-part
// convergent is dropped). Stops early on exact rationals, at a partial
// quotient above 1e12 (the float is then effectively rational), or when a
// denominator would overflow.
std::vector<Convergent> continued_fraction_convergents(double theta, int count);

using IntRow = std::vector<mpz_class>;

// Lenstra-Lenstra-Lovasz reduction with Lovasz parameter 3/4; all
// arithmetic exact (integer rows, rational Gram-Schmidt). Throws
// invalid_input on dependent rows.
std::vector<IntRow> lll_reduce(std::vector<IntRow> basis);

// Exact checks of the size-reduction and Lovasz conditions; used by tests.
bool lll_conditions_satisfied(const std::vector<IntRow>& basis);

// Builds the (k+1)-dimensional simultaneous-approximation lattice with
// integerized angles round(M*theta_j), reduces it, and extracts candidate
// return times from short vectors. Every candidate is validated with
// torus_distance before it is returned; on validation failure M is doubled
// twice, then the scan takes over (recorded in the solution).
std::optional<ReturnSolution> simultaneous_return_lll(
    const AngleSystem& sys, const mpz_class& scale_m = mpz_class(1) << 32,
    long long scan_fallback_budget = 10'000'000);

}  // namespace srec
