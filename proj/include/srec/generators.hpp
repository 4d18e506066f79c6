#pragma once

#include <random>
#include <string>
#include <vector>

#include "srec/operator_spec.hpp"

namespace srec {

// Seeded operator with planted ground truth: eigenvalues known by
// construction, so suite checks have an oracle independent of the spectral
// module. Equal-modulus generators draw arguments as random rationals a/q
// on a fine grid, which plants a short simultaneous return time (<= q);
// generic irrational arguments would push return times out of desk scale.
struct PlantedOperator {
  OperatorSpec op;
  std::vector<cplx> eigenvalues;
  long angle_denominator = 1;  // q: returns exist at n <= q for equal moduli
  double radius = 0.0;         // common modulus, 0 when mixed
  std::string label;
};

// Diagonal with all moduli equal to radius and random rational arguments.
// max_denominator caps the planted return time; forced_denominator pins it
// (used when several generators must share a common return, e.g. the
// factors of a direct sum).
PlantedOperator planted_equal_modulus_diagonal(std::mt19937_64& rng, int dim,
                                               double radius,
                                               long max_denominator = 360,
                                               long forced_denominator = 0);

// The same, conjugated by a well-conditioned random similarity (condition
// number <= ~2), materialized dense.
PlantedOperator planted_conjugated_equal_modulus(std::mt19937_64& rng, int dim,
                                                 double radius,
                                                 long max_denominator = 360);

// Control with modulus spread at least min_spread (necessary conditions
// fail); conjugated when conjugate is set.
PlantedOperator planted_unequal_modulus_control(std::mt19937_64& rng, int dim,
                                                double min_spread,
                                                bool conjugate = false);

// Single Jordan block: defective, not diagonalizable.
PlantedOperator planted_jordan_block(int dim, cplx eigenvalue);

// Random complex unit vector.
Vector random_unit_vector(std::mt19937_64& rng, int dim);

// Random unitary from Gram-Schmidt of a Ginibre sample times a mild
// diagonal scaling; returns the similarity V and its exact inverse.
void random_similarity(std::mt19937_64& rng, int dim, Matrix* v, Matrix* v_inv);

}  // namespace srec
