#include "srec/generators.hpp"

#include <cmath>

namespace srec {

namespace {

Vector rational_angle_entries(std::mt19937_64& rng, int dim, double radius,
                              long* denominator, long max_denominator = 360,
                              long forced_denominator = 0) {
  std::uniform_int_distribution<long> q_dist(16, std::max(16L, max_denominator));
  long q = forced_denominator > 0 ? forced_denominator : q_dist(rng);
  std::uniform_int_distribution<long> a_dist(0, q - 1);
  std::vector<long> nums;
  nums.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    long a = a_dist(rng);
    // Distinct arguments keep eigenvalues simple and well separated.
    int guard = 0;
    while (std::find(nums.begin(), nums.end(), a) != nums.end() && guard++ < 1000) {
      a = (a + 1) % q;
    }
    nums.push_back(a);
  }
  Vector entries(dim);
  for (int i = 0; i < dim; ++i) {
    double ang = 2.0 * M_PI * double(nums[i]) / double(q);
    entries[i] = radius * cplx(std::cos(ang), std::sin(ang));
  }
  *denominator = q;
  return entries;
}

}  // namespace

Vector random_unit_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      v[i] = cplx(gauss(rng), gauss(rng));
      n2 += std::norm(v[i]);
    }
  } while (n2 == 0.0);
  double n = std::sqrt(n2);
  for (cplx& z : v) z /= n;
  return v;
}

void random_similarity(std::mt19937_64& rng, int dim, Matrix* v, Matrix* v_inv) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Gram-Schmidt a Ginibre sample into a unitary Q.
  std::vector<Vector> cols(dim);
  for (int j = 0; j < dim; ++j) {
    Vector c(dim);
    for (int i = 0; i < dim; ++i) c[i] = cplx(gauss(rng), gauss(rng));
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        cplx p = inner(c, cols[k]);
        for (int i = 0; i < dim; ++i) c[i] -= p * cols[k][i];
      }
    }
    double n = vec_norm(c);
    if (n < 1e-8) {  // essentially dependent draw; replace by a basis vector
      c.assign(dim, cplx(0.0));
      c[j] = 1.0;
    } else {
      for (cplx& z : c) z /= n;
    }
    cols[j] = std::move(c);
  }
  // Mild diagonal scaling keeps the conditioning around s_max/s_min <= ~1.6.
  std::uniform_real_distribution<double> s_dist(0.8, 1.25);
  std::vector<double> s(dim);
  for (int j = 0; j < dim; ++j) s[j] = s_dist(rng);

  Matrix V(dim, dim), W(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      V(i, j) = cols[j][i] * s[j];                    // V = Q diag(s)
      W(i, j) = std::conj(cols[i][j]) / s[i];         // V^-1 = diag(1/s) Q^H
    }
  }
  *v = std::move(V);
  *v_inv = std::move(W);
}

PlantedOperator planted_equal_modulus_diagonal(std::mt19937_64& rng, int dim,
                                               double radius, long max_denominator,
                                               long forced_denominator) {
  PlantedOperator out;
  Vector entries = rational_angle_entries(rng, dim, radius, &out.angle_denominator,
                                          max_denominator, forced_denominator);
  out.eigenvalues = entries;
  out.radius = radius;
  out.label = "equal_modulus_diagonal(dim=" + std::to_string(dim) +
              ",R=" + std::to_string(radius) + ")";
  out.op = OperatorSpec::diagonal(std::move(entries));
  return out;
}

PlantedOperator planted_conjugated_equal_modulus(std::mt19937_64& rng, int dim,
                                                 double radius, long max_denominator) {
  PlantedOperator out;
  Vector entries = rational_angle_entries(rng, dim, radius, &out.angle_denominator,
                                          max_denominator);
  out.eigenvalues = entries;
  out.radius = radius;
  Matrix v, v_inv;
  random_similarity(rng, dim, &v, &v_inv);
  Matrix d(dim, dim);
  for (int i = 0; i < dim; ++i) d(i, i) = entries[i];
  out.op = OperatorSpec::dense(v * d * v_inv);
  out.label = "conjugated_equal_modulus(dim=" + std::to_string(dim) +
              ",R=" + std::to_string(radius) + ")";
  return out;
}

PlantedOperator planted_unequal_modulus_control(std::mt19937_64& rng, int dim,
                                                double min_spread, bool conjugate) {
  PlantedOperator out;
  long q = 1;
  Vector entries = rational_angle_entries(rng, dim, 1.0, &q);
  out.angle_denominator = q;
  // Rescale moduli so the spread is at least min_spread.
  std::uniform_real_distribution<double> low_dist(0.3, 1.0 - min_spread);
  for (int i = 1; i < dim; ++i) entries[i] *= low_dist(rng);
  out.eigenvalues = entries;
  out.radius = 0.0;
  if (conjugate) {
    Matrix v, v_inv;
    random_similarity(rng, dim, &v, &v_inv);
    Matrix d(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = entries[i];
    out.op = OperatorSpec::dense(v * d * v_inv);
    out.label = "conjugated_unequal_modulus(dim=" + std::to_string(dim) + ")";
  } else {
    out.op = OperatorSpec::diagonal(entries);
    out.label = "unequal_modulus_diagonal(dim=" + std::to_string(dim) + ")";
  }
  return out;
}

PlantedOperator planted_jordan_block(int dim, cplx eigenvalue) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = eigenvalue;
    if (i + 1 < dim) m(i, i + 1) = 1.0;
  }
  PlantedOperator out;
  out.op = OperatorSpec::dense(std::move(m));
  out.eigenvalues.assign(dim, eigenvalue);
  out.radius = std::abs(eigenvalue);
  out.label = "jordan_block(dim=" + std::to_string(dim) + ")";
  return out;
}

}  // namespace srec
