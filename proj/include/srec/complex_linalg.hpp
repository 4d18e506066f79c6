#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace srec {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

// Rejected input: dimension mismatch, non-finite data, malformed spec.
class invalid_input : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to settle; carries the best iterate seen
// so callers can report it instead of discarding the work.
class non_convergence : public std::runtime_error {
public:
  non_convergence(const std::string& what, std::vector<cplx> best = {},
                  double residual = 0.0)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}
  const std::vector<cplx>& best_iterate() const { return best_; }
  double residual() const { return residual_; }

private:
  std::vector<cplx> best_;
  double residual_;
};

bool is_finite(cplx z);
void require_finite(const Vector& v, const char* what);

double vec_norm(const Vector& v);
// Hermitian inner product, linear in the first argument: sum x_i * conj(y_i).
cplx inner(const Vector& x, const Vector& y);
Vector vec_scaled(const Vector& v, cplx c);
Vector vec_sub(const Vector& x, const Vector& y);
Vector vec_add(const Vector& x, const Vector& y);
Vector normalized(const Vector& v);  // throws invalid_input on zero vector
double vec_max_abs(const Vector& v);

class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  const cplx& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  Matrix adjoint() const;  // conjugate transpose
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  double row_norm(int i) const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(cplx c, const Matrix& a);
Vector mat_vec(const Matrix& a, const Vector& v);
bool approx_equal(const Matrix& a, const Matrix& b, double tol);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Induced norms; cheap certified upper bounds on the spectral norm via
// sqrt(norm_1 * norm_inf).
double norm_1(const Matrix& a);
double norm_inf(const Matrix& a);

// Determinant via partial-pivot LU.
cplx determinant(Matrix a);
// Numerical rank via elimination with full pivot selection; a pivot below
// tol is treated as zero. Also reports the smallest accepted pivot through
// *min_pivot when non-null (0 if rank 0).
int pivoted_rank(Matrix a, double tol, double* min_pivot = nullptr);
// Partial-pivot LU solve; throws non_convergence when the matrix is
// numerically singular (pivot exactly 0).
Vector solve_linear(Matrix a, Vector b);

}  // namespace srec
