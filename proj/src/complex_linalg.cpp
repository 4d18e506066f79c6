#include "srec/complex_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace srec {

bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

void require_finite(const Vector& v, const char* what) {
  for (const cplx& z : v) {
    if (!is_finite(z)) {
      throw invalid_input(std::string(what) + ": non-finite entry");
    }
  }
}

double vec_norm(const Vector& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw invalid_input("inner: dimension mismatch");
  cplx s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

Vector vec_scaled(const Vector& v, cplx c) {
  Vector r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

Vector vec_sub(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw invalid_input("vec_sub: dimension mismatch");
  Vector r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

Vector vec_add(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw invalid_input("vec_add: dimension mismatch");
  Vector r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

Vector normalized(const Vector& v) {
  double n = vec_norm(v);
  if (n == 0.0) throw invalid_input("normalized: zero vector");
  Vector r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] / n;
  return r;
}

double vec_max_abs(const Vector& v) {
  double m = 0.0;
  for (const cplx& z : v) {
    m = std::max({m, std::abs(z.real()), std::abs(z.imag())});
  }
  return m;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx Matrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : data_) {
    m = std::max({m, std::abs(z.real()), std::abs(z.imag())});
  }
  return m;
}

double Matrix::row_norm(int i) const {
  double s = 0.0;
  for (int j = 0; j < cols_; ++j) s += std::norm((*this)(i, j));
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw invalid_input("matmul: dimension mismatch");
  Matrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_input("mat add: dimension mismatch");
  }
  Matrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_input("mat sub: dimension mismatch");
  }
  Matrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Matrix operator*(cplx c, const Matrix& a) {
  Matrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
  return r;
}

Vector mat_vec(const Matrix& a, const Vector& v) {
  if (static_cast<size_t>(a.cols()) != v.size()) {
    throw invalid_input("mat_vec: dimension mismatch");
  }
  Vector r(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_input("max_abs_diff: dimension mismatch");
  }
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

double norm_1(const Matrix& a) {
  double m = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

double norm_inf(const Matrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

cplx determinant(Matrix a) {
  if (a.rows() != a.cols()) throw invalid_input("determinant: not square");
  const int n = a.rows();
  cplx det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double m = std::abs(a(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      cplx f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

int pivoted_rank(Matrix a, double tol, double* min_pivot) {
  const int rows = a.rows();
  const int cols = a.cols();
  int rank = 0;
  double smallest = 0.0;
  int r = 0, c = 0;
  std::vector<int> col_perm(cols);
  for (int j = 0; j < cols; ++j) col_perm[j] = j;
  while (r < rows && c < cols) {
    // full pivot over the trailing submatrix
    int pi = r, pj = c;
    double best = 0.0;
    for (int i = r; i < rows; ++i) {
      for (int j = c; j < cols; ++j) {
        double m = std::abs(a(i, j));
        if (m > best) {
          best = m;
          pi = i;
          pj = j;
        }
      }
    }
    if (best <= tol) break;
    if (pi != r)
      for (int j = 0; j < cols; ++j) std::swap(a(r, j), a(pi, j));
    if (pj != c)
      for (int i = 0; i < rows; ++i) std::swap(a(i, c), a(i, pj));
    smallest = (rank == 0) ? best : std::min(smallest, best);
    for (int i = r + 1; i < rows; ++i) {
      cplx f = a(i, c) / a(r, c);
      for (int j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    ++rank;
    ++r;
    ++c;
  }
  if (min_pivot) *min_pivot = (rank == 0) ? 0.0 : smallest;
  return rank;
}

Vector solve_linear(Matrix a, Vector b) {
  if (a.rows() != a.cols()) throw invalid_input("solve_linear: not square");
  const int n = a.rows();
  if (static_cast<size_t>(n) != b.size()) {
    throw invalid_input("solve_linear: rhs dimension mismatch");
  }
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double m = std::abs(a(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (best == 0.0) {
      throw non_convergence("solve_linear: singular matrix");
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      cplx f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (int i = n - 1; i >= 0; --i) {
    cplx s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace srec
