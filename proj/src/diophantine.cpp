#include "srec/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srec {

double torus_distance(double theta, long long n) {
  if (n < 1) throw invalid_input("torus_distance: n must be positive");
  if (!std::isfinite(theta)) throw invalid_input("torus_distance: non-finite angle");
  const double nd = static_cast<double>(n);
  // Two-product: hi + lo == n*theta exactly.
  const double hi = nd * theta;
  const double lo = std::fma(nd, theta, -hi);
  // fmod is exact for doubles, and |lo| < 1 whenever |hi| < 2^53.
  double frac = std::fmod(hi, 1.0) + std::fmod(lo, 1.0);
  frac = std::fmod(frac, 1.0);
  if (frac < 0.0) frac += 1.0;
  return std::min(frac, 1.0 - frac);
}

long long pigeonhole_budget(const AngleSystem& sys) {
  const long long cap = 1LL << 62;
  double per = std::ceil(1.0 / sys.delta);
  double total = 1.0;
  for (size_t i = 0; i < sys.thetas.size(); ++i) {
    total *= per;
    if (total > static_cast<double>(cap)) return cap;
  }
  return static_cast<long long>(total);
}

namespace {

void validate_system(const AngleSystem& sys) {
  if (sys.thetas.empty()) throw invalid_input("angle system: no angles");
  if (!(sys.delta > 0.0 && sys.delta < 0.5)) {
    throw invalid_input("angle system: delta must lie in (0, 0.5)");
  }
  for (double t : sys.thetas) {
    if (!std::isfinite(t) || t < 0.0 || t >= 1.0) {
      throw invalid_input("angle system: thetas must lie in [0, 1)");
    }
  }
}

std::vector<double> all_distances(const AngleSystem& sys, long long n) {
  std::vector<double> d;
  d.reserve(sys.thetas.size());
  for (double t : sys.thetas) d.push_back(torus_distance(t, n));
  return d;
}

}  // namespace

std::optional<ReturnSolution> scan_return(const AngleSystem& sys, long long n_max) {
  validate_system(sys);
  for (long long n = 1; n <= n_max; ++n) {
    bool ok = true;
    for (double t : sys.thetas) {
      if (torus_distance(t, n) >= sys.delta) {
        ok = false;
        break;
      }
    }
    if (ok) {
      return ReturnSolution{n, all_distances(sys, n), ReturnMethod::scan, false};
    }
  }
  return std::nullopt;
}

std::vector<Convergent> continued_fraction_convergents(double theta, int count) {
  if (!std::isfinite(theta)) {
    throw invalid_input("continued_fraction_convergents: non-finite input");
  }
  if (count < 1) return {};
  const long long q_limit = 1LL << 60;
  const double term_limit = 1e12;

  double x = theta - std::floor(theta);
  std::vector<Convergent> out;
  long long p_prev = 1, q_prev = 0;  // h_{-1}, k_{-1}
  long long p_cur = static_cast<long long>(std::floor(theta));
  long long q_cur = 1;  // integer-part convergent (not emitted)
  if (x == 0.0) return out;

  for (int i = 0; i < count; ++i) {
    x = 1.0 / x;
    double a_d = std::floor(x);
    if (!(a_d >= 1.0) || a_d > term_limit) break;  // effectively rational
    long long a = static_cast<long long>(a_d);
    if (q_cur > (q_limit - q_prev) / a) break;  // denominator would overflow
    long long p_next = a * p_cur + p_prev;
    long long q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    out.push_back({p_cur, q_cur});
    x -= a_d;
    if (x == 0.0) break;  // exact rational: terminate
  }
  return out;
}

namespace {

using QQ = mpq_class;

mpz_class round_nearest(const QQ& q) {
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();  // canonical: den > 0
  mpz_class quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * rem > den) quot += 1;
  return quot;
}

struct GramSchmidt {
  std::vector<std::vector<QQ>> star;  // orthogonalized rows
  std::vector<std::vector<QQ>> mu;    // mu[i][j], j < i
  std::vector<QQ> norm2;              // ||b*_i||^2
};

QQ dot_zq(const IntRow& a, const std::vector<QQ>& b) {
  QQ s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += QQ(a[i]) * b[i];
  return s;
}

GramSchmidt gram_schmidt(const std::vector<IntRow>& b) {
  const size_t m = b.size();
  const size_t dim = b[0].size();
  GramSchmidt gs;
  gs.star.assign(m, std::vector<QQ>(dim));
  gs.mu.assign(m, std::vector<QQ>(m));
  gs.norm2.assign(m, QQ(0));
  for (size_t i = 0; i < m; ++i) {
    for (size_t t = 0; t < dim; ++t) gs.star[i][t] = QQ(b[i][t]);
    for (size_t j = 0; j < i; ++j) {
      if (gs.norm2[j] == 0) throw invalid_input("lll_reduce: dependent rows");
      QQ mu = dot_zq(b[i], gs.star[j]) / gs.norm2[j];
      gs.mu[i][j] = mu;
      for (size_t t = 0; t < dim; ++t) gs.star[i][t] -= mu * gs.star[j][t];
    }
    QQ n2 = 0;
    for (size_t t = 0; t < dim; ++t) n2 += gs.star[i][t] * gs.star[i][t];
    gs.norm2[i] = n2;
    if (n2 == 0) throw invalid_input("lll_reduce: dependent rows");
  }
  return gs;
}

}  // namespace

std::vector<IntRow> lll_reduce(std::vector<IntRow> basis) {
  if (basis.empty()) throw invalid_input("lll_reduce: empty basis");
  const size_t dim = basis[0].size();
  for (const IntRow& row : basis) {
    if (row.size() != dim || dim == 0) {
      throw invalid_input("lll_reduce: ragged or empty rows");
    }
  }
  const size_t m = basis.size();
  if (m > dim) throw invalid_input("lll_reduce: more rows than columns");

  const QQ three_quarters(3, 4);
  // Full Gram-Schmidt recompute per pass keeps the arithmetic obviously
  // exact; fine at the sizes this module handles (m <= 9).
  size_t k = 1;
  GramSchmidt gs = gram_schmidt(basis);
  int guard = 0;
  while (k < m) {
    if (++guard > 100000) {
      throw non_convergence("lll_reduce: iteration guard tripped");
    }
    // Size-reduce b_k against b_{k-1} ... b_0, updating mu incrementally
    // (b_k - r b_j shifts mu[k][l] by -r mu[j][l] and leaves b* alone).
    for (size_t j = k; j-- > 0;) {
      mpz_class r = round_nearest(gs.mu[k][j]);
      if (r != 0) {
        QQ rq(r);
        for (size_t t = 0; t < dim; ++t) basis[k][t] -= r * basis[j][t];
        for (size_t l = 0; l < j; ++l) gs.mu[k][l] -= rq * gs.mu[j][l];
        gs.mu[k][j] -= rq;
      }
    }
    // Lovasz condition between rows k-1 and k.
    QQ lhs = gs.norm2[k];
    QQ rhs = (three_quarters - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norm2[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gs = gram_schmidt(basis);
      k = (k > 1) ? k - 1 : 1;
    }
  }
  return basis;
}

bool lll_conditions_satisfied(const std::vector<IntRow>& basis) {
  GramSchmidt gs = gram_schmidt(basis);
  const QQ half(1, 2);
  const QQ three_quarters(3, 4);
  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (abs(gs.mu[i][j]) > half) return false;
    }
    if (i >= 1) {
      QQ rhs = (three_quarters - gs.mu[i][i - 1] * gs.mu[i][i - 1]) * gs.norm2[i - 1];
      if (gs.norm2[i] < rhs) return false;
    }
  }
  return true;
}

std::optional<ReturnSolution> simultaneous_return_lll(const AngleSystem& sys,
                                                      const mpz_class& scale_m,
                                                      long long scan_fallback_budget) {
  validate_system(sys);
  const size_t k = sys.thetas.size();
  if (k > 8) throw invalid_input("simultaneous_return_lll: at most 8 angles");
  if (scale_m < 2) throw invalid_input("simultaneous_return_lll: scale must be >= 2");

  // torus_distance stays exact below 2^52. gmpxx lacks long long overloads,
  // so the bound lives in an mpz.
  const mpz_class n_limit = mpz_class(1) << 52;
  mpz_class M = scale_m;
  for (int attempt = 0; attempt < 3; ++attempt, M *= 2) {
    // Integerized angles a_j = round(M * theta_j), formed exactly from the
    // binary rational value of each double.
    std::vector<mpz_class> a(k);
    for (size_t j = 0; j < k; ++j) {
      a[j] = round_nearest(QQ(sys.thetas[j]) * QQ(M));
    }
    // Weight on the n-coordinate balancing n against the distances at the
    // pigeonhole scale.
    mpz_class n_target(static_cast<long>(pigeonhole_budget(sys)));
    mpz_class w = round_nearest(QQ(sys.delta) * QQ(M) / QQ(n_target));
    if (w < 1) w = 1;

    std::vector<IntRow> basis(k + 1, IntRow(k + 1, mpz_class(0)));
    basis[0][0] = w;
    for (size_t j = 0; j < k; ++j) basis[0][j + 1] = a[j];
    for (size_t j = 0; j < k; ++j) basis[j + 1][j + 1] = M;

    std::vector<IntRow> reduced = lll_reduce(std::move(basis));

    long long best_n = 0;
    for (const IntRow& row : reduced) {
      mpz_class n_z = abs(row[0] / w);
      if (n_z == 0 || n_z > n_limit) continue;
      long long n = static_cast<long long>(n_z.get_si());
      bool ok = true;
      for (double t : sys.thetas) {
        if (torus_distance(t, n) >= sys.delta) {
          ok = false;
          break;
        }
      }
      if (ok && (best_n == 0 || n < best_n)) best_n = n;
    }
    if (best_n != 0) {
      return ReturnSolution{best_n, all_distances(sys, best_n), ReturnMethod::lll,
                            false};
    }
  }

  long long budget = std::min(pigeonhole_budget(sys), scan_fallback_budget);
  auto scanned = scan_return(sys, budget);
  if (!scanned) return std::nullopt;
  scanned->method = ReturnMethod::lll;
  scanned->fell_back_to_scan = true;
  return scanned;
}

}  // namespace srec
