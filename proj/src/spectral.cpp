#include "srec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace srec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Horner evaluation with a running bound on the accumulated rounding error.
cplx eval_with_error(const Vector& c, cplx z, double* err_bound) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double az = std::abs(z);
  cplx s = c.back();
  double e = 0.0;
  for (size_t k = c.size() - 1; k-- > 0;) {
    e = e * az + std::abs(s) * az * eps * 4.0;
    s = s * z + c[k];
    e += std::abs(s) * eps * 2.0;
  }
  if (err_bound) *err_bound = e;
  return s;
}

cplx eval_derivative(const Vector& c, cplx z) {
  const size_t n = c.size() - 1;
  cplx s = double(n) * c[n];
  for (size_t k = n - 1; k >= 1; --k) {
    s = s * z + double(k) * c[k];
  }
  return s;
}

bool lex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

struct PointCollection {
  std::vector<cplx> points;
  bool truncation = false;
};

PointCollection collect_points(const OperatorSpec& op, double root_tol);

PointCollection dense_route(const OperatorSpec& op, double root_tol) {
  CharPoly p = characteristic_polynomial(op);
  RootResult r = polynomial_roots(p, root_tol);
  return {std::move(r.roots), op.contains_shift()};
}

PointCollection collect_points(const OperatorSpec& op, double root_tol) {
  return std::visit(
      overloaded{
          [&](const DenseOp&) { return dense_route(op, root_tol); },
          [&](const DiagonalOp& n) {
            return PointCollection{n.entries, false};
          },
          [&](const ShiftOp& n) {
            return PointCollection{Vector(n.dim, cplx(0.0)), true};
          },
          [&](const DirectSumOp& n) {
            PointCollection all;
            for (const auto& part : n.parts) {
              PointCollection pc = collect_points(part, root_tol);
              all.points.insert(all.points.end(), pc.points.begin(),
                                pc.points.end());
              all.truncation = all.truncation || pc.truncation;
            }
            return all;
          },
          [&](const ScaledOp& n) {
            PointCollection pc = collect_points(n.inner, root_tol);
            for (cplx& z : pc.points) z *= n.factor;
            return pc;
          },
          [&](const PowerOp& n) {
            // Spectral mapping: sigma(T^p) = sigma(T)^p in finite dimension.
            PointCollection pc = collect_points(n.inner, root_tol);
            for (cplx& z : pc.points) {
              cplx w = 1.0;
              for (int i = 0; i < n.exponent; ++i) w *= z;
              z = w;
            }
            return pc;
          },
          [&](const PolynomialOp&) { return dense_route(op, root_tol); },
      },
      op.node().v);
}

}  // namespace

CharPoly characteristic_polynomial(const OperatorSpec& op) {
  const int n = op.dim();
  if (n > 64) {
    throw invalid_input("characteristic_polynomial: unsupported size (dim > 64)");
  }
  Matrix a = materialize_dense(op);
  Vector c(n + 1, cplx(0.0));
  c[n] = 1.0;
  Matrix m = a;
  c[n - 1] = -m.trace();
  for (int k = 2; k <= n; ++k) {
    Matrix t = m;
    for (int i = 0; i < n; ++i) t(i, i) += c[n - k + 1];
    m = a * t;
    c[n - k] = -m.trace() / double(k);
  }
  return CharPoly{std::move(c)};
}

RootResult polynomial_roots(const CharPoly& p, double tol) {
  const int n = p.degree();
  if (n < 1) throw invalid_input("polynomial_roots: degree must be >= 1");
  Vector c = p.coeffs;
  cplx lead = c.back();
  if (lead == cplx(0.0)) throw invalid_input("polynomial_roots: zero leading coefficient");
  if (lead != cplx(1.0)) {
    for (cplx& z : c) z /= lead;
  }

  // Fujiwara bound on root moduli.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) {
    double ak = std::abs(c[k]);
    if (k == 0) ak *= 0.5;
    if (ak > 0.0) radius = std::max(radius, std::pow(ak, 1.0 / double(n - k)));
  }
  radius = 2.0 * radius;
  if (radius == 0.0) radius = 0.5;  // p(z) = z^n

  // Perturbed-circle start.
  std::vector<cplx> z(n);
  const double two_pi = 2.0 * M_PI;
  for (int j = 0; j < n; ++j) {
    double ang = two_pi * (j + 0.25) / n + 0.42;
    double r = radius * (0.8 + 0.1 * std::cos(3.0 * j + 1.0));
    z[j] = cplx(r * std::cos(ang), r * std::sin(ang));
  }

  const int max_sweeps = 500;
  std::vector<bool> settled(n, false);
  int sweeps = 0;
  bool all_settled = false;
  for (; sweeps < max_sweeps && !all_settled; ++sweeps) {
    all_settled = true;
    for (int i = 0; i < n; ++i) {
      double errb = 0.0;
      cplx pv = eval_with_error(c, z[i], &errb);
      if (std::abs(pv) <= 8.0 * errb) {
        settled[i] = true;
        continue;
      }
      cplx dv = eval_derivative(c, z[i]);
      if (dv == cplx(0.0)) {
        z[i] += cplx(1e-8 * (1.0 + std::abs(z[i])), 1e-8);
        settled[i] = false;
        all_settled = false;
        continue;
      }
      cplx newton = pv / dv;
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cplx d = z[i] - z[j];
        if (d == cplx(0.0)) d = cplx(1e-12, 1e-12);
        sum += 1.0 / d;
      }
      cplx denom = 1.0 - newton * sum;
      cplx step = (denom == cplx(0.0)) ? newton : newton / denom;
      z[i] -= step;
      settled[i] = std::abs(step) <= tol * std::max(1.0, std::abs(z[i]));
      if (!settled[i]) all_settled = false;
    }
  }

  double max_res = 0.0;
  for (int i = 0; i < n; ++i) max_res = std::max(max_res, std::abs(eval_with_error(c, z[i], nullptr)));
  if (!all_settled) {
    throw non_convergence("polynomial_roots: Aberth iteration did not settle in 500 sweeps",
                          z, max_res);
  }
  std::sort(z.begin(), z.end(), lex_less);
  return {std::move(z), max_res, sweeps};
}

SpectrumReport spectrum(const OperatorSpec& op, double tol) {
  const int d = op.dim();
  if (d > 64) throw invalid_input("spectrum: unsupported size (dim > 64)");
  SpectrumReport rep;
  PointCollection pc = collect_points(op, 1e-11);
  rep.points = std::move(pc.points);
  std::sort(rep.points.begin(), rep.points.end(), lex_less);
  rep.truncation_artifact = pc.truncation;
  if (rep.truncation_artifact) {
    rep.notes = "truncation artifact: contains a truncated backward shift; "
                "the untruncated operator's dynamics are not represented";
  }

  // Cluster the computed points before deriving anything from them: a
  // multiple root is recovered only as a ring of radius ~eps^(1/m), while
  // its centroid is accurate to coefficient level, so each point is snapped
  // to its cluster centroid (multiplicity preserved).
  double raw_max_mod = 0.0;
  for (const cplx& p : rep.points) raw_max_mod = std::max(raw_max_mod, std::abs(p));
  Matrix a = materialize_dense(op);
  const double anorm = a.frobenius_norm();
  const double rank_tol = 1e-8 * std::max(anorm, 1e-300);
  const double cluster_tol = 1e-4 * std::max(1.0, raw_max_mod);
  std::vector<int> cluster_of(rep.points.size(), -1);
  for (size_t i = 0; i < rep.points.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (std::abs(rep.points[i] - rep.points[j]) <= cluster_tol) {
        cluster_of[i] = cluster_of[j];
        break;
      }
    }
    if (cluster_of[i] < 0) {
      cluster_of[i] = static_cast<int>(rep.clusters.size());
      rep.clusters.push_back({rep.points[i], 0, 0, 0.0});
    }
  }
  for (size_t i = 0; i < rep.points.size(); ++i) {
    rep.clusters[cluster_of[i]].algebraic += 1;
  }
  // centroid and scatter radius per cluster
  {
    std::vector<cplx> sums(rep.clusters.size(), cplx(0.0));
    for (size_t i = 0; i < rep.points.size(); ++i) sums[cluster_of[i]] += rep.points[i];
    for (size_t k = 0; k < rep.clusters.size(); ++k) {
      rep.clusters[k].value = sums[k] / double(rep.clusters[k].algebraic);
    }
    for (size_t i = 0; i < rep.points.size(); ++i) {
      EigenCluster& cl = rep.clusters[cluster_of[i]];
      cl.radius = std::max(cl.radius, std::abs(rep.points[i] - cl.value));
    }
    for (size_t i = 0; i < rep.points.size(); ++i) {
      rep.points[i] = rep.clusters[cluster_of[i]].value;
    }
    std::sort(rep.points.begin(), rep.points.end(), lex_less);
  }

  rep.moduli.reserve(rep.points.size());
  double max_mod = 0.0, min_mod = std::numeric_limits<double>::infinity();
  for (const cplx& p : rep.points) {
    double m = std::abs(p);
    rep.moduli.push_back(m);
    max_mod = std::max(max_mod, m);
    min_mod = std::min(min_mod, m);
  }
  rep.modulus_spread = (max_mod > 0.0) ? (max_mod - min_mod) / max_mod : 0.0;
  if (rep.modulus_spread <= tol && max_mod > 0.0) {
    double mean = std::accumulate(rep.moduli.begin(), rep.moduli.end(), 0.0) /
                  double(rep.moduli.size());
    rep.circle_radius = mean;
  }

  rep.adjoint_points.reserve(rep.points.size());
  for (const cplx& p : rep.points) rep.adjoint_points.push_back(std::conj(p));

  DenseRangeResult dr = dense_range_check(op);
  rep.dense_range = dr.dense_range;
  rep.determinant_witness = dr.determinant;

  bool gray = false;
  int geometric_total = 0;
  bool defective = false;
  for (size_t k = 0; k < rep.clusters.size(); ++k) {
    EigenCluster& cl = rep.clusters[k];
    Matrix shifted = a;
    for (int i = 0; i < d; ++i) shifted(i, i) -= cl.value;
    // Multiple charpoly roots scatter like (coefficient error)^(1/m) around
    // the true eigenvalue, so the rank cut has to absorb the observed
    // cluster radius on top of the base tolerance.
    double tol_k = std::max(rank_tol, 3.0 * cl.radius);
    double min_pivot = 0.0;
    int rank = pivoted_rank(shifted, tol_k, &min_pivot);
    cl.geometric = d - rank;
    geometric_total += cl.geometric;
    if (cl.geometric == 0) gray = true;  // not an eigenvalue numerically
    if (min_pivot > 0.0 && min_pivot >= 0.05 * tol_k && min_pivot <= 20.0 * tol_k) {
      gray = true;  // pivot in the gray zone around the rank tolerance
    }
    if (cl.geometric >= 1 && cl.geometric < cl.algebraic) defective = true;
  }
  if (gray) {
    rep.diagonalizable = Tristate::unknown;
  } else if (defective || geometric_total != d) {
    rep.diagonalizable = Tristate::no;
  } else {
    rep.diagonalizable = Tristate::yes;
  }
  return rep;
}

namespace {

CircleCheck circle_check_on(const std::vector<cplx>& pts, double tol) {
  CircleCheck out;
  if (pts.empty()) {
    out.passed = false;
    out.note = "empty spectrum";
    return out;
  }
  size_t imax = 0, imin = 0;
  double max_mod = -1.0, min_mod = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    double m = std::abs(pts[i]);
    sum += m;
    if (m > max_mod) {
      max_mod = m;
      imax = i;
    }
    if (m < min_mod) {
      min_mod = m;
      imin = i;
    }
  }
  if (max_mod == 0.0) {
    // Nilpotent case: vacuous pass, but no valid positive radius exists and
    // a zero spectrum rules out dense range.
    out.passed = true;
    out.degenerate = true;
    out.note = "all moduli zero: vacuous pass, no positive circle radius; "
               "zero spectrum implies no dense range";
    return out;
  }
  double spread = (max_mod - min_mod) / max_mod;
  if (spread <= tol) {
    out.passed = true;
    out.radius = sum / double(pts.size());
  } else {
    out.passed = false;
    out.witness = std::make_pair(pts[imin], pts[imax]);
  }
  return out;
}

}  // namespace

CircleCheck component_circle_check(const SpectrumReport& report, double tol) {
  return circle_check_on(report.points, tol);
}

CircleCheck adjoint_point_spectrum_check(const SpectrumReport& report, double tol) {
  return circle_check_on(report.adjoint_points, tol);
}

namespace {

void pairing_search(const std::vector<cplx>& a, const std::vector<cplx>& b,
                    std::vector<bool>& used, size_t i, double current,
                    double& best) {
  if (current >= best) return;  // prune
  if (i == a.size()) {
    best = current;
    return;
  }
  for (size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    double d = std::abs(a[i] - b[j]);
    if (d >= best) continue;
    used[j] = true;
    pairing_search(a, b, used, i + 1, std::max(current, d), best);
    used[j] = false;
  }
}

}  // namespace

double optimal_pairing_distance(const std::vector<cplx>& a,
                                const std::vector<cplx>& b) {
  if (a.size() != b.size()) {
    throw invalid_input("optimal_pairing_distance: size mismatch");
  }
  if (a.empty()) return 0.0;
  if (a.size() <= 9) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    pairing_search(a, b, used, 0, 0.0, best);
    return best;
  }
  // Greedy fallback for larger multisets.
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const cplx& x : a) {
    double bestd = std::numeric_limits<double>::infinity();
    size_t bestj = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(x - b[j]);
      if (d < bestd) {
        bestd = d;
        bestj = j;
      }
    }
    used[bestj] = true;
    worst = std::max(worst, bestd);
  }
  return worst;
}

}  // namespace srec
