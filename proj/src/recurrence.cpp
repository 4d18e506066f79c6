#include "srec/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace srec {

namespace {

constexpr double kLogScaleLimit = 700.0;  // exp() stays in double range below this

void validate_params(const DetectionParams& p) {
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
    throw invalid_input("detection params: epsilon must lie in (0, 1)");
  }
  if (p.n_min < 1 || p.n_min > p.n_max) {
    throw invalid_input("detection params: need 1 <= n_min <= n_max");
  }
}

Vector checked_start(const OperatorSpec& op, const Vector& x, const char* what) {
  if (static_cast<size_t>(op.dim()) != x.size()) {
    throw invalid_input(std::string(what) + ": operator/vector dimension mismatch");
  }
  require_finite(x, what);
  if (vec_norm(x) == 0.0) {
    throw invalid_input(std::string(what) + ": zero start vector");
  }
  return x;
}

// Streaming renormalized orbit; keeps only the current direction and the
// log-magnitude ledger.
struct OrbitStream {
  const OperatorSpec& op;
  Vector dir;
  double logmag;

  bool step() {
    Vector w = op.apply(dir);
    double m = vec_norm(w);
    if (m == 0.0) return false;
    for (cplx& z : w) z /= m;
    dir = std::move(w);
    logmag += std::log(m);
    return true;
  }
};

std::string shift_note(const OperatorSpec& op) {
  if (!op.contains_shift()) return {};
  return "truncation artifact: verdict concerns the truncated shift, not the "
         "untruncated operator; ";
}

// log of a certified upper bound on ||T^n||, via binary powering of the
// dense materialization with per-squaring max-norm rescaling.
double log_opnorm_upper_pow(const OperatorSpec& op, long n) {
  Matrix base = materialize_dense(op);
  Matrix acc = Matrix::identity(op.dim());
  double log_scale = 0.0;
  long e = n;
  auto rescale = [&](Matrix& m) {
    double s = m.max_abs();
    if (s > 0.0 && (s > 1e100 || s < 1e-100)) {
      cplx inv(1.0 / s, 0.0);
      m = inv * m;
      return std::log(s);
    }
    return 0.0;
  };
  while (e > 0) {
    if (e & 1) {
      acc = acc * base;
      log_scale += rescale(acc);
    }
    e >>= 1;
    if (e > 0) {
      base = base * base;
      log_scale += rescale(base);
    }
  }
  double bound = std::sqrt(norm_1(acc) * norm_inf(acc));
  if (bound == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(bound) + log_scale;
}

}  // namespace

long dirichlet_budget(const OperatorSpec& op, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw invalid_input("dirichlet_budget: epsilon must lie in (0, 1)");
  }
  SpectrumReport rep = spectrum(op);
  // Count distinct eigenvalue arguments (nonzero eigenvalues only).
  std::vector<double> args;
  for (const cplx& p : rep.points) {
    if (std::abs(p) == 0.0) continue;
    double a = std::arg(p) / (2.0 * M_PI);
    a -= std::floor(a);
    bool seen = false;
    for (double b : args) {
      if (std::abs(a - b) < 1e-12 || std::abs(std::abs(a - b) - 1.0) < 1e-12) {
        seen = true;
        break;
      }
    }
    if (!seen) args.push_back(a);
  }
  const double cap = static_cast<double>(1LL << 62);
  double per = std::ceil(1.0 / epsilon);
  double total = 1.0;
  for (size_t i = 0; i < args.size(); ++i) {
    total *= per;
    if (total > cap) {
      total = cap;
      break;
    }
  }
  return std::max(10000L, static_cast<long>(total));
}

RecurrenceVerdict detect_recurrence(const OperatorSpec& op, const Vector& x,
                                    const DetectionParams& params) {
  validate_params(params);
  Vector start = checked_start(op, x, "detect_recurrence");
  const double xnorm = vec_norm(start);
  Vector xhat(start.size());
  for (size_t i = 0; i < start.size(); ++i) xhat[i] = start[i] / xnorm;

  RecurrenceVerdict verdict;
  verdict.params = params;
  verdict.notes = shift_note(op);

  OrbitStream stream{op, xhat, std::log(xnorm)};
  const double log_hi = std::log1p(params.epsilon);
  const double log_lo = std::log(1.0 - params.epsilon);
  for (long n = 1; n <= params.n_max; ++n) {
    if (!stream.step()) {
      verdict.status = VerdictStatus::inconclusive;
      verdict.notes += "reached kernel at n=" + std::to_string(n);
      return verdict;
    }
    if (n < params.n_min) continue;
    // ||T^n x - x||/||x|| >= |exp(delta) - 1| with delta the log-magnitude
    // offset, so out-of-band magnitudes cannot be returns.
    double delta = stream.logmag - std::log(xnorm);
    if (delta > log_hi || delta < log_lo) continue;
    double scale = std::exp(delta);
    double res2 = 0.0;
    for (size_t i = 0; i < xhat.size(); ++i) {
      res2 += std::norm(scale * stream.dir[i] - xhat[i]);
    }
    double residual = std::sqrt(res2);
    if (residual <= params.epsilon) {
      ReturnCertificate cert{n, cplx(1.0, 0.0), residual};
      double replayed = verify_certificate(op, start, cert);
      if (replayed <= params.epsilon) {
        cert.residual = replayed;
        verdict.certificates.push_back(cert);
        if (verdict.certificates.size() >= 10) break;
      }
    }
  }
  verdict.status = verdict.certificates.empty() ? VerdictStatus::inconclusive
                                                : VerdictStatus::certified;
  return verdict;
}

RecurrenceVerdict detect_super_recurrence(const OperatorSpec& op, const Vector& x,
                                          const DetectionParams& params) {
  validate_params(params);
  Vector start = checked_start(op, x, "detect_super_recurrence");
  const double xnorm = vec_norm(start);
  Vector xhat(start.size());
  for (size_t i = 0; i < start.size(); ++i) xhat[i] = start[i] / xnorm;

  RecurrenceVerdict verdict;
  verdict.params = params;
  verdict.notes = shift_note(op);

  OrbitStream stream{op, xhat, std::log(xnorm)};
  for (long n = 1; n <= params.n_max; ++n) {
    if (!stream.step()) {
      verdict.status = VerdictStatus::inconclusive;
      verdict.notes += "reached kernel at n=" + std::to_string(n) +
                       "; not super-recurrent along this orbit";
      return verdict;
    }
    if (n < params.n_min) continue;
    // Both unit: the optimal relative residual min_lambda
    // ||lambda T^n x - x|| / ||x|| equals ||xhat - <xhat,dir> dir||,
    // computed in the cancellation-free complement form.
    cplx ip = inner(xhat, stream.dir);
    double r2 = 0.0;
    for (size_t i = 0; i < xhat.size(); ++i) {
      r2 += std::norm(xhat[i] - ip * stream.dir[i]);
    }
    double gap = std::sqrt(r2);
    if (gap <= params.epsilon) {
      if (std::abs(stream.logmag) > kLogScaleLimit) {
        verdict.notes += "return at n=" + std::to_string(n) +
                         " skipped: optimal scalar outside double range; ";
        continue;
      }
      cplx lambda = inner(start, stream.dir) * std::exp(-stream.logmag);
      ReturnCertificate cert{n, lambda, gap};
      double replayed = verify_certificate(op, start, cert);
      if (replayed <= params.epsilon) {
        cert.residual = replayed;
        verdict.certificates.push_back(cert);
        if (verdict.certificates.size() >= 10) break;
      }
    }
  }
  verdict.status = verdict.certificates.empty() ? VerdictStatus::inconclusive
                                                : VerdictStatus::certified;
  return verdict;
}

double verify_certificate(const OperatorSpec& op, const Vector& x,
                          const ReturnCertificate& cert) {
  if (cert.n < 1) throw invalid_input("verify_certificate: n must be >= 1");
  if (cert.n > 10'000'000L) {
    throw invalid_input("verify_certificate: n beyond the iteration budget");
  }
  if (!is_finite(cert.lambda)) {
    throw invalid_input("verify_certificate: non-finite lambda");
  }
  Vector v = checked_start(op, x, "verify_certificate");
  const double xnorm = vec_norm(v);

  long exp2 = 0;  // v * 2^exp2 == T^i x, rescaling is exact in binary
  for (long i = 0; i < cert.n; ++i) {
    v = op.apply(v);
    double m = vec_max_abs(v);
    if (m == 0.0) return 1.0;  // T^n x = 0, residual ||0 - x||/||x||
    if (m > 1e150) {
      for (cplx& z : v) z = cplx(std::ldexp(z.real(), -512), std::ldexp(z.imag(), -512));
      exp2 += 512;
    } else if (m < 1e-150) {
      for (cplx& z : v) z = cplx(std::ldexp(z.real(), 512), std::ldexp(z.imag(), 512));
      exp2 -= 512;
    }
  }

  const double lam_abs = std::abs(cert.lambda);
  if (lam_abs == 0.0) return 1.0;  // lambda T^n x = 0
  double log_term = std::log(lam_abs) + double(exp2) * std::log(2.0) +
                    std::log(vec_norm(v)) - std::log(xnorm);
  if (log_term > 30.0) {
    // Residual dominated by the scaled image; report its magnitude.
    return std::exp(std::min(log_term, kLogScaleLimit));
  }
  cplx lam2(std::ldexp(cert.lambda.real(), static_cast<int>(exp2)),
            std::ldexp(cert.lambda.imag(), static_cast<int>(exp2)));
  double res2 = 0.0;
  for (size_t i = 0; i < v.size(); ++i) res2 += std::norm(lam2 * v[i] - x[i]);
  return std::sqrt(res2) / xnorm;
}

PerturbedCheckResult perturbed_characterization_check(const OperatorSpec& op,
                                                      const Vector& x,
                                                      const DetectionParams& params) {
  validate_params(params);
  Vector start = checked_start(op, x, "perturbed_characterization_check");
  const double xnorm = vec_norm(start);

  // Candidate z with ||z - x|| <= epsilon ||x||: x itself, then displacements
  // along the dominant singular direction of T^n for a few small n.
  std::vector<Vector> candidates{start};
  const long probe_powers = std::min<long>(params.n_max, 8);
  for (long n = 1; n <= probe_powers; ++n) {
    OperatorSpec tn = (n == 1) ? op : OperatorSpec::power(static_cast<int>(n), op);
    // Dominant right-singular direction via a few rounds of T*T power iteration.
    Vector v(start.size());
    for (size_t i = 0; i < v.size(); ++i) {
      v[i] = cplx(std::cos(0.9 * double(i) + 0.2), std::sin(1.1 * double(i) + 0.5));
    }
    v = normalized(v);
    OperatorSpec tn_adj = adjoint(tn);
    for (int it = 0; it < 15; ++it) {
      Vector w = tn_adj.apply(tn.apply(v));
      double wn = vec_norm(w);
      if (wn == 0.0) break;
      for (cplx& z : w) z /= wn;
      v = std::move(w);
    }
    Vector z = start;
    for (size_t i = 0; i < z.size(); ++i) z[i] += 0.9 * params.epsilon * xnorm * v[i];
    candidates.push_back(std::move(z));
  }

  PerturbedCheckResult out;
  Vector xhat(start.size());
  for (size_t i = 0; i < start.size(); ++i) xhat[i] = start[i] / xnorm;
  for (const Vector& z : candidates) {
    double zn = vec_norm(z);
    if (zn == 0.0) continue;
    // Scan for ||lambda T^n z - x|| <= epsilon ||x||: the optimal lambda
    // aligns T^n z with x, so the criterion is gap(x, T^n z) <= epsilon.
    OrbitStream stream{op, normalized(z), std::log(zn)};
    for (long n = 1; n <= params.n_max; ++n) {
      if (!stream.step()) break;
      if (n < params.n_min) continue;
      cplx ip = inner(xhat, stream.dir);
      double r2 = 0.0;
      for (size_t i = 0; i < xhat.size(); ++i) {
        r2 += std::norm(xhat[i] - ip * stream.dir[i]);
      }
      double gap = std::sqrt(r2);
      if (gap <= params.epsilon && std::abs(stream.logmag) <= kLogScaleLimit) {
        cplx lambda = inner(start, stream.dir) * std::exp(-stream.logmag);
        // Replay against x with start z: residual of lambda T^n z - x.
        Vector img = z;
        bool overflow = false;
        for (long i = 0; i < n; ++i) {
          img = op.apply(img);
          if (vec_max_abs(img) > 1e280) {
            overflow = true;
            break;
          }
        }
        if (overflow) continue;
        double res2 = 0.0;
        for (size_t i = 0; i < img.size(); ++i) {
          res2 += std::norm(lambda * img[i] - start[i]);
        }
        double residual = std::sqrt(res2) / xnorm;
        if (residual <= params.epsilon) {
          out.passed = true;
          out.witness_z = z;
          out.witness = {n, lambda, residual};
          return out;
        }
      }
    }
  }
  out.notes = "no perturbed return found within the budget";
  return out;
}

NestedBallTrace refine_srec_vector(const OperatorSpec& op, const Vector& seed_center,
                                   double seed_radius, int depth,
                                   const DetectionParams& params) {
  validate_params(params);
  if (!(seed_radius > 0.0) || !std::isfinite(seed_radius)) {
    throw invalid_input("refine_srec_vector: seed radius must be positive");
  }
  if (depth < 1) throw invalid_input("refine_srec_vector: depth must be >= 1");
  Vector center = checked_start(op, seed_center, "refine_srec_vector");

  NestedBallTrace trace;
  trace.centers.push_back(center);
  trace.radii.push_back(seed_radius);

  const double r0 = seed_radius;
  double radius = seed_radius;
  std::mt19937_64 rng(0xba11);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int level = 1; level <= depth; ++level) {
    const double target_abs = std::ldexp(r0, -level) / 2.0;  // 2^-level r0 / 2

    // Find a return pair inside the current ball: the center first, then a
    // few jittered probes.
    bool found = false;
    Vector z;
    ReturnCertificate cert;
    for (int attempt = 0; attempt < 7 && !found; ++attempt) {
      Vector candidate = center;
      if (attempt > 0) {
        Vector dirv(center.size());
        for (cplx& c : dirv) c = cplx(gauss(rng), gauss(rng));
        double dn = vec_norm(dirv);
        if (dn == 0.0) continue;
        for (size_t i = 0; i < candidate.size(); ++i) {
          candidate[i] += 0.4 * radius * dirv[i] / dn;
        }
      }
      double cn = vec_norm(candidate);
      if (cn == 0.0) continue;
      double eps_rel = std::min(0.999, target_abs / cn);
      DetectionParams level_params{eps_rel, params.n_max, params.n_min};
      RecurrenceVerdict v = detect_super_recurrence(op, candidate, level_params);
      if (v.status == VerdictStatus::certified) {
        z = candidate;
        cert = v.certificates.front();
        found = true;
      }
    }
    if (!found) {
      trace.notes = "no return found at level " + std::to_string(level) +
                    " within n_max=" + std::to_string(params.n_max);
      trace.completed = false;
      return trace;
    }

    const double res_abs = cert.residual * vec_norm(z);
    const double dist_to_center = vec_norm(vec_sub(z, center));

    // Growth bound of the return map lambda T^n on the new ball.
    double log_growth = std::log(std::abs(cert.lambda)) + log_opnorm_upper_pow(op, cert.n);
    double growth = std::exp(std::min(log_growth, kLogScaleLimit));

    // New radius: small enough that (a) the bound target holds at the final
    // center, (b) the new ball nests in the previous one, (c) the image of
    // the new ball under the return map stays in the previous one.
    double fit_target = std::ldexp(r0, -level) / (2.0 * (growth + 1.0));
    double fit_nest = radius - dist_to_center;
    double img_dist = res_abs + dist_to_center;  // ||lambda T^n z - prev center||
    double fit_image = (radius - img_dist) / std::max(growth, 1e-12);
    double new_radius = 0.9 * std::min({fit_target, fit_nest, fit_image});
    if (!(new_radius > 0.0)) {
      trace.notes = "return found at level " + std::to_string(level) +
                    " but no admissible radius";
      trace.completed = false;
      return trace;
    }
    center = z;
    radius = new_radius;
    trace.centers.push_back(center);
    trace.radii.push_back(radius);
    trace.certificates.push_back(cert);
  }
  trace.completed = true;
  return trace;
}

HyperplaneResult hyperplane_restriction(const OperatorSpec& op, cplx lambda,
                                        double tol) {
  if (op.dim() < 2) throw invalid_input("hyperplane_restriction: dim must be >= 2");
  if (!is_finite(lambda)) throw invalid_input("hyperplane_restriction: non-finite lambda");
  SpectrumReport rep = spectrum(op);

  // In finite dimension the dual point spectrum equals sigma(T) as a
  // multiset, so membership is checked against the computed points and
  // cluster centroids. A cluster's scatter radius widens its acceptance:
  // multiple roots are only known to within their ring.
  bool member = false;
  for (const cplx& p : rep.points) {
    if (std::abs(lambda - p) <= tol * std::max(1.0, std::abs(lambda))) member = true;
  }
  for (const EigenCluster& cl : rep.clusters) {
    double accept = std::max(tol * std::max(1.0, std::abs(cl.value)), 2.0 * cl.radius);
    if (std::abs(lambda - cl.value) <= accept) member = true;
  }
  if (!member) {
    throw invalid_input("hyperplane_restriction: lambda is not an adjoint "
                        "eigenvalue within tolerance");
  }
  for (const EigenCluster& cl : rep.clusters) {
    if (std::abs(lambda - cl.value) <= 1e-4 * std::max(1.0, std::abs(cl.value)) &&
        cl.geometric < cl.algebraic) {
      HyperplaneResult r;
      r.status = HyperplaneStatus::inconclusive;
      r.notes = "defective eigenvalue: geometric multiplicity below algebraic";
      return r;
    }
  }

  const int d = op.dim();
  Matrix ah = materialize_dense(adjoint(op));
  const double scale = std::max(ah.frobenius_norm(), 1e-300);
  const cplx mu = std::conj(lambda);

  // Inverse iteration for the conj(lambda)-eigenvector of the conjugate
  // transpose; 3 deterministic restarts.
  Vector v;
  bool ok = false;
  for (int restart = 0; restart < 3 && !ok; ++restart) {
    Vector w(d);
    for (int i = 0; i < d; ++i) {
      w[i] = cplx(std::cos(1.3 * i + 0.7 * restart + 0.2),
                  std::sin(0.9 * i + 1.1 * restart + 0.4));
    }
    w = normalized(w);
    for (int it = 0; it < 60; ++it) {
      Matrix shifted = ah;
      for (int i = 0; i < d; ++i) shifted(i, i) -= mu;
      Vector next;
      try {
        next = solve_linear(shifted, w);
      } catch (const non_convergence&) {
        // Exactly singular shift: nudge off the eigenvalue.
        for (int i = 0; i < d; ++i) shifted(i, i) += cplx(1e-13 * scale, 0.0);
        next = solve_linear(shifted, w);
      }
      double nn = vec_norm(next);
      if (nn == 0.0) break;
      for (cplx& z : next) z /= nn;
      w = std::move(next);
      Vector img = mat_vec(ah, w);
      double res = 0.0;
      for (int i = 0; i < d; ++i) res += std::norm(img[i] - mu * w[i]);
      if (std::sqrt(res) <= 1e-10 * scale) {
        ok = true;
        break;
      }
    }
    if (ok) v = w;
  }
  if (!ok) {
    HyperplaneResult r;
    r.status = HyperplaneStatus::inconclusive;
    r.notes = "inverse iteration for the dual eigenvector did not converge";
    return r;
  }

  // Orthonormal basis of v-perp: Gram-Schmidt over the standard basis with
  // reorthogonalization.
  std::vector<Vector> basis;
  basis.reserve(d - 1);
  for (int j = 0; j < d && static_cast<int>(basis.size()) < d - 1; ++j) {
    Vector cand(d, cplx(0.0));
    cand[j] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      cplx pv = inner(cand, v);
      for (int i = 0; i < d; ++i) cand[i] -= pv * v[i];
      for (const Vector& b : basis) {
        cplx pb = inner(cand, b);
        for (int i = 0; i < d; ++i) cand[i] -= pb * b[i];
      }
    }
    double cn = vec_norm(cand);
    if (cn > 0.3) {
      for (cplx& z : cand) z /= cn;
      basis.push_back(std::move(cand));
    }
  }
  if (static_cast<int>(basis.size()) != d - 1) {
    HyperplaneResult r;
    r.status = HyperplaneStatus::inconclusive;
    r.notes = "failed to complete an orthonormal basis of the hyperplane";
    return r;
  }

  Matrix a = materialize_dense(op);
  Matrix compressed(d - 1, d - 1);
  std::vector<Vector> images(d - 1);
  for (int j = 0; j < d - 1; ++j) images[j] = mat_vec(a, basis[j]);
  for (int i = 0; i < d - 1; ++i) {
    for (int j = 0; j < d - 1; ++j) {
      compressed(i, j) = inner(images[j], basis[i]);
    }
  }
  // Invariance residual: || A b_j - sum_i C_ij b_i || over the basis.
  double inv_res2 = 0.0;
  for (int j = 0; j < d - 1; ++j) {
    Vector recon(d, cplx(0.0));
    for (int i = 0; i < d - 1; ++i) {
      for (int t = 0; t < d; ++t) recon[t] += compressed(i, j) * basis[i][t];
    }
    for (int t = 0; t < d; ++t) inv_res2 += std::norm(images[j][t] - recon[t]);
  }

  HyperplaneResult r;
  r.status = HyperplaneStatus::ok;
  r.decomposition = HyperplaneDecomposition{
      std::move(v), std::move(basis), OperatorSpec::dense(std::move(compressed)),
      std::sqrt(inv_res2)};
  return r;
}

}  // namespace srec
