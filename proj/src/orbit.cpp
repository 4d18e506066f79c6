#include "srec/orbit.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "srec/operator_json.hpp"

namespace srec {

OrbitRecord iterate_orbit(const OperatorSpec& op, const Vector& x, long n_steps) {
  if (n_steps < 1) throw invalid_input("iterate_orbit: need at least one step");
  require_finite(x, "iterate_orbit");
  double xn = vec_norm(x);
  if (xn == 0.0) throw invalid_input("iterate_orbit: zero start vector");

  OrbitRecord rec;
  rec.base = x;
  rec.steps.reserve(n_steps + 1);
  Vector dir(x.size());
  for (size_t i = 0; i < x.size(); ++i) dir[i] = x[i] / xn;
  double logmag = std::log(xn);
  rec.steps.push_back({0, dir, logmag});

  for (long n = 1; n <= n_steps; ++n) {
    Vector w = op.apply(dir);
    double m = vec_norm(w);
    if (m == 0.0) {
      rec.reached_kernel = true;
      rec.kernel_step = n;
      break;
    }
    for (cplx& z : w) z /= m;
    dir = std::move(w);
    logmag += std::log(m);
    rec.steps.push_back({n, dir, logmag});
  }
  return rec;
}

double projective_gap(const Vector& x, const Vector& y) {
  double xn = vec_norm(x);
  double yn = vec_norm(y);
  if (xn == 0.0 || yn == 0.0) {
    throw invalid_input("projective_gap: zero vector");
  }
  // ||x^ - <x^,y^> y^||: the orthogonal complement form of
  // sqrt(1 - |<x^,y^>|^2). The latter cancels catastrophically near
  // collinearity (floor ~ sqrt(eps)); this one stays accurate to eps.
  cplx ip = inner(x, y) / (xn * yn);
  double r2 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    r2 += std::norm(x[i] / xn - ip * (y[i] / yn));
  }
  return std::min(1.0, std::sqrt(r2));
}

cplx best_scalar(const Vector& x, const Vector& y) {
  double yn2 = 0.0;
  for (const cplx& z : y) yn2 += std::norm(z);
  if (yn2 == 0.0) throw invalid_input("best_scalar: zero reference vector");
  return inner(x, y) / yn2;
}

std::string orbit_to_jsonl(const OrbitRecord& record) {
  std::ostringstream out;
  for (const OrbitStep& s : record.steps) {
    nlohmann::json line{{"n", s.n},
                        {"direction", vector_to_json(s.direction)},
                        {"log_magnitude", s.log_magnitude}};
    out << line.dump() << "\n";
  }
  if (record.reached_kernel) {
    nlohmann::json line{{"reached_kernel", true}, {"kernel_step", record.kernel_step}};
    out << line.dump() << "\n";
  }
  return out.str();
}

}  // namespace srec
