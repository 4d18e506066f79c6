#include "srec/operator_json.hpp"

namespace srec {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* name, const std::string& where) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw invalid_input(where + ": missing field \"" + name + "\"");
  }
  return *it;
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw invalid_input(where + ": complex scalar must be a [re, im] array");
  }
  cplx z(j[0].get<double>(), j[1].get<double>());
  if (!is_finite(z)) throw invalid_input(where + ": non-finite complex scalar");
  return z;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back(complex_to_json(z));
  return a;
}

Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw invalid_input(where + ": expected an array");
  Vector v;
  v.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v.push_back(complex_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return v;
}

json operator_to_json(const OperatorSpec& op) {
  return std::visit(
      overloaded{
          [&](const DenseOp& n) {
            json rows = json::array();
            for (int i = 0; i < n.matrix.rows(); ++i) {
              json row = json::array();
              for (int j = 0; j < n.matrix.cols(); ++j) {
                row.push_back(complex_to_json(n.matrix(i, j)));
              }
              rows.push_back(row);
            }
            return json{{"kind", "dense"}, {"matrix", rows}};
          },
          [&](const DiagonalOp& n) {
            return json{{"kind", "diagonal"}, {"entries", vector_to_json(n.entries)}};
          },
          [&](const ShiftOp& n) {
            return json{{"kind", "shift"}, {"weights", n.weights}, {"dim", n.dim}};
          },
          [&](const DirectSumOp& n) {
            json parts = json::array();
            for (const auto& p : n.parts) parts.push_back(operator_to_json(p));
            return json{{"kind", "direct_sum"}, {"parts", parts}};
          },
          [&](const ScaledOp& n) {
            return json{{"kind", "scaled"},
                        {"c", complex_to_json(n.factor)},
                        {"inner", operator_to_json(n.inner)}};
          },
          [&](const PowerOp& n) {
            return json{{"kind", "power"},
                        {"p", n.exponent},
                        {"inner", operator_to_json(n.inner)}};
          },
          [&](const PolynomialOp& n) {
            return json{{"kind", "polynomial"},
                        {"coeffs", vector_to_json(n.coeffs)},
                        {"inner", operator_to_json(n.inner)}};
          },
      },
      op.node().v);
}

OperatorSpec operator_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw invalid_input(where + ": expected an object");
  const json& kind_j = field(j, "kind", where);
  if (!kind_j.is_string()) throw invalid_input(where + ".kind: expected a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "dense") {
    const json& rows = field(j, "matrix", where);
    if (!rows.is_array() || rows.empty()) {
      throw invalid_input(where + ".matrix: expected a nonempty array of rows");
    }
    int d = static_cast<int>(rows.size());
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
      const json& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != d) {
        throw invalid_input(where + ".matrix[" + std::to_string(i) +
                            "]: expected " + std::to_string(d) + " entries");
      }
      for (int k = 0; k < d; ++k) {
        m(i, k) = complex_from_json(row[k], where + ".matrix[" + std::to_string(i) +
                                                "][" + std::to_string(k) + "]");
      }
    }
    return OperatorSpec::dense(std::move(m));
  }
  if (kind == "diagonal") {
    Vector entries = vector_from_json(field(j, "entries", where), where + ".entries");
    if (entries.empty()) throw invalid_input(where + ".entries: empty");
    return OperatorSpec::diagonal(std::move(entries));
  }
  if (kind == "shift") {
    const json& w = field(j, "weights", where);
    const json& dj = field(j, "dim", where);
    if (!dj.is_number_integer()) {
      throw invalid_input(where + ".dim: expected an integer");
    }
    if (!w.is_array()) throw invalid_input(where + ".weights: expected an array");
    std::vector<double> weights;
    for (size_t i = 0; i < w.size(); ++i) {
      if (!w[i].is_number()) {
        throw invalid_input(where + ".weights[" + std::to_string(i) +
                            "]: expected a number");
      }
      weights.push_back(w[i].get<double>());
    }
    return OperatorSpec::backward_shift(std::move(weights), dj.get<int>());
  }
  if (kind == "direct_sum") {
    const json& parts = field(j, "parts", where);
    if (!parts.is_array() || parts.empty()) {
      throw invalid_input(where + ".parts: expected a nonempty array");
    }
    std::vector<OperatorSpec> ops;
    for (size_t i = 0; i < parts.size(); ++i) {
      ops.push_back(operator_from_json(parts[i],
                                       where + ".parts[" + std::to_string(i) + "]"));
    }
    return OperatorSpec::direct_sum(std::move(ops));
  }
  if (kind == "scaled") {
    cplx c = complex_from_json(field(j, "c", where), where + ".c");
    return OperatorSpec::scaled(c, operator_from_json(field(j, "inner", where),
                                                      where + ".inner"));
  }
  if (kind == "power") {
    const json& p = field(j, "p", where);
    if (!p.is_number_integer()) throw invalid_input(where + ".p: expected an integer");
    return OperatorSpec::power(p.get<int>(),
                               operator_from_json(field(j, "inner", where),
                                                  where + ".inner"));
  }
  if (kind == "polynomial") {
    Vector coeffs = vector_from_json(field(j, "coeffs", where), where + ".coeffs");
    return OperatorSpec::polynomial(std::move(coeffs),
                                    operator_from_json(field(j, "inner", where),
                                                       where + ".inner"));
  }
  throw invalid_input(where + ".kind: unknown operator kind \"" + kind + "\"");
}

}  // namespace srec
