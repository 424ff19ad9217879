#include "eqo/json_io.hpp"

#include <cmath>

#include "eqo/matrix_kernel.hpp"

namespace eqo::json_io {

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

json to_json(const MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Factorization<double>& f) {
  return {{"n", f.n()},
          {"W", to_json(f.W)},
          {"Y", to_json(f.Y)},
          {"Z", to_json(f.Z)},
          {"prefactor", to_json(f.prefactor)}};
}

cd complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidArgument(field + ": expected a complex scalar [re, im]");
  const cd z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument(field + ": non-finite value");
  return z;
}

MatrixXcd matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(field + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw InvalidArgument(field + "[0]: expected a non-empty row");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    const std::string row_name = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidArgument(row_name + ": expected " + std::to_string(cols) + " entries");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], row_name + "[" + std::to_string(k) + "]");
  }
  return m;
}

Factorization<double> factorization_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("factorization: expected a JSON object");
  for (const char* key : {"W", "Y", "Z"})
    if (!j.contains(key)) throw InvalidArgument(std::string("factorization: missing field '") + key + "'");
  Factorization<double> f;
  f.W = matrix_from_json(j.at("W"), "W");
  f.Y = matrix_from_json(j.at("Y"), "Y");
  f.Z = matrix_from_json(j.at("Z"), "Z");
  const Eigen::Index n = f.W.rows();
  for (const auto* m : {&f.W, &f.Y, &f.Z})
    if (m->rows() != n || m->cols() != n) throw DimensionMismatch("factorization blocks", m->rows(), m->cols(), n, n);
  if (const auto dev = max_asymmetry(f.W); dev > Tolerances{}.symmetry) throw AsymmetryError("W", dev);
  if (const auto dev = max_asymmetry(f.Z); dev > Tolerances{}.symmetry) throw AsymmetryError("Z", dev);
  f.prefactor = j.contains("prefactor") ? complex_from_json(j.at("prefactor"), "prefactor")
                                        : std::exp(f.Y.trace() / 2.0);
  return f;
}

}  // namespace eqo::json_io
