#ifndef EQO_JSON_IO_HPP
#define EQO_JSON_IO_HPP

// JSON wire format: a complex scalar is [re, im], a matrix is a row-major
// nested array of complex scalars. Plain numbers are accepted as real scalars
// on input.

#include <string>

#include <json.hpp>

#include "eqo/reordering.hpp"
#include "eqo/types.hpp"

namespace eqo::json_io {

using nlohmann::json;

json to_json(cd z);
json to_json(const MatrixXcd& m);
json to_json(const Factorization<double>& f);

/// `field` names the offending value in error messages.
cd complex_from_json(const json& j, const std::string& field);
MatrixXcd matrix_from_json(const json& j, const std::string& field);
Factorization<double> factorization_from_json(const json& j);

}  // namespace eqo::json_io

#endif  // EQO_JSON_IO_HPP
