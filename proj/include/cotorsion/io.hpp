#pragma once

// JSON forms of algebras, modules and maps.
//
// Algebra file:
//   { "char": p, "dim": n, "basis": [names], "unit": [n coords],
//     "mul": [[[n coeffs]]] }   mul[i][j][k] = coefficient of e_k in e_i e_j
// Module:  { "dim": m, "action": [ m x m row-major matrices, one per e_i ] }
// Map:     { "source": module, "target": module, "matrix": rows }

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cotorsion/module.hpp"

namespace cotorsion {

using json = nlohmann::json;

class AlgebraLoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, PrimeField f, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw AlgebraLoadError("matrix must have " + std::to_string(rows) + " rows");
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw AlgebraLoadError("matrix row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = f.reduce(j[i][c].get<long long>());
  }
  return m;
}

inline json algebra_to_json(const Algebra& a) {
  json j;
  j["char"] = a.characteristic();
  j["dim"] = a.dim();
  j["basis"] = a.basis_names();
  j["unit"] = a.unit();
  j["mul"] = a.structure_constants();
  return j;
}

/// Parses and validates; associativity and unit failures propagate as
/// AssociativityViolation / UnitViolation.
inline AlgebraPtr algebra_from_json(const json& j) {
  try {
    const auto p = j.at("char").get<long long>();
    const auto n = j.at("dim").get<std::size_t>();
    if (p < 2) throw AlgebraLoadError("char must be a prime");
    std::vector<std::string> names;
    if (j.contains("basis")) names = j.at("basis").get<std::vector<std::string>>();
    auto unit = j.at("unit").get<std::vector<long long>>();
    auto mul = j.at("mul").get<std::vector<std::vector<std::vector<long long>>>>();
    if (mul.size() != n) throw AlgebraLoadError("mul has " + std::to_string(mul.size()) + " slices, dim is " + std::to_string(n));
    return check_algebra(PrimeField{static_cast<Residue>(p)}, std::move(names), mul, unit);
  } catch (const json::exception& e) {
    throw AlgebraLoadError(std::string("malformed algebra JSON: ") + e.what());
  }
}

inline AlgebraPtr load_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AlgebraLoadError("cannot open algebra file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw AlgebraLoadError("'" + path + "' is not valid JSON: " + e.what());
  }
  return algebra_from_json(j);
}

inline json module_to_json(const ModuleRep& m) {
  json j;
  j["dim"] = m.dim();
  json acts = json::array();
  for (const auto& a : m.action()) acts.push_back(matrix_to_json(a));
  j["action"] = std::move(acts);
  return j;
}

inline ModuleRep module_from_json(const AlgebraPtr& alg, const json& j) {
  const auto d = j.at("dim").get<std::size_t>();
  const auto& acts = j.at("action");
  if (!acts.is_array() || acts.size() != alg->dim())
    throw AlgebraLoadError("module needs one action matrix per basis element");
  std::vector<Matrix> action;
  for (const auto& a : acts) action.push_back(matrix_from_json(a, alg->field(), d, d));
  return ModuleRep::make(alg, d, std::move(action));
}

inline json map_to_json(const ModuleMap& f) {
  return {{"source", module_to_json(f.source())},
          {"target", module_to_json(f.target())},
          {"matrix", matrix_to_json(f.matrix())}};
}

inline ModuleMap map_from_json(const AlgebraPtr& alg, const json& j) {
  ModuleRep s = module_from_json(alg, j.at("source"));
  ModuleRep t = module_from_json(alg, j.at("target"));
  return ModuleMap(s, t, matrix_from_json(j.at("matrix"), alg->field(), t.dim(), s.dim()));
}

inline json ses_to_json(const ShortExactSeq& s) {
  return {{"left", map_to_json(s.left)}, {"right", map_to_json(s.right)}};
}

}  // namespace cotorsion
