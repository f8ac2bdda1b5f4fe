#pragma once

// JSON for matrices and matrix tuples:
//   {"d": d, "entries": [d][n][n] of [re, im], "n": n}
// Doubles are written in shortest round-trip form, so finite values survive
// write/read bit for bit.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/sqrtlib.hpp"

namespace ncfree {

using json = nlohmann::json;

inline json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json tuple_to_json(const MatrixTuple& t) {
  json entries = json::array();
  for (const auto& m : t) entries.push_back(matrix_to_json(m));
  return {{"d", t.d()}, {"entries", entries}, {"n", t.n()}};
}

namespace detail {

inline double json_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number in ") + what, 0);
  return j.get<double>();
}

}  // namespace detail

inline cd complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("matrix entry must be [re, im]", 0);
  return {detail::json_number(j[0], "entry"), detail::json_number(j[1], "entry")};
}

inline CMatrix matrix_from_json(const json& j, Eigen::Index n) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw DimensionError("matrix must have n rows");
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw DimensionError("matrix row must have n entries");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline MatrixTuple tuple_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("entries"))
    throw ParseError("matrix tuple needs fields n, d, entries", 0);
  if (!j["n"].is_number_integer() || !j["d"].is_number_integer())
    throw ParseError("n and d must be integers", 0);
  const auto n = j["n"].get<long long>();
  const auto d = j["d"].get<long long>();
  if (n < 1 || d < 1) throw DimensionError("n and d must be positive");
  const json& e = j["entries"];
  if (!e.is_array() || static_cast<long long>(e.size()) != d) throw DimensionError("entries must hold d matrices");
  std::vector<CMatrix> parts;
  for (const auto& m : e) parts.push_back(matrix_from_json(m, static_cast<Eigen::Index>(n)));
  return MatrixTuple(std::move(parts));
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MatrixTuple read_tuple_file(const std::string& path) { return tuple_from_json(parse_json_text(read_text_file(path))); }

inline json root_set_to_json(const RootSet& r) {
  json roots = json::array();
  for (const auto& y : r.roots) roots.push_back(matrix_to_json(y));
  json centers = json::array();
  for (cd c : r.spec.gamma) centers.push_back(complex_to_json(c));
  return {{"alg_residuals", r.alg_residuals},
          {"base", matrix_to_json(r.base)},
          {"centers", centers},
          {"count", r.roots.size()},
          {"extended", r.extended},
          {"k", r.k},
          {"radius", r.spec.radius},
          {"residuals", r.residuals},
          {"roots", roots},
          {"taus", r.taus}};
}

}  // namespace ncfree
