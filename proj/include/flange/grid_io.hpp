// Grid-module JSON: canonical serialization and schema-checked parsing
// with JSON-path diagnostics.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flange/error.hpp"
#include "flange/grid_module.hpp"

namespace flange {

namespace detail {

using json = nlohmann::ordered_json;

inline Scalar scalar_from_json(const json& j, const FieldSpec& field, const std::string& path) {
  if (j.is_number_integer()) return field.from_int(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    std::size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return field.from_int(std::stoll(s));
      return field.make(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ParseError(path, "scalar string must be an integer or num/den");
    }
  }
  throw ParseError(path, "scalar must be an integer or a num/den string");
}

inline json scalar_to_json(const Scalar& s) {
  if (s.den == 1) return json(s.num);
  return json(to_string(s));
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key, "missing required field");
  return *it;
}

inline std::int64_t expect_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline Degree degree_from_json(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError(path, "expected an array of " + std::to_string(n) + " integers");
  Degree d = Degree::zero(n);
  for (int i = 0; i < n; ++i)
    d[i] = static_cast<int>(expect_integer(j[i], path + "[" + std::to_string(i) + "]"));
  return d;
}

}  // namespace detail

/// Canonical JSON for a grid module.  Schema:
///   { "n": int, "p": int,
///     "box": {"low": [int...], "high": [int...]},
///     "dims": [int...],                       // box points in lex order
///     "maps": [ per axis: [ per point whose successor stays in the box,
///                           in lex order: row-major 2D scalar array ] ] }
/// Output is compact (no whitespace) with the fields in this order, so
/// equal modules serialize to identical bytes.
inline std::string serialize_grid(const GridModule& m) {
  detail::json j;
  j["n"] = m.n();
  j["p"] = m.field().characteristic();
  j["box"] = detail::json::object();
  j["box"]["low"] = m.box().low().c;
  j["box"]["high"] = m.box().high().c;
  j["dims"] = detail::json::array();
  for (std::int64_t i = 0; i < m.box().point_count(); ++i) j["dims"].push_back(m.dim_in_box(i));
  j["maps"] = detail::json::array();
  for (int axis = 0; axis < m.n(); ++axis) {
    detail::json per_axis = detail::json::array();
    Degree d = m.box().low();
    std::int64_t idx = 0;
    do {
      if (d[axis] < m.box().high()[axis]) {
        const Matrix& step = m.step_in_box(idx, axis);
        detail::json rows = detail::json::array();
        for (int r = 0; r < step.rows(); ++r) {
          detail::json row = detail::json::array();
          for (int c = 0; c < step.cols(); ++c) row.push_back(detail::scalar_to_json(step.at(r, c)));
          rows.push_back(std::move(row));
        }
        per_axis.push_back(std::move(rows));
      }
      ++idx;
    } while (m.box().next_point(d));
    j["maps"].push_back(std::move(per_axis));
  }
  return j.dump();
}

/// Parse the grid JSON format; inverse of serialize_grid.  Malformed
/// documents raise ParseError carrying the JSON path of the offending
/// value.  Shapes are fully checked; commutativity is left to validate().
inline GridModule parse_grid(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("$", "expected a JSON object");

  std::int64_t n64 = detail::expect_integer(detail::member(j, "n", "$"), "$.n");
  if (n64 < 1 || n64 > 16) throw ParseError("$.n", "number of parameters must be in [1, 16]");
  int n = static_cast<int>(n64);

  std::int64_t p = detail::expect_integer(detail::member(j, "p", "$"), "$.p");
  FieldSpec field(2);
  try {
    field = FieldSpec(p);
  } catch (const Error&) {
    throw ParseError("$.p", "field characteristic must be 0 or a prime");
  }

  const detail::json& box_json = detail::member(j, "box", "$");
  Degree low = detail::degree_from_json(detail::member(box_json, "low", "$.box"), n, "$.box.low");
  Degree high =
      detail::degree_from_json(detail::member(box_json, "high", "$.box"), n, "$.box.high");
  if (!low.leq(high)) throw ParseError("$.box", "low must be componentwise <= high");
  Box box(low, high);

  const detail::json& dims_json = detail::member(j, "dims", "$");
  if (!dims_json.is_array() ||
      static_cast<std::int64_t>(dims_json.size()) != box.point_count())
    throw ParseError("$.dims", "expected an array of " + std::to_string(box.point_count()) +
                                   " dimensions (one per box point)");
  std::vector<int> dims(box.point_count());
  for (std::int64_t i = 0; i < box.point_count(); ++i) {
    std::string path = "$.dims[" + std::to_string(i) + "]";
    std::int64_t v = detail::expect_integer(dims_json[i], path);
    if (v < 0 || v > 4096) throw ParseError(path, "dimension out of range [0, 4096]");
    dims[i] = static_cast<int>(v);
  }

  const detail::json& maps_json = detail::member(j, "maps", "$");
  if (!maps_json.is_array() || static_cast<int>(maps_json.size()) != n)
    throw ParseError("$.maps", "expected one map array per axis (" + std::to_string(n) + ")");
  std::vector<std::vector<Matrix>> steps(
      n, std::vector<Matrix>(box.point_count(), Matrix(field, 0, 0)));
  for (int axis = 0; axis < n; ++axis) {
    std::string axis_path = "$.maps[" + std::to_string(axis) + "]";
    const detail::json& per_axis = maps_json[axis];
    if (!per_axis.is_array()) throw ParseError(axis_path, "expected an array of matrices");
    std::size_t pos = 0;
    Degree d = box.low();
    std::int64_t idx = 0;
    do {
      if (d[axis] < box.high()[axis]) {
        std::string mat_path = axis_path + "[" + std::to_string(pos) + "]";
        if (pos >= per_axis.size())
          throw ParseError(axis_path, "too few matrices: expected one per point with an "
                                      "in-box successor along the axis");
        const detail::json& mat_json = per_axis[pos];
        int rows = dims[box.index_of(d.plus_axis(axis))];
        int cols = dims[idx];
        if (!mat_json.is_array() || static_cast<int>(mat_json.size()) != rows)
          throw ParseError(mat_path, "expected " + std::to_string(rows) + " rows");
        Matrix step(field, rows, cols);
        for (int r = 0; r < rows; ++r) {
          std::string row_path = mat_path + "[" + std::to_string(r) + "]";
          const detail::json& row = mat_json[r];
          if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ParseError(row_path, "expected " + std::to_string(cols) + " entries");
          for (int c = 0; c < cols; ++c)
            step.set(r, c,
                     detail::scalar_from_json(row[c], field,
                                              row_path + "[" + std::to_string(c) + "]"));
        }
        steps[axis][idx] = std::move(step);
        ++pos;
      }
      ++idx;
    } while (box.next_point(d));
    if (pos != per_axis.size())
      throw ParseError(axis_path, "too many matrices: expected " + std::to_string(pos));
  }
  return GridModule(field, box, std::move(dims), std::move(steps));
}

}  // namespace flange
