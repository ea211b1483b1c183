// Copyright 2026 The superpose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "superpose/kraus.hpp"

namespace superpose::io {

using json = nlohmann::json;

inline constexpr int kReportDigits = 9;
inline constexpr int kDataDigits = 17;

[[noreturn]] inline void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, (pointer.empty() ? std::string("/") : pointer) +
                                              ": " + what);
}

inline void check_keys(const json& j, const std::string& pointer,
                       std::initializer_list<const char*> required) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  std::set<std::string> allowed;
  for (const char* key : required) {
    allowed.insert(key);
    if (!j.contains(key)) schema_error(pointer + "/" + key, "missing field");
  }
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) schema_error(pointer + "/" + item.key(), "unknown field");
  }
}

inline Complex complex_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema_error(pointer, "complex numbers must be [re, im] pairs");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    schema_error(pointer, "complex entry is not finite");
  }
  return z;
}

inline CVector vector_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) schema_error(pointer, "expected a non-empty array");
  CVector v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(complex_from_json(j[i], pointer + "/" + std::to_string(i)));
  return v;
}

/// Rows of [re, im] pairs.
inline CMatrix matrix_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) schema_error(pointer, "expected a non-empty array of rows");
  std::vector<Complex> data;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const CVector row = vector_from_json(j[r], pointer + "/" + std::to_string(r));
    if (r == 0) cols = row.size();
    if (row.size() != cols) schema_error(pointer + "/" + std::to_string(r), "ragged matrix");
    data.insert(data.end(), row.begin(), row.end());
  }
  return CMatrix(j.size(), cols, std::move(data));
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(std::span<const Complex> v) {
  json out = json::array();
  for (const Complex& z : v) out.push_back(to_json(z));
  return out;
}

inline json to_json(const CMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline FreeBasis basis_from_json(const json& j) {
  check_keys(j, "", {"d", "columns"});
  if (!j["d"].is_number_integer() || j["d"].get<long long>() < 2) {
    schema_error("/d", "d must be an integer >= 2");
  }
  const auto d = static_cast<std::size_t>(j["d"].get<long long>());
  const json& cols = j["columns"];
  if (!cols.is_array() || cols.size() != d) schema_error("/columns", "expected d columns");
  std::vector<CVector> columns;
  for (std::size_t i = 0; i < d; ++i) {
    const std::string ptr = "/columns/" + std::to_string(i);
    columns.push_back(vector_from_json(cols[i], ptr));
    if (columns.back().size() != d) schema_error(ptr, "column length differs from d");
  }
  return FreeBasis(columns);
}

inline json basis_to_json(const FreeBasis& basis) {
  json cols = json::array();
  for (std::size_t i = 0; i < basis.dim(); ++i) cols.push_back(to_json(basis.vector(i)));
  return json{{"d", basis.dim()}, {"columns", std::move(cols)}};
}

/// Either a pure state {"amp": ...} or a mixed state {"mat": ...}.
struct StateData {
  std::optional<PureState> pure;
  std::optional<DensityMatrix> mixed;

  DensityMatrix density() const { return pure ? DensityMatrix(*pure) : *mixed; }
  std::size_t dim() const { return pure ? pure->dim() : mixed->dim(); }
};

inline StateData state_from_json(const json& j) {
  if (!j.is_object()) schema_error("", "expected an object");
  StateData s;
  if (j.contains("amp")) {
    check_keys(j, "", {"amp"});
    try {
      s.pure.emplace(vector_from_json(j["amp"], "/amp"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SchemaViolation) throw;
      schema_error("/amp", std::string("unit-norm invariant violated (") + e.what() + ")");
    }
  } else if (j.contains("mat")) {
    check_keys(j, "", {"mat"});
    const CMatrix m = matrix_from_json(j["mat"], "/mat");
    if (!m.square()) schema_error("/mat", "density matrix must be square");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-9) {
      schema_error("/mat", "trace invariant violated: trace is " + std::to_string(tr));
    }
    try {
      s.mixed.emplace(m);
    } catch (const Error& e) {
      schema_error("/mat", std::string("density-matrix invariant violated (") + e.what() + ")");
    }
  } else {
    schema_error("", "expected field amp or mat");
  }
  return s;
}

inline json state_to_json(const PureState& psi) { return json{{"amp", to_json(psi.amp())}}; }
inline json state_to_json(const DensityMatrix& rho) { return json{{"mat", to_json(rho.mat())}}; }

inline std::vector<CMatrix> kraus_from_json(const json& j) {
  check_keys(j, "", {"operators"});
  const json& ops = j["operators"];
  if (!ops.is_array() || ops.empty()) schema_error("/operators", "expected a non-empty array");
  std::vector<CMatrix> out;
  for (std::size_t n = 0; n < ops.size(); ++n) {
    const std::string ptr = "/operators/" + std::to_string(n);
    out.push_back(matrix_from_json(ops[n], ptr));
    if (out.back().rows() != out.front().rows() || out.back().cols() != out.front().cols()) {
      schema_error(ptr, "operators differ in shape");
    }
  }
  return out;
}

inline json kraus_to_json(std::span<const CMatrix> ops) {
  json arr = json::array();
  for (const CMatrix& k : ops) arr.push_back(to_json(k));
  return json{{"operators", std::move(arr)}};
}

inline std::string format_number(double x, int digits) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0.0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump(const json& j, int digits, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& item : j.items()) {  // std::map order: sorted keys
        if (!first) out += ", ";
        first = false;
        out += json(item.key()).dump();
        out += ": ";
        dump(item.value(), digits, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump(j[i], digits, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_number(j.get<double>(), digits);
      break;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Sorted keys, ", " / ": " separators, floats with a fixed number of
/// significant digits, non-finite floats as null.
inline std::string canonical_dump(const json& j, int digits = kReportDigits) {
  std::string out;
  detail::dump(j, digits, out);
  return out;
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    schema_error("", std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

inline FreeBasis load_basis(const std::string& path) { return basis_from_json(load_json(path)); }
inline StateData load_state(const std::string& path) { return state_from_json(load_json(path)); }
inline std::vector<CMatrix> load_kraus(const std::string& path) {
  return kraus_from_json(load_json(path));
}

inline void save_json(const std::string& path, const json& j, int digits = kDataDigits) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << canonical_dump(j, digits) << '\n';
}

}  // namespace superpose::io
