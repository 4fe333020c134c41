// Copyright 2026 The ncdbr Authors
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

#include "ncdbr/colligation.hpp"
#include "ncdbr/nc_space.hpp"
#include "ncdbr/numerics.hpp"
#include "ncdbr/row_contraction.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

namespace ncdbr {

using json = nlohmann::json;

// Matrices travel as rows of [re, im] pairs.
inline json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline Mat matrix_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw Error(ErrorKind::InvalidInput, "matrix must have " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw Error(ErrorKind::InvalidInput, "matrix row must have " + std::to_string(cols) + " entries");
    for (Index k = 0; k < cols; ++k) {
      const json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(ErrorKind::InvalidInput, "entries must be [re, im] pairs");
      m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  check_finite(m, "matrix entry");
  return m;
}

// {"d": d, "n": n, "matrices": [d arrays of n x n [re, im] pairs]}
inline MatrixTuple tuple_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("matrices"))
    throw Error(ErrorKind::InvalidInput, "tuple file needs d, n and matrices");
  if (!j["d"].is_number_integer() || !j["n"].is_number_integer())
    throw Error(ErrorKind::InvalidInput, "d and n must be integers");
  long d = j["d"].get<long>(), n = j["n"].get<long>();
  if (d < 1 || n < 1) throw Error(ErrorKind::InvalidInput, "d and n must be positive");
  const json& ms = j["matrices"];
  if (!ms.is_array() || static_cast<long>(ms.size()) != d)
    throw Error(ErrorKind::InvalidInput, "matrices must hold d entries");
  std::vector<Mat> c;
  for (const auto& m : ms) c.push_back(matrix_from_json(m, n, n));
  return MatrixTuple(std::move(c));
}

inline json tuple_to_json(const MatrixTuple& z) {
  json j;
  j["d"] = z.d();
  j["n"] = z.n();
  j["matrices"] = json::array();
  for (const auto& m : z.coords) j["matrices"].push_back(matrix_to_json(m));
  return j;
}

inline RowContraction row_contraction_from_json(const json& j) { return RowContraction(tuple_from_json(j).coords); }

inline json row_contraction_to_json(const RowContraction& t) { return tuple_to_json(MatrixTuple(t.ops)); }

// {"d", "A", "B", "C", "D"} with each block a matrix.
inline json colligation_to_json(const Colligation& c) {
  return json{{"d", c.d}, {"A", matrix_to_json(c.A)}, {"B", matrix_to_json(c.B)}, {"C", matrix_to_json(c.C)},
              {"D", matrix_to_json(c.D)}};
}

inline Mat matrix_from_json_any(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "matrix must be an array");
  Index rows = static_cast<Index>(j.size());
  Index cols = rows ? static_cast<Index>(j[0].size()) : 0;
  return matrix_from_json(j, rows, cols);
}

inline Colligation colligation_from_json(const json& j) {
  Colligation c;
  c.d = j.at("d").get<int>();
  c.A = matrix_from_json_any(j.at("A"));
  c.B = matrix_from_json_any(j.at("B"));
  c.C = matrix_from_json_any(j.at("C"));
  c.D = matrix_from_json_any(j.at("D"));
  c.validate();
  return c;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

// Canonical form: keys sorted (nlohmann objects are ordered maps), no whitespace.
inline std::string canonical_dump(const json& j) { return j.dump(); }

inline std::string input_digest(const json& j) { return sha256_hex(canonical_dump(j)); }

}  // namespace ncdbr
