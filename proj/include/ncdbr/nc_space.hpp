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

#include "ncdbr/numerics.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ncdbr {

// A point of the NC universe: d square matrices of a common size n.
// Operators on X (x) C^n are stored with the X index fast (row p*dim X + x),
// so the operator sum_j T_j (x) Z_j is sum_j kron(Z_j, T_j).
struct MatrixTuple {
  std::vector<Mat> coords;

  MatrixTuple() = default;
  explicit MatrixTuple(std::vector<Mat> c) : coords(std::move(c)) { validate(); }

  int d() const { return static_cast<int>(coords.size()); }
  Index n() const { return coords.empty() ? 0 : coords.front().rows(); }
  const Mat& operator[](int j) const { return coords[j]; }

  void validate() const {
    if (coords.empty()) throw Error(ErrorKind::DimensionMismatch, "tuple needs d >= 1");
    Index n0 = coords.front().rows();
    for (const auto& c : coords)
      if (c.rows() != n0 || c.cols() != n0)
        throw Error(ErrorKind::DimensionMismatch, "tuple coordinates must be square of equal size");
    for (const auto& c : coords) check_finite(c, "tuple coordinate");
  }

  // Block row [Z_1 ... Z_d], n x nd.
  Mat row() const {
    Mat r(n(), n() * d());
    for (int j = 0; j < d(); ++j) r.middleCols(j * n(), n()) = coords[j];
    return r;
  }

  static MatrixTuple zero(int d, Index n) { return MatrixTuple(std::vector<Mat>(d, Mat::Zero(n, n))); }

  static MatrixTuple scalars(const std::vector<cplx>& z) {
    std::vector<Mat> c;
    for (cplx v : z) c.push_back(Mat::Constant(1, 1, v));
    return MatrixTuple(std::move(c));
  }
};

// Letters are 0-based internally; z1 is letter 0.
using Word = std::vector<int>;

inline double row_norm(const MatrixTuple& z) { return op_norm(z.row()); }

inline bool in_row_ball(const MatrixTuple& z, double margin = 0.0) { return row_norm(z) < 1.0 - margin; }

inline MatrixTuple direct_sum(const MatrixTuple& z, const MatrixTuple& w) {
  if (z.d() != w.d()) throw Error(ErrorKind::DimensionMismatch, "direct_sum needs equal d");
  std::vector<Mat> c;
  for (int j = 0; j < z.d(); ++j) {
    Mat b = Mat::Zero(z.n() + w.n(), z.n() + w.n());
    b.topLeftCorner(z.n(), z.n()) = z[j];
    b.bottomRightCorner(w.n(), w.n()) = w[j];
    c.push_back(b);
  }
  return MatrixTuple(std::move(c));
}

struct Conjugated {
  MatrixTuple tuple;
  double condition = 1.0;
};

// Coordinatewise S^{-1} Z_j S.
inline Conjugated conjugate(const MatrixTuple& z, const Mat& s, const Tolerance& tol = {}) {
  if (s.rows() != z.n() || s.cols() != z.n()) throw Error(ErrorKind::DimensionMismatch, "similarity size");
  Eigen::JacobiSVD<Mat> svd(s);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= tol.rank_rel * sv(0))
    throw Error(ErrorKind::SingularSimilarity, "similarity is rank deficient");
  Conjugated out;
  out.condition = sv(0) / sv(sv.size() - 1);
  Eigen::PartialPivLU<Mat> lu(s);
  std::vector<Mat> c;
  for (const auto& zj : z.coords) c.push_back(lu.solve(zj * s));
  out.tuple = MatrixTuple(std::move(c));
  return out;
}

inline Mat gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

// Complex Gaussian tuple rescaled to row norm exactly `radius`.
inline MatrixTuple sample_ball_point(int d, Index n, double radius, std::uint64_t seed) {
  if (d < 1 || n < 1) throw Error(ErrorKind::DimensionMismatch, "sample_ball_point needs d, n >= 1");
  if (radius < 0 || radius >= 1) throw Error(ErrorKind::InvalidInput, "radius must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::vector<Mat> c;
  for (int j = 0; j < d; ++j) c.push_back(gaussian_matrix(n, n, rng));
  MatrixTuple z(std::move(c));
  double r = row_norm(z);
  for (auto& zj : z.coords) zj *= radius / r;
  return z;
}

// Product T_{w_1} ... T_{w_k}; identity for the empty word.
inline Mat word_apply(const std::vector<Mat>& t, const Word& w) {
  if (t.empty()) throw Error(ErrorKind::DimensionMismatch, "word_apply needs a nonempty tuple");
  Mat out = identity(t.front().rows());
  for (int letter : w) {
    if (letter < 0 || letter >= static_cast<int>(t.size()))
      throw Error(ErrorKind::DimensionMismatch, "letter out of range");
    out = out * t[letter];
  }
  return out;
}

inline Mat word_apply(const MatrixTuple& z, const Word& w) { return word_apply(z.coords, w); }

inline Word transpose(const Word& w) { return Word(w.rbegin(), w.rend()); }

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Graded lexicographic: shorter words first, then letterwise.
struct GradedLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline std::vector<Word> words_up_to(int d, int max_len) {
  std::vector<Word> out{Word{}};
  std::size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (int a = 0; a < d; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(w);
      }
    level_begin = level_end;
  }
  return out;
}

inline std::size_t word_count(int d, int max_len) {
  if (d == 1) return static_cast<std::size_t>(max_len) + 1;
  std::size_t total = 0, p = 1;
  for (int k = 0; k <= max_len; ++k, p *= d) total += p;
  return total;
}

inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += "*";
    s += "z" + std::to_string(w[i] + 1);
  }
  return s;
}

}  // namespace ncdbr
