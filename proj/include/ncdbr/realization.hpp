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
#include "ncdbr/sampler.hpp"

#include <map>
#include <vector>

namespace ncdbr {

// B(X) = I (x) D + (I (x) C) L_A(X)^{-1} (X (x) B), L_A(X) = I - sum_j X_j (x) A_j.
inline Mat transfer_eval(const Colligation& c, const MatrixTuple& x) {
  c.validate();
  if (x.d() != c.d) throw Error(ErrorKind::DimensionMismatch, "transfer_eval: tuple d differs from colligation d");
  const Index n = x.n(), s = c.state_dim();
  if (s == 0) return lift(c.D, n);
  Mat pencil = identity(s * n);
  Mat xb = Mat::Zero(s * n, c.input_dim() * n);
  for (int j = 0; j < c.d; ++j) {
    pencil -= kron(x[j], c.A_block(j));
    xb += kron(x[j], c.B_block(j));
  }
  Eigen::PartialPivLU<Mat> lu(pencil);
  double rc = lu.rcond();
  if (!(rc > 1e-14)) throw Error(ErrorKind::SingularPencil, "pencil reciprocal condition " + std::to_string(rc));
  return lift(c.D, n) + lift(c.C, n) * lu.solve(xb);
}

inline SchurSampler transfer_sampler(const Colligation& c) {
  return make_sampler(c.d, c.input_dim(), c.output_dim(), [c](const MatrixTuple& x) { return transfer_eval(c, x); },
                      "transfer");
}

// Coefficient of X^w in the expansion B(X) = sum_w X^w (x) B_w:
// B_empty = D, and B_{i1...ik} = C A_{i1} ... A_{i(k-1)} B_{ik}.
inline Mat taylor_coeff(const Colligation& c, const Word& w, int max_len) {
  if (static_cast<int>(w.size()) > max_len) throw Error(ErrorKind::InvalidInput, "word longer than max_len");
  if (w.empty()) return c.D;
  Mat acc = c.C;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) acc = acc * c.A_block(w[i]);
  return acc * c.B_block(w.back());
}

// All coefficients up to length max_len, sharing prefix products.
inline std::map<Word, Mat, GradedLex> taylor_coeffs(const Colligation& c, int max_len) {
  std::map<Word, Mat, GradedLex> out;
  out[Word{}] = c.D;
  if (max_len == 0) return out;
  // prefix[w] = C A_{w_1} ... A_{w_k}
  std::map<Word, Mat, GradedLex> prefix;
  prefix[Word{}] = c.C;
  for (int len = 1; len <= max_len; ++len) {
    std::map<Word, Mat, GradedLex> next;
    for (const auto& [w, pre] : prefix) {
      for (int j = 0; j < c.d; ++j) {
        Word wj = w;
        wj.push_back(j);
        out[wj] = pre * c.B_block(j);
        if (len < max_len) next[wj] = pre * c.A_block(j);
      }
    }
    prefix.swap(next);
  }
  return out;
}

// sum_{|w| <= L} X^w (x) B_w
inline Mat taylor_reassemble(const std::map<Word, Mat, GradedLex>& coeffs, const MatrixTuple& x) {
  const Mat& b0 = coeffs.begin()->second;
  Mat out = Mat::Zero(b0.rows() * x.n(), b0.cols() * x.n());
  for (const auto& [w, bw] : coeffs) out += kron(word_apply(x, w), bw);
  return out;
}

inline bool is_coisometric(const Colligation& c, const Tolerance& tol = {}) {
  Mat m = c.matrix();
  return op_norm(m * m.adjoint() - identity(m.rows())) <= 10.0 * tol.eq_abs;
}

// Span of A^{*w} C^* over all words, with A^*_j the adjoint of the j-th block.
inline SpanResult observability_span(const Colligation& c, const Tolerance& tol = {}) {
  std::vector<Mat> ops;
  for (int j = 0; j < c.d; ++j) ops.push_back(c.A_block(j).adjoint());
  return invariant_span(ops, c.C.adjoint(), tol);
}

inline bool is_observable(const Colligation& c, const Tolerance& tol = {}) {
  return observability_span(c, tol).dim == c.state_dim();
}

}  // namespace ncdbr
