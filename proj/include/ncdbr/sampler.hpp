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

#include "ncdbr/nc_space.hpp"
#include "ncdbr/numerics.hpp"

#include <functional>
#include <string>
#include <utility>

namespace ncdbr {

// An operator-valued NC function Z -> B(Z) from J (x) C^n to K (x) C^n.
struct SchurSampler {
  int d = 1;
  Index input_dim = 0;
  Index output_dim = 0;
  std::function<Mat(const MatrixTuple&)> evaluator;
  std::string tag = "literal";

  Mat operator()(const MatrixTuple& z) const {
    if (z.d() != d) throw Error(ErrorKind::DimensionMismatch, "sampler expects d = " + std::to_string(d));
    Mat b = evaluator(z);
    if (b.rows() != output_dim * z.n() || b.cols() != input_dim * z.n())
      throw Error(ErrorKind::DimensionMismatch, "sampler '" + tag + "' returned a block of the wrong shape");
    return b;
  }

  Mat at_zero() const { return (*this)(MatrixTuple::zero(d, 1)); }
};

inline SchurSampler make_sampler(int d, Index in, Index out, std::function<Mat(const MatrixTuple&)> f,
                                 std::string tag = "literal") {
  SchurSampler s;
  s.d = d;
  s.input_dim = in;
  s.output_dim = out;
  s.evaluator = std::move(f);
  s.tag = std::move(tag);
  return s;
}

// Constant function B(Z) = b (x) I_n.
inline SchurSampler constant_sampler(int d, const Mat& b) {
  return make_sampler(d, b.cols(), b.rows(), [b](const MatrixTuple& z) { return lift(b, z.n()); });
}

// Restriction out^* B(Z) in, for isometric frames `in` (J x a) and `out` (K x b).
inline SchurSampler compress(const SchurSampler& s, const Mat& in, const Mat& out) {
  return make_sampler(
      s.d, in.cols(), out.cols(),
      [s, in, out](const MatrixTuple& z) {
        Index n = z.n();
        return Mat(lift(out.adjoint(), n) * s(z) * lift(in, n));
      },
      s.tag);
}

}  // namespace ncdbr
