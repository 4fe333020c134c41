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

namespace ncdbr {

// Block operator [[A, B], [C, D]] : state (+) input -> state^d (+) output.
// A and B are column blocks; block j of A occupies rows j*state .. (j+1)*state.
struct Colligation {
  int d = 1;
  Mat A;  // (state*d) x state
  Mat B;  // (state*d) x input
  Mat C;  // output x state
  Mat D;  // output x input

  Index state_dim() const { return A.cols(); }
  Index input_dim() const { return B.cols(); }
  Index output_dim() const { return C.rows(); }

  Mat A_block(int j) const { return A.middleRows(j * state_dim(), state_dim()); }
  Mat B_block(int j) const { return B.middleRows(j * state_dim(), state_dim()); }

  void validate() const {
    const Index s = A.cols();
    if (d < 1 || A.rows() != s * d || B.rows() != s * d || C.cols() != s || D.rows() != C.rows() ||
        D.cols() != B.cols())
      throw Error(ErrorKind::DimensionMismatch, "colligation blocks are not shape-consistent");
  }

  Mat matrix() const {
    validate();
    Mat m(A.rows() + C.rows(), A.cols() + B.cols());
    m.topLeftCorner(A.rows(), A.cols()) = A;
    m.topRightCorner(B.rows(), B.cols()) = B;
    m.bottomLeftCorner(C.rows(), C.cols()) = C;
    m.bottomRightCorner(D.rows(), D.cols()) = D;
    return m;
  }

  bool is_contractive(const Tolerance& tol = {}) const { return op_norm(matrix()) <= 1.0 + tol.eq_abs; }
};

}  // namespace ncdbr
