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
#include "ncdbr/sampler.hpp"

namespace ncdbr {

// sum_j Z_j P W_j^*
inline Mat ad_map(const MatrixTuple& z, const MatrixTuple& w, const Mat& p) {
  if (z.d() != w.d() || p.rows() != z.n() || p.cols() != w.n())
    throw Error(ErrorKind::DimensionMismatch, "ad_map needs P of size n(Z) x n(W)");
  Mat out = Mat::Zero(p.rows(), p.cols());
  for (int j = 0; j < z.d(); ++j) out += z[j] * p * w[j].adjoint();
  return out;
}

// Solves K - sum_j Z_j K W_j^* = P. Column-major vectorization turns
// Z_j K W_j^* into kron(conj(W_j), Z_j) vec K.
inline Mat szego_kernel(const MatrixTuple& z, const MatrixTuple& w, const Mat& p, bool* near_boundary = nullptr) {
  if (z.d() != w.d() || p.rows() != z.n() || p.cols() != w.n())
    throw Error(ErrorKind::DimensionMismatch, "szego_kernel needs P of size n(Z) x n(W)");
  if (near_boundary) *near_boundary = row_norm(z) >= 1.0 - 1e-6 || row_norm(w) >= 1.0 - 1e-6;
  const Index n = z.n(), m = w.n();
  Mat sys = identity(n * m);
  for (int j = 0; j < z.d(); ++j) sys -= kron(w[j].conjugate(), z[j]);
  Vec rhs = Eigen::Map<const Vec>(p.data(), n * m);
  Vec k = sys.partialPivLu().solve(rhs);
  return Eigen::Map<Mat>(k.data(), n, m);
}

// Partial sum of the geometric series sum_{l <= L} Ad^l(P).
inline Mat szego_series(const MatrixTuple& z, const MatrixTuple& w, const Mat& p, int terms) {
  Mat term = p;
  Mat sum = p;
  for (int l = 1; l <= terms; ++l) {
    term = ad_map(z, w, term);
    sum += term;
  }
  return sum;
}

// Bound on || szego_kernel - szego_series(.., L) || (operator norm).
inline double szego_tail_bound(const MatrixTuple& z, const MatrixTuple& w, const Mat& p, int terms) {
  double r = row_norm(z) * row_norm(w);
  return op_norm(p) * std::pow(r, terms + 1) / (1.0 - r);
}

// K(Z,W)[P] (x) I_K - B(Z) (K(Z,W)[P] (x) I_J) B(W)^*
inline Mat dbr_kernel(const SchurSampler& b, const MatrixTuple& z, const MatrixTuple& w, const Mat& p) {
  Mat k = szego_kernel(z, w, p);
  Mat bz = b(z);
  Mat bw = b(w);
  return kron(k, identity(b.output_dim)) - bz * kron(k, identity(b.input_dim)) * bw.adjoint();
}

struct CpCheck {
  double min_eig = 0.0;
  bool psd = false;
};

// Choi matrix [K^B(Z,Z)[E_pq]]_{p,q} over the matrix units of C^n.
inline CpCheck cp_check(const SchurSampler& b, const MatrixTuple& z, double threshold = -1e-9) {
  const Index n = z.n();
  const Index blk = n * b.output_dim;
  Mat choi = Mat::Zero(n * blk, n * blk);
  Mat bz = b(z);
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q) {
      Mat e = Mat::Zero(n, n);
      e(p, q) = 1.0;
      Mat k = szego_kernel(z, z, e);
      choi.block(p * blk, q * blk, blk, blk) =
          kron(k, identity(b.output_dim)) - bz * kron(k, identity(b.input_dim)) * bz.adjoint();
    }
  CpCheck out;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(choi), Eigen::EigenvaluesOnly);
  out.min_eig = choi.size() ? es.eigenvalues().minCoeff() : 0.0;
  out.psd = out.min_eig >= threshold;
  return out;
}

}  // namespace ncdbr
