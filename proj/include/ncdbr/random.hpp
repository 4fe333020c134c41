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

// Seeded generators for test populations.

#pragma once

#include "ncdbr/nc_space.hpp"
#include "ncdbr/numerics.hpp"
#include "ncdbr/row_contraction.hpp"

#include <random>

namespace ncdbr {

// Haar-distributed unitary (QR of a Ginibre matrix with phase-fixed R).
inline Mat haar_unitary(Index n, std::mt19937_64& rng) {
  Mat g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * identity(n);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

// Random matrix rescaled to operator norm `norm`.
inline Mat random_contraction(Index rows, Index cols, double norm, std::mt19937_64& rng) {
  Mat g = gaussian_matrix(rows, cols, rng);
  double s = op_norm(g);
  return s > 0 ? Mat(g * (norm / s)) : g;
}

// Row contraction with row norm `norm` < 1 (strict, so its isometric part is 0).
inline RowContraction random_strict_row(Index m, int d, double norm, std::mt19937_64& rng) {
  return RowContraction::from_row(random_contraction(m, m * d, norm, rng), d);
}

// Row partial isometry of the given rank: W [I_r 0] U^* for Haar W, U.
inline RowContraction random_partial_isometry(Index m, int d, Index rank, std::mt19937_64& rng) {
  Mat w = haar_unitary(m, rng);
  Mat u = haar_unitary(m * d, rng);
  Mat v = w.leftCols(rank) * u.leftCols(rank).adjoint();
  return RowContraction::from_row(v, d);
}

struct RandomCnc {
  RowContraction T;
  std::string kind;
};

// A CNC row contraction drawn from one of three families (chosen by `family % 3`):
// strict contraction, partial isometry, partial isometry plus a pure defect point.
inline RandomCnc random_cnc(Index m, int d, int family, std::mt19937_64& rng, const Tolerance& tol = {}) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    RandomCnc out;
    switch (family % 3) {
      case 0:
        out.T = random_strict_row(m, d, 0.3 + 0.65 * unif(rng), rng);
        out.kind = "strict";
        break;
      case 1: {
        Index rank = 1 + static_cast<Index>(unif(rng) * static_cast<double>(m - 1));
        if (m == 1) rank = 0;
        out.T = random_partial_isometry(m, d, std::min<Index>(rank, m - 1), rng);
        out.kind = "partial-isometry";
        break;
      }
      default: {
        Index rank = m == 1 ? 0 : 1 + static_cast<Index>(unif(rng) * static_cast<double>(m - 1));
        rank = std::min<Index>(rank, m - 1);
        RowContraction v = random_partial_isometry(m, d, rank, rng);
        CanonicalModelFrames f = canonical_frames(v, tol);
        Mat delta = random_contraction(f.gamma0.cols(), f.gammaInf.cols(), 0.2 + 0.7 * unif(rng), rng);
        out.T = reconstruct(v, delta, tol);
        out.kind = "mixed";
        break;
      }
    }
    if (cnc_rank(out.T, tol).is_cnc) return out;
  }
  throw Error(ErrorKind::NotCNC, "could not draw a CNC row contraction");
}

}  // namespace ncdbr
