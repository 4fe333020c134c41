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

#include <vector>

namespace ncdbr {

// T : H (x) C^d -> H stored as d operators on H. The domain H (x) C^d is
// indexed j*m + h, so the block row [T_1 ... T_d] is the matrix of T.
struct RowContraction {
  std::vector<Mat> ops;

  RowContraction() = default;
  explicit RowContraction(std::vector<Mat> t) : ops(std::move(t)) {
    if (ops.empty()) throw Error(ErrorKind::DimensionMismatch, "row contraction needs d >= 1");
    for (const auto& o : ops)
      if (o.rows() != m() || o.cols() != m())
        throw Error(ErrorKind::DimensionMismatch, "row contraction blocks must be square of equal size");
  }

  int d() const { return static_cast<int>(ops.size()); }
  Index m() const { return ops.empty() ? 0 : ops.front().rows(); }
  const Mat& operator[](int j) const { return ops[j]; }

  Mat row() const {
    Mat r(m(), m() * d());
    for (int j = 0; j < d(); ++j) r.middleCols(j * m(), m()) = ops[j];
    return r;
  }

  static RowContraction from_row(const Mat& r, int d) {
    if (d < 1 || r.cols() != r.rows() * d) throw Error(ErrorKind::DimensionMismatch, "row shape");
    std::vector<Mat> t;
    for (int j = 0; j < d; ++j) t.push_back(r.middleCols(j * r.rows(), r.rows()));
    return RowContraction(std::move(t));
  }

  std::vector<Mat> adjoints() const {
    std::vector<Mat> a;
    for (const auto& o : ops) a.push_back(o.adjoint());
    return a;
  }

  bool is_contractive(const Tolerance& tol = {}) const { return op_norm(row()) <= 1.0 + tol.eq_abs; }
};

// Coordinatewise U T_j U^*.
inline RowContraction unitary_conjugate(const RowContraction& t, const Mat& u) {
  std::vector<Mat> out;
  for (const auto& o : t.ops) out.push_back(u * o * u.adjoint());
  return RowContraction(std::move(out));
}

struct Defects {
  Mat D_T;      // md x md
  Mat D_Tstar;  // m x m
};

inline Defects defects(const RowContraction& t, const Tolerance& tol = {}) {
  Mat r = t.row();
  Defects out;
  out.D_T = psd_sqrt(identity(r.cols()) - r.adjoint() * r, tol);
  out.D_Tstar = psd_sqrt(identity(r.rows()) - r * r.adjoint(), tol);
  return out;
}

struct IsoPureParts {
  RowContraction V;
  RowContraction C;
  Mat ker_D_T_projector;
};

inline IsoPureParts iso_pure_decompose(const RowContraction& t, const Tolerance& tol = {}) {
  Defects df = defects(t, tol);
  Mat k = orthonormal_kernel(df.D_T, tol);
  Mat p = k * k.adjoint();
  Mat r = t.row();
  Mat v = r * p;
  IsoPureParts out;
  out.ker_D_T_projector = p;
  out.V = RowContraction::from_row(v, t.d());
  out.C = RowContraction::from_row(r - v, t.d());
  return out;
}

inline bool is_partial_isometry(const RowContraction& v, const Tolerance& tol = {}) {
  Mat r = v.row();
  Mat g = r.adjoint() * r;
  return op_norm(g * g - g) <= 100.0 * tol.eq_abs;
}

struct CncRank {
  Index dim = 0;
  bool is_cnc = false;
  int stabilized_at = 0;
};

// Dimension of the span of T^w Ran D_{T*} over all words w.
inline CncRank cnc_rank(const RowContraction& t, const Tolerance& tol = {}) {
  Defects df = defects(t, tol);
  SpanResult s = invariant_span(t.ops, df.D_Tstar, tol);
  CncRank out;
  out.dim = s.dim;
  out.is_cnc = s.dim == t.m();
  out.stabilized_at = s.stabilized_at;
  return out;
}

struct CanonicalModelFrames {
  Mat gamma0;    // m x p, onto (Ran V)^perp
  Mat gammaInf;  // md x q, onto Ker V
};

inline CanonicalModelFrames canonical_frames(const RowContraction& v, const Tolerance& tol = {}) {
  if (!is_partial_isometry(v, tol)) throw Error(ErrorKind::NotPartialIsometry, "canonical_frames");
  Mat r = v.row();
  CanonicalModelFrames f;
  f.gamma0 = subspace_frame(orthonormal_kernel(r.adjoint(), tol));
  f.gammaInf = subspace_frame(orthonormal_kernel(r, tol));
  return f;
}

struct DefectData {
  IsoPureParts parts;
  CanonicalModelFrames frames;
  Mat delta;  // p x q
};

inline DefectData defect_data(const RowContraction& t, const Tolerance& tol = {}) {
  DefectData out;
  out.parts = iso_pure_decompose(t, tol);
  out.frames = canonical_frames(out.parts.V, tol);
  out.delta = -out.frames.gamma0.adjoint() * t.row() * out.frames.gammaInf;
  return out;
}

inline Mat defect_point(const RowContraction& t, const Tolerance& tol = {}) { return defect_data(t, tol).delta; }

// Inverse of defect_point: T = V - gamma0 * delta * gammaInf^*, so that
// defect_point(reconstruct(V, delta)) = delta.
inline RowContraction reconstruct(const RowContraction& v, const Mat& delta, const Tolerance& tol = {}) {
  CanonicalModelFrames f = canonical_frames(v, tol);
  if (delta.rows() != f.gamma0.cols() || delta.cols() != f.gammaInf.cols())
    throw Error(ErrorKind::DimensionMismatch, "delta must be dim(Ran V^perp) x dim(Ker V)");
  if (op_norm(delta) >= 1.0) throw Error(ErrorKind::NotPure, "defect point must be a strict contraction");
  Mat r = v.row() - f.gamma0 * delta * f.gammaInf.adjoint();
  return RowContraction::from_row(r, v.d());
}

// Julia matrix [[T^*, D_T], [D_{T*}, -T]] with the defect spaces realized
// through orthonormal frames of Ran D_T and Ran D_{T*}.
struct JuliaFrames {
  Mat in;   // md x q', onto Ran D_T
  Mat out;  // m x p', onto Ran D_{T*}
};

inline JuliaFrames defect_frames(const RowContraction& t, const Tolerance& tol = {}) {
  Defects df = defects(t, tol);
  return {orthonormal_range(df.D_T, tol), orthonormal_range(df.D_Tstar, tol)};
}

inline Colligation julia_matrix(const RowContraction& t, const Tolerance& tol = {}) {
  Defects df = defects(t, tol);
  Mat fin = orthonormal_range(df.D_T, tol);
  Mat fout = orthonormal_range(df.D_Tstar, tol);
  Mat r = t.row();
  Colligation c;
  c.d = t.d();
  c.A = r.adjoint();
  c.B = df.D_T * fin;
  c.C = fout.adjoint() * df.D_Tstar;
  c.D = -fout.adjoint() * r * fin;
  return c;
}

}  // namespace ncdbr
