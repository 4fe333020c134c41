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
#include "ncdbr/row_contraction.hpp"
#include "ncdbr/sampler.hpp"

#include <limits>
#include <vector>

namespace ncdbr {

// I - sum_j T_j^* (x) Z_j on H (x) C^n.
inline Mat adjoint_pencil(const std::vector<Mat>& t, const MatrixTuple& z) {
  const Index m = t.front().rows();
  Mat l = identity(m * z.n());
  for (int j = 0; j < z.d(); ++j) l -= kron(z[j], t[j].adjoint());
  return l;
}

// I - sum_j T_j (x) Z_j^* on H (x) C^n.
inline Mat pencil(const std::vector<Mat>& t, const MatrixTuple& z) {
  const Index m = t.front().rows();
  Mat l = identity(m * z.n());
  for (int j = 0; j < z.d(); ++j) l -= kron(z[j].adjoint(), t[j]);
  return l;
}

// [I_H (x) Z] : (H (x) C^d) (x) C^n -> H (x) C^n, (h (x) e_j) (x) v -> h (x) Z_j v.
inline Mat row_shift(Index m, const MatrixTuple& z) {
  const int d = z.d();
  Mat out = Mat::Zero(m * z.n(), m * d * z.n());
  for (int j = 0; j < d; ++j) {
    Mat sel = Mat::Zero(m, m * d);
    sel.middleCols(j * m, m) = identity(m);
    out += kron(z[j], sel);
  }
  return out;
}

// Gamma_V(Z) = (I - sum_j V_j (x) Z_j^*)^{-1} (gamma0 (x) I_n).
inline Mat model_gamma(const RowContraction& v, const MatrixTuple& z, const CanonicalModelFrames& f) {
  Eigen::PartialPivLU<Mat> lu(pencil(v.ops, z));
  return lu.solve(lift(f.gamma0, z.n()));
}

inline Mat model_gamma(const RowContraction& v, const MatrixTuple& z, const Tolerance& tol = {}) {
  return model_gamma(v, z, canonical_frames(v, tol));
}

struct ModelFractions {
  Mat D;  // gamma(Z)^* (gamma0 (x) I)
  Mat N;  // gamma(Z)^* [I (x) Z] (gammaInf (x) I)
};

inline ModelFractions model_fractions(const RowContraction& v, const MatrixTuple& z, const CanonicalModelFrames& f) {
  Mat g = model_gamma(v, z, f);
  const Index n = z.n();
  return {g.adjoint() * lift(f.gamma0, n), g.adjoint() * row_shift(v.m(), z) * lift(f.gammaInf, n)};
}

// B_V(Z) = D(Z)^{-1} N(Z) on the canonical frames.
inline SchurSampler char_fn_partial_isometry(const RowContraction& v, const Tolerance& tol = {}) {
  CanonicalModelFrames f = canonical_frames(v, tol);
  const Index p = f.gamma0.cols(), q = f.gammaInf.cols();
  return make_sampler(
      v.d(), q, p,
      [v, f](const MatrixTuple& z) -> Mat {
        const Index n = z.n();
        if (f.gamma0.cols() == 0 || f.gammaInf.cols() == 0) return Mat::Zero(f.gamma0.cols() * n, f.gammaInf.cols() * n);
        ModelFractions mf = model_fractions(v, z, f);
        Eigen::PartialPivLU<Mat> lu(mf.D);
        if (!(lu.rcond() > 1e-12)) throw Error(ErrorKind::DenominatorSingular, "compressed denominator");
        return lu.solve(mf.N);
      },
      "char_fn");
}

namespace detail {

inline Index level_of(const Mat& zeta, const Mat& alpha) {
  if (alpha.rows() == 0 || alpha.cols() == 0) return alpha.rows() ? zeta.rows() / alpha.rows() : zeta.cols() / std::max<Index>(alpha.cols(), 1);
  Index n = zeta.rows() / alpha.rows();
  if (n * alpha.rows() != zeta.rows() || n * alpha.cols() != zeta.cols())
    throw Error(ErrorKind::DimensionMismatch, "argument is not a lift of the constant's shape");
  return n;
}

inline void require_strict(const Mat& alpha) {
  if (op_norm(alpha) >= 1.0 - 1e-12) throw Error(ErrorKind::NotStrict, "Mobius parameter must have norm < 1");
}

struct DefectPair {
  Mat D;      // sqrt(I - a^* a)
  Mat Dstar;  // sqrt(I - a a^*)
};

inline DefectPair defect_pair(const Mat& a, const Tolerance& tol) {
  return {psd_sqrt(identity(a.cols()) - a.adjoint() * a, tol), psd_sqrt(identity(a.rows()) - a * a.adjoint(), tol)};
}

}  // namespace detail

// Phi_a(z) = D_{a*} (I - z a^*)^{-1} (z - a) D_a^{-1}, with a lifted to the level of z.
inline Mat moebius(const Mat& alpha, const Mat& zeta, const Tolerance& tol = {}) {
  detail::require_strict(alpha);
  const Index n = detail::level_of(zeta, alpha);
  auto dp = detail::defect_pair(alpha, tol);
  Mat a = lift(alpha, n);
  Mat lhs = identity(zeta.rows()) - zeta * a.adjoint();
  return lift(dp.Dstar, n) * lhs.partialPivLu().solve(zeta - a) * lift(pinv(dp.D, tol), n);
}

// Phi_a^{-1}(z) = D_{a*}^{-1} (z + a) (I + a^* z)^{-1} D_a.
inline Mat moebius_inv(const Mat& alpha, const Mat& zeta, const Tolerance& tol = {}) {
  detail::require_strict(alpha);
  const Index n = detail::level_of(zeta, alpha);
  auto dp = detail::defect_pair(alpha, tol);
  Mat a = lift(alpha, n);
  Mat rhs = identity(zeta.cols()) + a.adjoint() * zeta;
  Mat num = zeta + a;
  // X = num * rhs^{-1}  <=>  rhs^T X^T = num^T
  Mat x = rhs.transpose().partialPivLu().solve(num.transpose()).transpose();
  return lift(pinv(dp.Dstar, tol), n) * x * lift(dp.D, n);
}

// Xi_a(b) = (D_{a*} (x) I)(I - b (a^* (x) I))^{-1}
inline Mat xi_map(const Mat& alpha, const Mat& beta, const Tolerance& tol = {}) {
  detail::require_strict(alpha);
  const Index n = detail::level_of(beta, alpha);
  auto dp = detail::defect_pair(alpha, tol);
  Mat inner = identity(beta.rows()) - beta * lift(alpha.adjoint(), n);
  return lift(dp.Dstar, n) * inner.inverse();
}

// Theta_a(b) = (b - a (x) I)(D_a^{-1} (x) I)
inline Mat theta_map(const Mat& alpha, const Mat& beta, const Tolerance& tol = {}) {
  detail::require_strict(alpha);
  const Index n = detail::level_of(beta, alpha);
  auto dp = detail::defect_pair(alpha, tol);
  return (beta - lift(alpha, n)) * lift(pinv(dp.D, tol), n);
}

// B^<a>: first move B(0) to the origin with Phi_{B(0)}, then apply Phi_a^{-1}.
inline SchurSampler frostman_shift(const SchurSampler& b, const Mat& alpha, const Tolerance& tol = {}) {
  Mat b0 = b.at_zero();
  if (alpha.rows() != b.output_dim || alpha.cols() != b.input_dim)
    throw Error(ErrorKind::DimensionMismatch, "frostman_shift parameter shape");
  detail::require_strict(alpha);
  detail::require_strict(b0);
  return make_sampler(
      b.d, b.input_dim, b.output_dim,
      [b, b0, alpha, tol](const MatrixTuple& z) {
        Mat centred = moebius(b0, b(z), tol);
        return moebius_inv(alpha, centred, tol);
      },
      "frostman");
}

// B_T = Phi_{delta}^{-1} o B_V on the canonical frames of the partial-isometric part.
inline SchurSampler char_fn(const RowContraction& t, const Tolerance& tol = {}) {
  DefectData dd = defect_data(t, tol);
  SchurSampler bv = char_fn_partial_isometry(dd.parts.V, tol);
  Mat delta = dd.delta;
  if (delta.size() == 0) return bv;
  detail::require_strict(delta);
  return make_sampler(
      t.d(), bv.input_dim, bv.output_dim,
      [bv, delta, tol](const MatrixTuple& z) { return moebius_inv(delta, bv(z), tol); }, "char_fn");
}

// Theta_T(Z) = -T (x) I + (D_{T*} (x) I)(I - Z T^*)^{-1}[I (x) Z](D_T (x) I), restricted to
// Ran D_T and compressed to Ran D_{T*}.
inline SchurSampler popescu_char(const RowContraction& t, const Tolerance& tol = {}) {
  Defects df = defects(t, tol);
  Mat fin = orthonormal_range(df.D_T, tol);
  Mat fout = orthonormal_range(df.D_Tstar, tol);
  Mat c = fout.adjoint() * df.D_Tstar;  // output x m
  Mat b = df.D_T * fin;                 // md x input
  Mat d0 = -fout.adjoint() * t.row() * fin;
  return make_sampler(
      t.d(), fin.cols(), fout.cols(),
      [t, c, b, d0](const MatrixTuple& z) -> Mat {
        const Index n = z.n();
        if (c.rows() == 0 || b.cols() == 0) return Mat::Zero(c.rows() * n, b.cols() * n);
        Mat shifted = row_shift(t.m(), z) * lift(b, n);
        Mat x = adjoint_pencil(t.ops, z).partialPivLu().solve(shifted);
        return Mat(lift(d0, n) + lift(c, n) * x);
      },
      "popescu");
}

struct SupportFrames {
  Mat supp_in;   // J x a
  Mat supp_out;  // K x b
  bool stable = false;
  std::vector<Index> in_dims, out_dims;
};

// Span of the K x J blocks of B(Z) (output) and of their adjoints (input) over the samples.
inline SupportFrames support_frames(const SchurSampler& b, const std::vector<MatrixTuple>& points,
                                    const Tolerance& tol = {}) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "support_frames needs sample points");
  const Index J = b.input_dim, K = b.output_dim;
  Mat cols_out(K, 0), cols_in(J, 0);
  SupportFrames out;
  for (const auto& z : points) {
    Mat bz = b(z);
    const Index n = z.n();
    Mat co(K, cols_out.cols() + J * n * n), ci(J, cols_in.cols() + K * n * n);
    co.leftCols(cols_out.cols()) = cols_out;
    ci.leftCols(cols_in.cols()) = cols_in;
    Index off_o = cols_out.cols(), off_i = cols_in.cols();
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < n; ++q) {
        Mat blk = bz.block(p * K, q * J, K, J);
        co.middleCols(off_o, J) = blk;
        ci.middleCols(off_i, K) = blk.adjoint();
        off_o += J;
        off_i += K;
      }
    cols_out = orthonormal_range(co, tol);
    cols_in = orthonormal_range(ci, tol);
    if (max_abs(co) <= tol.eq_abs) cols_out = Mat::Zero(K, 0);
    if (max_abs(ci) <= tol.eq_abs) cols_in = Mat::Zero(J, 0);
    out.out_dims.push_back(cols_out.cols());
    out.in_dims.push_back(cols_in.cols());
  }
  out.supp_out = cols_out;
  out.supp_in = cols_in;
  // Stable once the final dimensions were already reached two samples earlier.
  const std::size_t s = points.size();
  out.stable = s >= 3 && out.in_dims[s - 3] == out.in_dims[s - 1] && out.out_dims[s - 3] == out.out_dims[s - 1];
  return out;
}

struct CoincidenceFit {
  Mat U_out, U_in;
  double fit_residual = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();  // max over holdout points
  int sweeps = 0;
  bool verdict = false;
  bool dims_match = false;
};

namespace detail {

inline double coincidence_objective(const std::vector<Mat>& b1, const std::vector<Mat>& b2,
                                    const std::vector<Index>& levels, const Mat& uo, const Mat& ui) {
  double s = 0;
  for (std::size_t i = 0; i < b1.size(); ++i)
    s += (lift(uo, levels[i]) * b1[i] - b2[i] * lift(ui, levels[i])).squaredNorm();
  return s;
}

// Nullvector of (X, Y) -> (X (x) I) b1 - b2 (Y (x) I), mapped to unitaries by polar factors.
inline std::pair<Mat, Mat> linear_start(const std::vector<Mat>& b1, const std::vector<Mat>& b2,
                                        const std::vector<Index>& levels, Index K, Index J) {
  const Index unknowns = K * K + J * J;
  Mat gram = Mat::Zero(unknowns, unknowns);
  for (std::size_t i = 0; i < b1.size(); ++i) {
    const Index n = levels[i];
    const Index rows = K * n * b1[i].cols();
    Mat a(rows, unknowns);
    Index col = 0;
    for (Index r = 0; r < K; ++r)
      for (Index c = 0; c < K; ++c, ++col) {
        Mat e = Mat::Zero(K, K);
        e(r, c) = 1.0;
        Mat v = lift(e, n) * b1[i];
        a.col(col) = Eigen::Map<Vec>(v.data(), rows);
      }
    for (Index r = 0; r < J; ++r)
      for (Index c = 0; c < J; ++c, ++col) {
        Mat e = Mat::Zero(J, J);
        e(r, c) = 1.0;
        Mat v = -b2[i] * lift(e, n);
        a.col(col) = Eigen::Map<Vec>(v.data(), rows);
      }
    gram += a.adjoint() * a;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  Vec x = es.eigenvectors().col(0);
  Mat X = Eigen::Map<Mat>(x.data(), K, K).transpose();
  Mat Y = Eigen::Map<Mat>(x.data() + K * K, J, J).transpose();
  auto polar = [](const Mat& m) -> Mat {
    if (m.size() == 0) return m;
    if (m.norm() < 1e-14) return identity(m.rows());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
  };
  return {polar(X), polar(Y)};
}

}  // namespace detail

// Searches constant unitaries with (U_out (x) I) B1(Z) = B2(Z) (U_in (x) I) after restricting both
// functions to their supports. Alternating Procrustes from a linear-algebra start.
inline CoincidenceFit weak_coincidence_fit(const SchurSampler& b1, const SchurSampler& b2,
                                           const std::vector<MatrixTuple>& fit_points,
                                           const std::vector<MatrixTuple>& holdout_points, double tol,
                                           const Tolerance& ntol = {}) {
  CoincidenceFit out;
  if (b1.d != b2.d) return out;
  SupportFrames s1 = support_frames(b1, fit_points, ntol);
  SupportFrames s2 = support_frames(b2, fit_points, ntol);
  const Index K = s1.supp_out.cols(), J = s1.supp_in.cols();
  out.dims_match = K == s2.supp_out.cols() && J == s2.supp_in.cols();
  if (!out.dims_match) return out;
  SchurSampler r1 = compress(b1, s1.supp_in, s1.supp_out);
  SchurSampler r2 = compress(b2, s2.supp_in, s2.supp_out);
  if (K == 0 || J == 0) {
    out.U_out = s2.supp_out * s1.supp_out.adjoint();
    out.U_in = s2.supp_in * s1.supp_in.adjoint();
    out.fit_residual = out.residual = 0.0;
    out.verdict = true;
    return out;
  }

  std::vector<Mat> v1, v2;
  std::vector<Index> levels;
  for (const auto& z : fit_points) {
    v1.push_back(r1(z));
    v2.push_back(r2(z));
    levels.push_back(z.n());
  }
  auto [uo, ui] = detail::linear_start(v1, v2, levels, K, J);
  double prev = detail::coincidence_objective(v1, v2, levels, uo, ui);
  int sweep = 0;
  for (; sweep < 50; ++sweep) {
    std::vector<std::pair<Mat, Mat>> pairs;
    for (std::size_t i = 0; i < v1.size(); ++i) {
      Mat target = v2[i] * lift(ui, levels[i]);
      for (Index p = 0; p < levels[i]; ++p) pairs.emplace_back(v1[i].middleRows(p * K, K), target.middleRows(p * K, K));
    }
    uo = fit_unitary(pairs).u;
    pairs.clear();
    for (std::size_t i = 0; i < v1.size(); ++i) {
      Mat src = v2[i].adjoint();
      Mat target = (lift(uo, levels[i]) * v1[i]).adjoint();
      for (Index p = 0; p < levels[i]; ++p) pairs.emplace_back(src.middleRows(p * J, J), target.middleRows(p * J, J));
    }
    ui = fit_unitary(pairs).u.adjoint();
    double cur = detail::coincidence_objective(v1, v2, levels, uo, ui);
    if (std::abs(prev - cur) <= 1e-12) {
      prev = cur;
      ++sweep;
      break;
    }
    prev = cur;
  }
  out.sweeps = sweep;
  out.U_out = s2.supp_out * uo * s1.supp_out.adjoint();
  out.U_in = s2.supp_in * ui * s1.supp_in.adjoint();
  out.fit_residual = std::sqrt(prev);
  double worst = 0.0;
  for (const auto& z : holdout_points) {
    Mat lhs = lift(uo, z.n()) * r1(z);
    Mat rhs = r2(z) * lift(ui, z.n());
    worst = std::max(worst, op_norm(lhs - rhs));
  }
  out.residual = worst;
  out.verdict = worst <= tol;
  return out;
}

struct PureUnitarySplit {
  Mat pure_in, unitary_in;    // frames in J
  Mat pure_out, unitary_out;  // frames in K
};

// Eigenspaces of B(0)^*B(0) and B(0)B(0)^* at eigenvalue 1; B must be constant there.
inline PureUnitarySplit pure_unitary_split(const SchurSampler& b, const std::vector<MatrixTuple>& points,
                                           const Tolerance& tol = {}) {
  Mat b0 = b.at_zero();
  auto split = [&](const Mat& g, Mat& pure, Mat& unit) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(g));
    std::vector<Index> pu, un;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      (std::abs(es.eigenvalues()(i) - 1.0) <= tol.eq_abs ? un : pu).push_back(i);
    pure = Mat(g.rows(), static_cast<Index>(pu.size()));
    unit = Mat(g.rows(), static_cast<Index>(un.size()));
    for (std::size_t i = 0; i < pu.size(); ++i) pure.col(static_cast<Index>(i)) = es.eigenvectors().col(pu[i]);
    for (std::size_t i = 0; i < un.size(); ++i) unit.col(static_cast<Index>(i)) = es.eigenvectors().col(un[i]);
    fix_column_phases(pure);
    fix_column_phases(unit);
  };
  PureUnitarySplit out;
  split(b0.adjoint() * b0, out.pure_in, out.unitary_in);
  split(b0 * b0.adjoint(), out.pure_out, out.unitary_out);
  for (const auto& z : points) {
    const Index n = z.n();
    Mat diff = b(z) * lift(out.unitary_in, n) - lift(b0 * out.unitary_in, n);
    if (op_norm(diff) > 1e-9) throw Error(ErrorKind::ConstancyViolated, "B is not constant on the unitary part");
  }
  return out;
}

}  // namespace ncdbr
