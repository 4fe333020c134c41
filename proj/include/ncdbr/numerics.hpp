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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncdbr {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  DimensionMismatch,
  SingularSimilarity,
  NotPartialIsometry,
  NotPure,
  NotStrict,
  SingularPencil,
  DenominatorSingular,
  ConstancyViolated,
  NotCNC,
  NotContraction,
  SyntaxError,
  UnknownVariable,
  InvalidInput,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularSimilarity: return "SingularSimilarity";
    case ErrorKind::NotPartialIsometry: return "NotPartialIsometry";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::NotStrict: return "NotStrict";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::DenominatorSingular: return "DenominatorSingular";
    case ErrorKind::ConstancyViolated: return "ConstancyViolated";
    case ErrorKind::NotCNC: return "NotCNC";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerance {
  double rank_rel = 1e-10;  // singular values below rank_rel * sigma_max count as zero
  double eq_abs = 1e-10;    // absolute equality threshold

  bool valid() const {
    return rank_rel > 0 && rank_rel < 1e-3 && eq_abs > 0 && eq_abs < 1e-3;
  }
};

inline Mat identity(Index n) { return Mat::Identity(n, n); }

// Largest singular value; 0 for empty matrices.
inline double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

inline double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline Mat adjoint(const Mat& a) { return a.adjoint(); }

// kron(a, b) has (i*rb + k, j*cb + l) entry a(i,j) * b(k,l).
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// The operator A (x) I_n in the fixed layout: n diagonal copies of A.
inline Mat lift(const Mat& a, Index n) {
  Mat out = Mat::Zero(a.rows() * n, a.cols() * n);
  for (Index p = 0; p < n; ++p) out.block(p * a.rows(), p * a.cols(), a.rows(), a.cols()) = a;
  return out;
}

inline Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) / 2.0; }

inline void check_finite(const Mat& a, const char* where) {
  if (!a.allFinite()) throw Error(ErrorKind::InvalidInput, std::string("non-finite entries in ") + where);
}

// Rotate each column so that its first entry of non-negligible modulus is real positive.
inline void fix_column_phases(Mat& q) {
  for (Index c = 0; c < q.cols(); ++c) {
    double peak = q.col(c).cwiseAbs().maxCoeff();
    for (Index r = 0; r < q.rows(); ++r) {
      double a = std::abs(q(r, c));
      if (a > 1e-8 * peak) {
        q.col(c) *= std::conj(q(r, c)) / a;
        break;
      }
    }
  }
}

// Hermitian square root of a PSD matrix. Eigenvalues within eq_abs of zero
// (either sign) are set to zero.
inline Mat psd_sqrt(const Mat& a, const Tolerance& tol = {}) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "psd_sqrt needs a square matrix");
  if (a.size() == 0) return a;
  check_finite(a, "psd_sqrt");
  if (op_norm(a - a.adjoint()) > tol.eq_abs) throw Error(ErrorKind::NotHermitian, "psd_sqrt input");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  Eigen::VectorXd w = es.eigenvalues();
  if (w.minCoeff() < -100.0 * tol.eq_abs)
    throw Error(ErrorKind::NotPSD, "min eigenvalue " + std::to_string(w.minCoeff()));
  for (Index i = 0; i < w.size(); ++i) w(i) = w(i) <= tol.eq_abs ? 0.0 : std::sqrt(w(i));
  const Mat& u = es.eigenvectors();
  Mat s = u * w.cast<cplx>().asDiagonal() * u.adjoint();
  return hermitian_part(s);
}

struct SvdParts {
  Mat u, v;
  Eigen::VectorXd s;
  Index rank = 0;
};

inline SvdParts svd_rank(const Mat& a, const Tolerance& tol) {
  SvdParts out;
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.s = svd.singularValues();
  if (out.s.size() > 0 && out.s(0) > 0) {
    double cut = tol.rank_rel * out.s(0);
    for (Index i = 0; i < out.s.size(); ++i)
      if (out.s(i) > cut) out.rank = i + 1;
  }
  return out;
}

inline Mat pinv(const Mat& a, const Tolerance& tol = {}) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  SvdParts p = svd_rank(a, tol);
  Mat out = Mat::Zero(a.cols(), a.rows());
  for (Index i = 0; i < p.rank; ++i) out += (p.v.col(i) / p.s(i)) * p.u.col(i).adjoint();
  return out;
}

inline Index numerical_rank(const Mat& a, const Tolerance& tol = {}) {
  if (a.size() == 0) return 0;
  return svd_rank(a, tol).rank;
}

inline Mat orthonormal_range(const Mat& a, const Tolerance& tol = {}) {
  if (a.size() == 0) return Mat::Zero(a.rows(), 0);
  SvdParts p = svd_rank(a, tol);
  Mat q = p.u.leftCols(p.rank);
  fix_column_phases(q);
  return q;
}

inline Mat orthonormal_kernel(const Mat& a, const Tolerance& tol = {}) {
  if (a.cols() == 0) return Mat::Zero(0, 0);
  if (a.rows() == 0) return identity(a.cols());
  SvdParts p = svd_rank(a, tol);
  Mat q = p.v.rightCols(a.cols() - p.rank);
  fix_column_phases(q);
  return q;
}

// Basis-independent orthonormal frame of Ran q (q orthonormal): with P = q q^*
// and E a set of coordinate vectors picked by pivoted Gram-Schmidt on the
// columns of P, returns P E (E^* P E)^{-1/2}. It depends on the subspace only,
// so a slightly perturbed input gives a slightly perturbed frame.
inline Mat subspace_frame(const Mat& q) {
  const Index n = q.rows(), k = q.cols();
  if (k == 0) return Mat::Zero(n, 0);
  Mat p = q * q.adjoint();
  Mat resid = p;
  std::vector<Index> picked;
  for (Index step = 0; step < k; ++step) {
    Index best = 0;
    double best_norm = -1.0;
    for (Index c = 0; c < n; ++c) {
      double nc = resid.col(c).norm();
      if (nc > best_norm + 1e-12) {
        best_norm = nc;
        best = c;
      }
    }
    picked.push_back(best);
    Eigen::VectorXcd u = resid.col(best) / best_norm;
    resid -= u * (u.adjoint() * resid);
  }
  std::sort(picked.begin(), picked.end());
  Mat pe(n, k);
  for (Index i = 0; i < k; ++i) pe.col(i) = p.col(picked[i]);
  Mat g(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) g(i, j) = p(picked[i], picked[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  Eigen::VectorXd inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return pe * (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint());
}

// Orthogonal complement of the column span of q (q assumed orthonormal).
inline Mat orthonormal_complement(const Mat& q, Index dim, const Tolerance& tol = {}) {
  if (q.cols() == 0) return identity(dim);
  return orthonormal_kernel(q.adjoint(), tol);
}

struct UnitaryFit {
  Mat u;
  double residual = 0.0;  // sum of squared Frobenius norms
};

// Orthogonal Procrustes: unitary U minimising sum ||U a_i - b_i||_F^2.
// Pairs share the row count; column counts may differ between pairs.
inline UnitaryFit fit_unitary(const std::vector<std::pair<Mat, Mat>>& pairs) {
  if (pairs.empty()) throw Error(ErrorKind::DimensionMismatch, "fit_unitary needs at least one pair");
  const Index r = pairs.front().first.rows();
  for (const auto& [a, b] : pairs) {
    if (a.rows() != r || b.rows() != r || a.cols() != b.cols())
      throw Error(ErrorKind::DimensionMismatch, "fit_unitary pair shapes differ");
  }
  Mat m = Mat::Zero(r, r);
  for (const auto& [a, b] : pairs) m += b * a.adjoint();
  UnitaryFit out;
  if (r == 0) {
    out.u = Mat::Zero(0, 0);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU() * svd.matrixV().adjoint();
  for (const auto& [a, b] : pairs) out.residual += (out.u * a - b).squaredNorm();
  return out;
}

struct SpanResult {
  Mat basis;
  Index dim = 0;
  int stabilized_at = 0;
};

// Smallest subspace containing Ran(start) and invariant under every op:
// S_0 = Ran start, S_{L+1} = S_L + sum_j op_j S_L, stopped as soon as the
// dimension does not grow.
inline SpanResult invariant_span(const std::vector<Mat>& ops, const Mat& start,
                                 const Tolerance& tol = {}) {
  SpanResult out;
  Index dim = start.rows();
  Mat s = orthonormal_range(start, tol);
  // A fixed absolute floor keeps vanishing generators (e.g. the zero defect of
  // a unitary) out of the span.
  if (start.size() == 0 || start.cwiseAbs().maxCoeff() <= tol.eq_abs) s = Mat::Zero(dim, 0);
  int level = 0;
  while (true) {
    Mat stacked(dim, s.cols() * (1 + static_cast<Index>(ops.size())));
    stacked.leftCols(s.cols()) = s;
    for (std::size_t j = 0; j < ops.size(); ++j)
      stacked.middleCols(s.cols() * (1 + static_cast<Index>(j)), s.cols()) = ops[j] * s;
    Mat next = s.cols() == 0 ? s : orthonormal_range(stacked, tol);
    if (next.cols() <= s.cols()) break;
    s = next;
    ++level;
  }
  out.basis = s;
  out.dim = s.cols();
  out.stabilized_at = level;
  return out;
}

}  // namespace ncdbr
