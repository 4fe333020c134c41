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

#include "ncdbr/char_function.hpp"
#include "ncdbr/nc_space.hpp"
#include "ncdbr/numerics.hpp"
#include "ncdbr/realization.hpp"
#include "ncdbr/row_contraction.hpp"
#include "ncdbr/sampler.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace ncdbr {

// Free polynomials of degree <= N with coefficients in C^coeff_dim. A vector
// is indexed word_index * coeff_dim + k.
struct TruncatedFock {
  int d = 1;
  int N = 0;
  Index coeff_dim = 1;
  std::vector<Word> basis;
  std::map<Word, Index, GradedLex> index;

  TruncatedFock() = default;
  TruncatedFock(int d_, int N_, Index coeff) : d(d_), N(N_), coeff_dim(coeff) {
    if (d < 1 || N < 0 || coeff < 0) throw Error(ErrorKind::InvalidInput, "TruncatedFock parameters");
    basis = words_up_to(d, N);
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<Index>(i);
  }

  Index word_count() const { return static_cast<Index>(basis.size()); }
  Index total_dim() const { return word_count() * coeff_dim; }

  Index find(const Word& w) const {
    auto it = index.find(w);
    return it == index.end() ? -1 : it->second;
  }
};

struct Shifts {
  std::vector<Mat> L, R;  // scalar (word_count x word_count) matrices
};

// Left shift z^w -> z^{jw}, right shift z^w -> z^{wj}; words pushed past length N vanish.
inline Shifts shifts(const TruncatedFock& f) {
  Shifts s;
  const Index n = f.word_count();
  for (int j = 0; j < f.d; ++j) {
    Mat l = Mat::Zero(n, n), r = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      const Word& w = f.basis[i];
      if (static_cast<int>(w.size()) >= f.N) continue;
      Word lw = w, rw = w;
      lw.insert(lw.begin(), j);
      rw.push_back(j);
      l(f.find(lw), i) = 1.0;
      r(f.find(rw), i) = 1.0;
    }
    s.L.push_back(l);
    s.R.push_back(r);
  }
  return s;
}

// Permutation z^w -> z^{w^t}.
inline Mat transpose_unitary(const TruncatedFock& f) {
  Mat u = Mat::Zero(f.word_count(), f.word_count());
  for (Index i = 0; i < f.word_count(); ++i) u(f.find(transpose(f.basis[i])), i) = 1.0;
  return u;
}

// Matrix of B(L) restricted to degree <= N: z^v (x) h -> sum_w z^{wv} (x) B_w h.
inline Mat mult_operator(const std::map<Word, Mat, GradedLex>& coeffs, const TruncatedFock& f_in,
                         const TruncatedFock& f_out) {
  if (f_in.d != f_out.d || f_in.N != f_out.N) throw Error(ErrorKind::DimensionMismatch, "Fock truncations differ");
  const Index J = f_in.coeff_dim, K = f_out.coeff_dim;
  Mat out = Mat::Zero(f_out.total_dim(), f_in.total_dim());
  for (Index iv = 0; iv < f_in.word_count(); ++iv) {
    const Word& v = f_in.basis[iv];
    for (const auto& [w, bw] : coeffs) {
      if (bw.rows() != K || bw.cols() != J) throw Error(ErrorKind::DimensionMismatch, "coefficient shape");
      if (w.size() + v.size() > static_cast<std::size_t>(f_in.N)) continue;
      Index iu = f_out.find(concat(w, v));
      out.block(iu * K, iv * J, K, J) += bw;
    }
  }
  return out;
}

// Range of sqrt(I - B_L B_L^*) with the operator-range inner product.
// With I - B_L B_L^* = Q diag(lambda) Q^* (lambda > 0), the columns of
// Q diag(sqrt(lambda)) are orthonormal in that inner product.
struct DbrSpace {
  TruncatedFock ambient;  // output side, coefficients in K
  TruncatedFock ambient_in;
  Mat B_L;
  Mat factor;       // psd square root of I - B_L B_L^*
  Mat range_frame;  // Q, ambient-orthonormal
  Eigen::VectorXd scales;
  Mat gram;  // pseudo-inverse of I - B_L B_L^*

  Index dim() const { return range_frame.cols(); }
  Mat frame() const { return range_frame * scales.cast<cplx>().asDiagonal(); }

  // Coordinates of an ambient vector of the space in the orthonormal frame.
  Mat coords(const Mat& f) const { return scales.cwiseInverse().cast<cplx>().asDiagonal() * (range_frame.adjoint() * f); }

  double inner_norm(const Vec& f) const { return coords(f).norm(); }
};

inline DbrSpace dbr_space(const Mat& b_l, const TruncatedFock& f_in, const TruncatedFock& f_out,
                          const Tolerance& tol = {}) {
  if (b_l.rows() != f_out.total_dim() || b_l.cols() != f_in.total_dim())
    throw Error(ErrorKind::DimensionMismatch, "B(L) shape");
  if (op_norm(b_l) > 1.0 + 1e-8) throw Error(ErrorKind::NotContraction, "B(L) is not contractive");
  DbrSpace s;
  s.ambient = f_out;
  s.ambient_in = f_in;
  s.B_L = b_l;
  Mat k = identity(b_l.rows()) - b_l * b_l.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(k));
  const auto& lam = es.eigenvalues();
  if (lam.size() && lam.minCoeff() < -100.0 * tol.eq_abs) throw Error(ErrorKind::NotPSD, "I - B B^*");
  double top = lam.size() ? std::max(lam.maxCoeff(), 0.0) : 0.0;
  double cut = std::max(tol.eq_abs, tol.rank_rel * top);
  std::vector<Index> keep;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cut) keep.push_back(i);
  s.range_frame = Mat(b_l.rows(), static_cast<Index>(keep.size()));
  s.scales = Eigen::VectorXd(static_cast<Index>(keep.size()));
  // Largest eigenvalues first.
  for (std::size_t c = 0; c < keep.size(); ++c) {
    Index i = keep[keep.size() - 1 - c];
    s.range_frame.col(static_cast<Index>(c)) = es.eigenvectors().col(i);
    s.scales(static_cast<Index>(c)) = std::sqrt(lam(i));
  }
  fix_column_phases(s.range_frame);
  s.factor = s.range_frame * s.scales.cast<cplx>().asDiagonal() * s.range_frame.adjoint();
  s.gram = s.range_frame * s.scales.cwiseAbs2().cwiseInverse().cast<cplx>().asDiagonal() * s.range_frame.adjoint();
  return s;
}

// X_j^* = compression of R_j^* (x) I_K to the space, in its orthonormal frame.
inline RowContraction gleason_extremal(const DbrSpace& s) {
  Shifts sh = shifts(s.ambient);
  Mat f = s.frame();
  std::vector<Mat> x;
  for (int j = 0; j < s.ambient.d; ++j) {
    Mat rstar = kron(sh.R[j].adjoint(), identity(s.ambient.coeff_dim));
    x.push_back(s.coords(rstar * f).adjoint());
  }
  return RowContraction(std::move(x));
}

// Degree <= N part of the Szego kernel vector K{Z, y, v}: coefficient of z^w is
// Y conj(Z^w v), where column p of Y is the p-th C^n-component of y.
inline Vec szego_vector(const TruncatedFock& f, const MatrixTuple& z, const Vec& y, const Vec& v) {
  const Index c = f.coeff_dim, n = z.n();
  if (y.size() != c * n || v.size() != n) throw Error(ErrorKind::DimensionMismatch, "szego_vector arguments");
  Mat ymat = Eigen::Map<const Mat>(y.data(), c, n);
  Vec out(f.total_dim());
  std::vector<Vec> zv(f.basis.size());  // Z^w v
  for (std::size_t i = 0; i < f.basis.size(); ++i) {
    const Word& w = f.basis[i];
    if (w.empty()) {
      zv[i] = v;
    } else {
      // Z^w v = Z_{w_1} Z^{w'} v with w = w_1 w'.
      Word tail(w.begin() + 1, w.end());
      zv[i] = z[w.front()] * zv[f.find(tail)];
    }
    out.segment(static_cast<Index>(i) * c, c) = ymat * zv[i].conjugate();
  }
  return out;
}

// Degree <= N part of K^B{Z, y, v} = K{Z, y, v} - B(L) K{Z, B(Z)^* y, v}. Since B(L) does
// not lower degree, truncating after applying B(L) equals applying the truncated B_L.
inline Vec kernel_vector(const DbrSpace& s, const SchurSampler& b, const MatrixTuple& z, const Vec& y, const Vec& v) {
  Mat bz = b(z);
  Vec first = szego_vector(s.ambient, z, y, v);
  Vec second = szego_vector(s.ambient_in, z, bz.adjoint() * y, v);
  return first - s.B_L * second;
}

inline Vec kernel_vector(const DbrSpace& s, const SchurSampler& b, const MatrixTuple& z, Index g, const Vec& x,
                         const Vec& u) {
  Vec eg = Vec::Zero(s.ambient.coeff_dim);
  eg(g) = 1.0;
  Mat y = kron(x, eg);
  return kernel_vector(s, b, z, Vec(y.col(0)), u);
}

// Coordinates of K_0 g for every g in K (columns).
inline Mat k0_coords(const DbrSpace& s, const SchurSampler& b) {
  MatrixTuple zero = MatrixTuple::zero(s.ambient.d, 1);
  Vec one = Vec::Ones(1);
  Mat out(s.dim(), s.ambient.coeff_dim);
  for (Index g = 0; g < s.ambient.coeff_dim; ++g) out.col(g) = s.coords(kernel_vector(s, b, zero, g, one, one));
  return out;
}

// [I (x) u^*](I - X Z^*)^{-1}(K_0 g (x) x) for a tuple X acting on coordinates.
inline Vec resolvent_kernel_action(const RowContraction& x, const Mat& k0, const MatrixTuple& z, Index g,
                                   const Vec& xv, const Vec& u) {
  const Index r = x.m(), n = z.n();
  Mat rhs = kron(xv, Mat(k0.col(g)));
  Vec h = pencil(x.ops, z).partialPivLu().solve(Vec(rhs.col(0)));
  Vec out = Vec::Zero(r);
  for (Index p = 0; p < n; ++p) out += std::conj(u(p)) * h.segment(p * r, r);
  return out;
}

struct ModelReport {
  Index state_dim = 0;
  Index model_dim = 0;
  double frame_residual = std::numeric_limits<double>::infinity();
  double intertwine_residual = std::numeric_limits<double>::infinity();
  double compressed_intertwine_residual = std::numeric_limits<double>::infinity();
  double kernel_identity_residual = std::numeric_limits<double>::infinity();
  double extremal_residual = std::numeric_limits<double>::infinity();
  double tail_norm = 0.0;  // largest operator norm among the degree-N coefficients
};

// Builds the truncated model of a CNC row contraction and measures how far
// the matched-kernel intertwiner is from a unitary equivalence T ~ X.
//
// intertwine_residual is max_j ||(R_j^* (x) I) F U - F U T_j^*|| in the ambient norm,
// where F U is the image of the state space; it tests X^* = R^*|_{H(B)} directly.
// compressed_intertwine_residual uses the compressed tuple X instead.
inline ModelReport model_verify(const RowContraction& t, int N, const Tolerance& tol = {}) {
  CncRank cr = cnc_rank(t, tol);
  if (!cr.is_cnc) throw Error(ErrorKind::NotCNC, "model_verify needs a CNC row contraction");
  Colligation c = julia_matrix(t, tol);
  SchurSampler b = transfer_sampler(c);
  auto coeffs = taylor_coeffs(c, N);
  TruncatedFock f_in(t.d(), N, c.input_dim()), f_out(t.d(), N, c.output_dim());
  Mat b_l = mult_operator(coeffs, f_in, f_out);
  DbrSpace s = dbr_space(b_l, f_in, f_out, tol);
  RowContraction x = gleason_extremal(s);
  Mat k0 = k0_coords(s, b);

  ModelReport rep;
  rep.state_dim = t.m();
  rep.model_dim = s.dim();
  for (const auto& [w, bw] : coeffs)
    if (static_cast<int>(w.size()) == N) rep.tail_norm = std::max(rep.tail_norm, op_norm(bw));

  const Index m = t.m(), K = c.output_dim();
  Defects df = defects(t, tol);
  Mat fout = orthonormal_range(df.D_Tstar, tol);
  Mat dts = df.D_Tstar * fout;  // m x K

  std::vector<MatrixTuple> points{MatrixTuple::zero(t.d(), 1)};
  for (std::uint64_t sd = 1; sd <= 4; ++sd) points.push_back(sample_ball_point(t.d(), 1 + (sd % 2), 0.5, 1000 + sd));

  std::vector<Vec> cols_t, cols_x;
  for (const auto& z : points) {
    const Index n = z.n();
    Eigen::PartialPivLU<Mat> lu(pencil(t.ops, z));
    for (Index g = 0; g < K; ++g)
      for (Index a = 0; a < n; ++a)
        for (Index bb = 0; bb < n; ++bb) {
          Vec xv = Vec::Zero(n), u = Vec::Zero(n);
          xv(a) = 1.0;
          u(bb) = 1.0;
          Mat rhs = kron(xv, Mat(dts.col(g)));
          Vec h = lu.solve(Vec(rhs.col(0)));
          Vec ht = Vec::Zero(m);
          for (Index p = 0; p < n; ++p) ht += std::conj(u(p)) * h.segment(p * m, m);
          cols_t.push_back(ht);
          cols_x.push_back(s.coords(kernel_vector(s, b, z, g, xv, u)));
        }
  }
  Mat st(m, static_cast<Index>(cols_t.size())), sx(s.dim(), static_cast<Index>(cols_x.size()));
  for (std::size_t i = 0; i < cols_t.size(); ++i) {
    st.col(static_cast<Index>(i)) = cols_t[i];
    sx.col(static_cast<Index>(i)) = cols_x[i];
  }
  Mat u = sx * pinv(st, tol);  // model_dim x m

  rep.frame_residual = std::max(op_norm(u.adjoint() * u - identity(m)), op_norm(u * u.adjoint() - identity(s.dim())));

  Shifts sh = shifts(s.ambient);
  Mat fu = s.frame() * u;
  double intertwine = 0.0, compressed = 0.0;
  for (int j = 0; j < t.d(); ++j) {
    Mat rstar = kron(sh.R[j].adjoint(), identity(K));
    intertwine = std::max(intertwine, op_norm(rstar * fu - fu * t[j].adjoint()));
    compressed = std::max(compressed, op_norm(u * t[j] - x[j] * u));
  }
  rep.intertwine_residual = intertwine;
  rep.compressed_intertwine_residual = compressed;

  Mat defect = identity(s.dim()) - k0 * k0.adjoint();
  for (int j = 0; j < x.d(); ++j) defect -= x[j] * x[j].adjoint();
  rep.extremal_residual = op_norm(defect);

  double kres = 0.0;
  for (const auto& z : points) {
    const Index n = z.n();
    for (Index g = 0; g < K; ++g)
      for (Index a = 0; a < n; ++a)
        for (Index bb = 0; bb < n; ++bb) {
          Vec xv = Vec::Zero(n), uu = Vec::Zero(n);
          xv(a) = 1.0;
          uu(bb) = 1.0;
          Vec lhs = resolvent_kernel_action(x, k0, z, g, xv, uu);
          Vec rhs = s.coords(kernel_vector(s, b, z, g, xv, uu));
          kres = std::max(kres, (lhs - rhs).norm());
        }
  }
  rep.kernel_identity_residual = kres;
  return rep;
}

}  // namespace ncdbr
