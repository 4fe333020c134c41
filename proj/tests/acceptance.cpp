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


// Acceptance run: one line per criterion, nonzero exit if any fails.

#include "ncdbr/ncdbr.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace ncdbr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Population {
  std::vector<RowContraction> T;
  std::vector<std::vector<MatrixTuple>> fit, hold;
};

Mat scalar(cplx v) { return Mat::Constant(1, 1, v); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 25 seeded CNC row contractions, d in {1,2,3}, m <= 6, cycling the three families.
Population make_population() {
  Population p;
  std::mt19937_64 rng(20260101);
  for (int i = 0; i < 25; ++i) {
    int d = 1 + i % 3;
    Index m = 1 + (i * 5 + i / 3) % 6;
    p.T.push_back(random_cnc(m, d, i / 3, rng).T);
    std::vector<MatrixTuple> fit, hold;
    for (int k = 0; k < 4; ++k) fit.push_back(sample_ball_point(d, 2, 0.7, 1000 * i + k));
    for (int k = 0; k < 6; ++k) hold.push_back(sample_ball_point(d, 1 + k % 3, 0.7, 1000 * i + 100 + k));
    p.fit.push_back(std::move(fit));
    p.hold.push_back(std::move(hold));
  }
  return p;
}

Outcome theta_coincidence(const Population& p) {
  double worst = 0.0;
  int fails = 0;
  for (std::size_t i = 0; i < p.T.size(); ++i) {
    auto fit = weak_coincidence_fit(char_fn(p.T[i]), popescu_char(p.T[i]), p.fit[i], p.hold[i], 1e-8);
    worst = std::max(worst, fit.residual);
    fails += !fit.verdict;
  }
  return {fails == 0 && worst <= 1e-8, "failures=" + std::to_string(fails) + fmt(" worst_residual=%.3e", worst)};
}

Outcome unitary_invariance(const Population& p) {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int fails = 0;
  for (std::size_t i = 0; i < p.T.size(); ++i) {
    RowContraction tu = unitary_conjugate(p.T[i], haar_unitary(p.T[i].m(), rng));
    auto fit = weak_coincidence_fit(char_fn(p.T[i]), char_fn(tu), p.fit[i], p.hold[i], 1e-8);
    worst = std::max(worst, fit.residual);
    fails += !fit.verdict;
  }
  return {fails == 0 && worst <= 1e-8, "failures=" + std::to_string(fails) + fmt(" worst_residual=%.3e", worst)};
}

Outcome partial_isometry_normalization() {
  std::mt19937_64 rng(303);
  double at_zero = 0.0, schwarz_excess = -1.0;
  for (int i = 0; i < 25; ++i) {
    int d = 1 + i % 3;
    Index m = 2 + i % 5;
    RowContraction v = random_cnc(m, d, 1, rng).T;
    SchurSampler b = char_fn_partial_isometry(v);
    at_zero = std::max(at_zero, b.input_dim && b.output_dim ? op_norm(b.at_zero()) : 0.0);
    for (int k = 0; k < 10; ++k) {
      MatrixTuple z = sample_ball_point(d, 1 + k % 3, 0.1 + 0.08 * k, 5000 + 10 * i + k);
      Mat bz = b(z);
      double nb = bz.size() ? op_norm(bz) : 0.0;
      schwarz_excess = std::max(schwarz_excess, nb - row_norm(z));
    }
  }
  return {at_zero <= 1e-10 && schwarz_excess <= 1e-8,
          fmt("max|B_V(0)|=%.3e", at_zero) + fmt(" max(|B_V(Z)|-|Z|)=%.3e", schwarz_excess)};
}

Outcome kernel_positivity(const Population& p) {
  double worst = 1e300;
  int fails = 0;
  for (std::size_t i = 0; i < p.T.size(); ++i) {
    SchurSampler b = char_fn(p.T[i]);
    for (int k = 0; k < 5; ++k) {
      auto c = cp_check(b, sample_ball_point(p.T[i].d(), 1 + k % 3, 0.5 + 0.1 * k, 7000 + 10 * i + k));
      worst = std::min(worst, c.min_eig);
      fails += !c.psd;
    }
  }
  return {fails == 0, "failures=" + std::to_string(fails) + fmt(" min_eig=%.3e", worst)};
}

Outcome kernel_factorization() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    int d = 1 + i % 3;
    RowContraction v = random_cnc(2 + i % 4, d, 1, rng).T;
    CanonicalModelFrames f = canonical_frames(v);
    SchurSampler b = char_fn_partial_isometry(v);
    MatrixTuple z = sample_ball_point(d, 1 + i % 3, 0.7, 9000 + i), w = sample_ball_point(d, 1 + (i + 1) % 3, 0.7, 9100 + i);
    Mat pm = gaussian_matrix(z.n(), w.n(), rng);
    Mat lhs = model_fractions(v, z, f).D * dbr_kernel(b, z, w, pm) * model_fractions(v, w, f).D.adjoint();
    Mat rhs = model_gamma(v, z, f).adjoint() * kron(pm, identity(v.m())) * model_gamma(v, w, f);
    worst = std::max(worst, op_norm(lhs - rhs));
  }
  return {worst <= 1e-8, fmt("worst=%.3e", worst)};
}

Outcome moebius_suite() {
  std::mt19937_64 rng(606);
  double inv = 0.0, fact = 0.0, adj = 0.0, frost = 0.0;
  for (int i = 0; i < 50; ++i) {
    Index K = 1 + i % 3, J = 1 + (i / 3) % 3, m = 1 + i % 2, n = 1 + (i / 2) % 3;
    Mat alpha = random_contraction(K, J, 0.05 + 0.9 * ((i * 7) % 50) / 50.0, rng);
    Mat beta = random_contraction(K * m, J * m, 0.9, rng), gamma = random_contraction(K * n, J * n, 0.9, rng);
    Mat pb = moebius(alpha, beta);
    inv = std::max(inv, op_norm(moebius_inv(alpha, pb) - beta));
    fact = std::max(fact, op_norm(xi_map(alpha, beta) * theta_map(alpha, beta) - pb));
    Mat a = gaussian_matrix(m, n, rng);
    Mat lhs = kron(a, identity(K)) - pb * kron(a, identity(J)) * moebius(alpha, gamma).adjoint();
    Mat rhs = xi_map(alpha, beta) * (kron(a, identity(K)) - beta * kron(a, identity(J)) * gamma.adjoint()) *
              xi_map(alpha, gamma).adjoint();
    adj = std::max(adj, op_norm(lhs - rhs));

    RowContraction t = random_cnc(1 + i % 4, 1 + i % 3, i % 2 == 0 ? 0 : 2, rng).T;
    SchurSampler b = char_fn(t);
    SchurSampler fixed = frostman_shift(b, b.at_zero());
    for (int k = 0; k < 2; ++k) {
      MatrixTuple z = sample_ball_point(t.d(), 1 + k, 0.7, 11000 + 10 * i + k);
      frost = std::max(frost, op_norm(fixed(z) - b(z)));
    }
  }
  return {inv <= 1e-10 && fact <= 1e-10 && adj <= 1e-9 && frost <= 1e-9,
          fmt("inverse=%.3e", inv) + fmt(" xi_theta=%.3e", fact) + fmt(" adjunction=%.3e", adj) +
              fmt(" frostman=%.3e", frost)};
}

Outcome delta_round_trip() {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    Index m = 2 + i % 5;
    int d = 1 + i % 3;
    RowContraction v = random_partial_isometry(m, d, 1 + i % (m - 1), rng);
    CanonicalModelFrames f = canonical_frames(v);
    Mat delta = random_contraction(f.gamma0.cols(), f.gammaInf.cols(), 0.05 + 0.9 * i / 25.0, rng);
    worst = std::max(worst, op_norm(defect_point(reconstruct(v, delta)) - delta));
  }
  return {worst <= 1e-10, fmt("worst=%.3e", worst)};
}

Outcome realization(const Population& p) {
  double unit = 0.0, transfer = 0.0;
  int mismatches = 0;
  std::vector<RowContraction> all = p.T;
  // non-CNC controls make the equivalence two-sided: T (+) unitary scalar
  std::mt19937_64 rng(808);
  for (int i = 0; i < 5; ++i) {
    const RowContraction& t = p.T[static_cast<std::size_t>(i)];
    const Index m = t.m();
    std::vector<Mat> ops;
    for (int j = 0; j < t.d(); ++j) {
      Mat o = Mat::Zero(m + 1, m + 1);
      o.topLeftCorner(m, m) = t[j];
      if (j == 0) o(m, m) = std::polar(1.0, 0.3 * (i + 1));
      ops.push_back(o);
    }
    all.emplace_back(ops);
  }
  for (const auto& t : all) {
    Colligation c = julia_matrix(t);
    Mat m = c.matrix();
    unit = std::max({unit, op_norm(m.adjoint() * m - identity(m.cols())), op_norm(m * m.adjoint() - identity(m.rows()))});
    if (is_observable(c) != cnc_rank(t).is_cnc) ++mismatches;
    SchurSampler tr = transfer_sampler(c), pc = popescu_char(t);
    for (int k = 0; k < 4; ++k) {
      MatrixTuple z = sample_ball_point(t.d(), 1 + k % 3, 0.8, 13000 + k);
      Mat a = tr(z), b = pc(z);
      if (a.size()) transfer = std::max(transfer, op_norm(a - b));
    }
  }
  return {unit <= 1e-9 && transfer <= 1e-10 && mismatches == 0,
          fmt("julia_unitarity=%.3e", unit) + fmt(" transfer_vs_popescu=%.3e", transfer) +
              " observability_mismatches=" + std::to_string(mismatches) + " (" + std::to_string(all.size()) +
              " operators, 5 non-CNC)"};
}

Outcome fock_model() {
  Mat jv = Mat::Zero(2, 2);
  jv(1, 0) = 1.0;
  ModelReport j = model_verify(RowContraction({jv}), 6);
  double jmax = std::max({j.frame_residual, j.intertwine_residual, j.compressed_intertwine_residual,
                          j.kernel_identity_residual, j.extremal_residual});
  std::vector<double> res;
  for (int N : {4, 8, 12}) res.push_back(model_verify(RowContraction({scalar(0.5)}), N).intertwine_residual);
  const double predicted = std::pow(0.5, 4);
  bool decreasing = res[1] < res[0] && res[2] < res[1];
  bool ratios = true;
  for (int k = 0; k < 2; ++k) {
    double r = res[k + 1] / res[k];
    ratios = ratios && r >= predicted / 4 && r <= predicted * 4;
  }
  double szego_excess = -1e300;
  std::mt19937_64 rng(909);
  for (int i = 0; i < 20; ++i) {
    int d = 1 + i % 3;
    MatrixTuple z = sample_ball_point(d, 1 + i % 3, 0.6, 15000 + i), w = sample_ball_point(d, 1 + (i + 2) % 3, 0.6, 15100 + i);
    Mat pm = gaussian_matrix(z.n(), w.n(), rng);
    const int L = 8;
    double err = op_norm(szego_kernel(z, w, pm) - szego_series(z, w, pm, L));
    szego_excess = std::max(szego_excess, err - szego_tail_bound(z, w, pm, L));
  }
  return {jmax <= 1e-8 && decreasing && ratios && szego_excess <= 0.0,
          fmt("jordan_max_residual=%.3e", jmax) + fmt(" half_intertwine=[%.3e", res[0]) + fmt(", %.3e", res[1]) +
              fmt(", %.3e]", res[2]) + fmt(" ratios=[%.4f", res[1] / res[0]) + fmt(", %.4f]", res[2] / res[1]) +
              fmt(" predicted=%.4f", predicted) + fmt(" szego_max(err-bound)=%.3e", szego_excess)};
}

Outcome classical_reductions() {
  SchurSampler h = char_fn(RowContraction({scalar(0.5)}));
  Mat jv = Mat::Zero(2, 2);
  jv(1, 0) = 1.0;
  SchurSampler bj = char_fn_partial_isometry(RowContraction({jv}));
  double hmax = 0.0, jmax = 0.0;
  for (int k = 0; k < 10; ++k) {
    cplx z = std::polar(0.09 * (k + 1), 0.7 * k);
    MatrixTuple pt = MatrixTuple::scalars({z});
    hmax = std::max(hmax, std::abs(h(pt)(0, 0) - (z - 0.5) / (1.0 - 0.5 * z)));
    jmax = std::max(jmax, std::abs(bj(pt)(0, 0) - z * z));
  }
  return {hmax <= 1e-10 && jmax <= 1e-10, fmt("half_blaschke=%.3e", hmax) + fmt(" jordan_z2=%.3e", jmax)};
}

Outcome negative_controls() {
  CncRank u = cnc_rank(RowContraction({scalar(std::polar(1.0, 0.4))}));
  CpCheck bad = cp_check(constant_sampler(1, scalar(2.0)), MatrixTuple::zero(1, 1));
  auto power = [](int p) {
    return make_sampler(1, 1, 1, [p](const MatrixTuple& z) {
      Mat out = identity(z.n());
      for (int k = 0; k < p; ++k) out = out * z[0];
      return out;
    });
  };
  std::vector<MatrixTuple> fit, hold;
  for (int k = 0; k < 4; ++k) fit.push_back(sample_ball_point(1, 2, 0.7, 17000 + k));
  for (int k = 0; k < 6; ++k) hold.push_back(sample_ball_point(1, 1 + k % 3, 0.7, 17100 + k));
  CoincidenceFit zz = weak_coincidence_fit(power(1), power(2), fit, hold, 1e-8);
  bool pass = u.dim == 0 && !u.is_cnc && !bad.psd && !zz.verdict;
  return {pass, "unitary_cnc_dim=" + std::to_string(u.dim) + fmt(" non_schur_min_eig=%.3f", bad.min_eig) +
                    fmt(" z_vs_z2_residual=%.3e", zz.residual) + (zz.verdict ? " (verdict true)" : " (verdict false)")};
}

}  // namespace

int main() {
  Population pop = make_population();
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "theta-coincidence", 60.0, [&] { return theta_coincidence(pop); }},
      {2, "unitary-invariance", 0.0, [&] { return unitary_invariance(pop); }},
      {3, "partial-isometry-normalization", 0.0, partial_isometry_normalization},
      {4, "kernel-positivity", 0.0, [&] { return kernel_positivity(pop); }},
      {5, "canonical-kernel-factorization", 0.0, kernel_factorization},
      {6, "moebius-frostman-suite", 0.0, moebius_suite},
      {7, "delta-round-trip", 0.0, delta_round_trip},
      {8, "realization", 0.0, [&] { return realization(pop); }},
      {9, "fock-model", 120.0, fock_model},
      {10, "classical-reductions", 0.0, classical_reductions},
      {11, "negative-controls", 0.0, negative_controls},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += " over time budget";
    }
    failed += !o.pass;
    std::printf("[%s] %2d %-32s %s time=%.2fs\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
