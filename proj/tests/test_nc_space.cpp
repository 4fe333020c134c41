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


#include "test_util.hpp"

using namespace ncdbr;
using namespace ncdbr::testing;

TEST(RowNorm, Examples) {
  EXPECT_NEAR(row_norm(MatrixTuple::zero(3, 2)), 0.0, 1e-15);
  EXPECT_NEAR(row_norm(MatrixTuple::scalars({0.6, cplx(0, 0.8)})), 1.0, 1e-14);
  // row [E11 E12] = [1 0 0 1; 0 0 0 0]
  Mat e11 = Mat::Zero(2, 2), e12 = Mat::Zero(2, 2);
  e11(0, 0) = 1.0;
  e12(0, 1) = 1.0;
  EXPECT_NEAR(row_norm(MatrixTuple({e11, e12})), std::sqrt(2.0), 1e-14);
  // column isometry pair: E11, E21 -> row norm 1
  Mat e21 = Mat::Zero(2, 2);
  e21(1, 0) = 1.0;
  EXPECT_NEAR(row_norm(MatrixTuple({e11, e21})), 1.0, 1e-14);
}

TEST(RowBall, Membership) {
  EXPECT_TRUE(in_row_ball(MatrixTuple::scalars({0.5})));
  EXPECT_FALSE(in_row_ball(MatrixTuple::scalars({1.0})));
  EXPECT_FALSE(in_row_ball(MatrixTuple::scalars({0.95}), 0.1));
}

TEST(Tuple, ValidateRejectsMixedShapes) {
  EXPECT_THROW(MatrixTuple({identity(2), identity(3)}).validate(), Error);
  std::vector<Mat> nan{identity(2)};
  nan[0](0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(MatrixTuple(nan).validate(), Error);
}

TEST(SampleBall, ExactRadiusAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int d = 1 + static_cast<int>(seed % 3);
    Index n = 1 + static_cast<Index>(seed % 4);
    MatrixTuple z = sample_ball_point(d, n, 0.7, seed);
    EXPECT_EQ(z.d(), d);
    EXPECT_EQ(z.n(), n);
    EXPECT_NEAR(row_norm(z), 0.7, 1e-12);
    MatrixTuple again = sample_ball_point(d, n, 0.7, seed);
    for (int j = 0; j < d; ++j) EXPECT_EQ(z[j], again[j]);
  }
}

TEST(DirectSum, BlockDiagonal) {
  MatrixTuple a = sample_ball_point(2, 2, 0.5, 1), b = sample_ball_point(2, 3, 0.5, 2);
  MatrixTuple s = direct_sum(a, b);
  EXPECT_EQ(s.n(), 5);
  for (int j = 0; j < 2; ++j) {
    EXPECT_LT(dist(s[j].topLeftCorner(2, 2), a[j]), 1e-15);
    EXPECT_LT(dist(s[j].bottomRightCorner(3, 3), b[j]), 1e-15);
    EXPECT_LT(max_abs(s[j].topRightCorner(2, 3)), 1e-300);
  }
  // row norm of a direct sum is the max
  EXPECT_NEAR(row_norm(s), 0.5, 1e-12);
}

TEST(Conjugate, SimilarityAndConditioning) {
  MatrixTuple z = sample_ball_point(2, 3, 0.5, 3);
  std::mt19937_64 rng(3);
  Mat s = gaussian_matrix(3, 3, rng) + 3.0 * identity(3);
  Conjugated c = conjugate(z, s);
  Mat sinv = s.inverse();
  for (int j = 0; j < 2; ++j) EXPECT_LT(dist(c.tuple[j], sinv * z[j] * s), 1e-12);
  EXPECT_GE(c.condition, 1.0);
  Mat sing = Mat::Zero(3, 3);
  sing(0, 0) = 1.0;
  try {
    conjugate(z, sing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSimilarity);
  }
}

TEST(Words, ApplyTransposeConcat) {
  std::mt19937_64 rng(4);
  std::vector<Mat> t{gaussian_matrix(3, 3, rng), gaussian_matrix(3, 3, rng)};
  EXPECT_LT(dist(word_apply(t, {}), identity(3)), 1e-300);
  EXPECT_LT(dist(word_apply(t, {0, 1, 1}), t[0] * t[1] * t[1]), 1e-12);
  EXPECT_EQ(transpose(Word{0, 1, 1}), (Word{1, 1, 0}));
  EXPECT_EQ(concat(Word{0}, Word{1, 0}), (Word{0, 1, 0}));
  // T^{w^T} for adjoints equals (T^w)^*
  std::vector<Mat> adj{t[0].adjoint(), t[1].adjoint()};
  Word w{0, 1, 0, 0};
  EXPECT_LT(dist(word_apply(adj, transpose(w)), word_apply(t, w).adjoint()), 1e-12);
  // multiplicativity
  Word a{1, 0}, b{0, 1, 1};
  EXPECT_LT(dist(word_apply(t, concat(a, b)), word_apply(t, a) * word_apply(t, b)), 1e-12);
}

TEST(Words, GradedLexEnumeration) {
  auto w = words_up_to(2, 2);
  std::vector<Word> want{{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(w, want);
  EXPECT_EQ(word_count(2, 2), 7u);
  EXPECT_EQ(word_count(1, 5), 6u);
  EXPECT_EQ(word_count(3, 3), 40u);
  EXPECT_EQ(words_up_to(3, 3).size(), 40u);
  GradedLex lt;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) EXPECT_TRUE(lt(w[i], w[i + 1]));
  EXPECT_EQ(word_to_string({}), "1");
  EXPECT_EQ(word_to_string({0, 2}), "z1*z3");
}
