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

#include <fstream>

using namespace ncdbr;
using namespace ncdbr::testing;

TEST(JsonIo, MatrixRoundTrip) {
  std::mt19937_64 rng(1);
  Mat m = gaussian_matrix(3, 2, rng);
  json j = matrix_to_json(m);
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0].size(), 2u);
  EXPECT_EQ(matrix_from_json(json::parse(j.dump()), 3, 2), m);
}

TEST(JsonIo, TupleFile) {
  json j = json::parse(R"({"d": 2, "n": 1, "matrices": [[[[0.5, 0]]], [[[0, -0.25]]]]})");
  MatrixTuple z = tuple_from_json(j);
  EXPECT_EQ(z.d(), 2);
  EXPECT_EQ(z.n(), 1);
  EXPECT_EQ(z[1](0, 0), cplx(0, -0.25));
  EXPECT_EQ(tuple_to_json(z), j);
  RowContraction t = row_contraction_from_json(j);
  EXPECT_EQ(row_contraction_to_json(t), j);
}

TEST(JsonIo, MalformedInputs) {
  const char* bad[] = {
      R"([1, 2])",
      R"({"d": 1, "n": 1})",
      R"({"d": 1.5, "n": 1, "matrices": [[[[1, 0]]]]})",
      R"({"d": 0, "n": 1, "matrices": []})",
      R"({"d": 2, "n": 1, "matrices": [[[[1, 0]]]]})",
      R"({"d": 1, "n": 2, "matrices": [[[[1, 0]]]]})",
      R"({"d": 1, "n": 1, "matrices": [[[[1]]]]})",
      R"({"d": 1, "n": 1, "matrices": [[[["a", 0]]]]})",
  };
  for (const char* text : bad) {
    try {
      tuple_from_json(json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput) << text;
    }
  }
}

TEST(JsonIo, Colligation) {
  Colligation c = julia_matrix(jordan());
  Colligation back = colligation_from_json(json::parse(colligation_to_json(c).dump()));
  EXPECT_EQ(back.d, c.d);
  EXPECT_EQ(back.matrix(), c.matrix());
}

TEST(JsonIo, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(JsonIo, DigestIgnoresFormatting) {
  json a = json::parse(R"({"n": 1, "d": 1, "matrices": [[[[0.5, 0]]]]})");
  json b = json::parse("{\n  \"d\" : 1,\n  \"matrices\" : [ [ [ [ 0.5, 0 ] ] ] ],\n  \"n\" : 1\n}");
  EXPECT_EQ(input_digest(a), input_digest(b));
  EXPECT_EQ(canonical_dump(a), R"({"d":1,"matrices":[[[[0.5,0]]]],"n":1})");
}
