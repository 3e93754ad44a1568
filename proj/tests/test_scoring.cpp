// Copyright 2026 The groundcheck Authors
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

#include "doctest.h"
#include "groundcheck/scoring.hpp"
#include "test_util.hpp"

using namespace groundcheck;
using testutil::code_of;

namespace {

class CannedScorer final : public Scorer {
 public:
  explicit CannedScorer(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::string name() const override { return "canned"; }
  TokenProbs score_unchecked(const ScoreRequest&) const override { return {probs_}; }

 private:
  std::vector<double> probs_;
};

ScoreRequest request(std::string source, TokenSeq answer, std::vector<std::size_t> keys) {
  return {std::move(source), std::move(answer), std::move(keys)};
}

}  // namespace

// Source "a b a b": N = 4, V = {a, b, unk, mask}, alpha = 1.
TEST_CASE("reference model probabilities by hand") {
  const ReferenceModel m("a b a b", {"a", "b"}, {0.5, 1.0});
  CHECK(m.vocabulary().size() == 4);
  CHECK(m.source_length() == 4);
  CHECK(m.unigram("a") == doctest::Approx(3.0 / 8));
  CHECK(m.unigram("zzz") == doctest::Approx(1.0 / 8));
  // c(a, b) = 2, two bigrams start with a.
  CHECK(m.bigram("b", "a") == doctest::Approx(3.0 / 6));
  // c(b, b) = 0, one bigram starts with b.
  CHECK(m.bigram("b", "b") == doctest::Approx(1.0 / 5));
  const std::string prev = "a";
  CHECK(m.probability("b", &prev) == doctest::Approx(0.5 * 0.5 + 0.5 * 3.0 / 8));
  CHECK(m.probability("a", nullptr) == doctest::Approx(3.0 / 8));
}

TEST_CASE("reference scorer conditions on the gold prefix") {
  const ReferenceScorer s({0.5, 1.0});
  const auto p = score(request("a b a b", {"a", "b"}, {0, 1}), s);
  REQUIRE(p.probs.size() == 2);
  CHECK(p.probs[0] == doctest::Approx(3.0 / 8));
  CHECK(p.probs[1] == doctest::Approx(0.4375));
  const auto only_second = score(request("a b a b", {"a", "b"}, {1}), s);
  CHECK(only_second.probs[0] == p.probs[1]);
}

TEST_CASE("vocabulary includes answer tokens absent from the source") {
  const ReferenceModel m("x y", {"q", "r"}, {0.0, 1.0});
  // V = {x, y, q, r, unk, mask}
  CHECK(m.vocabulary().size() == 6);
  CHECK(m.unigram("q") == doctest::Approx(1.0 / 8));
}

TEST_CASE("empty source gives uniform probabilities") {
  const ReferenceScorer s({0.5, 1.0});
  const auto p = score(request("", {"a"}, {0}), s);
  CHECK(p.probs[0] == doctest::Approx(1.0 / 3));
}

TEST_CASE("probabilities are in (0, 1] for legal configs") {
  for (double lambda : {0.0, 0.3, 1.0}) {
    for (double alpha : {1e-6, 1.0, 50.0}) {
      const ReferenceScorer s({lambda, alpha});
      for (double p : score(request("w w w x", {"w", "w", "q"}, {0, 1, 2}), s).probs) {
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
      }
    }
  }
}

TEST_CASE("request validation") {
  const ReferenceScorer s;
  CHECK(code_of([&] { score(request("a", {"a"}, {1}), s); }) == ErrorCode::kInvalidRequest);
  CHECK(code_of([&] { score(request("a", {"a", "b"}, {1, 0}), s); }) == ErrorCode::kInvalidRequest);
  CHECK(code_of([&] { score(request("a", {"a", "b"}, {1, 1}), s); }) == ErrorCode::kInvalidRequest);
}

TEST_CASE("scorer output contract is enforced") {
  const auto req = request("a", {"a", "b"}, {0, 1});
  CHECK(code_of([&] { score(req, CannedScorer({0.5})); }) == ErrorCode::kProtocol);
  CHECK(code_of([&] { score(req, CannedScorer({0.5, 0.0})); }) == ErrorCode::kScorerContractViolation);
  CHECK(code_of([&] { score(req, CannedScorer({0.5, 1.5})); }) == ErrorCode::kScorerContractViolation);
  CHECK(code_of([&] { score(req, CannedScorer({0.5, std::nan("")})); }) == ErrorCode::kScorerContractViolation);
  CHECK(score(req, CannedScorer({0.5, 1.0})).probs.size() == 2);
}

TEST_CASE("reference scorer config validation") {
  CHECK(code_of([] { ReferenceScorer({-0.1, 1.0}); }) == ErrorCode::kConfig);
  CHECK(code_of([] { ReferenceScorer({1.1, 1.0}); }) == ErrorCode::kConfig);
  CHECK(code_of([] { ReferenceScorer({0.5, 0.0}); }) == ErrorCode::kConfig);
}
