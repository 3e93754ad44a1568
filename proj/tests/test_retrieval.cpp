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

#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "groundcheck/retrieval.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace groundcheck;
using testutil::code_of;

namespace {

DocumentPool small_pool() {
  return DocumentPool({{"d1", "The cat sat."}, {"d2", "the dog"}, {"d3", "cat, cat dog bird"}});
}

}  // namespace

// Hand computation, N = 3, average length 3, k1 = 1.2, b = 0.75.
// idf(cat) = idf(dog) = ln(1 + 1.5 / 2.5) = ln 1.6.
TEST_CASE("bm25 scores match a hand computation") {
  const auto pool = small_pool();
  const double idf = std::log(1.6);
  const auto cat = bm25_scores({"cat"}, pool, 1.2, 0.75);
  CHECK(cat[0] == doctest::Approx(idf * 2.2 / 2.2));
  CHECK(cat[1] == 0.0);
  CHECK(cat[2] == doctest::Approx(idf * 2 * 2.2 / 3.5));

  const auto both = bm25_scores({"cat", "dog"}, pool, 1.2, 0.75);
  CHECK(both[0] == doctest::Approx(idf));
  CHECK(both[1] == doctest::Approx(idf * 2.2 / 1.9));
  CHECK(both[2] == doctest::Approx(idf * (4.4 / 3.5 + 2.2 / 2.5)));

  const auto r = retrieve_topk("Cat and dog?", pool, 2);
  REQUIRE(r.ranked.size() == 2);
  CHECK(r.ranked[0].doc_id == "d3");
  CHECK(r.ranked[1].doc_id == "d2");
}

TEST_CASE("repeated query tokens count every time") {
  const auto pool = small_pool();
  const auto once = bm25_scores({"cat"}, pool, 1.2, 0.75);
  const auto twice = bm25_scores({"cat", "cat"}, pool, 1.2, 0.75);
  CHECK(twice[2] == doctest::Approx(2 * once[2]));
}

TEST_CASE("ties rank by ascending doc id") {
  const DocumentPool pool({{"z", "apple"}, {"a", "apple"}, {"m", "pear"}});
  const auto r = retrieve_topk("apple", pool, 3);
  CHECK(r.ranked[0].doc_id == "a");
  CHECK(r.ranked[1].doc_id == "z");
  CHECK(r.ranked[2].doc_id == "m");
}

TEST_CASE("retrieval errors") {
  const auto pool = small_pool();
  CHECK(code_of([&] { retrieve_topk("cat", pool, 0); }) == ErrorCode::kConfig);
  CHECK(code_of([&] { retrieve_topk("?!", pool, 1); }) == ErrorCode::kEmptyQuery);
  CHECK(code_of([&] { retrieve_topk("cat", DocumentPool{}, 1); }) == ErrorCode::kEmptyInput);
  CHECK(code_of([] { DocumentPool({{"a", "x"}, {"a", "y"}}); }) == ErrorCode::kDuplicateId);
  CHECK(code_of([&] { random_retrieve(pool, 3, {"d1"}, 1); }) == ErrorCode::kPoolExhausted);
  Retrieval missing;
  missing.ranked = {{"nope", 0.0}};
  CHECK(code_of([&] { concat_sources(missing, pool); }) == ErrorCode::kMissingDoc);
}

TEST_CASE("pool JSONL parsing") {
  std::istringstream in(R"({"doc_id":"a","text":"hello"})"
                        "\n"
                        R"({"doc_id":"b","text":"world"})"
                        "\n");
  const auto pool = parse_pool(in);
  CHECK(pool.size() == 2);
  CHECK(pool.find("b")->text == "world");
  std::istringstream bad(R"({"doc_id":"a"})");
  CHECK(code_of([&] { parse_pool(bad); }) == ErrorCode::kSchema);
}

TEST_CASE("random retrieval is seeded, distinct and honours exclusions") {
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i) docs.push_back({"d" + std::to_string(i), "text"});
  const DocumentPool pool(docs);
  const std::set<std::string> exclude{"d0", "d1"};
  const auto a = random_retrieve(pool, 5, exclude, 42);
  CHECK(a == random_retrieve(pool, 5, exclude, 42));
  CHECK_FALSE(a == random_retrieve(pool, 5, exclude, 43));
  std::set<std::string> seen;
  for (const auto& d : a.ranked) {
    CHECK_FALSE(exclude.contains(d.doc_id));
    seen.insert(d.doc_id);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("random retrieval is uniform over eligible documents") {
  std::vector<Document> docs;
  for (int i = 0; i < 10; ++i) docs.push_back({"d" + std::to_string(i), "text"});
  const DocumentPool pool(docs);
  std::vector<std::size_t> counts(10, 0);
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const auto r = random_retrieve(pool, 1, {}, seed);
    ++counts[static_cast<std::size_t>(std::stoi(r.ranked[0].doc_id.substr(1)))];
  }
  // 9 degrees of freedom, p = 0.001 critical value.
  CHECK(oracle::chi_square_uniform(counts) < 27.88);
}

TEST_CASE("corpus documents retriever") {
  CorpusRecord r;
  r.id = "q";
  r.question = "x";
  r.documents = std::vector<std::string>{"first", "second", "third"};
  const CorpusDocumentsRetriever ret;
  const auto got = ret.retrieve(r, 2);
  REQUIRE(got.ranked.size() == 2);
  CHECK(got.ranked[0].doc_id == "q#0");
  CHECK(ret.source_text(got, r, "|") == "first|second");
  r.documents.reset();
  CHECK(code_of([&] { ret.retrieve(r, 2); }) == ErrorCode::kMissingDoc);
}
