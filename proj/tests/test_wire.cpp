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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <random>
#include <thread>

#include "doctest.h"
#include "fake_peer.hpp"
#include "groundcheck/wire.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace groundcheck;
using testutil::code_of;

namespace {

Endpoint peer(const std::string& mode, const std::string& extra = "") {
  Endpoint ep;
  ep.command = std::string(FAKE_PEER_PATH) + " --mode " + mode + (extra.empty() ? "" : " " + extra);
  return ep;
}

ExternalOptions quick(std::size_t pool = 1) {
  ExternalOptions o;
  o.timeout = std::chrono::milliseconds(2000);
  o.pool_size = pool;
  return o;
}

ScoreRequest sample_request() { return {"the cat sat on the mat", {"cat", "sat", "mat"}, {0, 2}}; }

// Loopback listener serving the fake peer on an ephemeral port.
class LoopbackServer {
 public:
  explicit LoopbackServer(fakepeer::Config cfg) : cfg_(cfg) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    REQUIRE(::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    REQUIRE(::listen(fd_, 8) == 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::thread([this] {
      for (;;) {
        const int c = ::accept(fd_, nullptr, nullptr);
        if (c < 0 || stop_) {
          if (c >= 0) ::close(c);
          return;
        }
        workers_.emplace_back([this, c] {
          fakepeer::serve(c, c, cfg_);
          ::close(c);
        });
      }
    });
  }

  ~LoopbackServer() {
    stop_ = true;
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    thread_.join();
    for (auto& w : workers_) w.join();
  }

  std::uint16_t port() const { return port_; }

 private:
  fakepeer::Config cfg_;
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stop_{false};
  std::thread thread_;
  std::vector<std::thread> workers_;
};

}  // namespace

TEST_CASE("endpoint parsing") {
  const auto tcp = parse_endpoint("tcp://127.0.0.1:9000");
  CHECK(tcp.kind == Endpoint::Kind::kTcp);
  CHECK(tcp.host == "127.0.0.1");
  CHECK(tcp.port == 9000);
  const auto proc = parse_endpoint("python3 adapter.py --model x");
  CHECK(proc.kind == Endpoint::Kind::kProcess);
  CHECK(proc.command == "python3 adapter.py --model x");
  CHECK(code_of([] { parse_endpoint("tcp://host"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_endpoint("tcp://host:99999"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_endpoint(""); }) == ErrorCode::kConfig);
  CHECK(code_of([] { make_scorer("bogus"); }) == ErrorCode::kConfig);
  CHECK(make_scorer("reference")->name() == "reference");
}

TEST_CASE("message encoding and decoding") {
  CHECK(nlohmann::json::parse(wire::hello_request()) == nlohmann::json{{"op", "hello"}});
  const auto req = nlohmann::json::parse(wire::score_request(sample_request()));
  CHECK(req["op"] == "score");
  CHECK(req["key_indices"] == nlohmann::json::array({0, 2}));
  const auto info = wire::parse_hello(R"({"name":"m","protocol":1,"embed_dim":null})");
  CHECK(info.name == "m");
  CHECK_FALSE(info.embed_dim.has_value());
  CHECK(code_of([] { wire::parse_hello(R"({"protocol":1})"); }) == ErrorCode::kHandshake);
  CHECK(code_of([] { wire::parse_hello(R"({"name":"m","protocol":2})"); }) == ErrorCode::kHandshake);
  CHECK(code_of([] { wire::parse_hello("nope"); }) == ErrorCode::kHandshake);
  CHECK(wire::parse_score(R"({"probs":[0.25,1]})", 2).probs == std::vector<double>{0.25, 1.0});
  CHECK(code_of([] { wire::parse_score(R"({"probs":[0.25]})", 2); }) == ErrorCode::kProtocol);
  CHECK(code_of([] { wire::parse_score(R"({"probs":["x"]})", 1); }) == ErrorCode::kProtocol);
  CHECK(code_of([] { wire::parse_score(R"({"error":"boom"})", 1); }) == ErrorCode::kScorerRemote);
  CHECK(code_of([] { wire::parse_embed(R"({"vectors":[[1,2],[3]]})", 2, std::nullopt); }) == ErrorCode::kDim);
  CHECK(code_of([] { wire::parse_embed(R"({"vectors":[[1,2]]})", 1, 3); }) == ErrorCode::kDim);
}

TEST_CASE("subprocess peer answers like the in-process reference scorer") {
  auto ext = ExternalScorer::connect(peer("good"), quick());
  CHECK(ext->peer().name == "fake-ref");
  CHECK(ext->peer().protocol == 1);
  CHECK(ext->peer().embed_dim == std::optional<std::size_t>(8));
  const ReferenceScorer ref;
  std::mt19937_64 rng(1);
  const std::vector<std::string> words{"alpha", "beta", "gamma", "delta", "é", "ß"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), len(1, 8);
  for (int i = 0; i < 100; ++i) {
    ScoreRequest r;
    for (std::size_t j = len(rng); j > 0; --j) r.source += words[pick(rng)] + " ";
    for (std::size_t j = len(rng); j > 0; --j) r.answer_tokens.push_back(words[pick(rng)]);
    for (std::size_t j = 0; j < r.answer_tokens.size(); ++j) {
      if (j % 2 == 0) r.key_indices.push_back(j);
    }
    CHECK(score(r, *ext) == score(r, ref));
  }
}

TEST_CASE("handshake failures") {
  CHECK(code_of([] { ExternalScorer::connect(peer("bad-hello"), quick()); }) == ErrorCode::kHandshake);
  auto o = quick();
  o.expected_name = "someone-else";
  CHECK(code_of([&] { ExternalScorer::connect(peer("good"), o); }) == ErrorCode::kHandshake);
  o = quick();
  o.expected_embed_dim = 16;
  CHECK(code_of([&] { ExternalScorer::connect(peer("good"), o); }) == ErrorCode::kHandshake);
  CHECK(code_of([] { ExternalScorer::connect(peer("good", "--bogus x"), quick()); }) ==
        ErrorCode::kScorerUnavailable);
  Endpoint missing;
  missing.command = "/nonexistent/scorer-binary";
  CHECK(code_of([&] { ExternalScorer::connect(missing, quick()); }) == ErrorCode::kScorerUnavailable);
}

TEST_CASE("faulty replies map to distinct errors") {
  const auto req = sample_request();
  CHECK(code_of([&] { score(req, *ExternalScorer::connect(peer("wrong-length"), quick())); }) ==
        ErrorCode::kProtocol);
  CHECK(code_of([&] { score(req, *ExternalScorer::connect(peer("bad-prob"), quick())); }) ==
        ErrorCode::kScorerContractViolation);
  CHECK(code_of([&] { score(req, *ExternalScorer::connect(peer("error"), quick())); }) ==
        ErrorCode::kScorerRemote);
  CHECK(code_of([&] { score(req, *ExternalScorer::connect(peer("garbage"), quick())); }) ==
        ErrorCode::kProtocol);
  CHECK(code_of([&] { score(req, *ExternalScorer::connect(peer("die"), quick())); }) ==
        ErrorCode::kScorerUnavailable);
}

TEST_CASE("a silent peer times out") {
  auto o = quick();
  o.timeout = std::chrono::milliseconds(300);
  auto ext = ExternalScorer::connect(peer("hang"), o);
  const auto start = std::chrono::steady_clock::now();
  CHECK(code_of([&] { score(sample_request(), *ext); }) == ErrorCode::kScorerUnavailable);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
}

TEST_CASE("remote errors leave the connection usable") {
  auto ext = ExternalScorer::connect(peer("good"), quick());
  ScoreRequest bad = sample_request();
  bad.key_indices = {5};
  CHECK(code_of([&] { score(bad, *ext); }) == ErrorCode::kInvalidRequest);
  CHECK(score(sample_request(), *ext).probs.size() == 2);
}

TEST_CASE("embeddings over the wire") {
  auto ext = ExternalScorer::connect(peer("good"), quick());
  const std::vector<std::string> texts{"one", "two words", ""};
  const auto vecs = ext->embed(texts);
  REQUIRE(vecs.size() == 3);
  for (const auto& v : vecs) CHECK(v.size() == 8);
  auto bad = ExternalScorer::connect(peer("bad-embed"), quick());
  CHECK(code_of([&] { bad->embed(texts); }) == ErrorCode::kDim);
}

TEST_CASE("pooled connections serve concurrent callers") {
  auto ext = ExternalScorer::connect(peer("good"), quick(3));
  const ReferenceScorer ref;
  const auto want = score(sample_request(), ref);
  std::atomic<int> mismatches{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 20; ++i) {
        if (!(score(sample_request(), *ext) == want)) ++mismatches;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(mismatches == 0);
}

TEST_CASE("tcp peer") {
  LoopbackServer server(fakepeer::Config{});
  const auto scorer = make_scorer("external:tcp://127.0.0.1:" + std::to_string(server.port()), {}, quick(2));
  CHECK(scorer->name() == "fake-ref");
  CHECK(score(sample_request(), *scorer) == score(sample_request(), ReferenceScorer()));
}

TEST_CASE("refused tcp connection") {
  // Bind then close to find a port with no listener.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  Endpoint ep;
  ep.kind = Endpoint::Kind::kTcp;
  ep.host = "127.0.0.1";
  ep.port = ntohs(addr.sin_port);
  CHECK(code_of([&] { ExternalScorer::connect(ep, quick()); }) == ErrorCode::kScorerUnavailable);
}
