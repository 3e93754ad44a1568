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

#include <cerrno>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <thread>

#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "groundcheck/error.hpp"
#include "groundcheck/wire.hpp"
#include "json.hpp"

extern char** environ;

namespace groundcheck {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

Endpoint parse_endpoint(std::string_view spec) {
  Endpoint ep;
  constexpr std::string_view kTcp = "tcp://";
  if (spec.starts_with(kTcp)) {
    const std::string_view rest = spec.substr(kTcp.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == rest.size()) {
      raise(ErrorCode::kConfig, "tcp endpoint must look like tcp://host:port");
    }
    const std::string port(rest.substr(colon + 1));
    char* end = nullptr;
    const long value = std::strtol(port.c_str(), &end, 10);
    if (*end != '\0' || value <= 0 || value > 65535) raise(ErrorCode::kConfig, "bad tcp port '" + port + "'");
    ep.kind = Endpoint::Kind::kTcp;
    ep.host = std::string(rest.substr(0, colon));
    ep.port = static_cast<std::uint16_t>(value);
    return ep;
  }
  if (spec.empty()) raise(ErrorCode::kConfig, "empty scorer endpoint");
  ep.kind = Endpoint::Kind::kProcess;
  ep.command = std::string(spec);
  return ep;
}

// ---------------------------------------------------------------------------
// Message codecs

namespace wire {
namespace {

json parse_object(std::string_view line, ErrorCode code, const char* what) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error&) {
    raise(code, std::string(what) + " is not valid JSON: " + std::string(line.substr(0, 200)));
  }
  if (!obj.is_object()) raise(code, std::string(what) + " is not a JSON object");
  return obj;
}

void check_remote_error(const json& obj) {
  if (auto it = obj.find("error"); it != obj.end()) {
    raise(ErrorCode::kScorerRemote, it->is_string() ? it->get<std::string>() : it->dump());
  }
}

}  // namespace

std::string hello_request() { return json{{"op", "hello"}}.dump(); }

std::string score_request(const ScoreRequest& request) {
  json msg = json::object();
  msg["op"] = "score";
  msg["source"] = request.source;
  msg["answer_tokens"] = request.answer_tokens;
  msg["key_indices"] = request.key_indices;
  return msg.dump();
}

std::string embed_request(std::span<const std::string> texts) {
  json msg = json::object();
  msg["op"] = "embed";
  msg["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  return msg.dump();
}

PeerInfo parse_hello(std::string_view line) {
  const json obj = parse_object(line, ErrorCode::kHandshake, "hello response");
  PeerInfo info;
  auto name = obj.find("name");
  if (name == obj.end() || !name->is_string()) raise(ErrorCode::kHandshake, "hello response lacks a string 'name'");
  info.name = name->get<std::string>();
  auto proto = obj.find("protocol");
  if (proto == obj.end() || !proto->is_number_integer()) {
    raise(ErrorCode::kHandshake, "hello response lacks an integer 'protocol'");
  }
  info.protocol = proto->get<int>();
  if (info.protocol != kProtocolVersion) {
    raise(ErrorCode::kHandshake, "unsupported protocol version " + std::to_string(info.protocol));
  }
  if (auto dim = obj.find("embed_dim"); dim != obj.end() && !dim->is_null()) {
    if (!dim->is_number_unsigned() || dim->get<std::size_t>() == 0) {
      raise(ErrorCode::kHandshake, "'embed_dim' must be a positive integer or null");
    }
    info.embed_dim = dim->get<std::size_t>();
  }
  return info;
}

TokenProbs parse_score(std::string_view line, std::size_t expected_count) {
  const json obj = parse_object(line, ErrorCode::kProtocol, "score response");
  check_remote_error(obj);
  auto probs = obj.find("probs");
  if (probs == obj.end() || !probs->is_array()) raise(ErrorCode::kProtocol, "score response lacks 'probs'");
  if (probs->size() != expected_count) {
    raise(ErrorCode::kProtocol, "expected " + std::to_string(expected_count) + " probabilities, got " +
                                    std::to_string(probs->size()));
  }
  TokenProbs out;
  out.probs.reserve(expected_count);
  for (const auto& p : *probs) {
    if (!p.is_number()) raise(ErrorCode::kProtocol, "probabilities must be numbers");
    out.probs.push_back(p.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> parse_embed(std::string_view line, std::size_t expected_count,
                                             std::optional<std::size_t> dim) {
  const json obj = parse_object(line, ErrorCode::kProtocol, "embed response");
  check_remote_error(obj);
  auto vectors = obj.find("vectors");
  if (vectors == obj.end() || !vectors->is_array()) raise(ErrorCode::kProtocol, "embed response lacks 'vectors'");
  if (vectors->size() != expected_count) {
    raise(ErrorCode::kProtocol, "expected " + std::to_string(expected_count) + " vectors, got " +
                                    std::to_string(vectors->size()));
  }
  std::vector<std::vector<double>> out;
  out.reserve(expected_count);
  for (const auto& v : *vectors) {
    if (!v.is_array() || v.empty()) raise(ErrorCode::kProtocol, "each vector must be a non-empty array");
    const std::size_t want = dim ? *dim : (out.empty() ? v.size() : out.front().size());
    if (v.size() != want) raise(ErrorCode::kDim, "vector of dim " + std::to_string(v.size()) + ", expected " +
                                                     std::to_string(want));
    std::vector<double> row;
    row.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) raise(ErrorCode::kProtocol, "non-finite vector entry");
      row.push_back(x.get<double>());
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace wire

// ---------------------------------------------------------------------------
// Transport

namespace {

std::string errno_text() { return std::strerror(errno); }

class Connection {
 public:
  static std::unique_ptr<Connection> open(const Endpoint& ep) {
    auto conn = std::unique_ptr<Connection>(new Connection());
    if (ep.kind == Endpoint::Kind::kTcp) {
      conn->connect_tcp(ep.host, ep.port);
    } else {
      conn->spawn(ep.command);
    }
    return conn;
  }

  ~Connection() {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
    }
    if (child_ > 0) reap();
  }

  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void write_line(const std::string& line, Clock::time_point deadline) {
    std::string data = line;
    data.push_back('\n');
    std::size_t sent = 0;
    while (sent < data.size()) {
      wait_for(POLLOUT, deadline);
      const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        raise(ErrorCode::kScorerUnavailable, "write to scorer failed: " + errno_text());
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Clock::time_point deadline) {
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      wait_for(POLLIN, deadline);
      char chunk[8192];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        raise(ErrorCode::kScorerUnavailable, "read from scorer failed: " + errno_text());
      }
      if (n == 0) raise(ErrorCode::kScorerUnavailable, "scorer closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  Connection() = default;

  void wait_for(short events, Clock::time_point deadline) {
    for (;;) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) raise(ErrorCode::kScorerUnavailable, "scorer timed out");
      pollfd p{fd_, events, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1 << 30)));
      if (rc < 0) {
        if (errno == EINTR) continue;
        raise(ErrorCode::kScorerUnavailable, "poll failed: " + errno_text());
      }
      if (rc == 0) raise(ErrorCode::kScorerUnavailable, "scorer timed out");
      return;
    }
  }

  void connect_tcp(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
      raise(ErrorCode::kScorerUnavailable, "cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    std::string last_error = "no addresses";
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        fd_ = fd;
        break;
      }
      last_error = errno_text();
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) {
      raise(ErrorCode::kScorerUnavailable, "cannot connect to " + host + ":" + service + ": " + last_error);
    }
  }

  void spawn(const std::string& command) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      raise(ErrorCode::kScorerUnavailable, "socketpair failed: " + errno_text());
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    std::string sh = "/bin/sh";
    std::string dash_c = "-c";
    std::string cmd = command;
    char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
    // Own process group, so the shell and whatever it starts go down together.
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);
    pid_t pid = -1;
    const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
    posix_spawnattr_destroy(&attr);
    posix_spawn_file_actions_destroy(&actions);
    ::close(fds[1]);
    if (rc != 0) {
      ::close(fds[0]);
      raise(ErrorCode::kScorerUnavailable, "cannot start scorer: " + std::string(std::strerror(rc)));
    }
    fd_ = fds[0];
    child_ = pid;
  }

  void reap() {
    for (int i = 0; i < 100; ++i) {
      int status = 0;
      const pid_t r = ::waitpid(child_, &status, WNOHANG);
      if (r == child_ || r < 0) {
        ::kill(-child_, SIGKILL);  // stragglers left by the shell
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(-child_, SIGKILL);
    int status = 0;
    ::waitpid(child_, &status, 0);
  }

  int fd_ = -1;
  pid_t child_ = -1;
  std::string buffer_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Pooled client

struct ExternalScorer::Impl {
  Endpoint endpoint;
  ExternalOptions options;
  PeerInfo peer;

  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::unique_ptr<Connection>> idle;
  std::size_t live = 0;

  std::unique_ptr<Connection> open_checked(PeerInfo* info_out) {
    auto conn = Connection::open(endpoint);
    const auto deadline = Clock::now() + options.timeout;
    conn->write_line(wire::hello_request(), deadline);
    PeerInfo info = wire::parse_hello(conn->read_line(deadline));
    if (options.expected_name && info.name != *options.expected_name) {
      raise(ErrorCode::kHandshake, "peer name '" + info.name + "' != expected '" + *options.expected_name + "'");
    }
    if (options.expected_embed_dim && info.embed_dim != options.expected_embed_dim) {
      raise(ErrorCode::kHandshake, "peer embed_dim does not match expected " +
                                       std::to_string(*options.expected_embed_dim));
    }
    if (info_out) *info_out = info;
    return conn;
  }

  std::unique_ptr<Connection> borrow() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return !idle.empty() || live < std::max<std::size_t>(1, options.pool_size); });
    if (!idle.empty()) {
      auto conn = std::move(idle.back());
      idle.pop_back();
      return conn;
    }
    ++live;
    lock.unlock();
    try {
      PeerInfo info;
      auto conn = open_checked(&info);
      if (info.name != peer.name || info.embed_dim != peer.embed_dim) {
        raise(ErrorCode::kHandshake, "pooled connection reached a different peer '" + info.name + "'");
      }
      return conn;
    } catch (...) {
      release_slot();
      throw;
    }
  }

  void give_back(std::unique_ptr<Connection> conn) {
    {
      std::lock_guard lock(mu);
      idle.push_back(std::move(conn));
    }
    cv.notify_one();
  }

  void release_slot() {
    {
      std::lock_guard lock(mu);
      --live;
    }
    cv.notify_one();
  }

  std::string roundtrip(const std::string& request) {
    auto conn = borrow();
    try {
      const auto deadline = Clock::now() + options.timeout;
      conn->write_line(request, deadline);
      std::string line = conn->read_line(deadline);
      give_back(std::move(conn));
      return line;
    } catch (...) {
      conn.reset();
      release_slot();
      throw;
    }
  }
};

ExternalScorer::ExternalScorer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ExternalScorer::~ExternalScorer() = default;

std::shared_ptr<ExternalScorer> ExternalScorer::connect(const Endpoint& endpoint, const ExternalOptions& options) {
  auto impl = std::make_unique<Impl>();
  impl->endpoint = endpoint;
  impl->options = options;
  auto first = impl->open_checked(&impl->peer);
  impl->idle.push_back(std::move(first));
  impl->live = 1;
  return std::shared_ptr<ExternalScorer>(new ExternalScorer(std::move(impl)));
}

std::string ExternalScorer::name() const { return impl_->peer.name; }
const PeerInfo& ExternalScorer::peer() const noexcept { return impl_->peer; }

TokenProbs ExternalScorer::score_unchecked(const ScoreRequest& request) const {
  const std::string line = impl_->roundtrip(wire::score_request(request));
  return wire::parse_score(line, request.key_indices.size());
}

std::vector<std::vector<double>> ExternalScorer::embed(std::span<const std::string> texts) const {
  const std::string line = impl_->roundtrip(wire::embed_request(texts));
  return wire::parse_embed(line, texts.size(), impl_->peer.embed_dim);
}

ScorerHandle external_scorer(const Endpoint& endpoint, const ExternalOptions& options) {
  return ExternalScorer::connect(endpoint, options);
}

ScorerHandle make_scorer(std::string_view spec, const ScorerConfig& reference_config,
                         const ExternalOptions& external_options) {
  if (spec == "reference") return reference_scorer(reference_config);
  constexpr std::string_view kExternal = "external:";
  if (spec.starts_with(kExternal)) {
    return external_scorer(parse_endpoint(spec.substr(kExternal.size())), external_options);
  }
  raise(ErrorCode::kConfig, "scorer spec must be 'reference' or 'external:<endpoint>', got '" +
                                std::string(spec) + "'");
}

}  // namespace groundcheck
