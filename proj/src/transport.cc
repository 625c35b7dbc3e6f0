// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wpir/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <fmt/format.h>

namespace wpir {
namespace {

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

std::string ErrnoText() { return std::strerror(errno); }

// False on orderly EOF before any byte; throws on errors or a partial read.
bool ReadExact(int fd, std::uint8_t* out, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t k = ::recv(fd, out + got, n - got, 0);
    if (k == 0) {
      if (got == 0) return false;
      throw WireError("connection closed mid-frame");
    }
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError("recv failed: " + ErrnoText());
    }
    got += static_cast<std::size_t>(k);
  }
  return true;
}

void WriteAll(int fd, std::span<const std::uint8_t> data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t k = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError("send failed: " + ErrnoText());
    }
    sent += static_cast<std::size_t>(k);
  }
}

// Reads one whole frame (header included). Returns empty on clean EOF.
Bytes ReadFrame(int fd) {
  Bytes frame(kFrameHeaderBytes);
  if (!ReadExact(fd, frame.data(), kFrameHeaderBytes)) return {};
  std::uint32_t length = 0;
  for (std::size_t i = 0; i < kFrameHeaderBytes; ++i) length = (length << 8) | frame[i];
  if (length > kMaxFrameBytes) throw WireError("frame length exceeds the limit");
  frame.resize(kFrameHeaderBytes + length);
  if (length > 0 && !ReadExact(fd, frame.data() + kFrameHeaderBytes, length)) {
    throw WireError("connection closed mid-frame");
  }
  return frame;
}

sockaddr_in Resolve(const Endpoint& e) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(e.port);
  if (::inet_pton(AF_INET, e.host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (::getaddrinfo(e.host.c_str(), nullptr, &hints, &found) != 0 || !found) {
    throw TransportError(fmt::format("cannot resolve {}", e.ToString()));
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(found->ai_addr)->sin_addr;
  ::freeaddrinfo(found);
  return addr;
}

}  // namespace

ServerHandler::ServerHandler(ServerStore store, FieldPtr field)
    : store_(std::move(store)), field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("server handler needs a field");
}

Bytes ServerHandler::Handle(std::span<const std::uint8_t> query_frame) const {
  const Bytes payload = Unframe(query_frame);
  const QueryToken query = DecodeQuery(payload, *field_);
  AnswerString answer;
  try {
    answer = WpirAnswer(query, store_);
  } catch (const std::logic_error& e) {
    throw WireError(std::string("query rejected: ") + e.what());
  }
  return Frame(EncodeAnswer(answer, *field_));
}

InProcessTransport::InProcessTransport(const std::vector<ServerStore>& stores,
                                       FieldPtr field) {
  for (const ServerStore& s : stores) handlers_.emplace_back(s, field);
}

Bytes InProcessTransport::Exchange(int server,
                                   std::span<const std::uint8_t> query_frame) {
  if (server < 0 || server >= servers()) {
    throw TransportError(fmt::format("no in-process server {}", server));
  }
  return handlers_[server].Handle(query_frame);
}

std::string Endpoint::ToString() const { return fmt::format("{}:{}", host, port); }

Endpoint Endpoint::Parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument(fmt::format("endpoint '{}' is not host:port", text));
  }
  Endpoint e;
  if (colon > 0) e.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (port.empty() || used != port.size() || value > 65535) {
    throw std::invalid_argument(fmt::format("bad port in endpoint '{}'", text));
  }
  e.port = static_cast<std::uint16_t>(value);
  return e;
}

SocketTransport::SocketTransport(std::vector<Endpoint> endpoints)
    : endpoints_(std::move(endpoints)) {}

Bytes SocketTransport::Exchange(int server,
                                std::span<const std::uint8_t> query_frame) {
  if (server < 0 || server >= servers()) {
    throw TransportError(fmt::format("no endpoint for server {}", server));
  }
  const Endpoint& e = endpoints_[server];
  const sockaddr_in addr = Resolve(e);
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (fd.get() < 0) throw TransportError("socket: " + ErrnoText());
  if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw TransportError(
        fmt::format("connection to {} failed: {}", e.ToString(), ErrnoText()));
  }
  const int one = 1;
  ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  try {
    WriteAll(fd.get(), query_frame);
    Bytes answer = ReadFrame(fd.get());
    if (answer.empty()) throw TransportError("connection closed without an answer");
    return answer;
  } catch (const std::runtime_error& err) {
    throw TransportError(fmt::format("{}: {}", e.ToString(), err.what()));
  }
}

SocketServer::SocketServer(ServerHandler handler, Endpoint bind)
    : handler_(std::move(handler)), host_(bind.host) {
  const sockaddr_in addr = Resolve(bind);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError("socket: " + ErrnoText());
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string reason = ErrnoText();
    ::close(listen_fd_);
    throw TransportError(fmt::format("cannot listen on {}: {}", bind.ToString(), reason));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

SocketServer::~SocketServer() {
  Stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SocketServer::Start() {
  if (thread_.joinable()) throw std::logic_error("server already running");
  stop_ = false;
  thread_ = std::thread([this] { Serve(); });
}

void SocketServer::Stop() {
  stop_ = true;
  if (thread_.joinable()) thread_.join();
}

void SocketServer::Serve(std::uint64_t max_connections) {
  std::uint64_t served = 0;
  while (!stop_ && (max_connections == 0 || served < max_connections)) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, 50);
    if (ready <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    ++served;
    HandleConnection(fd);
  }
}

void SocketServer::HandleConnection(int raw_fd) {
  Fd fd(raw_fd);
  ++connections_;
  try {
    const Bytes query = ReadFrame(fd.get());
    if (query.empty()) return;
    WriteAll(fd.get(), handler_.Handle(query));
  } catch (const std::exception&) {
    ++rejected_;
  }
}

}  // namespace wpir
