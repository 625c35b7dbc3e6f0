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

// Client/server plumbing. A transport moves one framed query to a server and
// returns the framed answer; it never inspects payloads.
#ifndef WPIR_TRANSPORT_H_
#define WPIR_TRANSPORT_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wpir/galois.h"
#include "wpir/wire.h"
#include "wpir/wpir.h"

namespace wpir {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Answers framed queries for one server. Throws WireError (or
// VersionMismatch) for frames it cannot parse.
class ServerHandler {
 public:
  ServerHandler(ServerStore store, FieldPtr field);

  Bytes Handle(std::span<const std::uint8_t> query_frame) const;
  const ServerStore& store() const { return store_; }

 private:
  ServerStore store_;
  FieldPtr field_;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual int servers() const = 0;
  // Sends `query_frame` to `server` and returns its answer frame.
  virtual Bytes Exchange(int server, std::span<const std::uint8_t> query_frame) = 0;
};

// Calls the handlers directly. Safe to share across threads.
class InProcessTransport : public Transport {
 public:
  InProcessTransport(const std::vector<ServerStore>& stores, FieldPtr field);

  int servers() const override { return static_cast<int>(handlers_.size()); }
  Bytes Exchange(int server, std::span<const std::uint8_t> query_frame) override;

 private:
  std::vector<ServerHandler> handlers_;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  std::string ToString() const;
  // "host:port" or ":port" (loopback).
  static Endpoint Parse(const std::string& text);
};

// One TCP connection per exchange: connect, send the query frame, read one
// answer frame, close. Errors name the endpoint.
class SocketTransport : public Transport {
 public:
  explicit SocketTransport(std::vector<Endpoint> endpoints);

  int servers() const override { return static_cast<int>(endpoints_.size()); }
  Bytes Exchange(int server, std::span<const std::uint8_t> query_frame) override;

 private:
  std::vector<Endpoint> endpoints_;
};

// Sequential TCP server. Each connection carries one query frame and gets
// one answer frame; a frame that fails to parse closes the connection
// without a reply.
class SocketServer {
 public:
  // Binds and listens immediately; port 0 picks a free port.
  SocketServer(ServerHandler handler, Endpoint bind);
  ~SocketServer();
  SocketServer(const SocketServer&) = delete;
  SocketServer& operator=(const SocketServer&) = delete;

  std::uint16_t port() const { return port_; }
  Endpoint endpoint() const { return {host_, port_}; }

  // Serves on a background thread until Stop().
  void Start();
  // Serves on the calling thread until Stop() or `max_connections` accepted
  // connections (0 means unlimited).
  void Serve(std::uint64_t max_connections = 0);
  void Stop();

  std::uint64_t connections() const { return connections_.load(); }
  std::uint64_t rejected() const { return rejected_.load(); }

 private:
  void HandleConnection(int fd);

  ServerHandler handler_;
  std::string host_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> connections_{0};
  std::atomic<std::uint64_t> rejected_{0};
  std::thread thread_;
};

}  // namespace wpir

#endif  // WPIR_TRANSPORT_H_
