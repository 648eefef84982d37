// Copyright 2026 The PIR-CSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIRCSI_NET_H_
#define PIRCSI_NET_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pircsi/model.h"
#include "pircsi/query.h"
#include "pircsi/wire.h"

namespace pircsi {

// TCP server answering framed queries against one database, one thread per
// connection. A malformed QUERY gets an ERROR frame and the connection stays
// open; a malformed frame header gets an ERROR frame and the connection is
// closed, since the stream cannot be resynchronized.
class Server {
 public:
  // Port 0 binds an ephemeral port; see port().
  static absl::StatusOr<std::unique_ptr<Server>> Start(std::shared_ptr<const Database> db,
                                                       uint16_t port,
                                                       const std::string& bind_address = "127.0.0.1");
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  uint16_t port() const { return port_; }
  long long queries_answered() const { return queries_answered_.load(); }
  long long queries_rejected() const { return queries_rejected_.load(); }

  // Closes the listener and every open connection, then joins all threads.
  void Stop();

 private:
  Server(std::shared_ptr<const Database> db, int listen_fd, uint16_t port)
      : db_(std::move(db)), listen_fd_(listen_fd), port_(port) {}
  void AcceptLoop();
  void Serve(int fd);
  Frame Handle(const Frame& request);

  std::shared_ptr<const Database> db_;
  int listen_fd_;
  uint16_t port_;
  std::atomic<bool> stopping_{false};
  std::atomic<long long> queries_answered_{0};
  std::atomic<long long> queries_rejected_{0};
  std::thread acceptor_;
  std::mutex mu_;
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  void ReapFinished();

  std::vector<int> open_fds_;
  std::vector<Worker> workers_;
};

class Client {
 public:
  static absl::StatusOr<Client> Connect(const std::string& host, uint16_t port);
  ~Client();
  Client(Client&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Client& operator=(Client&& other) noexcept;
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  absl::StatusOr<DatabaseInfo> Hello();
  // Sends the query; an ERROR reply becomes an InvalidArgument status.
  absl::StatusOr<Answer> Fetch(const Query& query, const FieldParamsPtr& params);
  // One raw request/response round trip.
  absl::StatusOr<Frame> Exchange(const Frame& request);
  absl::Status SendRaw(std::span<const uint8_t> bytes);
  absl::StatusOr<Frame> Receive();

 private:
  explicit Client(int fd) : fd_(fd) {}
  int fd_;
};

}  // namespace pircsi

#endif  // PIRCSI_NET_H_
