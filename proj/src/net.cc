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

#include "pircsi/net.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "pircsi/protocol.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

absl::Status Errno(const std::string& what) {
  return absl::UnavailableError(absl::StrCat(what, ": ", std::strerror(errno)));
}

absl::Status WriteAll(int fd, std::span<const uint8_t> bytes) {
  size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::send(fd, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("send");
    }
    done += static_cast<size_t>(n);
  }
  return absl::OkStatus();
}

// NotFound on a clean end of stream before any byte.
absl::Status ReadAll(int fd, uint8_t* out, size_t size) {
  size_t done = 0;
  while (done < size) {
    const ssize_t n = ::recv(fd, out + done, size - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("recv");
    }
    if (n == 0) {
      return done == 0 ? absl::NotFoundError("connection closed")
                       : absl::UnavailableError("connection closed mid-frame");
    }
    done += static_cast<size_t>(n);
  }
  return absl::OkStatus();
}

Frame ErrorFrame(std::string_view message) {
  return Frame{MessageType::kError, std::vector<uint8_t>(message.begin(), message.end())};
}

absl::Status SendFrame(int fd, const Frame& frame) { return WriteAll(fd, EncodeFrame(frame)); }

// Reads one frame. A bad header is reported as InvalidArgument.
absl::StatusOr<Frame> ReadFrame(int fd) {
  uint8_t header[kFrameHeaderBytes];
  PIRCSI_RETURN_IF_ERROR(ReadAll(fd, header, sizeof(header)));
  Frame frame;
  PIRCSI_ASSIGN_OR_RETURN(uint32_t length, DecodeFrameHeader(header, &frame.type));
  frame.payload.resize(length);
  if (length > 0) {
    absl::Status s = ReadAll(fd, frame.payload.data(), length);
    if (absl::IsNotFound(s)) return absl::UnavailableError("connection closed mid-frame");
    PIRCSI_RETURN_IF_ERROR(s);
  }
  return frame;
}

}  // namespace

absl::StatusOr<std::unique_ptr<Server>> Server::Start(std::shared_ptr<const Database> db,
                                                      uint16_t port,
                                                      const std::string& bind_address) {
  if (!db) return absl::InvalidArgumentError("server needs a database");
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return Errno("socket");
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    return absl::InvalidArgumentError(absl::StrCat("bad bind address: ", bind_address));
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    absl::Status s = Errno(absl::StrCat("bind port ", port));
    ::close(fd);
    return s;
  }
  if (::listen(fd, 64) < 0) {
    absl::Status s = Errno("listen");
    ::close(fd);
    return s;
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  std::unique_ptr<Server> server(new Server(std::move(db), fd, ntohs(addr.sin_port)));
  server->acceptor_ = std::thread([s = server.get()] { s->AcceptLoop(); });
  return server;
}

Server::~Server() { Stop(); }

void Server::Stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<Worker> workers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers = std::move(workers_);
  }
  for (Worker& w : workers) w.thread.join();
}

void Server::ReapFinished() {
  auto finished = std::partition(workers_.begin(), workers_.end(),
                                 [](const Worker& w) { return !w.done->load(); });
  for (auto it = finished; it != workers_.end(); ++it) it->thread.join();
  workers_.erase(finished, workers_.end());
}

void Server::AcceptLoop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // listener closed
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    ReapFinished();
    open_fds_.push_back(fd);
    auto done = std::make_shared<std::atomic<bool>>(false);
    workers_.push_back(Worker{std::thread([this, fd, done] {
                                Serve(fd);
                                done->store(true);
                              }),
                              done});
  }
}

void Server::Serve(int fd) {
  while (true) {
    absl::StatusOr<Frame> request = ReadFrame(fd);
    if (!request.ok()) {
      if (absl::IsInvalidArgument(request.status())) {
        (void)SendFrame(fd, ErrorFrame(std::string(request.status().message())));
      }
      break;
    }
    if (!SendFrame(fd, Handle(*request)).ok()) break;
  }
  std::lock_guard<std::mutex> lock(mu_);
  open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  ::close(fd);
}

Frame Server::Handle(const Frame& request) {
  const FieldParamsPtr& params = db_->params();
  switch (request.type) {
    case MessageType::kHello:
      return Frame{MessageType::kHello,
                   EncodeHello(DatabaseInfo{params->q(), params->m(), db_->size()})};
    case MessageType::kQuery: {
      absl::StatusOr<Query> query = DecodeQuery(request.payload, params);
      absl::Status valid = query.ok() ? ValidateQuery(*query, params, db_->size()) : query.status();
      absl::StatusOr<Answer> answer = valid.ok() ? ServeQuery(*db_, *query) : valid;
      if (!answer.ok()) {
        ++queries_rejected_;
        return ErrorFrame(absl::StrCat("malformed query: ", answer.status().message()));
      }
      ++queries_answered_;
      return Frame{MessageType::kAnswer, EncodeAnswer(*answer)};
    }
    default:
      return ErrorFrame("unexpected frame type from client");
  }
}

absl::StatusOr<Client> Client::Connect(const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &found);
  if (rc != 0) {
    return absl::UnavailableError(absl::StrCat("resolve ", host, ": ", ::gai_strerror(rc)));
  }
  absl::Status last = absl::UnavailableError("no address");
  for (addrinfo* a = found; a != nullptr; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) {
      last = Errno("socket");
      continue;
    }
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
      ::freeaddrinfo(found);
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return Client(fd);
    }
    last = Errno(absl::StrCat("connect ", host, ":", port));
    ::close(fd);
  }
  ::freeaddrinfo(found);
  return last;
}

Client::~Client() {
  if (fd_ >= 0) ::close(fd_);
}

Client& Client::operator=(Client&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

absl::Status Client::SendRaw(std::span<const uint8_t> bytes) { return WriteAll(fd_, bytes); }

absl::StatusOr<Frame> Client::Receive() { return ReadFrame(fd_); }

absl::StatusOr<Frame> Client::Exchange(const Frame& request) {
  PIRCSI_RETURN_IF_ERROR(SendFrame(fd_, request));
  return Receive();
}

absl::StatusOr<DatabaseInfo> Client::Hello() {
  PIRCSI_ASSIGN_OR_RETURN(Frame reply, Exchange(Frame{MessageType::kHello, {}}));
  if (reply.type != MessageType::kHello) {
    return absl::InternalError("server did not answer HELLO with HELLO");
  }
  return DecodeHello(reply.payload);
}

absl::StatusOr<Answer> Client::Fetch(const Query& query, const FieldParamsPtr& params) {
  PIRCSI_ASSIGN_OR_RETURN(Frame reply, Exchange(Frame{MessageType::kQuery, EncodeQuery(query)}));
  if (reply.type == MessageType::kError) {
    return absl::InvalidArgumentError(
        std::string(reply.payload.begin(), reply.payload.end()));
  }
  if (reply.type != MessageType::kAnswer) {
    return absl::InternalError("server replied with an unexpected frame type");
  }
  return DecodeAnswer(reply.payload, params);
}

}  // namespace pircsi
