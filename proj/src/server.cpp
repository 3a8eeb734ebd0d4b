#include "rhino/server.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

#include "rhino/errors.hpp"
#include "rhino/protocol.hpp"

namespace rhino {

struct Server::Client {
  int fd = -1;
  std::mutex write_mutex;
  std::atomic<bool> alive{true};
  std::thread reader;
};

BindAddress parse_bind_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bind address needs host:port");
  BindAddress out;
  std::string host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  if (!host.empty()) out.host = host;
  const std::string port = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    const long value = std::stol(port, &used);
    if (used != port.size() || value < 0 || value > 65535) throw std::out_of_range("port");
    out.port = static_cast<std::uint16_t>(value);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "invalid port '" + port + "'");
  }
  return out;
}

Server::Server(Session& session, const BindAddress& address) : session_(session) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE | AI_NUMERICSERV;
  addrinfo* found = nullptr;
  const std::string port = std::to_string(address.port);
  if (const int rc = getaddrinfo(address.host.c_str(), port.c_str(), &hints, &found); rc != 0) {
    throw Error(ErrorCode::BindFailure, "cannot resolve " + address.host + ": " + gai_strerror(rc));
  }
  std::string last_error = "no usable address";
  for (addrinfo* ai = found; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  freeaddrinfo(found);
  if (listen_fd_ < 0) {
    throw Error(ErrorCode::BindFailure,
                "cannot bind " + address.host + ":" + port + ": " + last_error);
  }

  sockaddr_storage bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  if (bound.ss_family == AF_INET) {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  } else {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
  }

  refresh_cached_frames();
  accept_thread_ = std::thread([this] { accept_loop(); });
}

Server::~Server() { stop(); }

void Server::stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::list<std::shared_ptr<Client>> clients;
  {
    std::lock_guard lock(clients_mutex_);
    clients.swap(clients_);
  }
  for (auto& c : clients) {
    ::shutdown(c->fd, SHUT_RDWR);
    if (c->reader.joinable()) c->reader.join();
    ::close(c->fd);
  }
}

std::size_t Server::client_count() const {
  std::lock_guard lock(clients_mutex_);
  std::size_t n = 0;
  for (const auto& c : clients_) n += c->alive ? 1 : 0;
  return n;
}

bool Server::send_all(Client& client, const std::string& frame) {
  std::lock_guard lock(client.write_mutex);
  if (!client.alive) return false;
  std::size_t sent = 0;
  while (sent < frame.size()) {
    const ssize_t n = ::send(client.fd, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      client.alive = false;
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

void Server::refresh_cached_frames() {
  // The scene only grows through injection, so chunk and triangle counts identify it.
  const std::size_t version = session_.truth().chunks().size() * 1000003u + session_.truth().triangle_count();
  std::lock_guard lock(clients_mutex_);
  if (version != hello_version_) {
    hello_frame_ = protocol::encode_frame(protocol::hello_message(session_));
    hello_version_ = version;
  }
  snapshot_frame_ = protocol::encode_frame(protocol::snapshot_message(session_.snapshot()));
}

void Server::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    auto client = std::make_shared<Client>();
    client->fd = fd;
    std::lock_guard lock(clients_mutex_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    send_all(*client, hello_frame_);
    send_all(*client, snapshot_frame_);
    client->reader = std::thread([this, client] { reader_loop(client); });
    clients_.push_back(client);
  }
}

namespace {

bool read_exact(int fd, char* out, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, out + got, n - got, 0);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) return false;
    got += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

void Server::reader_loop(std::shared_ptr<Client> client) {
  char header[4];
  while (client->alive && read_exact(client->fd, header, 4)) {
    const std::uint32_t length = protocol::decode_length({header, 4});
    if (length > protocol::kMaxMessageBytes) {
      send_all(*client, protocol::encode_frame(protocol::error_message("message too large")));
      break;
    }
    std::string body(length, '\0');
    if (!read_exact(client->fd, body.data(), length)) break;
    try {
      const auto j = nlohmann::json::parse(body);
      if (!j.is_object() || j.value("type", std::string()) != "Command") {
        throw Error(ErrorCode::ProtocolFormat, "expected a Command message");
      }
      session_.enqueue(protocol::command_from_json(j));
    } catch (const std::exception& e) {
      send_all(*client, protocol::encode_frame(protocol::error_message(e.what())));
    }
  }
  client->alive = false;
}

const SessionSnapshot& Server::tick_once() {
  const SessionSnapshot& snapshot = session_.run_tick();
  refresh_cached_frames();
  std::lock_guard lock(clients_mutex_);
  for (auto it = clients_.begin(); it != clients_.end();) {
    Client& c = **it;
    if (c.alive) send_all(c, snapshot_frame_);
    if (c.alive) {
      ++it;
      continue;
    }
    ::shutdown(c.fd, SHUT_RDWR);
    if (c.reader.joinable()) c.reader.join();
    ::close(c.fd);
    it = clients_.erase(it);
  }
  return snapshot;
}

void Server::run(std::int64_t ticks, const std::atomic<bool>* interrupt) {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(1.0 / session_.scenario().tick_rate));
  auto next = clock::now();
  for (std::int64_t i = 0; (ticks < 0 || i < ticks) && !stopping_ && !(interrupt && *interrupt); ++i) {
    tick_once();
    next += period;
    std::this_thread::sleep_until(next);
  }
}

}  // namespace rhino
