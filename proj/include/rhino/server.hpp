#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "rhino/session.hpp"

namespace rhino {

struct BindAddress {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// "host:port", "[v6]:port" or ":port". Throws Error(InvalidArgument).
BindAddress parse_bind_address(const std::string& text);

/// TCP front end for one Session. The accept thread and one reader thread per
/// client only enqueue commands; ticks run on the caller's thread.
class Server {
 public:
  /// Binds and listens immediately; throws Error(BindFailure). Port 0 picks a free port.
  Server(Session& session, const BindAddress& address);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const { return port_; }

  /// Runs one tick and broadcasts the snapshot.
  const SessionSnapshot& tick_once();

  /// Paced at the scenario tick rate. ticks < 0 runs until stop() or until
  /// `interrupt` becomes true.
  void run(std::int64_t ticks = -1, const std::atomic<bool>* interrupt = nullptr);
  void stop();

  std::size_t client_count() const;

 private:
  struct Client;

  void accept_loop();
  void reader_loop(std::shared_ptr<Client> client);
  void refresh_cached_frames();
  static bool send_all(Client& client, const std::string& frame);

  Session& session_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;

  mutable std::mutex clients_mutex_;
  std::list<std::shared_ptr<Client>> clients_;

  std::string hello_frame_;
  std::string snapshot_frame_;
  std::size_t hello_version_ = static_cast<std::size_t>(-1);
};

}  // namespace rhino
