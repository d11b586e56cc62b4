#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace radfabric::mcp {

// Newline-delimited JSON framing over a byte stream. Implementations must
// allow one reader and any number of writers concurrently.
class LineChannel {
 public:
  virtual ~LineChannel() = default;

  // Blocks until a full line arrives. Returns nullopt on EOF or close().
  virtual std::optional<std::string> read_line() = 0;
  // Writes `line` plus a terminating '\n'. Throws Error(kConnection).
  virtual void write_line(std::string_view line) = 0;
  // Unblocks readers and signals EOF to the peer. Idempotent.
  virtual void close() = 0;
  virtual bool is_open() const = 0;
};

// Channel over POSIX file descriptors: pipes, stdio or a connected socket.
class FdChannel final : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, bool owns_fds, bool is_socket = false);
  ~FdChannel() override;

  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  std::optional<std::string> read_line() override;
  void write_line(std::string_view line) override;
  void close() override;
  bool is_open() const override { return !closed_.load(); }

 private:
  int read_fd_;
  int write_fd_;
  bool owns_fds_;
  bool is_socket_;
  std::atomic<bool> closed_{false};
  std::atomic<bool> write_closed_{false};
  std::mutex write_mu_;
  std::string buffer_;
};

// Two channels connected back to back through a pair of pipes; what one
// side writes the other reads.
std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>>
make_loopback_pair();

std::unique_ptr<LineChannel> make_stdio_channel();

enum class TransportMode { kStdio, kTcp };

struct TransportConfig {
  TransportMode mode = TransportMode::kStdio;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 asks the OS for an ephemeral port

  static TransportConfig stdio() { return {}; }
  static TransportConfig tcp(std::string host, std::uint16_t port) {
    return {TransportMode::kTcp, std::move(host), port};
  }
  // Parses "host:port".
  static TransportConfig parse_address(std::string_view address);
};

class TcpListener {
 public:
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  // Waits up to `wait` for a connection; nullptr on timeout or after close().
  std::unique_ptr<LineChannel> accept(std::chrono::milliseconds wait);
  void close();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> closed_{false};
};

std::unique_ptr<LineChannel> tcp_connect(const std::string& host,
                                         std::uint16_t port);

}  // namespace radfabric::mcp
