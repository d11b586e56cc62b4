#include "radfabric/mcp/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>

#include "radfabric/error.hpp"

namespace radfabric::mcp {

namespace {

constexpr int kPollIntervalMs = 50;
constexpr std::size_t kMaxLine = 64u << 20;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

[[noreturn]] void connection_error(const std::string& what) {
  fail(ErrorKind::kConnection, what + ": " + std::strerror(errno));
}

}  // namespace

FdChannel::FdChannel(int read_fd, int write_fd, bool owns_fds, bool is_socket)
    : read_fd_(read_fd),
      write_fd_(write_fd),
      owns_fds_(owns_fds),
      is_socket_(is_socket) {
  ignore_sigpipe();
}

FdChannel::~FdChannel() {
  close();
  // Pipe write ends were already released by close(); sockets share one fd.
  if (owns_fds_ && read_fd_ >= 0) ::close(read_fd_);
}

std::optional<std::string> FdChannel::read_line() {
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (closed_.load()) return std::nullopt;

    pollfd pfd{read_fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, kPollIntervalMs);
    if (rc < 0) {
      if (errno == EINTR) continue;
      return std::nullopt;
    }
    if (rc == 0) continue;

    char chunk[8192];
    ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return std::nullopt;
    }
    if (n == 0) {
      // A final unterminated line still counts as a frame.
      if (buffer_.empty()) return std::nullopt;
      std::string line = std::move(buffer_);
      buffer_.clear();
      return line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
    if (buffer_.size() > kMaxLine) {
      fail(ErrorKind::kProtocolViolation, "frame exceeds maximum line length");
    }
  }
}

void FdChannel::write_line(std::string_view line) {
  std::lock_guard lock(write_mu_);
  if (write_closed_.load()) fail(ErrorKind::kConnection, "channel closed");
  std::string frame(line);
  frame.push_back('\n');
  const char* p = frame.data();
  std::size_t left = frame.size();
  while (left > 0) {
    ssize_t n = is_socket_ ? ::send(write_fd_, p, left, MSG_NOSIGNAL)
                           : ::write(write_fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      connection_error("write failed");
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

void FdChannel::close() {
  if (closed_.exchange(true)) return;
  std::lock_guard lock(write_mu_);
  write_closed_ = true;
  if (is_socket_) {
    ::shutdown(read_fd_, SHUT_RDWR);
  } else if (owns_fds_ && write_fd_ >= 0 && write_fd_ != read_fd_) {
    ::close(write_fd_);
  }
}

std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>>
make_loopback_pair() {
  int a_to_b[2];
  int b_to_a[2];
  if (::pipe(a_to_b) != 0) connection_error("pipe");
  if (::pipe(b_to_a) != 0) {
    ::close(a_to_b[0]);
    ::close(a_to_b[1]);
    connection_error("pipe");
  }
  auto a = std::make_unique<FdChannel>(b_to_a[0], a_to_b[1], true);
  auto b = std::make_unique<FdChannel>(a_to_b[0], b_to_a[1], true);
  return {std::move(a), std::move(b)};
}

std::unique_ptr<LineChannel> make_stdio_channel() {
  return std::make_unique<FdChannel>(STDIN_FILENO, STDOUT_FILENO, false);
}

TransportConfig TransportConfig::parse_address(std::string_view address) {
  auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon + 1 == address.size()) {
    invalid_input("address must be host:port, got '" + std::string(address) +
                  "'");
  }
  std::string host(address.substr(0, colon));
  std::string port_text(address.substr(colon + 1));
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    invalid_input("bad port in address '" + std::string(address) + "'");
  }
  if (port > 65535) invalid_input("port out of range: " + port_text);
  if (host.empty()) host = "127.0.0.1";
  return tcp(std::move(host), static_cast<std::uint16_t>(port));
}

namespace {

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res) {
    fail(ErrorKind::kConnection, "cannot resolve host '" + host + "'");
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

}  // namespace

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  ignore_sigpipe();
  sockaddr_in addr = resolve(host, port);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) connection_error("socket");
  int yes = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int saved = errno;
    ::close(fd_);
    errno = saved;
    connection_error("bind " + host + ":" + std::to_string(port));
  }
  if (::listen(fd_, 16) != 0) {
    int saved = errno;
    ::close(fd_);
    errno = saved;
    connection_error("listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  close();
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<LineChannel> TcpListener::accept(
    std::chrono::milliseconds wait) {
  if (closed_.load()) return nullptr;
  pollfd pfd{fd_, POLLIN, 0};
  int rc = ::poll(&pfd, 1, static_cast<int>(wait.count()));
  if (rc <= 0 || closed_.load()) return nullptr;
  int conn = ::accept(fd_, nullptr, nullptr);
  if (conn < 0) return nullptr;
  int yes = 1;
  ::setsockopt(conn, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
  return std::make_unique<FdChannel>(conn, conn, true, true);
}

void TcpListener::close() {
  if (closed_.exchange(true)) return;
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::unique_ptr<LineChannel> tcp_connect(const std::string& host,
                                         std::uint16_t port) {
  ignore_sigpipe();
  sockaddr_in addr = resolve(host, port);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) connection_error("socket");
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int saved = errno;
    ::close(fd);
    errno = saved;
    connection_error("connect " + host + ":" + std::to_string(port));
  }
  int yes = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
  return std::make_unique<FdChannel>(fd, fd, true, true);
}

}  // namespace radfabric::mcp
