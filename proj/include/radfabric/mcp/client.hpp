#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "radfabric/mcp/json_rpc.hpp"
#include "radfabric/mcp/server.hpp"
#include "radfabric/mcp/transport.hpp"

namespace radfabric::mcp {

inline constexpr std::chrono::milliseconds kDefaultCallTimeout{30'000};

// JSON-RPC client over a LineChannel. Safe for concurrent callers: each
// request gets a fresh integer id and a slot in the in-flight table, and the
// reader thread routes every response to the slot with the same id.
class Client {
 public:
  explicit Client(std::unique_ptr<LineChannel> channel,
                  std::chrono::milliseconds default_timeout = kDefaultCallTimeout);
  ~Client();

  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  json initialize();
  std::vector<ToolSpec> list_tools();
  json call_tool(const std::string& name, const json& arguments,
                 std::optional<std::chrono::milliseconds> timeout = std::nullopt);

  // Sends a request and waits for its matching response. Throws RpcError for
  // error responses, Error(kTimeout) and Error(kConnection).
  json request(const std::string& method, json params,
               std::optional<std::chrono::milliseconds> timeout = std::nullopt);
  void notify(const std::string& method, json params = nullptr);

  void close();
  bool connected() const { return !closed_.load(); }
  std::size_t in_flight() const;

 private:
  using Slot = std::promise<RpcEnvelope>;

  void reader_loop();
  void fail_pending(const std::string& why);

  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds default_timeout_;
  std::atomic<std::int64_t> next_id_{1};
  std::atomic<bool> closed_{false};
  mutable std::mutex mu_;
  std::map<std::int64_t, std::shared_ptr<Slot>> pending_;
  std::thread reader_;
};

// Connects to a TCP endpoint ("host:port").
std::unique_ptr<Client> connect_tcp(const std::string& address,
                                    std::chrono::milliseconds timeout = kDefaultCallTimeout);

}  // namespace radfabric::mcp
