#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "radfabric/mcp/json_rpc.hpp"
#include "radfabric/mcp/transport.hpp"

namespace radfabric::mcp {

struct ToolSpec {
  std::string name;
  std::string description;
  // JSON-Schema subset: type, properties, required, additionalProperties,
  // items, enum, minimum, maximum.
  json input_schema = json::object();

  json to_json() const;
  static ToolSpec from_json(const json& j);
  bool operator==(const ToolSpec&) const = default;
};

// Handlers receive the `arguments` object and return the call result.
// Throwing surfaces as a -32000 error with the exception text in `data`.
using ToolHandler = std::function<json(const json& arguments)>;

struct Tool {
  ToolSpec spec;
  ToolHandler handler;
};

// Returns a description of the first violation, or nullopt when `value`
// conforms to `schema`.
std::optional<std::string> validate_schema(const json& schema,
                                           const json& value);

// Request dispatcher. Stateless apart from the tool table, so one instance
// can back any number of connections.
class Server {
 public:
  explicit Server(std::vector<Tool> tools);

  const std::vector<ToolSpec>& tool_specs() const { return specs_; }

  // Answers one frame. Returns nullopt for notifications.
  std::optional<std::string> handle_frame(std::string_view frame) const;

  // Processes frames from `channel` in arrival order until EOF.
  void serve_channel(LineChannel& channel) const;

 private:
  json dispatch(const RpcEnvelope& request) const;

  std::vector<ToolSpec> specs_;
  std::vector<ToolHandler> handlers_;
};

// A server bound to a transport and running on background threads.
class ServerHandle {
 public:
  ServerHandle(std::shared_ptr<const Server> server,
               const TransportConfig& transport);
  ~ServerHandle();

  ServerHandle(const ServerHandle&) = delete;
  ServerHandle& operator=(const ServerHandle&) = delete;

  // Bound TCP port (0 for stdio).
  std::uint16_t port() const { return port_; }
  const Server& server() const { return *server_; }

  // Blocks until the transport reaches EOF (stdio) or stop() is called.
  void wait();
  void stop();

 private:
  void accept_loop();

  std::shared_ptr<const Server> server_;
  std::unique_ptr<TcpListener> listener_;
  std::unique_ptr<LineChannel> stdio_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread main_thread_;
  std::mutex conn_mu_;
  std::vector<std::thread> conn_threads_;
  std::vector<LineChannel*> live_;
};

std::unique_ptr<ServerHandle> serve(std::vector<Tool> tools,
                                    const TransportConfig& transport);

}  // namespace radfabric::mcp
