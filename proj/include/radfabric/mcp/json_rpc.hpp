#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "radfabric/error.hpp"

namespace radfabric::mcp {

using json = nlohmann::json;

// JSON-RPC 2.0 error codes used on the wire.
namespace rpc_code {
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kHandlerFailure = -32000;
}  // namespace rpc_code

inline constexpr std::string_view kProtocolName = "radfabric-mcp/1";

enum class EnvelopeKind { kRequest, kNotification, kResponse, kError };

struct RpcErrorBody {
  int code = 0;
  std::string message;
  std::optional<json> data;
};

// One decoded JSON-RPC message. `id` holds integer, string or null; it is
// empty for notifications.
struct RpcEnvelope {
  EnvelopeKind kind = EnvelopeKind::kRequest;
  std::optional<json> id;
  std::string method;
  json params;
  json result;
  RpcErrorBody error;

  json to_json() const;
  // Serializes to a single frame (no trailing newline, no raw newlines).
  std::string to_frame() const;
};

RpcEnvelope make_request(json id, std::string method, json params = nullptr);
RpcEnvelope make_notification(std::string method, json params = nullptr);
RpcEnvelope make_result(json id, json result);
RpcEnvelope make_error(json id, int code, std::string message,
                       std::optional<json> data = std::nullopt);

// Thrown by decode_envelope; carries the JSON-RPC code and whatever id could
// be recovered so that the caller can still answer.
class DecodeError : public Error {
 public:
  DecodeError(int code, const std::string& message, json id)
      : Error(ErrorKind::kFormat, message), code_(code), id_(std::move(id)) {}
  int code() const noexcept { return code_; }
  const json& id() const noexcept { return id_; }

 private:
  int code_;
  json id_;
};

RpcEnvelope decode_envelope(std::string_view frame);

// An error response received from a server.
class RpcError : public Error {
 public:
  RpcError(int code, const std::string& message, std::optional<json> data)
      : Error(ErrorKind::kRemoteFailure,
              "rpc error " + std::to_string(code) + ": " + message),
        code_(code),
        rpc_message_(message),
        data_(std::move(data)) {}
  int code() const noexcept { return code_; }
  const std::string& rpc_message() const noexcept { return rpc_message_; }
  const std::optional<json>& data() const noexcept { return data_; }

 private:
  int code_;
  std::string rpc_message_;
  std::optional<json> data_;
};

}  // namespace radfabric::mcp
