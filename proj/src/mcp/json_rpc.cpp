#include "radfabric/mcp/json_rpc.hpp"

namespace radfabric::mcp {

namespace {

bool valid_id(const json& id) {
  return id.is_null() || id.is_string() || id.is_number_integer();
}

json recover_id(const json& doc) {
  if (doc.is_object()) {
    auto it = doc.find("id");
    if (it != doc.end() && valid_id(*it)) return *it;
  }
  return nullptr;
}

}  // namespace

json RpcEnvelope::to_json() const {
  json out = {{"jsonrpc", "2.0"}};
  switch (kind) {
    case EnvelopeKind::kRequest:
      out["id"] = id.value_or(nullptr);
      [[fallthrough]];
    case EnvelopeKind::kNotification:
      out["method"] = method;
      if (!params.is_null()) out["params"] = params;
      break;
    case EnvelopeKind::kResponse:
      out["id"] = id.value_or(nullptr);
      out["result"] = result;
      break;
    case EnvelopeKind::kError: {
      out["id"] = id.value_or(nullptr);
      json err = {{"code", error.code}, {"message", error.message}};
      if (error.data) err["data"] = *error.data;
      out["error"] = std::move(err);
      break;
    }
  }
  return out;
}

std::string RpcEnvelope::to_frame() const {
  // nlohmann escapes control characters inside strings, so a compact dump
  // never contains a raw newline.
  return to_json().dump(-1, ' ', false, json::error_handler_t::replace);
}

RpcEnvelope make_request(json id, std::string method, json params) {
  RpcEnvelope env;
  env.kind = EnvelopeKind::kRequest;
  env.id = std::move(id);
  env.method = std::move(method);
  env.params = std::move(params);
  return env;
}

RpcEnvelope make_notification(std::string method, json params) {
  RpcEnvelope env;
  env.kind = EnvelopeKind::kNotification;
  env.method = std::move(method);
  env.params = std::move(params);
  return env;
}

RpcEnvelope make_result(json id, json result) {
  RpcEnvelope env;
  env.kind = EnvelopeKind::kResponse;
  env.id = std::move(id);
  env.result = std::move(result);
  return env;
}

RpcEnvelope make_error(json id, int code, std::string message,
                       std::optional<json> data) {
  RpcEnvelope env;
  env.kind = EnvelopeKind::kError;
  env.id = std::move(id);
  env.error = RpcErrorBody{code, std::move(message), std::move(data)};
  return env;
}

RpcEnvelope decode_envelope(std::string_view frame) {
  json doc = json::parse(frame, nullptr, false);
  if (doc.is_discarded()) {
    throw DecodeError(rpc_code::kParseError, "Parse error", nullptr);
  }
  if (!doc.is_object()) {
    throw DecodeError(rpc_code::kInvalidRequest, "Invalid Request", nullptr);
  }
  const json id = recover_id(doc);
  auto version = doc.find("jsonrpc");
  if (version == doc.end() || *version != "2.0") {
    throw DecodeError(rpc_code::kInvalidRequest, "Invalid Request", id);
  }
  const bool has_id = doc.contains("id");
  if (has_id && !valid_id(doc["id"])) {
    throw DecodeError(rpc_code::kInvalidRequest, "Invalid Request", nullptr);
  }

  RpcEnvelope env;
  if (has_id) env.id = doc["id"];

  if (auto m = doc.find("method"); m != doc.end()) {
    if (!m->is_string()) {
      throw DecodeError(rpc_code::kInvalidRequest, "Invalid Request", id);
    }
    env.kind = has_id ? EnvelopeKind::kRequest : EnvelopeKind::kNotification;
    env.method = m->get<std::string>();
    env.params = doc.value("params", json(nullptr));
    return env;
  }

  const bool has_result = doc.contains("result");
  const bool has_error = doc.contains("error");
  if (!has_id || has_result == has_error) {
    throw DecodeError(rpc_code::kInvalidRequest, "Invalid Request", id);
  }
  if (has_result) {
    env.kind = EnvelopeKind::kResponse;
    env.result = doc["result"];
    return env;
  }
  const json& err = doc["error"];
  if (!err.is_object() || !err.contains("code") ||
      !err["code"].is_number_integer()) {
    throw DecodeError(rpc_code::kInvalidRequest, "Invalid Request", id);
  }
  env.kind = EnvelopeKind::kError;
  env.error.code = err["code"].get<int>();
  env.error.message = err.value("message", std::string());
  if (err.contains("data")) env.error.data = err["data"];
  return env;
}

}  // namespace radfabric::mcp
