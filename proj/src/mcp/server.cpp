#include "radfabric/mcp/server.hpp"

#include <algorithm>
#include <set>

namespace radfabric::mcp {

json ToolSpec::to_json() const {
  return {{"name", name},
          {"description", description},
          {"inputSchema", input_schema}};
}

ToolSpec ToolSpec::from_json(const json& j) {
  ToolSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.description = j.value("description", std::string());
  spec.input_schema = j.value("inputSchema", json::object());
  return spec;
}

namespace {

bool type_matches(const std::string& type, const json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number_integer();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

std::optional<std::string> validate_at(const json& schema, const json& value,
                                       const std::string& path) {
  if (!schema.is_object()) return std::nullopt;
  const std::string where = path.empty() ? "arguments" : path;

  if (auto t = schema.find("type"); t != schema.end()) {
    bool ok = false;
    if (t->is_string()) {
      ok = type_matches(t->get<std::string>(), value);
    } else if (t->is_array()) {
      ok = std::any_of(t->begin(), t->end(), [&](const json& alt) {
        return alt.is_string() && type_matches(alt.get<std::string>(), value);
      });
    }
    if (!ok) return where + ": expected type " + t->dump();
  }
  if (auto e = schema.find("enum"); e != schema.end() && e->is_array()) {
    if (std::find(e->begin(), e->end(), value) == e->end()) {
      return where + ": value not in enum";
    }
  }
  if (value.is_number()) {
    const double x = value.get<double>();
    if (auto m = schema.find("minimum"); m != schema.end() && x < m->get<double>()) {
      return where + ": below minimum";
    }
    if (auto m = schema.find("maximum"); m != schema.end() && x > m->get<double>()) {
      return where + ": above maximum";
    }
  }
  if (value.is_object()) {
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const auto& key : *req) {
        if (!value.contains(key.get<std::string>())) {
          return where + ": missing required property '" +
                 key.get<std::string>() + "'";
        }
      }
    }
    const json props = schema.value("properties", json::object());
    const bool closed = schema.contains("additionalProperties") &&
                        schema["additionalProperties"] == false;
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        if (auto err = validate_at(props[key], sub, where + "." + key)) {
          return err;
        }
      } else if (closed) {
        return where + ": unexpected property '" + key + "'";
      }
    }
  }
  if (value.is_array()) {
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (auto err = validate_at(*items, value[i],
                                   where + "[" + std::to_string(i) + "]")) {
          return err;
        }
      }
    }
  }
  return std::nullopt;
}

// Internal control flow for dispatch failures that map to an error response.
struct DispatchFailure {
  int code;
  std::string message;
  std::optional<json> data;
};

}  // namespace

std::optional<std::string> validate_schema(const json& schema,
                                           const json& value) {
  return validate_at(schema, value, "");
}

Server::Server(std::vector<Tool> tools) {
  std::set<std::string> seen;
  for (auto& tool : tools) {
    if (tool.spec.name.empty()) invalid_input("tool name must be nonempty");
    if (!seen.insert(tool.spec.name).second) {
      invalid_input("duplicate tool name '" + tool.spec.name + "'");
    }
    if (!tool.handler) invalid_input("tool '" + tool.spec.name + "' has no handler");
    specs_.push_back(std::move(tool.spec));
    handlers_.push_back(std::move(tool.handler));
  }
}

json Server::dispatch(const RpcEnvelope& request) const {
  const std::string& method = request.method;
  if (method == "initialize") {
    return {{"protocol", kProtocolName}, {"tools_count", specs_.size()}};
  }
  if (method == "tools/list") {
    json list = json::array();
    for (const auto& spec : specs_) list.push_back(spec.to_json());
    return {{"tools", std::move(list)}};
  }
  if (method == "tools/call") {
    const json& params = request.params;
    if (!params.is_object() || !params.contains("name") ||
        !params["name"].is_string()) {
      throw DispatchFailure{rpc_code::kInvalidParams, "Invalid params",
                            json("tools/call requires a string 'name'")};
    }
    const std::string name = params["name"].get<std::string>();
    json arguments = params.value("arguments", json::object());
    if (arguments.is_null()) arguments = json::object();
    auto it = std::find_if(specs_.begin(), specs_.end(),
                           [&](const ToolSpec& s) { return s.name == name; });
    if (it == specs_.end()) {
      throw DispatchFailure{rpc_code::kInvalidParams, "Invalid params",
                            json("unknown tool '" + name + "'")};
    }
    if (auto err = validate_schema(it->input_schema, arguments)) {
      throw DispatchFailure{rpc_code::kInvalidParams, "Invalid params",
                            json(*err)};
    }
    const auto& handler = handlers_[static_cast<std::size_t>(it - specs_.begin())];
    try {
      return handler(arguments);
    } catch (const std::exception& e) {
      throw DispatchFailure{rpc_code::kHandlerFailure, "Tool execution failed",
                            json(e.what())};
    }
  }
  throw DispatchFailure{rpc_code::kMethodNotFound, "Method not found",
                        json(method)};
}

std::optional<std::string> Server::handle_frame(std::string_view frame) const {
  RpcEnvelope request;
  try {
    request = decode_envelope(frame);
  } catch (const DecodeError& e) {
    return make_error(e.id(), e.code(), e.what()).to_frame();
  }
  if (request.kind == EnvelopeKind::kResponse ||
      request.kind == EnvelopeKind::kError) {
    return make_error(request.id.value_or(nullptr), rpc_code::kInvalidRequest,
                      "Invalid Request",
                      json("server does not accept responses"))
        .to_frame();
  }
  const bool notification = request.kind == EnvelopeKind::kNotification;
  try {
    json result = dispatch(request);
    if (notification) return std::nullopt;
    return make_result(*request.id, std::move(result)).to_frame();
  } catch (const DispatchFailure& f) {
    if (notification) return std::nullopt;
    return make_error(*request.id, f.code, f.message, f.data).to_frame();
  }
}

void Server::serve_channel(LineChannel& channel) const {
  while (auto line = channel.read_line()) {
    if (line->find_first_not_of(" \t\r") == std::string::npos) continue;
    auto reply = handle_frame(*line);
    if (!reply) continue;
    try {
      channel.write_line(*reply);
    } catch (const Error&) {
      return;
    }
  }
}

ServerHandle::ServerHandle(std::shared_ptr<const Server> server,
                           const TransportConfig& transport)
    : server_(std::move(server)) {
  if (transport.mode == TransportMode::kTcp) {
    listener_ = std::make_unique<TcpListener>(transport.host, transport.port);
    port_ = listener_->port();
    main_thread_ = std::thread([this] { accept_loop(); });
  } else {
    stdio_ = make_stdio_channel();
    main_thread_ = std::thread([this] { server_->serve_channel(*stdio_); });
  }
}

ServerHandle::~ServerHandle() { stop(); }

void ServerHandle::accept_loop() {
  while (!stopping_.load()) {
    auto conn = listener_->accept(std::chrono::milliseconds(100));
    if (!conn) continue;
    std::lock_guard lock(conn_mu_);
    if (stopping_.load()) break;
    LineChannel* raw = conn.get();
    live_.push_back(raw);
    conn_threads_.emplace_back([this, c = std::move(conn)]() mutable {
      server_->serve_channel(*c);
      std::lock_guard inner(conn_mu_);
      live_.erase(std::remove(live_.begin(), live_.end(), c.get()), live_.end());
    });
  }
}

void ServerHandle::wait() {
  if (main_thread_.joinable()) main_thread_.join();
}

void ServerHandle::stop() {
  if (stopping_.exchange(true)) {
    wait();
    return;
  }
  if (listener_) listener_->close();
  if (stdio_) stdio_->close();
  wait();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(conn_mu_);
    for (auto* c : live_) c->close();
    threads.swap(conn_threads_);
  }
  for (auto& t : threads) t.join();
}

std::unique_ptr<ServerHandle> serve(std::vector<Tool> tools,
                                    const TransportConfig& transport) {
  auto server = std::make_shared<const Server>(std::move(tools));
  return std::make_unique<ServerHandle>(std::move(server), transport);
}

}  // namespace radfabric::mcp
