#include "radfabric/mcp/client.hpp"

namespace radfabric::mcp {

Client::Client(std::unique_ptr<LineChannel> channel,
               std::chrono::milliseconds default_timeout)
    : channel_(std::move(channel)), default_timeout_(default_timeout) {
  if (!channel_) invalid_input("client requires a channel");
  reader_ = std::thread([this] { reader_loop(); });
}

Client::~Client() {
  close();
  if (reader_.joinable()) reader_.join();
}

void Client::close() {
  if (closed_.exchange(true)) return;
  channel_->close();
  fail_pending("connection closed");
}

std::size_t Client::in_flight() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

void Client::fail_pending(const std::string& why) {
  std::map<std::int64_t, std::shared_ptr<Slot>> orphaned;
  {
    std::lock_guard lock(mu_);
    orphaned.swap(pending_);
  }
  for (auto& [id, slot] : orphaned) {
    slot->set_exception(std::make_exception_ptr(
        Error(ErrorKind::kConnection, why + " (request id " + std::to_string(id) + ")")));
  }
}

void Client::reader_loop() {
  for (;;) {
    std::optional<std::string> line;
    try {
      line = channel_->read_line();
    } catch (const Error&) {
      line.reset();
    }
    if (!line) break;
    RpcEnvelope env;
    try {
      env = decode_envelope(*line);
    } catch (const DecodeError&) {
      continue;
    }
    if (env.kind != EnvelopeKind::kResponse && env.kind != EnvelopeKind::kError) continue;
    if (!env.id || !env.id->is_number_integer()) continue;
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard lock(mu_);
      auto it = pending_.find(env.id->get<std::int64_t>());
      if (it == pending_.end()) continue;  // late reply after a timeout
      slot = std::move(it->second);
      pending_.erase(it);
    }
    slot->set_value(std::move(env));
  }
  closed_ = true;
  fail_pending("transport closed");
}

json Client::request(const std::string& method, json params,
                     std::optional<std::chrono::milliseconds> timeout) {
  if (closed_.load()) fail(ErrorKind::kConnection, "transport closed");
  const std::int64_t id = next_id_.fetch_add(1);
  auto slot = std::make_shared<Slot>();
  auto future = slot->get_future();
  {
    std::lock_guard lock(mu_);
    if (closed_.load()) fail(ErrorKind::kConnection, "transport closed");
    pending_.emplace(id, slot);
  }
  try {
    channel_->write_line(make_request(id, method, std::move(params)).to_frame());
  } catch (...) {
    std::lock_guard lock(mu_);
    pending_.erase(id);
    throw;
  }
  if (future.wait_for(timeout.value_or(default_timeout_)) != std::future_status::ready) {
    bool removed = false;
    {
      std::lock_guard lock(mu_);
      removed = pending_.erase(id) > 0;
    }
    if (removed) {
      fail(ErrorKind::kTimeout, "no response to '" + method + "' (id " +
                                    std::to_string(id) + ") before timeout");
    }
    // The response raced the timeout; fall through and take it.
  }
  RpcEnvelope env = future.get();
  if (env.kind == EnvelopeKind::kError) {
    throw RpcError(env.error.code, env.error.message, env.error.data);
  }
  return std::move(env.result);
}

void Client::notify(const std::string& method, json params) {
  if (closed_.load()) fail(ErrorKind::kConnection, "transport closed");
  channel_->write_line(make_notification(method, std::move(params)).to_frame());
}

json Client::initialize() { return request("initialize", json::object()); }

std::vector<ToolSpec> Client::list_tools() {
  json result = request("tools/list", json::object());
  std::vector<ToolSpec> out;
  if (!result.is_object() || !result.contains("tools") || !result["tools"].is_array()) {
    fail(ErrorKind::kProtocolViolation, "tools/list result lacks a 'tools' array");
  }
  for (const auto& t : result["tools"]) out.push_back(ToolSpec::from_json(t));
  return out;
}

json Client::call_tool(const std::string& name, const json& arguments,
                       std::optional<std::chrono::milliseconds> timeout) {
  if (name.empty()) invalid_input("tool name must be nonempty");
  return request("tools/call", {{"name", name}, {"arguments", arguments}}, timeout);
}

std::unique_ptr<Client> connect_tcp(const std::string& address,
                                    std::chrono::milliseconds timeout) {
  auto cfg = TransportConfig::parse_address(address);
  return std::make_unique<Client>(tcp_connect(cfg.host, cfg.port), timeout);
}

}  // namespace radfabric::mcp
