#include "radfabric/reasoning/reasoner_client.hpp"

#include "httplib.h"
#include "radfabric/error.hpp"

namespace radfabric::reasoning {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  if (url.rfind("http://", 0) != 0) {
    invalid_input("reasoner url must start with http:// (got '" + url + "')");
  }
  const std::size_t slash = url.find('/', 7);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

ReasonerEndpoint ReasonerEndpoint::from_json(const nlohmann::json& j) {
  ReasonerEndpoint e;
  e.url = j.at("url").get<std::string>();
  e.model = j.value("model", std::string());
  e.token = j.value("token", std::string());
  e.retries = j.value("retries", e.retries);
  if (e.retries < 0) invalid_input("reasoner retries must be >= 0");
  if (j.contains("timeout_ms")) e.timeout = std::chrono::milliseconds(j["timeout_ms"].get<long>());
  return e;
}

nlohmann::json ReasonerEndpoint::to_json() const {
  return {{"url", url}, {"model", model}, {"retries", retries}, {"timeout_ms", timeout.count()}};
}

std::string query_reasoner(const std::string& prompt, const ReasonerEndpoint& endpoint) {
  const SplitUrl target = split_url(endpoint.url);
  httplib::Client client(target.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!endpoint.token.empty()) headers.emplace("Authorization", "Bearer " + endpoint.token);
  const nlohmann::json body = {
      {"model", endpoint.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= endpoint.retries; ++attempt) {
    auto res = client.Post(target.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      fail(ErrorKind::kRemoteFailure,
           "reasoner at " + endpoint.url + " answered HTTP " + std::to_string(res->status));
    }
    if (res->body.empty()) fail(ErrorKind::kProtocolViolation, "reasoner returned an empty body");
    auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) fail(ErrorKind::kProtocolViolation, "reasoner reply is not JSON");
    const nlohmann::json* content = nullptr;
    if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
      const auto& msg = reply["choices"][0].value("message", nlohmann::json::object());
      if (msg.contains("content") && msg["content"].is_string()) content = &msg["content"];
      if (content) {
        std::string text = content->get<std::string>();
        if (text.empty()) fail(ErrorKind::kProtocolViolation, "reasoner returned an empty completion");
        return text;
      }
    }
    fail(ErrorKind::kProtocolViolation, "reasoner reply lacks choices[0].message.content");
  }
  fail(ErrorKind::kRemoteFailure, "reasoner at " + endpoint.url + " failed after " +
                                      std::to_string(endpoint.retries + 1) + " attempts (" +
                                      last_error + ")");
}

}  // namespace radfabric::reasoning
