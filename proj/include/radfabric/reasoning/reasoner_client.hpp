#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace radfabric::reasoning {

// A chat-completion endpoint, e.g. "http://127.0.0.1:8000/v1/chat/completions".
struct ReasonerEndpoint {
  std::string url;
  std::string model;
  std::string token;  // sent as a bearer token when nonempty
  int retries = 2;    // extra attempts after a transport failure or 5xx
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};

  static ReasonerEndpoint from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;  // omits the token
};

// Sends the prompt as one user message and returns choices[0].message.content
// verbatim. Throws Error(kRemoteFailure) when attempts run out or the server
// answers 4xx, Error(kProtocolViolation) on an empty or malformed response.
std::string query_reasoner(const std::string& prompt, const ReasonerEndpoint& endpoint);

}  // namespace radfabric::reasoning
