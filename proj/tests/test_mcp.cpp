#include <chrono>
#include <thread>

#include "doctest.h"
#include "radfabric/mcp/client.hpp"
#include "radfabric/mcp/server.hpp"
#include "relay.hpp"

using namespace radfabric;
using namespace radfabric::mcp;
using namespace std::chrono_literals;

namespace {

json add_schema() {
  return {{"type", "object"},
          {"properties", {{"a", {{"type", "number"}}}, {"b", {{"type", "number"}}}}},
          {"required", {"a", "b"}},
          {"additionalProperties", false}};
}

std::vector<Tool> sample_tools() {
  std::vector<Tool> tools;
  tools.push_back({{"add", "Adds two numbers", add_schema()},
                   [](const json& a) { return json{{"sum", a["a"].get<double>() + a["b"].get<double>()}}; }});
  tools.push_back({{"echo", "Echoes its input", json::object()}, [](const json& a) { return a; }});
  tools.push_back({{"boom", "Always fails", json::object()},
                   [](const json&) -> json { throw std::runtime_error("kaput"); }});
  return tools;
}

json reply(const Server& s, const json& request) {
  auto out = s.handle_frame(request.dump());
  REQUIRE(out.has_value());
  return json::parse(*out);
}

}  // namespace

TEST_CASE("envelopes encode and decode") {
  auto req = make_request(7, "tools/list");
  auto back = decode_envelope(req.to_frame());
  CHECK(back.kind == EnvelopeKind::kRequest);
  CHECK(*back.id == 7);
  CHECK(back.method == "tools/list");
  CHECK(req.to_frame().find('\n') == std::string::npos);

  auto err = decode_envelope(make_error(3, -32601, "Method not found", json("x")).to_frame());
  CHECK(err.kind == EnvelopeKind::kError);
  CHECK(err.error.code == -32601);
  CHECK(*err.error.data == "x");

  CHECK(decode_envelope(make_notification("ping").to_frame()).kind == EnvelopeKind::kNotification);
}

TEST_CASE("decode rejects malformed frames") {
  CHECK_THROWS_AS(decode_envelope("{not json"), DecodeError);
  try {
    decode_envelope("{not json");
  } catch (const DecodeError& e) {
    CHECK(e.code() == rpc_code::kParseError);
  }
  try {
    decode_envelope(R"({"jsonrpc":"1.0","id":1,"method":"x"})");
    FAIL("expected throw");
  } catch (const DecodeError& e) {
    CHECK(e.code() == rpc_code::kInvalidRequest);
  }
  CHECK_THROWS_AS(decode_envelope(R"({"jsonrpc":"2.0","id":1,"result":1,"error":{"code":1,"message":"m"}})"),
                  DecodeError);
  CHECK_THROWS_AS(decode_envelope(R"({"jsonrpc":"2.0","id":[1],"method":"x"})"), DecodeError);
}

TEST_CASE("schema validation") {
  CHECK_FALSE(validate_schema(add_schema(), {{"a", 1}, {"b", 2}}));
  CHECK(validate_schema(add_schema(), {{"a", 1}}));
  CHECK(validate_schema(add_schema(), {{"a", 1}, {"b", "two"}}));
  CHECK(validate_schema(add_schema(), {{"a", 1}, {"b", 2}, {"c", 3}}));
  json ranged = {{"type", "number"}, {"minimum", 0}, {"maximum", 1}};
  CHECK_FALSE(validate_schema(ranged, 0.5));
  CHECK(validate_schema(ranged, 1.5));
  json choice = {{"enum", {"a", "b"}}};
  CHECK(validate_schema(choice, "c"));
}

TEST_CASE("server dispatch and error codes") {
  Server s(sample_tools());

  auto init = reply(s, make_request(1, "initialize").to_json());
  CHECK(init["result"]["protocol"] == kProtocolName);
  CHECK(init["result"]["tools_count"] == 3);

  auto list = reply(s, make_request(2, "tools/list").to_json());
  REQUIRE(list["result"]["tools"].size() == 3);
  CHECK(list["result"]["tools"][0]["name"] == "add");
  CHECK(list["result"]["tools"][0].contains("inputSchema"));

  auto ok = reply(s, make_request(3, "tools/call", {{"name", "add"}, {"arguments", {{"a", 2}, {"b", 3}}}}).to_json());
  CHECK(ok["result"]["sum"] == 5.0);

  auto unknown_method = reply(s, make_request(4, "tools/frobnicate").to_json());
  CHECK(unknown_method["error"]["code"] == rpc_code::kMethodNotFound);

  auto unknown_tool = reply(s, make_request(5, "tools/call", {{"name", "nope"}, {"arguments", json::object()}}).to_json());
  CHECK(unknown_tool["error"]["code"] == rpc_code::kInvalidParams);

  auto bad_args = reply(s, make_request(6, "tools/call", {{"name", "add"}, {"arguments", {{"a", 1}}}}).to_json());
  CHECK(bad_args["error"]["code"] == rpc_code::kInvalidParams);

  auto failing = reply(s, make_request(7, "tools/call", {{"name", "boom"}, {"arguments", json::object()}}).to_json());
  CHECK(failing["error"]["code"] == rpc_code::kHandlerFailure);
  CHECK(failing["error"]["data"] == "kaput");
  CHECK(failing["id"] == 7);

  auto parse = json::parse(*s.handle_frame("{{{"));
  CHECK(parse["error"]["code"] == rpc_code::kParseError);
  CHECK(parse["id"].is_null());

  CHECK_FALSE(s.handle_frame(make_notification("tools/list").to_frame()).has_value());
}

TEST_CASE("server rejects duplicate tool names") {
  auto tools = sample_tools();
  tools.push_back(tools.front());
  CHECK_THROWS_AS(Server{tools}, Error);
}

TEST_CASE("client over loopback") {
  auto [client_end, server_end] = make_loopback_pair();
  auto server = std::make_shared<const Server>(sample_tools());
  LineChannel* raw_server_end = server_end.get();
  std::thread t([&] { server->serve_channel(*raw_server_end); });

  {
    Client c(std::move(client_end), 2s);
    CHECK(c.initialize()["tools_count"] == 3);
    auto specs = c.list_tools();
    REQUIRE(specs.size() == 3);
    CHECK(specs[1].name == "echo");
    CHECK(c.call_tool("add", {{"a", 1.5}, {"b", 2}})["sum"] == 3.5);
    try {
      c.call_tool("boom", json::object());
      FAIL("expected RpcError");
    } catch (const RpcError& e) {
      CHECK(e.code() == rpc_code::kHandlerFailure);
      CHECK(*e.data() == "kaput");
      CHECK(is_remote(e.kind()));
    }
    CHECK_THROWS_AS(c.call_tool("", json::object()), Error);
    c.close();
  }
  raw_server_end->close();
  t.join();
}

TEST_CASE("responses delivered out of order reach the right caller") {
  auto [client_end, server_end] = make_loopback_pair();
  auto server = std::make_shared<const Server>(sample_tools());
  LineChannel* raw_server_end = server_end.get();
  std::thread t([&] { server->serve_channel(*raw_server_end); });

  auto relayed = std::make_unique<relay::ReorderingChannel>(std::move(client_end), 42);
  auto* relay_view = relayed.get();
  std::atomic<int> good{0};
  {
    Client c(std::move(relayed), 2s);
    std::vector<std::thread> callers;
    for (int i = 0; i < 8; ++i) {
      callers.emplace_back([&, i] {
        for (int k = 0; k < 6; ++k) {
          json args = {{"tag", i * 100 + k}};
          if (c.call_tool("echo", args) == args) ++good;
        }
      });
    }
    for (auto& th : callers) th.join();
    CHECK(relay_view->reordered() > 0);
    c.close();
  }
  CHECK(good == 48);
  raw_server_end->close();
  t.join();
}

TEST_CASE("client times out when nobody answers") {
  auto [client_end, server_end] = make_loopback_pair();
  Client c(std::move(client_end), 100ms);
  try {
    c.request("tools/list", nullptr);
    FAIL("expected timeout");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTimeout);
  }
  CHECK(c.in_flight() == 0);
}

TEST_CASE("client fails pending calls when the peer hangs up") {
  auto [client_end, server_end] = make_loopback_pair();
  Client c(std::move(client_end), 5s);
  std::thread closer([&] {
    std::this_thread::sleep_for(50ms);
    server_end->close();
    server_end.reset();
  });
  try {
    c.request("tools/list", nullptr);
    FAIL("expected connection error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConnection);
  }
  closer.join();
  CHECK_FALSE(c.connected());
}

TEST_CASE("tcp serve and connect") {
  auto handle = serve(sample_tools(), TransportConfig::tcp("127.0.0.1", 0));
  REQUIRE(handle->port() != 0);
  const std::string address = "127.0.0.1:" + std::to_string(handle->port());

  std::vector<std::thread> threads;
  std::atomic<int> good{0};
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      auto c = connect_tcp(address, 2s);
      for (int k = 0; k < 10; ++k) {
        if (c->call_tool("add", {{"a", i}, {"b", k}})["sum"] == double(i + k)) ++good;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(good == 40);
  handle->stop();
}

TEST_CASE("transport address parsing") {
  auto t = TransportConfig::parse_address("0.0.0.0:8123");
  CHECK(t.mode == TransportMode::kTcp);
  CHECK(t.host == "0.0.0.0");
  CHECK(t.port == 8123);
  CHECK_THROWS_AS(TransportConfig::parse_address("nope"), Error);
  CHECK_THROWS_AS(connect_tcp("127.0.0.1:1", 200ms), Error);
}
