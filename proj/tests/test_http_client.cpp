#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>
#include <thread>

#include <httplib.h>

#include <cello/http_client.hpp>

using namespace cello;

namespace {

/// In-process endpoint capturing the last request it served.
struct TestServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::string last_body;
  std::string last_auth;
  std::string reply = R"({"text": "Final answer: A"})";
  int status = 200;

  TestServer() {
    server.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = req.body;
      last_auth = req.get_header_value("Authorization");
      res.status = status;
      res.set_content(reply, "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~TestServer() {
    server.stop();
    thread.join();
  }

  HttpClientConfig config() const {
    HttpClientConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = port;
    cfg.model = "test-model";
    cfg.timeout_ms = 2000;
    return cfg;
  }
};

}  // namespace

TEST_CASE("a healthy endpoint answers with its text field") {
  TestServer srv;
  HttpModelClient client(srv.config());
  CHECK(client.name() == "test-model");
  CHECK(client.timeout_ms() == 2000);
  std::string text = client.generate("What holds the shelf?", "img-17");
  CHECK(text == "Final answer: A");

  // the request carried the full wire contract
  auto body = nlohmann::json::parse(srv.last_body);
  CHECK(body["model"] == "test-model");
  CHECK(body["prompt"] == "What holds the shelf?");
  CHECK(body["image_ref"] == "img-17");
  CHECK(body["max_tokens"] == 512);
  // no key in the environment, no auth header
  CHECK(srv.last_auth.empty());
}

TEST_CASE("the api key travels only through the environment") {
  TestServer srv;
  setenv("CELLO_API_KEY", "sk-unit-test", 1);
  HttpModelClient client(srv.config());
  unsetenv("CELLO_API_KEY");
  client.generate("prompt", "img");
  CHECK(srv.last_auth == "Bearer sk-unit-test");
}

TEST_CASE("non-200 statuses surface as client unavailability") {
  TestServer srv;
  srv.status = 503;
  HttpModelClient client(srv.config());
  try {
    client.generate("prompt", "img");
    FAIL("expected ClientUnavailable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClientUnavailable);
    CHECK(std::string(e.what()).find("503") != std::string::npos);
  }
}

TEST_CASE("malformed response bodies surface as client unavailability") {
  TestServer srv;
  SECTION("not json") { srv.reply = "gateway timeout"; }
  SECTION("wrong shape") { srv.reply = R"(["text"])"; }
  SECTION("missing field") { srv.reply = R"({"output": "hi"})"; }
  SECTION("wrong type") { srv.reply = R"({"text": 7})"; }
  HttpModelClient client(srv.config());
  try {
    client.generate("prompt", "img");
    FAIL("expected ClientUnavailable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClientUnavailable);
    CHECK(std::string(e.what()).find("text field") != std::string::npos);
  }
}

TEST_CASE("a refused connection surfaces as client unavailability") {
  HttpClientConfig cfg;
  cfg.host = "127.0.0.1";
  cfg.port = 9;  // discard port, nothing listens here
  cfg.timeout_ms = 500;
  HttpModelClient client(cfg);
  try {
    client.generate("prompt", "img");
    FAIL("expected ClientUnavailable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClientUnavailable);
    CHECK(std::string(e.what()).find("no response") != std::string::npos);
  }
}

TEST_CASE("a custom key variable is honoured") {
  TestServer srv;
  HttpClientConfig cfg = srv.config();
  cfg.api_key_env = "OTHER_KEY_VAR";
  setenv("OTHER_KEY_VAR", "alt-key", 1);
  HttpModelClient client(cfg);
  unsetenv("OTHER_KEY_VAR");
  client.generate("prompt", "img");
  CHECK(srv.last_auth == "Bearer alt-key");
}
