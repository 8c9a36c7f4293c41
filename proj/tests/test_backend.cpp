#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "nlohmann/json.hpp"

#include "focal/backend.hpp"
#include "focal/error.hpp"
#include "focal/http_backend.hpp"
#include "focal/mock_backend.hpp"
#include "focal/prompts.hpp"
#include "focal/util.hpp"

using namespace focal;

TEST_CASE("token usage totals") {
  TokenUsage u{100, 20};
  CHECK(u.total() == 120);
}

TEST_CASE("ledger splits channels and sums session cost") {
  TokenLedger ledger;
  ledger.record(AgentTag::brain, {3000, 744});
  ledger.record(AgentTag::record, {12000, 873});
  ledger.record(AgentTag::summary, {1000, 296});
  ledger.record(AgentTag::judge, {500, 50});

  CHECK(ledger.brainTokens() == 3744);
  CHECK(ledger.recordTokens() == 12873);
  CHECK(ledger.summaryTokens() == 1296);
  CHECK(ledger.judgeTokens() == 550);
  // judge usage never enters the session cost
  CHECK(ledger.tcs() == 17913);
  CHECK(ledger.calls().size() == 4);
}

TEST_CASE("session cost with no planner channel") {
  TokenLedger ledger;
  ledger.record(AgentTag::record, {40000, 2583});
  ledger.record(AgentTag::summary, {2000, 657});
  CHECK(ledger.brainTokens() == 0);
  CHECK(ledger.tcs() == 45240);
}

TEST_CASE("ledger rejects negative usage") {
  TokenLedger ledger;
  CHECK_THROWS_WITH(ledger.record(AgentTag::brain, {-1, 0}),
                    doctest::Contains("negative token usage"));
}

TEST_CASE("agent tag names round trip") {
  for (AgentTag tag :
       {AgentTag::brain, AgentTag::record, AgentTag::summary, AgentTag::judge}) {
    CHECK(agentTagFromString(toString(tag)) == tag);
  }
  CHECK(agentTagFromString("nope") == std::nullopt);
}

TEST_CASE("template rendering") {
  CHECK(renderTemplate("a {{x}} b {{y}}", {{"x", "1"}, {"y", "2"}}) == "a 1 b 2");
  CHECK(renderTemplate("{{x}}{{x}}", {{"x", "z"}}) == "zz");
  // unknown placeholders survive so template bugs are visible
  CHECK(renderTemplate("{{missing}}", {}) == "{{missing}}");
}

TEST_CASE("section extraction from prompt text") {
  const std::string text =
      "HEAD\nACTIONS:\n1 | A | t\n2 | B | u\n\nTAIL:\nother\n";
  CHECK(sectionLines(text, "ACTIONS:", "") ==
        std::vector<std::string>{"1 | A | t", "2 | B | u", "", "TAIL:", "other"});
  const std::string mem = "TASK CONTEXT:\n- one\n- two\nnot an entry\n";
  CHECK(sectionLines(mem, "TASK CONTEXT:", "- ") ==
        std::vector<std::string>{"- one", "- two"});
  CHECK(labeledValue("APP: Adobe Photoshop\nTITLE: x\n", "APP: ") ==
        "Adobe Photoshop");
  CHECK(labeledValue("nothing here", "APP: ") == "");
}

TEST_CASE("mock replies are a pure function of the request") {
  MockBackend mock;
  BackendRequest req;
  req.agentTag = AgentTag::record;
  req.promptText = PromptTemplates::builtin().record;
  req.imageRef = "shots/ps_003.png";

  const BackendResponse a = mock.complete(req);
  const BackendResponse b = mock.complete(req);
  CHECK(a.text == b.text);
  CHECK(a.usage == b.usage);
  CHECK(a.usage.promptTokens == whitespaceTokenCount(req.promptText));
  CHECK(a.usage.completionTokens == whitespaceTokenCount(a.text));
}

TEST_CASE("mock description embeds app, screenshot, and context size") {
  MockBackend mock;
  BackendRequest req;
  req.agentTag = AgentTag::record;
  req.promptText =
      "describe\nAPP: Adobe Photoshop\nTITLE: cover.psd\nSCREENSHOT: ps_003.png\n"
      "TASK CONTEXT:\n- earlier one\n- earlier two\n";
  req.imageRef = "shots/ps_003.png";
  const BackendResponse resp = mock.complete(req);
  CHECK(resp.text == "STATE[Adobe Photoshop|ps_003] ctx=2");

  // no prior context drops the counter
  req.promptText = "APP: Adobe Photoshop\nSCREENSHOT: ps_003.png\nTASK CONTEXT:\n(no prior context)\n";
  CHECK(mock.complete(req).text == "STATE[Adobe Photoshop|ps_003]");
}

TEST_CASE("mock rejects images on text-only channels") {
  MockBackend mock;
  BackendRequest req;
  req.agentTag = AgentTag::brain;
  req.promptText = "ACTIONS:\n1 | A | t\n";
  req.imageRef = "x.png";
  CHECK_THROWS_WITH(mock.complete(req),
                    doctest::Contains("image reference on a non-vision call"));
}

namespace {

struct StubServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  explicit StubServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~StubServer() {
    server.stop();
    thread.join();
  }

  HttpBackendOptions options() const {
    HttpBackendOptions opts;
    opts.baseUrl = "http://127.0.0.1:" + std::to_string(port);
    opts.timeoutMs = 5000;
    opts.retries = 2;
    return opts;
  }
};

}  // namespace

TEST_CASE("http backend passes usage through") {
  StubServer stub([](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    CHECK(body.at("model") == "qwen3:8b");
    CHECK(body.at("stream") == false);
    nlohmann::json reply = {
        {"choices", {{{"message", {{"content", "hello"}}}}}},
        {"usage", {{"prompt_tokens", 100}, {"completion_tokens", 20}}}};
    res.set_content(reply.dump(), "application/json");
  });

  HttpBackend backend(stub.options());
  BackendRequest req;
  req.agentTag = AgentTag::brain;
  req.promptText = "plan this";
  const BackendResponse resp = backend.complete(req);
  CHECK(resp.text == "hello");
  CHECK(resp.usage.total() == 120);
}

TEST_CASE("http backend retries transient failures") {
  std::atomic<int> hits{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    if (hits.fetch_add(1) == 0) {
      res.status = 500;
      res.set_content("boom", "text/plain");
      return;
    }
    nlohmann::json reply = {
        {"choices", {{{"message", {{"content", "ok"}}}}}},
        {"usage", {{"prompt_tokens", 1}, {"completion_tokens", 1}}}};
    res.set_content(reply.dump(), "application/json");
  });

  HttpBackend backend(stub.options());
  BackendRequest req;
  req.agentTag = AgentTag::summary;
  req.promptText = "x";
  CHECK(backend.complete(req).text == "ok");
  CHECK(hits.load() == 2);
}

TEST_CASE("http backend reports exhausted retries") {
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
  });
  HttpBackend backend(stub.options());
  BackendRequest req;
  req.agentTag = AgentTag::summary;
  req.promptText = "x";
  CHECK_THROWS_WITH(backend.complete(req),
                    doctest::Contains("backend call failed after 2 attempts"));
}

TEST_CASE("http backend flags malformed server replies") {
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"weird\":true}", "application/json");
  });
  HttpBackendOptions opts = stub.options();
  opts.retries = 1;
  HttpBackend backend(opts);
  BackendRequest req;
  req.agentTag = AgentTag::summary;
  req.promptText = "x";
  CHECK_THROWS_WITH(backend.complete(req), doctest::Contains("malformed server reply"));
}

TEST_CASE("http backend vision call attaches the image when present") {
  const auto dir = std::filesystem::temp_directory_path() / "focal_http_test";
  std::filesystem::create_directories(dir);
  const auto img = dir / "shot.png";
  writeTextFile(img, "PNGDATA");

  std::string seenContentType;
  StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    seenContentType = body.at("messages")[0].at("content").is_array()
                          ? "array"
                          : "string";
    nlohmann::json reply = {
        {"choices", {{{"message", {{"content", "seen"}}}}}},
        {"usage", {{"prompt_tokens", 2}, {"completion_tokens", 1}}}};
    res.set_content(reply.dump(), "application/json");
  });

  HttpBackend backend(stub.options());
  BackendRequest req;
  req.agentTag = AgentTag::record;
  req.promptText = "describe";
  req.imageRef = img.string();
  CHECK(backend.complete(req).text == "seen");
  CHECK(seenContentType == "array");

  // absent file falls back to text-only under the default policy
  req.imageRef = (dir / "missing.png").string();
  CHECK(backend.complete(req).text == "seen");
  CHECK(seenContentType == "string");

  // the strict policy makes it an error instead
  HttpBackendOptions strict = stub.options();
  strict.imagePolicy = ImagePolicy::require;
  HttpBackend strictBackend(strict);
  CHECK_THROWS_WITH(strictBackend.complete(req),
                    doctest::Contains("image file missing for vision call"));
  std::filesystem::remove_all(dir);
}
