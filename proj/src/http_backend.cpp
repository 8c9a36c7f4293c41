#include "focal/http_backend.hpp"

#include <filesystem>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

using nlohmann::json;

namespace {

json buildBody(const BackendRequest& request, const HttpBackendOptions& options) {
  json message{{"role", "user"}};

  bool attachImage = false;
  if (request.imageRef) {
    bool exists = std::filesystem::exists(*request.imageRef);
    if (!exists && options.imagePolicy == ImagePolicy::require)
      throw BackendError("image file missing for vision call: " + *request.imageRef);
    attachImage = exists;
  }

  if (attachImage) {
    std::string encoded = base64Encode(readTextFile(*request.imageRef));
    message["content"] = json::array({
        json{{"type", "text"}, {"text", request.promptText}},
        json{{"type", "image_url"},
             {"image_url", json{{"url", "data:image/png;base64," + encoded}}}},
    });
  } else {
    message["content"] = request.promptText;
  }

  return json{
      {"model", options.model},
      {"messages", json::array({message})},
      {"stream", false},
  };
}

BackendResponse parseReply(const std::string& body) {
  json reply;
  try {
    reply = json::parse(body);
  } catch (const json::exception&) {
    throw BackendError("malformed server reply: not valid JSON");
  }
  BackendResponse response;
  try {
    response.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw BackendError("malformed server reply: missing choices/message/content");
  }
  if (reply.contains("usage")) {
    const json& usage = reply["usage"];
    response.usage.promptTokens = usage.value("prompt_tokens", std::int64_t{0});
    response.usage.completionTokens = usage.value("completion_tokens", std::int64_t{0});
  }
  return response;
}

}  // namespace

BackendResponse HttpBackend::complete(const BackendRequest& request) {
  if (request.imageRef && request.agentTag != AgentTag::record)
    throw BackendError("image reference on a non-vision call");

  json body = buildBody(request, options_);
  std::string payload = body.dump();

  int attempts = options_.retries < 1 ? 1 : options_.retries;
  std::string lastError;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    httplib::Client client(options_.baseUrl);
    client.set_connection_timeout(options_.timeoutMs / 1000,
                                  (options_.timeoutMs % 1000) * 1000);
    client.set_read_timeout(options_.timeoutMs / 1000, (options_.timeoutMs % 1000) * 1000);
    client.set_write_timeout(options_.timeoutMs / 1000, (options_.timeoutMs % 1000) * 1000);

    auto result = client.Post(options_.path, payload, "application/json");
    if (!result) {
      lastError = "transport failure: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      lastError = "server status " + std::to_string(result->status);
      continue;
    }
    try {
      return parseReply(result->body);
    } catch (const BackendError& e) {
      lastError = e.what();
      continue;
    }
  }
  throw BackendError("backend call failed after " + std::to_string(attempts) +
                     " attempts: " + lastError);
}

}  // namespace focal
