#pragma once

#include <string>

#include "focal/backend.hpp"

namespace focal {

enum class ImagePolicy {
  attach,   // attach when the file exists, otherwise send text only
  require,  // missing image file is an error
};

struct HttpBackendOptions {
  std::string baseUrl = "http://127.0.0.1:11434";
  std::string path = "/v1/chat/completions";
  std::string model = "qwen3:8b";
  int timeoutMs = 120000;
  int retries = 2;  // total attempts per call
  ImagePolicy imagePolicy = ImagePolicy::attach;
};

/// Chat-completion client. Sends one user message per call; vision calls
/// attach the screenshot as a base64 data URI. Token usage comes from the
/// server's usage block.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {}

  BackendResponse complete(const BackendRequest& request) override;

  const HttpBackendOptions& options() const { return options_; }

 private:
  HttpBackendOptions options_;
};

}  // namespace focal
