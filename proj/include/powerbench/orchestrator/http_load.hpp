#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace powerbench::orchestrator {

struct GeneratorResult {
  long long request_count = 0;  // completed with a 2xx status
  long long errors = 0;         // failed, timed out, non-2xx or never sent in time
  double achieved_rate = 0.0;   // request_count / duration
};

/// Anything that can offer load at a given rate for a given time.
class LoadGenerator {
 public:
  virtual ~LoadGenerator() = default;
  virtual GeneratorResult generate(double rate, double duration) = 0;
};

struct HttpTarget {
  std::string host;
  int port = 80;
  std::string path = "/";

  /// "http://host[:port][/path]"
  static HttpTarget parse(const std::string& url);
};

struct HttpLoadOptions {
  double timeout = 1.0;  // per request, seconds
  int connections = 4;
};

/// Open-loop constant-rate GET schedule: request i is due at start + i / rate,
/// whether or not earlier ones have finished. Rate 0 just waits out the duration.
GeneratorResult builtin_http_generate(const std::string& target_url, double rate, double duration,
                                      const HttpLoadOptions& options = {});

class HttpLoadGenerator final : public LoadGenerator {
 public:
  HttpLoadGenerator(std::string target_url, HttpLoadOptions options = {})
      : target_(std::move(target_url)), options_(options) {}
  GeneratorResult generate(double rate, double duration) override {
    return builtin_http_generate(target_, rate, duration, options_);
  }

 private:
  std::string target_;
  HttpLoadOptions options_;
};

struct StubServerOptions {
  double rate_cap = 0.0;         // accepted requests per sliding second, 0 = unlimited
  double response_delay = 0.0;   // seconds added to every response
  bool fail_all = false;         // answer 500 to everything
  double jitter = 0.0;           // uniform extra delay in [0, jitter] seconds
  std::uint64_t seed = 1;
};

/// Minimal HTTP system-under-test stand-in on loopback. Requests over the
/// rate cap are answered 503.
class StubHttpServer {
 public:
  explicit StubHttpServer(StubServerOptions options = {});
  ~StubHttpServer();
  StubHttpServer(const StubHttpServer&) = delete;
  StubHttpServer& operator=(const StubHttpServer&) = delete;

  /// Binds an ephemeral loopback port and starts serving.
  void start();
  void stop();
  int port() const;
  std::string url() const;
  long long served() const;
  long long rejected() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace powerbench::orchestrator
