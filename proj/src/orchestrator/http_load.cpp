#include "powerbench/orchestrator/http_load.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <mutex>
#include <random>
#include <regex>
#include <stdexcept>
#include <thread>
#include <vector>

#include <httplib.h>

namespace powerbench::orchestrator {

namespace {

using steady = std::chrono::steady_clock;

auto to_duration(double seconds) {
  return std::chrono::duration_cast<steady::duration>(std::chrono::duration<double>(seconds));
}

void set_timeouts(httplib::Client& cli, double timeout) {
  const auto usec = static_cast<long long>(timeout * 1e6);
  cli.set_connection_timeout(static_cast<time_t>(usec / 1000000), static_cast<time_t>(usec % 1000000));
  cli.set_read_timeout(static_cast<time_t>(usec / 1000000), static_cast<time_t>(usec % 1000000));
  cli.set_write_timeout(static_cast<time_t>(usec / 1000000), static_cast<time_t>(usec % 1000000));
}

}  // namespace

HttpTarget HttpTarget::parse(const std::string& url) {
  static const std::regex re(R"(^http://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw std::invalid_argument("unsupported target URL '" + url + "'");
  HttpTarget t;
  t.host = m[1];
  t.port = m[2].matched ? std::stoi(m[2]) : 80;
  t.path = m[3].matched ? std::string(m[3]) : "/";
  return t;
}

GeneratorResult builtin_http_generate(const std::string& target_url, double rate, double duration,
                                      const HttpLoadOptions& options) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be non-negative");
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  const auto target = HttpTarget::parse(target_url);

  const auto start = steady::now();
  const auto end = start + to_duration(duration);
  if (rate == 0.0) {
    std::this_thread::sleep_until(end);
    return {};
  }

  const long long total = static_cast<long long>(std::floor(rate * duration + 1e-9));
  std::atomic<long long> next{0};
  std::atomic<long long> ok{0};
  std::atomic<long long> failed{0};

  auto worker = [&] {
    httplib::Client cli(target.host, target.port);
    cli.set_keep_alive(false);
    cli.set_tcp_nodelay(true);
    set_timeouts(cli, options.timeout);
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= total) return;
      const auto due = start + to_duration(static_cast<double>(i) / rate);
      // A slot whose window has closed is offered load that never went out.
      if (steady::now() >= end) {
        failed += 1;
        continue;
      }
      std::this_thread::sleep_until(due);
      auto res = cli.Get(target.path);
      if (res && res->status >= 200 && res->status < 300) ok += 1;
      else failed += 1;
    }
  };

  // Enough connections to keep the schedule open-loop even when every
  // request runs into the timeout.
  const int needed = static_cast<int>(std::ceil(rate * (options.timeout + 0.05)));
  const int n = std::clamp(needed, std::max(1, options.connections), std::max(256, options.connections));
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) workers.emplace_back(worker);
  workers.clear();  // joins
  std::this_thread::sleep_until(end);

  GeneratorResult r;
  r.request_count = ok;
  r.errors = failed;
  r.achieved_rate = static_cast<double>(r.request_count) / duration;
  return r;
}

struct StubHttpServer::Impl {
  StubServerOptions options;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::mutex mu;
  std::deque<steady::time_point> window;
  std::mt19937_64 rng;
  std::atomic<long long> served{0};
  std::atomic<long long> rejected{0};

  explicit Impl(StubServerOptions o) : options(o), rng(o.seed) {}

  bool admit() {
    if (options.rate_cap <= 0.0) return true;
    std::lock_guard lock(mu);
    const auto now = steady::now();
    while (!window.empty() && now - window.front() >= std::chrono::seconds(1)) window.pop_front();
    if (static_cast<double>(window.size()) + 1.0 > options.rate_cap) return false;
    window.push_back(now);
    return true;
  }

  double jitter() {
    if (options.jitter <= 0.0) return 0.0;
    std::lock_guard lock(mu);
    return std::uniform_real_distribution<double>(0.0, options.jitter)(rng);
  }
};

StubHttpServer::StubHttpServer(StubServerOptions options) : impl_(std::make_unique<Impl>(options)) {}

StubHttpServer::~StubHttpServer() { stop(); }

void StubHttpServer::start() {
  auto& s = impl_->server;
  s.new_task_queue = [] { return new httplib::ThreadPool(64); };
  s.set_keep_alive_max_count(1000000);
  s.set_tcp_nodelay(true);
  s.Get(".*", [impl = impl_.get()](const httplib::Request&, httplib::Response& res) {
    const double delay = impl->options.response_delay + impl->jitter();
    if (delay > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    if (impl->options.fail_all) {
      res.status = 500;
      res.set_content("failure\n", "text/plain");
      impl->rejected += 1;
      return;
    }
    if (!impl->admit()) {
      res.status = 503;
      res.set_content("over capacity\n", "text/plain");
      impl->rejected += 1;
      return;
    }
    impl->served += 1;
    res.set_content("ok\n", "text/plain");
  });
  impl_->port = s.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw std::runtime_error("stub server cannot bind");
  impl_->thread = std::thread([&s] { s.listen_after_bind(); });
  s.wait_until_ready();
}

void StubHttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int StubHttpServer::port() const { return impl_->port; }
std::string StubHttpServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/"; }
long long StubHttpServer::served() const { return impl_->served; }
long long StubHttpServer::rejected() const { return impl_->rejected; }

}  // namespace powerbench::orchestrator
