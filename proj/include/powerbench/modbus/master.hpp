#pragma once

#include <cstdint>
#include <optional>
#include <stop_token>

#include "powerbench/clock.hpp"
#include "powerbench/metrology.hpp"
#include "powerbench/modbus/register_map.hpp"
#include "powerbench/modbus/transport.hpp"

namespace powerbench::modbus {

inline constexpr double kDefaultResponseTimeout = 0.5;

/// Reads every mapped quantity, one request per coalesced block, and
/// stamps the result with `clock.now()` taken when the first request goes out.
ElectricalSample read_sample(ByteStream& transport, const RegisterMap& map, std::uint8_t unit_id,
                             const Clock& clock, double response_timeout = kDefaultResponseTimeout);

/// Receives polled samples. Called from the polling context.
class SampleSink {
 public:
  virtual ~SampleSink() = default;
  virtual void on_sample(const ElectricalSample& sample) = 0;
  virtual void on_gap() {}
};

struct PollOptions {
  std::uint8_t unit_id = 1;
  double interval = 1.0;
  double response_timeout = kDefaultResponseTimeout;
  int failure_limit = 5;
  /// Stop once the next deadline would fall after this clock time.
  std::optional<double> until;
};

struct PollStats {
  long long ticks = 0;
  long long samples = 0;
  long long gaps = 0;
};

/// Fixed-rate poll loop: deadlines are start + k * interval on `clock`, so
/// lateness never accumulates. A failed read emits nothing and counts a gap;
/// `failure_limit` consecutive failures throw ModbusError{kTransportLost}.
PollStats poll(ByteStream& transport, const RegisterMap& map, Clock& clock, SampleSink& sink,
               const PollOptions& options, std::stop_token stop = {});

}  // namespace powerbench::modbus
