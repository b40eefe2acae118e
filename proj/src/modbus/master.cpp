#include "powerbench/modbus/master.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace powerbench::modbus {

namespace {

ResponseFrame transact(ByteStream& transport, std::uint8_t unit_id, const ReadBlock& block, double timeout) {
  const Bytes request = encode_read_request(unit_id, block.start, block.count);
  // Drop a late reply to an earlier, timed-out request.
  std::uint8_t stale[64];
  while (transport.read_some(stale, 0.0) > 0) {
  }
  transport.write(request);

  Bytes reply(3);
  read_exact(transport, reply, timeout);
  const std::size_t total = response_length(reply);
  reply.resize(total);
  read_exact(transport, std::span(reply).subspan(3), timeout);

  auto frame = decode_response(reply, unit_id);
  if (frame.registers.size() != block.count)
    throw ModbusError(Errc::kMalformed, "reply carries " + std::to_string(frame.registers.size()) +
                                            " registers, requested " + std::to_string(block.count));
  return frame;
}

}  // namespace

ElectricalSample read_sample(ByteStream& transport, const RegisterMap& map, std::uint8_t unit_id,
                             const Clock& clock, double response_timeout) {
  const double stamp = clock.now();
  std::map<std::uint16_t, std::uint16_t> registers;
  for (const auto& block : map.read_blocks()) {
    const auto frame = transact(transport, unit_id, block, response_timeout);
    for (std::uint16_t i = 0; i < block.count; ++i)
      registers[static_cast<std::uint16_t>(block.start + i)] = frame.registers[i];
  }
  auto sample = map.decode(registers);
  sample.timestamp = stamp;
  return sample;
}

PollStats poll(ByteStream& transport, const RegisterMap& map, Clock& clock, SampleSink& sink,
               const PollOptions& options, std::stop_token stop) {
  if (!(options.interval > 0.0)) throw std::invalid_argument("poll interval must be positive");
  if (options.failure_limit < 1) throw std::invalid_argument("failure limit must be at least 1");

  PollStats stats;
  const double start = clock.now();
  long long tick = 0;
  int consecutive_failures = 0;
  double last_stamp = -INFINITY;

  for (;;) {
    const double deadline = start + static_cast<double>(tick) * options.interval;
    if (options.until && deadline > *options.until + 1e-9) break;
    if (!clock.sleep_until(deadline, stop)) break;
    ++stats.ticks;

    try {
      auto sample = read_sample(transport, map, options.unit_id, clock, options.response_timeout);
      consecutive_failures = 0;
      if (sample.timestamp > last_stamp) {
        last_stamp = sample.timestamp;
        ++stats.samples;
        sink.on_sample(sample);
      }
    } catch (const ModbusError& e) {
      ++stats.gaps;
      sink.on_gap();
      if (++consecutive_failures >= options.failure_limit)
        throw ModbusError(Errc::kTransportLost, std::to_string(consecutive_failures) +
                                                    " consecutive failed reads, last: " + e.what());
    }

    // Skip deadlines already missed by a slow read instead of bursting.
    ++tick;
    const double now = clock.now();
    while (start + static_cast<double>(tick) * options.interval < now) ++tick;
  }
  return stats;
}

}  // namespace powerbench::modbus
