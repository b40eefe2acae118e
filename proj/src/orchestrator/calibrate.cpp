#include "powerbench/orchestrator/calibrate.hpp"

#include <algorithm>
#include <optional>

#include <spdlog/spdlog.h>

namespace powerbench::orchestrator {

MaxLoadResult calibrate_max_load(LoadGenerator& generator, const CalibrationOptions& options,
                                 const logger::PowerLogger* logger) {
  if (logger && logger->mode() == logger::Mode::kLogging)
    throw logger::LoggerError(logger::LoggerError::Code::kAlreadyLogging, "calibration needs an idle logger");
  if (!(options.start_rate > 0.0) || !(options.probe_duration > 0.0) || options.max_probes < 1)
    throw std::invalid_argument("invalid calibration options");

  MaxLoadResult out;
  std::optional<Probe> best;
  std::optional<double> failed_rate;

  auto probe = [&](double rate) {
    Probe p;
    p.target_rate = rate;
    p.result = generator.generate(rate, options.probe_duration);
    p.sustained = p.result.achieved_rate >= options.threshold * rate;
    spdlog::info("probe {}: target {:.1f} req/s, achieved {:.1f} req/s{}", out.probes.size() + 1, rate,
                 p.result.achieved_rate, p.sustained ? "" : " (not sustained)");
    out.probes.push_back(p);
    if (out.probes.size() == 1 && p.result.request_count == 0)
      throw TargetUnreachable("first calibration probe completed no request");
    if (p.sustained && (!best || rate > best->target_rate)) best = p;
    return p.sustained;
  };

  // A failed probe's achieved rate is the best estimate of capacity, so it
  // is tried next; plain bisection takes over when it brings nothing new.
  std::optional<double> hint;
  const auto budget = static_cast<std::size_t>(options.max_probes);
  for (double rate = options.start_rate; out.probes.size() < budget; rate *= 2.0) {
    if (!probe(rate)) {
      failed_rate = rate;
      hint = out.probes.back().result.achieved_rate;
      break;
    }
  }

  // Stop once the bracket is within 1% of the failing rate.
  while (failed_rate && out.probes.size() < budget) {
    const double lo = best ? best->target_rate : 0.0;
    if (*failed_rate - lo <= 0.01 * *failed_rate) break;
    double next = 0.5 * (lo + *failed_rate);
    if (hint && *hint > lo + 0.01 * *failed_rate && *hint < *failed_rate) next = *hint;
    hint.reset();
    if (!probe(next)) {
      failed_rate = next;
      hint = out.probes.back().result.achieved_rate;
    }
  }

  if (best) {
    out.max_rate = std::min(best->target_rate, best->result.achieved_rate);
  } else {
    double top = 0.0;
    for (const auto& p : out.probes) top = std::max(top, p.result.achieved_rate);
    out.max_rate = top;
  }
  return out;
}

}  // namespace powerbench::orchestrator
