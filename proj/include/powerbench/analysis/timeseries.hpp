#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "powerbench/metrology.hpp"

namespace powerbench::analysis {

struct TimeseriesPoint {
  double t = 0.0;      // first sample of the window, s
  double power = 0.0;  // W
  double span = 0.0;   // s covered by the window under the rectangle rule
};

/// Plot-ready (t, P) pairs. With window > 1 every `window` consecutive
/// samples collapse into one point whose power is the time-weighted mean
/// over the window's span (up to the next window's first sample), so
/// sum(power * span) is the session energy. A trailing single sample with
/// no span keeps its own power. Throws std::invalid_argument on an empty
/// session or window 0.
std::vector<TimeseriesPoint> export_timeseries(const SessionRecord& session, std::size_t window = 1);
std::vector<TimeseriesPoint> export_timeseries(const std::vector<ElectricalSample>& samples, std::size_t window = 1);

/// "t_s,power_W"
void write_timeseries_csv(const std::vector<TimeseriesPoint>& points, std::ostream& out,
                          const std::vector<std::string>& comments = {});

}  // namespace powerbench::analysis
