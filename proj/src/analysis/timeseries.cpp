#include "powerbench/analysis/timeseries.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "powerbench/logger/csv.hpp"

namespace powerbench::analysis {

std::vector<TimeseriesPoint> export_timeseries(const std::vector<ElectricalSample>& samples, std::size_t window) {
  if (samples.empty()) throw std::invalid_argument("cannot export an empty session");
  if (window == 0) throw std::invalid_argument("window must be at least 1");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].timestamp > samples[i - 1].timestamp))
      throw std::invalid_argument("sample timestamps must be strictly increasing");

  std::vector<TimeseriesPoint> out;
  out.reserve(samples.size() / window + 1);
  for (std::size_t begin = 0; begin < samples.size(); begin += window) {
    const std::size_t end = std::min(begin + window, samples.size());
    TimeseriesPoint p;
    p.t = samples[begin].timestamp;
    double energy = 0.0;
    for (std::size_t k = begin; k < end && k + 1 < samples.size(); ++k) {
      const double dt = samples[k + 1].timestamp - samples[k].timestamp;
      energy += samples[k].active_power * dt;
      p.span += dt;
    }
    if (p.span > 0.0) {
      p.power = energy / p.span;
    } else {
      p.power = samples[begin].active_power;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<TimeseriesPoint> export_timeseries(const SessionRecord& session, std::size_t window) {
  return export_timeseries(session.samples, window);
}

void write_timeseries_csv(const std::vector<TimeseriesPoint>& points, std::ostream& out,
                          const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "t_s,power_W\n";
  for (const auto& p : points) out << logger::format_number(p.t) << ',' << logger::format_number(p.power) << '\n';
}

}  // namespace powerbench::analysis
