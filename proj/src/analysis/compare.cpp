#include "powerbench/analysis/compare.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "powerbench/logger/csv.hpp"

namespace powerbench::analysis {

namespace {

constexpr double kPercentTolerance = 1e-9;

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::string opt_number(const std::optional<double>& v) { return v ? logger::format_number(*v) : std::string(); }

}  // namespace

const ComparedPoint* ComparisonReport::full_load() const {
  for (const auto& p : points)
    if (std::abs(p.percent - 100.0) <= kPercentTolerance) return &p;
  return nullptr;
}

ComparisonReport compare_campaigns(const std::vector<orchestrator::LoadPointResult>& a,
                                   const std::vector<orchestrator::LoadPointResult>& b, std::string label_a,
                                   std::string label_b) {
  ComparisonReport report;
  report.label_a = std::move(label_a);
  report.label_b = std::move(label_b);
  for (const auto& pa : a) {
    const auto it = std::find_if(b.begin(), b.end(), [&](const auto& pb) {
      return std::abs(pb.percent - pa.percent) <= kPercentTolerance;
    });
    if (it == b.end()) continue;
    ComparedPoint cp;
    cp.percent = pa.percent;
    cp.a = pa;
    cp.b = *it;
    if (pa.summary && it->summary) {
      cp.power_ratio = ratio(pa.summary->mean_power, it->summary->mean_power);
      cp.productivity_ratio = ratio(pa.productivity, it->productivity);
    }
    report.points.push_back(std::move(cp));
  }
  if (report.points.empty()) throw NoOverlap("the campaigns share no load point");
  std::sort(report.points.begin(), report.points.end(),
            [](const auto& x, const auto& y) { return x.percent < y.percent; });
  return report;
}

std::string comparison_csv_header() {
  return "percent,mean_power_a_W,mean_power_b_W,power_ratio,productivity_a,productivity_b,productivity_ratio";
}

void write_comparison_csv(const ComparisonReport& report, std::ostream& out,
                          const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# a=" << report.label_a << " b=" << report.label_b << " ratios are a/b\n";
  out << comparison_csv_header() << '\n';
  for (const auto& p : report.points) {
    out << logger::format_number(p.percent) << ','
        << (p.a.summary ? logger::format_number(p.a.summary->mean_power) : "") << ','
        << (p.b.summary ? logger::format_number(p.b.summary->mean_power) : "") << ',' << opt_number(p.power_ratio)
        << ',' << logger::format_number(p.a.productivity) << ',' << logger::format_number(p.b.productivity) << ','
        << opt_number(p.productivity_ratio) << '\n';
  }
}

void write_comparison_table(const ComparisonReport& report, std::ostream& out) {
  auto fmt_opt = [](const std::optional<double>& v, const char* spec) {
    return v ? fmt::format(fmt::runtime(spec), *v) : std::string("-");
  };
  out << fmt::format("a = {}, b = {}\n", report.label_a, report.label_b);
  out << fmt::format("{:>7} {:>11} {:>11} {:>9} {:>13} {:>13} {:>9}\n", "load[%]", "P a[W]", "P b[W]", "P a/b",
                     "req/J a", "req/J b", "prod a/b");
  for (const auto& p : report.points) {
    out << fmt::format("{:>7g} {:>11} {:>11} {:>9} {:>13.6g} {:>13.6g} {:>9}\n", p.percent,
                       p.a.summary ? fmt::format("{:.2f}", p.a.summary->mean_power) : "-",
                       p.b.summary ? fmt::format("{:.2f}", p.b.summary->mean_power) : "-",
                       fmt_opt(p.power_ratio, "{:.3f}"), p.a.productivity, p.b.productivity,
                       fmt_opt(p.productivity_ratio, "{:.3f}"));
  }
  if (const auto* full = report.full_load()) {
    out << fmt::format("full load: power a/b {}, productivity a/b {}\n", fmt_opt(full->power_ratio, "{:.3f}"),
                       fmt_opt(full->productivity_ratio, "{:.3f}"));
  } else {
    out << "full load: not shared\n";
  }
}

}  // namespace powerbench::analysis
