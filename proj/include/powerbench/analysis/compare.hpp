#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "powerbench/orchestrator/plan.hpp"

namespace powerbench::analysis {

class NoOverlap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComparedPoint {
  double percent = 0.0;
  orchestrator::LoadPointResult a;
  orchestrator::LoadPointResult b;
  /// a / b; absent when either side lacks a summary or the divisor is 0.
  std::optional<double> power_ratio;
  std::optional<double> productivity_ratio;
};

struct ComparisonReport {
  std::string label_a = "a";
  std::string label_b = "b";
  std::vector<ComparedPoint> points;  // shared percentages, ascending

  /// The 100% point, if both campaigns have it.
  const ComparedPoint* full_load() const;
};

/// Pairs points by load percentage. Throws NoOverlap when none is shared.
ComparisonReport compare_campaigns(const std::vector<orchestrator::LoadPointResult>& a,
                                   const std::vector<orchestrator::LoadPointResult>& b, std::string label_a = "a",
                                   std::string label_b = "b");

std::string comparison_csv_header();
void write_comparison_csv(const ComparisonReport& report, std::ostream& out,
                          const std::vector<std::string>& comments = {});
void write_comparison_table(const ComparisonReport& report, std::ostream& out);

}  // namespace powerbench::analysis
