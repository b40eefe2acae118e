#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "powerbench/orchestrator/plan.hpp"

namespace powerbench::orchestrator {

/// Campaign manifest: one CSV row per ladder point.
///
///   percent,label,target_rate,achieved_rate,request_count,errors,duration_s,
///   mean_power_W,power_variance_W2,total_energy_J,sample_count,
///   productivity_req_per_J,status,csv_path
///
/// Summary columns are empty for points without a summary.
std::string manifest_header();

void write_manifest(const std::vector<LoadPointResult>& points, std::ostream& out,
                    const std::vector<std::string>& comments = {});
void write_manifest(const std::vector<LoadPointResult>& points, const std::filesystem::path& path,
                    const std::vector<std::string>& comments = {});

std::vector<LoadPointResult> read_manifest(std::istream& in);
std::vector<LoadPointResult> read_manifest(const std::filesystem::path& path);

}  // namespace powerbench::orchestrator
