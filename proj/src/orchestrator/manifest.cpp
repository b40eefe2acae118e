#include "powerbench/orchestrator/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "powerbench/logger/csv.hpp"

namespace powerbench::orchestrator {

namespace {

constexpr std::size_t kColumns = 14;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double num(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("manifest line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

}  // namespace

std::string manifest_header() {
  return "percent,label,target_rate,achieved_rate,request_count,errors,duration_s,mean_power_W,power_variance_W2,"
         "total_energy_J,sample_count,productivity_req_per_J,status,csv_path";
}

void write_manifest(const std::vector<LoadPointResult>& points, std::ostream& out,
                    const std::vector<std::string>& comments) {
  using logger::format_number;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << manifest_header() << '\n';
  for (const auto& p : points) {
    out << format_number(p.percent) << ',' << p.label << ',' << format_number(p.target_rate) << ','
        << format_number(p.achieved_rate) << ',' << p.request_count << ',' << p.errors << ',';
    if (p.summary) {
      out << format_number(p.summary->duration) << ',' << format_number(p.summary->mean_power) << ','
          << format_number(p.summary->power_variance) << ',' << format_number(p.summary->total_energy) << ','
          << p.summary->sample_count << ',' << format_number(p.productivity) << ',';
    } else {
      out << ",,,,,,";
    }
    out << to_string(p.status) << ',' << p.csv_path << '\n';
  }
}

void write_manifest(const std::vector<LoadPointResult>& points, const std::filesystem::path& path,
                    const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_manifest(points, out, comments);
}

std::vector<LoadPointResult> read_manifest(std::istream& in) {
  std::vector<LoadPointResult> points;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != manifest_header()) throw std::runtime_error("manifest line " + std::to_string(line_no) + ": unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != kColumns)
      throw std::runtime_error("manifest line " + std::to_string(line_no) + ": expected 14 columns");
    LoadPointResult p;
    p.percent = num(f[0], line_no);
    p.label = f[1];
    p.target_rate = num(f[2], line_no);
    p.achieved_rate = num(f[3], line_no);
    p.request_count = static_cast<long long>(num(f[4], line_no));
    p.errors = static_cast<long long>(num(f[5], line_no));
    if (!f[6].empty()) {
      SessionSummary s;
      s.duration = num(f[6], line_no);
      s.mean_power = num(f[7], line_no);
      s.power_variance = num(f[8], line_no);
      s.total_energy = num(f[9], line_no);
      s.sample_count = static_cast<std::size_t>(num(f[10], line_no));
      p.summary = s;
      p.productivity = num(f[11], line_no);
    }
    const auto status = point_status_from_string(f[12]);
    if (!status) throw std::runtime_error("manifest line " + std::to_string(line_no) + ": unknown status '" + f[12] + "'");
    p.status = *status;
    p.csv_path = f[13];
    points.push_back(std::move(p));
  }
  if (!header_seen) throw std::runtime_error("manifest has no header");
  return points;
}

std::vector<LoadPointResult> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_manifest(in);
}

}  // namespace powerbench::orchestrator
