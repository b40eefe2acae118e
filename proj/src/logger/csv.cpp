#include "powerbench/logger/csv.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace powerbench::logger {

std::string csv_header() {
  std::string line;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) line += ',';
    line += kCsvColumns[i];
  }
  return line;
}

std::string format_number(double value) {
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  std::string text(buf, ptr);
  if (text.find_first_of(".ni") == std::string::npos) text += ".0";  // "nan"/"inf" stay as they are
  return text;
}

std::string csv_row(const ElectricalSample& s) {
  const double fields[] = {s.timestamp,      s.voltage,        s.current,
                           s.frequency,      s.power_factor,   s.active_power,
                           s.reactive_power, s.apparent_power, s.active_energy_total,
                           s.reactive_energy_total};
  std::string line;
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    if (i) line += ',';
    line += format_number(fields[i]);
  }
  return line;
}

void write_csv(const SessionRecord& session, std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << csv_header() << '\n';
  for (const auto& s : session.samples) out << csv_row(s) << '\n';
}

void write_csv(const SessionRecord& session, const std::filesystem::path& destination,
               const std::vector<std::string>& comments) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + destination.string() + " for writing");
  write_csv(session, out, comments);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + destination.string());
}

namespace {

double parse_field(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::vector<ElectricalSample> parse_csv(std::istream& in) {
  std::vector<ElectricalSample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != csv_header()) throw std::runtime_error("line " + std::to_string(line_no) + ": unexpected header");
      header_seen = true;
      continue;
    }
    double fields[kCsvColumns.size()];
    std::size_t col = 0;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      if (col >= kCsvColumns.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": too many columns");
      fields[col++] = parse_field(rest.substr(0, comma), line_no);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (col != kCsvColumns.size()) throw std::runtime_error("line " + std::to_string(line_no) + ": too few columns");
    samples.push_back({fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], fields[6], fields[7],
                       fields[8], fields[9]});
  }
  if (!header_seen) throw std::runtime_error("missing CSV header");
  return samples;
}

std::vector<ElectricalSample> parse_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void CsvSessionWriter::open(const std::filesystem::path& path, const std::vector<std::string>& comments) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot create " + path.string());
  path_ = path;
  for (const auto& c : comments) out_ << "# " << c << '\n';
  out_ << csv_header() << '\n';
  out_.flush();
}

void CsvSessionWriter::append(const ElectricalSample& sample) {
  out_ << csv_row(sample) << '\n';
  out_.flush();
}

void CsvSessionWriter::close() {
  if (out_.is_open()) out_.close();
}

}  // namespace powerbench::logger
