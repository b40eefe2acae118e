#include "powerbench/analysis/accuracy.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "powerbench/logger/csv.hpp"

namespace powerbench::analysis {

bool class_one_pass(double relative_energy_error) { return std::abs(relative_energy_error) <= kClassOneLimit; }

std::vector<AccuracyRow> accuracy_report(const std::vector<AccuracyInput>& inputs) {
  std::vector<AccuracyRow> rows;
  rows.reserve(inputs.size());
  for (const auto& in : inputs) {
    in.setting.validate();
    AccuracyRow row;
    row.label = in.label;
    row.duration = in.setting.duration;
    row.voltage = in.setting.voltage;
    row.current = in.setting.current;
    row.power_factor = in.setting.power_factor();
    row.load = in.setting.load;
    row.provided_energy = in.setting.reference_energy();

    if (in.session) {
      const auto summary = summarize(*in.session);
      row.measured_energy = summary.total_energy;
      row.power_variance = summary.power_variance;
      row.sample_count = summary.sample_count;
    } else if (in.reported_energy) {
      row.measured_energy = *in.reported_energy;
    } else {
      throw std::invalid_argument("accuracy input '" + in.label + "' has neither a session nor a reported energy");
    }

    row.relative_energy_error = relative_error(row.measured_energy, row.provided_energy);
    row.mean_power = row.measured_energy / row.duration;
    const double reference_power = row.voltage * row.current * row.power_factor;
    row.relative_power_error = relative_error(row.mean_power, reference_power);
    row.pass = class_one_pass(row.relative_energy_error);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string power_factor_text(double power_factor, emulator::LoadCharacter load) {
  const std::string pf = fmt::format("{:g}", power_factor);
  switch (load) {
    case emulator::LoadCharacter::kInductive:
      return pf + " (ind.)";
    case emulator::LoadCharacter::kCapacitive:
      return pf + " (cap.)";
    case emulator::LoadCharacter::kResistive:
      break;
  }
  return pf;
}

std::string accuracy_csv_header() {
  return "label,time_s,voltage_V,current_A,power_factor,load,provided_energy_J,measured_energy_J,"
         "relative_energy_error,mean_power_W,relative_power_error,power_variance_W2,samples,class1";
}

void write_accuracy_csv(const std::vector<AccuracyRow>& rows, std::ostream& out,
                        const std::vector<std::string>& comments) {
  using logger::format_number;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << accuracy_csv_header() << '\n';
  for (const auto& r : rows) {
    out << r.label << ',' << format_number(r.duration) << ',' << format_number(r.voltage) << ','
        << format_number(r.current) << ',' << format_number(r.power_factor) << ',' << emulator::to_string(r.load)
        << ',' << format_number(r.provided_energy) << ',' << format_number(r.measured_energy) << ','
        << format_number(r.relative_energy_error) << ',' << format_number(r.mean_power) << ','
        << format_number(r.relative_power_error) << ',' << (r.power_variance ? format_number(*r.power_variance) : "")
        << ',' << r.sample_count << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

void write_accuracy_table(const std::vector<AccuracyRow>& rows, std::ostream& out) {
  out << fmt::format("{:<14} {:>8} {:>6} {:>6} {:>12} {:>12} {:>12} {:>9} {:>9} {:>9} {:>9}  {}\n", "No", "Time[s]",
                     "U[V]", "I[A]", "cos phi", "Provided[J]", "Measured[J]", "E err", "P mean[W]", "P err",
                     "P var", "class 1");
  for (const auto& r : rows) {
    out << fmt::format("{:<14} {:>8.2f} {:>6g} {:>6g} {:>12} {:>12.2f} {:>12.2f} {:>8.2f}% {:>9.1f} {:>8.2f}% {:>9}  {}\n",
                       r.label, r.duration, r.voltage, r.current, power_factor_text(r.power_factor, r.load),
                       r.provided_energy, r.measured_energy, r.relative_energy_error * 100.0, r.mean_power,
                       r.relative_power_error * 100.0,
                       r.power_variance ? fmt::format("{:.4f}", *r.power_variance) : std::string("-"),
                       r.pass ? "PASS" : "FAIL");
  }
}

}  // namespace powerbench::analysis
