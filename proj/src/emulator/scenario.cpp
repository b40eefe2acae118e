#include "powerbench/emulator/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "powerbench/config.hpp"

namespace powerbench::emulator {

namespace {

LoadCharacter parse_load(const ConfigNode& node, const std::string& key) {
  const auto text = node.get_or<std::string>(key, "resistive");
  auto lc = load_character_from_string(text);
  if (!lc) node.at(key).fail("load must be resistive, inductive or capacitive, got '" + text + "'");
  return *lc;
}

CalibratorSetting parse_calibrator(const ConfigNode& n) {
  CalibratorSetting s;
  s.voltage = n.get<double>("voltage");
  s.current = n.get<double>("current");
  s.duration = n.get<double>("duration");
  s.load = parse_load(n, "load");
  if (n.has("phase_angle_deg")) {
    s.phase_angle_deg = n.get<double>("phase_angle_deg");
  } else {
    const double pf = n.get_or<double>("power_factor", 1.0);
    if (!(pf >= 0.0 && pf <= 1.0)) n.at("power_factor").fail("power_factor must lie within [0, 1]");
    const double magnitude = std::acos(pf) * 180.0 / std::numbers::pi;
    s.phase_angle_deg = s.load == LoadCharacter::kCapacitive ? -magnitude : magnitude;
    if (s.load == LoadCharacter::kResistive && pf != 1.0) n.at("power_factor").fail("a resistive load has power_factor 1");
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
  return s;
}

LoadProfile parse_profile(const ConfigNode& n) {
  LoadProfile p;
  p.frequency = n.get_or<double>("frequency", 50.0);
  const auto steps = n.at("steps");
  if (!steps.is_sequence()) steps.fail("'steps' must be a list");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto st = steps[i];
    ProfileStep step;
    step.duration = st.get_or<double>("duration", 1.0);
    step.voltage = st.get_or<double>("voltage", 230.0);
    step.current = st.get<double>("current");
    step.power_factor = st.get_or<double>("power_factor", 1.0);
    step.load = parse_load(st, "load");
    p.steps.push_back(step);
  }
  if (auto lm = n.find("load_map")) {
    for (std::size_t i = 0; i < lm->size(); ++i) {
      const auto pt = (*lm)[i];
      p.load_map.push_back({pt.get<double>("percent"), pt.get<double>("current"), pt.get_or<double>("power_factor", 1.0)});
    }
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
  return p;
}

Scenario from_config(const ConfigNode& root) {
  Scenario sc;
  sc.name = root.get_or<std::string>("name", "");
  if (auto c = root.find("calibrator")) {
    sc.calibrator = parse_calibrator(*c);
    sc.profile = LoadProfile::from_setting(*sc.calibrator);
    if (root.has("profile")) root.at("profile").fail("give either 'calibrator' or 'profile', not both");
  } else if (auto p = root.find("profile")) {
    sc.profile = parse_profile(*p);
  } else {
    root.fail("scenario needs a 'calibrator' or a 'profile' section");
  }
  if (auto e = root.find("error")) {
    sc.error.gain_error = e->get_or<double>("gain", 0.0);
    sc.error.noise_sd = e->get_or<double>("noise_sd", 0.0);
    sc.error.starting_current_threshold = e->get_or<double>("starting_current", 0.095);
    sc.error.seed = e->get_or<std::uint64_t>("seed", 1);
    try {
      sc.error.validate();
    } catch (const DomainError& ex) {
      e->fail(ex.what());
    }
  }
  const int unit = root.get_or<int>("unit_id", 1);
  if (unit < 1 || unit > 247) root.at("unit_id").fail("unit_id must be within 1..247");
  sc.unit_id = static_cast<std::uint8_t>(unit);
  if (auto r = root.find("reference")) {
    auto opt = [&](const char* key) -> std::optional<double> {
      if (auto v = r->find(key)) return v->as<double>();
      return std::nullopt;
    };
    sc.reference.provided_energy = opt("provided_energy");
    sc.reference.measured_energy = opt("measured_energy");
    sc.reference.relative_error = opt("relative_error");
    sc.reference.mean_power = opt("mean_power");
    sc.reference.power_variance = opt("power_variance");
  }
  return sc;
}

}  // namespace

Scenario Scenario::load_file(const std::filesystem::path& path) {
  auto sc = from_config(ConfigNode::load_file(path));
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

Scenario Scenario::load_string(const std::string& yaml, const std::string& source) {
  return from_config(ConfigNode::load_string(yaml, source));
}

std::filesystem::path bundled_scenario_dir() {
  return std::filesystem::path(POWERBENCH_DATA_DIR) / "scenarios";
}

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) return name_or_path;
  for (const auto& entry : fs::recursive_directory_iterator(bundled_scenario_dir())) {
    if (!entry.is_regular_file() || entry.path().extension() != ".yaml") continue;
    if (entry.path().stem() == name_or_path) return entry.path();
  }
  throw ConfigError("no scenario file or bundled scenario named '" + name_or_path + "'");
}

std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError(dir.string() + ": not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".yaml") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace powerbench::emulator
