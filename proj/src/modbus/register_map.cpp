#include "powerbench/modbus/register_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "powerbench/config.hpp"
#include "powerbench/modbus/frame.hpp"

namespace powerbench::modbus {

namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "voltage",        "current",        "frequency",     "power_factor",   "active_power",
    "reactive_power", "apparent_power", "active_energy", "reactive_energy",
};

double& field(ElectricalSample& s, Quantity q) {
  switch (q) {
    case Quantity::kVoltage: return s.voltage;
    case Quantity::kCurrent: return s.current;
    case Quantity::kFrequency: return s.frequency;
    case Quantity::kPowerFactor: return s.power_factor;
    case Quantity::kActivePower: return s.active_power;
    case Quantity::kReactivePower: return s.reactive_power;
    case Quantity::kApparentPower: return s.apparent_power;
    case Quantity::kActiveEnergy: return s.active_energy_total;
    case Quantity::kReactiveEnergy: return s.reactive_energy_total;
  }
  throw std::logic_error("unknown quantity");
}

double field(const ElectricalSample& s, Quantity q) { return field(const_cast<ElectricalSample&>(s), q); }

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::string_view to_string(Quantity q) { return kNames[static_cast<std::size_t>(q)]; }

std::optional<Quantity> quantity_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Quantity>(i);
  return std::nullopt;
}

Scale Scale::parse(std::string_view text) {
  Scale s;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    s.numerator = parse_int(text.substr(0, slash));
    s.denominator = parse_int(text.substr(slash + 1));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw std::invalid_argument("too many decimals in scale");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    s.numerator = w * den + f;
    s.denominator = den;
  } else {
    s.numerator = parse_int(text);
  }
  if (s.numerator <= 0 || s.denominator <= 0) throw std::invalid_argument("scale must be positive");
  const auto g = std::gcd(s.numerator, s.denominator);
  s.numerator /= g;
  s.denominator /= g;
  return s;
}

double Scale::apply(std::int64_t raw) const {
  return static_cast<double>(raw) * static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::int64_t Scale::to_raw(double value) const {
  return std::llround(value * static_cast<double>(denominator) / static_cast<double>(numerator));
}

RegisterMap::RegisterMap(std::vector<RegisterEntry> entries) : entries_(std::move(entries)) {
  for (auto q : kAllQuantities) {
    const auto n = std::count_if(entries_.begin(), entries_.end(), [q](const auto& e) { return e.quantity == q; });
    if (n != 1)
      throw std::invalid_argument("register map must define '" + std::string(to_string(q)) + "' exactly once");
  }
  for (const auto& e : entries_) {
    if (e.words != 1 && e.words != 2) throw std::invalid_argument("register width must be 1 or 2 words");
    if (e.scale.numerator <= 0 || e.scale.denominator <= 0) throw std::invalid_argument("scale must be positive");
    if (e.end() > 0x10000u) throw std::invalid_argument("register range exceeds address space");
  }
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.address < b.address; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].address < sorted[i - 1].end())
      throw std::invalid_argument("registers of '" + std::string(to_string(sorted[i - 1].quantity)) + "' and '" +
                                  std::string(to_string(sorted[i].quantity)) + "' overlap");
}

RegisterMap RegisterMap::project_default() {
  auto frac = [](std::int64_t den) { return Scale{1, den}; };
  return RegisterMap({
      {Quantity::kVoltage, 0x0000, 1, frac(10), false, "V"},
      {Quantity::kCurrent, 0x0001, 1, frac(1000), false, "A"},
      {Quantity::kFrequency, 0x0002, 1, frac(100), false, "Hz"},
      {Quantity::kPowerFactor, 0x0003, 1, frac(1000), true, ""},
      {Quantity::kActivePower, 0x0004, 2, frac(10), true, "W"},
      {Quantity::kReactivePower, 0x0006, 2, frac(10), true, "var"},
      {Quantity::kApparentPower, 0x0008, 2, frac(10), false, "VA"},
      {Quantity::kActiveEnergy, 0x000A, 2, Scale{100, 1}, false, "J"},
      {Quantity::kReactiveEnergy, 0x000C, 2, Scale{100, 1}, false, "var*s"},
  });
}

namespace {

RegisterMap from_config(const ConfigNode& root) {
  const auto regs = root.at("registers");
  if (!regs.is_sequence()) regs.fail("'registers' must be a list");
  std::vector<RegisterEntry> entries;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    const auto node = regs[i];
    RegisterEntry e;
    const auto name = node.get<std::string>("quantity");
    const auto q = quantity_from_string(name);
    if (!q) node.at("quantity").fail("unknown quantity '" + name + "'");
    e.quantity = *q;
    const auto address = node.get<long>("address");
    if (address < 0 || address > 0xFFFF) node.at("address").fail("address out of 16-bit range");
    e.address = static_cast<std::uint16_t>(address);
    const auto words = node.get_or<int>("words", 1);
    if (words != 1 && words != 2) node.at("words").fail("words must be 1 or 2");
    e.words = static_cast<std::uint8_t>(words);
    try {
      e.scale = Scale::parse(node.get_or<std::string>("scale", "1"));
    } catch (const std::invalid_argument& ex) {
      node.at("scale").fail(ex.what());
    }
    e.is_signed = node.get_or<bool>("signed", false);
    e.unit = node.get_or<std::string>("unit", "");
    entries.push_back(e);
  }
  try {
    return RegisterMap(std::move(entries));
  } catch (const std::invalid_argument& ex) {
    regs.fail(ex.what());
  }
}

}  // namespace

RegisterMap RegisterMap::load_file(const std::filesystem::path& path) {
  return from_config(ConfigNode::load_file(path));
}

RegisterMap RegisterMap::load_string(const std::string& yaml, const std::string& source) {
  return from_config(ConfigNode::load_string(yaml, source));
}

const RegisterEntry& RegisterMap::entry(Quantity q) const {
  for (const auto& e : entries_)
    if (e.quantity == q) return e;
  throw std::out_of_range("quantity not mapped");
}

std::vector<ReadBlock> RegisterMap::read_blocks() const {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.address < b.address; });
  std::vector<ReadBlock> blocks;
  for (const auto& e : sorted) {
    if (!blocks.empty()) {
      auto& last = blocks.back();
      const std::uint32_t last_end = static_cast<std::uint32_t>(last.start) + last.count;
      if (last_end == e.address && last.count + e.words <= kMaxReadCount) {
        last.count = static_cast<std::uint16_t>(last.count + e.words);
        continue;
      }
    }
    blocks.push_back({e.address, e.words});
  }
  return blocks;
}

std::uint32_t RegisterMap::span_end() const {
  std::uint32_t end = 0;
  for (const auto& e : entries_) end = std::max(end, e.end());
  return end;
}

bool RegisterMap::covers(std::uint16_t start, std::uint16_t count) const {
  for (std::uint32_t a = start; a < static_cast<std::uint32_t>(start) + count; ++a) {
    const bool mapped = std::any_of(entries_.begin(), entries_.end(),
                                    [a](const auto& e) { return a >= e.address && a < e.end(); });
    if (!mapped) return false;
  }
  return true;
}

ElectricalSample RegisterMap::decode(const std::map<std::uint16_t, std::uint16_t>& registers) const {
  ElectricalSample sample;
  for (const auto& e : entries_) {
    std::uint32_t raw = 0;
    for (std::uint32_t w = 0; w < e.words; ++w) {
      auto it = registers.find(static_cast<std::uint16_t>(e.address + w));
      if (it == registers.end())
        throw std::out_of_range("register " + std::to_string(e.address + w) + " missing from reply");
      raw = (raw << 16) | it->second;
    }
    std::int64_t value = raw;
    if (e.is_signed) {
      value = e.words == 1 ? static_cast<std::int64_t>(static_cast<std::int16_t>(raw))
                           : static_cast<std::int64_t>(static_cast<std::int32_t>(raw));
    }
    field(sample, e.quantity) = e.scale.apply(value);
  }
  return sample;
}

void RegisterMap::encode(const ElectricalSample& sample, std::vector<std::uint16_t>& image) const {
  if (image.size() < span_end()) image.resize(span_end(), 0);
  for (const auto& e : entries_) {
    std::int64_t raw = e.scale.to_raw(field(sample, e.quantity));
    const int bits = 16 * e.words;
    const std::int64_t lo = e.is_signed ? -(std::int64_t{1} << (bits - 1)) : 0;
    const std::int64_t hi = e.is_signed ? (std::int64_t{1} << (bits - 1)) - 1 : (std::int64_t{1} << bits) - 1;
    raw = std::clamp(raw, lo, hi);
    const auto bitsval = static_cast<std::uint32_t>(raw);
    if (e.words == 1) {
      image[e.address] = static_cast<std::uint16_t>(bitsval & 0xFFFF);
    } else {
      image[e.address] = static_cast<std::uint16_t>(bitsval >> 16);
      image[e.address + 1] = static_cast<std::uint16_t>(bitsval & 0xFFFF);
    }
  }
}

}  // namespace powerbench::modbus
