#include "powerbench/config.hpp"

namespace powerbench {

ConfigNode ConfigNode::load_file(const std::filesystem::path& path) {
  try {
    return ConfigNode(YAML::LoadFile(path.string()), path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigError(path.string() + ": cannot open file");
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path.string() + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

ConfigNode ConfigNode::load_string(const std::string& text, std::string source) {
  try {
    return ConfigNode(YAML::Load(text), source);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

bool ConfigNode::has(const std::string& key) const {
  return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull();
}

ConfigNode ConfigNode::at(const std::string& key) const {
  if (!node_.IsMap()) fail("expected a mapping containing '" + key + "'");
  if (!has(key)) fail("missing required key '" + key + "'");
  return ConfigNode(node_[key], source_);
}

std::optional<ConfigNode> ConfigNode::find(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return ConfigNode(node_[key], source_);
}

ConfigNode ConfigNode::operator[](std::size_t i) const {
  if (!node_.IsSequence() || i >= node_.size()) fail("index out of range");
  return ConfigNode(node_[i], source_);
}

void ConfigNode::fail(const std::string& message) const {
  // Null nodes carry no mark; report line 0 rather than garbage.
  const int ln = node_.Mark().is_null() ? 0 : line();
  throw ConfigError(source_ + ":" + std::to_string(ln) + ": " + message);
}

std::string ConfigNode::scalar_text() const {
  return node_.IsScalar() ? node_.Scalar() : std::string("<non-scalar>");
}

}  // namespace powerbench
