#pragma once

// Small helpers over yaml-cpp so every config loader reports schema
// violations as "<file>:<line>: message".

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <yaml-cpp/yaml.h>

namespace powerbench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigNode {
 public:
  ConfigNode(YAML::Node node, std::string source) : node_(std::move(node)), source_(std::move(source)) {}

  static ConfigNode load_file(const std::filesystem::path& path);
  static ConfigNode load_string(const std::string& text, std::string source = "<string>");

  bool has(const std::string& key) const;
  ConfigNode at(const std::string& key) const;  // required child
  std::optional<ConfigNode> find(const std::string& key) const;

  template <typename T>
  T as() const {
    try {
      return node_.as<T>();
    } catch (const YAML::Exception&) {
      fail("cannot convert value '" + scalar_text() + "'");
    }
  }

  template <typename T>
  T get(const std::string& key) const {
    return at(key).as<T>();
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) const {
    auto child = find(key);
    return child ? child->as<T>() : fallback;
  }

  bool is_map() const { return node_.IsMap(); }
  bool is_sequence() const { return node_.IsSequence(); }
  std::size_t size() const { return node_.size(); }
  ConfigNode operator[](std::size_t i) const;

  int line() const { return node_.Mark().line + 1; }
  const std::string& source() const { return source_; }
  const YAML::Node& raw() const { return node_; }

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::string scalar_text() const;

  YAML::Node node_;
  std::string source_;
};

}  // namespace powerbench
