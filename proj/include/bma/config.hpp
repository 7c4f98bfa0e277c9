#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bma/common.hpp"

namespace bma {

/// Flat key-value configuration: one `key = value` per line, `#` comments,
/// dotted keys for grouping (see docs/config.md for the schema).
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double dflt) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int dflt) const;
  bool get_bool_or(const std::string& key, bool dflt) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace bma
