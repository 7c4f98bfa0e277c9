#include "bma/config.hpp"

#include <fstream>
#include <sstream>

namespace bma {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Config,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorKind::Config,
                  "config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = val;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Config, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

std::string KeyValueConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw Error(ErrorKind::Config, "missing config key: " + key);
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Config, "config key is not a number: " + key);
  }
}

double KeyValueConfig::get_double_or(const std::string& key,
                                     double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

int KeyValueConfig::get_int(const std::string& key) const {
  try {
    return std::stoi(get(key));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Config, "config key is not an integer: " + key);
  }
}

int KeyValueConfig::get_int_or(const std::string& key, int dflt) const {
  return has(key) ? get_int(key) : dflt;
}

bool KeyValueConfig::get_bool_or(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::Config, "config key is not a boolean: " + key);
}

}  // namespace bma
