#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "text.hpp"

namespace cello {

/// Layered key/value settings. Resolution order, strongest first:
/// environment (CELLO_<KEY>), command-line flag, config file, built-in
/// default. Keys must be registered with a default before use; lookups of
/// unknown keys and unknown file keys are configuration errors.
class Config {
 public:
  void set_default(const std::string& key, const std::string& value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key].def = value;
  }

  void set_flag(const std::string& key, const std::string& value) {
    require_known(key);
    values_[key].flag = value;
    values_[key].has_flag = true;
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot open config file " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto eq = t.find('=');
      if (eq == std::string::npos)
        fail(ErrorKind::ConfigError,
             path + " line " + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (!values_.count(key))
        fail(ErrorKind::ConfigError,
             path + " line " + std::to_string(lineno) + ": unknown key " + key);
      values_[key].file = value;
      values_[key].has_file = true;
    }
  }

  std::string env_name(const std::string& key) const {
    std::string out = "CELLO_";
    for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(c));
    return out;
  }

  std::string get(const std::string& key) const { return resolve(key).first; }

  /// Resolved value plus the layer it came from.
  std::pair<std::string, std::string> resolve(const std::string& key) const {
    require_known(key);
    const Entry& e = values_.at(key);
    if (const char* env = std::getenv(env_name(key).c_str())) return {env, "env"};
    if (e.has_flag) return {e.flag, "flag"};
    if (e.has_file) return {e.file, "file"};
    return {e.def, "default"};
  }

  uint64_t get_u64(const std::string& key) const {
    auto [v, src] = resolve(key);
    try {
      size_t pos = 0;
      uint64_t out = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, key + " (" + src + "): not an unsigned integer: " + v);
    }
  }

  int get_int(const std::string& key) const {
    auto [v, src] = resolve(key);
    try {
      size_t pos = 0;
      int out = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, key + " (" + src + "): not an integer: " + v);
    }
  }

  double get_double(const std::string& key) const {
    auto [v, src] = resolve(key);
    try {
      size_t pos = 0;
      double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, key + " (" + src + "): not a number: " + v);
    }
  }

  /// One line per key with the winning layer, for startup logging.
  std::string describe() const {
    std::ostringstream os;
    for (const auto& key : order_) {
      auto [v, src] = resolve(key);
      os << key << " = " << v << " (" << src << ")\n";
    }
    return os.str();
  }

  const std::vector<std::string>& keys() const { return order_; }

 private:
  struct Entry {
    std::string def;
    std::string file;
    std::string flag;
    bool has_file = false;
    bool has_flag = false;
  };

  void require_known(const std::string& key) const {
    if (!values_.count(key)) fail(ErrorKind::ConfigError, "unknown config key " + key);
  }

  std::map<std::string, Entry> values_;
  std::vector<std::string> order_;
};

}  // namespace cello
