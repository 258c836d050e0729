#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "piezolab/material.hpp"

namespace piezolab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key = value text; an optional [synthetic] section.  '#' starts a
// comment.
struct Config {
  std::map<std::string, std::string> values;
  std::map<std::string, std::string> synthetic;
  bool has_synthetic = false;
  std::string source;

  static Config parse(const std::string& text, const std::string& source = "");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  long long get_int(const std::string& key, long long def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values[key] = value; }
};

std::vector<std::string> split_list(const std::string& s);

// Physical keys in order rho, alpha1, beta, gamma, mu, L, h.
MaterialParams params_from(const Config& c);
// Physical or [synthetic] constants.
DerivedConstants constants_from(const Config& c);

}  // namespace piezolab
