#include "piezolab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace piezolab {

namespace {

const char* const kPhysical[] = {"rho", "alpha1", "beta", "gamma", "mu"};
const char* const kGeometry[] = {"L", "h"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  return out;
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source = source;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "synthetic")
        throw ConfigError("unknown section [" + section + "]");
      c.has_synthetic = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    (section == "synthetic" ? c.synthetic : c.values)[key] = val;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  return get(key).value_or(def);
}

double Config::get_double(const std::string& key, double def) const {
  auto v = get(key);
  return v ? to_double(key, *v) : def;
}

long long Config::get_int(const std::string& key, long long def) const {
  auto v = get(key);
  if (!v) return def;
  const double d = to_double(key, *v);
  if (d != static_cast<double>(static_cast<long long>(d)))
    throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<long long>(d);
}

bool Config::get_bool(const std::string& key, bool def) const {
  auto v = get(key);
  if (!v) return def;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  if (auto v = get(key))
    for (const auto& item : split_list(*v)) out.push_back(to_double(key, item));
  return out;
}

MaterialParams params_from(const Config& c) {
  if (c.has_synthetic)
    throw ConfigError("this experiment needs physical parameters, not [synthetic]");
  MaterialParams p;
  double* slots[] = {&p.rho, &p.alpha1, &p.beta, &p.gamma, &p.mu, &p.L, &p.h};
  const char* names[] = {"rho", "alpha1", "beta", "gamma", "mu", "L", "h"};
  for (int i = 0; i < 7; ++i) {
    auto v = c.get(names[i]);
    if (!v) throw ConfigError(std::string("missing key '") + names[i] + "'");
    *slots[i] = to_double(names[i], *v);
  }
  try {
    validate(p);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

DerivedConstants constants_from(const Config& c) {
  if (!c.has_synthetic) return derive_constants(params_from(c));
  for (const char* k : kPhysical)
    if (c.has(k))
      throw ConfigError(std::string("key '") + k +
                        "' conflicts with the [synthetic] section");
  auto need = [&](const char* k) {
    auto it = c.synthetic.find(k);
    if (it != c.synthetic.end()) return to_double(k, it->second);
    if (auto v = c.get(k)) return to_double(k, *v);
    throw ConfigError(std::string("missing key '") + k + "'");
  };
  const double z1 = need("zeta1"), z2 = need("zeta2"), r = need("rho_over_mu");
  double geo[2];
  for (int i = 0; i < 2; ++i) geo[i] = need(kGeometry[i]);
  try {
    return synthetic_constants(z1, z2, r, geo[0], geo[1]);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace piezolab
