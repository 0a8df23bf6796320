#include "roughlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "roughlab/errors.hpp"

namespace roughlab {

using nlohmann::json;

json ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: malformed JSON in '" + path + "': " + e.what());
  }
  require(doc.is_object(), "config: top level of '" + path + "' must be an object");
  for (const auto& [key, value] : doc.items())
    require(!value.is_object(), "config: key '" + key + "' must not be nested");
  return doc;
}

ExperimentConfig ExperimentConfig::merge(const json& flags, const json& file,
                                         const std::vector<std::string>& allowed) {
  ExperimentConfig cfg;
  auto known = [&](const std::string& k) {
    return std::find(allowed.begin(), allowed.end(), k) != allowed.end();
  };
  for (const auto* src : {&flags, &file}) {
    if (src->is_null()) continue;
    for (const auto& [key, value] : src->items()) {
      require(known(key), "config: unknown key '" + key + "'");
      require(!cfg.values_.contains(key),
              "config: key '" + key + "' is set both on the command line and in the config file");
      cfg.values_[key] = value;
    }
  }
  return cfg;
}

double ExperimentConfig::real(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const json& v = values_.at(key);
  require(v.is_number(), key + ": expected a number");
  const double x = v.get<double>();
  require(std::isfinite(x), key + ": must be finite");
  return x;
}

long ExperimentConfig::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const json& v = values_.at(key);
  require(v.is_number_integer(), key + ": expected an integer");
  return v.get<long>();
}

std::uint64_t ExperimentConfig::seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const json& v = values_.at(key);
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
          key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const json& v = values_.at(key);
  require(v.is_string(), key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  if (!has(key)) return {};
  const json& v = values_.at(key);
  require(v.is_array(), key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    require(e.is_number(), key + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::pair<int, int> ExperimentConfig::range(const std::string& key,
                                            std::pair<int, int> fallback) const {
  if (!has(key)) return fallback;
  const json& v = values_.at(key);
  if (v.is_array()) {
    require(v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer(),
            key + ": expected [lo, hi]");
    return {v[0].get<int>(), v[1].get<int>()};
  }
  require(v.is_string(), key + ": expected 'lo:hi'");
  const std::string s = v.get<std::string>();
  int lo = 0;
  int hi = 0;
  char tail = 0;
  require(std::sscanf(s.c_str(), "%d:%d%c", &lo, &hi, &tail) == 2, key + ": expected 'lo:hi', got '" + s + "'");
  return {lo, hi};
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::hash() const {
  json canonical = values_;
  canonical.erase("out");
  return fnv1a_hex(canonical.dump());
}

}  // namespace roughlab
