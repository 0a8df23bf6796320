#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace roughlab {

// Flat key/value experiment configuration.
class ExperimentConfig {
 public:
  // Combines explicit flags with an optional config document. Keys outside `allowed`
  // and keys given in both sources are validation errors.
  static ExperimentConfig merge(const nlohmann::json& flags, const nlohmann::json& file,
                                const std::vector<std::string>& allowed);
  static nlohmann::json load_file(const std::string& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> reals(const std::string& key) const;
  // "a:b" or a two-element array.
  std::pair<int, int> range(const std::string& key, std::pair<int, int> fallback) const;

  const nlohmann::json& values() const { return values_; }
  // FNV-1a of the canonical (sorted-key) dump, excluding the output path.
  std::string hash() const;

 private:
  nlohmann::json values_ = nlohmann::json::object();
};

std::string fnv1a_hex(const std::string& text);

}  // namespace roughlab
