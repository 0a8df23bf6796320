#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace roughlab {

struct HurstConfig {
  double hurst = 0.4;
  double h_minus = 0.0;  // 0 selects default_h_minus(hurst)
  int level = 8;
  int driver_dim = 2;
  int state_dim = 2;

  // Midpoint of the admissible interval for H_minus.
  static double default_h_minus(double hurst);
  double effective_h_minus() const;
  void validate() const;
};

// Throws ValidationError unless 1/3 < H <= 1/2 and H_minus is admissible.
void validate_exponents(double hurst, double h_minus);

inline double dyadic_step(int level) { return 1.0 / static_cast<double>(std::size_t{1} << level); }
inline std::size_t dyadic_blocks(int level) { return std::size_t{1} << level; }

double rho(double hurst, double lag);
double fbm_cov(double hurst, double s, double t);

struct Interval {
  double lo;
  double hi;
};

double rect_cov(double hurst, Interval a, Interval b);

// d components on the dyadic grid of a level; values[a][k] = B^a at k 2^-level.
struct FbmSample {
  double hurst = 0.5;
  int level = 0;
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  std::vector<std::vector<double>> values;

  int dim() const { return static_cast<int>(values.size()); }
  std::size_t blocks() const { return dyadic_blocks(level); }
  std::vector<double> increments(int component) const;

  // Injected path from grid values (each component must start at 0).
  static FbmSample from_values(int level, std::vector<std::vector<double>> values);
};

enum class SamplerMethod { Auto, Circulant, Cholesky };

class FbmSampler {
 public:
  FbmSampler(double hurst, int level, int dim, SamplerMethod method = SamplerMethod::Auto);

  FbmSample sample(std::uint64_t seed, std::uint64_t path = 0) const;
  // Fills out[a] with the 2^level increments of component a.
  void sample_increments(std::uint64_t seed, std::uint64_t path,
                         std::vector<std::vector<double>>& out) const;

  // Method actually in use after the embedding check.
  SamplerMethod method() const;
  double hurst() const { return hurst_; }
  int level() const { return level_; }
  int dim() const { return dim_; }

 private:
  struct Impl;
  double hurst_;
  int level_;
  int dim_;
  std::shared_ptr<const Impl> impl_;
};

FbmSample sample_fbm(const HurstConfig& config, std::uint64_t seed, std::uint64_t path = 0);

}  // namespace roughlab
