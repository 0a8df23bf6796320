#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "roughlab/grid_fbm.hpp"

namespace roughlab {

// Increment of a level-2 path over one interval.
struct Level2 {
  Eigen::VectorXd first;
  Eigen::MatrixXd second;

  static Level2 zero(int dim);
};

Level2 chen_compose(const Level2& left, const Level2& right);

// Polygon: iterated integral of the piecewise-linear interpolation (geometric).
// LeftPoint: left-point discrete sum off the diagonal, (B^a)^2/2 on it.
enum class LiftRule { Polygon, LeftPoint };

class RoughIncrements {
 public:
  RoughIncrements() = default;
  RoughIncrements(int level, int dim, int refinement);

  int level() const { return level_; }
  int dim() const { return dim_; }
  int refinement() const { return refinement_; }
  std::size_t blocks() const { return dyadic_blocks(level_); }
  double step() const { return dyadic_step(level_); }

  // Block k is [tau_k, tau_{k+1}], k = 0..blocks()-1.
  double* first(std::size_t k) { return first_.data() + k * dim_; }
  const double* first(std::size_t k) const { return first_.data() + k * dim_; }
  // Row-major d x d tensor of block k.
  double* second(std::size_t k) { return second_.data() + k * dim_ * dim_; }
  const double* second(std::size_t k) const { return second_.data() + k * dim_ * dim_; }
  double second(std::size_t k, int a, int b) const { return second_[(k * dim_ + a) * dim_ + b]; }

  Level2 block(std::size_t k) const;
  // Increment over grid points [i, j] by Chen composition of blocks i..j-1.
  Level2 over(std::size_t i, std::size_t j) const;
  // Path values B at grid point k.
  Eigen::VectorXd value(std::size_t k) const;

  // One level coarser, by Chen composition of block pairs.
  RoughIncrements coarsen() const;
  RoughIncrements coarsen_to(int level) const;

 private:
  int level_ = 0;
  int dim_ = 0;
  int refinement_ = 0;
  std::vector<double> first_;
  std::vector<double> second_;
};

RoughIncrements lift_levy_area(const FbmSample& fine, int target_level,
                               LiftRule rule = LiftRule::Polygon);
// Same as above from raw increments inc[a][k] at the fine level.
RoughIncrements lift_from_increments(const std::vector<std::vector<double>>& inc, int fine_level,
                                     int target_level, LiftRule rule = LiftRule::Polygon);

enum class Scheme { ImplementableMilstein, CrankNicolson, FirstOrderEuler, Milstein };

std::string scheme_tag(Scheme s);
Scheme parse_scheme(const std::string& tag);

struct DmProcess {
  Scheme scheme = Scheme::Milstein;
  int level = 0;
  int dim = 0;
  std::vector<double> data;  // blocks x d x d, row-major per block

  const double* block(std::size_t k) const { return data.data() + k * dim * dim; }
  double operator()(std::size_t k, int a, int b) const { return data[(k * dim + a) * dim + b]; }
  std::size_t blocks() const { return dyadic_blocks(level); }
  // Sum of blocks i..j-1.
  Eigen::MatrixXd sum(std::size_t i, std::size_t j) const;
};

DmProcess dm_process(Scheme scheme, const RoughIncrements& lift, double hurst);

// max over grid pairs of |x_t - x_s| / |t - s|^theta; values are rows of width `width`.
double holder_norm(const std::vector<double>& times, const std::vector<double>& values,
                   int width, double exponent);

struct OmegaCheck {
  bool passed = true;
  double worst_ratio = 0.0;
};

OmegaCheck check_omega_m(const RoughIncrements& lift, double h_minus, double threshold = 0.5);

}  // namespace roughlab
