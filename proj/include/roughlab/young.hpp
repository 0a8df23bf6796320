#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace roughlab {

class GridFunction2D {
 public:
  GridFunction2D(std::vector<double> u, std::vector<double> v, std::vector<double> values);
  static GridFunction2D from_function(std::vector<double> u, std::vector<double> v,
                                      const std::function<double(double, double)>& f);

  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * v_.size() + j]; }
  // f([u_i0, u_i1] x [v_j0, v_j1]).
  double rect(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const;

 private:
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<double> values_;
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t cells);

double young_integral_2d(const GridFunction2D& f, const GridFunction2D& g);

struct VariationEstimate {
  double full_grid = 0.0;  // Ṽ_p on the given grid
  double greedy = 0.0;     // best sub-grid found by greedy point removal
  double value = 0.0;      // max of the two; a lower bound for V_p
};

VariationEstimate vp_norm_grid(const GridFunction2D& f, double p);

struct QuadratureOptions {
  long initial_grid = 16;
  double tolerance = 1e-4;
  int max_doublings = 14;
};

struct QuadratureResult {
  double value = 0.0;
  long grid = 0;  // finest grid used
  std::vector<long> grids;
  std::vector<double> raw;           // left-point sums per grid
  std::vector<double> extrapolated;  // Richardson values per grid (from the third on)
};

// Left-point discrete Young sum for tilde_rho on an n x n grid, O(n).
double tilde_rho_sum(double hurst, int lag, long n);
QuadratureResult tilde_rho(double hurst, int lag, const QuadratureOptions& options = {});

// Covariance of the level-m area blocks i and j.
double levy_cov(double hurst, int level, long i, long j, const QuadratureOptions& options = {});

// R^l_s(t, t) on an n x n grid, O(l n^2).
double iterated_cov_sum(double hurst, int order, double s, double t, long n);
QuadratureResult iterated_cov(double hurst, int order, double s, double t,
                              const QuadratureOptions& options = {});

}  // namespace roughlab
