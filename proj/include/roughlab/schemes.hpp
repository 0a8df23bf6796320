#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "roughlab/rough_lift.hpp"
#include "roughlab/vector_field.hpp"

namespace roughlab {

// Row k holds the state at grid point k.
struct GridPath {
  int dim = 0;
  std::vector<double> data;

  GridPath() = default;
  GridPath(int dimension, std::size_t points) : dim(dimension), data(points * dimension, 0.0) {}
  std::size_t points() const { return dim == 0 ? 0 : data.size() / dim; }
  double* row(std::size_t k) { return data.data() + k * dim; }
  const double* row(std::size_t k) const { return data.data() + k * dim; }
  Eigen::Map<const Eigen::VectorXd> at(std::size_t k) const { return {row(k), dim}; }
  // Every `stride`-th row.
  GridPath restrict_every(std::size_t stride) const;
};

enum class OmegaGate { None, Enforce };

struct SolveOptions {
  double hurst = 0.4;  // enters the first-order Euler correction
  double h_minus = 0.0;  // 0 selects the default for `hurst`
  OmegaGate omega_gate = OmegaGate::None;
  double cn_tolerance = 1e-12;  // fixed-point residual relative to the step increment
  int cn_max_iterations = 50;
  double cn_damping = 1.0;
};

struct DiscreteSolution {
  Scheme scheme = Scheme::Milstein;
  int level = 0;
  GridPath path;
  bool excluded = false;
  std::vector<int> iterations;   // per step, CN only
  double max_contraction = 0.0;  // largest measured Picard contraction factor, CN only
};

DiscreteSolution solve(Scheme scheme, const VectorField& field, const RoughIncrements& lift,
                       const Eigen::VectorXd& xi, const SolveOptions& options = {});

// Milstein on the fine lift, restricted to the grid of `coarse_level`.
DiscreteSolution reference_solution(const VectorField& field, const RoughIncrements& fine_lift,
                                    const Eigen::VectorXd& xi, int coarse_level);

// Per-block residual y_k - y_{k-1} - sigma B - c BB - b Delta - weight c d (blocks x n).
// With dm == nullptr this is the reference residual epsilon.
GridPath step_residuals(const GridPath& path, const VectorField& field, const RoughIncrements& lift,
                        const DmProcess* dm, double weight = 1.0);

// epsilon-hat of a scheme output: zero for IM, FE, M; closed form for CN.
GridPath epsilon_hat(const DiscreteSolution& solution, const VectorField& field,
                     const RoughIncrements& lift);

struct JacobianPath {
  int level = 0;
  int dim = 0;
  double rho = 0.0;
  double step_condition = 0.0;  // left side of the invertibility condition
  std::vector<double> factors;  // E_k for k = 1..blocks at index k-1
  std::vector<double> forward;  // M_k, k = 0..blocks
  std::vector<double> inverse;  // M_k^{-1}

  std::size_t blocks() const { return dyadic_blocks(level); }
  Eigen::Map<const Eigen::MatrixXd> factor(std::size_t k) const;
  Eigen::Map<const Eigen::MatrixXd> at(std::size_t k) const;
  Eigen::Map<const Eigen::MatrixXd> inv(std::size_t k) const;
  // E_{l+k} ... E_{l+1}.
  Eigen::MatrixXd segment(std::size_t l, std::size_t k) const;
};

// One-step factors E = I + D sigma B + Dc (BB + rho d) + Db Delta along `base`.
JacobianPath jacobian_path(const VectorField& field, const RoughIncrements& lift,
                           const DmProcess* dm, double rho, const GridPath& base,
                           double h_minus = 0.0, double hurst = 0.4);

}  // namespace roughlab
