#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "roughlab/schemes.hpp"

namespace roughlab {

struct InterpolationNode {
  double rho = 0.0;
  GridPath y;
  GridPath z_direct;
  GridPath z_variation;
  JacobianPath jacobian;
};

// eps and eps_hat hold one row per block.
InterpolationNode interp_solve(const VectorField& field, const RoughIncrements& lift,
                               const DmProcess& dm, const GridPath& eps, const GridPath& eps_hat,
                               const Eigen::VectorXd& xi, double rho);

// Largest |z_direct - z_variation| / max(1, |z_direct|) over the grid.
double z_agreement(const InterpolationNode& node);

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

GaussLegendre gauss_legendre(int count);

struct IdentityCheck {
  double residual = 0.0;  // max_k |yhat_k - y_k - int z_k drho|
  double scale = 0.0;     // max_k (1 + |yhat_k|)
  int nodes = 0;
};

IdentityCheck interpolation_identity_check(const VectorField& field, const RoughIncrements& lift,
                                           const DmProcess& dm, const DiscreteSolution& scheme,
                                           const GridPath& reference, const GridPath& eps,
                                           const GridPath& eps_hat, int nodes = 8);

// w(s, t) = |B|^p_{p-var} + |BB|^q_{q-var} on grid pairs, p = 1/H_minus, q = 1/(2 H_minus).
class ControlFunction {
 public:
  ControlFunction(const RoughIncrements& lift, double h_minus);

  std::size_t points() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  double w(std::size_t i, std::size_t j) const;
  double w_tilde(std::size_t i, std::size_t j) const { return w(i, j) + times_[j] - times_[i]; }

 private:
  const std::vector<double>& row(std::size_t i) const;

  std::vector<double> times_;
  std::size_t k_ = 0;
  std::vector<double> cost1_;  // |B_{l,k}|^p
  std::vector<double> cost2_;  // |BB_{l,k}|^q
  mutable std::vector<std::vector<double>> rows_;
};

struct GreedyCover {
  int count = 0;              // N_beta
  std::vector<double> sigma;  // sigma_0 = 0, ..., last = 1
};

GreedyCover n_beta(const std::vector<double>& times,
                   const std::function<double(std::size_t, std::size_t)>& w, double beta);
GreedyCover n_beta(const ControlFunction& w, double beta, bool tilde = false);

// I_{s,t} between grid points i < j along `path` for the given rho.
Eigen::VectorXd davie_remainder(const GridPath& path, const VectorField& field,
                                const RoughIncrements& lift, const DmProcess& dm, double rho,
                                std::size_t i, std::size_t j);

}  // namespace roughlab
