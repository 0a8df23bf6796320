#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughlab/limit_stats.hpp"
#include "roughlab/mc.hpp"

namespace roughlab {

// Default initial value of a named field.
Eigen::VectorXd default_xi(const VectorField& field);

struct ConvergenceSpec {
  Scheme scheme = Scheme::ImplementableMilstein;
  std::string field = "tanh2";
  std::vector<double> xi;  // empty selects default_xi
  double hurst = 0.4;
  double h_minus = 0.0;
  int m_min = 6;
  int m_max = 11;
  std::size_t paths = 2000;
  std::uint64_t seed = 42;
  int ref_offset = 6;  // reference level = m_max + ref_offset
  int kappa = 3;       // lift refinement below the reference level
  int threads = 1;
  bool limit_compare = true;
  OmegaGate omega_gate = OmegaGate::None;
};

struct ConvergenceReport {
  McReport report;                 // per-m squared terminal errors; estimate = L2 norm
  std::vector<double> remainder_median;  // median of max_t |R^m_t| per m
  double terminal_variance = 0.0;  // summed component variances of the scaled error at m_max
  double terminal_variance_se = 0.0;
  double limit_variance = 0.0;     // mean trace of the conditional limit covariance
  double limit_variance_se = 0.0;
  double c = 0.0;
  int reference_level = 0;
  int fine_level = 0;
  std::size_t excluded = 0;  // CN paths outside the gate
};

ConvergenceReport run_convergence(const ConvergenceSpec& spec);

struct LevyVarSpec {
  double hurst = 0.4;
  int m = 10;
  std::size_t paths = 4000;
  std::uint64_t seed = 42;
  int kappa = 10;
  int threads = 1;
};

struct LevyVarRow {
  std::string statistic;
  double scaled_variance = 0.0;
  double std_error = 0.0;
  double target = 0.0;
};

std::vector<LevyVarRow> run_levy_var(const LevyVarSpec& spec);

struct MomentScalingSpec {
  SumKind kind = SumKind::Q;
  SumIndex index{0, 1, 2};
  int dim = 2;
  double hurst = 0.4;
  int m_min = 6;
  int m_max = 12;
  std::size_t paths = 4000;
  std::uint64_t seed = 42;
  int kappa = 8;  // fine level = m_max + kappa
  int threads = 1;
};

// Per-m variance of the [0, 1] sums; the fit is log2 variance against m.
McReport run_moment_scaling(const MomentScalingSpec& spec);

struct InterpCheckSpec {
  Scheme scheme = Scheme::ImplementableMilstein;
  std::string field = "tanh2";
  std::vector<double> xi;
  double hurst = 0.4;
  double h_minus = 0.0;
  int m = 8;
  std::size_t paths = 100;
  std::uint64_t seed = 42;
  int ref_offset = 6;
  int kappa = 3;
  int nodes = 8;
  int threads = 1;
};

struct InterpCheckRow {
  std::size_t path = 0;
  double identity_residual = 0.0;
  double identity_scale = 0.0;
  double node_doubling = 0.0;   // |residual(nodes) - residual(2 nodes)|
  double z_agreement = 0.0;     // direct vs constant-variation z at rho = 1/2
  double resubstitution = 0.0;  // largest relative per-step residual of the scheme
  double group_law = 0.0;       // relative Jacobian composition error
  double endpoint = 0.0;        // rho = 0 and rho = 1 against reference and scheme
};

std::vector<InterpCheckRow> run_interp_check(const InterpCheckSpec& spec);

struct OmegaRateSpec {
  double hurst = 0.5;
  double h_minus = 0.34;
  int dim = 1;
  std::vector<int> levels{18, 20, 22};
  std::size_t paths = 1000;
  std::uint64_t seed = 42;
  int threads = 1;
};

std::vector<double> run_omega_rate(const OmegaRateSpec& spec);

}  // namespace roughlab
