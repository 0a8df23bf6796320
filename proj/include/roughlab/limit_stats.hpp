#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughlab/schemes.hpp"
#include "roughlab/young.hpp"

namespace roughlab {

struct LimitConstant {
  double hurst = 0.5;
  int truncation = 0;              // K
  double tilde_rho_sum = 0.0;      // tilde_rho(0) + 2 sum_{k=1}^K tilde_rho(k)
  double rho_sq_sum = 0.0;         // sum_{k=1}^K rho(k)^2
  double c_squared = 0.0;
  double value = 0.0;              // C
  double tail_bound = 0.0;         // bound on the neglected tail of C^2
  std::vector<double> tilde_rho_terms;  // k = 0..K
  std::vector<double> rho_terms;        // k = 0..K

  // Variance limits of the scaled sums of the area, half product, centred square and
  // antisymmetrised blocks.
  double q_tilde_limit() const { return tilde_rho_sum; }
  double q_hat_limit() const { return 0.25 * (1.0 + 2.0 * rho_sq_sum); }
  double q_check_limit() const { return 0.5 * (1.0 + 2.0 * rho_sq_sum); }
  double q_limit() const { return q_tilde_limit() - q_hat_limit(); }
};

// Smallest K >= 1 whose tail bound is below tolerance.
int truncation_for(double hurst, double tolerance);
double tail_bound(double hurst, int truncation);

LimitConstant constant_C(double hurst, double tolerance, const QuadratureOptions& quadrature = {});

enum class SumKind {
  I,               // iterated area BB^{ab}
  J,               // B^a B^b
  QTilde,          // BB^{ab}, a != b
  QCheck,          // ((B^a)^2 - Delta^{2H}) / 2 on the diagonal
  QHat,            // B^a B^b / 2, a != b
  Q,               // QHat - QTilde
  Dm,              // d^m block of the supplied process
  KAreaIncrement,  // BB^{ab} B^c
  KTriple,         // B^a B^b B^c
};

SumKind parse_sum_kind(const std::string& tag);

struct SumIndex {
  int a = 0;
  int b = 1;
  int c = 2;
};

// sum_{k <= floor(2^m t)} F_{k-1} stat_k; empty weights mean F = 1.
double weighted_sum(SumKind kind, SumIndex index, const std::vector<double>& weights,
                    const RoughIncrements& lift, const DmProcess* dm, double hurst, double t = 1.0);

struct ErrorProcess {
  GridPath scaled_error;  // (2^m)^{2H-1/2} (yhat - y)
  GridPath weighted;      // I^m_t with weights J^{-1} c_ab against d^{ab}
  GridPath remainder;     // scaled error - (2^m)^{2H-1/2} J_t I^m_t
  double max_remainder = 0.0;
};

ErrorProcess error_process(const VectorField& field, const DiscreteSolution& scheme,
                           const GridPath& reference, const JacobianPath& jacobian,
                           const RoughIncrements& lift, const DmProcess& dm, double hurst);

struct LimitDraw {
  Eigen::VectorXd sample;
  Eigen::MatrixXd conditional_cov;  // covariance given the driver
};

// C sum_{a<b} J_1 sum_k J_{k-1}^{-1} (V_ab - V_ba)(Y_{k-1}) dW^{ab}_k, V_ab = (D sigma)[sigma e_a] e_b.
// `swap_pairs` evaluates the same draws with (a, b) exchanged.
LimitDraw limit_sample(const VectorField& field, const GridPath& path, const JacobianPath& jacobian,
                       double c, std::uint64_t seed, std::uint64_t path_index = 0,
                       bool swap_pairs = false);

}  // namespace roughlab
