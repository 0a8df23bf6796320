#include "roughlab/limit_stats.hpp"

#include <algorithm>
#include <cmath>

#include "roughlab/errors.hpp"
#include "roughlab/rng.hpp"

namespace roughlab {

double tail_bound(double hurst, int truncation) {
  const double a = hurst * (1.0 - 2.0 * hurst);
  if (a == 0.0) return 0.0;
  if (truncation < 2) return INFINITY;
  // |rho(k)| and sqrt|tilde_rho(k)| are bounded by a (k-1)^{2H-2}; the tail holds
  // 2 tilde_rho(k) + rho(k)^2 / 2 for k > K.
  return 2.5 * a * a * std::pow(truncation - 1.0, 4.0 * hurst - 3.0) / (3.0 - 4.0 * hurst);
}

int truncation_for(double hurst, double tolerance) {
  require(tolerance > 0.0, "constant_C: tolerance must be > 0");
  int k = 1;
  while (tail_bound(hurst, k) > tolerance) {
    k = k < 2 ? 2 : k + 1;
    if (k > 1000000) throw NumericalError("constant_C: tail tolerance unreachable");
  }
  return k;
}

LimitConstant constant_C(double hurst, double tolerance, const QuadratureOptions& quadrature) {
  validate_exponents(hurst, HurstConfig::default_h_minus(hurst));
  LimitConstant out;
  out.hurst = hurst;
  out.truncation = truncation_for(hurst, tolerance);
  out.tail_bound = tail_bound(hurst, out.truncation);
  QuadratureOptions q = quadrature;
  q.tolerance = std::min(q.tolerance, tolerance / (4.0 * (out.truncation + 1)));
  q.max_doublings = std::max(q.max_doublings, 20);
  for (int k = 0; k <= out.truncation; ++k) {
    const double tr = tilde_rho(hurst, k, q).value;
    const double r = rho(hurst, k);
    out.tilde_rho_terms.push_back(tr);
    out.rho_terms.push_back(r);
    out.tilde_rho_sum += k == 0 ? tr : 2.0 * tr;
    if (k >= 1) out.rho_sq_sum += r * r;
  }
  out.c_squared = out.tilde_rho_sum - 0.25 - 0.5 * out.rho_sq_sum;
  out.value = std::sqrt(std::max(out.c_squared, 0.0));
  return out;
}

SumKind parse_sum_kind(const std::string& tag) {
  if (tag == "I") return SumKind::I;
  if (tag == "J") return SumKind::J;
  if (tag == "q_tilde") return SumKind::QTilde;
  if (tag == "q_check") return SumKind::QCheck;
  if (tag == "q_hat") return SumKind::QHat;
  if (tag == "q") return SumKind::Q;
  if (tag == "dm") return SumKind::Dm;
  if (tag == "k_area") return SumKind::KAreaIncrement;
  if (tag == "k_triple") return SumKind::KTriple;
  throw ValidationError("kind: unknown weighted sum kind '" + tag + "'");
}

double weighted_sum(SumKind kind, SumIndex index, const std::vector<double>& weights,
                    const RoughIncrements& lift, const DmProcess* dm, double hurst, double t) {
  require(t >= 0.0 && t <= 1.0, "weighted_sum: t must lie in [0, 1]");
  const int d = lift.dim();
  const int a = index.a;
  const int b = index.b;
  const int c = index.c;
  const bool needs_c = kind == SumKind::KAreaIncrement || kind == SumKind::KTriple;
  require(a >= 0 && a < d && b >= 0 && b < d && (!needs_c || (c >= 0 && c < d)),
          "weighted_sum: index out of range");
  require(kind != SumKind::Dm || dm != nullptr, "weighted_sum: kind dm requires a d^m process");
  const std::size_t last = static_cast<std::size_t>(std::floor(t * lift.blocks() + 1e-9));
  require(weights.empty() || weights.size() >= last, "weighted_sum: too few weights");
  const double var = std::pow(lift.step(), 2.0 * hurst);
  double sum = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    const double* x = lift.first(k);
    const double area = lift.second(k, a, b);
    double stat = 0.0;
    switch (kind) {
      case SumKind::I: stat = area; break;
      case SumKind::J: stat = x[a] * x[b]; break;
      case SumKind::QTilde: stat = a == b ? 0.0 : area; break;
      case SumKind::QCheck: stat = a == b ? 0.5 * (x[a] * x[a] - var) : 0.0; break;
      case SumKind::QHat: stat = a == b ? 0.0 : 0.5 * x[a] * x[b]; break;
      case SumKind::Q: stat = a == b ? 0.0 : 0.5 * x[a] * x[b] - area; break;
      case SumKind::Dm: stat = (*dm)(k, a, b); break;
      case SumKind::KAreaIncrement: stat = area * x[c]; break;
      case SumKind::KTriple: stat = x[a] * x[b] * x[c]; break;
    }
    sum += (weights.empty() ? 1.0 : weights[k]) * stat;
  }
  return sum;
}

ErrorProcess error_process(const VectorField& field, const DiscreteSolution& scheme,
                           const GridPath& reference, const JacobianPath& jacobian,
                           const RoughIncrements& lift, const DmProcess& dm, double hurst) {
  const std::size_t points = lift.blocks() + 1;
  require(scheme.path.points() == points && reference.points() == points &&
              jacobian.blocks() + 1 == points && dm.blocks() == lift.blocks(),
          "error_process: inputs must share the level");
  const int n = field.state_dim();
  const int d = field.driver_dim();
  const double scale = std::pow(2.0, lift.level() * (2.0 * hurst - 0.5));
  ErrorProcess out;
  out.scaled_error = GridPath(n, points);
  out.weighted = GridPath(n, points);
  out.remainder = GridPath(n, points);
  FieldJet jet;
  jet.resize(n, d);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v(n);
  for (std::size_t k = 0; k < points; ++k) {
    if (k > 0) {
      field.eval(reference.row(k - 1), jet, 1);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s += jet.c(i, a, b) * dm(k - 1, a, b);
        v[i] = s;
      }
      acc += jacobian.inv(k - 1) * v;
    }
    const Eigen::VectorXd err = scale * (scheme.path.at(k) - reference.at(k));
    const Eigen::VectorXd rem = err - scale * (jacobian.at(k) * acc);
    Eigen::Map<Eigen::VectorXd>(out.scaled_error.row(k), n) = err;
    Eigen::Map<Eigen::VectorXd>(out.weighted.row(k), n) = acc;
    Eigen::Map<Eigen::VectorXd>(out.remainder.row(k), n) = rem;
    out.max_remainder = std::max(out.max_remainder, rem.norm());
  }
  return out;
}

LimitDraw limit_sample(const VectorField& field, const GridPath& path, const JacobianPath& jacobian,
                       double c, std::uint64_t seed, std::uint64_t path_index, bool swap_pairs) {
  const std::size_t blocks = jacobian.blocks();
  require(path.points() == blocks + 1, "limit_sample: path and Jacobian grids differ");
  const int n = field.state_dim();
  const int d = field.driver_dim();
  const double dt = dyadic_step(jacobian.level);
  const double sdt = std::sqrt(dt);
  LimitDraw out;
  out.sample = Eigen::VectorXd::Zero(n);
  out.conditional_cov = Eigen::MatrixXd::Zero(n, n);
  if (d < 2 || c == 0.0) return out;
  NormalStream normal(seed, path_index, streams::limit_noise);
  FieldJet jet;
  jet.resize(n, d);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd v(n);
  for (std::size_t k = 1; k <= blocks; ++k) {
    field.eval(path.row(k - 1), jet, 1);
    const auto jinv = jacobian.inv(k - 1);
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const double dw = sdt * normal();
        for (int i = 0; i < n; ++i)
          v[i] = swap_pairs ? jet.c(i, b, a) - jet.c(i, a, b) : jet.c(i, a, b) - jet.c(i, b, a);
        const Eigen::VectorXd u = jinv * v;
        acc += u * dw;
        cov += u * u.transpose() * dt;
      }
  }
  const auto j1 = jacobian.at(blocks);
  out.sample = c * (j1 * acc);
  out.conditional_cov = c * c * (j1 * cov * j1.transpose());
  return out;
}

}  // namespace roughlab
