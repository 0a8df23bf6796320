#include "roughlab/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "roughlab/errors.hpp"

namespace roughlab {

namespace {

void check_blocks(const GridPath& g, const RoughIncrements& lift, int n, const char* what) {
  require(g.points() == lift.blocks() && g.dim == n,
          std::string("interpolation: ") + what + " must hold one n-vector per block");
}

}  // namespace

InterpolationNode interp_solve(const VectorField& field, const RoughIncrements& lift,
                               const DmProcess& dm, const GridPath& eps, const GridPath& eps_hat,
                               const Eigen::VectorXd& xi, double rho) {
  const int n = field.state_dim();
  const int d = field.driver_dim();
  check_blocks(eps, lift, n, "eps");
  check_blocks(eps_hat, lift, n, "eps_hat");
  require(xi.size() == n, "interpolation: initial value dimension mismatch");
  const std::size_t blocks = lift.blocks();
  InterpolationNode node;
  node.rho = rho;
  node.y = GridPath(n, blocks + 1);
  std::copy(xi.data(), xi.data() + n, node.y.row(0));

  // Source terms c(y_{k-1}) d_k + eps_hat_k - eps_k, one row per block.
  GridPath source(n, blocks);
  FieldJet jet;
  jet.resize(n, d);
  for (std::size_t k = 0; k < blocks; ++k) {
    const double* y = node.y.row(k);
    field.eval(y, jet, 1);
    const double* x = lift.first(k);
    const double* s = lift.second(k);
    const double* dk = dm.block(k);
    double* next = node.y.row(k + 1);
    for (int i = 0; i < n; ++i) {
      double v = jet.drift[i] * lift.step();
      double cd = 0.0;
      for (int a = 0; a < d; ++a) v += jet.s(i, a) * x[a];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const double c = jet.c(i, a, b);
          v += c * s[a * d + b];
          cd += c * dk[a * d + b];
        }
      next[i] = y[i] + v + rho * cd + rho * eps_hat.row(k)[i] + (1.0 - rho) * eps.row(k)[i];
      source.row(k)[i] = cd + eps_hat.row(k)[i] - eps.row(k)[i];
    }
  }

  node.jacobian = jacobian_path(field, lift, &dm, rho, node.y);
  node.z_direct = GridPath(n, blocks + 1);
  node.z_variation = GridPath(n, blocks + 1);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 1; k <= blocks; ++k) {
    Eigen::Map<const Eigen::VectorXd> src(source.row(k - 1), n);
    z = node.jacobian.factor(k) * z + src;
    acc += node.jacobian.inv(k) * src;
    Eigen::Map<Eigen::VectorXd>(node.z_direct.row(k), n) = z;
    Eigen::Map<Eigen::VectorXd>(node.z_variation.row(k), n) = node.jacobian.at(k) * acc;
  }
  return node;
}

double z_agreement(const InterpolationNode& node) {
  double worst = 0.0;
  for (std::size_t k = 0; k < node.z_direct.points(); ++k) {
    const auto a = node.z_direct.at(k);
    const auto b = node.z_variation.at(k);
    worst = std::max(worst, (a - b).norm() / std::max(1.0, a.norm()));
  }
  return worst;
}

GaussLegendre gauss_legendre(int count) {
  require(count >= 1, "gauss_legendre: need at least one node");
  GaussLegendre g;
  g.nodes.resize(count);
  g.weights.resize(count);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[i] = 0.5 * (1.0 - x);
    g.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

IdentityCheck interpolation_identity_check(const VectorField& field, const RoughIncrements& lift,
                                           const DmProcess& dm, const DiscreteSolution& scheme,
                                           const GridPath& reference, const GridPath& eps,
                                           const GridPath& eps_hat, int nodes) {
  require(scheme.path.points() == reference.points(), "identity check: grid mismatch");
  const int n = field.state_dim();
  const Eigen::VectorXd xi = reference.at(0);
  const GaussLegendre gl = gauss_legendre(nodes);
  GridPath integral(n, reference.points());
  for (int q = 0; q < nodes; ++q) {
    const InterpolationNode node = interp_solve(field, lift, dm, eps, eps_hat, xi, gl.nodes[q]);
    for (std::size_t e = 0; e < integral.data.size(); ++e)
      integral.data[e] += gl.weights[q] * node.z_direct.data[e];
  }
  IdentityCheck out;
  out.nodes = nodes;
  for (std::size_t k = 0; k < reference.points(); ++k) {
    const Eigen::VectorXd diff = scheme.path.at(k) - reference.at(k) - integral.at(k);
    out.residual = std::max(out.residual, diff.norm());
    out.scale = std::max(out.scale, 1.0 + scheme.path.at(k).norm());
  }
  return out;
}

ControlFunction::ControlFunction(const RoughIncrements& lift, double h_minus) {
  require(h_minus > 0.0 && h_minus <= 0.5, "control function: h_minus must lie in (0, 1/2]");
  const double p = 1.0 / h_minus;
  const double q = 1.0 / (2.0 * h_minus);
  k_ = lift.blocks() + 1;
  times_.resize(k_);
  for (std::size_t i = 0; i < k_; ++i) times_[i] = static_cast<double>(i) * lift.step();
  cost1_.assign(k_ * k_, 0.0);
  cost2_.assign(k_ * k_, 0.0);
  const int d = lift.dim();
  Eigen::VectorXd b(d);
  Eigen::MatrixXd bb(d, d);
  for (std::size_t l = 0; l < k_; ++l) {
    b.setZero();
    bb.setZero();
    for (std::size_t k = l + 1; k < k_; ++k) {
      const double* x = lift.first(k - 1);
      const double* s = lift.second(k - 1);
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) bb(a, c) += s[a * d + c] + b[a] * x[c];
      for (int a = 0; a < d; ++a) b[a] += x[a];
      cost1_[l * k_ + k] = std::pow(b.norm(), p);
      cost2_[l * k_ + k] = std::pow(bb.norm(), q);
    }
  }
  rows_.resize(k_);
}

const std::vector<double>& ControlFunction::row(std::size_t i) const {
  auto& r = rows_[i];
  if (!r.empty()) return r;
  std::vector<double> v1(k_, 0.0);
  std::vector<double> v2(k_, 0.0);
  for (std::size_t k = i + 1; k < k_; ++k) {
    double best1 = 0.0;
    double best2 = 0.0;
    for (std::size_t l = i; l < k; ++l) {
      best1 = std::max(best1, v1[l] + cost1_[l * k_ + k]);
      best2 = std::max(best2, v2[l] + cost2_[l * k_ + k]);
    }
    v1[k] = best1;
    v2[k] = best2;
  }
  r.resize(k_);
  for (std::size_t k = 0; k < k_; ++k) r[k] = v1[k] + v2[k];
  return r;
}

double ControlFunction::w(std::size_t i, std::size_t j) const {
  require(i <= j && j < k_, "control function: grid pair out of range");
  return row(i)[j];
}

GreedyCover n_beta(const std::vector<double>& times,
                   const std::function<double(std::size_t, std::size_t)>& w, double beta) {
  require(beta > 0.0, "n_beta: beta must be > 0");
  require(times.size() >= 2, "n_beta: need at least two grid points");
  GreedyCover out;
  const std::size_t last = times.size() - 1;
  const double threshold = beta * (1.0 - 1e-12);
  std::size_t idx = 0;
  out.sigma.push_back(times[0]);
  while (idx < last) {
    std::size_t next = last;
    for (std::size_t j = idx + 1; j <= last; ++j)
      if (w(idx, j) >= threshold) {
        next = j;
        break;
      }
    idx = next;
    out.sigma.push_back(times[idx]);
  }
  out.count = static_cast<int>(out.sigma.size()) - 2;
  return out;
}

GreedyCover n_beta(const ControlFunction& w, double beta, bool tilde) {
  return n_beta(
      w.times(),
      [&](std::size_t i, std::size_t j) { return tilde ? w.w_tilde(i, j) : w.w(i, j); }, beta);
}

Eigen::VectorXd davie_remainder(const GridPath& path, const VectorField& field,
                                const RoughIncrements& lift, const DmProcess& dm, double rho,
                                std::size_t i, std::size_t j) {
  require(i < j && j <= lift.blocks(), "davie_remainder: need grid points i < j");
  const int n = field.state_dim();
  const int d = field.driver_dim();
  FieldJet jet;
  jet.resize(n, d);
  field.eval(path.row(i), jet, 1);
  const Level2 inc = lift.over(i, j);
  const Eigen::MatrixXd dsum = dm.sum(i, j);
  Eigen::VectorXd out = path.at(j) - path.at(i);
  for (int r = 0; r < n; ++r) {
    double v = jet.drift[r] * (j - i) * lift.step();
    for (int a = 0; a < d; ++a) v += jet.s(r, a) * inc.first[a];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) v += jet.c(r, a, b) * (inc.second(a, b) + rho * dsum(a, b));
    out[r] -= v;
  }
  return out;
}

}  // namespace roughlab
