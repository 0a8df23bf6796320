#include "roughlab/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roughlab/errors.hpp"

namespace roughlab {

GridPath GridPath::restrict_every(std::size_t stride) const {
  require(stride >= 1 && (points() - 1) % stride == 0, "grid path: stride must divide the grid");
  GridPath out(dim, (points() - 1) / stride + 1);
  for (std::size_t k = 0; k < out.points(); ++k)
    std::copy(row(k * stride), row(k * stride) + dim, out.row(k));
  return out;
}

namespace {

// out = sigma x + sum_ab c_ab t_ab + b dt, with t the second-order driver term.
void common_step(const FieldJet& jet, const double* x, const double* t, double dt, double* out) {
  const int n = jet.n;
  const int d = jet.d;
  for (int i = 0; i < n; ++i) {
    double v = jet.drift[i] * dt;
    for (int a = 0; a < d; ++a) v += jet.s(i, a) * x[a];
    if (t)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const double w = t[a * d + b];
          if (w != 0.0) v += jet.c(i, a, b) * w;
        }
    out[i] = v;
  }
}

void check_dims(const VectorField& field, const RoughIncrements& lift, const Eigen::VectorXd& xi) {
  require(field.driver_dim() == lift.dim(), "solve: field driver dimension does not match the lift");
  require(xi.size() == field.state_dim(), "solve: initial value dimension does not match the field");
}

}  // namespace

DiscreteSolution solve(Scheme scheme, const VectorField& field, const RoughIncrements& lift,
                       const Eigen::VectorXd& xi, const SolveOptions& options) {
  check_dims(field, lift, xi);
  const int n = field.state_dim();
  const int d = field.driver_dim();
  const std::size_t blocks = lift.blocks();
  const double dt = lift.step();
  DiscreteSolution sol;
  sol.scheme = scheme;
  sol.level = lift.level();
  sol.path = GridPath(n, blocks + 1);
  std::copy(xi.data(), xi.data() + n, sol.path.row(0));

  if (scheme == Scheme::CrankNicolson && options.omega_gate == OmegaGate::Enforce) {
    const double hm = options.h_minus > 0.0 ? options.h_minus : HurstConfig::default_h_minus(options.hurst);
    if (!check_omega_m(lift, hm).passed) {
      sol.excluded = true;
      for (std::size_t k = 1; k <= blocks; ++k) std::copy(xi.data(), xi.data() + n, sol.path.row(k));
      return sol;
    }
  }

  FieldJet jet;
  jet.resize(n, d);
  std::vector<double> t(d * d, 0.0);
  std::vector<double> inc(n);
  const double fe_var = std::pow(dt, 2.0 * options.hurst);

  if (scheme != Scheme::CrankNicolson) {
    for (std::size_t k = 0; k < blocks; ++k) {
      const double* y = sol.path.row(k);
      const double* x = lift.first(k);
      field.eval(y, jet, 1);
      switch (scheme) {
        case Scheme::ImplementableMilstein:
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) t[a * d + b] = 0.5 * x[a] * x[b];
          break;
        case Scheme::Milstein:
          std::copy(lift.second(k), lift.second(k) + d * d, t.begin());
          break;
        case Scheme::FirstOrderEuler:
          std::fill(t.begin(), t.end(), 0.0);
          for (int a = 0; a < d; ++a) t[a * d + a] = 0.5 * fe_var;
          break;
        default:
          break;
      }
      common_step(jet, x, t.data(), dt, inc.data());
      double* next = sol.path.row(k + 1);
      for (int i = 0; i < n; ++i) next[i] = y[i] + inc[i];
    }
    return sol;
  }

  require(options.cn_max_iterations >= 1, "cn: max iterations must be >= 1");
  require(options.cn_damping > 0.0 && options.cn_damping <= 1.0, "cn: damping must lie in (0, 1]");
  sol.iterations.assign(blocks, 0);
  std::vector<double> s0(n);
  std::vector<double> v(n);
  std::vector<double> phi(n);
  for (std::size_t k = 0; k < blocks; ++k) {
    const double* y = sol.path.row(k);
    const double* x = lift.first(k);
    field.eval(y, jet, 0);
    common_step(jet, x, nullptr, dt, s0.data());
    for (int i = 0; i < n; ++i) v[i] = y[i] + s0[i];
    double prev_res = -1.0;
    bool converged = false;
    int it = 0;
    while (it < options.cn_max_iterations) {
      ++it;
      field.eval(v.data(), jet, 0);
      common_step(jet, x, nullptr, dt, phi.data());
      for (int i = 0; i < n; ++i) phi[i] = y[i] + 0.5 * (s0[i] + phi[i]);
      double res2 = 0.0;
      double step2 = 0.0;
      double mag2 = 0.0;
      for (int i = 0; i < n; ++i) {
        res2 += (phi[i] - v[i]) * (phi[i] - v[i]);
        step2 += (phi[i] - y[i]) * (phi[i] - y[i]);
        mag2 += phi[i] * phi[i];
      }
      const double res = std::sqrt(res2);
      if (prev_res > 0.0 && res > 0.0) sol.max_contraction = std::max(sol.max_contraction, res / prev_res);
      prev_res = res;
      const double lam = options.cn_damping;
      for (int i = 0; i < n; ++i) v[i] = (1.0 - lam) * v[i] + lam * phi[i];
      if (res <= options.cn_tolerance * std::sqrt(step2) ||
          res <= 1e-15 * std::max(1.0, std::sqrt(mag2))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "cn: fixed-point iteration did not converge at block " << k << " after " << it
          << " iterations";
      throw NumericalError(msg.str());
    }
    sol.iterations[k] = it;
    std::copy(v.begin(), v.end(), sol.path.row(k + 1));
  }
  return sol;
}

DiscreteSolution reference_solution(const VectorField& field, const RoughIncrements& fine_lift,
                                    const Eigen::VectorXd& xi, int coarse_level) {
  require(coarse_level >= 0 && coarse_level <= fine_lift.level(),
          "reference: coarse level must not exceed the fine level");
  DiscreteSolution fine = solve(Scheme::Milstein, field, fine_lift, xi);
  fine.path = fine.path.restrict_every(std::size_t{1} << (fine_lift.level() - coarse_level));
  fine.level = coarse_level;
  return fine;
}

GridPath step_residuals(const GridPath& path, const VectorField& field, const RoughIncrements& lift,
                        const DmProcess* dm, double weight) {
  require(path.points() == lift.blocks() + 1, "residuals: path does not match the lift grid");
  const int n = field.state_dim();
  const int d = field.driver_dim();
  FieldJet jet;
  jet.resize(n, d);
  std::vector<double> t(d * d);
  std::vector<double> inc(n);
  GridPath out(n, lift.blocks());
  for (std::size_t k = 0; k < lift.blocks(); ++k) {
    field.eval(path.row(k), jet, 1);
    for (int e = 0; e < d * d; ++e)
      t[e] = lift.second(k)[e] + (dm ? weight * dm->block(k)[e] : 0.0);
    common_step(jet, lift.first(k), t.data(), lift.step(), inc.data());
    for (int i = 0; i < n; ++i) out.row(k)[i] = path.row(k + 1)[i] - path.row(k)[i] - inc[i];
  }
  return out;
}

GridPath epsilon_hat(const DiscreteSolution& solution, const VectorField& field,
                     const RoughIncrements& lift) {
  const int n = field.state_dim();
  const int d = field.driver_dim();
  GridPath out(n, lift.blocks());
  if (solution.excluded) {
    const DmProcess dm = dm_process(solution.scheme, lift, 0.5);
    return step_residuals(solution.path, field, lift, &dm);
  }
  if (solution.scheme != Scheme::CrankNicolson) return out;
  FieldJet j0;
  FieldJet j1;
  j0.resize(n, d);
  j1.resize(n, d);
  for (std::size_t k = 0; k < lift.blocks(); ++k) {
    field.eval(solution.path.row(k), j0, 1);
    field.eval(solution.path.row(k + 1), j1, 0);
    const double* x = lift.first(k);
    for (int i = 0; i < n; ++i) {
      double v = 0.5 * (j1.drift[i] - j0.drift[i]) * lift.step();
      for (int a = 0; a < d; ++a) v += 0.5 * (j1.s(i, a) - j0.s(i, a)) * x[a];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) v -= 0.5 * j0.c(i, a, b) * x[a] * x[b];
      out.row(k)[i] = v;
    }
  }
  return out;
}

Eigen::Map<const Eigen::MatrixXd> JacobianPath::factor(std::size_t k) const {
  return {factors.data() + (k - 1) * dim * dim, dim, dim};
}
Eigen::Map<const Eigen::MatrixXd> JacobianPath::at(std::size_t k) const {
  return {forward.data() + k * dim * dim, dim, dim};
}
Eigen::Map<const Eigen::MatrixXd> JacobianPath::inv(std::size_t k) const {
  return {inverse.data() + k * dim * dim, dim, dim};
}

Eigen::MatrixXd JacobianPath::segment(std::size_t l, std::size_t k) const {
  require(l + k <= blocks(), "jacobian: segment out of range");
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
  for (std::size_t j = l + 1; j <= l + k; ++j) acc = factor(j) * acc;
  return acc;
}

JacobianPath jacobian_path(const VectorField& field, const RoughIncrements& lift,
                           const DmProcess* dm, double rho, const GridPath& base, double h_minus,
                           double hurst) {
  require(base.points() == lift.blocks() + 1, "jacobian: base path does not match the lift grid");
  require(rho >= 0.0 && rho <= 1.0, "jacobian: rho must lie in [0, 1]");
  const int n = field.state_dim();
  const int d = field.driver_dim();
  const std::size_t blocks = lift.blocks();
  JacobianPath jp;
  jp.level = lift.level();
  jp.dim = n;
  jp.rho = rho;
  jp.factors.resize(blocks * n * n);
  jp.forward.resize((blocks + 1) * n * n);
  jp.inverse.resize((blocks + 1) * n * n);

  const std::size_t stride = std::max<std::size_t>(1, (blocks + 1) / 512);
  std::vector<Eigen::VectorXd> visited;
  for (std::size_t k = 0; k <= blocks; k += stride) visited.emplace_back(base.at(k));
  const double hm = h_minus > 0.0 ? h_minus : HurstConfig::default_h_minus(hurst);
  jp.step_condition = step_condition(estimate_bounds(field, visited, 0.1), lift.step(), hm);

  FieldJet jet;
  jet.resize(n, d);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd mi = Eigen::MatrixXd::Identity(n, n);
  Eigen::Map<Eigen::MatrixXd>(jp.forward.data(), n, n) = m;
  Eigen::Map<Eigen::MatrixXd>(jp.inverse.data(), n, n) = mi;
  Eigen::MatrixXd e(n, n);
  for (std::size_t k = 0; k < blocks; ++k) {
    field.eval(base.row(k), jet, 2);
    const double* x = lift.first(k);
    const double* s = lift.second(k);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double v = (i == l ? 1.0 : 0.0) + jet.ddrift[i * n + l] * lift.step();
        for (int a = 0; a < d; ++a) v += jet.ds(i, a, l) * x[a];
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const double w = s[a * d + b] + (dm ? rho * (*dm)(k, a, b) : 0.0);
            if (w != 0.0) v += jet.dc(i, a, b, l) * w;
          }
        e(i, l) = v;
      }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(e);
    const double det = lu.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-14) {
      std::ostringstream msg;
      msg << "jacobian: singular one-step factor at block " << k;
      throw NumericalError(msg.str());
    }
    Eigen::Map<Eigen::MatrixXd>(jp.factors.data() + k * n * n, n, n) = e;
    m = e * m;
    mi = mi * lu.inverse();
    Eigen::Map<Eigen::MatrixXd>(jp.forward.data() + (k + 1) * n * n, n, n) = m;
    Eigen::Map<Eigen::MatrixXd>(jp.inverse.data() + (k + 1) * n * n, n, n) = mi;
  }
  return jp;
}

}  // namespace roughlab
