#include "roughlab/experiments.hpp"

#include <cmath>
#include <sstream>

#include "roughlab/errors.hpp"
#include "roughlab/interpolation.hpp"

namespace roughlab {

Eigen::VectorXd default_xi(const VectorField& field) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(field.state_dim());
  if (field.name() == "tanh2") xi << 0.5, -0.3;
  if (field.name() == "linear1" || field.name() == "ode1") xi[0] = 1.0;
  return xi;
}

namespace {

Eigen::VectorXd resolve_xi(const VectorField& field, const std::vector<double>& xi) {
  if (xi.empty()) return default_xi(field);
  require(xi.size() == static_cast<std::size_t>(field.state_dim()),
          "xi: length must equal the state dimension of the field");
  return Eigen::Map<const Eigen::VectorXd>(xi.data(), static_cast<long>(xi.size()));
}

double resolve_h_minus(double hurst, double h_minus) {
  const double hm = h_minus > 0.0 ? h_minus : HurstConfig::default_h_minus(hurst);
  validate_exponents(hurst, hm);
  return hm;
}

template <class Fn>
auto with_coordinates(int m, std::size_t path, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << e.what() << " (m=" << m << ", path=" << path << ")";
    throw NumericalError(msg.str());
  }
}

struct ConvergencePath {
  std::vector<double> err2;
  std::vector<double> remainder;
  Eigen::VectorXd terminal;
  double limit_trace = 0.0;
  bool excluded = false;
};

}  // namespace

ConvergenceReport run_convergence(const ConvergenceSpec& spec) {
  const double hm = resolve_h_minus(spec.hurst, spec.h_minus);
  require(spec.m_min >= 1 && spec.m_max >= spec.m_min, "m_range: need 1 <= m_min <= m_max");
  require(spec.m_max - spec.m_min + 1 >= 5, "m_range: a regression needs at least 5 levels");
  require(spec.ref_offset >= 4, "ref_offset: reference level must be at least m + 4");
  require(spec.kappa >= 0, "kappa: must be >= 0");
  require(spec.paths >= 2, "paths: need at least 2 paths");
  const auto field = make_field(spec.field);
  const Eigen::VectorXd xi = resolve_xi(*field, spec.xi);
  const int d = field->driver_dim();
  const int n = field->state_dim();
  ConvergenceReport out;
  out.reference_level = spec.m_max + spec.ref_offset;
  out.fine_level = out.reference_level + spec.kappa;
  require(out.fine_level <= 24, "m_range: fine level m_max + ref_offset + kappa must be <= 24");
  const bool limit = spec.limit_compare && d >= 2;
  if (limit) out.c = constant_C(spec.hurst, 1e-5).value;
  const FbmSampler sampler(spec.hurst, out.fine_level, d);
  SolveOptions opts;
  opts.hurst = spec.hurst;
  opts.h_minus = hm;
  opts.omega_gate = spec.omega_gate;
  const int levels = spec.m_max - spec.m_min + 1;

  auto records = parallel_map(spec.paths, spec.threads, [&](std::size_t p) {
    return with_coordinates(spec.m_max, p, [&] {
      ConvergencePath rec;
      rec.err2.resize(levels);
      rec.remainder.resize(levels);
      std::vector<std::vector<double>> inc;
      sampler.sample_increments(spec.seed, p, inc);
      const RoughIncrements fine = lift_from_increments(inc, out.fine_level, out.reference_level);
      inc.clear();
      const DiscreteSolution ref = solve(Scheme::Milstein, *field, fine, xi);
      RoughIncrements lift = fine.coarsen_to(spec.m_max);
      for (int m = spec.m_max; m >= spec.m_min; --m) {
        if (m < spec.m_max) lift = lift.coarsen();
        const DiscreteSolution sol = with_coordinates(m, p, [&] { return solve(spec.scheme, *field, lift, xi, opts); });
        const GridPath refm = ref.path.restrict_every(std::size_t{1} << (out.reference_level - m));
        const std::size_t last = lift.blocks();
        rec.err2[m - spec.m_min] = (sol.path.at(last) - refm.at(last)).squaredNorm();
        if (sol.excluded) rec.excluded = true;
        const DmProcess dm = dm_process(spec.scheme, lift, spec.hurst);
        const JacobianPath jm = jacobian_path(*field, lift, nullptr, 0.0, refm, hm, spec.hurst);
        const ErrorProcess ep = error_process(*field, sol, refm, jm, lift, dm, spec.hurst);
        rec.remainder[m - spec.m_min] = ep.max_remainder;
        if (m == spec.m_max) rec.terminal = ep.scaled_error.at(last);
      }
      if (limit) {
        const JacobianPath jref = jacobian_path(*field, fine, nullptr, 0.0, ref.path, hm, spec.hurst);
        const LimitDraw draw = limit_sample(*field, ref.path, jref, out.c, spec.seed, p);
        rec.limit_trace = draw.conditional_cov.trace();
      }
      return rec;
    });
  });

  out.report.paths = spec.paths;
  out.report.seed = spec.seed;
  std::vector<double> xs;
  std::vector<double> ys;
  bool all_zero = true;
  for (int m = spec.m_min; m <= spec.m_max; ++m) {
    std::vector<double> e2(spec.paths);
    std::vector<double> rem(spec.paths);
    for (std::size_t p = 0; p < spec.paths; ++p) {
      e2[p] = records[p].err2[m - spec.m_min];
      rem[p] = records[p].remainder[m - spec.m_min];
    }
    const SampleStats st = sample_stats(e2);
    McEstimate est;
    est.level = m;
    est.mean = st.mean;
    est.variance = st.variance;
    est.std_error = st.std_error;
    est.estimate = std::sqrt(st.mean);
    out.report.estimates.push_back(est);
    out.remainder_median.push_back(median(rem));
    if (st.mean > 1e-28) all_zero = false;
    xs.push_back(m);
    ys.push_back(std::log2(std::max(est.estimate, 1e-300)));
  }
  out.report.degenerate = all_zero;
  if (all_zero) {
    out.report.fit.slope = NAN;
    out.report.fit.intercept = NAN;
    out.report.fit.half_width = NAN;
    out.report.fit.points = xs.size();
  } else {
    out.report.fit = ols(xs, ys);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> comp(spec.paths);
    for (std::size_t p = 0; p < spec.paths; ++p) comp[p] = records[p].terminal[i];
    const SampleStats st = sample_stats(comp);
    out.terminal_variance += st.variance;
    out.terminal_variance_se += st.variance_std_error * st.variance_std_error;
  }
  out.terminal_variance_se = std::sqrt(out.terminal_variance_se);
  for (const auto& r : records) out.excluded += r.excluded ? 1 : 0;
  if (limit) {
    std::vector<double> tr(spec.paths);
    for (std::size_t p = 0; p < spec.paths; ++p) tr[p] = records[p].limit_trace;
    const SampleStats st = sample_stats(tr);
    out.limit_variance = st.mean;
    out.limit_variance_se = st.std_error;
  }
  return out;
}

std::vector<LevyVarRow> run_levy_var(const LevyVarSpec& spec) {
  validate_exponents(spec.hurst, HurstConfig::default_h_minus(spec.hurst));
  require(spec.m >= 1 && spec.kappa >= 0 && spec.m + spec.kappa <= 24,
          "m: need m >= 1, kappa >= 0 and m + kappa <= 24");
  require(spec.paths >= 2, "paths: need at least 2 paths");
  const int fine = spec.m + spec.kappa;
  const FbmSampler sampler(spec.hurst, fine, 2);
  const SumKind kinds[] = {SumKind::QTilde, SumKind::QHat, SumKind::QCheck, SumKind::Q};
  const SumIndex idx[] = {{0, 1, 0}, {0, 1, 0}, {0, 0, 0}, {0, 1, 0}};
  auto sums = parallel_map(spec.paths, spec.threads, [&](std::size_t p) {
    std::vector<std::vector<double>> inc;
    sampler.sample_increments(spec.seed, p, inc);
    const RoughIncrements lift = lift_from_increments(inc, fine, spec.m);
    std::vector<double> v;
    for (int s = 0; s < 4; ++s) v.push_back(weighted_sum(kinds[s], idx[s], {}, lift, nullptr, spec.hurst));
    return v;
  });
  const LimitConstant lc = constant_C(spec.hurst, 1e-5);
  const double targets[] = {lc.q_tilde_limit(), lc.q_hat_limit(), lc.q_check_limit(), lc.q_limit()};
  const char* names[] = {"q_tilde", "q_hat", "q_check", "q"};
  const double scale = std::pow(2.0, spec.m * (4.0 * spec.hurst - 1.0));
  std::vector<LevyVarRow> rows;
  for (int s = 0; s < 4; ++s) {
    std::vector<double> x(spec.paths);
    for (std::size_t p = 0; p < spec.paths; ++p) x[p] = sums[p][s];
    const SampleStats st = sample_stats(x);
    rows.push_back({names[s], scale * st.variance, scale * st.variance_std_error, targets[s]});
  }
  return rows;
}

McReport run_moment_scaling(const MomentScalingSpec& spec) {
  validate_exponents(spec.hurst, HurstConfig::default_h_minus(spec.hurst));
  require(spec.m_min >= 1 && spec.m_max >= spec.m_min, "m_range: need 1 <= m_min <= m_max");
  require(spec.kappa >= 0 && spec.m_max + spec.kappa <= 24, "kappa: fine level must be <= 24");
  require(spec.paths >= 2, "paths: need at least 2 paths");
  const int fine = spec.m_max + spec.kappa;
  const FbmSampler sampler(spec.hurst, fine, spec.dim);
  const int levels = spec.m_max - spec.m_min + 1;
  auto sums = parallel_map(spec.paths, spec.threads, [&](std::size_t p) {
    std::vector<std::vector<double>> inc;
    sampler.sample_increments(spec.seed, p, inc);
    RoughIncrements lift = lift_from_increments(inc, fine, spec.m_max);
    std::vector<double> v(levels);
    for (int m = spec.m_max; m >= spec.m_min; --m) {
      if (m < spec.m_max) lift = lift.coarsen();
      const DmProcess dm = dm_process(Scheme::ImplementableMilstein, lift, spec.hurst);
      v[m - spec.m_min] = weighted_sum(spec.kind, spec.index, {}, lift, &dm, spec.hurst);
    }
    return v;
  });
  McReport rep;
  rep.paths = spec.paths;
  rep.seed = spec.seed;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int m = spec.m_min; m <= spec.m_max; ++m) {
    std::vector<double> x(spec.paths);
    for (std::size_t p = 0; p < spec.paths; ++p) x[p] = sums[p][m - spec.m_min];
    const SampleStats st = sample_stats(x);
    rep.estimates.push_back({m, st.mean, st.variance, st.std_error, st.variance});
    xs.push_back(m);
    ys.push_back(std::log2(st.variance));
  }
  rep.fit = ols(xs, ys);
  return rep;
}

std::vector<InterpCheckRow> run_interp_check(const InterpCheckSpec& spec) {
  const double hm = resolve_h_minus(spec.hurst, spec.h_minus);
  require(spec.m >= 1 && spec.ref_offset >= 0 && spec.kappa >= 0 &&
              spec.m + spec.ref_offset + spec.kappa <= 24,
          "m: need m >= 1 and m + ref_offset + kappa <= 24");
  require(spec.nodes >= 1, "nodes: need at least one quadrature node");
  const auto field = make_field(spec.field);
  const Eigen::VectorXd xi = resolve_xi(*field, spec.xi);
  const int ref_level = spec.m + spec.ref_offset;
  const int fine = ref_level + spec.kappa;
  const FbmSampler sampler(spec.hurst, fine, field->driver_dim());
  SolveOptions opts;
  opts.hurst = spec.hurst;
  opts.h_minus = hm;
  return parallel_map(spec.paths, spec.threads, [&](std::size_t p) {
    return with_coordinates(spec.m, p, [&] {
      InterpCheckRow row;
      row.path = p;
      std::vector<std::vector<double>> inc;
      sampler.sample_increments(spec.seed, p, inc);
      const RoughIncrements fl = lift_from_increments(inc, fine, ref_level);
      const RoughIncrements lift = fl.coarsen_to(spec.m);
      const DiscreteSolution ref = reference_solution(*field, fl, xi, spec.m);
      const DiscreteSolution sol = solve(spec.scheme, *field, lift, xi, opts);
      const DmProcess dm = dm_process(spec.scheme, lift, spec.hurst);
      const GridPath eps = step_residuals(ref.path, *field, lift, nullptr);
      const GridPath eps_hat = epsilon_hat(sol, *field, lift);

      const IdentityCheck a = interpolation_identity_check(*field, lift, dm, sol, ref.path, eps, eps_hat, spec.nodes);
      const IdentityCheck b = interpolation_identity_check(*field, lift, dm, sol, ref.path, eps, eps_hat, 2 * spec.nodes);
      row.identity_residual = a.residual;
      row.identity_scale = a.scale;
      row.node_doubling = std::abs(a.residual - b.residual);

      const InterpolationNode mid = interp_solve(*field, lift, dm, eps, eps_hat, xi, 0.5);
      row.z_agreement = z_agreement(mid);

      const GridPath res = step_residuals(sol.path, *field, lift, &dm);
      for (std::size_t k = 0; k < lift.blocks(); ++k) {
        const Eigen::VectorXd diff = res.at(k) - eps_hat.at(k);
        const double step = (sol.path.at(k + 1) - sol.path.at(k)).norm();
        row.resubstitution = std::max(row.resubstitution, diff.norm() / std::max(step, 1e-300));
      }

      const JacobianPath& jp = mid.jacobian;
      const std::size_t nb = jp.blocks();
      for (std::size_t l : {std::size_t{0}, nb / 4, nb / 2}) {
        for (std::size_t k : {std::size_t{1}, nb / 8, nb / 4}) {
          const std::size_t kp = nb - l - k;
          const Eigen::MatrixXd whole = jp.segment(l, k + kp);
          const Eigen::MatrixXd parts = jp.segment(l + k, kp) * jp.segment(l, k);
          row.group_law = std::max(row.group_law, (whole - parts).norm() / whole.norm());
        }
      }
      for (std::size_t k = 0; k <= nb; ++k) {
        const Eigen::MatrixXd composed = jp.segment(k, nb - k) * jp.at(k);
        row.group_law = std::max(row.group_law, (composed - jp.at(nb)).norm() / jp.at(nb).norm());
        const Eigen::MatrixXd id = jp.at(k) * jp.inv(k);
        row.group_law = std::max(row.group_law, (id - Eigen::MatrixXd::Identity(id.rows(), id.cols())).norm());
      }

      const InterpolationNode n0 = interp_solve(*field, lift, dm, eps, eps_hat, xi, 0.0);
      const InterpolationNode n1 = interp_solve(*field, lift, dm, eps, eps_hat, xi, 1.0);
      for (std::size_t k = 0; k <= nb; ++k) {
        row.endpoint = std::max(row.endpoint, (n0.y.at(k) - ref.path.at(k)).norm() / (1.0 + ref.path.at(k).norm()));
        row.endpoint = std::max(row.endpoint, (n1.y.at(k) - sol.path.at(k)).norm() / (1.0 + sol.path.at(k).norm()));
      }
      return row;
    });
  });
}

std::vector<double> run_omega_rate(const OmegaRateSpec& spec) {
  validate_exponents(spec.hurst, spec.h_minus);
  require(!spec.levels.empty(), "levels: need at least one level");
  require(spec.paths >= 1, "paths: need at least one path");
  std::vector<double> rates;
  for (int m : spec.levels) {
    require(m >= 1 && m <= 24, "levels: each level must lie in [1, 24]");
    const FbmSampler sampler(spec.hurst, m, spec.dim);
    auto pass = parallel_map(spec.paths, spec.threads, [&](std::size_t p) {
      std::vector<std::vector<double>> inc;
      sampler.sample_increments(spec.seed, p, inc);
      const RoughIncrements lift = lift_from_increments(inc, m, m);
      return check_omega_m(lift, spec.h_minus).passed ? 1.0 : 0.0;
    });
    rates.push_back(pairwise_sum(pass) / static_cast<double>(spec.paths));
  }
  return rates;
}

}  // namespace roughlab
