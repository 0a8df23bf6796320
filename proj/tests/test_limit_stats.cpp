#include <cmath>

#include "doctest.h"
#include "roughlab/errors.hpp"
#include "roughlab/experiments.hpp"
#include "roughlab/limit_stats.hpp"
#include "roughlab/mc.hpp"

using namespace roughlab;

TEST_CASE("constant C in the Brownian case") {
  const LimitConstant c = constant_C(0.5, 1e-4);
  CHECK(c.value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(c.tail_bound == 0.0);
  CHECK(c.q_hat_limit() == doctest::Approx(0.25));
  CHECK(c.q_check_limit() == doctest::Approx(0.5));
}

TEST_CASE("truncation and tail bound") {
  CHECK(truncation_for(0.4, 1e-4) == 31);
  CHECK(tail_bound(0.4, 31) <= 1e-4);
  CHECK(tail_bound(0.4, 30) > 1e-4);
  CHECK(tail_bound(0.4, 1) == INFINITY);
  CHECK_THROWS_AS(truncation_for(0.4, 0.0), ValidationError);
}

TEST_CASE("constant C is stable under a tighter tolerance") {
  const LimitConstant a = constant_C(0.4, 1e-3);
  const LimitConstant b = constant_C(0.4, 1e-5);
  CHECK(a.value > 0.0);
  CHECK(std::abs(a.c_squared - b.c_squared) <= a.tail_bound + 1e-3);
  CHECK(b.c_squared == doctest::Approx(b.q_limit()).epsilon(1e-12));
  CHECK(a.tilde_rho_terms.size() == static_cast<std::size_t>(a.truncation + 1));
}

TEST_CASE("sum kinds") {
  CHECK(parse_sum_kind("q_tilde") == SumKind::QTilde);
  CHECK(parse_sum_kind("k_triple") == SumKind::KTriple);
  CHECK_THROWS_AS(parse_sum_kind("area"), ValidationError);
}

TEST_CASE("weighted sums satisfy the symmetric identities") {
  HurstConfig hc;
  hc.hurst = 0.4;
  hc.level = 10;
  hc.driver_dim = 3;
  const RoughIncrements l = lift_levy_area(sample_fbm(hc, 4, 1), 6);
  std::vector<double> w(l.blocks());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::cos(0.1 * k);
  const SumIndex ab{0, 1, 2};
  const SumIndex ba{1, 0, 2};
  const double qt = weighted_sum(SumKind::QTilde, ab, w, l, nullptr, 0.4);
  const double qt_swap = weighted_sum(SumKind::QTilde, ba, w, l, nullptr, 0.4);
  const double j = weighted_sum(SumKind::J, ab, w, l, nullptr, 0.4);
  CHECK(qt + qt_swap == doctest::Approx(j).epsilon(1e-12));
  const double q = weighted_sum(SumKind::Q, ab, w, l, nullptr, 0.4);
  const double qh = weighted_sum(SumKind::QHat, ab, w, l, nullptr, 0.4);
  CHECK(q == doctest::Approx(qh - qt).epsilon(1e-12));
  const DmProcess dm = dm_process(Scheme::ImplementableMilstein, l, 0.4);
  CHECK(weighted_sum(SumKind::Dm, ab, w, l, &dm, 0.4) == doctest::Approx(q).epsilon(1e-12));
  const DmProcess fe = dm_process(Scheme::FirstOrderEuler, l, 0.4);
  CHECK(weighted_sum(SumKind::Dm, {1, 1, 0}, w, l, &fe, 0.4) ==
        doctest::Approx(-weighted_sum(SumKind::QCheck, {1, 1, 0}, w, l, nullptr, 0.4)).epsilon(1e-12));
  CHECK(weighted_sum(SumKind::I, ab, w, l, nullptr, 0.4) == qt);
  CHECK(weighted_sum(SumKind::I, ab, w, l, nullptr, 0.4, 0.5) ==
        doctest::Approx(weighted_sum(SumKind::I, ab, std::vector<double>(w.begin(), w.begin() + 32), l, nullptr, 0.4, 0.5)));
  CHECK_THROWS_AS(weighted_sum(SumKind::Dm, ab, w, l, nullptr, 0.4), ValidationError);
  CHECK_THROWS_AS(weighted_sum(SumKind::J, {0, 3, 0}, w, l, nullptr, 0.4), ValidationError);
}

TEST_CASE("limit draw vanishes for commuting or one-dimensional noise") {
  HurstConfig hc;
  hc.level = 8;
  const RoughIncrements l = lift_levy_area(sample_fbm(hc, 2, 0), 5);
  const auto field = make_field("additive2");
  const Eigen::Vector2d xi(0.0, 0.0);
  const DiscreteSolution sol = solve(Scheme::ImplementableMilstein, *field, l, xi);
  const DmProcess dm = dm_process(Scheme::ImplementableMilstein, l, 0.4);
  const JacobianPath jp = jacobian_path(*field, l, &dm, 0.0, sol.path);
  const LimitDraw d = limit_sample(*field, sol.path, jp, 0.7, 1);
  CHECK(d.sample.norm() == 0.0);
  CHECK(d.conditional_cov.norm() == 0.0);
}

TEST_CASE("limit draw: pair swap flips the sign and covariance matches sampling") {
  HurstConfig hc;
  hc.level = 9;
  const RoughIncrements l = lift_levy_area(sample_fbm(hc, 2, 0), 5);
  const auto field = make_field("tanh2");
  const Eigen::Vector2d xi(0.5, -0.3);
  const DiscreteSolution sol = solve(Scheme::ImplementableMilstein, *field, l, xi);
  const DmProcess dm = dm_process(Scheme::ImplementableMilstein, l, 0.4);
  const JacobianPath jp = jacobian_path(*field, l, &dm, 0.0, sol.path);
  const LimitDraw a = limit_sample(*field, sol.path, jp, 0.8, 5, 3);
  const LimitDraw b = limit_sample(*field, sol.path, jp, 0.8, 5, 3, true);
  CHECK((a.sample + b.sample).norm() < 1e-15);
  CHECK((a.conditional_cov - b.conditional_cov).norm() < 1e-15);
  std::vector<double> x0, x1, x01;
  for (std::uint64_t p = 0; p < 20000; ++p) {
    const Eigen::VectorXd s = limit_sample(*field, sol.path, jp, 0.8, 9, p).sample;
    x0.push_back(s(0) * s(0));
    x1.push_back(s(1) * s(1));
    x01.push_back(s(0) * s(1));
  }
  const auto s0 = sample_stats(x0);
  const auto s1 = sample_stats(x1);
  const auto s01 = sample_stats(x01);
  CHECK(std::abs(s0.mean - a.conditional_cov(0, 0)) < 4 * s0.std_error);
  CHECK(std::abs(s1.mean - a.conditional_cov(1, 1)) < 4 * s1.std_error);
  CHECK(std::abs(s01.mean - a.conditional_cov(0, 1)) < 4 * s01.std_error);
}

TEST_CASE("error process for the Milstein reference itself is zero") {
  HurstConfig hc;
  hc.level = 9;
  const RoughIncrements l = lift_levy_area(sample_fbm(hc, 2, 0), 6);
  const auto field = make_field("tanh2");
  const Eigen::Vector2d xi(0.5, -0.3);
  const DiscreteSolution m = solve(Scheme::Milstein, *field, l, xi);
  const DmProcess dm = dm_process(Scheme::Milstein, l, 0.4);
  const JacobianPath jp = jacobian_path(*field, l, &dm, 0.0, m.path);
  const ErrorProcess e = error_process(*field, m, m.path, jp, l, dm, 0.4);
  CHECK(e.max_remainder == 0.0);
}

TEST_CASE("convergence sweep: additive noise is flagged degenerate") {
  ConvergenceSpec s;
  s.field = "additive2";
  s.m_min = 3;
  s.m_max = 7;
  s.paths = 4;
  s.ref_offset = 4;
  s.kappa = 1;
  const ConvergenceReport r = run_convergence(s);
  CHECK(r.report.degenerate);
  CHECK(std::isnan(r.report.fit.slope));
  CHECK(std::abs(r.terminal_variance) < 1e-20);
  CHECK(std::abs(r.limit_variance) < 1e-20);
}

TEST_CASE("convergence sweep needs five levels") {
  ConvergenceSpec bad;
  bad.m_min = 6;
  bad.m_max = 8;
  CHECK_THROWS_AS(run_convergence(bad), ValidationError);
}
