#include <cmath>

#include "doctest.h"
#include "roughlab/errors.hpp"
#include "roughlab/mc.hpp"
#include "roughlab/schemes.hpp"

using namespace roughlab;

namespace {

RoughIncrements sample_lift(double h, int level, int kappa, int dim, std::uint64_t seed,
                            std::uint64_t path = 0) {
  HurstConfig c;
  c.hurst = h;
  c.level = level + kappa;
  c.driver_dim = dim;
  return lift_levy_area(sample_fbm(c, seed, path), level);
}

const Scheme kAll[] = {Scheme::ImplementableMilstein, Scheme::CrankNicolson,
                       Scheme::FirstOrderEuler, Scheme::Milstein};

}  // namespace

TEST_CASE("additive noise: all schemes coincide bit for bit") {
  const auto field = make_field("additive2");
  const RoughIncrements l = sample_lift(0.4, 6, 4, 2, 17);
  const Eigen::Vector2d xi(0.5, -0.3);
  const DiscreteSolution m = solve(Scheme::Milstein, *field, l, xi);
  for (Scheme s : kAll) CHECK(solve(s, *field, l, xi).path.data == m.path.data);
  CHECK(m.path.at(l.blocks())(0) == doctest::Approx(0.5 + l.value(l.blocks())(0) + 0.5 * l.value(l.blocks())(1)));
}

TEST_CASE("pure drift: explicit and trapezoidal growth factors") {
  const auto field = make_field("ode1");
  const RoughIncrements l = sample_lift(0.4, 5, 0, 1, 1);
  Eigen::VectorXd xi(1);
  xi << 1.0;
  const double dt = l.step();
  const double n = static_cast<double>(l.blocks());
  for (Scheme s : {Scheme::ImplementableMilstein, Scheme::FirstOrderEuler, Scheme::Milstein})
    CHECK(solve(s, *field, l, xi).path.at(l.blocks())(0) == doctest::Approx(std::pow(1 + dt, n)).epsilon(1e-13));
  const DiscreteSolution cn = solve(Scheme::CrankNicolson, *field, l, xi);
  CHECK(cn.path.at(l.blocks())(0) ==
        doctest::Approx(std::pow((1 + dt / 2) / (1 - dt / 2), n)).epsilon(1e-11));
  CHECK(cn.max_contraction == doctest::Approx(dt / 2).epsilon(0.05));
}

TEST_CASE("CN validation and non-convergence") {
  const auto field = make_field("ode1");
  const RoughIncrements l = sample_lift(0.4, 3, 0, 1, 1);
  Eigen::VectorXd xi(1);
  xi << 1.0;
  SolveOptions o;
  o.cn_max_iterations = 2;
  o.cn_tolerance = 1e-16;
  CHECK_THROWS_AS(solve(Scheme::CrankNicolson, *field, l, xi, o), NumericalError);
  o.cn_max_iterations = 0;
  CHECK_THROWS_AS(solve(Scheme::CrankNicolson, *field, l, xi, o), ValidationError);
  o = {};
  o.cn_damping = 1.5;
  CHECK_THROWS_AS(solve(Scheme::CrankNicolson, *field, l, xi, o), ValidationError);
  CHECK_THROWS_AS(solve(Scheme::Milstein, *make_field("tanh2"), l, xi), ValidationError);
}

TEST_CASE("CN gate excludes rough paths") {
  const auto field = make_field("tanh2");
  const RoughIncrements l = sample_lift(0.4, 4, 4, 2, 3);
  const Eigen::Vector2d xi(0.5, -0.3);
  SolveOptions o;
  o.omega_gate = OmegaGate::Enforce;
  const DiscreteSolution s = solve(Scheme::CrankNicolson, *field, l, xi, o);
  CHECK(s.excluded);
  for (std::size_t k = 0; k <= l.blocks(); ++k) CHECK(s.path.at(k) == xi);
  const GridPath e = epsilon_hat(s, *field, l);
  const DmProcess dm = dm_process(Scheme::CrankNicolson, l, 0.4);
  CHECK(e.data == step_residuals(s.path, *field, l, &dm).data);
}

TEST_CASE("re-substitution of scheme outputs") {
  const auto field = make_field("tanh2");
  const RoughIncrements l = sample_lift(0.4, 7, 3, 2, 8);
  const Eigen::Vector2d xi(0.5, -0.3);
  for (Scheme s : kAll) {
    const DiscreteSolution sol = solve(s, *field, l, xi);
    const DmProcess dm = dm_process(s, l, 0.4);
    const GridPath r = step_residuals(sol.path, *field, l, &dm);
    const GridPath eh = epsilon_hat(sol, *field, l);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.data.size(); ++i) worst = std::max(worst, std::abs(r.data[i] - eh.data[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("reference residual is zero for the Milstein reference") {
  const auto field = make_field("tanh2");
  const RoughIncrements l = sample_lift(0.4, 6, 0, 2, 2);
  const Eigen::Vector2d xi(0.5, -0.3);
  const DiscreteSolution ref = reference_solution(*field, l, xi, 6);
  const GridPath r = step_residuals(ref.path, *field, l, nullptr);
  for (double v : r.data) CHECK(std::abs(v) < 1e-14);
  const DiscreteSolution coarse = reference_solution(*field, l, xi, 3);
  CHECK(coarse.path.points() == 9);
  CHECK(coarse.path.at(8) == ref.path.at(64));
}

TEST_CASE("linear field: Jacobian equals y / xi") {
  const auto field = make_field("linear1");
  const RoughIncrements l = sample_lift(0.4, 6, 4, 1, 4);
  Eigen::VectorXd xi(1);
  xi << 2.0;
  const DiscreteSolution sol = solve(Scheme::ImplementableMilstein, *field, l, xi);
  const DmProcess dm = dm_process(Scheme::ImplementableMilstein, l, 0.4);
  const JacobianPath j = jacobian_path(*field, l, &dm, 0.0, sol.path);
  for (std::size_t k = 0; k <= l.blocks(); ++k) {
    CHECK(j.at(k)(0, 0) == doctest::Approx(sol.path.at(k)(0) / 2.0).epsilon(1e-12));
    CHECK(j.inv(k)(0, 0) * j.at(k)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(j.segment(3, 4)(0, 0) == doctest::Approx(j.at(7)(0, 0) / j.at(3)(0, 0)).epsilon(1e-12));
  CHECK(j.step_condition > 0.0);
}

TEST_CASE("Milstein error shrinks with the level on the linear field") {
  const auto field = make_field("linear1");
  Eigen::VectorXd xi(1);
  xi << 1.0;
  std::vector<double> x, y;
  for (int m = 3; m <= 8; ++m) {
    std::vector<double> err;
    for (std::size_t p = 0; p < 200; ++p) {
      HurstConfig c;
      c.hurst = 0.45;
      c.level = 14;
      c.driver_dim = 1;
      const FbmSample s = sample_fbm(c, 99, p);
      const double exact = std::exp(s.values[0].back());
      const DiscreteSolution sol = solve(Scheme::Milstein, *field, lift_levy_area(s, m), xi);
      err.push_back(std::pow(sol.path.at(dyadic_blocks(m))(0) - exact, 2));
    }
    x.push_back(m);
    y.push_back(0.5 * std::log2(sample_stats(err).mean));
  }
  CHECK(ols(x, y).slope < -0.3);
}

TEST_CASE("test fields pass the finite-difference derivative check") {
  std::vector<Eigen::VectorXd> probes;
  for (const auto& name : field_names()) {
    const auto f = make_field(name);
    probes.clear();
    for (int k = 0; k < 5; ++k) probes.push_back(Eigen::VectorXd::Constant(f->state_dim(), -1.0 + 0.5 * k));
    CHECK(validate_derivatives(*f, probes) < 1e-6);
  }
  CHECK_THROWS_AS(make_field("nope"), ValidationError);
}

TEST_CASE("step condition grows with the step") {
  const auto f = make_field("tanh2");
  const DerivativeBounds b = estimate_bounds(*f, {Eigen::Vector2d(0.1, 0.2)}, 0.1);
  CHECK(b.dsigma > 0.0);
  CHECK(step_condition(b, 1.0 / 16, 0.36) > step_condition(b, 1.0 / 1024, 0.36));
}
