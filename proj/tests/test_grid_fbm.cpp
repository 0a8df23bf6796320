#include <cmath>

#include "doctest.h"
#include "roughlab/errors.hpp"
#include "roughlab/grid_fbm.hpp"
#include "roughlab/mc.hpp"

using namespace roughlab;

TEST_CASE("rho closed-form values") {
  CHECK(rho(0.4, 0) == 1.0);
  CHECK(rho(0.5, 3) == 0.0);
  CHECK(rho(0.4, 1) == doctest::Approx(-0.12944943670387586).epsilon(1e-14));
  for (int k = 1; k <= 50; ++k) CHECK(rho(0.5, k) == 0.0);
}

TEST_CASE("rho large-lag series matches high-precision values") {
  // 40-digit evaluations of the defining formula.
  const double lags[] = {16, 17, 50, 1000, 1e6};
  const double expected[] = {-0.0028742181226887600244, -0.0026722819208241266924,
                             -0.00073175248317611974945, -0.000020095095872998740919,
                             -5.0476587558426564804e-9};
  for (int i = 0; i < 5; ++i) CHECK(rho(0.4, lags[i]) == doctest::Approx(expected[i]).epsilon(1e-13));
  CHECK(rho(0.4, 15.999999) == doctest::Approx(rho(0.4, 16.0)).epsilon(1e-5));
}

TEST_CASE("rho rejects exponents outside (0, 1/2]") {
  CHECK_THROWS_AS(rho(0.6, 1), ValidationError);
  CHECK_THROWS_AS(rho(0.0, 1), ValidationError);
}

TEST_CASE("rho partial sums of |rho| converge") {
  double partial = 0.0;
  double prev = -1.0;
  for (int k = 0; k <= 2000; ++k) {
    partial += std::abs(rho(0.4, k));
    CHECK(partial > prev);
    prev = partial;
  }
  // Tail after K = 2000 is bounded by H(1-2H) sum_{k>K} (k-1)^{2H-2}.
  const double tail = 0.4 * 0.2 * std::pow(1999.0, 0.8 - 1.0) / 0.2;
  double more = partial;
  for (int k = 2001; k <= 200000; ++k) more += std::abs(rho(0.4, k));
  CHECK(more - partial <= tail);
}

TEST_CASE("fbm_cov examples") {
  CHECK(fbm_cov(0.37, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(fbm_cov(0.4, 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(fbm_cov(0.5, 0.3, 0.7) == doctest::Approx(0.3));
}

TEST_CASE("rect_cov on unit and dyadic blocks") {
  for (int k = 1; k <= 40; ++k)
    for (int l = 1; l <= 40; ++l)
      CHECK(rect_cov(0.4, {k - 1.0, double(k)}, {l - 1.0, double(l)}) == rho(0.4, k - l));
  const int m = 6;
  const double dt = dyadic_step(m);
  for (int k = 1; k <= 10; ++k)
    CHECK(rect_cov(0.4, {0.0, dt}, {(k - 1) * dt, k * dt}) ==
          doctest::Approx(std::pow(2.0, -2.0 * m * 0.4) * rho(0.4, k - 1)).epsilon(1e-14));
  CHECK(rect_cov(0.4, {0, 1}, {0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("rect_cov is additive in each slot") {
  const Interval b{0.45, 0.9};
  const double whole = rect_cov(0.4, {0.1, 0.7}, b);
  const double parts = rect_cov(0.4, {0.1, 0.3}, b) + rect_cov(0.4, {0.3, 0.7}, b);
  CHECK(whole == doctest::Approx(parts).epsilon(1e-14));
  const double w2 = rect_cov(0.4, b, {0.0, 0.5});
  const double p2 = rect_cov(0.4, b, {0.0, 0.25}) + rect_cov(0.4, b, {0.25, 0.5});
  CHECK(w2 == doctest::Approx(p2).epsilon(1e-14));
}

TEST_CASE("HurstConfig validation and default H_minus") {
  HurstConfig c;
  c.hurst = 0.4;
  CHECK(c.effective_h_minus() == doctest::Approx(0.5 * (1.0 / 3.0 + 0.4)));
  CHECK_NOTHROW(c.validate());
  c.hurst = 0.3;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.hurst = 0.45;
  c.h_minus = 0.39;  // below 2H - 1/2
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.h_minus = 0.42;
  CHECK_NOTHROW(c.validate());
  c.hurst = 0.5;
  c.h_minus = 0.45;
  CHECK_NOTHROW(c.validate());
  c.level = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("Brownian sampler has uncorrelated increments") {
  const FbmSampler s(0.5, 3, 1);
  std::vector<double> v0, v01;
  std::vector<std::vector<double>> inc;
  for (std::size_t p = 0; p < 20000; ++p) {
    s.sample_increments(1, p, inc);
    v0.push_back(inc[0][0] * inc[0][0]);
    v01.push_back(inc[0][2] * inc[0][5]);
  }
  const auto a = sample_stats(v0);
  const auto b = sample_stats(v01);
  CHECK(std::abs(a.mean - 0.125) < 4 * a.std_error);
  CHECK(std::abs(b.mean) < 4 * b.std_error);
}

TEST_CASE("fBm sampler reproduces the increment covariance") {
  const int m = 8;
  const double h = 0.4;
  const FbmSampler s(h, m, 2);
  CHECK(s.method() == SamplerMethod::Circulant);
  std::vector<double> lag1, cross, sq;
  std::vector<std::vector<double>> inc;
  for (std::size_t p = 0; p < 10000; ++p) {
    s.sample_increments(7, p, inc);
    lag1.push_back(inc[0][0] * inc[0][1]);
    cross.push_back(inc[0][3] * inc[1][3]);
    double b = 0.0;
    for (int k = 10; k < 42; ++k) b += inc[1][k];
    sq.push_back(b * b);
  }
  const double dt = dyadic_step(m);
  const auto a = sample_stats(lag1);
  CHECK(std::abs(a.mean - std::pow(2.0, -2.0 * m * h) * rho(h, 1)) < 4 * a.std_error);
  const auto c = sample_stats(cross);
  CHECK(std::abs(c.mean) < 4 * c.std_error);
  const auto q = sample_stats(sq);
  CHECK(std::abs(q.mean - std::pow(32 * dt, 2 * h)) < 4 * q.std_error);
}

TEST_CASE("Cholesky fallback samples the same law") {
  const FbmSampler s(0.4, 4, 1, SamplerMethod::Cholesky);
  CHECK(s.method() == SamplerMethod::Cholesky);
  std::vector<double> lag2;
  std::vector<std::vector<double>> inc;
  for (std::size_t p = 0; p < 20000; ++p) {
    s.sample_increments(3, p, inc);
    lag2.push_back(inc[0][4] * inc[0][6]);
  }
  const auto a = sample_stats(lag2);
  CHECK(std::abs(a.mean - std::pow(2.0, -2.0 * 4 * 0.4) * rho(0.4, 2)) < 4 * a.std_error);
}

TEST_CASE("sampling is deterministic per (seed, path)") {
  HurstConfig c;
  c.hurst = 0.4;
  c.level = 6;
  c.driver_dim = 3;
  const FbmSample a = sample_fbm(c, 11, 2);
  const FbmSample b = sample_fbm(c, 11, 2);
  const FbmSample other = sample_fbm(c, 11, 3);
  CHECK(a.values == b.values);
  CHECK(a.values != other.values);
  for (const auto& v : a.values) {
    CHECK(v.size() == 65);
    CHECK(v[0] == 0.0);
  }
}

TEST_CASE("injected paths are validated") {
  CHECK_NOTHROW(FbmSample::from_values(1, {{0.0, 0.5, 1.0}}));
  CHECK_THROWS_AS(FbmSample::from_values(1, {{0.1, 0.5, 1.0}}), ValidationError);
  CHECK_THROWS_AS(FbmSample::from_values(2, {{0.0, 0.5, 1.0}}), ValidationError);
}
