#include "roughlab/grid_fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fftw3.h>

#include "roughlab/errors.hpp"
#include "roughlab/rng.hpp"

namespace roughlab {

double HurstConfig::default_h_minus(double hurst) {
  if (hurst >= 0.5) return 5.0 / 12.0;
  const double lo = std::max(1.0 / 3.0, 2.0 * hurst - 0.5);
  return 0.5 * (lo + hurst);
}

double HurstConfig::effective_h_minus() const {
  return h_minus > 0.0 ? h_minus : default_h_minus(hurst);
}

void validate_exponents(double hurst, double h_minus) {
  require(hurst > 1.0 / 3.0 && hurst <= 0.5,
          "hurst: must lie in (1/3, 1/2], got " + std::to_string(hurst));
  if (hurst < 0.5) {
    const double lo = std::max(1.0 / 3.0, 2.0 * hurst - 0.5);
    require(h_minus > lo && h_minus < hurst,
            "h_minus: must lie in (max(1/3, 2H-1/2), H), got " + std::to_string(h_minus));
  } else {
    require(h_minus > 1.0 / 3.0 && h_minus < 0.5,
            "h_minus: must lie in (1/3, 1/2) for H = 1/2, got " + std::to_string(h_minus));
  }
}

void HurstConfig::validate() const {
  validate_exponents(hurst, effective_h_minus());
  require(level >= 1, "m: dyadic level must be >= 1");
  require(level <= 26, "m: dyadic level must be <= 26");
  require(driver_dim >= 1, "d: driver dimension must be >= 1");
  require(state_dim >= 1, "n: state dimension must be >= 1");
}

namespace {

void check_rho_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst <= 0.5))
    throw ValidationError("hurst: rho requires H in (0, 1/2], got " + std::to_string(hurst));
}

// x^{2H} sum_{r>=1} binom(2H, 2r) x^{-2r}, free of cancellation for large x.
double rho_series(double two_h, double x) {
  const double inv2 = 1.0 / (x * x);
  double coef = 1.0;  // binom(2H, j) built incrementally
  double power = 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 60; ++j) {
    coef *= (two_h - (j - 1)) / j;
    if (j % 2 == 0) {
      power *= inv2;
      const double term = coef * power;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    if (coef == 0.0) break;
  }
  return std::pow(x, two_h) * sum;
}

}  // namespace

double rho(double hurst, double lag) {
  check_rho_hurst(hurst);
  const double x = std::abs(lag);
  const double two_h = 2.0 * hurst;
  if (x >= 16.0) return rho_series(two_h, x);
  return 0.5 * (std::pow(x + 1.0, two_h) + std::pow(std::abs(x - 1.0), two_h) -
                2.0 * std::pow(x, two_h));
}

double fbm_cov(double hurst, double s, double t) {
  require(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0, "fbm_cov: times must lie in [0, 1]");
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

double rect_cov(double hurst, Interval a, Interval b) {
  require(a.lo < a.hi && b.lo < b.hi, "rect_cov: blocks must satisfy lo < hi");
  require(a.lo >= 0.0 && b.lo >= 0.0, "rect_cov: blocks must start at times >= 0");
  const double two_h = 2.0 * hurst;
  const double len = a.hi - a.lo;
  if (len == b.hi - b.lo) {
    const double lag = (b.lo - a.lo) / len;
    return std::pow(len, two_h) * rho(hurst, lag);
  }
  auto p = [two_h](double x) { return std::pow(std::abs(x), two_h); };
  return 0.5 * (p(b.hi - a.lo) + p(b.lo - a.hi) - p(b.hi - a.hi) - p(b.lo - a.lo));
}

std::vector<double> FbmSample::increments(int component) const {
  const auto& v = values.at(static_cast<std::size_t>(component));
  std::vector<double> out(v.size() - 1);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) out[k] = v[k + 1] - v[k];
  return out;
}

FbmSample FbmSample::from_values(int level, std::vector<std::vector<double>> values) {
  require(level >= 0, "from_values: level must be >= 0");
  require(!values.empty(), "from_values: at least one component required");
  for (const auto& v : values) {
    require(v.size() == dyadic_blocks(level) + 1, "from_values: component length must be 2^m + 1");
    require(v.front() == 0.0, "from_values: each component must start at 0");
  }
  FbmSample s;
  s.level = level;
  s.values = std::move(values);
  return s;
}

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* data = nullptr;
  std::size_t size = 0;
  ~FftwBuffer() {
    if (data) fftw_free(data);
  }
  fftw_complex* get(std::size_t n) {
    if (size < n) {
      if (data) fftw_free(data);
      data = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
      if (!data) throw NumericalError("fbm sampler: FFT buffer allocation failed");
      size = n;
    }
    return data;
  }
};

constexpr std::size_t kMaxCholesky = std::size_t{1} << 12;

}  // namespace

struct FbmSampler::Impl {
  SamplerMethod method = SamplerMethod::Auto;
  bool brownian = false;
  std::size_t n = 0;
  double scale = 1.0;  // Delta^H
  std::vector<double> sqrt_eig;  // circulant: sqrt(lambda_j / 2n)
  fftw_plan plan = nullptr;
  Eigen::MatrixXd chol;

  ~Impl() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fftw_destroy_plan(plan);
    }
  }

  void build_circulant(double hurst) {
    const std::size_t m2 = 2 * n;
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m2));
    plan = fftw_plan_dft_1d(static_cast<int>(m2), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    for (std::size_t j = 0; j < m2; ++j) {
      const std::size_t lag = j <= n ? j : m2 - j;
      buf[j][0] = rho(hurst, static_cast<double>(lag));
      buf[j][1] = 0.0;
    }
    fftw_execute(plan);
    sqrt_eig.resize(m2);
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::size_t j = 0; j < m2; ++j) {
      max_eig = std::max(max_eig, buf[j][0]);
      min_eig = std::min(min_eig, buf[j][0]);
    }
    for (std::size_t j = 0; j < m2; ++j)
      sqrt_eig[j] = std::sqrt(std::max(buf[j][0], 0.0) / static_cast<double>(m2));
    fftw_free(buf);
    if (min_eig < -1e-12 * std::max(1.0, max_eig)) {
      fftw_destroy_plan(plan);
      plan = nullptr;
      method = SamplerMethod::Cholesky;
    } else {
      method = SamplerMethod::Circulant;
    }
  }

  void build_cholesky(double hurst) {
    if (n > kMaxCholesky)
      throw NumericalError("fbm sampler: circulant embedding not PSD and grid too large for Cholesky");
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cov(i, j) = rho(hurst, static_cast<double>(i > j ? i - j : j - i));
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      cov.diagonal().array() += 1e-12;
      llt.compute(cov);
      if (llt.info() != Eigen::Success)
        throw NumericalError("fbm sampler: increment covariance not positive semidefinite");
    }
    chol = llt.matrixL();
    method = SamplerMethod::Cholesky;
  }
};

FbmSampler::FbmSampler(double hurst, int level, int dim, SamplerMethod method)
    : hurst_(hurst), level_(level), dim_(dim) {
  require(hurst > 0.0 && hurst <= 0.5, "hurst: sampler requires H in (0, 1/2]");
  require(level >= 0 && level <= 26, "m: sampler level must lie in [0, 26]");
  require(dim >= 1, "d: driver dimension must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->n = dyadic_blocks(level);
  impl->scale = std::pow(dyadic_step(level), hurst);
  if (method == SamplerMethod::Cholesky) {
    impl->build_cholesky(hurst);
  } else if (hurst == 0.5) {
    impl->brownian = true;
    impl->method = SamplerMethod::Circulant;
  } else {
    impl->build_circulant(hurst);
    if (impl->method == SamplerMethod::Cholesky) impl->build_cholesky(hurst);
  }
  impl_ = std::move(impl);
}

SamplerMethod FbmSampler::method() const { return impl_->method; }

void FbmSampler::sample_increments(std::uint64_t seed, std::uint64_t path,
                                   std::vector<std::vector<double>>& out) const {
  const Impl& im = *impl_;
  const std::size_t n = im.n;
  out.resize(static_cast<std::size_t>(dim_));
  for (auto& v : out) v.resize(n);
  const int pairs = (dim_ + 1) / 2;
  for (int p = 0; p < pairs; ++p) {
    NormalStream normal(seed, path, streams::fbm + static_cast<std::uint64_t>(p));
    const int a = 2 * p;
    const bool has_second = a + 1 < dim_;
    if (im.method == SamplerMethod::Cholesky) {
      for (int c = a; c < a + (has_second ? 2 : 1); ++c) {
        Eigen::VectorXd z(n);
        for (std::size_t k = 0; k < n; ++k) z[k] = normal();
        Eigen::VectorXd x = im.chol.triangularView<Eigen::Lower>() * z;
        for (std::size_t k = 0; k < n; ++k) out[c][k] = im.scale * x[k];
      }
    } else if (im.brownian) {
      for (int c = a; c < a + (has_second ? 2 : 1); ++c)
        for (std::size_t k = 0; k < n; ++k) out[c][k] = im.scale * normal();
    } else {
      thread_local FftwBuffer buffer;
      const std::size_t m2 = 2 * n;
      fftw_complex* buf = buffer.get(m2);
      for (std::size_t j = 0; j < m2; ++j) {
        const double z1 = normal();
        const double z2 = normal();
        buf[j][0] = im.sqrt_eig[j] * z1;
        buf[j][1] = im.sqrt_eig[j] * z2;
      }
      fftw_execute_dft(im.plan, buf, buf);
      for (std::size_t k = 0; k < n; ++k) out[a][k] = im.scale * buf[k][0];
      if (has_second)
        for (std::size_t k = 0; k < n; ++k) out[a + 1][k] = im.scale * buf[k][1];
    }
  }
}

FbmSample FbmSampler::sample(std::uint64_t seed, std::uint64_t path) const {
  std::vector<std::vector<double>> inc;
  sample_increments(seed, path, inc);
  FbmSample s;
  s.hurst = hurst_;
  s.level = level_;
  s.seed = seed;
  s.path = path;
  s.values.resize(inc.size());
  for (std::size_t a = 0; a < inc.size(); ++a) {
    auto& v = s.values[a];
    v.resize(inc[a].size() + 1);
    v[0] = 0.0;
    for (std::size_t k = 0; k < inc[a].size(); ++k) v[k + 1] = v[k] + inc[a][k];
  }
  return s;
}

FbmSample sample_fbm(const HurstConfig& config, std::uint64_t seed, std::uint64_t path) {
  config.validate();
  FbmSampler sampler(config.hurst, config.level, config.driver_dim);
  return sampler.sample(seed, path);
}

}  // namespace roughlab
