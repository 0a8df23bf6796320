#include "roughlab/mc.hpp"

#include <cmath>
#include <cstdlib>

#include <boost/math/distributions/students_t.hpp>

#include "roughlab/errors.hpp"

namespace roughlab {

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    require(*flag >= 1, "threads: must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("ROUGH_ERROR_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    require(end != env && *end == '\0' && v >= 1,
            "ROUGH_ERROR_LAB_THREADS: must be a positive integer");
    return static_cast<int>(v);
  }
  return 1;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

SampleStats sample_stats(const std::vector<double>& x) {
  require(x.size() >= 2, "sample_stats: need at least two samples");
  SampleStats s;
  s.count = x.size();
  const double n = static_cast<double>(x.size());
  s.mean = pairwise_sum(x) / n;
  std::vector<double> d2(x.size());
  std::vector<double> d4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - s.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = pairwise_sum(d2) / n;
  const double m4 = pairwise_sum(d4) / n;
  s.variance = m2 * n / (n - 1.0);
  s.std_error = std::sqrt(s.variance / n);
  s.variance_std_error = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return s;
}

RegressionFit ols(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t min_points) {
  require(x.size() == y.size(), "ols: x and y differ in length");
  require(x.size() >= min_points && x.size() >= 3, "ols: too few points for a regression");
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "ols: x values must not all coincide");
  RegressionFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  const double se = std::sqrt(sse / (n - 2.0) / sxx);
  boost::math::students_t dist(n - 2.0);
  f.half_width = boost::math::quantile(dist, 0.975) * se;
  return f;
}

double median(std::vector<double> x) {
  require(!x.empty(), "median: empty input");
  std::sort(x.begin(), x.end());
  const std::size_t h = x.size() / 2;
  return x.size() % 2 ? x[h] : 0.5 * (x[h - 1] + x[h]);
}

}  // namespace roughlab
