#include "roughlab/young.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roughlab/errors.hpp"
#include "roughlab/grid_fbm.hpp"

namespace roughlab {

namespace {

void check_partition(const std::vector<double>& x, const char* name) {
  require(x.size() >= 2, std::string("grid function: partition ") + name + " needs >= 2 points");
  for (std::size_t i = 1; i < x.size(); ++i)
    require(x[i] > x[i - 1], std::string("grid function: partition ") + name +
                                 " must be strictly increasing");
}

}  // namespace

GridFunction2D::GridFunction2D(std::vector<double> u, std::vector<double> v,
                               std::vector<double> values)
    : u_(std::move(u)), v_(std::move(v)), values_(std::move(values)) {
  check_partition(u_, "u");
  check_partition(v_, "v");
  require(values_.size() == u_.size() * v_.size(), "grid function: value matrix size mismatch");
}

GridFunction2D GridFunction2D::from_function(std::vector<double> u, std::vector<double> v,
                                             const std::function<double(double, double)>& f) {
  std::vector<double> values(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) values[i * v.size() + j] = f(u[i], v[j]);
  return GridFunction2D(std::move(u), std::move(v), std::move(values));
}

double GridFunction2D::rect(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
  return at(i1, j1) - at(i0, j1) - at(i1, j0) + at(i0, j0);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t cells) {
  require(cells >= 1 && hi > lo, "uniform_grid: need hi > lo and at least one cell");
  std::vector<double> x(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  x[cells] = hi;
  return x;
}

double young_integral_2d(const GridFunction2D& f, const GridFunction2D& g) {
  require(f.u() == g.u() && f.v() == g.v(), "young_integral_2d: grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 1; i < f.u().size(); ++i)
    for (std::size_t j = 1; j < f.v().size(); ++j)
      sum += f.at(i - 1, j - 1) * g.rect(i - 1, i, j - 1, j);
  return sum;
}

namespace {

double partition_sum(const GridFunction2D& f, const std::vector<std::size_t>& pu,
                     const std::vector<std::size_t>& pv, double p) {
  double s = 0.0;
  for (std::size_t a = 1; a < pu.size(); ++a)
    for (std::size_t b = 1; b < pv.size(); ++b)
      s += std::pow(std::abs(f.rect(pu[a - 1], pu[a], pv[b - 1], pv[b])), p);
  return s;
}

std::vector<std::size_t> thinned_indices(std::size_t count, std::size_t max_points) {
  std::vector<std::size_t> idx;
  if (count <= max_points) {
    for (std::size_t i = 0; i < count; ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t k = 0; k < max_points; ++k)
    idx.push_back(k * (count - 1) / (max_points - 1));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

// Change of the p-sum when partition point `pos` of `along` is removed.
double removal_gain(const GridFunction2D& f, const std::vector<std::size_t>& along,
                    const std::vector<std::size_t>& across, std::size_t pos, double p,
                    bool along_u) {
  double before = 0.0;
  double after = 0.0;
  const std::size_t lo = along[pos - 1];
  const std::size_t mid = along[pos];
  const std::size_t hi = along[pos + 1];
  for (std::size_t b = 1; b < across.size(); ++b) {
    const std::size_t c0 = across[b - 1];
    const std::size_t c1 = across[b];
    if (along_u) {
      before += std::pow(std::abs(f.rect(lo, mid, c0, c1)), p) +
                std::pow(std::abs(f.rect(mid, hi, c0, c1)), p);
      after += std::pow(std::abs(f.rect(lo, hi, c0, c1)), p);
    } else {
      before += std::pow(std::abs(f.rect(c0, c1, lo, mid)), p) +
                std::pow(std::abs(f.rect(c0, c1, mid, hi)), p);
      after += std::pow(std::abs(f.rect(c0, c1, lo, hi)), p);
    }
  }
  return after - before;
}

}  // namespace

VariationEstimate vp_norm_grid(const GridFunction2D& f, double p) {
  require(p >= 1.0, "vp_norm_grid: p must be >= 1");
  std::vector<std::size_t> all_u = thinned_indices(f.u().size(), f.u().size());
  std::vector<std::size_t> all_v = thinned_indices(f.v().size(), f.v().size());
  VariationEstimate est;
  est.full_grid = std::pow(partition_sum(f, all_u, all_v, p), 1.0 / p);

  constexpr std::size_t kMaxPoints = 129;
  std::vector<std::size_t> pu = thinned_indices(f.u().size(), kMaxPoints);
  std::vector<std::size_t> pv = thinned_indices(f.v().size(), kMaxPoints);
  double current = partition_sum(f, pu, pv, p);
  for (;;) {
    double best_gain = 0.0;
    std::size_t best_pos = 0;
    bool best_u = true;
    for (std::size_t pos = 1; pos + 1 < pu.size(); ++pos) {
      const double g = removal_gain(f, pu, pv, pos, p, true);
      if (g > best_gain) {
        best_gain = g;
        best_pos = pos;
        best_u = true;
      }
    }
    for (std::size_t pos = 1; pos + 1 < pv.size(); ++pos) {
      const double g = removal_gain(f, pv, pu, pos, p, false);
      if (g > best_gain) {
        best_gain = g;
        best_pos = pos;
        best_u = false;
      }
    }
    if (best_gain <= 1e-15 * std::max(1.0, current)) break;
    if (best_u)
      pu.erase(pu.begin() + static_cast<long>(best_pos));
    else
      pv.erase(pv.begin() + static_cast<long>(best_pos));
    current += best_gain;
  }
  est.greedy = std::pow(std::max(current, 0.0), 1.0 / p);
  est.value = std::max(est.full_grid, est.greedy);
  return est;
}

double tilde_rho_sum(double hurst, int lag, long n) {
  require(n >= 2, "tilde_rho: grid must have n >= 2");
  require(lag >= 0, "tilde_rho: lag must be >= 0");
  const double h = 2.0 * hurst;
  const double i = lag;
  const double dn = static_cast<double>(n);
  // g[j + n] = n^{-2H} rho(i n + j): cell increments of R depend on j = k' - k only.
  std::vector<double> g(2 * n + 1, 0.0);
  std::vector<double> prefix(2 * n + 2, 0.0);
  const double scale = std::pow(dn, -h);
  for (long j = -(n - 1); j <= n - 1; ++j) g[j + n] = scale * rho(hurst, i * dn + j);
  for (long t = 0; t < 2 * n + 1; ++t) prefix[t + 1] = prefix[t] + g[t];
  auto range = [&](long lo, long hi) { return prefix[hi + n + 1] - prefix[lo + n]; };

  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  for (long k = 1; k <= n; ++k) t1 += std::pow(std::abs(i - (k - 1) / dn), h) * range(1 - k, n - k);
  for (long k = 1; k <= n; ++k) t2 += std::pow(i + (k - 1) / dn, h) * range(k - n, k - 1);
  for (long j = -(n - 1); j <= n - 1; ++j) {
    const double mult = static_cast<double>(n - (j < 0 ? -j : j));
    t3 += mult * std::pow(std::abs(i + j / dn), h) * g[j + n];
    t4 += mult * g[j + n];
  }
  return 0.5 * (t1 + t2 - t3 - std::pow(i, h) * t4);
}

namespace {

// Two-stage Richardson in the error exponents n^{1-4H} and n^{-1}.
QuadratureResult extrapolate(double hurst, const QuadratureOptions& opt,
                             const std::function<double(long)>& sum, long max_grid,
                             const char* what) {
  require(opt.initial_grid >= 2, std::string(what) + ": initial grid must be >= 2");
  require(opt.tolerance > 0.0, std::string(what) + ": tolerance must be > 0");
  const double p1 = 4.0 * hurst - 1.0;
  const double p2 = std::abs(p1 - 1.0) < 1e-9 ? 2.0 : 1.0;
  const double f1 = std::pow(2.0, p1);
  const double f2 = std::pow(2.0, p2);
  QuadratureResult res;
  std::vector<double> r1;
  long n = opt.initial_grid;
  for (int step = 0; step <= opt.max_doublings && n <= max_grid; ++step, n *= 2) {
    res.grids.push_back(n);
    res.raw.push_back(sum(n));
    res.grid = n;
    const std::size_t j = res.raw.size() - 1;
    if (j >= 1) r1.push_back((f1 * res.raw[j] - res.raw[j - 1]) / (f1 - 1.0));
    if (r1.size() >= 2) {
      const std::size_t q = r1.size() - 1;
      res.extrapolated.push_back((f2 * r1[q] - r1[q - 1]) / (f2 - 1.0));
    }
    if (res.extrapolated.size() >= 2) {
      const std::size_t q = res.extrapolated.size() - 1;
      if (std::abs(res.extrapolated[q] - res.extrapolated[q - 1]) < opt.tolerance) {
        res.value = res.extrapolated[q];
        return res;
      }
    }
  }
  std::ostringstream msg;
  msg.precision(12);
  msg << what << ": no convergence after " << res.raw.size() << " grids";
  if (res.extrapolated.size() >= 2)
    msg << ", last two values " << res.extrapolated[res.extrapolated.size() - 2] << " and "
        << res.extrapolated.back();
  throw NumericalError(msg.str());
}

}  // namespace

QuadratureResult tilde_rho(double hurst, int lag, const QuadratureOptions& options) {
  validate_exponents(hurst, HurstConfig::default_h_minus(hurst));
  return extrapolate(hurst, options, [&](long n) { return tilde_rho_sum(hurst, lag, n); },
                     long{1} << 24, "tilde_rho");
}

double levy_cov(double hurst, int level, long i, long j, const QuadratureOptions& options) {
  require(level >= 0, "levy_cov: level must be >= 0");
  const long lag = i > j ? i - j : j - i;
  return std::pow(dyadic_step(level), 4.0 * hurst) *
         tilde_rho(hurst, static_cast<int>(lag), options).value;
}

double iterated_cov_sum(double hurst, int order, double s, double t, long n) {
  require(order >= 1, "iterated_cov: order must be >= 1");
  require(t > s && s >= 0.0, "iterated_cov: need 0 <= s < t");
  require(n >= 2, "iterated_cov: grid must have n >= 2");
  const double h = (t - s) / static_cast<double>(n);
  if (order == 1) return std::pow(t - s, 2.0 * hurst);
  const std::size_t w = static_cast<std::size_t>(n) + 1;
  // Cell increments of R: h^{2H} rho(i - j).
  std::vector<double> cell(2 * n + 1);
  for (long j = -n; j <= n; ++j) cell[j + n] = std::pow(h, 2.0 * hurst) * rho(hurst, j);
  // R^1_s(u_i, v_j) = R([s, u_i] x [s, v_j]).
  std::vector<double> cur(w * w, 0.0);
  for (std::size_t a = 1; a < w; ++a)
    for (std::size_t b = 1; b < w; ++b)
      cur[a * w + b] = rect_cov(hurst, {s, s + a * h}, {s, s + b * h});
  std::vector<double> next(w * w);
  for (int l = 2; l <= order; ++l) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 1; a < w; ++a)
      for (std::size_t b = 1; b < w; ++b) {
        const long lag = static_cast<long>(a) - static_cast<long>(b);
        next[a * w + b] = next[(a - 1) * w + b] + next[a * w + b - 1] - next[(a - 1) * w + b - 1] +
                          cur[(a - 1) * w + b - 1] * cell[lag + n];
      }
    std::swap(cur, next);
  }
  return cur[w * w - 1];
}

QuadratureResult iterated_cov(double hurst, int order, double s, double t,
                              const QuadratureOptions& options) {
  require(hurst > 0.0 && hurst <= 0.5, "iterated_cov: H must lie in (0, 1/2]");
  if (order == 1) {
    QuadratureResult r;
    r.value = std::pow(t - s, 2.0 * hurst);
    r.grid = options.initial_grid;
    return r;
  }
  return extrapolate(hurst, options,
                     [&](long n) { return iterated_cov_sum(hurst, order, s, t, n); }, 4096,
                     "iterated_cov");
}

}  // namespace roughlab
