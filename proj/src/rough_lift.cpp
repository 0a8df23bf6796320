#include "roughlab/rough_lift.hpp"

#include <algorithm>
#include <cmath>

#include "roughlab/errors.hpp"

namespace roughlab {

Level2 Level2::zero(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
}

Level2 chen_compose(const Level2& left, const Level2& right) {
  require(left.first.size() == right.first.size(), "chen_compose: dimension mismatch");
  Level2 out;
  out.first = left.first + right.first;
  out.second = left.second + right.second + left.first * right.first.transpose();
  return out;
}

RoughIncrements::RoughIncrements(int level, int dim, int refinement)
    : level_(level), dim_(dim), refinement_(refinement) {
  require(level >= 0 && level <= 26, "rough increments: level must lie in [0, 26]");
  require(dim >= 1, "rough increments: dimension must be >= 1");
  first_.assign(blocks() * dim, 0.0);
  second_.assign(blocks() * dim * dim, 0.0);
}

Level2 RoughIncrements::block(std::size_t k) const {
  Level2 out = Level2::zero(dim_);
  for (int a = 0; a < dim_; ++a) {
    out.first[a] = first(k)[a];
    for (int b = 0; b < dim_; ++b) out.second(a, b) = second(k, a, b);
  }
  return out;
}

Level2 RoughIncrements::over(std::size_t i, std::size_t j) const {
  require(i <= j && j <= blocks(), "rough increments: grid pair out of range");
  Level2 acc = Level2::zero(dim_);
  for (std::size_t k = i; k < j; ++k) {
    const double* x = first(k);
    const double* s = second(k);
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) acc.second(a, b) += s[a * dim_ + b] + acc.first[a] * x[b];
    for (int a = 0; a < dim_; ++a) acc.first[a] += x[a];
  }
  return acc;
}

Eigen::VectorXd RoughIncrements::value(std::size_t k) const { return over(0, k).first; }

RoughIncrements RoughIncrements::coarsen() const {
  require(level_ >= 1, "rough increments: cannot coarsen level 0");
  RoughIncrements out(level_ - 1, dim_, refinement_ + 1);
  const int d = dim_;
  for (std::size_t k = 0; k < out.blocks(); ++k) {
    const double* x1 = first(2 * k);
    const double* x2 = first(2 * k + 1);
    const double* s1 = second(2 * k);
    const double* s2 = second(2 * k + 1);
    double* f = out.first(k);
    double* s = out.second(k);
    for (int a = 0; a < d; ++a) f[a] = x1[a] + x2[a];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s[a * d + b] = s1[a * d + b] + s2[a * d + b] + x1[a] * x2[b];
    for (int a = 0; a < d; ++a) s[a * d + a] = 0.5 * f[a] * f[a];
  }
  return out;
}

RoughIncrements RoughIncrements::coarsen_to(int level) const {
  require(level >= 0 && level <= level_, "rough increments: target level must not exceed current");
  if (level == level_) return *this;
  RoughIncrements out = coarsen();
  while (out.level() > level) out = out.coarsen();
  return out;
}

RoughIncrements lift_from_increments(const std::vector<std::vector<double>>& inc, int fine_level,
                                     int target_level, LiftRule rule) {
  require(!inc.empty(), "lift: at least one component required");
  require(target_level >= 0 && target_level <= fine_level,
          "lift: fine level must equal target level + refinement (refinement >= 0)");
  const std::size_t n_fine = dyadic_blocks(fine_level);
  for (const auto& v : inc)
    require(v.size() == n_fine, "lift: fine increments do not match the fine level");
  const int d = static_cast<int>(inc.size());
  const int kappa = fine_level - target_level;
  const std::size_t per = std::size_t{1} << kappa;
  RoughIncrements out(target_level, d, kappa);
  std::vector<double> run(d);
  std::vector<double> x(d);
  for (std::size_t k = 0; k < out.blocks(); ++k) {
    double* s = out.second(k);
    std::fill(run.begin(), run.end(), 0.0);
    for (std::size_t i = 0; i < per; ++i) {
      const std::size_t idx = k * per + i;
      for (int a = 0; a < d; ++a) x[a] = inc[a][idx];
      if (rule == LiftRule::Polygon) {
        for (int a = 0; a < d; ++a) {
          const double base = run[a] + 0.5 * x[a];
          for (int b = 0; b < d; ++b) s[a * d + b] += base * x[b];
        }
      } else {
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s[a * d + b] += run[a] * x[b];
      }
      for (int a = 0; a < d; ++a) run[a] += x[a];
    }
    double* f = out.first(k);
    for (int a = 0; a < d; ++a) {
      f[a] = run[a];
      s[a * d + a] = 0.5 * run[a] * run[a];
    }
  }
  return out;
}

RoughIncrements lift_levy_area(const FbmSample& fine, int target_level, LiftRule rule) {
  std::vector<std::vector<double>> inc(fine.values.size());
  for (int a = 0; a < fine.dim(); ++a) inc[a] = fine.increments(a);
  return lift_from_increments(inc, fine.level, target_level, rule);
}

std::string scheme_tag(Scheme s) {
  switch (s) {
    case Scheme::ImplementableMilstein: return "im";
    case Scheme::CrankNicolson: return "cn";
    case Scheme::FirstOrderEuler: return "fe";
    case Scheme::Milstein: return "m";
  }
  return "?";
}

Scheme parse_scheme(const std::string& tag) {
  if (tag == "im") return Scheme::ImplementableMilstein;
  if (tag == "cn") return Scheme::CrankNicolson;
  if (tag == "fe") return Scheme::FirstOrderEuler;
  if (tag == "m") return Scheme::Milstein;
  throw ValidationError("scheme: unknown tag '" + tag + "' (expected im, cn, fe or m)");
}

Eigen::MatrixXd DmProcess::sum(std::size_t i, std::size_t j) const {
  require(i <= j && j <= blocks(), "dm: block range out of bounds");
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = i; k < j; ++k)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) acc(a, b) += (*this)(k, a, b);
  return acc;
}

DmProcess dm_process(Scheme scheme, const RoughIncrements& lift, double hurst) {
  DmProcess dm;
  dm.scheme = scheme;
  dm.level = lift.level();
  dm.dim = lift.dim();
  const int d = lift.dim();
  dm.data.assign(lift.blocks() * d * d, 0.0);
  if (scheme == Scheme::Milstein) return dm;
  const double var = std::pow(lift.step(), 2.0 * hurst);
  for (std::size_t k = 0; k < lift.blocks(); ++k) {
    const double* x = lift.first(k);
    const double* s = lift.second(k);
    double* out = dm.data.data() + k * d * d;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (scheme == Scheme::FirstOrderEuler) {
          out[a * d + b] = a == b ? -0.5 * (x[a] * x[a] - var) : -s[a * d + b];
        } else {
          out[a * d + b] = 0.5 * x[a] * x[b] - s[a * d + b];
        }
      }
  }
  return dm;
}

double holder_norm(const std::vector<double>& times, const std::vector<double>& values, int width,
                   double exponent) {
  require(times.size() >= 2, "holder_norm: at least two grid points required");
  require(width >= 1 && values.size() == times.size() * static_cast<std::size_t>(width),
          "holder_norm: values must hold one row of the given width per time");
  double best = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = i + 1; j < times.size(); ++j) {
      double sq = 0.0;
      for (int c = 0; c < width; ++c) {
        const double diff = values[j * width + c] - values[i * width + c];
        sq += diff * diff;
      }
      best = std::max(best, std::sqrt(sq) / std::pow(std::abs(times[j] - times[i]), exponent));
    }
  return best;
}

OmegaCheck check_omega_m(const RoughIncrements& lift, double h_minus, double threshold) {
  const double h1 = std::pow(lift.step(), h_minus);
  const double h2 = std::pow(lift.step(), 2.0 * h_minus);
  const int d = lift.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < lift.blocks(); ++k) {
    double n1 = 0.0;
    double n2 = 0.0;
    for (int a = 0; a < d; ++a) n1 += lift.first(k)[a] * lift.first(k)[a];
    for (int e = 0; e < d * d; ++e) n2 += lift.second(k)[e] * lift.second(k)[e];
    worst = std::max({worst, std::sqrt(n1) / h1, std::sqrt(n2) / h2});
  }
  return {worst <= threshold, worst};
}

}  // namespace roughlab
