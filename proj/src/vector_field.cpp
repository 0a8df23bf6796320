#include "roughlab/vector_field.hpp"

#include <algorithm>
#include <cmath>

#include "roughlab/errors.hpp"

namespace roughlab {

void FieldJet::resize(int state_dim, int driver_dim) {
  n = state_dim;
  d = driver_dim;
  sigma.assign(n * d, 0.0);
  dsigma.assign(n * d * n, 0.0);
  d2sigma.assign(n * d * n * n, 0.0);
  drift.assign(n, 0.0);
  ddrift.assign(n * n, 0.0);
}

double FieldJet::c(int i, int a, int b) const {
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += ds(i, b, j) * s(j, a);
  return acc;
}

double FieldJet::dc(int i, int a, int b, int l) const {
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += dds(i, b, j, l) * s(j, a) + ds(i, b, j) * ds(j, a, l);
  return acc;
}

TanhField::TanhField(std::string name, int n, int d, std::vector<Entry> sigma,
                     std::vector<Entry> drift)
    : name_(std::move(name)), n_(n), d_(d), sigma_(std::move(sigma)), drift_(std::move(drift)) {
  require(n >= 1 && d >= 1, "tanh field: dimensions must be >= 1");
  require(sigma_.size() == static_cast<std::size_t>(n * d), "tanh field: need n*d sigma entries");
  require(drift_.size() == static_cast<std::size_t>(n), "tanh field: need n drift entries");
  for (const auto* group : {&sigma_, &drift_})
    for (const auto& e : *group)
      require(e.weights.size() == static_cast<std::size_t>(n), "tanh field: weights must have n entries");
}

namespace {

// Value and first two derivatives of a + s tanh(<w, y> + phi).
struct TanhEval {
  double value;
  double d1;  // coefficient of w_l
  double d2;  // coefficient of w_l w_r
};

TanhEval eval_entry(const TanhField::Entry& e, const double* y, int n) {
  double z = e.phase;
  for (int l = 0; l < n; ++l) z += e.weights[l] * y[l];
  const double t = std::tanh(z);
  const double sech2 = 1.0 - t * t;
  return {e.offset + e.scale * t, e.scale * sech2, -2.0 * e.scale * t * sech2};
}

}  // namespace

void TanhField::eval(const double* y, FieldJet& jet, int order) const {
  if (jet.n != n_ || jet.d != d_) jet.resize(n_, d_);
  for (int i = 0; i < n_; ++i) {
    for (int a = 0; a < d_; ++a) {
      const Entry& e = sigma_[i * d_ + a];
      const TanhEval v = eval_entry(e, y, n_);
      jet.sigma[i * d_ + a] = v.value;
      if (order >= 1)
        for (int l = 0; l < n_; ++l) jet.dsigma[(i * d_ + a) * n_ + l] = v.d1 * e.weights[l];
      if (order >= 2)
        for (int l = 0; l < n_; ++l)
          for (int r = 0; r < n_; ++r)
            jet.d2sigma[((i * d_ + a) * n_ + l) * n_ + r] = v.d2 * e.weights[l] * e.weights[r];
    }
    const TanhEval v = eval_entry(drift_[i], y, n_);
    jet.drift[i] = v.value;
    if (order >= 1)
      for (int l = 0; l < n_; ++l) jet.ddrift[i * n_ + l] = v.d1 * drift_[i].weights[l];
  }
}

AffineField::AffineField(std::string name, int n, int d, std::vector<double> a,
                         std::vector<double> l, std::vector<double> b0, std::vector<double> g)
    : name_(std::move(name)), n_(n), d_(d), a_(std::move(a)), l_(std::move(l)), b0_(std::move(b0)),
      g_(std::move(g)) {
  require(a_.size() == static_cast<std::size_t>(n * d), "affine field: A must be n x d");
  require(l_.size() == static_cast<std::size_t>(n * d * n), "affine field: L must be n x d x n");
  require(b0_.size() == static_cast<std::size_t>(n), "affine field: b0 must have n entries");
  require(g_.size() == static_cast<std::size_t>(n * n), "affine field: G must be n x n");
}

void AffineField::eval(const double* y, FieldJet& jet, int order) const {
  if (jet.n != n_ || jet.d != d_) jet.resize(n_, d_);
  for (int i = 0; i < n_; ++i) {
    for (int a = 0; a < d_; ++a) {
      double v = a_[i * d_ + a];
      for (int l = 0; l < n_; ++l) v += l_[(i * d_ + a) * n_ + l] * y[l];
      jet.sigma[i * d_ + a] = v;
    }
    double b = b0_[i];
    for (int l = 0; l < n_; ++l) b += g_[i * n_ + l] * y[l];
    jet.drift[i] = b;
  }
  if (order >= 1) {
    std::copy(l_.begin(), l_.end(), jet.dsigma.begin());
    std::copy(g_.begin(), g_.end(), jet.ddrift.begin());
  }
  if (order >= 2) std::fill(jet.d2sigma.begin(), jet.d2sigma.end(), 0.0);
}

std::unique_ptr<VectorField> make_field(const std::string& name) {
  using E = TanhField::Entry;
  if (name == "tanh2") {
    std::vector<E> sigma = {
        {1.0, 0.3, {0.8, -0.5}, 0.1},
        {0.0, 0.4, {0.6, 0.9}, -0.2},
        {0.0, 0.5, {-0.7, 0.4}, 0.3},
        {0.9, 0.3, {0.5, 0.7}, 0.0},
    };
    std::vector<E> drift = {
        {0.0, 0.2, {0.0, 1.0}, 0.0},
        {0.0, -0.3, {1.0, 0.0}, 0.0},
    };
    return std::make_unique<TanhField>("tanh2", 2, 2, sigma, drift);
  }
  if (name == "tanh1") {
    return std::make_unique<TanhField>("tanh1", 1, 1, std::vector<E>{{1.0, 0.5, {1.0}, 0.2}},
                                       std::vector<E>{{0.0, 0.2, {1.0}, 0.0}});
  }
  if (name == "additive2") {
    return std::make_unique<AffineField>("additive2", 2, 2, std::vector<double>{1.0, 0.5, -0.3, 0.8},
                                         std::vector<double>(8, 0.0),
                                         std::vector<double>{0.0, 0.0},
                                         std::vector<double>(4, 0.0));
  }
  if (name == "linear1") {
    return std::make_unique<AffineField>("linear1", 1, 1, std::vector<double>{0.0},
                                         std::vector<double>{1.0}, std::vector<double>{0.0},
                                         std::vector<double>{0.0});
  }
  if (name == "ode1") {
    return std::make_unique<AffineField>("ode1", 1, 1, std::vector<double>{0.0},
                                         std::vector<double>{0.0}, std::vector<double>{0.0},
                                         std::vector<double>{1.0});
  }
  throw ValidationError("field: unknown test field '" + name + "'");
}

std::vector<std::string> field_names() { return {"tanh2", "tanh1", "additive2", "linear1", "ode1"}; }

double validate_derivatives(const VectorField& field, const std::vector<Eigen::VectorXd>& probes,
                            double h) {
  const int n = field.state_dim();
  const int d = field.driver_dim();
  FieldJet base;
  FieldJet plus;
  FieldJet minus;
  base.resize(n, d);
  plus.resize(n, d);
  minus.resize(n, d);
  double worst = 0.0;
  for (const auto& y : probes) {
    require(y.size() == n, "validate_derivatives: probe dimension mismatch");
    field.eval(y.data(), base, 2);
    for (int l = 0; l < n; ++l) {
      Eigen::VectorXd yp = y;
      Eigen::VectorXd ym = y;
      yp[l] += h;
      ym[l] -= h;
      field.eval(yp.data(), plus, 1);
      field.eval(ym.data(), minus, 1);
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < d; ++a) {
          const double fd = (plus.s(i, a) - minus.s(i, a)) / (2 * h);
          worst = std::max(worst, std::abs(fd - base.ds(i, a, l)));
          for (int r = 0; r < n; ++r) {
            const double fd2 = (plus.ds(i, a, r) - minus.ds(i, a, r)) / (2 * h);
            worst = std::max(worst, std::abs(fd2 - base.dds(i, a, r, l)));
          }
        }
        const double fdb = (plus.drift[i] - minus.drift[i]) / (2 * h);
        worst = std::max(worst, std::abs(fdb - base.ddrift[i * n + l]));
      }
    }
  }
  return worst;
}

DerivativeBounds estimate_bounds(const VectorField& field,
                                 const std::vector<Eigen::VectorXd>& states, double margin) {
  require(!states.empty(), "estimate_bounds: need at least one state");
  const int n = field.state_dim();
  const int d = field.driver_dim();
  Eigen::VectorXd lo = states.front();
  Eigen::VectorXd hi = states.front();
  for (const auto& y : states) {
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }
  lo.array() -= margin;
  hi.array() += margin;
  std::vector<Eigen::VectorXd> probes = states;
  const int corners = n <= 10 ? (1 << n) : 0;
  for (int mask = 0; mask < corners; ++mask) {
    Eigen::VectorXd y(n);
    for (int l = 0; l < n; ++l) y[l] = (mask >> l) & 1 ? hi[l] : lo[l];
    probes.push_back(y);
  }
  FieldJet jet;
  jet.resize(n, d);
  DerivativeBounds out;
  for (const auto& y : probes) {
    field.eval(y.data(), jet, 2);
    double s1 = 0.0;
    for (double v : jet.dsigma) s1 += v * v;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int l = 0; l < n; ++l) s2 += jet.dc(i, a, b, l) * jet.dc(i, a, b, l);
    double s3 = 0.0;
    for (double v : jet.ddrift) s3 += v * v;
    out.dsigma = std::max(out.dsigma, std::sqrt(s1));
    out.dc = std::max(out.dc, std::sqrt(s2));
    out.ddrift = std::max(out.ddrift, std::sqrt(s3));
  }
  return out;
}

double step_condition(const DerivativeBounds& bounds, double step, double h_minus) {
  return std::pow(step, h_minus) * bounds.dsigma + 2.0 * std::pow(step, 2.0 * h_minus) * bounds.dc +
         step * bounds.ddrift;
}

}  // namespace roughlab
