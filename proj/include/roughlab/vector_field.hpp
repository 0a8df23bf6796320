#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace roughlab {

// Pointwise evaluation of sigma, b and their derivatives; flat row-major storage.
struct FieldJet {
  int n = 0;
  int d = 0;
  std::vector<double> sigma;    // [i d + a]
  std::vector<double> dsigma;   // [(i d + a) n + l] = d_l sigma_ia
  std::vector<double> d2sigma;  // [((i d + a) n + l) n + r]
  std::vector<double> drift;    // [i]
  std::vector<double> ddrift;   // [i n + l]

  void resize(int state_dim, int driver_dim);
  double s(int i, int a) const { return sigma[i * d + a]; }
  double ds(int i, int a, int l) const { return dsigma[(i * d + a) * n + l]; }
  double dds(int i, int a, int l, int r) const { return d2sigma[((i * d + a) * n + l) * n + r]; }
  // c(y)(e_a (x) e_b) = (D sigma)[sigma e_a] e_b, component i.
  double c(int i, int a, int b) const;
  // Derivative of c in direction e_l.
  double dc(int i, int a, int b, int l) const;
};

class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual int state_dim() const = 0;
  virtual int driver_dim() const = 0;
  virtual std::string name() const = 0;
  // order 0: sigma, b; 1: adds D sigma, D b; 2: adds D^2 sigma.
  virtual void eval(const double* y, FieldJet& jet, int order) const = 0;
};

// Entries a + s tanh(<w, y> + phi) for every sigma_ia and b_i.
class TanhField : public VectorField {
 public:
  struct Entry {
    double offset = 0.0;
    double scale = 0.0;
    std::vector<double> weights;
    double phase = 0.0;
  };
  TanhField(std::string name, int n, int d, std::vector<Entry> sigma, std::vector<Entry> drift);

  int state_dim() const override { return n_; }
  int driver_dim() const override { return d_; }
  std::string name() const override { return name_; }
  void eval(const double* y, FieldJet& jet, int order) const override;

 private:
  std::string name_;
  int n_;
  int d_;
  std::vector<Entry> sigma_;
  std::vector<Entry> drift_;
};

// sigma_ia(y) = A_ia + sum_l L_ial y_l, b(y) = b0 + G y.
class AffineField : public VectorField {
 public:
  AffineField(std::string name, int n, int d, std::vector<double> a, std::vector<double> l,
              std::vector<double> b0, std::vector<double> g);

  int state_dim() const override { return n_; }
  int driver_dim() const override { return d_; }
  std::string name() const override { return name_; }
  void eval(const double* y, FieldJet& jet, int order) const override;

 private:
  std::string name_;
  int n_;
  int d_;
  std::vector<double> a_;
  std::vector<double> l_;
  std::vector<double> b0_;
  std::vector<double> g_;
};

// Named test fields: tanh2, tanh1, additive2, linear1, ode1.
std::unique_ptr<VectorField> make_field(const std::string& name);
std::vector<std::string> field_names();

// Largest central-difference mismatch of D sigma, D^2 sigma and D b over the probes.
double validate_derivatives(const VectorField& field, const std::vector<Eigen::VectorXd>& probes,
                            double h = 1e-5);

struct DerivativeBounds {
  double dsigma = 0.0;
  double dc = 0.0;
  double ddrift = 0.0;
};

// Sup of Frobenius norms over the visited states and the corners of their bounding box
// widened by `margin`.
DerivativeBounds estimate_bounds(const VectorField& field,
                                 const std::vector<Eigen::VectorXd>& states, double margin);

// Left side of the step-size condition that guarantees invertible one-step factors.
double step_condition(const DerivativeBounds& bounds, double step, double h_minus);

}  // namespace roughlab
