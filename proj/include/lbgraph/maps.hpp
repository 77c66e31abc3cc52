#pragma once

#include <Eigen/Dense>
#include <functional>

#include "lbgraph/measure.hpp"

namespace lbgraph {

// A pointwise-evaluable function on the manifold.
using FieldFunction = std::function<double(const ManifoldPoint&)>;

struct KernelParams {
  int n = 1;       // kernel dimension
  double r = 0.0;  // smoothing radius
};

// Radial bump psi(t) = (n+2)/(2 nu_n) (1 - t^2) on [0,1], zero beyond;
// normalized so that psi(|x|) integrates to 1 over R^n.
double kernel_psi(int n, double t);

// Cell means over the shared quadrature: (Pf)(x_i) is the mean of f
// over the samples assigned to cell i.
Eigen::VectorXd discretize(const WeightedNet& wnet, const FieldFunction& f);

// Piecewise-constant extension P*u: evaluation returns u at the
// nearest net point.
FieldFunction extend(const WeightedNet& wnet, const Eigen::VectorXd& u);

// P*u evaluated on the stored samples via the stored assignment.
Eigen::VectorXd extend_on_samples(const WeightedNet& wnet,
                                  const Eigen::VectorXd& u);

// Quadrature estimate of the kernel mass around x:
// theta(x) = (vol/S) sum_s r^{-n} psi(d(x, y_s)/r).
double theta(const WeightedNet& wnet, const KernelParams& params,
             const ManifoldPoint& x);

// Normalized kernel smoothing of P*u with radius r = rho - 2 eps,
// sharing the quadrature with theta so constants are preserved
// exactly. Evaluates several discrete functions (columns) at once.
// Holds a reference to the weighted net, which must outlive it.
class Interpolant {
 public:
  Interpolant(const WeightedNet& wnet, Eigen::MatrixXd columns, double rho,
              double epsilon);

  double radius() const { return r_; }
  // One value per column; throws if no sample lies within the radius.
  Eigen::VectorXd operator()(const ManifoldPoint& x) const;

 private:
  const WeightedNet* wnet_;
  Eigen::MatrixXd columns_;
  double r_;
  std::vector<std::size_t> cell_offset_;   // CSR over cells
  std::vector<std::uint32_t> cell_sample_;
};

FieldFunction interpolate(const WeightedNet& wnet, const Eigen::VectorXd& u,
                          double rho, double epsilon);

// Monte Carlo estimate of the ball dispersion
// E_r(f) = int_M int_{B_r(x)} |f(y) - f(x)|^2 dy dx
// over one shared uniform pool of `sample_count` points.
double dispersion(const ManifoldModel& model, const FieldFunction& f, double r,
                  std::size_t sample_count, std::uint64_t seed);

// Inner product over the empirical measure (vol/S per sample) of two
// per-sample value arrays; compensated summation.
double empirical_inner(const WeightedNet& wnet, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b);

// <u, v> = sum_i mu_i u_i v_i over the net vertices.
double l2x_inner(const WeightedNet& wnet, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v);

}  // namespace lbgraph
