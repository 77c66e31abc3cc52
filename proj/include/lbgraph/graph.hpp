#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lbgraph/measure.hpp"

namespace lbgraph {

// Distance-dependent edge kernel phi, nonnegative and nonincreasing
// on [0,1]. The normalization constant is derived from phi's radial
// second moment so that the flat kernel reduces to the closed form.
struct KernelSpec {
  enum class Type { flat, quadratic };
  Type type = Type::flat;

  static KernelSpec flat() { return {Type::flat}; }
  static KernelSpec quadratic() { return {Type::quadratic}; }
  static KernelSpec from_name(const std::string& name);

  double phi(double t) const {
    return type == Type::flat ? 1.0 : 1.0 - t * t;
  }
  std::string name() const {
    return type == Type::flat ? "flat" : "quadratic";
  }
};

// Weighted proximity graph on a net: an edge joins x_i and x_j iff
// d(x_i, x_j) < rho, with weight w_ij = c * phi(d/rho) * mu_i * mu_j.
// Stored as symmetric CSR (both directions of every edge).
struct ProximityGraph {
  int intrinsic_dim = 1;
  double rho = 0.0;
  double nu_n = 0.0;
  std::optional<KernelSpec> kernel;  // empty: closed-form flat weights
  std::vector<double> mu;
  double vol_total = 0.0;
  std::vector<std::size_t> row_ptr;  // size N+1
  std::vector<std::uint32_t> col;
  std::vector<double> weight;
  int component_count = 1;

  std::size_t vertex_count() const { return mu.size(); }
  std::size_t edge_count() const { return col.size() / 2; }
  bool connected() const { return component_count == 1; }
};

// A point cloud given by pairwise distances and vertex weights, for
// running the graph/spectrum stages without a manifold model.
struct DistanceMatrixInput {
  Eigen::MatrixXd d;
  std::vector<double> mu;
  int dim = 1;
  double vol_total = 0.0;
};

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Edge-weight normalization: 2 / (rho^{n+2} * integral over the unit
// ball of phi(|z|) z_1^2). Radial Gauss-Legendre quadrature; for the
// flat kernel this equals 2(n+2)/(nu_n rho^{n+2}) to rounding.
double kernel_normalization(int n, double rho, const KernelSpec& kernel);

ProximityGraph build_proximity_graph(const WeightedNet& wnet, double rho,
                                     std::optional<KernelSpec> kernel = {});
ProximityGraph build_proximity_graph(const DistanceMatrixInput& input,
                                     double rho,
                                     std::optional<KernelSpec> kernel = {});

// (Lap u)(x_i) = (1/mu_i) sum_j w_ij (u_j - u_i)
Eigen::VectorXd apply_laplacian(const ProximityGraph& g,
                                const Eigen::VectorXd& u);

// <u, v> = sum_i mu_i u_i v_i
double weighted_inner_product(const ProximityGraph& g, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v);

// (1/2) sum over directed edges of w(e) (u_j - u_i)^2; equals
// <-Lap u, u> and vanishes on constants.
double dirichlet_energy(const ProximityGraph& g, const Eigen::VectorXd& u);

// Weighted degree sum_j w_ij per vertex.
Eigen::VectorXd weighted_degrees(const ProximityGraph& g);

}  // namespace lbgraph
