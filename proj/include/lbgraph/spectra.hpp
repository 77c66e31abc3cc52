#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "lbgraph/graph.hpp"

namespace lbgraph {

struct SolverInfo {
  int iterations = 0;
  double tolerance = 0.0;
  std::string method;
};

// The k smallest eigenpairs of minus the graph Laplacian, ascending,
// with eigenvectors orthonormal in the mu-weighted inner product.
// residuals[i] = || -Lap u_i - lambda_i u_i || in the weighted norm.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // one column per pair
  Eigen::VectorXd residuals;
  SolverInfo info;
};

// Lanczos with full reorthogonalization on the symmetrized operator
// D^{-1/2} (Deg - W) D^{-1/2}, started from a seeded random vector.
// Runs the full iteration budget (robust for eigenvalue clusters) and
// throws solver_failure if the requested pairs have not converged.
Spectrum lanczos_smallest(const ProximityGraph& g, int k, double tol,
                          int max_iter, std::uint64_t seed);

// Full dense eigendecomposition of the symmetrized operator (N <= 3000).
Spectrum dense_eigendecomposition(const ProximityGraph& g);

// Lanczos first; on non-convergence falls back to the dense path when
// N <= 600, otherwise rethrows. max_iter = 0 selects 10*k + 200.
Spectrum smallest_eigenpairs(const ProximityGraph& g, int k, double tol = 1e-10,
                             int max_iter = 0, std::uint64_t seed = 0);

}  // namespace lbgraph
