#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lbgraph/errors.hpp"
#include "lbgraph/graph.hpp"
#include "lbgraph/rng.hpp"
#include "lbgraph/spectra.hpp"

using namespace lbgraph;

namespace {

DistanceMatrixInput random_cloud(std::size_t n, std::uint64_t seed,
                                 int dim = 2) {
  Rng rng(seed);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform01();
    ys[i] = rng.uniform01();
  }
  DistanceMatrixInput input;
  input.d.resize(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      input.d(i, j) = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
  input.mu.resize(n);
  input.vol_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    input.mu[i] = rng.uniform(0.5, 1.5);
    input.vol_total += input.mu[i];
  }
  input.dim = dim;
  return input;
}

ProximityGraph two_vertex_graph() {
  ProximityGraph g;
  g.intrinsic_dim = 1;
  g.rho = 1.0;
  g.nu_n = 2.0;
  g.mu = {1.0, 1.0};
  g.vol_total = 2.0;
  g.row_ptr = {0, 1, 2};
  g.col = {1, 0};
  g.weight = {1.0, 1.0};
  return g;
}

double operator_norm_bound(const ProximityGraph& g) {
  const Eigen::VectorXd deg = weighted_degrees(g);
  double bound = 0.0;
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    bound = std::max(bound, 2.0 * deg[i] / g.mu[i]);
  return bound;
}

}  // namespace

TEST_CASE("two-vertex graph has eigenvalues 0 and 2") {
  const auto g = two_vertex_graph();
  const auto dense = dense_eigendecomposition(g);
  CHECK(dense.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dense.eigenvalues[1] == doctest::Approx(2.0));

  const auto iter = smallest_eigenpairs(g, 2, 1e-10, 0, 5);
  CHECK(iter.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(iter.eigenvalues[1] == doctest::Approx(2.0));
}

TEST_CASE("Lanczos agrees with the dense oracle") {
  Rng pick(99);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 40 + pick.uniform_index(160);
    const auto input = random_cloud(n, 1000 + trial);
    const auto g = build_proximity_graph(input, 0.5);
    const int k = 2 + static_cast<int>(pick.uniform_index(8));
    const auto dense = dense_eigendecomposition(g);
    const auto lanczos = lanczos_smallest(g, k, 1e-10, 10 * k + 200, trial);
    for (int i = 0; i < k; ++i)
      CHECK(std::fabs(lanczos.eigenvalues[i] - dense.eigenvalues[i]) <=
            1e-8 * std::max(1.0, std::fabs(dense.eigenvalues[i])));
  }
}

TEST_CASE("connected graph: zero mode is constant") {
  const auto input = random_cloud(120, 7);
  const auto g = build_proximity_graph(input, 0.6);
  REQUIRE(g.connected());
  const auto s = smallest_eigenpairs(g, 1, 1e-10, 0, 3);
  CHECK(std::fabs(s.eigenvalues[0]) <= 1e-10);
  // Normalize the sup to 1; all entries must agree.
  Eigen::VectorXd u = s.eigenvectors.col(0);
  u /= u[0];
  for (Eigen::Index i = 0; i < u.size(); ++i)
    CHECK(u[i] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("residuals, orthonormality, and the spectral floor") {
  const auto input = random_cloud(150, 8);
  const auto g = build_proximity_graph(input, 0.5);
  const int k = 6;
  const auto s = smallest_eigenpairs(g, k, 1e-10, 0, 4);

  for (int i = 0; i < k; ++i) {
    CHECK(s.residuals[i] <= 1e-10 * std::max(1.0, s.eigenvalues[i]));
    CHECK(s.eigenvalues[i] >= -1e-10 * operator_norm_bound(g));
    if (i > 0) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
  }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double gram =
          weighted_inner_product(g, s.eigenvectors.col(a), s.eigenvectors.col(b));
      CHECK(std::fabs(gram - (a == b ? 1.0 : 0.0)) <= 1e-10);
    }
}

TEST_CASE("eigenvalues are deterministic bit for bit") {
  const auto input = random_cloud(90, 17);
  const auto g = build_proximity_graph(input, 0.5);
  const auto a = smallest_eigenpairs(g, 5, 1e-10, 0, 42);
  const auto b = smallest_eigenpairs(g, 5, 1e-10, 0, 42);
  for (int i = 0; i < 5; ++i) {
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    CHECK((a.eigenvectors.col(i) - b.eigenvectors.col(i)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("trace identity for the dense path") {
  const auto input = random_cloud(70, 23);
  const auto g = build_proximity_graph(input, 0.5);
  const auto s = dense_eigendecomposition(g);
  const Eigen::VectorXd deg = weighted_degrees(g);
  double trace = 0.0;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) trace += deg[i] / g.mu[i];
  CHECK(s.eigenvalues.sum() == doctest::Approx(trace).epsilon(1e-9));
}

TEST_CASE("minimax consistency on the leading subspaces") {
  const auto input = random_cloud(40, 29);
  const auto g = build_proximity_graph(input, 0.55);
  const auto s = dense_eigendecomposition(g);
  const auto n = static_cast<int>(g.vertex_count());
  for (int k = 1; k <= n; k += 7) {
    // Max Rayleigh quotient over span(u_1..u_k): the energy form in that
    // basis is diagonal with entries lambda_i, so the max is lambda_k.
    Eigen::MatrixXd energy(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        energy(a, b) = -weighted_inner_product(
            g, apply_laplacian(g, s.eigenvectors.col(a)),
            s.eigenvectors.col(b));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(energy);
    CHECK(es.eigenvalues()(k - 1) ==
          doctest::Approx(s.eigenvalues[k - 1]).epsilon(1e-9));
  }
}

TEST_CASE("argument validation and failure modes") {
  const auto g = two_vertex_graph();
  CHECK_THROWS_AS(smallest_eigenpairs(g, 3, 1e-10, 0, 1), invalid_input);
  CHECK_THROWS_AS(smallest_eigenpairs(g, 0, 1e-10, 0, 1), invalid_input);
  CHECK_THROWS_AS(lanczos_smallest(g, 1, 0.0, 100, 1), invalid_input);

  // An impossible tolerance cannot converge; the error carries residuals.
  const auto input = random_cloud(700, 31);
  const auto big = build_proximity_graph(input, 0.35);
  try {
    lanczos_smallest(big, 4, 1e-300, 12, 1);
    FAIL("expected solver_failure");
  } catch (const solver_failure& e) {
    CHECK_FALSE(e.best_residuals.empty());
  }

  // The same request through the failover wrapper rethrows for N > 600.
  CHECK_THROWS_AS(smallest_eigenpairs(big, 4, 1e-300, 12, 1), solver_failure);

  // At N <= 600 the wrapper falls back to the dense path.
  const auto small_input = random_cloud(80, 37);
  const auto small = build_proximity_graph(small_input, 0.5);
  const auto s = smallest_eigenpairs(small, 3, 1e-300, 12, 1);
  CHECK(s.info.method == "dense-failover");
  const auto oracle = dense_eigendecomposition(small);
  for (int i = 0; i < 3; ++i)
    CHECK(s.eigenvalues[i] == doctest::Approx(oracle.eigenvalues[i]));
}

TEST_CASE("dense path rejects oversized graphs") {
  ProximityGraph g;
  g.mu.assign(3001, 1.0);
  g.row_ptr.assign(3002, 0);
  CHECK_THROWS_AS(dense_eigendecomposition(g), invalid_input);
}
