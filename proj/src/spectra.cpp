#include "lbgraph/spectra.hpp"

#include <cmath>

#include "lbgraph/errors.hpp"
#include "lbgraph/rng.hpp"

namespace lbgraph {

namespace {

// y = D^{-1/2} (Deg - W) D^{-1/2} x, fixed accumulation order.
struct SymmetrizedOp {
  const ProximityGraph& g;
  Eigen::VectorXd inv_sqrt_mu;
  Eigen::VectorXd degree;

  explicit SymmetrizedOp(const ProximityGraph& graph)
      : g(graph), degree(weighted_degrees(graph)) {
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    inv_sqrt_mu.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      inv_sqrt_mu[i] = 1.0 / std::sqrt(g.mu[i]);
  }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = degree[i] * x[i] * inv_sqrt_mu[i];
      for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e)
        acc -= g.weight[e] * x[g.col[e]] * inv_sqrt_mu[g.col[e]];
      y[i] = acc * inv_sqrt_mu[i];
    }
  }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, i) = degree[i] * inv_sqrt_mu[i] * inv_sqrt_mu[i];
      for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e)
        a(i, g.col[e]) -= g.weight[e] * inv_sqrt_mu[i] * inv_sqrt_mu[g.col[e]];
    }
    return a;
  }
};

Eigen::VectorXd random_unit_vector(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

// Finishes a spectrum from symmetrized Ritz pairs: true residuals,
// Gram-Schmidt polish, back transform by D^{-1/2}.
Spectrum finalize(const SymmetrizedOp& op, const Eigen::VectorXd& values,
                  Eigen::MatrixXd vectors, SolverInfo info) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index k = vectors.cols();
  // Orthonormalize; vectors arrive near-orthonormal so this is a polish.
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index p = 0; p < c; ++p)
      vectors.col(c) -= vectors.col(p).dot(vectors.col(c)) * vectors.col(p);
    const double norm = vectors.col(c).norm();
    if (norm > 0.0) vectors.col(c) /= norm;
  }
  Spectrum spectrum;
  spectrum.eigenvalues = values;
  spectrum.residuals.resize(k);
  Eigen::VectorXd av(n);
  for (Eigen::Index c = 0; c < k; ++c) {
    op.apply(vectors.col(c), av);
    spectrum.residuals[c] = (av - values[c] * vectors.col(c)).norm();
  }
  spectrum.eigenvectors.resize(n, k);
  for (Eigen::Index c = 0; c < k; ++c)
    spectrum.eigenvectors.col(c) =
        vectors.col(c).cwiseProduct(op.inv_sqrt_mu);
  spectrum.info = std::move(info);
  return spectrum;
}

}  // namespace

Spectrum lanczos_smallest(const ProximityGraph& g, int k, double tol,
                          int max_iter, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (k < 1 || k > n) throw invalid_input("requested pair count out of range");
  if (!(tol > 0.0)) throw invalid_input("tolerance must be positive");
  if (max_iter < 1) throw invalid_input("max_iter must be positive");

  const SymmetrizedOp op(g);
  Rng rng(seed);
  const Eigen::Index m_cap = std::min<Eigen::Index>(max_iter, n);

  Eigen::MatrixXd basis(n, m_cap);
  Eigen::VectorXd alpha(m_cap), beta(m_cap);
  basis.col(0) = random_unit_vector(n, rng);

  Eigen::VectorXd w(n);
  Eigen::Index m = m_cap;
  for (Eigen::Index j = 0; j < m_cap; ++j) {
    op.apply(basis.col(j), w);
    alpha[j] = basis.col(j).dot(w);
    if (j + 1 == m_cap) break;
    w -= alpha[j] * basis.col(j);
    if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
    // Full reorthogonalization, two passes.
    auto q = basis.leftCols(j + 1);
    w -= q * (q.transpose() * w);
    w -= q * (q.transpose() * w);
    double norm = w.norm();
    if (norm < 1e-13 * std::max(1.0, alpha.head(j + 1).cwiseAbs().maxCoeff())) {
      // Invariant subspace found; continue from a fresh direction.
      beta[j] = 0.0;
      w = random_unit_vector(n, rng);
      w -= q * (q.transpose() * w);
      w -= q * (q.transpose() * w);
      norm = w.norm();
      if (norm < 1e-13) {
        m = j + 1;  // whole space exhausted
        break;
      }
      w /= norm;
      basis.col(j + 1) = w;
    } else {
      beta[j] = norm;
      basis.col(j + 1) = w / norm;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(alpha.head(m), beta.head(std::max<Eigen::Index>(m - 1, 0)),
                             Eigen::ComputeEigenvectors);
  if (tri.info() != Eigen::Success)
    throw solver_failure("tridiagonal eigendecomposition failed", {});

  const Eigen::Index kk = std::min<Eigen::Index>(k, m);
  Eigen::VectorXd values = tri.eigenvalues().head(kk);
  Eigen::MatrixXd vectors = basis.leftCols(m) * tri.eigenvectors().leftCols(kk);

  SolverInfo info;
  info.iterations = static_cast<int>(m);
  info.tolerance = tol;
  info.method = "lanczos";
  Spectrum spectrum = finalize(op, values, std::move(vectors), info);

  if (kk < k)
    throw solver_failure("Lanczos basis exhausted before finding " +
                             std::to_string(k) + " pairs",
                         std::vector<double>(spectrum.residuals.data(),
                                             spectrum.residuals.data() + kk));
  for (Eigen::Index i = 0; i < kk; ++i) {
    const double bound = tol * std::max(1.0, std::fabs(spectrum.eigenvalues[i]));
    if (spectrum.residuals[i] > bound)
      throw solver_failure(
          "Lanczos did not converge within " + std::to_string(max_iter) +
              " iterations (worst residual " +
              std::to_string(spectrum.residuals.maxCoeff()) + ")",
          std::vector<double>(spectrum.residuals.data(),
                              spectrum.residuals.data() + kk));
  }
  return spectrum;
}

Spectrum dense_eigendecomposition(const ProximityGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (n > 3000) throw invalid_input("dense path capped at N = 3000");
  const SymmetrizedOp op(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.dense());
  if (solver.info() != Eigen::Success)
    throw solver_failure("dense eigendecomposition failed", {});
  SolverInfo info;
  info.iterations = 0;
  info.tolerance = 0.0;
  info.method = "dense";
  return finalize(op, solver.eigenvalues(), solver.eigenvectors(), info);
}

Spectrum smallest_eigenpairs(const ProximityGraph& g, int k, double tol,
                             int max_iter, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (k < 1 || k > n) throw invalid_input("requested pair count out of range");
  if (max_iter == 0) max_iter = 10 * k + 200;
  try {
    return lanczos_smallest(g, k, tol, max_iter, seed);
  } catch (const solver_failure&) {
    if (n > 600) throw;
    Spectrum full = dense_eigendecomposition(g);
    Spectrum spectrum;
    spectrum.eigenvalues = full.eigenvalues.head(k);
    spectrum.eigenvectors = full.eigenvectors.leftCols(k);
    spectrum.residuals = full.residuals.head(k);
    spectrum.info.iterations = 0;
    spectrum.info.tolerance = tol;
    spectrum.info.method = "dense-failover";
    return spectrum;
  }
}

}  // namespace lbgraph
