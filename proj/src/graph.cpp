#include "lbgraph/graph.hpp"

#include <cmath>
#include <queue>

#include "lbgraph/errors.hpp"

namespace lbgraph {

namespace {

// Gauss-Legendre nodes/weights on [0,1]; exact for polynomials of
// degree < 2m, so polynomial kernels integrate to rounding error.
void gauss_legendre01(int m, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double p0 = 0.0, p1 = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = m * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], ascending
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

struct EdgeBuildResult {
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> weight;
};

// Assembles symmetric CSR from a strict-lower-triangle distance scan.
template <typename DistFn>
EdgeBuildResult build_edges(std::size_t n, double rho, double c_norm,
                            const std::vector<double>& mu,
                            const std::optional<KernelSpec>& kernel,
                            DistFn&& dist) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(i, j);
      if (d < rho) {
        double w = c_norm * mu[i] * mu[j];
        if (kernel) w *= kernel->phi(d / rho);
        adj[i].push_back({static_cast<std::uint32_t>(j), w});
        adj[j].push_back({static_cast<std::uint32_t>(i), w});
      }
    }
  }
  EdgeBuildResult out;
  out.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    out.row_ptr[i + 1] = out.row_ptr[i] + adj[i].size();
  out.col.reserve(out.row_ptr[n]);
  out.weight.reserve(out.row_ptr[n]);
  for (std::size_t i = 0; i < n; ++i) {
    // adj rows are produced in ascending j order already
    for (const auto& [j, w] : adj[i]) {
      out.col.push_back(j);
      out.weight.push_back(w);
    }
  }
  return out;
}

int count_components(const ProximityGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<char> seen(n, 0);
  int components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    std::queue<std::size_t> queue;
    queue.push(start);
    seen[start] = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      for (std::size_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) {
        if (!seen[g.col[e]]) {
          seen[g.col[e]] = 1;
          queue.push(g.col[e]);
        }
      }
    }
  }
  return components;
}

void check_mu(const std::vector<double>& mu) {
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (!(mu[i] > 0.0))
      throw invalid_input("vertex " + std::to_string(i) +
                          " has nonpositive weight");
}

}  // namespace

KernelSpec KernelSpec::from_name(const std::string& name) {
  if (name == "flat") return flat();
  if (name == "quadratic") return quadratic();
  throw invalid_input("unknown kernel name: " + name);
}

double unit_ball_volume(int n) {
  if (n < 1) throw invalid_input("unit_ball_volume requires n >= 1");
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double kernel_normalization(int n, double rho, const KernelSpec& kernel) {
  if (n < 1) throw invalid_input("kernel_normalization requires n >= 1");
  if (!(rho > 0.0)) throw invalid_input("rho must be positive");
  // integral over B_1 of phi(|z|) z_1^2 dz = nu_n * int_0^1 phi(t) t^{n+1} dt
  std::vector<double> nodes, weights;
  gauss_legendre01(64, nodes, weights);
  double radial = 0.0;
  for (int i = 0; i < 64; ++i)
    radial += weights[i] * kernel.phi(nodes[i]) * std::pow(nodes[i], n + 1);
  const double moment = unit_ball_volume(n) * radial;
  if (!(moment > 0.0))
    throw invalid_input("kernel has vanishing second moment");
  return 2.0 / (std::pow(rho, n + 2) * moment);
}

ProximityGraph build_proximity_graph(const WeightedNet& wnet, double rho,
                                     std::optional<KernelSpec> kernel) {
  if (!(rho > 0.0)) throw invalid_input("rho must be positive");
  const ManifoldModel& model = wnet.net.model;
  if (rho >= model.injectivity_radius())
    throw invalid_input("rho must stay below the injectivity radius");
  check_mu(wnet.mu);

  ProximityGraph g;
  g.intrinsic_dim = model.dimension();
  g.rho = rho;
  g.nu_n = unit_ball_volume(g.intrinsic_dim);
  g.kernel = kernel;
  g.mu = wnet.mu;
  g.vol_total = wnet.total_mass;
  const double c_norm =
      kernel ? kernel_normalization(g.intrinsic_dim, rho, *kernel)
             : 2.0 * (g.intrinsic_dim + 2) /
                   (g.nu_n * std::pow(rho, g.intrinsic_dim + 2));
  auto edges = build_edges(
      g.mu.size(), rho, c_norm, g.mu, kernel, [&](std::size_t i, std::size_t j) {
        return geodesic_distance(model, wnet.net.points[i], wnet.net.points[j]);
      });
  g.row_ptr = std::move(edges.row_ptr);
  g.col = std::move(edges.col);
  g.weight = std::move(edges.weight);
  g.component_count = count_components(g);
  return g;
}

ProximityGraph build_proximity_graph(const DistanceMatrixInput& input,
                                     double rho,
                                     std::optional<KernelSpec> kernel) {
  if (!(rho > 0.0)) throw invalid_input("rho must be positive");
  const auto n = static_cast<std::size_t>(input.d.rows());
  if (input.d.cols() != input.d.rows())
    throw invalid_input("distance matrix must be square");
  if (input.mu.size() != n)
    throw invalid_input("weights length does not match the distance matrix");
  const double scale = std::max(1.0, input.d.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(input.d(i, i)) > 1e-12 * scale)
      throw invalid_input("distance matrix has a nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (input.d(i, j) < 0.0)
        throw invalid_input("distance matrix has a negative entry");
      if (std::fabs(input.d(i, j) - input.d(j, i)) > 1e-12 * scale)
        throw invalid_input("distance matrix is not symmetric");
    }
  }
  check_mu(input.mu);

  ProximityGraph g;
  g.intrinsic_dim = input.dim;
  g.rho = rho;
  g.nu_n = unit_ball_volume(input.dim);
  g.kernel = kernel;
  g.mu = input.mu;
  g.vol_total = input.vol_total;
  const double c_norm =
      kernel ? kernel_normalization(g.intrinsic_dim, rho, *kernel)
             : 2.0 * (g.intrinsic_dim + 2) /
                   (g.nu_n * std::pow(rho, g.intrinsic_dim + 2));
  auto edges =
      build_edges(n, rho, c_norm, g.mu, kernel,
                  [&](std::size_t i, std::size_t j) { return input.d(i, j); });
  g.row_ptr = std::move(edges.row_ptr);
  g.col = std::move(edges.col);
  g.weight = std::move(edges.weight);
  g.component_count = count_components(g);
  return g;
}

Eigen::VectorXd apply_laplacian(const ProximityGraph& g,
                                const Eigen::VectorXd& u) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (u.size() != n) throw invalid_input("vector length does not match graph");
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e)
      acc += g.weight[e] * (u[g.col[e]] - u[i]);
    out[i] = acc / g.mu[i];
  }
  return out;
}

double weighted_inner_product(const ProximityGraph& g, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (u.size() != n || v.size() != n)
    throw invalid_input("vector length does not match graph");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) acc += g.mu[i] * u[i] * v[i];
  return acc;
}

double dirichlet_energy(const ProximityGraph& g, const Eigen::VectorXd& u) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (u.size() != n) throw invalid_input("vector length does not match graph");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e) {
      const double du = u[g.col[e]] - u[i];
      acc += g.weight[e] * du * du;
    }
  }
  return 0.5 * acc;
}

Eigen::VectorXd weighted_degrees(const ProximityGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e)
      deg[i] += g.weight[e];
  return deg;
}

}  // namespace lbgraph
