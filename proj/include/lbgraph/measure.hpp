#pragma once

#include <cstdint>
#include <vector>

#include "lbgraph/net.hpp"

namespace lbgraph {

enum class QuadratureKind { uniform, circle_midpoints };

// A net with volume-approximating vertex weights and the shared
// quadrature sample set that defines the empirical Voronoi cells.
// Every downstream quadrature (discretization, smoothing, alignment)
// reuses `samples` and `cell` so the map identities hold exactly.
struct WeightedNet {
  Net net;
  std::vector<double> mu;             // vertex weights, sum = vol(M)
  std::vector<ManifoldPoint> samples; // quadrature points y_s
  std::vector<std::uint32_t> cell;    // index of the nearest net point
  std::vector<long long> counts;      // samples per cell
  double total_mass = 0.0;
  double max_assign_distance = 0.0;   // max_s d(y_s, x_cell(s))
  QuadratureKind quadrature = QuadratureKind::uniform;
  std::uint64_t sample_seed = 0;

  std::size_t size() const { return mu.size(); }
  std::size_t sample_count() const { return samples.size(); }
  double sample_mass() const {
    return total_mass / static_cast<double>(samples.size());
  }
};

// Result of the transport feasibility check for one epsilon, plus the
// bisection estimate of the smallest feasible epsilon when requested.
struct ApproximationReport {
  double epsilon_tested = 0.0;
  bool feasible = false;
  double epsilon_star = 0.0;
  double flow_deficit = 0.0;  // mass that could not be routed; 0 if feasible
};

struct VerifyOptions {
  // Accept immediately when routing every sample to its own cell
  // already saturates the vertex capacities. This is a constructive
  // transport plan, not an approximation.
  bool allow_identity_shortcut = true;
  bool compute_epsilon_star = true;
};

// Voronoi cell volumes estimated by Monte Carlo: draws `sample_count`
// uniform samples, assigns each to the nearest net point (ties to the
// lowest index) and sets mu_i = vol(M) * count_i / S.
WeightedNet monte_carlo_voronoi_weights(const ManifoldModel& model,
                                        const Net& net,
                                        std::size_t sample_count,
                                        std::uint64_t seed);

// Exact Voronoi arc lengths on a circle (half-gaps to the angular
// neighbors), with a deterministic equally spaced quadrature set
// assigned to the exact cells.
WeightedNet exact_circle_weights(const ManifoldModel& model, const Net& net);

// Checks the marriage condition for the empirical measure by exact
// integer max flow: each sample carries one mass quantum vol(M)/S and
// may be routed to any net point within distance epsilon; vertex i
// absorbs at most its quantized weight. Feasible iff all mass routes.
ApproximationReport verify_volume_approximation(const ManifoldModel& model,
                                                const WeightedNet& wnet,
                                                double epsilon,
                                                const VerifyOptions& opts = {});

}  // namespace lbgraph
