#pragma once

#include <cstdint>
#include <vector>

#include "lbgraph/manifold.hpp"

namespace lbgraph {

// A finite net on a manifold together with its measured covering
// quality. `epsilon_estimate` is the covering radius of the net over
// the construction candidate pool; `separation` is the exact minimum
// pairwise distance.
struct Net {
  ManifoldModel model;
  std::vector<ManifoldPoint> points;
  double epsilon_estimate = 0.0;
  double separation = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

// Greedy farthest-point sampling over a dense uniform candidate pool
// (pool size 50 * target_count). The first point is drawn uniformly;
// each next point maximizes the distance to the chosen set.
Net farthest_point_sample(const ManifoldModel& model, std::size_t target_count,
                          std::uint64_t seed);

// Monte Carlo lower estimate of the covering radius: the max over
// fresh uniform probes of the distance to the nearest net point.
double covering_radius(const ManifoldModel& model, const Net& net,
                       std::size_t probe_count, std::uint64_t seed);

// Exact minimum pairwise geodesic distance, O(N^2).
double separation(const ManifoldModel& model, const Net& net);

}  // namespace lbgraph
