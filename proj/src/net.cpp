#include "lbgraph/net.hpp"

#include <algorithm>
#include <limits>

#include "lbgraph/errors.hpp"
#include "lbgraph/rng.hpp"
#include "metric.hpp"

namespace lbgraph {

Net farthest_point_sample(const ManifoldModel& model, std::size_t target_count,
                          std::uint64_t seed) {
  if (target_count < 1) throw invalid_input("target_count must be at least 1");
  // The floor keeps covering estimates honest for very small nets.
  const std::size_t pool_size = std::max<std::size_t>(50 * target_count, 2000);
  if (target_count > pool_size)
    throw invalid_input("target_count exceeds the candidate pool size");
  const auto pool = sample_uniform(model, pool_size, seed);

  Rng pick(seed * 0x9E3779B97F4A7C15ULL + 1);
  std::vector<std::size_t> chosen;
  chosen.reserve(target_count);
  chosen.push_back(pick.uniform_index(pool_size));

  // d_min holds each candidate's surrogate distance to the chosen set.
  std::vector<double> d_min(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i)
    d_min[i] = detail::surrogate(model, pool[chosen[0]], pool[i]);

  while (chosen.size() < target_count) {
    std::size_t far = 0;
    double s_far = d_min[0];
    for (std::size_t i = 1; i < pool_size; ++i) {
      if (d_min[i] > s_far) {
        s_far = d_min[i];
        far = i;
      }
    }
    chosen.push_back(far);
    const ManifoldPoint& p = pool[far];
    for (std::size_t i = 0; i < pool_size; ++i)
      d_min[i] = std::min(d_min[i], detail::surrogate(model, p, pool[i]));
  }

  Net net;
  net.model = model;
  net.seed = seed;
  net.points.reserve(target_count);
  for (std::size_t idx : chosen) net.points.push_back(pool[idx]);
  const double s_cov = *std::max_element(d_min.begin(), d_min.end());
  net.epsilon_estimate = detail::surrogate_to_distance(model, s_cov);
  net.separation = net.size() >= 2 ? separation(model, net) : 0.0;
  return net;
}

double covering_radius(const ManifoldModel& model, const Net& net,
                       std::size_t probe_count, std::uint64_t seed) {
  if (net.points.empty()) throw invalid_input("covering_radius of an empty net");
  if (probe_count < 1000)
    throw invalid_input("covering_radius needs at least 1000 probes");
  const auto probes = sample_uniform(model, probe_count, seed);
  double s_max = -std::numeric_limits<double>::infinity();
  for (const auto& q : probes) {
    double s;
    detail::nearest_index(model, net.points, q, &s);
    s_max = std::max(s_max, s);
  }
  return detail::surrogate_to_distance(model, s_max);
}

double separation(const ManifoldModel& model, const Net& net) {
  const std::size_t n = net.points.size();
  if (n < 2) throw invalid_input("separation needs at least 2 points");
  double s_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      s_min = std::min(s_min,
                       detail::surrogate(model, net.points[i], net.points[j]));
  return detail::surrogate_to_distance(model, s_min);
}

}  // namespace lbgraph
