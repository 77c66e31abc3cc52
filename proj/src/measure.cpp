#include "lbgraph/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lbgraph/errors.hpp"
#include "maxflow.hpp"
#include "metric.hpp"

namespace lbgraph {

namespace {

// Integer vertex capacities in units of one sample mass, summing to S
// exactly (largest remainder rounding).
std::vector<long long> quantize_weights(const std::vector<double>& mu,
                                        double total_mass, long long S) {
  const std::size_t n = mu.size();
  std::vector<long long> caps(n);
  std::vector<std::pair<double, std::size_t>> remainders(n);
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = mu[i] / total_mass * static_cast<double>(S);
    caps[i] = static_cast<long long>(std::floor(exact));
    remainders[i] = {exact - static_cast<double>(caps[i]), i};
    assigned += caps[i];
  }
  long long leftover = S - assigned;
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t i = 0; leftover > 0 && i < n; ++i, --leftover)
    caps[remainders[i].second] += 1;
  return caps;
}

struct FeasibilityResult {
  long long deficit_quanta = 0;
};

// One exact feasibility solve at a fixed epsilon.
FeasibilityResult solve_transport(const ManifoldModel& model,
                                  const WeightedNet& wnet,
                                  const std::vector<long long>& caps,
                                  double epsilon) {
  const std::size_t S = wnet.samples.size();
  const std::size_t N = wnet.net.points.size();
  const double s_eps = detail::distance_to_surrogate(model, epsilon);

  // Count candidate edges first; refuse absurd networks instead of
  // exhausting memory (bisection at large S belongs to smaller runs).
  std::size_t edge_total = 0;
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t i = 0; i < N; ++i)
      if (detail::surrogate(model, wnet.samples[s], wnet.net.points[i]) <= s_eps)
        ++edge_total;
  if (edge_total > 300'000'000)
    throw invalid_input("transport network too large; rerun with fewer samples");

  const int source = 0;
  const int sample_base = 1;
  const int vertex_base = 1 + static_cast<int>(S);
  const int sink = vertex_base + static_cast<int>(N);
  detail::MaxFlow flow(static_cast<std::size_t>(sink) + 1);
  for (std::size_t s = 0; s < S; ++s)
    flow.add_edge(source, sample_base + static_cast<int>(s), 1);
  for (std::size_t i = 0; i < N; ++i)
    flow.add_edge(vertex_base + static_cast<int>(i), sink, caps[i]);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t i = 0; i < N; ++i)
      if (detail::surrogate(model, wnet.samples[s], wnet.net.points[i]) <= s_eps)
        flow.add_edge(sample_base + static_cast<int>(s),
                      vertex_base + static_cast<int>(i), 1);

  FeasibilityResult result;
  result.deficit_quanta = static_cast<long long>(S) - flow.run(source, sink);
  return result;
}

}  // namespace

WeightedNet monte_carlo_voronoi_weights(const ManifoldModel& model,
                                        const Net& net,
                                        std::size_t sample_count,
                                        std::uint64_t seed) {
  const std::size_t N = net.points.size();
  if (N == 0) throw invalid_input("net is empty");
  if (net.model.kind != model.kind)
    throw invalid_input("net model does not match the given model");
  if (sample_count < 100 * N)
    throw invalid_input("sample_count must be at least 100 * net size");

  WeightedNet wnet;
  wnet.net = net;
  wnet.quadrature = QuadratureKind::uniform;
  wnet.sample_seed = seed;
  wnet.samples = sample_uniform(model, sample_count, seed);
  wnet.cell.resize(sample_count);
  wnet.counts.assign(N, 0);
  double s_max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sample_count; ++s) {
    double s_best;
    const std::size_t i =
        detail::nearest_index(model, net.points, wnet.samples[s], &s_best);
    wnet.cell[s] = static_cast<std::uint32_t>(i);
    wnet.counts[i] += 1;
    s_max = std::max(s_max, s_best);
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (wnet.counts[i] == 0)
      throw invalid_input("empty Voronoi cell at vertex " + std::to_string(i) +
                          ": not a net at this sampling resolution");
  }
  wnet.total_mass = model.volume();
  wnet.mu.resize(N);
  for (std::size_t i = 0; i < N; ++i)
    wnet.mu[i] = wnet.total_mass * static_cast<double>(wnet.counts[i]) /
                 static_cast<double>(sample_count);
  wnet.max_assign_distance = detail::surrogate_to_distance(model, s_max);
  return wnet;
}

WeightedNet exact_circle_weights(const ManifoldModel& model, const Net& net) {
  if (model.kind != ManifoldKind::circle)
    throw invalid_input("exact_circle_weights requires a circle model");
  if (net.model.kind != model.kind)
    throw invalid_input("net model does not match the given model");
  const std::size_t N = net.points.size();
  if (N < 2) throw invalid_input("exact circle weights need at least 2 points");

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return net.points[a].x[0] < net.points[b].x[0];
  });
  for (std::size_t i = 0; i + 1 < N; ++i)
    if (net.points[order[i]].x[0] == net.points[order[i + 1]].x[0])
      throw invalid_input("duplicate angles in circle net");

  WeightedNet wnet;
  wnet.net = net;
  wnet.total_mass = model.volume();
  wnet.mu.assign(N, 0.0);
  const double two_pi = 2.0 * M_PI;
  for (std::size_t i = 0; i < N; ++i) {
    const double prev = net.points[order[(i + N - 1) % N]].x[0];
    const double cur = net.points[order[i]].x[0];
    const double next = net.points[order[(i + 1) % N]].x[0];
    double gap_prev = cur - prev;
    if (gap_prev <= 0.0) gap_prev += two_pi;
    double gap_next = next - cur;
    if (gap_next <= 0.0) gap_next += two_pi;
    wnet.mu[order[i]] = model.radius * 0.5 * (gap_prev + gap_next);
  }

  // Deterministic quadrature set assigned to the exact arc cells.
  const std::size_t S = std::max<std::size_t>(100 * N, 1 << 16);
  wnet.quadrature = QuadratureKind::circle_midpoints;
  wnet.sample_seed = 0;
  wnet.samples.reserve(S);
  wnet.cell.resize(S);
  wnet.counts.assign(N, 0);
  double s_max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < S; ++s) {
    const double theta = (static_cast<double>(s) + 0.5) * two_pi /
                         static_cast<double>(S);
    wnet.samples.push_back(circle_point(theta));
    double s_best;
    const std::size_t i =
        detail::nearest_index(model, net.points, wnet.samples[s], &s_best);
    wnet.cell[s] = static_cast<std::uint32_t>(i);
    wnet.counts[i] += 1;
    s_max = std::max(s_max, s_best);
  }
  wnet.max_assign_distance = detail::surrogate_to_distance(model, s_max);
  return wnet;
}

ApproximationReport verify_volume_approximation(const ManifoldModel& model,
                                                const WeightedNet& wnet,
                                                double epsilon,
                                                const VerifyOptions& opts) {
  if (wnet.samples.empty())
    throw invalid_input("weighted net carries no quadrature samples");
  if (!(epsilon > 0.0)) throw invalid_input("epsilon must be positive");

  const long long S = static_cast<long long>(wnet.samples.size());
  const double quantum = wnet.total_mass / static_cast<double>(S);
  const auto caps = quantize_weights(wnet.mu, wnet.total_mass, S);
  const bool caps_match_counts =
      std::equal(caps.begin(), caps.end(), wnet.counts.begin());

  auto feasible_at = [&](double eps) -> long long {
    if (opts.allow_identity_shortcut && caps_match_counts &&
        wnet.max_assign_distance <= eps)
      return 0;  // routing each sample to its own cell saturates all caps
    return solve_transport(model, wnet, caps, eps).deficit_quanta;
  };

  ApproximationReport report;
  report.epsilon_tested = epsilon;
  const long long deficit = feasible_at(epsilon);
  report.feasible = (deficit == 0);
  report.flow_deficit = static_cast<double>(deficit) * quantum;

  if (opts.compute_epsilon_star) {
    const double diameter = model.diameter();
    if (feasible_at(0.0) == 0) {
      report.epsilon_star = 0.0;
    } else {
      double lo = 0.0;
      double hi = diameter;
      if (feasible_at(hi) != 0) {
        // Total masses disagree beyond quantization; no epsilon works.
        report.epsilon_star = diameter;
        return report;
      }
      for (int iter = 0; iter < 200 && hi - lo > 0.01 * hi &&
                         hi - lo > 1e-12 * diameter;
           ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_at(mid) == 0)
          hi = mid;
        else
          lo = mid;
      }
      report.epsilon_star = hi;
    }
  }
  return report;
}

}  // namespace lbgraph
