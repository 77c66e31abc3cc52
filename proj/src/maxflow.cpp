#include "maxflow.hpp"

#include <limits>
#include <queue>

namespace lbgraph::detail {

bool MaxFlow::bfs(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int e = head_[v]; e != -1; e = next_[e]) {
      if (cap_[e] > 0 && level_[to_[e]] < 0) {
        level_[to_[e]] = level_[v] + 1;
        queue.push(to_[e]);
      }
    }
  }
  return level_[sink] >= 0;
}

long long MaxFlow::dfs(int v, int sink, long long limit) {
  if (v == sink) return limit;
  for (int& e = iter_[v]; e != -1; e = next_[e]) {
    const int u = to_[e];
    if (cap_[e] > 0 && level_[u] == level_[v] + 1) {
      const long long pushed = dfs(u, sink, std::min(limit, cap_[e]));
      if (pushed > 0) {
        cap_[e] -= pushed;
        cap_[e ^ 1] += pushed;
        return pushed;
      }
    }
  }
  return 0;
}

long long MaxFlow::run(int source, int sink) {
  long long flow = 0;
  while (bfs(source, sink)) {
    for (std::size_t i = 0; i < iter_.size(); ++i) iter_[i] = head_[i];
    long long pushed;
    while ((pushed = dfs(source, sink,
                         std::numeric_limits<long long>::max())) > 0)
      flow += pushed;
  }
  return flow;
}

}  // namespace lbgraph::detail
