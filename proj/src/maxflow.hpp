#pragma once

#include <cstdint>
#include <vector>

namespace lbgraph::detail {

// Dinic max flow over integer capacities. The transport feasibility
// check quantizes masses to integers first, so flow comparisons stay
// exact. Paths in the bipartite networks built here have length <= 3,
// which keeps the blocking-flow phases shallow.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t node_count)
      : head_(node_count, -1), level_(node_count), iter_(node_count) {}

  void add_edge(int from, int to, long long cap) {
    push_edge(from, to, cap);
    push_edge(to, from, 0);
  }

  long long run(int source, int sink);

 private:
  void push_edge(int from, int to, long long cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<int>(to_.size()) - 1;
  }

  bool bfs(int source, int sink);
  long long dfs(int v, int sink, long long limit);

  std::vector<int> to_;
  std::vector<long long> cap_;
  std::vector<int> next_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace lbgraph::detail
