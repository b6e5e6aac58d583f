#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace quasitile::detail {

// Dinic's algorithm on an adjacency-list residual graph. Integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), it_(nodes) {}

  /// Returns the index of the forward arc (its reverse is index ^ 1).
  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
    std::size_t id = arcs_.size();
    arcs_.push_back({to, cap});
    adj_[from].push_back(id);
    arcs_.push_back({from, 0});
    adj_[to].push_back(id + 1);
    return id;
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += pushed;
    }
    return total;
  }

  std::int64_t flow_on(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

  /// Nodes reachable from s in the final residual graph (source side of a min cut).
  std::vector<char> source_side(std::size_t s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t id : adj_[u])
        if (arcs_[id].cap > 0 && !seen[arcs_[id].to]) {
          seen[arcs_[id].to] = 1;
          stack.push_back(arcs_[id].to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t id : adj_[u])
        if (arcs_[id].cap > 0 && level_[arcs_[id].to] < 0) {
          level_[arcs_[id].to] = level_[u] + 1;
          q.push(arcs_[id].to);
        }
    }
    return level_[t] >= 0;
  }

  // Iterative augmenting-path search along the level graph; avoids deep recursion on
  // long element chains.
  std::int64_t dfs(std::size_t s, std::size_t t, std::int64_t limit) {
    std::vector<std::size_t> path;  // arc ids
    std::size_t u = s;
    while (true) {
      if (u == t) {
        std::int64_t f = limit;
        for (std::size_t id : path) f = std::min(f, arcs_[id].cap);
        for (std::size_t id : path) {
          arcs_[id].cap -= f;
          arcs_[id ^ 1].cap += f;
        }
        return f;
      }
      bool advanced = false;
      for (; it_[u] < adj_[u].size(); ++it_[u]) {
        std::size_t id = adj_[u][it_[u]];
        const Arc& a = arcs_[id];
        if (a.cap > 0 && level_[a.to] == level_[u] + 1) {
          path.push_back(id);
          u = a.to;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (path.empty()) return 0;
      level_[u] = -1;  // dead end
      std::size_t back = path.back();
      path.pop_back();
      u = arcs_[back ^ 1].to;
      ++it_[u];
    }
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace quasitile::detail
