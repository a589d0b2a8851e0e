#pragma once

// Dinic max flow. Arcs are explored in insertion order, so the result is a
// deterministic function of the order in which arcs were added.

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace gridcube::detail {

class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : head_(static_cast<size_t>(nodes), -1) {}

  int add_arc(int from, int to, std::int64_t cap) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, head_[from], cap});
    head_[from] = id;
    arcs_.push_back({from, head_[to], 0});
    head_[to] = id + 1;
    return id;
  }

  // Flow currently on the arc returned by add_arc.
  std::int64_t flow(int arc) const { return arcs_[static_cast<size_t>(arc) ^ 1].cap; }

  std::int64_t run(int s, int t) {
    finalize();
    std::int64_t total = 0;
    while (bfs(s, t)) {
      it_ = first_;
      while (auto f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

 private:
  struct Arc {
    int to;
    int next;
    std::int64_t cap;
  };

  // Adjacency in insertion order rather than the reversed linked-list order.
  void finalize() {
    const size_t n = head_.size();
    first_.assign(n + 1, 0);
    for (size_t v = 0; v < n; ++v)
      for (int a = head_[v]; a != -1; a = arcs_[static_cast<size_t>(a)].next) ++first_[v + 1];
    for (size_t v = 0; v < n; ++v) first_[v + 1] += first_[v];
    order_.assign(arcs_.size(), 0);
    std::vector<int> fill(first_.begin(), first_.end() - 1);
    for (size_t v = 0; v < n; ++v) {
      int cnt = first_[v + 1] - first_[v];
      int k = cnt;
      for (int a = head_[v]; a != -1; a = arcs_[static_cast<size_t>(a)].next)
        order_[static_cast<size_t>(first_[v] + --k)] = a;
    }
  }

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int i = first_[v]; i < first_[v + 1]; ++i) {
        const Arc& a = arcs_[static_cast<size_t>(order_[static_cast<size_t>(i)])];
        if (a.cap > 0 && level_[static_cast<size_t>(a.to)] < 0) {
          level_[static_cast<size_t>(a.to)] = level_[static_cast<size_t>(v)] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[static_cast<size_t>(t)] >= 0;
  }

  std::int64_t dfs(int v, int t, std::int64_t pushed) {
    if (v == t) return pushed;
    for (int& i = it_[static_cast<size_t>(v)]; i < first_[v + 1]; ++i) {
      int id = order_[static_cast<size_t>(i)];
      Arc& a = arcs_[static_cast<size_t>(id)];
      if (a.cap <= 0 || level_[static_cast<size_t>(a.to)] != level_[static_cast<size_t>(v)] + 1)
        continue;
      if (auto f = dfs(a.to, t, std::min(pushed, a.cap))) {
        a.cap -= f;
        arcs_[static_cast<size_t>(id) ^ 1].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> first_, order_, it_, level_;
};

}  // namespace gridcube::detail
