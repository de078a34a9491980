// Copyright 2026 The percspin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERCSPIN_SRC_DINIC_HPP
#define PERCSPIN_SRC_DINIC_HPP

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace percspin::detail {

// Dinic max flow with shortest augmenting paths (BFS level graphs).
// Deterministic for a fixed edge insertion order.
class Dinic {
 public:
  explicit Dinic(std::int64_t nodes)
      : head_(static_cast<std::size_t>(nodes), -1) {}

  // Adds edge u->v with capacity cap and its reverse with rev_cap.
  // Returns the forward edge index.
  std::int64_t add_edge(std::int64_t u, std::int64_t v, std::int64_t cap,
                        std::int64_t rev_cap = 0) {
    const std::int64_t id = static_cast<std::int64_t>(edges_.size());
    edges_.push_back(Edge{v, head_[static_cast<std::size_t>(u)], cap});
    head_[static_cast<std::size_t>(u)] = id;
    edges_.push_back(Edge{u, head_[static_cast<std::size_t>(v)], rev_cap});
    head_[static_cast<std::size_t>(v)] = id + 1;
    return id;
  }

  std::int64_t max_flow(std::int64_t s, std::int64_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      for (;;) {
        const std::int64_t pushed =
            dfs(s, t, std::numeric_limits<std::int64_t>::max());
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // Flow currently on forward edge `id` (cap_original - cap_residual
  // computed via the reverse edge's gained capacity is not stored; callers
  // that need per-edge flow should record original capacities).
  std::int64_t residual(std::int64_t id) const {
    return edges_[static_cast<std::size_t>(id)].cap;
  }

  // Nodes reachable from s in the residual graph: the source side of the
  // minimal source cut.
  std::vector<unsigned char> source_side(std::int64_t s) const {
    std::vector<unsigned char> seen(head_.size(), 0);
    std::queue<std::int64_t> q;
    seen[static_cast<std::size_t>(s)] = 1;
    q.push(s);
    while (!q.empty()) {
      const std::int64_t u = q.front();
      q.pop();
      for (std::int64_t e = head_[static_cast<std::size_t>(u)]; e >= 0;
           e = edges_[static_cast<std::size_t>(e)].next) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && !seen[static_cast<std::size_t>(ed.to)]) {
          seen[static_cast<std::size_t>(ed.to)] = 1;
          q.push(ed.to);
        }
      }
    }
    return seen;
  }

  // Nodes that can reach t in the residual graph: the sink side of the
  // maximal source cut.
  std::vector<unsigned char> sink_side(std::int64_t t) const {
    std::vector<unsigned char> seen(head_.size(), 0);
    std::queue<std::int64_t> q;
    seen[static_cast<std::size_t>(t)] = 1;
    q.push(t);
    while (!q.empty()) {
      const std::int64_t u = q.front();
      q.pop();
      // u is reachable backwards through edges with residual capacity:
      // edge e:v->u with cap>0 means v reaches u. Edge pairs are stored
      // adjacently, so e^1 leads back from u to v and e = (e^1)^1.
      for (std::int64_t e = head_[static_cast<std::size_t>(u)]; e >= 0;
           e = edges_[static_cast<std::size_t>(e)].next) {
        const Edge& back = edges_[static_cast<std::size_t>(e ^ 1)];
        const std::int64_t v = edges_[static_cast<std::size_t>(e)].to;
        if (back.cap > 0 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          q.push(v);
        }
      }
    }
    return seen;
  }

  std::int64_t node_count() const {
    return static_cast<std::int64_t>(head_.size());
  }

  struct Edge {
    std::int64_t to;
    std::int64_t next;
    std::int64_t cap;
  };
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::int64_t>& head() const { return head_; }

 private:
  bool bfs(std::int64_t s, std::int64_t t) {
    level_.assign(head_.size(), -1);
    std::queue<std::int64_t> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::int64_t u = q.front();
      q.pop();
      for (std::int64_t e = head_[static_cast<std::size_t>(u)]; e >= 0;
           e = edges_[static_cast<std::size_t>(e)].next) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] < 0) {
          level_[static_cast<std::size_t>(ed.to)] =
              level_[static_cast<std::size_t>(u)] + 1;
          q.push(ed.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  // Iterative blocking-flow step: finds one augmenting path in the level
  // graph and pushes its bottleneck. Returns the pushed amount (0 if no
  // path remains).
  std::int64_t dfs(std::int64_t s, std::int64_t t, std::int64_t /*limit*/) {
    path_.clear();
    std::int64_t u = s;
    for (;;) {
      if (u == t) {
        std::int64_t bottleneck = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t e : path_) {
          bottleneck =
              std::min(bottleneck, edges_[static_cast<std::size_t>(e)].cap);
        }
        for (std::int64_t e : path_) {
          edges_[static_cast<std::size_t>(e)].cap -= bottleneck;
          edges_[static_cast<std::size_t>(e ^ 1)].cap += bottleneck;
        }
        return bottleneck;
      }
      std::int64_t& e = iter_[static_cast<std::size_t>(u)];
      while (e >= 0) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] ==
                              level_[static_cast<std::size_t>(u)] + 1) {
          break;
        }
        e = ed.next;
      }
      if (e < 0) {
        // Dead end: unreachable in this level graph from here on.
        level_[static_cast<std::size_t>(u)] = -1;
        if (path_.empty()) return 0;
        u = retreat();
      } else {
        path_.push_back(e);
        u = edges_[static_cast<std::size_t>(e)].to;
      }
    }
  }

  std::int64_t retreat() {
    const std::int64_t e = path_.back();
    path_.pop_back();
    // Tail of the popped edge: its reverse edge's head.
    const std::int64_t u = edges_[static_cast<std::size_t>(e ^ 1)].to;
    iter_[static_cast<std::size_t>(u)] = edges_[static_cast<std::size_t>(e)].next;
    return u;
  }

  std::vector<Edge> edges_;
  std::vector<std::int64_t> head_;
  std::vector<std::int64_t> level_;
  std::vector<std::int64_t> iter_;
  std::vector<std::int64_t> path_;
};

}  // namespace percspin::detail

#endif  // PERCSPIN_SRC_DINIC_HPP
