// Copyright 2026 The MOSEval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOSEVAL_TESTS_TRANSPORT_ORACLE_HPP_
#define MOSEVAL_TESTS_TRANSPORT_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace moseval::testing {

// Exact optimal-transport cost between the empirical distributions of two
// small samples, solved as a transportation linear program via
// successive-shortest-path min-cost flow.  Masses are scaled to integers
// (each a-point supplies |b| units, each b-point demands |a| units), so the
// optimum is exact; the result divides the integral cost back by |a|*|b|.
//
// Deliberately independent of the production EMD code path: no sorting, no
// CDF integral, just the flow network.  Intended for samples of size <= ~16.
inline double transport_emd_oracle(const std::vector<double>& a,
                                   const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (n == 0 || m == 0) throw std::invalid_argument("empty sample");

  // Nodes: 0 = source, 1..n = a-points, n+1..n+m = b-points, n+m+1 = sink.
  const int source = 0;
  const int sink = n + m + 1;
  const int n_nodes = n + m + 2;

  struct EdgeRec {
    int to;
    long long cap;
    double cost;
    int rev;  // index of the reverse edge in graph[to]
  };
  std::vector<std::vector<EdgeRec>> graph(n_nodes);
  auto add_edge = [&graph](int from, int to, long long cap, double cost) {
    graph[from].push_back(
        EdgeRec{to, cap, cost, static_cast<int>(graph[to].size())});
    graph[to].push_back(
        EdgeRec{from, 0, -cost, static_cast<int>(graph[from].size()) - 1});
  };

  for (int i = 0; i < n; ++i) add_edge(source, 1 + i, m, 0.0);
  for (int j = 0; j < m; ++j) add_edge(1 + n + j, sink, n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      add_edge(1 + i, 1 + n + j, std::numeric_limits<long long>::max() / 4,
               std::abs(a[i] - b[j]));
    }
  }

  const long long total_flow = static_cast<long long>(n) * m;
  long long sent = 0;
  double total_cost = 0.0;
  while (sent < total_flow) {
    // Bellman-Ford (SPFA) shortest path by cost in the residual graph.
    std::vector<double> dist(n_nodes, std::numeric_limits<double>::infinity());
    std::vector<int> prev_node(n_nodes, -1), prev_edge(n_nodes, -1);
    std::vector<bool> in_queue(n_nodes, false);
    std::deque<int> queue;
    dist[source] = 0.0;
    queue.push_back(source);
    in_queue[source] = true;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      in_queue[u] = false;
      for (int e = 0; e < static_cast<int>(graph[u].size()); ++e) {
        const EdgeRec& edge = graph[u][e];
        if (edge.cap <= 0) continue;
        const double nd = dist[u] + edge.cost;
        if (nd < dist[edge.to] - 1e-15) {
          dist[edge.to] = nd;
          prev_node[edge.to] = u;
          prev_edge[edge.to] = e;
          if (!in_queue[edge.to]) {
            queue.push_back(edge.to);
            in_queue[edge.to] = true;
          }
        }
      }
    }
    if (prev_node[sink] == -1 && sink != source) {
      throw std::logic_error("transport oracle: no augmenting path");
    }
    long long push = total_flow - sent;
    for (int v = sink; v != source; v = prev_node[v]) {
      push = std::min(push, graph[prev_node[v]][prev_edge[v]].cap);
    }
    for (int v = sink; v != source; v = prev_node[v]) {
      EdgeRec& edge = graph[prev_node[v]][prev_edge[v]];
      edge.cap -= push;
      graph[v][edge.rev].cap += push;
      total_cost += edge.cost * static_cast<double>(push);
    }
    sent += push;
  }
  return total_cost / static_cast<double>(total_flow);
}

}  // namespace moseval::testing

#endif  // MOSEVAL_TESTS_TRANSPORT_ORACLE_HPP_
