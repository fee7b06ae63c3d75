//! Min-cost max-flow with nonnegative edge costs (successive shortest paths
//! with Dijkstra and node potentials). Degree lower bounds are handled by the
//! caller via the usual excess/super-source transformation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

const INF: i64 = i64::MAX / 4;

#[derive(Clone, Copy)]
struct Edge {
    to: usize,
    rev: usize,
    cap: i64,
    cost: i64,
}

/// Identifier returned by [`MinCostFlow::add_edge`]; use it to read back the
/// flow routed through that edge.
#[derive(Clone, Copy)]
pub struct EdgeId {
    from: usize,
    idx: usize,
    initial_cap: i64,
}

pub struct MinCostFlow {
    graph: Vec<Vec<Edge>>,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        Self { graph: vec![Vec::new(); nodes] }
    }

    /// Adds a directed edge. Costs must be nonnegative so Dijkstra stays
    /// valid from the first augmentation.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> EdgeId {
        assert!(cost >= 0, "edge costs must be nonnegative");
        assert!(from != to);
        let fwd = self.graph[from].len();
        let bwd = self.graph[to].len();
        self.graph[from].push(Edge { to, rev: bwd, cap, cost });
        self.graph[to].push(Edge { to: from, rev: fwd, cap: 0, cost: -cost });
        EdgeId { from, idx: fwd, initial_cap: cap }
    }

    /// Units actually routed through `id`.
    pub fn edge_flow(&self, id: EdgeId) -> i64 {
        id.initial_cap - self.graph[id.from][id.idx].cap
    }

    /// Pushes up to `limit` units from `s` to `t`; returns (flow, cost).
    pub fn flow(&mut self, s: usize, t: usize, limit: i64) -> (i64, i64) {
        let n = self.graph.len();
        let mut potential = vec![0i64; n];
        let mut total_flow = 0;
        let mut total_cost = 0;
        while total_flow < limit {
            // Dijkstra on reduced costs.
            let mut dist = vec![INF; n];
            let mut prev: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if d > dist[v] {
                    continue;
                }
                for (idx, e) in self.graph[v].iter().enumerate() {
                    if e.cap <= 0 {
                        continue;
                    }
                    let nd = d + e.cost + potential[v] - potential[e.to];
                    if nd < dist[e.to] {
                        dist[e.to] = nd;
                        prev[e.to] = (v, idx);
                        heap.push(Reverse((nd, e.to)));
                    }
                }
            }
            if dist[t] >= INF {
                break;
            }
            for v in 0..n {
                if dist[v] < INF {
                    potential[v] += dist[v];
                }
            }
            // Bottleneck along the shortest path.
            let mut push = limit - total_flow;
            let mut v = t;
            while v != s {
                let (u, idx) = prev[v];
                push = push.min(self.graph[u][idx].cap);
                v = u;
            }
            let mut v = t;
            while v != s {
                let (u, idx) = prev[v];
                self.graph[u][idx].cap -= push;
                let rev = self.graph[u][idx].rev;
                total_cost += push * self.graph[u][idx].cost;
                self.graph[v][rev].cap += push;
                v = u;
            }
            total_flow += push;
        }
        (total_flow, total_cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_cheapest_paths_first() {
        // s -> a -> t (cost 1+1), s -> b -> t (cost 3+3), capacities 1 each.
        let mut f = MinCostFlow::new(4);
        let (s, a, b, t) = (0, 1, 2, 3);
        f.add_edge(s, a, 1, 1);
        f.add_edge(a, t, 1, 1);
        let sb = f.add_edge(s, b, 1, 3);
        f.add_edge(b, t, 1, 3);
        let (flow, cost) = f.flow(s, t, 1);
        assert_eq!((flow, cost), (1, 2));
        assert_eq!(f.edge_flow(sb), 0);
        let (flow, cost) = f.flow(s, t, 1);
        assert_eq!((flow, cost), (1, 6));
        assert_eq!(f.edge_flow(sb), 1);
    }

    #[test]
    fn respects_capacity() {
        let mut f = MinCostFlow::new(2);
        f.add_edge(0, 1, 5, 0);
        let (flow, _) = f.flow(0, 1, 100);
        assert_eq!(flow, 5);
    }
}
