//! Exact discrete transport between two uniform measures of different sizes.
//!
//! Masses are scaled by `N·M` so every source atom supplies `M` integer units
//! and every sink atom demands `N`. The flow problem is solved by successive
//! shortest paths with Johnson potentials; integral capacities make the
//! optimum exact up to floating point in the costs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

struct Edge<T> {
    to: usize,
    cap: i64,
    cost: T,
}

struct FlowGraph<T> {
    edges: Vec<Edge<T>>,
    adj: Vec<Vec<usize>>,
}

impl<T: Scalar> FlowGraph<T> {
    fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: T) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
        });
    }

    /// Pushes `demand` units from `s` to `t`; returns the total cost.
    fn min_cost_flow(&mut self, s: usize, t: usize, demand: i64) -> Result<T> {
        let nodes = self.adj.len();
        let inf = T::infinity();
        let mut potential = vec![T::zero(); nodes];
        let mut flow = 0i64;
        let mut total = T::zero();
        while flow < demand {
            // dense Dijkstra on reduced costs
            let mut dist = vec![inf; nodes];
            let mut prev_edge = vec![usize::MAX; nodes];
            let mut done = vec![false; nodes];
            dist[s] = T::zero();
            loop {
                let mut u = usize::MAX;
                for v in 0..nodes {
                    if !done[v] && dist[v] < inf && (u == usize::MAX || dist[v] < dist[u]) {
                        u = v;
                    }
                }
                if u == usize::MAX {
                    break;
                }
                done[u] = true;
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap <= 0 || done[edge.to] {
                        continue;
                    }
                    // clamp tiny negative reduced costs from rounding
                    let reduced = (edge.cost + potential[u] - potential[edge.to]).max(T::zero());
                    let nd = dist[u] + reduced;
                    if nd < dist[edge.to] {
                        dist[edge.to] = nd;
                        prev_edge[edge.to] = e;
                    }
                }
            }
            if dist[t] == inf {
                return Err(Error::degenerate("transport network is infeasible"));
            }
            for v in 0..nodes {
                if dist[v] < inf {
                    potential[v] = potential[v] + dist[v];
                }
            }
            let mut push = demand - flow;
            let mut v = t;
            while v != s {
                let e = prev_edge[v];
                push = push.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = prev_edge[v];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                total = total + T::of(push as f64) * self.edges[e].cost;
                v = self.edges[e ^ 1].to;
            }
            flow += push;
        }
        Ok(total)
    }
}

/// Minimum of `Σ π_ij cost[i][j]` over couplings with row sums `1/N` and column
/// sums `1/M`, where `cost` is N×M.
pub fn min_cost_transport<T: Scalar>(cost: &[Vec<T>]) -> Result<T> {
    let n = cost.len();
    let m = cost.first().map_or(0, Vec::len);
    if n == 0 || m == 0 {
        return Err(Error::invalid("transport needs a non-empty cost matrix"));
    }
    if cost.iter().any(|row| row.len() != m) {
        return Err(Error::invalid("transport cost matrix is ragged"));
    }
    if cost.iter().flatten().any(|c| !c.is_finite() || *c < T::zero()) {
        return Err(Error::invalid("transport costs must be finite and nonnegative"));
    }
    let (ni, mi) = (n as i64, m as i64);
    let source = n + m;
    let sink = n + m + 1;
    let mut g = FlowGraph::new(n + m + 2);
    for (i, row) in cost.iter().enumerate() {
        g.add_edge(source, i, mi, T::zero());
        for (j, &c) in row.iter().enumerate() {
            g.add_edge(i, n + j, mi.min(ni), c);
        }
    }
    for j in 0..m {
        g.add_edge(n + j, sink, ni, T::zero());
    }
    let total = g.min_cost_flow(source, sink, ni * mi)?;
    Ok(total / (T::of_usize(n) * T::of_usize(m)))
}
