//! Feasible integral flow with lower and upper arc bounds and node supplies.
//!
//! Reduced to a single max-flow on the residual capacities `hi − lo`, with a
//! super source feeding nodes whose lower-bound excess is positive and a
//! super sink draining the rest. The max flow is Dinic's algorithm; arcs are
//! explored in insertion order, so the answer is deterministic.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
    rev: usize,
}

#[derive(Debug, Clone)]
struct Dinic {
    graph: Vec<Vec<Edge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Returns (node, index) of the forward edge.
    fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> (usize, usize) {
        let fwd = self.graph[from].len();
        let back = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Edge { to, cap, rev: back });
        self.graph[to].push(Edge {
            to: from,
            cap: 0,
            rev: fwd,
        });
        (from, fwd)
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in &self.graph[u] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.graph[u].len() {
            let i = self.iter[u];
            let Edge { to, cap, rev } = self.graph[u][i];
            if cap > 0 && self.level[u] < self.level[to] {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.graph[u][i].cap -= pushed;
                    self.graph[to][rev].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub lo: i64,
    pub hi: i64,
}

/// A flow problem: every arc carries a value in `[lo, hi]` and every node's
/// outflow minus inflow equals its supply (negative supply is demand).
#[derive(Debug, Clone, Default)]
pub struct BoundedFlow {
    supply: Vec<i64>,
    arcs: Vec<Arc>,
}

impl BoundedFlow {
    pub fn new(nodes: usize) -> Self {
        BoundedFlow {
            supply: vec![0; nodes],
            arcs: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.supply.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.supply.push(0);
        self.supply.len() - 1
    }

    pub fn set_supply(&mut self, node: usize, supply: i64) {
        self.supply[node] = supply;
    }

    pub fn add_arc(&mut self, from: usize, to: usize, lo: i64, hi: i64) -> usize {
        debug_assert!(lo <= hi);
        self.arcs.push(Arc { from, to, lo, hi });
        self.arcs.len() - 1
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// An integral flow meeting every bound and supply, if one exists.
    pub fn solve(&self) -> Option<Vec<i64>> {
        if self.arcs.iter().any(|a| a.lo > a.hi) || self.supply.iter().sum::<i64>() != 0 {
            return None;
        }
        let n = self.supply.len();
        let (src, sink) = (n, n + 1);
        let mut dinic = Dinic::new(n + 2);

        let mut excess = self.supply.clone();
        let handles: Vec<_> = self
            .arcs
            .iter()
            .map(|a| {
                excess[a.from] -= a.lo;
                excess[a.to] += a.lo;
                dinic.add_edge(a.from, a.to, a.hi - a.lo)
            })
            .collect();

        let mut required = 0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0 {
                dinic.add_edge(src, v, e);
                required += e;
            } else if e < 0 {
                dinic.add_edge(v, sink, -e);
            }
        }
        if dinic.max_flow(src, sink) != required {
            return None;
        }
        Some(
            self.arcs
                .iter()
                .zip(handles)
                .map(|(a, (node, idx))| a.hi - dinic.graph[node][idx].cap)
                .collect(),
        )
    }

    /// Whether `flow` meets every bound and supply.
    pub fn is_feasible(&self, flow: &[i64]) -> bool {
        if flow.len() != self.arcs.len() {
            return false;
        }
        let mut net = vec![0i64; self.supply.len()];
        for (a, &x) in self.arcs.iter().zip(flow) {
            if x < a.lo || x > a.hi {
                return false;
            }
            net[a.from] += x;
            net[a.to] -= x;
        }
        net == self.supply
    }
}
