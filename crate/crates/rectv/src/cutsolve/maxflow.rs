//! Dinic's algorithm over exact integer capacities.

use std::collections::VecDeque;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_traits::Zero;

pub trait Capacity: Clone + Ord + Zero + AddAssign + SubAssign {}

impl Capacity for i128 {}
impl Capacity for i64 {}
impl Capacity for BigInt {}

#[derive(Clone, Debug)]
pub struct FlowGraph<C> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<C>,
}

impl<C: Capacity> FlowGraph<C> {
    pub fn new(n: usize) -> Self {
        FlowGraph { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `u -> v` with capacity `c` and `v -> u` with capacity `rc`.
    pub fn add_edge(&mut self, u: usize, v: usize, c: C, rc: C) {
        let e = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.adj[u].push(e);
        self.to.push(u);
        self.cap.push(rc);
        self.adj[v].push(e + 1);
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.node_count()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if level[v] == u32::MAX && self.cap[e] > C::zero() {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> C {
        let mut total = C::zero();
        if s == t {
            return total;
        }
        while let Some(level) = self.levels(s, t) {
            let mut it = vec![0usize; self.node_count()];
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let mut f = self.cap[path[0]].clone();
                    for &e in &path[1..] {
                        if self.cap[e] < f {
                            f = self.cap[e].clone();
                        }
                    }
                    let mut cut = path.len();
                    for (k, &e) in path.iter().enumerate() {
                        self.cap[e] -= f.clone();
                        self.cap[e ^ 1] += f.clone();
                        if cut == path.len() && self.cap[e].is_zero() {
                            cut = k;
                        }
                    }
                    total += f;
                    path.truncate(cut);
                    u = path.last().map_or(s, |&e| self.to[e]);
                    continue;
                }
                let mut advanced = false;
                while it[u] < self.adj[u].len() {
                    let e = self.adj[u][it[u]];
                    let v = self.to[e];
                    if self.cap[e] > C::zero() && level[v] == level[u] + 1 {
                        path.push(e);
                        u = v;
                        advanced = true;
                        break;
                    }
                    it[u] += 1;
                }
                if !advanced {
                    match path.pop() {
                        None => break,
                        Some(e) => {
                            u = self.to[e ^ 1];
                            it[u] += 1;
                        }
                    }
                }
            }
        }
        total
    }

    /// After `max_flow`: nodes that cannot reach `t` in the residual graph.
    /// This is the largest source side among all minimum cuts.
    pub fn maximal_source_side(&self, t: usize) -> Vec<bool> {
        let mut reach = vec![false; self.node_count()];
        reach[t] = true;
        let mut q = VecDeque::from([t]);
        while let Some(v) = q.pop_front() {
            for &e in &self.adj[v] {
                let w = self.to[e];
                if !reach[w] && self.cap[e ^ 1] > C::zero() {
                    reach[w] = true;
                    q.push_back(w);
                }
            }
        }
        reach.into_iter().map(|r| !r).collect()
    }

    /// After `max_flow`: nodes reachable from `s`, the smallest source side.
    pub fn minimal_source_side(&self, s: usize) -> Vec<bool> {
        let mut reach = vec![false; self.node_count()];
        reach[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if !reach[v] && self.cap[e] > C::zero() {
                    reach[v] = true;
                    q.push_back(v);
                }
            }
        }
        reach
    }
}
