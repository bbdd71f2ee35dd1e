//! Exact maximum independent set by bitset branch and bound.
//!
//! Runs a maximum-clique search on the complement graph. The bound at each
//! node is a greedy partition of the candidates into cliques of the original
//! graph; no independent set meets a clique twice. Branching order is fixed,
//! so the same graph always yields the same witness.

use std::time::Instant;

use crate::bitset::Bitset;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MisOptions {
    /// Stop as soon as an independent set of this size is found. Branches that
    /// cannot reach it are cut, so a smaller result proves `alpha < target`
    /// without being maximum itself.
    pub target: Option<usize>,
    /// Only sets larger than this are searched. A smaller result then proves
    /// `alpha <= lower`.
    pub lower: usize,
    /// Force this vertex into the set. Safe when the graph is vertex transitive.
    pub fix_vertex: Option<usize>,
    pub node_limit: u64,
    pub deadline: Option<Instant>,
}

impl Default for MisOptions {
    fn default() -> Self {
        MisOptions {
            target: None,
            lower: 0,
            fix_vertex: None,
            node_limit: 200_000_000,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisSolution {
    /// Vertices of the best set found, ascending.
    pub set: Vec<usize>,
    pub nodes: u64,
}

impl MisSolution {
    pub fn size(&self) -> usize {
        self.set.len()
    }
}

pub fn max_independent_set(adj: &[Bitset], opts: &MisOptions) -> Result<MisSolution> {
    let n = adj.len();
    if n == 0 {
        return Ok(MisSolution {
            set: Vec::new(),
            nodes: 0,
        });
    }
    for (v, row) in adj.iter().enumerate() {
        if row.len() != n {
            return Err(Error::LengthMismatch(row.len(), n));
        }
        if row.contains(v) {
            return Err(Error::invalid(format!("vertex {v} has a self loop")));
        }
    }

    // Relabel so that low-degree vertices (likely members of large sets) come first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (adj[v].count(), v));
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let local: Vec<Bitset> = order
        .iter()
        .map(|&v| {
            let mut b = Bitset::new(n);
            for u in adj[v].iter() {
                b.insert(pos[u]);
            }
            b
        })
        .collect();
    let non_adj: Vec<Bitset> = local
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut c = row.complement();
            c.remove(i);
            c
        })
        .collect();

    let mut search = Search {
        adj: &local,
        non_adj: &non_adj,
        best: Vec::new(),
        current: Vec::new(),
        target: opts.target,
        lower: opts.lower,
        nodes: 0,
        node_limit: opts.node_limit,
        deadline: opts.deadline,
        done: false,
    };

    let mut root = Bitset::full(n);
    if let Some(v) = opts.fix_vertex {
        if v >= n {
            return Err(Error::invalid(format!("fixed vertex {v} out of range")));
        }
        let lv = pos[v];
        search.current.push(lv);
        root = non_adj[lv].clone();
    }
    search.seed_greedy(&root);
    let root_bound = search.current.len() + search.color_bound(&root);

    let outcome = if search.done {
        Ok(())
    } else {
        search.expand(root)
    };
    let mut set: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    set.sort_unstable();
    match outcome {
        Ok(()) => Ok(MisSolution {
            set,
            nodes: search.nodes,
        }),
        Err(()) => Err(Error::Budget {
            what: "independence number",
            nodes: search.nodes,
            lower: set.len() as u64,
            upper: root_bound as u64,
        }),
    }
}

struct Search<'a> {
    adj: &'a [Bitset],
    non_adj: &'a [Bitset],
    best: Vec<usize>,
    current: Vec<usize>,
    target: Option<usize>,
    lower: usize,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
    done: bool,
}

impl Search<'_> {
    fn record(&mut self) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
            if self.target.is_some_and(|t| self.best.len() >= t) {
                self.done = true;
            }
        }
    }

    /// Sizes at or below this are not worth pursuing.
    fn floor(&self) -> usize {
        let floor = self.best.len().max(self.lower);
        match self.target {
            Some(t) => floor.max(t.saturating_sub(1)),
            None => floor,
        }
    }

    fn seed_greedy(&mut self, p: &Bitset) {
        let saved = self.current.clone();
        let mut cand = p.clone();
        while let Some(v) = cand.first() {
            self.current.push(v);
            cand.intersect_with(&self.non_adj[v]);
        }
        self.record();
        self.current = saved;
    }

    fn color_bound(&self, p: &Bitset) -> usize {
        let mut uncolored = p.clone();
        let mut colors = 0;
        while !uncolored.is_empty() {
            colors += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncolored.remove(v);
                q.intersect_with(&self.adj[v]);
            }
        }
        colors
    }

    fn expand(&mut self, mut p: Bitset) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(());
        }
        if self.nodes & 0xfff == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(());
        }

        // Greedy clique cover; vertices listed with non-decreasing color.
        let mut order = Vec::with_capacity(p.count());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncolored.remove(v);
                q.intersect_with(&self.adj[v]);
                order.push((v, color));
            }
        }

        for &(v, c) in order.iter().rev() {
            if self.current.len() + c <= self.floor() {
                return Ok(());
            }
            self.current.push(v);
            let next = p.intersection(&self.non_adj[v]);
            if next.is_empty() {
                self.record();
            } else {
                self.expand(next)?;
            }
            self.current.pop();
            if self.done {
                return Ok(());
            }
            p.remove(v);
        }
        Ok(())
    }
}

#[cfg(test)]
fn brute_force_alpha(adj: &[Bitset]) -> usize {
    let n = adj.len();
    assert!(n <= 24);
    let masks: Vec<u32> = adj
        .iter()
        .map(|row| row.iter().fold(0u32, |m, v| m | 1 << v))
        .collect();
    let mut best = 0;
    for s in 0u32..(1 << n) {
        if (s.count_ones() as usize) <= best {
            continue;
        }
        let ok = (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0);
        if ok {
            best = s.count_ones() as usize;
        }
    }
    best
}

pub fn is_independent(adj: &[Bitset], set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && !adj[a].contains(b)))
}
