//! The FCC graph `G_f(t,k,r)` on F_q^(k+r).
//!
//! Vertex `(u, p)` has rank `rank(u) * q^r + rank(p)`. Two vertices are joined
//! when they share `u`, or when `f` differs and their distance is below `2t+1`.
//! An independent set of size `q^k` is exactly a systematic `(f,t)`-FCC.

use std::time::Instant;

use num_traits::ToPrimitive;

use crate::bitset::Bitset;
use crate::encoder::FccEncoder;
use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::gf::{checked_space, rank_digits, DigitTable, FieldVec, Limits};
use crate::mis::{max_independent_set, MisOptions};

#[derive(Debug, Clone)]
pub struct FccGraph {
    pub q: u32,
    pub k: usize,
    pub r: usize,
    pub t: usize,
    pub adj: Vec<Bitset>,
    /// Adjacency depends only on the difference of the endpoints.
    pub cayley: bool,
}

impl FccGraph {
    pub fn vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn split_vertex(&self, v: usize) -> (u64, u64) {
        let pr = (self.q as u64).pow(self.r as u32);
        (v as u64 / pr, v as u64 % pr)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn first_row(&self) -> Vec<u8> {
        (0..self.vertices()).map(|j| u8::from(self.adjacent(0, j))).collect()
    }

    pub fn from_rows(q: u32, k: usize, r: usize, t: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let n = checked_space(q, k + r, u64::MAX, "graph")? as usize;
        if rows.len() != n {
            return Err(Error::LengthMismatch(rows.len(), n));
        }
        let mut adj = vec![Bitset::new(n); n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch(row.len(), n));
            }
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    adj[i].insert(j);
                }
            }
        }
        Ok(FccGraph {
            q,
            k,
            r,
            t,
            adj,
            cayley: false,
        })
    }

    /// One row per line, as `0`/`1` digits.
    pub fn to_text(&self) -> String {
        let n = self.vertices();
        let mut out = String::with_capacity(n * (n + 1));
        for row in &self.adj {
            for j in 0..n {
                out.push(if row.contains(j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.vertices())
            .map(|i| (0..self.vertices()).map(|j| u8::from(self.adjacent(i, j))).collect())
            .collect()
    }
}

/// Reads a 0/1 matrix, one row per line; spaces and commas between digits are ignored.
pub fn parse_adjacency(text: &str) -> Result<Vec<Vec<u8>>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',' && *c != '&')
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::parse(n + 1, format!("bad adjacency symbol {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        return Err(Error::parse(bad + 1, "matrix is not square"));
    }
    Ok(rows)
}

pub fn build_graph(f: &FunctionSpec, t: usize, r: usize, limits: &Limits) -> Result<FccGraph> {
    let q = f.q();
    let n = checked_space(q, f.k() + r, limits.graph_vertices, "FCC graph")? as usize;
    let pr = (q as u64).pow(r as u32) as usize;
    let keys: Vec<u64> = (0..(n / pr) as u64).map(|m| f.key_of_rank(m)).collect();
    let digits = DigitTable::new(q, f.k() + r, n as u64);
    let need = 2 * t + 1;
    let edge = |a: usize, b: usize| -> bool {
        let (ua, ub) = (a / pr, b / pr);
        ua == ub || (keys[ua] != keys[ub] && digits.distance(a as u64, b as u64) < need)
    };
    let mut adj = vec![Bitset::new(n); n];
    if f.is_linear() {
        // Cayley graph: neighbours of x are x + s for s in the connection set.
        let conn: Vec<usize> = (1..n).filter(|&s| edge(0, s)).collect();
        for (x, row) in adj.iter_mut().enumerate() {
            let dx = digits.row(x as u64);
            for &s in &conn {
                let y = if q == 2 { x ^ s } else { add_ranks(q, dx, digits.row(s as u64)) };
                row.insert(y);
            }
        }
    } else {
        for a in 0..n {
            for b in (a + 1)..n {
                if edge(a, b) {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
    }
    Ok(FccGraph {
        q,
        k: f.k(),
        r,
        t,
        adj,
        cayley: f.is_linear(),
    })
}

fn add_ranks(q: u32, a: &[u32], b: &[u32]) -> usize {
    a.iter()
        .zip(b)
        .fold(0usize, |acc, (&x, &y)| acc * q as usize + ((x + y) % q) as usize)
}

/// First adjacency row of `G_f(t,k,r)` without building the graph.
pub fn graph_first_row(f: &FunctionSpec, t: usize, r: usize, limit: u64) -> Result<Vec<u8>> {
    let q = f.q();
    let n = checked_space(q, f.k() + r, limit, "FCC graph row")?;
    let pr = (q as u64).pow(r as u32);
    let k0 = f.key_of_rank(0);
    let need = 2 * t + 1;
    Ok((0..n)
        .map(|x| {
            let u = x / pr;
            let adjacent = if x == 0 {
                false
            } else if u == 0 {
                true
            } else {
                let w = rank_digits(q, f.k() + r, x).iter().filter(|&&d| d != 0).count();
                f.key_of_rank(u) != k0 && w < need
            };
            u8::from(adjacent)
        })
        .collect())
}

/// `G_f(t,k,0)` boxed with the complete graph on the `q^r` parities.
pub fn cartesian_bound_graph(f: &FunctionSpec, t: usize, r: usize, limits: &Limits) -> Result<FccGraph> {
    let q = f.q();
    let n = checked_space(q, f.k() + r, limits.graph_vertices, "Cartesian graph")? as usize;
    let base = build_graph(f, t, 0, limits)?;
    let pr = (q as u64).pow(r as u32) as usize;
    let mut adj = vec![Bitset::new(n); n];
    for (v, row) in adj.iter_mut().enumerate() {
        let (u, p) = (v / pr, v % pr);
        for p2 in 0..pr {
            if p2 != p {
                row.insert(u * pr + p2);
            }
        }
        for u2 in base.adj[u].iter() {
            row.insert(u2 * pr + p);
        }
    }
    Ok(FccGraph {
        q,
        k: f.k(),
        r,
        t,
        adj,
        cayley: base.cayley,
    })
}

/// Where the recursive block-circulant structure first breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockViolation {
    /// Digit position (0 = most significant) whose shift disagrees.
    pub level: usize,
    pub row: usize,
    pub col: usize,
}

/// Checks `G[i][j] = G[i'][j']` whenever `i', j'` are `i, j` with digit `m`
/// incremented mod `q`, for every digit position `m`.
pub fn verify_block_circulant(rows: &[Vec<u8>], q: u32) -> Result<Option<BlockViolation>> {
    let n = rows.len();
    let mut len = 0usize;
    let mut size = 1usize;
    while size < n {
        size *= q as usize;
        len += 1;
    }
    if size != n {
        return Err(Error::invalid(format!("{n} is not a power of {q}")));
    }
    for level in 0..len {
        let step = (q as usize).pow((len - 1 - level) as u32);
        let shift = |x: usize| {
            let d = (x / step) % q as usize;
            x - d * step + ((d + 1) % q as usize) * step
        };
        for i in 0..n {
            let si = shift(i);
            for j in 0..n {
                if rows[i][j] != rows[si][shift(j)] {
                    return Ok(Some(BlockViolation { level, row: i, col: j }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Default)]
pub struct AlphaBudget {
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
}

impl AlphaBudget {
    fn options(&self, target: Option<usize>, fix: Option<usize>) -> MisOptions {
        let d = MisOptions::default();
        MisOptions {
            target,
            fix_vertex: fix,
            node_limit: self.node_limit.unwrap_or(d.node_limit),
            deadline: self.deadline,
            lower: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaResult {
    Exact { alpha: usize, witness: Vec<usize> },
    /// Decision mode succeeded.
    AtLeast { target: usize, witness: Vec<usize> },
    /// Decision mode refuted: `alpha < target`.
    Below { target: usize },
}

pub fn independence_number(
    g: &FccGraph,
    target: Option<usize>,
    budget: &AlphaBudget,
    limits: &Limits,
) -> Result<AlphaResult> {
    if target.is_none() && g.vertices() as u64 > limits.exact_alpha_vertices {
        return Err(Error::TooLarge {
            what: "exact independence number",
            count: g.vertices() as u128,
            limit: limits.exact_alpha_vertices as u128,
        });
    }
    let fix = (g.cayley && g.vertices() > 0).then_some(0);
    let sol = max_independent_set(&g.adj, &budget.options(target, fix))?;
    Ok(match target {
        None => AlphaResult::Exact {
            alpha: sol.size(),
            witness: sol.set,
        },
        Some(t) if sol.size() >= t => AlphaResult::AtLeast {
            target: t,
            witness: sol.set,
        },
        Some(t) => AlphaResult::Below { target: t },
    })
}

/// Exact `alpha(G_f(t,k,0))`. Coordinates ignored by `f` are factored out first:
/// `alpha = q^z * alpha(G_f'(t,k-z,0))` with `f'` the restriction to the rest.
pub fn message_graph_alpha(f: &FunctionSpec, t: usize, budget: &AlphaBudget, limits: &Limits) -> Result<u64> {
    let ignored = f.ignored_coordinates();
    let (g, z) = if ignored.is_empty() || ignored.len() == f.k() {
        (f.clone(), 0)
    } else {
        (f.drop_coordinates(&ignored)?, ignored.len())
    };
    if ignored.len() == f.k() {
        // constant function: no edges at r = 0
        return Ok((f.q() as u64).pow(f.k() as u32));
    }
    let injective = match g.rows() {
        Some(rows) => rows.len() == g.k(),
        None => g.l() as u64 == (g.q() as u64).pow(g.k() as u32),
    };
    if injective {
        // the graph joins all words closer than 2t+1
        let node_limit = budget.node_limit.unwrap_or(MisOptions::default().node_limit);
        let est = crate::bounds::a_q_exact(g.q() as u64, g.k(), 2 * t + 1, node_limit)?;
        let alpha = est.value.to_u64().expect("at most q^k");
        return Ok(alpha * (f.q() as u64).pow(z as u32));
    }
    let graph = build_graph(&g, t, 0, limits)?;
    let alpha = match independence_number(&graph, None, budget, limits)? {
        AlphaResult::Exact { alpha, .. } => alpha as u64,
        _ => unreachable!("exact mode"),
    };
    Ok(alpha * (f.q() as u64).pow(z as u32))
}

/// Reads an FCC off an independent set of size `q^k`.
pub fn extract_fcc(g: &FccGraph, f: &FunctionSpec, set: &[usize]) -> Result<FccEncoder> {
    let size = (g.q as u64).pow(g.k as u32) as usize;
    let mut parities: Vec<Option<FieldVec>> = vec![None; size];
    for &v in set {
        let (u, p) = g.split_vertex(v);
        let slot = &mut parities[u as usize];
        if slot.is_some() {
            return Err(Error::invalid(format!("message {u} appears twice")));
        }
        *slot = Some(FieldVec::from_rank(f.field(), g.r, p)?);
    }
    let parities = parities
        .into_iter()
        .enumerate()
        .map(|(u, p)| p.ok_or_else(|| Error::invalid(format!("message {u} missing from the set"))))
        .collect::<Result<Vec<_>>>()?;
    FccEncoder::new(f.clone(), g.t, g.r, parities)
}

/// An `(f,t)`-FCC with `r` parities, if one exists.
pub fn find_fcc(f: &FunctionSpec, t: usize, r: usize, budget: &AlphaBudget, limits: &Limits) -> Result<Option<FccEncoder>> {
    let g = build_graph(f, t, r, limits)?;
    let target = (f.q() as usize).pow(f.k() as u32);
    match independence_number(&g, Some(target), budget, limits)? {
        AlphaResult::AtLeast { witness, .. } => Ok(Some(extract_fcc(&g, f, &witness)?)),
        _ => Ok(None),
    }
}

/// Smallest `r <= r_max` admitting an `(f,t)`-FCC, found by graph search.
pub fn min_redundancy_by_graph(
    f: &FunctionSpec,
    t: usize,
    r_max: usize,
    budget: &AlphaBudget,
    limits: &Limits,
) -> Result<Option<(usize, FccEncoder)>> {
    for r in 0..=r_max {
        if let Some(e) = find_fcc(f, t, r, budget, limits)? {
            return Ok(Some((r, e)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::verify_fcc;
    use crate::gf::{symbol_distance, PrimeField};

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn naive(f: &FunctionSpec, t: usize, r: usize) -> Vec<Vec<u8>> {
        let q = f.q();
        let n = (q as usize).pow((f.k() + r) as u32);
        let pr = (q as usize).pow(r as u32);
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            return 0;
                        }
                        let (ua, ub) = (a / pr, b / pr);
                        let da = rank_digits(q, f.k() + r, a as u64);
                        let db = rank_digits(q, f.k() + r, b as u64);
                        let fa = f.eval(&FieldVec::from_rank(f.field(), f.k(), ua as u64).unwrap()).unwrap();
                        let fb = f.eval(&FieldVec::from_rank(f.field(), f.k(), ub as u64).unwrap()).unwrap();
                        u8::from(ua == ub || (fa != fb && symbol_distance(&da, &db) < 2 * t + 1))
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cayley_construction_matches_definition() {
        let f = FunctionSpec::linear(gf(3), vec![vec![1, 1]]).unwrap();
        for (t, r) in [(1, 0), (1, 1), (2, 1)] {
            assert_eq!(build_graph(&f, t, r, &Limits::default()).unwrap().rows(), naive(&f, t, r));
        }
        let f = FunctionSpec::linear(gf(2), vec![vec![0, 1, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(build_graph(&f, 1, 1, &Limits::default()).unwrap().rows(), naive(&f, 1, 1));
        let or = FunctionSpec::from_fn(gf(2), 2, |u| u64::from(u.symbols()[0] | u.symbols()[1])).unwrap();
        assert_eq!(build_graph(&or, 1, 2, &Limits::default()).unwrap().rows(), naive(&or, 1, 2));
    }

    #[test]
    fn first_row_matches_graph() {
        let f = FunctionSpec::linear(gf(3), vec![vec![1, 2, 0]]).unwrap();
        let g = build_graph(&f, 1, 1, &Limits::default()).unwrap();
        assert_eq!(graph_first_row(&f, 1, 1, 1 << 20).unwrap(), g.first_row());
    }

    #[test]
    fn or_function_fcc_exists_at_two_parities() {
        let or = FunctionSpec::from_fn(gf(2), 2, |u| u64::from(u.symbols()[0] | u.symbols()[1])).unwrap();
        let lim = Limits::default();
        let b = AlphaBudget::default();
        let (r, e) = min_redundancy_by_graph(&or, 1, 3, &b, &lim).unwrap().unwrap();
        assert_eq!(r, 2);
        assert!(verify_fcc(&e).unwrap());
    }

    #[test]
    fn linear_graphs_are_block_circulant() {
        let f = FunctionSpec::linear(gf(3), vec![vec![1, 1]]).unwrap();
        let g = build_graph(&f, 1, 0, &Limits::default()).unwrap();
        assert_eq!(verify_block_circulant(&g.rows(), 3).unwrap(), None);
        let mut rows = g.rows();
        rows[0][1] ^= 1;
        rows[1][0] ^= 1;
        assert!(verify_block_circulant(&rows, 3).unwrap().is_some());
    }

    #[test]
    fn cartesian_graph_contains_fcc_graph() {
        let f = FunctionSpec::linear(gf(2), vec![vec![0, 1, 1], vec![1, 1, 0]]).unwrap();
        let lim = Limits::default();
        let g = build_graph(&f, 1, 1, &lim).unwrap();
        let c = cartesian_bound_graph(&f, 1, 1, &lim).unwrap();
        for a in 0..g.vertices() {
            for b in c.adj[a].iter() {
                assert!(g.adjacent(a, b), "{a} {b}");
            }
        }
    }

    #[test]
    fn ignored_coordinates_scale_alpha() {
        let f = FunctionSpec::linear(gf(2), vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let lim = Limits::default();
        let b = AlphaBudget::default();
        let direct = match independence_number(&build_graph(&f, 1, 0, &lim).unwrap(), None, &b, &lim).unwrap() {
            AlphaResult::Exact { alpha, .. } => alpha as u64,
            _ => unreachable!(),
        };
        assert_eq!(message_graph_alpha(&f, 1, &b, &lim).unwrap(), direct);
    }

    #[test]
    fn extract_rejects_duplicates() {
        let f = FunctionSpec::linear(gf(2), vec![vec![1]]).unwrap();
        let g = build_graph(&f, 0, 1, &Limits::default()).unwrap();
        assert!(extract_fcc(&g, &f, &[0, 1]).is_err());
        assert!(extract_fcc(&g, &f, &[0, 3]).is_ok());
    }
}
