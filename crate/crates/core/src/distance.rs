//! Distance requirement matrices, D-codes and the exact `N_q(D)` search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::functions::{class_distances, CosetDecomposition, FunctionSpec, Label};
use crate::gf::{checked_space, rank_digits, DigitTable, FieldVec, Limits, PrimeField};

/// Square symmetric matrix of required distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    m: usize,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let m = rows.len();
        let mut entries = Vec::with_capacity(m * m);
        for row in &rows {
            if row.len() != m {
                return Err(Error::LengthMismatch(row.len(), m));
            }
            entries.extend_from_slice(row);
        }
        let d = DistanceMatrix { m, entries };
        for i in 0..m {
            if d.get(i, i) != 0 {
                return Err(Error::invalid(format!("diagonal entry ({i},{i}) is not zero")));
            }
            for j in 0..i {
                if d.get(i, j) != d.get(j, i) {
                    return Err(Error::invalid(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(d)
    }

    fn from_fn(m: usize, mut g: impl FnMut(usize, usize) -> u32) -> Self {
        let mut entries = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    entries[i * m + j] = g(i, j);
                }
            }
        }
        DistanceMatrix { m, entries }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.m).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Principal submatrix on `idx`, in that order.
    pub fn restrict(&self, idx: &[usize]) -> DistanceMatrix {
        DistanceMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Sum over unordered pairs.
    pub fn upper_sum(&self) -> u64 {
        (0..self.m)
            .flat_map(|i| ((i + 1)..self.m).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j) as u64)
            .sum()
    }

    /// CSV, one row per line, preceded by `#` comment lines.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            out.push_str(&format!("# {h}\n"));
        }
        for i in 0..self.m {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|e| Error::parse(n + 1, format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        DistanceMatrix::new(rows)
    }
}

fn requirement(two_t_plus_one: usize, d: usize) -> u32 {
    two_t_plus_one.saturating_sub(d) as u32
}

/// DRM over all of F_q^k in rank order: `[2t+1-d(u_i,u_j)]^+` where `f` differs, else 0.
pub fn build_drm(f: &FunctionSpec, t: usize, limits: &Limits) -> Result<DistanceMatrix> {
    let size = checked_space(f.q(), f.k(), limits.drm_rows, "distance requirement matrix")?;
    let keys: Vec<u64> = (0..size).map(|r| f.key_of_rank(r)).collect();
    let digits = DigitTable::new(f.q(), f.k(), size);
    let n = 2 * t + 1;
    Ok(DistanceMatrix::from_fn(size as usize, |i, j| {
        if keys[i] == keys[j] {
            0
        } else {
            requirement(n, digits.distance(i as u64, j as u64))
        }
    }))
}

/// DRM restricted to the listed messages, in that order.
pub fn build_drm_on(f: &FunctionSpec, t: usize, messages: &[FieldVec]) -> Result<DistanceMatrix> {
    let labels = messages.iter().map(|u| f.eval(u)).collect::<Result<Vec<_>>>()?;
    let n = 2 * t + 1;
    Ok(DistanceMatrix::from_fn(messages.len(), |i, j| {
        if labels[i] == labels[j] {
            0
        } else {
            requirement(n, crate::gf::symbol_distance(messages[i].symbols(), messages[j].symbols()))
        }
    }))
}

/// FDM, with classes in first-occurrence order. Returns the labels alongside.
pub fn build_fdm(f: &FunctionSpec, t: usize, limits: &Limits) -> Result<(DistanceMatrix, Vec<Label>)> {
    let dec = CosetDecomposition::new(f, limits)?;
    let d = class_distances(f, &dec, limits)?;
    let n = 2 * t + 1;
    Ok((
        DistanceMatrix::from_fn(dec.len(), |i, j| requirement(n, d[i][j])),
        dec.labels,
    ))
}

/// `M` parity vectors of length `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCode {
    pub field: PrimeField,
    pub r: usize,
    pub words: Vec<FieldVec>,
}

impl ParityCode {
    pub fn new(field: PrimeField, r: usize, words: Vec<FieldVec>) -> Result<Self> {
        for w in &words {
            if w.len() != r {
                return Err(Error::LengthMismatch(w.len(), r));
            }
            if w.field() != field {
                return Err(Error::FieldMismatch(w.field().q(), field.q()));
            }
        }
        Ok(ParityCode { field, r, words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Digit strings, one per line. The first non-comment line may be `q <q>`;
    /// binary is assumed otherwise.
    pub fn parse(text: &str, default_q: Option<u64>) -> Result<Self> {
        let mut field = None;
        let mut words = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("q ") {
                if field.is_some() || !words.is_empty() {
                    return Err(Error::parse(n + 1, "`q` line must come first"));
                }
                let q = rest.trim().parse::<u64>().map_err(|e| Error::parse(n + 1, e.to_string()))?;
                field = Some(PrimeField::new(q)?);
                continue;
            }
            let k = match field {
                Some(k) => k,
                None => {
                    let k = PrimeField::new(default_q.unwrap_or(2))?;
                    field = Some(k);
                    k
                }
            };
            words.push(FieldVec::parse(k, line).map_err(|e| Error::parse(n + 1, e.to_string()))?);
        }
        let field = match field {
            Some(k) => k,
            None => PrimeField::new(default_q.unwrap_or(2))?,
        };
        let r = words.first().map_or(0, FieldVec::len);
        ParityCode::new(field, r, words)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q {}\n", self.field.q());
        for w in &self.words {
            out.push_str(&format!("{w}\n"));
        }
        out
    }
}

/// First pair `(i, j, distance)` with `d(p_i, p_j) < D_ij`.
pub fn d_code_violation(p: &ParityCode, d: &DistanceMatrix) -> Result<Option<(usize, usize, usize)>> {
    if p.len() != d.order() {
        return Err(Error::LengthMismatch(p.len(), d.order()));
    }
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let dist = crate::gf::symbol_distance(p.words[i].symbols(), p.words[j].symbols());
            if (dist as u32) < d.get(i, j) {
                return Ok(Some((i, j, dist)));
            }
        }
    }
    Ok(None)
}

pub fn verify_d_code(p: &ParityCode, d: &DistanceMatrix) -> Result<bool> {
    Ok(d_code_violation(p, d)?.is_none())
}

#[derive(Debug, Clone, Copy)]
pub struct NqBudget {
    pub max_order: usize,
    pub r_cap: usize,
    pub node_limit: u64,
}

impl Default for NqBudget {
    fn default() -> Self {
        NqBudget {
            max_order: 20,
            r_cap: 12,
            node_limit: 50_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NqResult {
    pub length: usize,
    /// Lexicographically smallest D-code of that length.
    pub witness: ParityCode,
    pub nodes: u64,
}

/// Smallest `r` admitting a D-code, with the lexicographically first witness.
///
/// Length `r` runs upward from `max D_ij`; every shorter length is refuted by
/// exhaustive depth-first search with `p_0 = 0` and `p_1` of the form `0..01..1`.
pub fn n_q_exact(d: &DistanceMatrix, q: u64, budget: &NqBudget) -> Result<NqResult> {
    let field = PrimeField::new(q)?;
    let m = d.order();
    if m > budget.max_order {
        return Err(Error::TooLarge {
            what: "D-code search order",
            count: m as u128,
            limit: budget.max_order as u128,
        });
    }
    let mut nodes = 0u64;
    let start = d.max_entry() as usize;
    if start > budget.r_cap {
        return Err(Error::Budget {
            what: "N_q search (length cap)",
            nodes,
            lower: start as u64,
            upper: u64::MAX,
        });
    }
    for r in start..=budget.r_cap {
        let size = checked_space(field.q(), r, 1 << 16, "D-code search space")?;
        let digits = DigitTable::new(field.q(), r, size);
        let mut search = DcodeSearch {
            d,
            digits: &digits,
            size: size as usize,
            nodes: &mut nodes,
            node_limit: budget.node_limit,
            assignment: Vec::with_capacity(m),
        };
        let mut domains = vec![Bitset::full(size as usize); m];
        if m > 0 {
            domains[0] = Bitset::new(size as usize);
            domains[0].insert(0);
        }
        if m > 1 {
            let mut canon = Bitset::new(size as usize);
            for w in 0..=r {
                let word: Vec<u32> = (0..r).map(|i| u32::from(i >= r - w)).collect();
                canon.insert(crate::gf::digits_rank(field.q(), &word) as usize);
            }
            domains[1].intersect_with(&canon);
        }
        match search.run(domains) {
            Ok(Some(ranks)) => {
                let words = ranks
                    .iter()
                    .map(|&x| FieldVec::new(field, rank_digits(field.q(), r, x as u64)).expect("in field"))
                    .collect();
                return Ok(NqResult {
                    length: r,
                    witness: ParityCode::new(field, r, words)?,
                    nodes,
                });
            }
            Ok(None) => {}
            Err(()) => {
                return Err(Error::Budget {
                    what: "N_q search",
                    nodes,
                    lower: r as u64,
                    upper: u64::MAX,
                })
            }
        }
    }
    Err(Error::Budget {
        what: "N_q search (length cap)",
        nodes,
        lower: budget.r_cap as u64 + 1,
        upper: u64::MAX,
    })
}

struct DcodeSearch<'a> {
    d: &'a DistanceMatrix,
    digits: &'a DigitTable,
    size: usize,
    nodes: &'a mut u64,
    node_limit: u64,
    assignment: Vec<usize>,
}

impl DcodeSearch<'_> {
    /// `Err(())` when the node budget runs out.
    fn run(&mut self, domains: Vec<Bitset>) -> std::result::Result<Option<Vec<usize>>, ()> {
        let i = self.assignment.len();
        if i == self.d.order() {
            return Ok(Some(self.assignment.clone()));
        }
        for v in domains[i].iter() {
            *self.nodes += 1;
            if *self.nodes > self.node_limit {
                return Err(());
            }
            let mut next = domains.clone();
            let mut dead = false;
            for (j, dom) in next.iter_mut().enumerate().skip(i + 1) {
                let need = self.d.get(i, j) as usize;
                if need == 0 {
                    continue;
                }
                let mut keep = Bitset::new(self.size);
                for x in dom.iter() {
                    if self.digits.distance(x as u64, v as u64) >= need {
                        keep.insert(x);
                    }
                }
                if keep.is_empty() {
                    dead = true;
                    break;
                }
                *dom = keep;
            }
            if dead {
                continue;
            }
            self.assignment.push(v);
            let found = self.run(next)?;
            if found.is_some() {
                return Ok(found);
            }
            self.assignment.pop();
        }
        Ok(None)
    }
}

/// Plotkin-type lower bound on `N_2(D)`: `4/M^2 * sum_{i<j} D_ij` for even `M`,
/// `4/(M^2-1) * sum_{i<j} D_ij` for odd `M`.
pub fn plotkin_bound_general(d: &DistanceMatrix, q: u64) -> Result<BigRational> {
    if q != 2 {
        return Err(Error::NotApplicable(format!("Plotkin bound on D-codes needs q = 2, got {q}")));
    }
    let m = d.order() as i64;
    let denom = if m % 2 == 0 { m * m } else { m * m - 1 };
    if denom == 0 {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(
        BigInt::from(4) * BigInt::from(d.upper_sum()),
        BigInt::from(denom),
    ))
}

pub fn ceil_rational(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}
