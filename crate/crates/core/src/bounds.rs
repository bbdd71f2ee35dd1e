//! Lower and upper bounds on the redundancy of FCCs and systematic codes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::distance::{build_drm, build_fdm, ceil_rational, n_q_exact, plotkin_bound_general, NqBudget, NqResult};
use crate::error::{Error, Result};
use crate::functions::{cosets, weight_sum, FunctionSpec};
use crate::gf::{ball_clamped, big_pow, checked_space, PrimeField};
use crate::graph::{message_graph_alpha, AlphaBudget};
use crate::gf::Limits;
use crate::mis::{max_independent_set, MisOptions};
use crate::bitset::Bitset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Exact,
    Upper,
    Lower,
}

impl FromStr for TableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(TableKind::Exact),
            "upper" => Ok(TableKind::Upper),
            "lower" => Ok(TableKind::Lower),
            other => Err(Error::invalid(format!("unknown table kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AqKind {
    Exact,
    HammingUpper,
    SingletonUpper,
    PlotkinUpper,
    Table(TableKind),
}

impl AqKind {
    /// Usable where an upper bound on `A_q` is required.
    pub fn bounds_from_above(self) -> bool {
        !matches!(self, AqKind::Table(TableKind::Lower))
    }
}

impl fmt::Display for AqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AqKind::Exact => "exact",
            AqKind::HammingUpper => "hamming_upper",
            AqKind::SingletonUpper => "singleton_upper",
            AqKind::PlotkinUpper => "plotkin_upper",
            AqKind::Table(TableKind::Exact) => "table_exact",
            AqKind::Table(TableKind::Upper) => "table_upper",
            AqKind::Table(TableKind::Lower) => "table_lower",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperMethod {
    Hamming,
    Singleton,
    Plotkin,
}

impl FromStr for UpperMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(UpperMethod::Hamming),
            "singleton" => Ok(UpperMethod::Singleton),
            "plotkin" => Ok(UpperMethod::Plotkin),
            other => Err(Error::invalid(format!("unknown A_q bound method {other:?}"))),
        }
    }
}

/// A value of, or bound on, `A_q(n, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AqEstimate {
    pub q: u32,
    pub n: usize,
    pub d: usize,
    pub value: BigUint,
    pub kind: AqKind,
    /// Codeword ranks, when a witness code was built.
    pub witness: Option<Vec<u64>>,
}

impl AqEstimate {
    fn new(q: u32, n: usize, d: usize, value: BigUint, kind: AqKind) -> Self {
        AqEstimate {
            q,
            n,
            d,
            value,
            kind,
            witness: None,
        }
    }
}

/// Cases with a closed form: `d <= 1`, `d > n`, `d = n`, `d = 2`.
fn closed_form(q: u32, n: usize, d: usize) -> Option<BigUint> {
    if d <= 1 {
        Some(big_pow(q, n))
    } else if d > n {
        Some(BigUint::one())
    } else if d == n {
        Some(BigUint::from(q))
    } else if d == 2 {
        Some(big_pow(q, n - 1))
    } else {
        None
    }
}

/// Exact `A_q(n,d)` by maximum independent set on the graph joining words at
/// distance below `d`.
///
/// Hamming isometries let the search assume the code holds `0` and, as a
/// nearest codeword, the word `0..01..1` of some weight `w`. A third codeword
/// is then taken least in an order invariant under the isometries fixing both,
/// and only one word per orbit is tried for it.
pub fn a_q_exact(q: u64, n: usize, d: usize, node_limit: u64) -> Result<AqEstimate> {
    let field = PrimeField::new(q)?;
    let q = field.q();
    if let Some(v) = closed_form(q, n, d) {
        let mut est = AqEstimate::new(q, n, d, v, AqKind::Exact);
        if checked_space(q, n, 1 << 12, "witness").is_ok() {
            est.witness = Some(closed_form_witness(q, n, d));
        }
        return Ok(est);
    }
    let size = checked_space(q, n, 1 << 12, "exact A_q search space")?;
    let code = max_code(q, n, d, size, node_limit)?;
    let mut est = AqEstimate::new(q, n, d, BigUint::from(code.len()), AqKind::Exact);
    est.witness = Some(code);
    Ok(est)
}

/// Largest code for `2 <= d <= n`, codewords by rank, ascending.
fn max_code(q: u32, n: usize, d: usize, size: u64, node_limit: u64) -> Result<Vec<u64>> {
    let digits = crate::gf::DigitTable::new(q, n, size);
    let mut best: Vec<u64> = vec![0];
    let mut nodes = 0u64;
    for w in d..=n {
        // 0..01..1 with `w` ones has rank 1 + q + ... + q^(w-1)
        let c = (0..w).fold(0u64, |a, _| a * q as u64 + 1);
        let second: Vec<u64> = (1..size)
            .filter(|&x| x != c && digits.weight(x) >= w && digits.distance(x, c) >= d)
            .collect();
        if best.len() < 2 {
            best = vec![0, c];
        }
        if second.len() + 2 <= best.len() {
            continue;
        }
        // (weight, ones on the support of c, zeros on the support of c)
        let key = |x: u64| {
            let row = digits.row(x);
            let tail = &row[n - w..];
            (
                digits.weight(x),
                tail.iter().filter(|&&s| s == 1).count(),
                tail.iter().filter(|&&s| s == 0).count(),
            )
        };
        let keys: Vec<_> = second.iter().map(|&x| key(x)).collect();
        let mut reps: Vec<(usize, _)> = Vec::new();
        for (i, k) in keys.iter().enumerate() {
            if !reps.iter().any(|(_, r)| r == k) {
                reps.push((i, *k));
            }
        }
        reps.sort_by_key(|&(_, k)| k);
        for (ri, rk) in reps {
            let rep = second[ri];
            let rest: Vec<u64> = second
                .iter()
                .zip(&keys)
                .filter(|&(&y, k)| *k >= rk && y != rep && digits.distance(y, rep) >= d)
                .map(|(&y, _)| y)
                .collect();
            if rest.len() + 3 <= best.len() {
                continue;
            }
            let adj: Vec<Bitset> = rest
                .iter()
                .map(|&a| {
                    let mut b = Bitset::new(rest.len());
                    for (j, &y) in rest.iter().enumerate() {
                        if y != a && digits.distance(a, y) < d {
                            b.insert(j);
                        }
                    }
                    b
                })
                .collect();
            let opts = MisOptions {
                lower: best.len().saturating_sub(3),
                node_limit: node_limit.saturating_sub(nodes),
                ..MisOptions::default()
            };
            let sol = match max_independent_set(&adj, &opts) {
                Ok(s) => s,
                Err(Error::Budget { nodes: used, .. }) => {
                    return Err(Error::Budget {
                        what: "exact A_q",
                        nodes: nodes + used,
                        lower: best.len() as u64,
                        upper: (big_pow(q, n) / ball_clamped(q, n, (d - 1) / 2)).to_u64().unwrap_or(u64::MAX),
                    })
                }
                Err(e) => return Err(e),
            };
            nodes += sol.nodes;
            if sol.size() + 3 > best.len() {
                best = [0, c, rep].into_iter().chain(sol.set.iter().map(|&i| rest[i])).collect();
            }
        }
    }
    best.sort_unstable();
    Ok(best)
}

fn closed_form_witness(q: u32, n: usize, d: usize) -> Vec<u64> {
    let size = (q as u64).pow(n as u32);
    if d <= 1 {
        (0..size).collect()
    } else if d > n {
        vec![0]
    } else if d == n {
        // repetition code
        (0..q as u64)
            .map(|a| (0..n).fold(0, |acc, _| acc * q as u64 + a))
            .collect()
    } else {
        // zero-sum code
        (0..size)
            .filter(|&r| crate::gf::rank_digits(q, n, r).iter().sum::<u32>() % q == 0)
            .collect()
    }
}

pub fn a_q_upper(q: u64, n: usize, d: usize, method: UpperMethod) -> Result<AqEstimate> {
    let q = PrimeField::new(q)?.q();
    match method {
        UpperMethod::Hamming => {
            let radius = d.saturating_sub(1) / 2;
            let v = big_pow(q, n) / ball_clamped(q, n, radius);
            Ok(AqEstimate::new(q, n, d, v, AqKind::HammingUpper))
        }
        UpperMethod::Singleton => {
            let v = if d > n { BigUint::one() } else { big_pow(q, n + 1 - d.max(1)) };
            Ok(AqEstimate::new(q, n, d, v, AqKind::SingletonUpper))
        }
        UpperMethod::Plotkin => {
            // d > (1 - 1/q) n  =>  A <= floor(q d / (q d - (q-1) n))
            let qd = q as u64 * d as u64;
            let theta_n = (q as u64 - 1) * n as u64;
            if qd <= theta_n {
                return Err(Error::NotApplicable(format!(
                    "Plotkin bound needs d > (1 - 1/q) n, got q={q} n={n} d={d}"
                )));
            }
            Ok(AqEstimate::new(q, n, d, BigUint::from(qd / (qd - theta_n)), AqKind::PlotkinUpper))
        }
    }
}

/// Minimum of the applicable closed-form upper bounds.
pub fn best_upper(q: u64, n: usize, d: usize) -> Result<AqEstimate> {
    let mut best = a_q_upper(q, n, d, UpperMethod::Hamming)?;
    for m in [UpperMethod::Singleton, UpperMethod::Plotkin] {
        if let Ok(e) = a_q_upper(q, n, d, m) {
            if e.value < best.value {
                best = e;
            }
        }
    }
    Ok(best)
}

/// Rows of an external `q,n,d,value,kind` table.
#[derive(Debug, Clone, Default)]
pub struct AqTable {
    rows: HashMap<(u32, usize, usize), Vec<(BigUint, TableKind)>>,
}

impl AqTable {
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut t = AqTable::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("q,") {
                continue;
            }
            let p: Vec<&str> = line.split(',').map(str::trim).collect();
            if p.len() != 5 {
                return Err(Error::parse(i + 1, "expected q,n,d,value,kind"));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|e| Error::parse(i + 1, format!("{s:?}: {e}")));
            let q = PrimeField::new(num(p[0])?)?.q();
            let value: BigUint = p[3].parse().map_err(|e| Error::parse(i + 1, format!("{e}")))?;
            let kind = p[4].parse::<TableKind>().map_err(|e| Error::parse(i + 1, e.to_string()))?;
            t.rows
                .entry((q, num(p[1])? as usize, num(p[2])? as usize))
                .or_default()
                .push((value, kind));
        }
        Ok(t)
    }

    pub fn insert(&mut self, q: u32, n: usize, d: usize, value: BigUint, kind: TableKind) {
        self.rows.entry((q, n, d)).or_default().push((value, kind));
    }

    /// Smallest entry usable as an upper bound (exact or upper).
    pub fn upper(&self, q: u32, n: usize, d: usize) -> Option<AqEstimate> {
        self.rows
            .get(&(q, n, d))?
            .iter()
            .filter(|(_, k)| *k != TableKind::Lower)
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(v, k)| AqEstimate::new(q, n, d, v.clone(), AqKind::Table(*k)))
    }

    /// Largest entry usable as a lower bound (exact or lower).
    pub fn lower(&self, q: u32, n: usize, d: usize) -> Option<AqEstimate> {
        self.rows
            .get(&(q, n, d))?
            .iter()
            .filter(|(_, k)| *k != TableKind::Upper)
            .max_by(|a, b| a.0.cmp(&b.0))
            .map(|(v, k)| AqEstimate::new(q, n, d, v.clone(), AqKind::Table(*k)))
    }

    pub fn exact(&self, q: u32, n: usize, d: usize) -> Option<AqEstimate> {
        self.rows
            .get(&(q, n, d))?
            .iter()
            .find(|(_, k)| *k == TableKind::Exact)
            .map(|(v, _)| AqEstimate::new(q, n, d, v.clone(), AqKind::Table(TableKind::Exact)))
    }
}

/// Chooses the tightest sound upper estimate of `A_q(n,d)` available: closed
/// forms, exact table rows, a budgeted exact search, then the least of the
/// closed-form and table upper bounds.
#[derive(Debug, Clone)]
pub struct AqOracle {
    pub table: Option<AqTable>,
    pub exact_node_limit: u64,
    pub exact_space_limit: u64,
    cache: HashMap<(u32, usize, usize), AqEstimate>,
}

impl Default for AqOracle {
    fn default() -> Self {
        AqOracle {
            table: None,
            exact_node_limit: 2_000_000,
            exact_space_limit: 1 << 9,
            cache: HashMap::new(),
        }
    }
}

impl AqOracle {
    pub fn with_table(table: Option<AqTable>) -> Self {
        AqOracle {
            table,
            ..AqOracle::default()
        }
    }

    pub fn estimate(&mut self, q: u32, n: usize, d: usize) -> Result<AqEstimate> {
        if let Some(e) = self.cache.get(&(q, n, d)) {
            return Ok(e.clone());
        }
        let e = self.compute(q, n, d)?;
        self.cache.insert((q, n, d), e.clone());
        Ok(e)
    }

    fn compute(&self, q: u32, n: usize, d: usize) -> Result<AqEstimate> {
        if let Some(v) = closed_form(q, n, d) {
            return Ok(AqEstimate::new(q, n, d, v, AqKind::Exact));
        }
        if let Some(e) = self.table.as_ref().and_then(|t| t.exact(q, n, d)) {
            return Ok(e);
        }
        if checked_space(q, n, self.exact_space_limit, "oracle").is_ok() {
            match a_q_exact(q as u64, n, d, self.exact_node_limit) {
                Ok(e) => return Ok(e),
                Err(e) if e.is_budget() => {}
                Err(e) => return Err(e),
            }
        }
        let mut best = best_upper(q as u64, n, d)?;
        if let Some(t) = self.table.as_ref().and_then(|t| t.upper(q, n, d)) {
            if t.value < best.value {
                best = t;
            }
        }
        Ok(best)
    }
}

/// Smallest `r >= 0` with `q^(k-r) <= value`, i.e. `ceil(k - log_q value)`.
fn ceil_k_minus_log(q: u32, k: usize, value: &BigUint) -> usize {
    (0..=k).find(|&r| big_pow(q, k - r) <= *value).unwrap_or(k)
}

/// `r >= ceil(k - log_q A_q(k,d))`.
pub fn systematic_ecc_bound(q: u64, k: usize, d: usize, est: &AqEstimate) -> Result<usize> {
    if est.q as u64 != q || est.n != k || est.d != d {
        return Err(Error::invalid(format!(
            "estimate is for A_{}({},{}), instance needs A_{q}({k},{d})",
            est.q, est.n, est.d
        )));
    }
    if !est.kind.bounds_from_above() {
        return Err(Error::NotApplicable("a lower bound on A_q does not give a valid bound on r".into()));
    }
    if est.value.is_zero() {
        return Err(Error::invalid("A_q estimate must be at least 1"));
    }
    Ok(ceil_k_minus_log(est.q, k, &est.value))
}

/// `r >= ceil(k - log_q alpha)` with `alpha = alpha(G_f(t,k,0))`.
pub fn cartesian_bound(f: &FunctionSpec, alpha: u64) -> Result<usize> {
    if alpha == 0 {
        return Err(Error::invalid("alpha must be at least 1"));
    }
    Ok(ceil_k_minus_log(f.q(), f.k(), &BigUint::from(alpha)))
}

/// Computes `alpha(G_f(t,k,0))` exactly and applies [`cartesian_bound`].
pub fn cartesian_bound_exact(f: &FunctionSpec, t: usize, budget: &AlphaBudget, limits: &Limits) -> Result<(usize, u64)> {
    let alpha = message_graph_alpha(f, t, budget, limits)?;
    Ok((cartesian_bound(f, alpha)?, alpha))
}

pub fn two_t_bound(f: &FunctionSpec, t: usize) -> Result<usize> {
    Ok(if cosets(f)?.len() >= 2 { 2 * t } else { 0 })
}

/// `(q/(q-1)) (2t+1) (1 - q^-l) - k + s / ((q-1) q^(k-1))`.
pub fn plotkin_linear_bound(f: &FunctionSpec, t: usize) -> Result<BigRational> {
    if !f.is_linear() {
        return Err(Error::NotLinear);
    }
    let q = BigInt::from(f.q());
    let one = BigRational::one();
    let qr = BigRational::from_integer(q.clone());
    let qm1 = BigRational::from_integer(q.clone() - 1);
    let q_l = BigRational::from_integer(BigInt::from(big_pow(f.q(), f.l())));
    let q_k1 = BigRational::from_integer(BigInt::from(big_pow(f.q(), f.k() - 1)));
    let s = BigRational::from_integer(BigInt::from(weight_sum(f)?));
    let two_t1 = BigRational::from_integer(BigInt::from(2 * t + 1));
    let k = BigRational::from_integer(BigInt::from(f.k()));
    Ok(&qr / &qm1 * two_t1 * (&one - &one / q_l) - k + s / (qm1 * q_k1))
}

/// `N_q(FDM)`, with the witness parities.
pub fn fdm_upper_bound(f: &FunctionSpec, t: usize, budget: &NqBudget) -> Result<NqResult> {
    let (fdm, _) = build_fdm(f, t, &Limits::default())?;
    n_q_exact(&fdm, f.q() as u64, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub r: usize,
    /// Estimators behind each `A_q` value consulted at the accepted `r`.
    pub kinds: Vec<AqKind>,
}

const SCAN_CAP: usize = 4096;

/// Smallest `r >= 1` with `|B_m^k| <= A_q(r, d-2m)` for all `0 <= m <= (d-1)/2`.
pub fn zll_bound(q: u64, k: usize, d: usize, oracle: &mut AqOracle) -> Result<ScanResult> {
    scan(q, k, d, oracle, |_, _, _, _| BigRational::zero())
}

/// As [`zll_bound`] with `A_q(r, d-2m) - |B_m^r| / |B_(d-2m-1)^r| + 1` on the right.
pub fn bgs_bound(q: u64, k: usize, d: usize, oracle: &mut AqOracle) -> Result<ScanResult> {
    scan(q, k, d, oracle, |q, r, m, d| {
        let num = BigInt::from(ball_clamped(q, r, m));
        let den = BigInt::from(ball_clamped(q, r, d - 2 * m - 1));
        BigRational::one() - BigRational::new(num, den)
    })
}

fn scan(
    q: u64,
    k: usize,
    d: usize,
    oracle: &mut AqOracle,
    correction: impl Fn(u32, usize, usize, usize) -> BigRational,
) -> Result<ScanResult> {
    let q = PrimeField::new(q)?.q();
    if d < 2 || k < 1 {
        return Err(Error::invalid(format!("needs d >= 2 and k >= 1, got k={k} d={d}")));
    }
    'r: for r in 1..=SCAN_CAP {
        let mut kinds = Vec::new();
        for m in 0..=(d - 1) / 2 {
            let lhs = BigRational::from_integer(BigInt::from(ball_clamped(q, k, m)));
            let est = oracle.estimate(q, r, d - 2 * m)?;
            kinds.push(est.kind);
            let rhs = BigRational::from_integer(BigInt::from(est.value)) + correction(q, r, m, d);
            if lhs > rhs {
                continue 'r;
            }
        }
        return Ok(ScanResult { r, kinds });
    }
    Err(Error::invalid(format!("no r <= {SCAN_CAP} satisfies the inequalities")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareRow {
    pub k: usize,
    pub r_prime: usize,
    pub r_prime_kind: String,
    pub r_bgs: usize,
    pub delta_bgs: i64,
    pub delta_blb: Option<i64>,
    pub delta_bub: Option<i64>,
}

/// Per `k`: the `A_q`-based bound `r'`, the BGS bound, and differences.
///
/// With a table, `r_BLB` is the least `r` not excluded by an upper/exact row
/// (`A_q(k+r,d) >= q^k`) and `r_BUB` the least `r` certified by a lower/exact
/// row; missing rows leave the cell empty.
pub fn compare_report(q: u64, d: usize, ks: &[usize], oracle: &mut AqOracle) -> Result<Vec<CompareRow>> {
    let qq = PrimeField::new(q)?.q();
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let est = oracle.estimate(qq, k, d)?;
        let r_prime = systematic_ecc_bound(q, k, d, &est)?;
        let r_bgs = bgs_bound(q, k, d, oracle)?.r;
        let (blb, bub) = match &oracle.table {
            Some(t) => (
                table_redundancy(t, qq, k, d, |t, n| t.upper(qq, n, d)),
                table_redundancy(t, qq, k, d, |t, n| t.lower(qq, n, d)),
            ),
            None => (None, None),
        };
        rows.push(CompareRow {
            k,
            r_prime,
            r_prime_kind: est.kind.to_string(),
            r_bgs,
            delta_bgs: r_bgs as i64 - r_prime as i64,
            delta_blb: blb.map(|r| r as i64 - r_prime as i64),
            delta_bub: bub.map(|r| r as i64 - r_prime as i64),
        });
    }
    Ok(rows)
}

/// Least `r` whose table entry reaches `q^k`, scanning while rows exist.
/// `None` when a needed row is missing before the answer is known.
fn table_redundancy(
    t: &AqTable,
    q: u32,
    k: usize,
    d: usize,
    get: impl Fn(&AqTable, usize) -> Option<AqEstimate>,
) -> Option<usize> {
    let target = big_pow(q, k);
    for r in 0..=SCAN_CAP {
        let n = k + r;
        let e = match closed_form(q, n, d) {
            Some(v) => AqEstimate::new(q, n, d, v, AqKind::Exact),
            None => get(t, n)?,
        };
        if e.value >= target {
            return Some(r);
        }
    }
    None
}

pub fn compare_csv(rows: &[CompareRow], header: &[String], with_tables: bool) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str(&format!("# {h}\n"));
    }
    out.push_str("k,r_prime,r_bgs,delta_bgs");
    if with_tables {
        out.push_str(",delta_blb,delta_bub");
    }
    out.push('\n');
    let cell = |x: Option<i64>| x.map_or(String::new(), |v| v.to_string());
    for r in rows {
        out.push_str(&format!("{},{},{},{}", r.k, r.r_prime, r.r_bgs, r.delta_bgs));
        if with_tables {
            out.push_str(&format!(",{},{}", cell(r.delta_blb), cell(r.delta_bub)));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub direction: Direction,
    /// Exact rational, as `p/q`, where the bound has one.
    pub rational: Option<String>,
    pub value: Option<i64>,
    /// Estimators, budgets, or why the entry is missing.
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub instance: String,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn lower_max(&self) -> Option<i64> {
        self.entries
            .iter()
            .filter(|e| e.direction == Direction::Lower)
            .filter_map(|e| e.value)
            .max()
    }

    pub fn upper_min(&self) -> Option<i64> {
        self.entries
            .iter()
            .filter(|e| e.direction == Direction::Upper)
            .filter_map(|e| e.value)
            .min()
    }

    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            out.push_str(&format!("# {h}\n"));
        }
        out.push_str("name,direction,rational,value,note\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.name,
                match e.direction {
                    Direction::Lower => "lower",
                    Direction::Upper => "upper",
                },
                e.rational.clone().unwrap_or_default(),
                e.value.map_or(String::new(), |v| v.to_string()),
                e.note.replace(',', ";")
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ReportBudget {
    pub alpha: AlphaBudget,
    pub nq: NqBudget,
    pub rep_nodes: u64,
    pub spectral_r_max: usize,
}

impl Default for ReportBudget {
    fn default() -> Self {
        ReportBudget {
            alpha: AlphaBudget::default(),
            nq: NqBudget::default(),
            rep_nodes: 10_000_000,
            spectral_r_max: 12,
        }
    }
}

fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn skipped(name: &str, direction: Direction, e: &Error) -> BoundEntry {
    BoundEntry {
        name: name.into(),
        direction,
        rational: None,
        value: None,
        note: format!("not computed: {e}"),
    }
}

/// Every lower and upper bound on `r_f(k,t)` that applies to `f`.
pub fn bound_report(f: &FunctionSpec, t: usize, budget: &ReportBudget, limits: &Limits) -> Result<BoundReport> {
    let mut entries = Vec::new();

    entries.push(BoundEntry {
        name: "two_t".into(),
        direction: Direction::Lower,
        rational: None,
        value: Some(two_t_bound(f, t)? as i64),
        note: "2t when f takes at least two values".into(),
    });

    if f.q() == 2 {
        let e = build_drm(f, t, limits).and_then(|d| plotkin_bound_general(&d, 2));
        entries.push(match e {
            Ok(x) => BoundEntry {
                name: "plotkin_drm".into(),
                direction: Direction::Lower,
                rational: Some(rational_string(&x)),
                value: ceil_rational(&x).to_i64(),
                note: "Plotkin bound on the full distance requirement matrix".into(),
            },
            Err(e) => skipped("plotkin_drm", Direction::Lower, &e),
        });
    }

    if f.is_linear() {
        let x = plotkin_linear_bound(f, t)?;
        entries.push(BoundEntry {
            name: "plotkin_kernel".into(),
            direction: Direction::Lower,
            rational: Some(rational_string(&x)),
            value: ceil_rational(&x).to_i64(),
            note: "closed form from the kernel weight sum".into(),
        });
    }

    entries.push(match cartesian_bound_exact(f, t, &budget.alpha, limits) {
        Ok((r, alpha)) => BoundEntry {
            name: "cartesian_alpha".into(),
            direction: Direction::Lower,
            rational: None,
            value: Some(r as i64),
            note: format!("exact alpha(G_f(t,k,0)) = {alpha}"),
        },
        Err(e) => skipped("cartesian_alpha", Direction::Lower, &e),
    });

    if f.is_linear() {
        entries.push(
            match crate::spectrum::eigenvalue_redundancy_bound(f, t, budget.spectral_r_max, limits) {
                Ok((Some(r), _)) => BoundEntry {
                    name: "spectral".into(),
                    direction: Direction::Lower,
                    rational: None,
                    value: Some(r as i64),
                    note: "smallest r with q^r >= 1 - lambda_max/lambda_min".into(),
                },
                Ok((None, _)) => BoundEntry {
                    name: "spectral".into(),
                    direction: Direction::Lower,
                    rational: None,
                    value: Some(budget.spectral_r_max as i64 + 1),
                    note: format!("condition fails for every r <= {}", budget.spectral_r_max),
                },
                Err(e) => skipped("spectral", Direction::Lower, &e),
            },
        );
    }

    let fdm = fdm_upper_bound(f, t, &budget.nq);
    entries.push(match &fdm {
        Ok(nq) => BoundEntry {
            name: "fdm_upper".into(),
            direction: Direction::Upper,
            rational: None,
            value: Some(nq.length as i64),
            note: format!("N_q of the function distance matrix ({} search nodes)", nq.nodes),
        },
        Err(e) => skipped("fdm_upper", Direction::Upper, e),
    });

    if f.is_linear() {
        match crate::coset_coding::optimality_check(f, t, budget.rep_nodes) {
            Ok(Some(_)) => {
                if let Ok(nq) = &fdm {
                    entries.push(BoundEntry {
                        name: "fdm_optimal".into(),
                        direction: Direction::Lower,
                        rational: None,
                        value: Some(nq.length as i64),
                        note: "representatives with DRM equal to the FDM exist, so N_q(FDM) is exact".into(),
                    });
                }
            }
            Ok(None) => {}
            Err(e) => entries.push(skipped("fdm_optimal", Direction::Lower, &e)),
        }
    }

    Ok(BoundReport {
        instance: format!("q={} k={} l={} t={t}", f.q(), f.k(), f.l()),
        entries,
    })
}
