//! Functions `f: F_q^k -> Im(f)`, either linear (`f(u) = F u`) or given by a table.
//!
//! Image classes (cosets of the kernel, for linear `f`) are numbered by first
//! occurrence when F_q^k is walked in rank order, so the class of `0` is
//! always class 0.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{checked_space, digits_rank, rank_digits, FieldVec, Limits, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Vector(FieldVec),
    Value(u64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Vector(v) => write!(f, "{v}"),
            Label::Value(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionKind {
    /// `l x k` matrix, full row rank.
    Linear { rows: Vec<Vec<u32>> },
    /// One label per message rank.
    Table { labels: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpec {
    field: PrimeField,
    k: usize,
    kind: FunctionKind,
}

impl FunctionSpec {
    pub fn linear(field: PrimeField, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("linear function needs at least one row"));
        }
        let k = rows[0].len();
        if k == 0 {
            return Err(Error::invalid("linear function needs k >= 1"));
        }
        for row in &rows {
            if row.len() != k {
                return Err(Error::LengthMismatch(row.len(), k));
            }
            for &x in row {
                field.check(x as u64)?;
            }
        }
        let rank = matrix_rank(field, &rows);
        if rank != rows.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: rows.len(),
            });
        }
        Ok(FunctionSpec {
            field,
            k,
            kind: FunctionKind::Linear { rows },
        })
    }

    pub fn table(field: PrimeField, k: usize, labels: Vec<u64>) -> Result<Self> {
        let size = checked_space(field.q(), k, Limits::default().enumerate, "function table")?;
        if labels.len() as u64 != size {
            return Err(Error::LengthMismatch(labels.len(), size as usize));
        }
        Ok(FunctionSpec {
            field,
            k,
            kind: FunctionKind::Table { labels },
        })
    }

    /// Table from a closure over messages.
    pub fn from_fn(field: PrimeField, k: usize, mut g: impl FnMut(&FieldVec) -> u64) -> Result<Self> {
        let size = checked_space(field.q(), k, Limits::default().enumerate, "function table")?;
        let labels = (0..size)
            .map(|r| g(&FieldVec::from_rank(field, k, r).expect("rank in range")))
            .collect();
        Self::table(field, k, labels)
    }

    pub fn identity(field: PrimeField, k: usize) -> Self {
        let rows = (0..k)
            .map(|i| (0..k).map(|j| u32::from(i == j)).collect())
            .collect();
        FunctionSpec {
            field,
            k,
            kind: FunctionKind::Linear { rows },
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, FunctionKind::Linear { .. })
    }

    pub fn rows(&self) -> Option<&[Vec<u32>]> {
        match &self.kind {
            FunctionKind::Linear { rows } => Some(rows),
            FunctionKind::Table { .. } => None,
        }
    }

    /// Number of rows for linear functions; for tables, the number of distinct labels.
    pub fn l(&self) -> usize {
        match &self.kind {
            FunctionKind::Linear { rows } => rows.len(),
            FunctionKind::Table { labels } => {
                let mut seen: Vec<u64> = labels.clone();
                seen.sort_unstable();
                seen.dedup();
                seen.len()
            }
        }
    }

    pub fn eval(&self, u: &FieldVec) -> Result<Label> {
        self.check_message(u)?;
        match &self.kind {
            FunctionKind::Linear { rows } => Ok(Label::Vector(
                FieldVec::new(self.field, self.apply(rows, u.symbols())).expect("in field"),
            )),
            FunctionKind::Table { labels } => Ok(Label::Value(labels[u.rank() as usize])),
        }
    }

    /// Integer key of `f(u)`: the rank of `F u` in F_q^l, or the table label.
    pub fn key_of_rank(&self, rank: u64) -> u64 {
        match &self.kind {
            FunctionKind::Linear { rows } => {
                let u = rank_digits(self.q(), self.k, rank);
                digits_rank(self.q(), &self.apply(rows, &u))
            }
            FunctionKind::Table { labels } => labels[rank as usize],
        }
    }

    pub fn label_of_key(&self, key: u64) -> Label {
        match &self.kind {
            FunctionKind::Linear { rows } => Label::Vector(
                FieldVec::from_rank(self.field, rows.len(), key).expect("key in range"),
            ),
            FunctionKind::Table { .. } => Label::Value(key),
        }
    }

    pub fn key_of_label(&self, label: &Label) -> Result<u64> {
        match (&self.kind, label) {
            (FunctionKind::Linear { rows }, Label::Vector(v)) if v.len() == rows.len() && v.field() == self.field => {
                Ok(v.rank())
            }
            (FunctionKind::Table { .. }, Label::Value(x)) => Ok(*x),
            _ => Err(Error::UnknownLabel(label.to_string())),
        }
    }

    fn apply(&self, rows: &[Vec<u32>], u: &[u32]) -> Vec<u32> {
        let q = self.q() as u64;
        rows.iter()
            .map(|row| (row.iter().zip(u).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % q) as u32)
            .collect()
    }

    fn check_message(&self, u: &FieldVec) -> Result<()> {
        if u.field() != self.field {
            return Err(Error::FieldMismatch(u.field().q(), self.q()));
        }
        if u.len() != self.k {
            return Err(Error::LengthMismatch(u.len(), self.k));
        }
        Ok(())
    }

    /// Columns of `F`, as ranks in F_q^l.
    pub fn column_keys(&self) -> Result<Vec<u64>> {
        let rows = self.rows().ok_or(Error::NotLinear)?;
        Ok((0..self.k)
            .map(|j| {
                let col: Vec<u32> = rows.iter().map(|r| r[j]).collect();
                digits_rank(self.q(), &col)
            })
            .collect())
    }

    /// Coordinates whose value never changes `f`.
    pub fn ignored_coordinates(&self) -> Vec<usize> {
        match &self.kind {
            FunctionKind::Linear { rows } => (0..self.k).filter(|&j| rows.iter().all(|r| r[j] == 0)).collect(),
            FunctionKind::Table { labels } => {
                let q = self.q() as u64;
                (0..self.k)
                    .filter(|&j| {
                        let step = q.pow((self.k - 1 - j) as u32);
                        (0..labels.len() as u64).all(|r| {
                            let digit = (r / step) % q;
                            let base = r - digit * step;
                            labels[r as usize] == labels[base as usize]
                        })
                    })
                    .collect()
            }
        }
    }

    /// The same function with the given coordinates removed. Each removed
    /// coordinate must be ignored by `f`.
    pub fn drop_coordinates(&self, coords: &[usize]) -> Result<FunctionSpec> {
        let ignored = self.ignored_coordinates();
        if let Some(&c) = coords.iter().find(|c| !ignored.contains(c)) {
            return Err(Error::invalid(format!("coordinate {c} affects f")));
        }
        let keep: Vec<usize> = (0..self.k).filter(|j| !coords.contains(j)).collect();
        if keep.is_empty() {
            return Err(Error::invalid("cannot drop every coordinate"));
        }
        match &self.kind {
            FunctionKind::Linear { rows } => {
                let rows = rows.iter().map(|r| keep.iter().map(|&j| r[j]).collect()).collect();
                FunctionSpec::linear(self.field, rows)
            }
            FunctionKind::Table { labels } => {
                let q = self.q();
                let size = (q as u64).pow(keep.len() as u32);
                let new_labels = (0..size)
                    .map(|r| {
                        let d = rank_digits(q, keep.len(), r);
                        let mut full = vec![0u32; self.k];
                        for (i, &j) in keep.iter().enumerate() {
                            full[j] = d[i];
                        }
                        labels[digits_rank(q, &full) as usize]
                    })
                    .collect();
                FunctionSpec::table(self.field, keep.len(), new_labels)
            }
        }
    }

    /// Reorders the columns of `F`: column `j` of the result is column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<FunctionSpec> {
        let rows = self.rows().ok_or(Error::NotLinear)?;
        check_permutation(perm, self.k)?;
        FunctionSpec::linear(
            self.field,
            rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect(),
        )
    }

    /// Reads the text format: `q k l mode` then `l` rows (linear) or
    /// `q^k` lines `rank label` (table). `#` starts a comment.
    pub fn parse(text: &str) -> Result<FunctionSpec> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty function file"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::parse(hl, "header must be `q k l mode`"));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| Error::parse(hl, format!("{s:?}: {e}")));
        let field = PrimeField::new(num(parts[0])?)?;
        let k = num(parts[1])? as usize;
        let l = num(parts[2])? as usize;
        match parts[3] {
            "linear" => {
                let mut rows = Vec::with_capacity(l);
                for _ in 0..l {
                    let (ln, line) = lines.next().ok_or_else(|| Error::parse(hl, "missing matrix row"))?;
                    let v = FieldVec::parse(field, line).map_err(|e| Error::parse(ln, e.to_string()))?;
                    if v.len() != k {
                        return Err(Error::parse(ln, format!("row has {} symbols, expected {k}", v.len())));
                    }
                    rows.push(v.symbols().to_vec());
                }
                if let Some((ln, _)) = lines.next() {
                    return Err(Error::parse(ln, "trailing content after matrix"));
                }
                FunctionSpec::linear(field, rows)
            }
            "table" => {
                let size = checked_space(field.q(), k, Limits::default().enumerate, "function table")?;
                let mut labels: Vec<Option<u64>> = vec![None; size as usize];
                for (ln, line) in lines {
                    let p: Vec<&str> = line.split_whitespace().collect();
                    if p.len() != 2 {
                        return Err(Error::parse(ln, "table line must be `rank label`"));
                    }
                    let rank: u64 = p[0].parse().map_err(|e| Error::parse(ln, format!("{e}")))?;
                    let label: u64 = p[1].parse().map_err(|e| Error::parse(ln, format!("{e}")))?;
                    let slot = labels
                        .get_mut(rank as usize)
                        .ok_or_else(|| Error::parse(ln, format!("rank {rank} out of range")))?;
                    if slot.replace(label).is_some() {
                        return Err(Error::parse(ln, format!("rank {rank} given twice")));
                    }
                }
                let labels = labels
                    .into_iter()
                    .enumerate()
                    .map(|(r, x)| x.ok_or_else(|| Error::parse(0, format!("rank {r} missing"))))
                    .collect::<Result<Vec<_>>>()?;
                let f = FunctionSpec::table(field, k, labels)?;
                if f.l() != l {
                    return Err(Error::parse(hl, format!("header says {l} labels, table has {}", f.l())));
                }
                Ok(f)
            }
            other => Err(Error::parse(hl, format!("unknown mode {other:?}"))),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} ", self.q(), self.k, self.l());
        match &self.kind {
            FunctionKind::Linear { rows } => {
                out.push_str("linear\n");
                for r in rows {
                    let v = FieldVec::new(self.field, r.clone()).expect("in field");
                    out.push_str(&format!("{v}\n"));
                }
            }
            FunctionKind::Table { labels } => {
                out.push_str("table\n");
                for (r, x) in labels.iter().enumerate() {
                    out.push_str(&format!("{r} {x}\n"));
                }
            }
        }
        out
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::LengthMismatch(perm.len(), n));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::invalid(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

pub fn matrix_rank(field: PrimeField, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = field.inv(m[rank][c]).expect("non-zero pivot");
        let pivot: Vec<u32> = m[rank].iter().map(|&x| field.mul(x, inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

/// The partition of F_q^k into image classes.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    /// Key of each class, in first-occurrence order.
    pub keys: Vec<u64>,
    pub labels: Vec<Label>,
    /// Class index of every message rank.
    pub class_of: Vec<usize>,
    /// Message ranks of each class, ascending.
    pub members: Vec<Vec<u64>>,
    index: HashMap<u64, usize>,
}

impl CosetDecomposition {
    pub fn new(f: &FunctionSpec, limits: &Limits) -> Result<Self> {
        let size = checked_space(f.q(), f.k(), limits.enumerate, "message space")?;
        let mut index = HashMap::new();
        let mut keys = Vec::new();
        let mut members: Vec<Vec<u64>> = Vec::new();
        let mut class_of = Vec::with_capacity(size as usize);
        for r in 0..size {
            let key = f.key_of_rank(r);
            let c = *index.entry(key).or_insert_with(|| {
                keys.push(key);
                members.push(Vec::new());
                keys.len() - 1
            });
            members[c].push(r);
            class_of.push(c);
        }
        let labels = keys.iter().map(|&k| f.label_of_key(k)).collect();
        Ok(CosetDecomposition {
            keys,
            labels,
            class_of,
            members,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn class_of_key(&self, key: u64) -> Option<usize> {
        self.index.get(&key).copied()
    }
}

pub fn cosets(f: &FunctionSpec) -> Result<CosetDecomposition> {
    CosetDecomposition::new(f, &Limits::default())
}

pub fn kernel(f: &FunctionSpec) -> Result<Vec<FieldVec>> {
    if !f.is_linear() {
        return Err(Error::NotLinear);
    }
    let size = checked_space(f.q(), f.k(), Limits::default().enumerate, "message space")?;
    Ok((0..size)
        .filter(|&r| f.key_of_rank(r) == 0)
        .map(|r| FieldVec::from_rank(f.field(), f.k(), r).expect("in range"))
        .collect())
}

/// `W_i` = number of kernel vectors of weight `i`, for `i = 0..=k`.
pub fn kernel_weight_distribution(f: &FunctionSpec) -> Result<Vec<u64>> {
    let mut w = vec![0u64; f.k() + 1];
    for v in kernel(f)? {
        w[v.weight()] += 1;
    }
    Ok(w)
}

pub fn weight_sum(f: &FunctionSpec) -> Result<u64> {
    Ok(kernel_weight_distribution(f)?
        .iter()
        .enumerate()
        .map(|(i, &c)| i as u64 * c)
        .sum())
}

/// Minimum weight of each class, plus the members attaining it.
#[derive(Debug, Clone)]
pub struct MinWeightClass {
    pub label: Label,
    pub weight: usize,
    pub representatives: Vec<FieldVec>,
}

pub fn min_weight_reps(f: &FunctionSpec) -> Result<Vec<MinWeightClass>> {
    let dec = cosets(f)?;
    Ok(min_weight_reps_of(f, &dec))
}

pub(crate) fn min_weight_reps_of(f: &FunctionSpec, dec: &CosetDecomposition) -> Vec<MinWeightClass> {
    dec.members
        .iter()
        .zip(&dec.labels)
        .map(|(members, label)| {
            let vecs: Vec<FieldVec> = members
                .iter()
                .map(|&r| FieldVec::from_rank(f.field(), f.k(), r).expect("in range"))
                .collect();
            let weight = vecs.iter().map(FieldVec::weight).min().expect("non-empty class");
            MinWeightClass {
                label: label.clone(),
                weight,
                representatives: vecs.into_iter().filter(|v| v.weight() == weight).collect(),
            }
        })
        .collect()
}

/// Pairwise class distances `d_f` in class order.
pub fn class_distances(f: &FunctionSpec, dec: &CosetDecomposition, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let n = dec.len();
    let mut d = vec![vec![0usize; n]; n];
    match f.kind() {
        FunctionKind::Linear { rows } => {
            // d_f(a, b) is the minimum weight of the coset with label a - b.
            let minw: Vec<usize> = min_weight_reps_of(f, dec).iter().map(|c| c.weight).collect();
            let l = rows.len();
            let q = f.q();
            let field = f.field();
            for i in 0..n {
                let a = rank_digits(q, l, dec.keys[i]);
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let b = rank_digits(q, l, dec.keys[j]);
                    let diff: Vec<u32> = a.iter().zip(&b).map(|(&x, &y)| field.sub(x, y)).collect();
                    let c = dec.class_of_key(digits_rank(q, &diff)).expect("full rank image");
                    d[i][j] = minw[c];
                }
            }
        }
        FunctionKind::Table { .. } => {
            let size = checked_space(f.q(), f.k(), limits.drm_rows, "table-mode distance scan")?;
            let digits = crate::gf::DigitTable::new(f.q(), f.k(), size);
            for row in d.iter_mut() {
                row.iter_mut().for_each(|x| *x = usize::MAX);
            }
            for u in 0..size {
                let cu = dec.class_of[u as usize];
                for v in (u + 1)..size {
                    let cv = dec.class_of[v as usize];
                    if cu != cv {
                        let dist = digits.distance(u, v);
                        if dist < d[cu][cv] {
                            d[cu][cv] = dist;
                            d[cv][cu] = dist;
                        }
                    }
                }
            }
            for (i, row) in d.iter_mut().enumerate() {
                row[i] = 0;
            }
        }
    }
    Ok(d)
}

pub fn function_distance(f: &FunctionSpec, a: &Label, b: &Label) -> Result<usize> {
    let dec = cosets(f)?;
    let ia = dec
        .class_of_key(f.key_of_label(a)?)
        .ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
    let ib = dec
        .class_of_key(f.key_of_label(b)?)
        .ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
    Ok(class_distances(f, &dec, &Limits::default())?[ia][ib])
}

/// Number of classes whose minimum weight is exactly `i`.
pub fn coset_unit_count(f: &FunctionSpec, i: usize) -> Result<u64> {
    if i == 0 || i > f.k() {
        return Err(Error::invalid(format!("weight {i} outside 1..={}", f.k())));
    }
    Ok(min_weight_reps(f)?.iter().filter(|c| c.weight == i).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionClass {
    pub distinct_nonzero_columns: usize,
    /// Columns that are pairwise non-proportional.
    pub projective_columns: usize,
    /// Exactly `l` distinct non-zero columns.
    pub basis_columns_class: bool,
    /// `k >= q^l - 1` and every non-zero vector of F_q^l is a column.
    pub full_column_class: bool,
}

pub fn classify(f: &FunctionSpec) -> Result<FunctionClass> {
    let cols = f.column_keys()?;
    let l = f.l();
    let q = f.q();
    let mut distinct: Vec<u64> = cols.iter().copied().filter(|&c| c != 0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let projective = {
        let mut normal: Vec<Vec<u32>> = distinct
            .iter()
            .map(|&c| {
                let d = rank_digits(q, l, c);
                let lead = *d.iter().find(|&&x| x != 0).expect("non-zero column");
                let inv = f.field().inv(lead).expect("non-zero");
                d.iter().map(|&x| f.field().mul(x, inv)).collect()
            })
            .collect();
        normal.sort();
        normal.dedup();
        normal.len()
    };
    let nonzero_targets = (q as u128).pow(l as u32) - 1;
    Ok(FunctionClass {
        distinct_nonzero_columns: distinct.len(),
        projective_columns: projective,
        basis_columns_class: distinct.len() == l,
        full_column_class: f.k() as u128 >= nonzero_targets && distinct.len() as u128 >= nonzero_targets,
    })
}
