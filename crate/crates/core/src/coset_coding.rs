//! Coset-wise coding: one parity vector per image class, taken from a classical
//! code on a subspace of minimum-weight representatives.

use crate::distance::{build_drm_on, build_fdm, d_code_violation, DistanceMatrix, ParityCode};
use crate::encoder::{Decoded, FccEncoder};
use crate::error::{Error, Result};
use crate::functions::{classify, matrix_rank, min_weight_reps_of, CosetDecomposition, FunctionSpec};
use crate::gf::{digits_rank, enumerate_vectors, rank_digits, symbol_distance, FieldVec, Limits};

/// `S = {embed(x') : x' in F_q^l}`, listed in the rank order of `x'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceSelection {
    /// Coordinate receiving `x'_m`, for each `m`.
    pub basis_columns: Vec<usize>,
    /// Column order that moves the basis columns to the front, others kept stable.
    pub permutation: Vec<usize>,
    pub s_prime: Vec<FieldVec>,
    pub members: Vec<FieldVec>,
}

impl SubspaceSelection {
    pub fn embed(&self, x: &FieldVec, k: usize) -> FieldVec {
        let mut s = vec![0u32; k];
        for (m, &c) in self.basis_columns.iter().enumerate() {
            s[c] = x.symbols()[m];
        }
        FieldVec::new(x.field(), s).expect("same field")
    }
}

/// Uses the first occurrence of each distinct non-zero column.
pub fn subspace_selection(f: &FunctionSpec) -> Result<SubspaceSelection> {
    let cls = classify(f)?;
    if !cls.basis_columns_class {
        return Err(Error::NotApplicable(format!(
            "F has {} distinct non-zero columns, need exactly l = {}",
            cls.distinct_nonzero_columns,
            f.l()
        )));
    }
    let cols = f.column_keys()?;
    let mut chosen: Vec<usize> = Vec::new();
    for (j, &c) in cols.iter().enumerate() {
        if c != 0 && !chosen.iter().any(|&i| cols[i] == c) {
            chosen.push(j);
        }
    }
    subspace_selection_with_columns(f, &chosen)
}

/// Subspace spanned by unit vectors on the given coordinates. Fails unless the
/// columns form a basis and every member is a minimum-weight representative.
pub fn subspace_selection_with_columns(f: &FunctionSpec, columns: &[usize]) -> Result<SubspaceSelection> {
    let rows = f.rows().ok_or(Error::NotLinear)?;
    let (k, l) = (f.k(), rows.len());
    if columns.len() != l {
        return Err(Error::LengthMismatch(columns.len(), l));
    }
    if let Some(&c) = columns.iter().find(|&&c| c >= k) {
        return Err(Error::invalid(format!("column {c} out of range")));
    }
    let sub: Vec<Vec<u32>> = rows.iter().map(|r| columns.iter().map(|&c| r[c]).collect()).collect();
    if matrix_rank(f.field(), &sub) != l {
        return Err(Error::invalid(format!("columns {columns:?} are not a basis of F_q^l")));
    }
    let s_prime = enumerate_vectors(f.field(), l, Limits::default().enumerate)?;
    let mut sel = SubspaceSelection {
        basis_columns: columns.to_vec(),
        permutation: columns
            .iter()
            .copied()
            .chain((0..k).filter(|j| !columns.contains(j)))
            .collect(),
        members: Vec::new(),
        s_prime,
    };
    sel.members = sel.s_prime.iter().map(|x| sel.embed(x, k)).collect();

    let dec = CosetDecomposition::new(f, &Limits::default())?;
    let minw = min_weight_reps_of(f, &dec);
    for s in &sel.members {
        let c = dec.class_of[s.rank() as usize];
        if s.weight() != minw[c].weight {
            return Err(Error::NotApplicable(format!(
                "{s} has weight {} but its coset has minimum weight {}",
                s.weight(),
                minw[c].weight
            )));
        }
    }
    Ok(sel)
}

/// Required parity distances for the members of `S`, in `S'` order.
pub fn selection_requirements(f: &FunctionSpec, t: usize, sel: &SubspaceSelection) -> Result<DistanceMatrix> {
    build_drm_on(f, t, &sel.members)
}

/// Assigns the `i`-th parity of `source` to the class of the `i`-th member of `S`.
pub fn build_cosetwise_encoder(
    f: &FunctionSpec,
    t: usize,
    sel: &SubspaceSelection,
    source: &ParityCode,
) -> Result<FccEncoder> {
    if source.field != f.field() {
        return Err(Error::FieldMismatch(source.field.q(), f.q()));
    }
    let need = selection_requirements(f, t, sel)?;
    if let Some((i, j, d)) = d_code_violation(source, &need)? {
        return Err(Error::invalid(format!(
            "parity source fails: words {i} and {j} are at distance {d}, need {}",
            need.get(i, j)
        )));
    }
    let dec = CosetDecomposition::new(f, &Limits::default())?;
    let mut class_parity: Vec<Option<&FieldVec>> = vec![None; dec.len()];
    for (s, p) in sel.members.iter().zip(&source.words) {
        class_parity[dec.class_of[s.rank() as usize]] = Some(p);
    }
    let parities = dec
        .class_of
        .iter()
        .map(|&c| class_parity[c].cloned().ok_or_else(|| Error::invalid("class without representative")))
        .collect::<Result<Vec<_>>>()?;
    FccEncoder::new(f.clone(), t, source.r, parities)
}

/// Gives every message the parity of its image class; `source` lists one
/// parity per class in FDM order, e.g. an `N_q` witness for the FDM.
pub fn classwise_encoder(f: &FunctionSpec, t: usize, source: &ParityCode) -> Result<FccEncoder> {
    if source.field != f.field() {
        return Err(Error::FieldMismatch(source.field.q(), f.q()));
    }
    let (fdm, _) = build_fdm(f, t, &Limits::default())?;
    if let Some((i, j, d)) = d_code_violation(source, &fdm)? {
        return Err(Error::invalid(format!(
            "parity source fails: words {i} and {j} are at distance {d}, need {}",
            fdm.get(i, j)
        )));
    }
    let dec = CosetDecomposition::new(f, &Limits::default())?;
    let parities = dec.class_of.iter().map(|&c| source.words[c].clone()).collect();
    FccEncoder::new(f.clone(), t, source.r, parities)
}

/// For functions hitting every non-zero vector with some column, the parity
/// problem is a code of size `q^l` with all pairwise distances `2t`.
pub fn reduced_problem(f: &FunctionSpec, t: usize) -> Result<DistanceMatrix> {
    let cls = classify(f)?;
    if !cls.full_column_class {
        return Err(Error::NotApplicable(
            "needs k >= q^l - 1 and every non-zero vector of F_q^l as a column".into(),
        ));
    }
    let m = (f.q() as usize).pow(f.l() as u32);
    let rows = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 0 } else { 2 * t as u32 }).collect())
        .collect();
    DistanceMatrix::new(rows)
}

/// Searches for class representatives whose DRM equals the FDM. Translating by
/// a kernel vector keeps the DRM, so the kernel representative is `0`; every
/// other class must then use a vector of its minimum weight (any vector when
/// that weight already reaches `2t+1`).
pub fn optimality_check(f: &FunctionSpec, t: usize, node_limit: u64) -> Result<Option<Vec<FieldVec>>> {
    if !f.is_linear() {
        return Err(Error::NotLinear);
    }
    let limits = Limits::default();
    let dec = CosetDecomposition::new(f, &limits)?;
    let (fdm, _) = build_fdm(f, t, &limits)?;
    let minw = min_weight_reps_of(f, &dec);
    let need = 2 * t + 1;
    let candidates: Vec<Vec<FieldVec>> = dec
        .members
        .iter()
        .zip(&minw)
        .enumerate()
        .map(|(c, (members, mw))| {
            if c == 0 {
                vec![FieldVec::zero(f.field(), f.k())]
            } else if mw.weight < need {
                mw.representatives.clone()
            } else {
                members
                    .iter()
                    .map(|&r| FieldVec::from_rank(f.field(), f.k(), r).expect("in range"))
                    .collect()
            }
        })
        .collect();
    let mut chosen: Vec<FieldVec> = Vec::with_capacity(dec.len());
    let mut nodes = 0u64;
    let found = pick(&candidates, &fdm, need, &mut chosen, &mut nodes, node_limit)?;
    Ok(found.then_some(chosen))
}

fn pick(
    candidates: &[Vec<FieldVec>],
    fdm: &DistanceMatrix,
    need: usize,
    chosen: &mut Vec<FieldVec>,
    nodes: &mut u64,
    node_limit: u64,
) -> Result<bool> {
    let i = chosen.len();
    if i == candidates.len() {
        return Ok(true);
    }
    for v in &candidates[i] {
        *nodes += 1;
        if *nodes > node_limit {
            return Err(Error::Budget {
                what: "representative search",
                nodes: *nodes,
                lower: 0,
                upper: 0,
            });
        }
        let ok = chosen.iter().enumerate().all(|(j, u)| {
            let d = symbol_distance(u.symbols(), v.symbols());
            need.saturating_sub(d) as u32 == fdm.get(j, i)
        });
        if ok {
            chosen.push(v.clone());
            if pick(candidates, fdm, need, chosen, nodes, node_limit)? {
                return Ok(true);
            }
            chosen.pop();
        }
    }
    Ok(false)
}

/// Coset-wise decoding by syndrome. The message part contributes
/// `min wt(coset f(y_m) - label)` and the parity part its Hamming distance.
pub fn cosetwise_decode(e: &FccEncoder, y: &FieldVec) -> Result<Decoded> {
    let f = e.function();
    let rows = f.rows().ok_or(Error::NotLinear)?;
    let (k, l, q) = (f.k(), rows.len(), f.q());
    if y.len() != k + e.r() {
        return Err(Error::LengthMismatch(y.len(), k + e.r()));
    }
    let dec = CosetDecomposition::new(f, &Limits::default())?;
    let minw: Vec<usize> = min_weight_reps_of(f, &dec).iter().map(|c| c.weight).collect();
    let mut class_parity: Vec<&FieldVec> = Vec::with_capacity(dec.len());
    for members in &dec.members {
        let p = &e.parities()[members[0] as usize];
        if members.iter().any(|&m| &e.parities()[m as usize] != p) {
            return Err(Error::NotApplicable("encoder is not coset-wise".into()));
        }
        class_parity.push(p);
    }
    let (ym, yp) = y.split_at(k);
    let syn = rank_digits(q, l, f.key_of_rank(ym.rank()));
    let field = f.field();
    let mut best = (usize::MAX, 0usize);
    for c in 0..dec.len() {
        let lab = rank_digits(q, l, dec.keys[c]);
        let diff: Vec<u32> = syn.iter().zip(&lab).map(|(&a, &b)| field.sub(a, b)).collect();
        let dm = minw[dec.class_of_key(digits_rank(q, &diff)).expect("full rank")];
        let d = dm + symbol_distance(yp.symbols(), class_parity[c].symbols());
        if d < best.0 {
            best = (d, c);
        }
    }
    Ok(if best.0 <= e.t() {
        Decoded::Value {
            label: dec.labels[best.1].clone(),
            message: dec.members[best.1][0],
            distance: best.0,
        }
    } else {
        Decoded::Failure { nearest: best.0 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{decode, verify_fcc};
    use crate::gf::PrimeField;

    fn lin(q: u64, rows: &[&str]) -> FunctionSpec {
        let k = PrimeField::new(q).unwrap();
        FunctionSpec::linear(k, rows.iter().map(|r| FieldVec::parse(k, r).unwrap().symbols().to_vec()).collect())
            .unwrap()
    }

    fn strs(v: &[FieldVec]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn selection_for_binary_example() {
        let f = lin(2, &["1110", "0110"]);
        let sel = subspace_selection(&f).unwrap();
        assert_eq!(sel.basis_columns, vec![0, 1]);
        assert_eq!(sel.permutation, vec![0, 1, 2, 3]);
        assert_eq!(strs(&sel.members), ["0000", "0100", "1000", "1100"]);
    }

    #[test]
    fn classwise_from_fdm_witness() {
        let f = lin(3, &["220", "111"]);
        let (fdm, _) = build_fdm(&f, 1, &Limits::default()).unwrap();
        let w = crate::distance::n_q_exact(&fdm, 3, &Default::default()).unwrap();
        let e = classwise_encoder(&f, 1, &w.witness).unwrap();
        assert_eq!(e.r(), 2);
        assert!(verify_fcc(&e).unwrap());
        let short = ParityCode::new(f.field(), 1, w.witness.words.iter().map(|p| p.split_at(1).0).collect()).unwrap();
        assert!(classwise_encoder(&f, 1, &short).is_err());
    }

    #[test]
    fn selection_for_ternary_example() {
        let f = lin(3, &["220", "111"]);
        let sel = subspace_selection(&f).unwrap();
        assert_eq!(sel.basis_columns, vec![0, 2]);
        assert_eq!(strs(&sel.members), ["000", "001", "002", "100", "101", "102", "200", "201", "202"]);
        let alt = subspace_selection_with_columns(&f, &[1, 2]).unwrap();
        assert_eq!(strs(&alt.members), ["000", "001", "002", "010", "011", "012", "020", "021", "022"]);
        assert!(subspace_selection_with_columns(&f, &[0, 1]).is_err());
    }

    #[test]
    fn outside_class_is_rejected() {
        let f = lin(2, &["1101", "0111"]);
        assert!(matches!(subspace_selection(&f), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn cosetwise_encoder_with_hamming_parities() {
        let f = lin(2, &["1110", "0110"]);
        let sel = subspace_selection(&f).unwrap();
        let src = ParityCode::parse("000\n011\n101\n110\n", None).unwrap();
        let e = build_cosetwise_encoder(&f, 1, &sel, &src).unwrap();
        assert!(verify_fcc(&e).unwrap());
        let bad = ParityCode::parse("000\n001\n101\n110\n", None).unwrap();
        assert!(build_cosetwise_encoder(&f, 1, &sel, &bad).is_err());
    }

    #[test]
    fn syndrome_decoding_agrees() {
        let f = lin(2, &["1110", "0110"]);
        let sel = subspace_selection(&f).unwrap();
        let src = ParityCode::parse("000\n011\n101\n110\n", None).unwrap();
        let e = build_cosetwise_encoder(&f, 1, &sel, &src).unwrap();
        let k = f.field();
        for y in 0..128u64 {
            let y = FieldVec::from_rank(k, 7, y).unwrap();
            let a = decode(&e, &y).unwrap();
            let b = cosetwise_decode(&e, &y).unwrap();
            match (a, b) {
                (Decoded::Value { label: la, distance: da, .. }, Decoded::Value { label: lb, distance: db, .. }) => {
                    assert_eq!((la, da), (lb, db))
                }
                (Decoded::Failure { nearest: x }, Decoded::Failure { nearest: y }) => assert_eq!(x, y),
                (a, b) => panic!("{a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn reduced_matrix() {
        let f = lin(2, &["111"]);
        let d = reduced_problem(&f, 2).unwrap();
        assert_eq!(d.rows(), vec![vec![0, 4], vec![4, 0]]);
        assert!(reduced_problem(&lin(2, &["1110", "0110"]), 1).is_err());
    }

    #[test]
    fn optimal_representatives_found() {
        let f = lin(2, &["1110", "0110"]);
        let reps = optimality_check(&f, 2, 1_000_000).unwrap().unwrap();
        let drm = build_drm_on(&f, 2, &reps).unwrap();
        assert_eq!(drm, build_fdm(&f, 2, &Limits::default()).unwrap().0);
    }
}
