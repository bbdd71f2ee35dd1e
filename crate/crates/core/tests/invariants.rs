//! Randomized invariants over small linear and table functions.

use std::collections::HashSet;

use fcc_core::bounds::{bound_report, plotkin_linear_bound, ReportBudget};
use fcc_core::distance::{build_drm, build_fdm, n_q_exact, plotkin_bound_general, DistanceMatrix, NqBudget};
use fcc_core::functions::{coset_unit_count, cosets, function_distance, kernel_weight_distribution, matrix_rank, min_weight_reps};
use fcc_core::graph::{build_graph, independence_number, message_graph_alpha, min_redundancy_by_graph, AlphaBudget, AlphaResult};
use fcc_core::spectrum::{cvetkovic_alpha_bound, graph_spectrum};
use fcc_core::{FieldVec, FunctionSpec, Label, Limits, PrimeField};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Full-rank `l x k` matrix over F_q, as a function.
fn linear_function(max_k: usize) -> impl Strategy<Value = FunctionSpec> {
    (prop_oneof![Just(2u64), Just(3u64)], 1..=max_k)
        .prop_flat_map(move |(q, k)| {
            let k = if q == 3 { k.min(3) } else { k };
            (Just(q), Just(k), 1..=k)
        })
        .prop_flat_map(|(q, k, l)| (Just(q), Just(k), proptest::collection::vec(0..q as u32, k * l)))
        .prop_filter_map("rank deficient", |(q, k, entries)| {
            let field = PrimeField::new(q).unwrap();
            let rows: Vec<Vec<u32>> = entries.chunks(k).map(|c| c.to_vec()).collect();
            FunctionSpec::linear(field, rows).ok()
        })
}

fn binary_linear(max_k: usize) -> impl Strategy<Value = FunctionSpec> {
    linear_function(max_k).prop_filter("binary", |f| f.q() == 2)
}

fn table_function(max_k: usize, values: u64) -> impl Strategy<Value = FunctionSpec> {
    (1..=max_k).prop_flat_map(move |k| {
        proptest::collection::vec(0..values, 1 << k).prop_map(move |labels| {
            FunctionSpec::table(PrimeField::new(2).unwrap(), k, labels).unwrap()
        })
    })
}

fn symmetric(d: &DistanceMatrix) -> bool {
    let n = d.order();
    (0..n).all(|i| d.get(i, i) == 0 && (0..n).all(|j| d.get(i, j) == d.get(j, i)))
}

fn sorted_columns(d: &DistanceMatrix) -> Vec<Vec<u32>> {
    (0..d.order())
        .map(|j| {
            let mut c: Vec<u32> = (0..d.order()).map(|i| d.get(i, j)).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

fn exact_alpha(f: &FunctionSpec, t: usize, r: usize) -> usize {
    let g = build_graph(f, t, r, &Limits::default()).unwrap();
    match independence_number(&g, None, &AlphaBudget::default(), &Limits::default()).unwrap() {
        AlphaResult::Exact { alpha, .. } => alpha,
        other => panic!("{other:?}"),
    }
}

fn rows_of(f: &FunctionSpec) -> Vec<Vec<u32>> {
    f.rows().unwrap().to_vec()
}

/// Is there an `l`-dimensional subspace made of minimum-weight class
/// representatives, one per class? Checked over all bases.
fn subspace_of_min_weight_reps(f: &FunctionSpec) -> bool {
    let (q, k, l) = (f.q(), f.k(), f.l());
    let field = f.field();
    let min_w: Vec<(Label, usize)> = min_weight_reps(f).unwrap().into_iter().map(|c| (c.label, c.weight)).collect();
    let weight_of = |label: &Label| min_w.iter().find(|(x, _)| x == label).unwrap().1;
    let size = (q as u64).pow(k as u32);
    let mut basis = vec![0u64; l];
    loop {
        // span of the current basis
        let vs: Vec<FieldVec> = basis.iter().map(|&r| FieldVec::from_rank(field, k, r).unwrap()).collect();
        let mut span = vec![FieldVec::zero(field, k)];
        for v in &vs {
            let mut next = Vec::new();
            for s in &span {
                for a in 0..q {
                    next.push(s.add(&v.scale(a)).unwrap());
                }
            }
            span = next;
        }
        let labels: HashSet<String> = span.iter().map(|s| f.eval(s).unwrap().to_string()).collect();
        if labels.len() == span.len() && span.iter().all(|s| s.weight() == weight_of(&f.eval(s).unwrap())) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == l {
                return false;
            }
            basis[i] += 1;
            if basis[i] < size {
                break;
            }
            basis[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn drm_and_fdm_are_symmetric(f in linear_function(4), t in 1usize..=3) {
        let drm = build_drm(&f, t, &Limits::default()).unwrap();
        prop_assert!(symmetric(&drm));
        let (fdm, _) = build_fdm(&f, t, &Limits::default()).unwrap();
        prop_assert!(symmetric(&fdm));
    }

    #[test]
    fn table_drm_and_fdm_are_symmetric(f in table_function(4, 4), t in 1usize..=2) {
        prop_assert!(symmetric(&build_drm(&f, t, &Limits::default()).unwrap()));
        prop_assert!(symmetric(&build_fdm(&f, t, &Limits::default()).unwrap().0));
    }

    #[test]
    fn columns_are_permutations_of_each_other(f in linear_function(4), t in 1usize..=3) {
        let drm = build_drm(&f, t, &Limits::default()).unwrap();
        let cols = sorted_columns(&drm);
        prop_assert!(cols.iter().all(|c| c == &cols[0]));
        let (fdm, _) = build_fdm(&f, t, &Limits::default()).unwrap();
        let cols = sorted_columns(&fdm);
        prop_assert!(cols.iter().all(|c| c == &cols[0]));
    }

    #[test]
    fn drm_columns_have_enough_zeros(f in linear_function(4), t in 1usize..=3) {
        let drm = build_drm(&f, t, &Limits::default()).unwrap();
        let need = (f.q() as usize).pow((f.k() - f.l()) as u32);
        for j in 0..drm.order() {
            prop_assert!((0..drm.order()).filter(|&i| drm.get(i, j) == 0).count() >= need);
        }
    }

    #[test]
    fn column_permutation_keeps_the_structure(f in linear_function(4), t in 1usize..=2, seed in any::<u64>()) {
        let k = f.k();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let g = f.permute_columns(&perm).unwrap();
        prop_assert_eq!(kernel_weight_distribution(&f).unwrap(), kernel_weight_distribution(&g).unwrap());
        let (a, _) = build_fdm(&f, t, &Limits::default()).unwrap();
        let (b, _) = build_fdm(&g, t, &Limits::default()).unwrap();
        prop_assert_eq!(sorted_columns(&a), sorted_columns(&b));
        prop_assert_eq!(exact_alpha(&f, t, 0), exact_alpha(&g, t, 0));
    }

    #[test]
    fn function_distance_to_kernel_is_coset_weight(f in linear_function(4)) {
        let dec = cosets(&f).unwrap();
        let zero = dec.labels[0].clone();
        let mut a: Vec<usize> = dec.labels.iter().map(|x| function_distance(&f, x, &zero).unwrap()).collect();
        let mut b: Vec<usize> = min_weight_reps(&f).unwrap().iter().map(|c| c.weight).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unit_cosets_at_least_rank(f in linear_function(5)) {
        let rank = matrix_rank(f.field(), &rows_of(&f));
        prop_assert!(coset_unit_count(&f, 1).unwrap() >= rank as u64);
    }

    #[test]
    fn subspace_exists_iff_enough_unit_cosets(f in linear_function(4)) {
        let lhs = subspace_of_min_weight_reps(&f);
        let rhs = coset_unit_count(&f, 1).unwrap() == (f.q() as u64 - 1) * f.l() as u64;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn plotkin_ordering(f in binary_linear(4), t in 1usize..=2) {
        let drm = build_drm(&f, t, &Limits::default()).unwrap();
        let general = plotkin_bound_general(&drm, 2).unwrap();
        let closed = plotkin_linear_bound(&f, t).unwrap();
        prop_assert!(closed <= general, "{} > {}", closed, general);
        let n = n_q_exact(&drm, 2, &NqBudget::default()).unwrap().length;
        prop_assert!(general <= BigRational::from_integer(BigInt::from(n)));
    }

    #[test]
    fn cvetkovic_bounds_alpha(f in linear_function(4), t in 1usize..=2, r in 0usize..=2) {
        prop_assume!((f.q() as u64).pow((f.k() + r) as u32) <= 256);
        let g = build_graph(&f, t, r, &Limits::default()).unwrap();
        let s = graph_spectrum(&g).unwrap();
        let alpha = exact_alpha(&f, t, r) as f64;
        prop_assert!(cvetkovic_alpha_bound(&s) >= alpha - 1e-9);
    }

    #[test]
    fn cartesian_inequality(f in linear_function(4), t in 1usize..=2, r in 0usize..=2) {
        prop_assume!((f.q() as u64).pow((f.k() + r) as u32) <= 256);
        let alpha_r = exact_alpha(&f, t, r) as u64;
        let alpha_0 = exact_alpha(&f, t, 0) as u64;
        let (qk, qr) = ((f.q() as u64).pow(f.k() as u32), (f.q() as u64).pow(r as u32));
        prop_assert!(alpha_r <= qk.min(qr * alpha_0));
    }

    #[test]
    fn ignored_coordinates_factor_out(f in linear_function(5), t in 1usize..=2) {
        let direct = exact_alpha(&f, t, 0) as u64;
        let reduced = message_graph_alpha(&f, t, &AlphaBudget::default(), &Limits::default()).unwrap();
        prop_assert_eq!(direct, reduced);
    }

    #[test]
    fn d_code_length_grows_with_submatrices(f in binary_linear(3), t in 1usize..=2, keep in proptest::collection::vec(any::<bool>(), 8)) {
        let drm = build_drm(&f, t, &Limits::default()).unwrap();
        let idx: Vec<usize> = (0..drm.order()).filter(|&i| keep[i]).collect();
        let full = n_q_exact(&drm, 2, &NqBudget::default()).unwrap().length;
        let part = n_q_exact(&drm.restrict(&idx), 2, &NqBudget::default()).unwrap().length;
        prop_assert!(part <= full);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn report_brackets_the_optimum(f in linear_function(3), t in 1usize..=2) {
        prop_assume!(f.q() == 2 || f.k() <= 2);
        let budget = ReportBudget { spectral_r_max: 6, ..ReportBudget::default() };
        let report = bound_report(&f, t, &budget, &Limits::default()).unwrap();
        let r_max = 2 * t * f.l() + 2;
        let (r, e) = min_redundancy_by_graph(&f, t, r_max, &AlphaBudget::default(), &Limits::default()).unwrap().unwrap();
        prop_assert!(fcc_core::encoder::verify_fcc(&e).unwrap());
        prop_assert!(report.lower_max().unwrap() <= r as i64, "{:?}", report);
        prop_assert!(report.upper_min().unwrap() >= r as i64, "{:?}", report);
    }
}

#[test]
fn symmetric_code_search_agrees_with_plain_search() {
    use fcc_core::bitset::Bitset;
    use fcc_core::bounds::a_q_exact;
    use fcc_core::mis::{max_independent_set, MisOptions};
    for (q, max_n) in [(2u32, 7usize), (3, 4), (5, 3)] {
        for n in 1..=max_n {
            for d in 1..=n + 1 {
                let size = (q as usize).pow(n as u32);
                let words: Vec<Vec<u32>> = (0..size as u64).map(|r| fcc_core::gf::rank_digits(q, n, r)).collect();
                let dist = |a: usize, b: usize| words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count();
                let adj: Vec<Bitset> = (0..size)
                    .map(|a| {
                        let mut b = Bitset::new(size);
                        for c in 0..size {
                            if c != a && dist(a, c) < d {
                                b.insert(c);
                            }
                        }
                        b
                    })
                    .collect();
                let plain = max_independent_set(&adj, &MisOptions::default()).unwrap().size();
                let e = a_q_exact(q as u64, n, d, 100_000_000).unwrap();
                assert_eq!(e.value, plain.into(), "A_{q}({n},{d})");
                let w: Vec<usize> = e.witness.unwrap().iter().map(|&x| x as usize).collect();
                assert_eq!(w.len(), plain);
                for (i, &a) in w.iter().enumerate() {
                    assert!(w[i + 1..].iter().all(|&b| dist(a, b) >= d));
                }
            }
        }
    }
}
