//! Redundancy bounds for systematic codes.

use fcc_core::bounds::{
    a_q_exact, a_q_upper, bgs_bound, compare_csv, compare_report, systematic_ecc_bound, zll_bound, AqKind, AqOracle,
    AqTable, TableKind, UpperMethod,
};
use num_bigint::BigUint;

#[test]
fn singleton_estimate() {
    let est = a_q_upper(2, 12, 7, UpperMethod::Singleton).unwrap();
    assert_eq!(est.value, BigUint::from(64u32));
    assert_eq!(systematic_ecc_bound(2, 12, 7, &est).unwrap(), 6);
}

#[test]
fn hamming_and_mds_tightness() {
    let est = a_q_exact(2, 4, 3, 1_000_000).unwrap();
    assert_eq!(est.value, BigUint::from(2u32));
    assert_eq!(systematic_ecc_bound(2, 4, 3, &est).unwrap(), 3);
    let est = a_q_exact(7, 3, 3, 10_000_000).unwrap();
    assert_eq!(est.value, BigUint::from(7u32));
    assert_eq!(systematic_ecc_bound(7, 3, 3, &est).unwrap(), 2);
}

#[test]
fn estimator_must_match_instance() {
    let est = a_q_exact(2, 4, 3, 1_000_000).unwrap();
    assert!(systematic_ecc_bound(2, 5, 3, &est).is_err());
}

#[test]
fn zll_at_distance_three_is_the_hamming_estimate() {
    for q in [2u64, 3, 5] {
        let mut oracle = AqOracle::default();
        for k in 1..=30 {
            let zll = zll_bound(q, k, 3, &mut oracle).unwrap();
            let est = a_q_upper(q, k, 3, UpperMethod::Hamming).unwrap();
            assert_eq!(zll.r, systematic_ecc_bound(q, k, 3, &est).unwrap(), "q={q} k={k}");
            // smallest r with q^r >= (q-1)k + 1
            let r = (0..).find(|&r| (q as u128).pow(r) >= (q as u128 - 1) * k as u128 + 1).unwrap();
            assert_eq!(zll.r, r as usize, "q={q} k={k}");
        }
    }
}

#[test]
fn bgs_never_below_zll() {
    let mut oracle = AqOracle::default();
    for d in 3..=6 {
        for k in 1..=12 {
            let z = zll_bound(2, k, d, &mut oracle).unwrap();
            let b = bgs_bound(2, k, d, &mut oracle).unwrap();
            assert!(b.r >= z.r, "d={d} k={k}");
        }
    }
}

#[test]
fn compare_sweep_is_well_formed() {
    let mut oracle = AqOracle::default();
    let ks: Vec<usize> = (4..=10).collect();
    let rows = compare_report(2, 4, &ks, &mut oracle).unwrap();
    assert_eq!(rows.len(), ks.len());
    let csv = compare_csv(&rows, &["test".into()], false);
    let lines: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "k,r_prime,r_bgs,delta_bgs");
    for (line, k) in lines[1..].iter().zip(&ks) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[0], k.to_string());
        let (rp, rb, delta): (i64, i64, i64) =
            (cells[1].parse().unwrap(), cells[2].parse().unwrap(), cells[3].parse().unwrap());
        assert_eq!(delta, rb - rp);
    }
}

#[test]
fn table_rows_fill_the_extra_columns() {
    // extended Hamming [8,4,4] is optimal: A_2(8,4) = 16
    let table = AqTable::parse_csv("q,n,d,value,kind\n2,8,4,16,exact\n2,7,4,16,upper\n").unwrap();
    let mut oracle = AqOracle::with_table(Some(table));
    let rows = compare_report(2, 4, &[3, 4, 5], &mut oracle).unwrap();
    let csv = compare_csv(&rows, &[], true);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,r_prime,r_bgs,delta_bgs,delta_blb,delta_bub");
    assert_eq!(lines.len(), 4);
    let e = oracle.estimate(2, 8, 4).unwrap();
    assert_eq!(e.value, BigUint::from(16u32));
    assert_eq!(e.kind, AqKind::Table(TableKind::Exact));
}
