use std::collections::BTreeSet;
use suq2::assembly::build_gamma;
use suq2::dirac::DiracFamily;
use suq2::fredholm::*;
use suq2::*;

const Q: DeformationParam = DeformationParam::Quantum(0.5);
const SIZES: [i64; 3] = [24, 32, 40];

#[test]
fn gamma_rows_have_index_minus_one() {
    for k in 0..=2 {
        let rep = numerical_index(|s| build_gamma(s, Q, 1), RowProjection { k }, &SIZES, DEFAULT_TOL).unwrap();
        assert_eq!(rep.stabilized_index, Stabilized::Value(-1), "k={k}: {rep:?}");
        assert!(rep.gap_ok);
        let (total, _) = sector_total(Q, 1, k, 40).unwrap();
        assert_eq!(total, Some(-1), "sector method, k={k}");
    }
}

#[test]
fn sector_additivity_per_size() {
    for &n in &SIZES {
        let rep = numerical_index(|s| build_gamma(s, Q, 1), RowProjection { k: 0 }, &[n - 4, n - 2, n], DEFAULT_TOL).unwrap();
        let (total, table) = sector_total(Q, 1, 0, n).unwrap();
        assert_eq!(rep.stabilized_index.value(), total);
        assert_eq!(table, vec![(0, -1)]);
    }
}

#[test]
fn pairing_counts_rows() {
    for m in 0..=3 {
        let rows: BTreeSet<i64> = (0..m).collect();
        let rep = pairing(&SIZES, Q, None, &rows, DEFAULT_TOL).unwrap();
        assert_eq!(rep.pairing, Stabilized::Value(m), "m={m}");
    }
}

#[test]
fn pairing_is_independent_of_r() {
    for r in [1, 2] {
        let rep = pairing(&SIZES, Q, Some(r), &BTreeSet::from([0]), DEFAULT_TOL).unwrap();
        assert_eq!(rep.pairing, Stabilized::Value(1), "r={r}");
    }
}

#[test]
fn small_perturbation_keeps_index() {
    let perturbed = |s: TruncatedSpace| {
        build_gamma(s, Q, 1)?.add(&SparseOperator::identity(s).scale(C64::new(1e-3, 0.0)))
    };
    let rep = numerical_index(perturbed, RowProjection { k: 0 }, &SIZES, DEFAULT_TOL).unwrap();
    assert_eq!(rep.stabilized_index, Stabilized::Value(-1));
}

#[test]
fn off_diagonal_compressions_decay() {
    let g = build_gamma(TruncatedSpace::new(48).unwrap(), Q, 1).unwrap();
    for k in 0..=2 {
        for l in [1, 2] {
            let p = compactness_profile(&g, RowProjection { k }, RowProjection { k: k + l }).unwrap();
            assert!(p.compact_consistent);
            let at40 = p.series.iter().find(|s| s.0 == 40).unwrap().1;
            assert!(at40 < 1e-3, "k={k} l={l}: {at40}");
        }
    }
    let p = compactness_profile(&g, RowProjection { k: 0 }, RowProjection { k: 1 }).unwrap();
    let tail = &p.series[p.series.len() - 10..];
    for w in tail.windows(2) {
        assert!(w[1].1 <= 0.5 * w[0].1 * (1.0 + 1e-6), "{w:?}");
    }
}

#[test]
fn diagonal_compression_does_not_decay() {
    let g = build_gamma(TruncatedSpace::new(30).unwrap(), Q, 1).unwrap();
    let c = compress(&g, RowProjection { k: 0 }, RowProjection { k: 0 });
    let last = c.cols.iter().enumerate().filter(|(_, l)| l.n2 == 27).map(|(k, _)| c.column_norm(k)).fold(0.0, f64::max);
    assert!(last > 0.5);
}

#[test]
fn fundamental_unitary_pairs_nontrivially() {
    for q in [Q, DeformationParam::Classical] {
        for fam in [DiracFamily::GenericQ, DiracFamily::ClassicalStaircase] {
            let rep = pairing_fundamental_unitary(&SIZES, q, &fam, DEFAULT_TOL).unwrap();
            let v = rep.stabilized_index.value().expect("stable");
            assert_ne!(v, 0, "{q:?} {fam}");
        }
    }
}

#[test]
fn sector_zero_limits_closed_form() {
    let sm = sector_matrix(Q, 1, 0, 0, 60, SectorModel::ClosedForm).unwrap();
    assert!(sector_index(&sm).unwrap() == SectorIndex::MinusOne);
    let sm = sector_matrix(Q, 1, 0, 1, 60, SectorModel::ClosedForm).unwrap();
    assert!(sector_index(&sm).unwrap() == SectorIndex::Zero);
}
