use proptest::prelude::*;
use std::collections::BTreeSet;
use suq2::assembly::GeneratorTag;
use suq2::dirac::*;
use suq2::fredholm::{projection, RowProjection};
use suq2::*;

#[test]
fn generic_growth_exhaustive() {
    let g = check_growth_conditions(&DiracFamily::GenericQ, 200, Branch::Quantum).unwrap();
    assert!(g.plus_series.iter().all(|&v| v == 1.0));
    assert!(g.minus_series.iter().all(|&v| v <= 4.0));
    assert!(g.satisfied);
}

#[test]
fn staircase_growth_under_classical_scaling() {
    // ⌊√(2n)⌋ steps up at perfect squares, where every staircase row jumps
    // by its height; the scaled differences follow √n there
    let g = check_growth_conditions(&DiracFamily::ClassicalStaircase, 400, Branch::Classical).unwrap();
    assert!(!g.plus_bounded);
    assert!(g.plus_series[399] > 19.0);
    assert!(g.plus_series[398] < 1.0);
}

#[test]
fn sign_of_signset_matches_projections() {
    let s = TruncatedSpace::new(10).unwrap();
    let rows = BTreeSet::from([0, 1, 3]);
    let d = build_dirac(s, &DiracFamily::SignSet(rows.clone())).unwrap();
    let mut expect = SparseOperator::identity(s);
    for &k in &rows {
        expect = expect.add_scaled(&projection(s, RowProjection { k }).unwrap(), C64::new(-2.0, 0.0)).unwrap();
    }
    for c in 0..s.dim() {
        assert_eq!(d.get(c, c).re.signum(), expect.get(c, c).re);
    }
}

#[test]
fn staircase_dimension_near_four() {
    let fit = spectral_dimension(&DiracFamily::ClassicalStaircase, 2000, 20).unwrap();
    assert!((fit.slope - 4.0).abs() <= 0.2, "{}", fit.slope);
}

#[test]
fn staircase_multiplicity_exponent() {
    let p = multiplicity_profile(&DiracFamily::ClassicalStaircase, 400).unwrap();
    assert!((p.exponent - 3.0).abs() <= 0.3, "{}", p.exponent);
}

#[test]
fn degenerate_fit_is_reported() {
    assert!(spectral_dimension(&DiracFamily::GenericQ, 10, 20).is_err());
    assert!(spectral_dimension(&DiracFamily::GenericQ, 40, 3).is_err());
}

#[test]
fn quantum_commutators_bounded_classical_not() {
    let q = DeformationParam::Quantum(0.5);
    for tag in [GeneratorTag::Alpha, GeneratorTag::Beta] {
        let n = commutator_norms(&DiracFamily::GenericQ, q, tag, &[30, 60]).unwrap();
        assert!((n[1].1 - n[0].1).abs() / n[0].1 < 0.01);
    }
    let c = commutator_norms(&DiracFamily::GenericQ, DeformationParam::Classical, GeneratorTag::Alpha, &[16, 32, 64]).unwrap();
    assert!(c[1].1 > 1.3 * c[0].1 && c[2].1 > 1.3 * c[1].1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_is_total_and_nonzero(n2 in 0i64..300, a in 0i64..300, rows in proptest::collection::btree_set(0i64..6, 0..4)) {
        let i2 = 2 * (a % (n2 + 1)) - n2;
        for fam in [DiracFamily::GenericQ, DiracFamily::ClassicalStaircase, DiracFamily::SignSet(rows.clone())] {
            let v = d_value(&fam, n2, i2).unwrap();
            prop_assert!(v != 0.0 && v.is_finite());
            prop_assert_eq!(v, d_value(&fam, n2, i2).unwrap());
        }
    }

    #[test]
    fn generic_and_flat_counts_agree(n in 20i64..50) {
        let a = spectral_dimension(&DiracFamily::GenericQ, n, 10).unwrap();
        let b = spectral_dimension(&DiracFamily::SignSet(BTreeSet::new()), n, 10).unwrap();
        prop_assert_eq!(a.counting, b.counting);
    }
}
