use proptest::prelude::*;
use suq2::assembly::*;
use suq2::dirac::{build_dirac, DiracFamily};
use suq2::fredholm::{compress, sector_decompose, RowProjection, SectorModel};
use suq2::*;

const Q: DeformationParam = DeformationParam::Quantum(0.5);

fn space(n: i64) -> TruncatedSpace {
    TruncatedSpace::new(n).unwrap()
}

#[test]
fn relations_hold_on_the_interior() {
    let res = relation_residuals(space(20), Q).unwrap();
    assert_eq!(res.len(), 5);
    for (name, v) in &res {
        assert!(*v <= 1e-10, "{name}: {v}");
    }
    let classical = relation_residuals(space(20), DeformationParam::Classical).unwrap();
    for (name, v) in &classical {
        assert!(*v <= 1e-10, "classical {name}: {v}");
    }
    assert!(res["b*b=bb*"] <= 1e-15);
}

#[test]
fn k_assembly_matches_composition() {
    let s = space(20);
    let composed = build_generator(s, Q, GeneratorTag::Beta)
        .unwrap()
        .compose(&build_generator(s, Q, GeneratorTag::BetaStar).unwrap())
        .unwrap();
    let k = build_k_assembly(s, Q).unwrap();
    assert!(composed.max_abs_diff(&k, s.interior_len(2)).unwrap() <= 1e-12);
}

#[test]
fn gamma_norm_bound() {
    for n in [10, 20] {
        let g = build_gamma(space(n), Q, 1).unwrap();
        assert!(interior_norm(&g, 3).unwrap() <= 3.0 + 1e-12);
    }
}

#[test]
fn gamma_matches_path_expansion() {
    // the sector entries are sums over ε-paths of k_ε and b_± coefficients
    for r in 1..=2u32 {
        let s = space(30);
        let g = build_gamma(s, Q, r).unwrap();
        for k in 0..=2 {
            let c = compress(&g, RowProjection { k }, RowProjection { k });
            let sectors = sector_decompose(Q, r, k, 30, SectorModel::Exact).unwrap();
            let embedded = suq2::fredholm::embed_sectors(s, &sectors).unwrap();
            let exact_cols = c.cols.iter().filter(|l| l.n2 <= 30 - (2 * r as i64 + 1)).count();
            let mut worst = 0.0f64;
            for col in 0..c.cols.len() {
                if c.cols[col].n2 > 30 - (2 * r as i64 + 1) {
                    continue;
                }
                // every computed entry is on the sector diagonal or subdiagonal
                for &(row, v) in &c.entries[col] {
                    worst = worst.max((v - embedded.get(row, col)).norm());
                }
                for &(row, v) in &embedded.entries[col] {
                    worst = worst.max((v - c.get(row, col)).norm());
                }
            }
            assert!(exact_cols > 0);
            assert!(worst <= 1e-12, "r={r} k={k}: {worst}");
        }
    }
}

#[test]
fn closed_forms_agree_asymptotically() {
    let exact = sector_decompose(Q, 1, 0, 80, SectorModel::Exact).unwrap();
    let closed = sector_decompose(Q, 1, 0, 80, SectorModel::ClosedForm).unwrap();
    for (e, c) in exact.iter().zip(&closed).take(5) {
        let m = e.sub.len() - 1;
        assert!((e.diag[m] - c.diag[m]).abs() < 1e-9, "s={}", e.s);
        assert!((e.sub[m] - c.sub[m]).abs() < 1e-9, "s={}", e.s);
    }
    // at the bottom of sector 0 they differ by a finite amount
    assert!((exact[0].diag[0] - closed[0].diag[0]).abs() > 0.5);
}

#[test]
fn dirac_commutes_with_dual_generators() {
    let s = space(12);
    let a0 = build_generator(s, Q, GeneratorTag::A0).unwrap();
    let a1 = build_generator(s, Q, GeneratorTag::A1).unwrap();
    let a1s = build_generator(s, Q, GeneratorTag::A1Star).unwrap();
    for fam in [DiracFamily::GenericQ, DiracFamily::ClassicalStaircase, DiracFamily::sign_set([0, 2]).unwrap()] {
        let d = build_dirac(s, &fam).unwrap();
        for a in [&a0, &a1, &a1s] {
            let c = commutator(&d, a).unwrap();
            assert_eq!(interior_norm(&c, c.band()).unwrap(), 0.0, "{fam}");
        }
    }
}

#[test]
fn generic_dirac_is_nondegenerate() {
    let s = space(20);
    let d = build_dirac(s, &DiracFamily::GenericQ).unwrap();
    for p in -3i64..=3 {
        for st in 0..=3u32 {
            for t in 0..=3u32 {
                let deg = p.abs() + (st + t) as i64;
                if !(1..=3).contains(&deg) {
                    continue;
                }
                let m = build_monomial(s, Q, p, st, t).unwrap();
                let c = commutator(&d, &m).unwrap();
                assert!(interior_norm(&c, c.band()).unwrap() > 1e-6, "({p},{st},{t})");
            }
        }
    }
}

#[test]
fn commutator_with_identity_vanishes() {
    let s = space(8);
    let id = SparseOperator::identity(s);
    let b = build_generator(s, Q, GeneratorTag::Beta).unwrap();
    assert_eq!(commutator(&id, &b).unwrap().nnz(), 0);
}

#[test]
fn u_approx_is_close_to_gamma() {
    let s = space(30);
    let u = build_u_approx(s, Q, 0.75).unwrap();
    let g = build_gamma(s, Q, 1).unwrap();
    let d = leading_columns_norm(&g.sub(&u.op).unwrap(), s.interior_len(5));
    assert!(d <= 0.6, "{d}");
}

#[test]
fn interior_norm_is_monotone_in_truncation() {
    let fam = DiracFamily::GenericQ;
    let mut last = 0.0;
    for n in [8, 12, 16, 20] {
        let s = space(n);
        let c = commutator(&build_dirac(s, &fam).unwrap(), &build_generator(s, Q, GeneratorTag::Beta).unwrap()).unwrap();
        let v = interior_norm(&c, 1).unwrap();
        assert!(v >= last - 1e-12);
        last = v;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoints_are_transposes(q in 0.1f64..0.95, n in 2i64..10) {
        let s = space(n);
        let p = DeformationParam::Quantum(q);
        for (g, gs) in [(GeneratorTag::Alpha, GeneratorTag::AlphaStar), (GeneratorTag::Beta, GeneratorTag::BetaStar)] {
            let m = build_generator(s, p, g).unwrap();
            let ms = build_generator(s, p, gs).unwrap();
            prop_assert!(ms.max_abs_diff(&m.adjoint(), s.interior_len(1)).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn relations_for_any_q(q in 0.2f64..0.95) {
        for (name, v) in relation_residuals(space(8), DeformationParam::Quantum(q)).unwrap() {
            prop_assert!(v <= 1e-10, "{} = {}", name, v);
        }
    }

    #[test]
    fn generators_are_contractions(q in 0.1f64..0.95) {
        let s = space(10);
        for g in [GeneratorTag::Alpha, GeneratorTag::AlphaStar, GeneratorTag::Beta, GeneratorTag::BetaStar] {
            let m = build_generator(s, DeformationParam::Quantum(q), g).unwrap();
            prop_assert!(interior_norm(&m, 1).unwrap() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn haar_of_bbstar(q in 0.1f64..0.95) {
        let s = space(4);
        let p = DeformationParam::Quantum(q);
        let bbs = build_monomial(s, p, 0, 1, 1).unwrap();
        prop_assert!((haar_state(s, &bbs).unwrap().re - 1.0 / (1.0 + q * q)).abs() < 1e-14);
    }
}
