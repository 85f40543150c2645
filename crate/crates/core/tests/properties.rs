use num_bigint::BigInt;
use proptest::prelude::*;

use cretan::catalog::{methods_for, Catalog, Method};
use cretan::cretan::{basic_family, sbibd_two_level, LevelMatrix};
use cretan::designs::{
    biquadratic_difference_set, develop, qr_difference_set, singer_difference_set, validate_difference_set,
    DifferenceSet, REGISTRY,
};
use cretan::field::{make_field, prime_factors, prime_power, FieldExt};
use cretan::hadamard::{regular_hadamard, SignMatrix};
use cretan::io::fixture::FixtureStore;
use cretan::io::matrix_file::MatrixFile;
use cretan::io::render::{render, ImageFormat, RenderStyle};
use cretan::linalg::bareiss_det;
use cretan::scalar::Scalar;
use cretan::verify::{det_bounds, verify_default, VerifyMode};

#[test]
fn primitive_elements_have_full_order() {
    let mut checked = 0;
    for q in 2u64..=10_000 {
        let Some((p, k)) = prime_power(q) else { continue };
        let f = make_field(p, k).unwrap();
        let g = f.primitive();
        assert!(g.pow(q - 1).is_one(), "GF({q})");
        for r in prime_factors(q - 1) {
            assert!(!g.pow((q - 1) / r).is_one(), "GF({q}): order divides {}", (q - 1) / r);
        }
        checked += 1;
    }
    assert_eq!(checked, 1280);
}

fn all_sets() -> Vec<DifferenceSet> {
    let store = FixtureStore::Builtin;
    let mut out: Vec<DifferenceSet> = REGISTRY.iter().map(|e| e.build(&store).unwrap()).collect();
    for q in (3..200u64).filter(|q| q % 4 == 3 && prime_power(*q).is_some()) {
        out.push(qr_difference_set(q).unwrap());
    }
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (4, 2)] {
        out.push(singer_difference_set(n, q).unwrap());
    }
    out.push(biquadratic_difference_set(13, true).unwrap());
    out
}

#[test]
fn developed_designs_are_symmetric_designs() {
    for ds in all_sets() {
        let (v, k, l) = ds.params();
        let (v, k, l) = (v as usize, k as usize, l as usize);
        assert_eq!(l * (v - 1), k * (k - 1));
        let census = validate_difference_set(&ds.group, &ds.elements);
        assert!(census.passed, "{v},{k},{l}");
        let b = develop(&ds);
        let inc = b.incidence();
        for i in 0..v {
            for j in 0..v {
                let dot: usize = (0..v).map(|c| (inc[i * v + c] * inc[j * v + c]) as usize).sum();
                assert_eq!(dot, if i == j { k } else { l }, "({v},{k},{l}) rows {i},{j}");
            }
        }
        if v <= 45 {
            let big: Vec<BigInt> = inc.iter().map(|&x| BigInt::from(x)).collect();
            let det = bareiss_det(v, &big);
            let want = BigInt::from(k * k) * BigInt::from(k - l).pow((v - 1) as u32);
            assert_eq!(&det * &det, want, "({v},{k},{l})");
            assert_eq!(det.magnitude(), b.expected_abs_det().magnitude());
        }
    }
}

#[test]
fn two_level_roots_are_exact() {
    for ds in all_sets().into_iter().filter(|d| d.params().0 <= 45) {
        let (v, k, l) = ds.params();
        let (v, k, l) = (v as usize, k as usize, l as usize);
        for m in sbibd_two_level(&develop(&ds)).unwrap() {
            let b: Scalar = m.provenance().get("b").unwrap().parse().unwrap();
            let s = |x: usize| Scalar::int(x as i64);
            let poly = s(l)
                .try_add(&s(2 * (k - l)).try_mul(&b).unwrap())
                .unwrap()
                .try_add(
                    &Scalar::int(v as i64 - 2 * k as i64 + l as i64)
                        .try_mul(&b.square())
                        .unwrap(),
                )
                .unwrap();
            assert!(poly.is_exact_zero());
            let omega = s(k).try_add(&s(v - k).try_mul(&b.square()).unwrap()).unwrap();
            assert!(omega.try_sub(m.omega()).unwrap().is_exact_zero());
        }
    }
}

#[test]
fn regular_hadamard_line_sums() {
    let store = FixtureStore::Builtin;
    for m in [1usize, 2, 3, 4, 6] {
        let h: SignMatrix = regular_hadamard(m, &store).unwrap();
        let want = 2 * m as i64;
        assert!(h.row_sums().iter().chain(h.col_sums().iter()).all(|&s| s == want));
    }
}

#[test]
fn every_construction_verifies_within_order() {
    let mut cat = Catalog::new(FixtureStore::Builtin);
    for v in (3..=99).step_by(2) {
        for method in methods_for(v, cat.store()).unwrap() {
            if !method.is_structured() && method != Method::Basic {
                continue;
            }
            for m in cat.build(v, &method).unwrap() {
                let c = verify_default(&m, VerifyMode::Relaxed);
                assert!(c.passed, "{} at {v}", method.label());
                assert!(c.radius_within_order && m.omega().to_f64() <= v as f64 + 1e-9);
                if m.is_exact() {
                    assert!(m.gram().offdiag_exact_zero, "{} at {v}", method.label());
                }
            }
        }
    }
}

#[test]
fn construct_file_verify_pipeline() {
    let mut cat = Catalog::new(FixtureStore::Builtin);
    for v in (3..=199).step_by(2) {
        let file = cat.construct(v, "auto").unwrap();
        let back = MatrixFile::parse(&file.to_text()).unwrap();
        assert_eq!(back, file);
        let MatrixFile::Level(m) = back else {
            panic!("level matrix expected")
        };
        assert!(verify_default(&m, VerifyMode::Relaxed).passed, "order {v}");
    }
}

fn equivalent(base: &LevelMatrix, ops: &[(u8, usize, usize)]) -> LevelMatrix {
    let n = base.order();
    let mut m = base.clone();
    for &(op, a, b) in ops {
        let (a, b) = (a % n, b % n);
        m = match op {
            0 => m.swap_rows(a, b),
            1 => m.swap_cols(a, b),
            2 => m.negate_row(a),
            _ => m.negate_col(a),
        };
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barba_below_hadamard(half in 2usize..500) {
        let b = det_bounds(2 * half + 1);
        prop_assert!(b.barba.unwrap().log < b.hadamard.log);
    }

    #[test]
    fn level_files_round_trip(n in 4usize..16, ops in proptest::collection::vec((0u8..4, 0usize..16, 0usize..16), 0..8)) {
        let m = equivalent(&basic_family(n).unwrap(), &ops);
        let f = MatrixFile::Level(m.clone());
        prop_assert_eq!(MatrixFile::parse(&f.to_text()).unwrap(), f.clone());
        let g = MatrixFile::Level(m.demote());
        prop_assert_eq!(MatrixFile::parse(&g.to_text()).unwrap(), g);
        prop_assert_eq!(render(&f, ImageFormat::Svg, RenderStyle::default()), render(&f, ImageFormat::Svg, RenderStyle::default()));
    }

    #[test]
    fn gram_symmetry(ops in proptest::collection::vec((0u8..4, 0usize..13, 0usize..13), 0..10)) {
        let base = &sbibd_two_level(&develop(&singer_difference_set(2, 3).unwrap())).unwrap()[0];
        let m = equivalent(base, &ops);
        let c = verify_default(&m, VerifyMode::Relaxed);
        prop_assert!(c.columns_agree && c.passed);
        prop_assert_eq!(c.radius, base.omega().clone());
    }
}
