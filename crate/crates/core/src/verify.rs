//! Certification of Cretan matrices and determinant bounds.
//!
//! Verification never modifies its input. Exact matrices are checked
//! exactly; float matrices against an absolute tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cretan::LevelMatrix;
use crate::linalg::{bareiss_det, big_ln_abs, float_log_abs_det};
use crate::scalar::{Scalar, VERIFY_TOL};

/// Largest order for which rational determinants are computed exactly.
pub const EXACT_DET_MAX: usize = 45;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    /// At least one entry of modulus 1 in every row and column.
    #[default]
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub log: f64,
    /// Linear value when it fits in a double.
    pub value: Option<f64>,
}

impl Bound {
    /// `coeff * base^(exp/2)`, exact for perfect squares.
    fn half_power(coeff: f64, base: f64, exp: u32) -> Bound {
        let log = coeff.ln() + 0.5 * exp as f64 * base.ln();
        let value = if exp == 0 {
            Some(coeff)
        } else if log < 700.0 {
            let pow = if exp % 2 == 0 {
                base.powi((exp / 2) as i32)
            } else {
                base.sqrt().powi(exp as i32)
            };
            Some(coeff * pow)
        } else {
            None
        };
        Bound { log, value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    /// `n^(n/2)`.
    pub hadamard: Bound,
    /// `sqrt(2n-1) (n-1)^((n-1)/2)`, odd `n`.
    pub barba: Option<Bound>,
    /// `2(n-1)(n-2)^((n-2)/2)`, `n = 2 (mod 4)`.
    pub wojtas: Option<Bound>,
    /// `(n+1)^((n-1)/2)`.
    pub brent_osborn: Bound,
}

pub fn det_bounds(n: usize) -> BoundReport {
    let nf = n as f64;
    let n32 = n as u32;
    BoundReport {
        n,
        hadamard: Bound::half_power(1.0, nf, n32),
        barba: (n % 2 == 1).then(|| Bound::half_power((2.0 * nf - 1.0).sqrt(), nf - 1.0, n32 - 1)),
        wojtas: (n % 4 == 2).then(|| Bound::half_power(2.0 * (nf - 1.0), nf - 2.0, n32 - 2)),
        brent_osborn: Bound::half_power(1.0, nf + 1.0, n32.saturating_sub(1)),
    }
}

/// Integer matrix `R S` and the common denominator `R` of a rational matrix.
fn integer_scaling(s: &LevelMatrix) -> Option<(Vec<BigInt>, BigInt)> {
    if !s.levels().iter().all(Scalar::is_rational) {
        return None;
    }
    let ex: Vec<_> = s.levels().iter().map(|l| l.as_exact().expect("rational")).collect();
    let denom = ex.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.r()));
    let scaled: Vec<BigInt> = ex.iter().map(|x| x.p() * (&denom / x.r())).collect();
    Some((s.cells().iter().map(|&c| scaled[c as usize].clone()).collect(), denom))
}

/// `ln |det S|`: exact elimination for rational matrices up to
/// [`EXACT_DET_MAX`], partial-pivot float elimination otherwise.
pub fn log_abs_det(s: &LevelMatrix) -> f64 {
    let n = s.order();
    if n <= EXACT_DET_MAX {
        if let Some((ints, denom)) = integer_scaling(s) {
            let d = bareiss_det(n, &ints);
            return big_ln_abs(&d) - n as f64 * big_ln_abs(&denom);
        }
    }
    float_log_abs_det(n, &s.to_f64())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetIdentity {
    pub log_abs_det: f64,
    /// `(n/2) ln omega`.
    pub expected: f64,
    /// `| |det| / omega^(n/2) - 1 |`.
    pub relative_residual: f64,
    /// `det^2 = omega^n` was decided in exact arithmetic.
    pub exact: bool,
    pub exact_zero: bool,
}

/// Compares `|det S|` with `omega^(n/2)`.
pub fn check_det_identity(s: &LevelMatrix) -> DetIdentity {
    let n = s.order();
    let omega = s.omega();
    let expected = 0.5 * n as f64 * omega.to_f64().ln();
    if n <= EXACT_DET_MAX && omega.is_rational() {
        if let Some((ints, denom)) = integer_scaling(s) {
            let d = bareiss_det(n, &ints);
            let w = omega.as_exact().expect("rational");
            // det(R S)^2 r^n == p^n R^(2n)
            let e = n as u32;
            let lhs = &d * &d * w.r().pow(e);
            let rhs = w.p().pow(e) * denom.pow(2 * e);
            let log_abs_det = big_ln_abs(&d) - n as f64 * big_ln_abs(&denom);
            let exact_zero = lhs == rhs && !w.p().is_negative() && !d.is_zero();
            return DetIdentity {
                log_abs_det,
                expected,
                relative_residual: if exact_zero {
                    0.0
                } else {
                    (log_abs_det - expected).exp_m1().abs()
                },
                exact: true,
                exact_zero,
            };
        }
    }
    let log_abs_det = log_abs_det(s);
    DetIdentity {
        log_abs_det,
        expected,
        relative_residual: (log_abs_det - expected).exp_m1().abs(),
        exact: false,
        exact_zero: false,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub order: usize,
    /// `(S S^T)[0][0]`.
    pub radius: Scalar,
    pub omega_claimed: Scalar,
    pub omega_matches: bool,
    pub tau: usize,
    pub levels: Vec<Scalar>,
    pub exact: bool,
    pub tolerance: f64,
    pub gram_exact_zero: bool,
    pub max_offdiag_residual: f64,
    pub max_diag_deviation: f64,
    /// `S^T S` gave the same verdict as `S S^T`.
    pub columns_agree: bool,
    pub moduli_ok: bool,
    pub radius_within_order: bool,
    pub strict: bool,
    pub relaxed: bool,
    pub mode: VerifyMode,
    pub passed: bool,
    pub det: DetIdentity,
    pub bounds: BoundReport,
    pub method: String,
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
}

/// Checks `S S^T = omega I`, entry moduli, and the unit-entry condition.
/// Failures are reported in the certificate, never as errors.
pub fn verify_cretan(s: &LevelMatrix, mode: VerifyMode, tol: f64) -> Certificate {
    let n = s.order();
    let rows = s.gram();
    let cols = s.gram_columns();
    let row_ok = rows.passes(tol);
    let col_ok = cols.passes(tol);
    let unit: Vec<bool> = s.levels().iter().map(Scalar::is_unit_modulus).collect();
    let has_unit_row = (0..n).all(|i| (0..n).any(|j| unit[s.cell(i, j) as usize]));
    let has_unit_col = (0..n).all(|j| (0..n).any(|i| unit[s.cell(i, j) as usize]));
    let moduli_ok = s.levels().iter().all(Scalar::abs_le_one);
    let omega_matches = if rows.radius.is_exact() && s.omega().is_exact() {
        &rows.radius == s.omega()
    } else {
        (rows.radius.to_f64() - s.omega().to_f64()).abs() <= tol
    };
    let radius_within_order = rows.radius.to_f64() <= n as f64 + tol;
    let relaxed = row_ok && col_ok && moduli_ok && radius_within_order;
    let strict = relaxed && has_unit_row && has_unit_col;
    let passed = omega_matches
        && match mode {
            VerifyMode::Strict => strict,
            VerifyMode::Relaxed => relaxed,
        };
    let prov = s.provenance();
    Certificate {
        order: n,
        omega_claimed: s.omega().clone(),
        omega_matches,
        tau: s.tau(),
        levels: s.levels().to_vec(),
        exact: rows.exact,
        tolerance: tol,
        gram_exact_zero: rows.offdiag_exact_zero && rows.diagonal_uniform,
        max_offdiag_residual: rows.max_offdiag.max(cols.max_offdiag),
        max_diag_deviation: rows.max_diag_deviation.max(cols.max_diag_deviation),
        columns_agree: row_ok == col_ok,
        moduli_ok,
        radius_within_order,
        strict,
        relaxed,
        mode,
        passed,
        det: check_det_identity(s),
        bounds: det_bounds(n),
        method: prov.method.clone(),
        params: prov.params.clone(),
        notes: prov.notes.clone(),
        radius: rows.radius,
    }
}

pub fn verify_default(s: &LevelMatrix, mode: VerifyMode) -> Certificate {
    verify_cretan(s, mode, VERIFY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cretan::{basic_family, regular_hadamard_border, Provenance};
    use crate::designs::{develop, singer_difference_set};
    use crate::hadamard::regular_hadamard;
    use crate::io::fixture::FixtureStore;
    use proptest::prelude::*;

    #[test]
    fn bounds_quoted_values() {
        let b9 = det_bounds(9);
        assert_eq!(b9.hadamard.value, Some(19683.0));
        assert!((b9.barba.unwrap().value.unwrap() - 16888.24).abs() < 0.01);
        assert!(b9.wojtas.is_none());
        assert_eq!(det_bounds(10).wojtas.unwrap().value, Some(73728.0));
        assert!((det_bounds(13).barba.unwrap().value.unwrap() - 1.4930e7).abs() < 0.001e7);
        assert!(det_bounds(199).hadamard.value.is_some());
        let big = det_bounds(999);
        assert!(big.hadamard.value.is_none());
        assert!((big.hadamard.log - 499.5 * 999f64.ln()).abs() < 1e-9);
        for n in (5..200).step_by(2) {
            let b = det_bounds(n);
            assert!(b.barba.unwrap().log < b.hadamard.log);
        }
    }

    #[test]
    fn basic_nine_strict() {
        let c = verify_default(&basic_family(9).unwrap(), VerifyMode::Strict);
        assert!(c.passed && c.strict && c.exact && c.gram_exact_zero);
        assert_eq!(c.radius, Scalar::rational(81, 49).unwrap());
        assert!(c.det.exact_zero);
        assert!((c.det.log_abs_det - 4.5 * (81f64 / 49.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn border_is_relaxed_only() {
        let m = regular_hadamard_border(&regular_hadamard(1, &FixtureStore::Builtin).unwrap()).unwrap();
        let c = verify_default(&m, VerifyMode::Strict);
        assert!(c.relaxed && !c.strict && !c.passed);
        assert!(verify_default(&m, VerifyMode::Relaxed).passed);
        assert!(c.det.exact_zero);
        assert!(c.det.log_abs_det.abs() < 1e-12);
    }

    #[test]
    fn identity_and_incidence() {
        let c = verify_default(&LevelMatrix::identity(6), VerifyMode::Strict);
        assert!(c.passed && c.tau == 2 && c.radius == Scalar::one());
        assert_eq!(c.det.log_abs_det, 0.0);
        let design = develop(&singer_difference_set(2, 3).unwrap());
        let cells = design.incidence().iter().map(|&x| x as u32).collect();
        let inc = LevelMatrix::new(
            13,
            vec![Scalar::zero(), Scalar::one()],
            cells,
            Scalar::int(4),
            Provenance::new("incidence"),
        )
        .unwrap();
        assert!((log_abs_det(&inc) - 2916f64.ln()).abs() < 1e-12);
        assert!(!verify_default(&inc, VerifyMode::Relaxed).passed);
    }

    #[test]
    fn wrong_claim_fails() {
        let m = basic_family(7).unwrap();
        let bad = LevelMatrix::new(
            7,
            m.levels().to_vec(),
            m.cells().iter().map(|&c| c as u32).collect(),
            Scalar::int(2),
            Provenance::new("x"),
        )
        .unwrap();
        let c = verify_default(&bad, VerifyMode::Strict);
        assert!(c.relaxed && !c.omega_matches && !c.passed);
    }

    proptest! {
        #[test]
        fn equivalence_invariance(n in 4usize..12, ops in proptest::collection::vec((0u8..4, 0usize..12, 0usize..12), 0..10)) {
            let base = basic_family(n).unwrap();
            let c0 = verify_default(&base, VerifyMode::Strict);
            let mut m = base.clone();
            for (op, a, b) in ops {
                let (a, b) = (a % n, b % n);
                m = match op {
                    0 => m.swap_rows(a, b),
                    1 => m.swap_cols(a, b),
                    2 => m.negate_row(a),
                    _ => m.negate_col(b),
                };
            }
            let c = verify_default(&m, VerifyMode::Strict);
            prop_assert_eq!(&c.radius, &c0.radius);
            prop_assert_eq!(c.strict, c0.strict);
            prop_assert_eq!(c.relaxed, c0.relaxed);
            prop_assert!((c.det.log_abs_det - c0.det.log_abs_det).abs() < 1e-9);
            prop_assert!(c.columns_agree);
        }
    }
}
