//! Determinants: fraction-free Bareiss elimination over the integers and
//! partial-pivot elimination in floating point.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact determinant of a square integer matrix (row-major, `n*n`).
pub fn bareiss_det(n: usize, entries: &[BigInt]) -> BigInt {
    assert_eq!(entries.len(), n * n, "matrix must be n x n");
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = entries.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn bareiss_det_i64(n: usize, entries: &[i64]) -> BigInt {
    let big: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
    bareiss_det(n, &big)
}

/// Natural log of `|x|` for arbitrarily large integers; `-inf` for zero.
pub fn big_ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = x.abs();
    let bits = a.bits();
    if bits < 1000 {
        return a.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = &a >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |det|` by LU with partial pivoting; `-inf` when singular.
pub fn float_log_abs_det(n: usize, entries: &[f64]) -> f64 {
    assert_eq!(entries.len(), n * n, "matrix must be n x n");
    let mut a = entries.to_vec();
    let mut acc = 0.0;
    for k in 0..n {
        let (piv, max) = (k..n)
            .map(|i| (i, a[i * n + k].abs()))
            .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if max == 0.0 {
            return f64::NEG_INFINITY;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
        }
        let pv = a[k * n + k];
        acc += pv.abs().ln();
        for i in k + 1..n {
            let f = a[i * n + k] / pv;
            if f != 0.0 {
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    acc
}
