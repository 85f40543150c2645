//! Real-valued constructions.

use std::cmp::Ordering;

use crate::designs::Sbibd;
use crate::error::{CretanError, Result};
use crate::hadamard::SignMatrix;
use crate::scalar::{solve_quadratic, Scalar, ScalarPoly, ROOT_TOL};

use super::{LevelMatrix, Provenance};

fn int(n: usize) -> Scalar {
    Scalar::int(n as i64)
}

/// `a I + b (J - I)` with `a = 1` and `b = -2/(n-2)`, the root of
/// `2a + (n-2) b = 0`.
pub fn basic_family(n: usize) -> Result<LevelMatrix> {
    if n < 3 {
        return Err(CretanError::InvalidOrder {
            order: n,
            reason: "the basic family needs n >= 3".into(),
        });
    }
    if n == 3 {
        return Err(CretanError::ModulusViolation(
            "order 3 forces the off-diagonal level -2".into(),
        ));
    }
    let b = Scalar::rational(-2, n as i64 - 2)?;
    // 1 + (n-1) b^2
    let omega = Scalar::one().try_add(&int(n - 1).try_mul(&b.square())?)?;
    let cells = (0..n * n).map(|t| u32::from(t % (n + 1) == 0)).collect();
    LevelMatrix::new(
        n,
        vec![b.clone(), Scalar::one()],
        cells,
        omega,
        Provenance::new("basic").param("n", n).param("b", &b),
    )
}

/// `(c0, c1, c2)` of the characteristic polynomial
/// `lambda + 2(k - lambda) b + (v - 2k + lambda) b^2`.
fn characteristic(v: usize, k: usize, lambda: usize) -> [Scalar; 3] {
    [
        int(lambda),
        int(2 * (k - lambda)),
        Scalar::int(v as i64 - 2 * k as i64 + lambda as i64),
    ]
}

/// Puts `1` on the incidences of `design` and `b` elsewhere, for each real
/// root `b` of the characteristic polynomial with `|b| <= 1`.
pub fn sbibd_two_level(design: &Sbibd) -> Result<Vec<LevelMatrix>> {
    let (v, k, lambda) = design.params();
    let [c0, c1, c2] = characteristic(v, k, lambda);
    let roots = match solve_quadratic(&c0, &c1, &c2) {
        Ok(r) => r,
        Err(CretanError::AllZeroCoefficients) => Vec::new(),
        Err(e) => return Err(e),
    };
    let cells: Vec<u32> = design.incidence().iter().map(|&x| x as u32).collect();
    let mut out = Vec::new();
    for b in roots.into_iter().filter(Scalar::abs_le_one) {
        let omega = int(k).try_add(&int(v - k).try_mul(&b.square())?)?;
        let prov = Provenance::new("sbibd")
            .param("v", v)
            .param("k", k)
            .param("lambda", lambda)
            .param("b", &b);
        out.push(LevelMatrix::new(v, vec![b, Scalar::one()], cells.clone(), omega, prov)?);
    }
    Ok(out)
}

/// Corner 1, zero border, core `M / 2m` for a regular Hadamard `M` of
/// order `4m^2`. Radius 1; the core rows carry no unit entry.
pub fn regular_hadamard_border(m: &SignMatrix) -> Result<LevelMatrix> {
    let n = m.order();
    let half = (1..=n).find(|h| 4 * h * h >= n).unwrap_or(0);
    if 4 * half * half != n || m.entries().contains(&0) {
        return Err(CretanError::NotRegular(format!("order {n} is not 4m^2")));
    }
    let target = 2 * half as i64;
    if m.row_sums().iter().chain(&m.col_sums()).any(|&s| s != target) {
        return Err(CretanError::NotRegular(format!("line sums differ from {target}")));
    }
    if m.weight() != n {
        return Err(CretanError::NotRegular("not a Hadamard matrix".into()));
    }
    let inv = Scalar::rational(1, target)?;
    let levels = vec![Scalar::one(), Scalar::zero(), inv.clone(), -inv];
    let big = n + 1;
    let mut cells = vec![1u32; big * big];
    cells[0] = 0;
    for i in 0..n {
        for j in 0..n {
            cells[(i + 1) * big + j + 1] = if m.get(i, j) > 0 { 2 } else { 3 };
        }
    }
    LevelMatrix::new(
        big,
        levels,
        cells,
        Scalar::one(),
        Provenance::new("regular-hadamard")
            .param("m", half)
            .note("relaxed: core rows have no entry of modulus 1"),
    )
}

#[derive(Clone, Copy, Debug)]
struct BorderSystem {
    v: f64,
    k: f64,
    c: [f64; 3],
}

impl BorderSystem {
    fn char_at(&self, b: f64) -> f64 {
        self.c[0] + self.c[1] * b + self.c[2] * b * b
    }

    fn corner(&self, b: f64) -> f64 {
        -(self.k + (self.v - self.k) * b)
    }

    fn feasible(&self, b: f64) -> bool {
        let s2 = -self.char_at(b);
        b.abs() <= 1.0 + ROOT_TOL && s2 >= -ROOT_TOL && s2 <= 1.0 + ROOT_TOL && self.corner(b).abs() <= 1.0 + ROOT_TOL
    }
}

/// Order `v + 1` matrices with corner `x`, border `s`, and core `1` on the
/// incidences of `design` and `b` elsewhere.
///
/// Orthogonality forces `x = -(k + (v-k) b)` and `s^2 = -c(b)` with `c`
/// the characteristic polynomial. The remaining radius condition is
/// identically satisfied for every symmetric design, so the solutions form
/// intervals of `b`; the endpoints of each interval are returned. Output is
/// float, rescaled so that the largest level has modulus 1.
pub fn bordered_solver(design: &Sbibd) -> Result<Vec<LevelMatrix>> {
    let (v, k, lambda) = design.params();
    if v == k {
        return Ok(Vec::new());
    }
    let [c0, c1, c2] = characteristic(v, k, lambda);
    let lin = ScalarPoly::new(vec![int(k), int(v - k)]);
    let chr = ScalarPoly::new(vec![c0.clone(), c1.clone(), c2.clone()]);
    let tail = ScalarPoly::new(vec![int(k), Scalar::zero(), int(v - k)]);
    let radius_gap = lin.try_mul(&lin)?.try_sub(&chr.scale(&int(v - 1))?)?.try_sub(&tail)?;
    let sys = BorderSystem {
        v: v as f64,
        k: k as f64,
        c: [c0.to_f64(), c1.to_f64(), c2.to_f64()],
    };
    let candidates = if radius_gap.is_zero() {
        interval_endpoints(&sys, &c0, &c1, &c2, v, k)?
    } else {
        radius_gap
            .roots_by_bisection(-1.0, 1.0, 4096)
            .into_iter()
            .filter(|&b| sys.feasible(b))
            .collect()
    };
    candidates
        .into_iter()
        .map(|b| bordered_matrix(design, &sys, b))
        .collect()
}

fn interval_endpoints(
    sys: &BorderSystem,
    c0: &Scalar,
    c1: &Scalar,
    c2: &Scalar,
    v: usize,
    k: usize,
) -> Result<Vec<f64>> {
    let shifted = c0.try_add(&Scalar::one())?;
    let mut points = vec![-1.0, 1.0];
    for roots in [solve_quadratic(c0, c1, c2), solve_quadratic(&shifted, c1, c2)] {
        match roots {
            Ok(r) => points.extend(r.iter().map(Scalar::to_f64)),
            Err(CretanError::AllZeroCoefficients) => {}
            Err(e) => return Err(e),
        }
    }
    let span = (v - k) as f64;
    points.push((-1.0 - k as f64) / span);
    points.push((1.0 - k as f64) / span);
    points.retain(|b| b.abs() <= 1.0);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    points.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOL);
    let mut out = Vec::new();
    let mut open = false;
    for (i, &p) in points.iter().enumerate() {
        let here = sys.feasible(p);
        let right = points.get(i + 1).is_some_and(|&q| sys.feasible(0.5 * (p + q)));
        match (open, here) {
            (false, true) => {
                out.push(p);
                open = right;
            }
            (true, true) if !right => {
                out.push(p);
                open = false;
            }
            (true, false) => open = false,
            _ => {}
        }
    }
    Ok(out)
}

fn bordered_matrix(design: &Sbibd, sys: &BorderSystem, b: f64) -> Result<LevelMatrix> {
    let v = design.v();
    let x = sys.corner(b);
    let s2 = (-sys.char_at(b)).max(0.0);
    let s = s2.sqrt();
    let scale = [x.abs(), s, 1.0, b.abs()].into_iter().fold(0.0, f64::max);
    let omega = (s2 + sys.k + (sys.v - sys.k) * b * b) / (scale * scale);
    let levels = [x, s, 1.0, b].map(|l| Scalar::float(l / scale)).to_vec();
    let n = v + 1;
    let mut cells = vec![0u32; n * n];
    for t in 1..n {
        cells[t] = 1;
        cells[t * n] = 1;
    }
    for i in 0..v {
        for j in 0..v {
            cells[(i + 1) * n + j + 1] = if design.get(i, j) == 1 { 2 } else { 3 };
        }
    }
    let (_, k, lambda) = design.params();
    LevelMatrix::new(
        n,
        levels,
        cells,
        Scalar::float(omega),
        Provenance::new("bordered")
            .param("v", v)
            .param("k", k)
            .param("lambda", lambda)
            .param("b", format!("{b:.12}")),
    )
}

/// `A (x) B`. The radius multiplies; the level count is recounted.
pub fn kronecker_cretan(a: &LevelMatrix, b: &LevelMatrix) -> LevelMatrix {
    let (na, nb) = (a.order(), b.order());
    let tb = b.tau();
    let mut levels = Vec::with_capacity(a.tau() * tb);
    for x in a.levels() {
        for y in b.levels() {
            levels.push(x.mul_or_demote(y));
        }
    }
    let n = na * nb;
    let mut cells = vec![0u32; n * n];
    for i in 0..na {
        for j in 0..na {
            let ca = a.cell(i, j) as u32 * tb as u32;
            for k in 0..nb {
                let row = (i * nb + k) * n + j * nb;
                for l in 0..nb {
                    cells[row + l] = ca + b.cell(k, l) as u32;
                }
            }
        }
    }
    let omega = a.omega().mul_or_demote(b.omega());
    let prov = Provenance::new("kronecker")
        .param("left", format!("{}:{}", a.method(), na))
        .param("right", format!("{}:{}", b.method(), nb));
    LevelMatrix::new(n, levels, cells, omega, prov).expect("products index the product table")
}

/// Block diagonal `A (+) B` with the larger-radius block scaled by
/// `sqrt(omega_min / omega_max)`, so both blocks share the smaller radius.
pub fn direct_sum(a: &LevelMatrix, b: &LevelMatrix) -> LevelMatrix {
    let (wa, wb) = (a.omega(), b.omega());
    let a_larger = wa.cmp_value(wb) == Ordering::Greater;
    let (small, large) = if a_larger { (wb, wa) } else { (wa, wb) };
    let mut notes = Vec::new();
    let scale = if small == large {
        Scalar::one()
    } else {
        let ratio = small
            .try_div(large)
            .unwrap_or_else(|_| Scalar::float(small.to_f64() / large.to_f64()));
        notes.push("larger-radius block scaled by sqrt(omega_min/omega_max)".to_string());
        ratio.sqrt_or_float()
    };
    let scaled_levels = |m: &LevelMatrix, factor: &Scalar| -> Vec<Scalar> {
        m.levels().iter().map(|l| l.mul_or_demote(factor)).collect()
    };
    let one = Scalar::one();
    let (fa, fb) = if a_larger { (&scale, &one) } else { (&one, &scale) };
    let la = scaled_levels(a, fa);
    let lb = scaled_levels(b, fb);
    for block in [&la, &lb] {
        if !block.iter().any(Scalar::is_unit_modulus) {
            notes.push("not one 1 per row and column".to_string());
            break;
        }
    }
    let (na, nb) = (a.order(), b.order());
    let (ta, tb) = (la.len() as u32, lb.len() as u32);
    let zero = ta + tb;
    let mut levels = la;
    levels.extend(lb);
    levels.push(Scalar::zero());
    let n = na + nb;
    let mut cells = vec![zero; n * n];
    for i in 0..na {
        for j in 0..na {
            cells[i * n + j] = a.cell(i, j) as u32;
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            cells[(na + i) * n + na + j] = ta + b.cell(i, j) as u32;
        }
    }
    let mut prov = Provenance::new("direct-sum")
        .param("left", format!("{}:{}", a.method(), na))
        .param("right", format!("{}:{}", b.method(), nb));
    prov.notes = notes;
    LevelMatrix::new(n, levels, cells, small.clone(), prov).expect("block table is complete")
}
