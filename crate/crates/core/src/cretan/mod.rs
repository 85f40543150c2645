//! Cretan matrices: square matrices with entries of modulus at most 1 and
//! `S S^T = omega I`.
//!
//! A [`LevelMatrix`] stores its distinct entry values (levels) once and
//! every cell as an index into them. Exact Gram checks then reduce to
//! counting level pairs per row pair and summing integer products.

mod complex;
mod group;
mod real;

pub use complex::{conference_complex, ComplexLevelMatrix};
pub use group::{
    gh_from_field, gh_to_complex, group_orthogonality_check, GroupCensus, GroupKind, GroupMatrix, GH_FIELD_CAP,
};
pub use real::{basic_family, bordered_solver, direct_sum, kronecker_cretan, regular_hadamard_border, sbibd_two_level};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CretanError, Result};
use crate::scalar::{big_to_f64, Scalar, ROOT_TOL, VERIFY_TOL};

/// Where a matrix came from: a method tag, ordered parameters and free notes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(method: impl Into<String>) -> Self {
        Provenance {
            method: method.into(),
            ..Default::default()
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelMatrix {
    n: usize,
    /// Distinct values, ascending. Either all exact in one field or all float.
    levels: Vec<Scalar>,
    cells: Vec<u16>,
    omega: Scalar,
    provenance: Provenance,
}

fn float_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ROOT_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Demotes everything to float unless all exact values share one radicand.
fn homogenize(levels: &mut [Scalar], omega: &mut Scalar) {
    let mut radicand = None;
    let mut float = false;
    for x in levels.iter().chain(std::iter::once(&*omega)) {
        match x {
            Scalar::Float(_) => float = true,
            Scalar::Exact(_) => {
                if let Some(d) = x.radicand() {
                    if radicand.is_some_and(|r| r != d) {
                        float = true;
                    }
                    radicand = Some(d);
                }
            }
        }
    }
    if float {
        for x in levels.iter_mut() {
            *x = x.demote();
        }
        *omega = omega.demote();
    }
}

impl LevelMatrix {
    /// Builds from a level table and per-cell indices. Levels may repeat, be
    /// unsorted or unused; they are merged, sorted and pruned.
    pub fn new(n: usize, levels: Vec<Scalar>, cells: Vec<u32>, omega: Scalar, provenance: Provenance) -> Result<Self> {
        if n == 0 || cells.len() != n * n {
            return Err(CretanError::NonSquare);
        }
        if cells.iter().any(|&c| c as usize >= levels.len()) {
            return Err(CretanError::Invalid("cell refers to a missing level".into()));
        }
        let mut levels = levels;
        let mut omega = omega;
        homogenize(&mut levels, &mut omega);
        let mut used = vec![false; levels.len()];
        for &c in &cells {
            used[c as usize] = true;
        }
        let mut order: Vec<usize> = (0..levels.len()).filter(|&i| used[i]).collect();
        order.sort_by(|&a, &b| levels[a].cmp_value(&levels[b]));
        let mut remap = vec![u32::MAX; levels.len()];
        let mut kept: Vec<Scalar> = Vec::new();
        for &i in &order {
            let same = kept.last().is_some_and(|last| match (last, &levels[i]) {
                (Scalar::Float(a), Scalar::Float(b)) => float_close(*a, *b),
                (a, b) => a == b,
            });
            if !same {
                kept.push(levels[i].clone());
            }
            remap[i] = (kept.len() - 1) as u32;
        }
        if kept.len() > u16::MAX as usize {
            return Err(CretanError::SizeCap {
                what: "distinct levels",
                value: kept.len() as u64,
                limit: u16::MAX as u64,
            });
        }
        let cells = cells.iter().map(|&c| remap[c as usize] as u16).collect();
        Ok(LevelMatrix {
            n,
            levels: kept,
            cells,
            omega,
            provenance,
        })
    }

    /// Builds from a dense row-major list of entries.
    pub fn from_entries(n: usize, entries: &[Scalar], omega: Scalar, provenance: Provenance) -> Result<Self> {
        if entries.len() != n * n {
            return Err(CretanError::NonSquare);
        }
        let mut levels: Vec<Scalar> = Vec::new();
        let mut cells = Vec::with_capacity(entries.len());
        for e in entries {
            let idx = match levels.iter().position(|l| l == e) {
                Some(i) => i,
                None => {
                    levels.push(e.clone());
                    levels.len() - 1
                }
            };
            cells.push(idx as u32);
        }
        Self::new(n, levels, cells, omega, provenance)
    }

    pub fn identity(n: usize) -> Self {
        let cells = (0..n * n).map(|t| u32::from(t % (n + 1) == 0)).collect();
        Self::new(
            n,
            vec![Scalar::zero(), Scalar::one()],
            cells,
            Scalar::one(),
            Provenance::new("identity"),
        )
        .expect("identity is well formed")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of distinct entry values.
    pub fn tau(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Scalar] {
        &self.levels
    }

    pub fn omega(&self) -> &Scalar {
        &self.omega
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn provenance_mut(&mut self) -> &mut Provenance {
        &mut self.provenance
    }

    pub fn method(&self) -> &str {
        &self.provenance.method
    }

    pub fn is_exact(&self) -> bool {
        self.omega.is_exact() && self.levels.iter().all(Scalar::is_exact)
    }

    pub fn cell(&self, i: usize, j: usize) -> u16 {
        self.cells[i * self.n + j]
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.levels[self.cell(i, j) as usize]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let lv: Vec<f64> = self.levels.iter().map(Scalar::to_f64).collect();
        self.cells.iter().map(|&c| lv[c as usize]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Largest `|level|`, compared exactly where possible.
    pub fn max_abs_level(&self) -> Scalar {
        self.levels
            .iter()
            .map(Scalar::abs)
            .max_by(|a, b| a.cmp_value(b))
            .unwrap_or_else(Scalar::zero)
    }

    pub fn demote(&self) -> LevelMatrix {
        let mut out = self.clone();
        out.levels = self.levels.iter().map(Scalar::demote).collect();
        out.omega = self.omega.demote();
        out
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn transpose(&self) -> LevelMatrix {
        let n = self.n;
        let mut out = self.clone();
        out.cells = (0..n * n).map(|t| self.cells[(t % n) * n + t / n]).collect();
        out
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> LevelMatrix {
        let mut out = self.clone();
        for j in 0..self.n {
            out.cells.swap(a * self.n + j, b * self.n + j);
        }
        out
    }

    pub fn swap_cols(&self, a: usize, b: usize) -> LevelMatrix {
        self.transpose().swap_rows(a, b).transpose()
    }

    pub fn negate_row(&self, i: usize) -> LevelMatrix {
        let tau = self.levels.len() as u32;
        let mut levels = self.levels.clone();
        levels.extend(self.levels.iter().map(|x| -x.clone()));
        let n = self.n;
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(t, &c)| if t / n == i { c as u32 + tau } else { c as u32 })
            .collect();
        LevelMatrix::new(n, levels, cells, self.omega.clone(), self.provenance.clone())
            .expect("negation keeps the level table consistent")
    }

    pub fn negate_col(&self, j: usize) -> LevelMatrix {
        self.transpose().negate_row(j).transpose()
    }

    /// `S S^T`, exactly when the matrix is exact.
    pub fn gram(&self) -> GramReport {
        if self.is_exact() {
            exact_gram(self)
        } else {
            float_gram(self)
        }
    }

    /// `S^T S`.
    pub fn gram_columns(&self) -> GramReport {
        self.transpose().gram()
    }
}

/// Summary of `S S^T` against a multiple of the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub exact: bool,
    /// `(S S^T)[0][0]`.
    pub radius: Scalar,
    /// All diagonal entries equal, exactly in exact mode.
    pub diagonal_uniform: bool,
    pub max_diag_deviation: f64,
    pub max_offdiag: f64,
    /// Every off-diagonal entry is exactly zero (exact mode only).
    pub offdiag_exact_zero: bool,
}

impl GramReport {
    pub fn passes(&self, tol: f64) -> bool {
        if self.exact {
            self.diagonal_uniform && self.offdiag_exact_zero
        } else {
            self.max_diag_deviation <= tol && self.max_offdiag <= tol
        }
    }

    pub fn passes_default(&self) -> bool {
        self.passes(VERIFY_TOL)
    }
}

/// Levels over the common denominator `R`: `level = (P + Q sqrt d) / R`.
struct ScaledLevels {
    d: u64,
    denom: BigInt,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ScaledLevels {
    fn new(levels: &[Scalar]) -> ScaledLevels {
        let exact: Vec<_> = levels.iter().map(|l| l.as_exact().expect("exact levels")).collect();
        let d = exact.iter().map(|x| x.d()).find(|&d| d != 0).unwrap_or(0);
        let denom = exact.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.r()));
        let p = exact.iter().map(|x| x.p() * (&denom / x.r())).collect();
        let q = exact.iter().map(|x| x.q() * (&denom / x.r())).collect();
        ScaledLevels { d, denom, p, q }
    }

    /// Pairwise products `(P_a P_b + d Q_a Q_b, P_a Q_b + Q_a P_b)`.
    fn products(&self) -> Vec<(BigInt, BigInt)> {
        let t = self.p.len();
        let d = BigInt::from(self.d);
        let mut out = Vec::with_capacity(t * t);
        for a in 0..t {
            for b in 0..t {
                out.push((
                    &self.p[a] * &self.p[b] + &d * &self.q[a] * &self.q[b],
                    &self.p[a] * &self.q[b] + &self.q[a] * &self.p[b],
                ));
            }
        }
        out
    }
}

fn exact_gram(m: &LevelMatrix) -> GramReport {
    let n = m.n;
    let t = m.levels.len();
    let scaled = ScaledLevels::new(&m.levels);
    let big = scaled.products();
    let small: Option<Vec<(i128, i128)>> = big
        .iter()
        .map(|(a, b)| Some((a.to_i64()? as i128, b.to_i64()? as i128)))
        .collect();
    let mut counts = vec![0u32; t * t];
    let mut touched: Vec<usize> = Vec::with_capacity(n);
    let mut pair = |i: usize, j: usize| -> (BigInt, BigInt) {
        for &c in &touched {
            counts[c] = 0;
        }
        touched.clear();
        let (ri, rj) = (&m.cells[i * n..(i + 1) * n], &m.cells[j * n..(j + 1) * n]);
        for (&x, &y) in ri.iter().zip(rj) {
            let idx = x as usize * t + y as usize;
            if counts[idx] == 0 {
                touched.push(idx);
            }
            counts[idx] += 1;
        }
        if let Some(small) = &small {
            let mut sa: i128 = 0;
            let mut sb: i128 = 0;
            let mut ok = true;
            for &idx in &touched {
                let c = counts[idx] as i128;
                let (a, b) = small[idx];
                match (
                    c.checked_mul(a).and_then(|v| sa.checked_add(v)),
                    c.checked_mul(b).and_then(|v| sb.checked_add(v)),
                ) {
                    (Some(x), Some(y)) => {
                        sa = x;
                        sb = y;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return (BigInt::from(sa), BigInt::from(sb));
            }
        }
        let mut sa = BigInt::zero();
        let mut sb = BigInt::zero();
        for &idx in &touched {
            let c = BigInt::from(counts[idx]);
            sa += &c * &big[idx].0;
            sb += &c * &big[idx].1;
        }
        (sa, sb)
    };
    let r2 = &scaled.denom * &scaled.denom;
    let sqrt_d = (scaled.d as f64).sqrt();
    let magnitude = |a: &BigInt, b: &BigInt| -> f64 {
        Scalar::quad(a.clone(), b.clone(), r2.clone(), scaled.d)
            .map(|s| s.to_f64().abs())
            .unwrap_or_else(|_| ((big_to_f64(a) + big_to_f64(b) * sqrt_d) / big_to_f64(&r2)).abs())
    };
    let diag0 = pair(0, 0);
    let radius = Scalar::quad(diag0.0.clone(), diag0.1.clone(), r2.clone(), scaled.d).expect("nonzero denominator");
    let mut diagonal_uniform = true;
    let mut max_diag_deviation: f64 = 0.0;
    let mut max_offdiag: f64 = 0.0;
    let mut offdiag_exact_zero = true;
    for i in 0..n {
        for j in i..n {
            let (a, b) = pair(i, j);
            if i == j {
                if (a.clone(), b.clone()) != diag0 {
                    diagonal_uniform = false;
                    max_diag_deviation = max_diag_deviation.max(magnitude(&(&a - &diag0.0), &(&b - &diag0.1)));
                }
            } else if !(a.is_zero() && b.is_zero()) {
                offdiag_exact_zero = false;
                max_offdiag = max_offdiag.max(magnitude(&a, &b));
            }
        }
    }
    GramReport {
        exact: true,
        radius,
        diagonal_uniform,
        max_diag_deviation,
        max_offdiag,
        offdiag_exact_zero,
    }
}

fn float_gram(m: &LevelMatrix) -> GramReport {
    let n = m.n;
    let e = m.to_f64();
    let dot = |i: usize, j: usize| -> f64 { (0..n).map(|c| e[i * n + c] * e[j * n + c]).sum() };
    let r0 = dot(0, 0);
    let mut max_diag_deviation: f64 = 0.0;
    let mut max_offdiag: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let v = dot(i, j);
            if i == j {
                max_diag_deviation = max_diag_deviation.max((v - r0).abs());
            } else {
                max_offdiag = max_offdiag.max(v.abs());
            }
        }
    }
    GramReport {
        exact: false,
        radius: Scalar::float(r0),
        diagonal_uniform: max_diag_deviation <= VERIFY_TOL,
        max_diag_deviation,
        max_offdiag,
        offdiag_exact_zero: false,
    }
}
