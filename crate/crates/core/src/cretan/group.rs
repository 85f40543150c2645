//! Matrices over `Z_g` with a structural empty symbol: generalized
//! Hadamard (GH) and generalized weighing (GW) matrices, written additively.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CretanError, Result};
use crate::field::{make_field, FieldExt};

use super::{ComplexLevelMatrix, Provenance};

/// Largest field order accepted by [`gh_from_field`].
pub const GH_FIELD_CAP: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupKind {
    Gh,
    /// Every row and column has `weight` non-empty cells.
    Gw {
        weight: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMatrix {
    n: usize,
    modulus: u32,
    /// `None` is the empty cell, distinct from the group zero.
    entries: Vec<Option<u32>>,
    kind: GroupKind,
}

impl GroupMatrix {
    pub fn new(n: usize, modulus: u32, entries: Vec<Option<u32>>, kind: GroupKind) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(CretanError::NonSquare);
        }
        if modulus == 0 {
            return Err(CretanError::Invalid("group modulus must be positive".into()));
        }
        if let Some(x) = entries.iter().flatten().find(|&&x| x >= modulus) {
            return Err(CretanError::Invalid(format!("{x} is not reduced mod {modulus}")));
        }
        if kind == GroupKind::Gh && entries.iter().any(Option::is_none) {
            return Err(CretanError::Invalid("a GH matrix has no empty cells".into()));
        }
        Ok(GroupMatrix {
            n,
            modulus,
            entries,
            kind,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn entries(&self) -> &[Option<u32>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.entries[i * self.n + j]
    }

    /// Non-empty cells per row (for GH this is `n`).
    pub fn weight(&self) -> usize {
        match self.kind {
            GroupKind::Gh => self.n,
            GroupKind::Gw { weight } => weight,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: Option<u32>) {
        self.entries[i * self.n + j] = value;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCensus {
    pub passed: bool,
    pub row_pairs: usize,
    /// Occurrences of each group element per row pair, when the same for all pairs.
    pub uniform_count: Option<usize>,
    pub weights_ok: bool,
    pub failures: Vec<String>,
}

const MAX_REPORTED: usize = 8;

/// For every pair of distinct rows, the differences over their common
/// non-empty columns must cover `Z_g` uniformly. For GW the row and column
/// weights are checked as well.
pub fn group_orthogonality_check(g: &GroupMatrix) -> GroupCensus {
    let n = g.n;
    let m = g.modulus as usize;
    let mut failures = Vec::new();
    let w = g.weight();
    let mut weights_ok = true;
    for t in 0..n {
        let row = (0..n).filter(|&j| g.get(t, j).is_some()).count();
        let col = (0..n).filter(|&i| g.get(i, t).is_some()).count();
        if row != w || col != w {
            weights_ok = false;
            if failures.len() < MAX_REPORTED {
                failures.push(format!("line {t} has weight {row}/{col}, expected {w}"));
            }
        }
    }
    let mut common: Option<usize> = None;
    let mut same_count = true;
    let mut balanced = true;
    let mut counts = vec![0usize; m];
    let mut pairs = 0;
    for a in 0..n {
        for b in a + 1..n {
            pairs += 1;
            counts.iter_mut().for_each(|c| *c = 0);
            for c in 0..n {
                if let (Some(x), Some(y)) = (g.get(a, c), g.get(b, c)) {
                    counts[((x + g.modulus - y) % g.modulus) as usize] += 1;
                }
            }
            let first = counts[0];
            if counts.iter().any(|&c| c != first) {
                balanced = false;
                if failures.len() < MAX_REPORTED {
                    failures.push(format!("rows {a},{b}: difference counts {counts:?}"));
                }
            } else if common.is_some_and(|c| c != first) {
                same_count = false;
            } else {
                common = Some(first);
            }
        }
    }
    GroupCensus {
        passed: weights_ok && balanced,
        row_pairs: pairs,
        uniform_count: if balanced && same_count { common } else { None },
        weights_ok,
        failures,
    }
}

/// `GH(p^k, Z_p)` with entry `(i, j) = Tr(x_i x_j)`, elements in index order.
pub fn gh_from_field(p: u64, k: u32) -> Result<GroupMatrix> {
    let f = make_field(p, k)?;
    let q = f.order();
    if q > GH_FIELD_CAP {
        return Err(CretanError::SizeCap {
            what: "field order",
            value: q,
            limit: GH_FIELD_CAP,
        });
    }
    let xs = f.elements();
    let mut entries = Vec::with_capacity(xs.len() * xs.len());
    for x in &xs {
        for y in &xs {
            entries.push(Some(x.try_mul(y)?.trace_to_prime()));
        }
    }
    let g = GroupMatrix::new(q as usize, p as u32, entries, GroupKind::Gh)?;
    let census = group_orthogonality_check(&g);
    if !census.passed {
        return Err(CretanError::CensusFailed(census.failures.join("; ")));
    }
    Ok(g)
}

/// Entry `e` becomes `exp(2 pi i e / g)`; empty cells become 0.
pub fn gh_to_complex(g: &GroupMatrix) -> Result<ComplexLevelMatrix> {
    let m = g.modulus as f64;
    let entries = g
        .entries
        .iter()
        .map(|e| match e {
            Some(x) => Complex64::from_polar(1.0, 2.0 * PI * *x as f64 / m),
            None => Complex64::new(0.0, 0.0),
        })
        .collect();
    ComplexLevelMatrix::new(
        g.n,
        entries,
        g.weight() as f64,
        Provenance::new("gh").param("modulus", g.modulus),
    )
}
