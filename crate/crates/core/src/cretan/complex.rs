//! Complex Cretan matrices, checked in floating point.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CretanError, Result};
use crate::hadamard::SignMatrix;
use crate::scalar::{ROOT_TOL, VERIFY_TOL};

use super::Provenance;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexLevelMatrix {
    n: usize,
    #[serde(serialize_with = "serialize_pairs")]
    entries: Vec<Complex64>,
    omega: f64,
    provenance: Provenance,
}

fn serialize_pairs<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| (z.re, z.im)))
}

impl ComplexLevelMatrix {
    /// Rejects non-square input and entries of modulus above 1.
    pub fn new(n: usize, entries: Vec<Complex64>, omega: f64, provenance: Provenance) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(CretanError::NonSquare);
        }
        if let Some(z) = entries.iter().find(|z| z.norm() > 1.0 + ROOT_TOL) {
            return Err(CretanError::ModulusViolation(format!("{z}")));
        }
        Ok(ComplexLevelMatrix {
            n,
            entries,
            omega,
            provenance,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `max |(M M^*)[i][j] - omega delta_ij|`.
    pub fn gram_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = (0..n).map(|c| self.get(i, c) * self.get(j, c).conj()).sum();
                let want = if i == j { self.omega } else { 0.0 };
                worst = worst.max((dot - want).norm());
            }
        }
        worst
    }

    pub fn verifies(&self) -> bool {
        self.gram_residual() < VERIFY_TOL
    }

    /// Number of distinct entries, merged within `ROOT_TOL`.
    pub fn tau(&self) -> usize {
        let mut seen: Vec<Complex64> = Vec::new();
        for z in &self.entries {
            if !seen.iter().any(|w| (w - z).norm() <= ROOT_TOL) {
                seen.push(*z);
            }
        }
        seen.len()
    }
}

/// `i I + W` for a symmetric conference matrix `W`; `B B^* = n I`.
pub fn conference_complex(w: &SignMatrix) -> Result<ComplexLevelMatrix> {
    if !w.is_symmetric() {
        return Err(CretanError::NotSymmetric);
    }
    let n = w.order();
    if w.weight() != n - 1 || (0..n).any(|i| w.get(i, i) != 0) {
        return Err(CretanError::Invalid("expected a conference matrix".into()));
    }
    let entries = (0..n * n)
        .map(|t| {
            if t / n == t % n {
                Complex64::i()
            } else {
                Complex64::new(w.get(t / n, t % n) as f64, 0.0)
            }
        })
        .collect();
    ComplexLevelMatrix::new(n, entries, n as f64, Provenance::new("conference").param("n", n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{paley_conference, SignKind};

    #[test]
    fn paley_complex() {
        for (q, n) in [(5, 6), (9, 10), (13, 14)] {
            let b = conference_complex(&paley_conference(q).unwrap()).unwrap();
            assert_eq!(b.order(), n);
            assert!(b.gram_residual() < 1e-9);
            assert!(b.entries().iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn skew_rejected() {
        // skew conference matrix of order 4
        let rows = vec![
            vec![0, 1, 1, 1],
            vec![-1, 0, 1, -1],
            vec![-1, -1, 0, 1],
            vec![-1, 1, -1, 0],
        ];
        let w = SignMatrix::from_rows(&rows, SignKind::Conference).unwrap();
        assert_eq!(conference_complex(&w), Err(CretanError::NotSymmetric));
    }
}
