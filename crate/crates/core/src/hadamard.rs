//! Matrices over {-1, 0, +1} with `W W^T = k I`: Hadamard, conference,
//! weighing and regular Hadamard matrices.

use num_bigint::BigInt;
use serde::Serialize;

use crate::designs::{develop, load_fixture};
use crate::error::{CretanError, Result};
use crate::field::{make_field, prime_power, FieldExt};
use crate::io::fixture::{FixtureBody, FixtureStore};
use crate::linalg::bareiss_det_i64;

pub const SYLVESTER_MAX: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SignKind {
    Hadamard,
    /// Zero diagonal, `W W^T = (n-1) I`.
    Conference,
    Weighing {
        weight: usize,
    },
    /// Order `4m^2`, every row and column sum equal to `2m`.
    RegularHadamard {
        m: usize,
    },
}

impl SignKind {
    pub fn weight(&self, n: usize) -> usize {
        match *self {
            SignKind::Hadamard | SignKind::RegularHadamard { .. } => n,
            SignKind::Conference => n - 1,
            SignKind::Weighing { weight } => weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    n: usize,
    entries: Vec<i8>,
    kind: SignKind,
}

/// Rows packed as (support, sign) bitmasks so inner products are popcounts.
struct Packed {
    words: usize,
    support: Vec<u64>,
    negative: Vec<u64>,
}

impl Packed {
    fn rows(n: usize, entries: &[i8]) -> Packed {
        Self::build(n, |i, j| entries[i * n + j])
    }

    fn cols(n: usize, entries: &[i8]) -> Packed {
        Self::build(n, |i, j| entries[j * n + i])
    }

    fn build(n: usize, at: impl Fn(usize, usize) -> i8) -> Packed {
        let words = n.div_ceil(64);
        let mut support = vec![0u64; n * words];
        let mut negative = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                let x = at(i, j);
                let bit = 1u64 << (j % 64);
                if x != 0 {
                    support[i * words + j / 64] |= bit;
                }
                if x < 0 {
                    negative[i * words + j / 64] |= bit;
                }
            }
        }
        Packed {
            words,
            support,
            negative,
        }
    }

    fn dot(&self, a: usize, b: usize) -> i64 {
        let w = self.words;
        let mut both = 0i64;
        let mut differ = 0i64;
        for t in 0..w {
            let s = self.support[a * w + t] & self.support[b * w + t];
            both += s.count_ones() as i64;
            differ += (s & (self.negative[a * w + t] ^ self.negative[b * w + t])).count_ones() as i64;
        }
        both - 2 * differ
    }
}

/// First failing entry of `X X^T = weight I`, as `(i, j, value)`.
fn gram_violation(n: usize, packed: &Packed, weight: i64) -> Option<(usize, usize, i64)> {
    for i in 0..n {
        for j in i..n {
            let want = if i == j { weight } else { 0 };
            let got = packed.dot(i, j);
            if got != want {
                return Some((i, j, got));
            }
        }
    }
    None
}

impl SignMatrix {
    /// Validates entries, the Gram identity of `kind`, and its extra shape
    /// conditions (zero diagonal, constant line sums).
    pub fn new(n: usize, entries: Vec<i8>, kind: SignKind) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(CretanError::NonSquare);
        }
        if entries.iter().any(|&x| !(-1..=1).contains(&x)) {
            return Err(CretanError::Invalid("sign matrix entries must be -1, 0 or 1".into()));
        }
        let weight = kind.weight(n) as i64;
        let nonzero_expected = match kind {
            SignKind::Hadamard | SignKind::RegularHadamard { .. } => entries.iter().all(|&x| x != 0),
            SignKind::Conference => (0..n).all(|i| entries[i * n + i] == 0),
            SignKind::Weighing { .. } => true,
        };
        if !nonzero_expected {
            return Err(CretanError::Invalid(format!("entries do not fit the {kind:?} shape")));
        }
        for packed in [Packed::rows(n, &entries), Packed::cols(n, &entries)] {
            if let Some((i, j, got)) = gram_violation(n, &packed, weight) {
                return Err(CretanError::Invalid(format!(
                    "Gram entry ({i},{j}) is {got}, expected {}",
                    if i == j { weight } else { 0 }
                )));
            }
        }
        if let SignKind::RegularHadamard { m } = kind {
            if n != 4 * m * m {
                return Err(CretanError::NotRegular(format!("order {n} is not 4*{m}^2")));
            }
            let target = 2 * m as i64;
            for i in 0..n {
                let row: i64 = (0..n).map(|j| entries[i * n + j] as i64).sum();
                let col: i64 = (0..n).map(|j| entries[j * n + i] as i64).sum();
                if row != target || col != target {
                    return Err(CretanError::NotRegular(format!(
                        "line {i} sums to {row}/{col}, expected {target}"
                    )));
                }
            }
        }
        Ok(SignMatrix { n, entries, kind })
    }

    pub fn from_rows(rows: &[Vec<i8>], kind: SignKind) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CretanError::NonSquare);
        }
        Self::new(n, rows.concat(), kind)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SignKind {
        self.kind
    }

    /// The constant `k` in `W W^T = k I`.
    pub fn weight(&self) -> usize {
        self.kind.weight(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| x as i64).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j) as i64).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> SignMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|t| self.get(t % n, t / n)).collect();
        SignMatrix {
            n,
            entries,
            kind: self.kind,
        }
    }

    /// Exact `X X^T` as row-major integers.
    pub fn gram(&self) -> Vec<i64> {
        let packed = Packed::rows(self.n, &self.entries);
        let n = self.n;
        let mut g = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let d = packed.dot(i, j);
                g[i * n + j] = d;
                g[j * n + i] = d;
            }
        }
        g
    }

    pub fn det(&self) -> BigInt {
        let e: Vec<i64> = self.entries.iter().map(|&x| x as i64).collect();
        bareiss_det_i64(self.n, &e)
    }

    fn loosened(&self) -> SignKind {
        match self.kind {
            SignKind::RegularHadamard { .. } => SignKind::Hadamard,
            k => k,
        }
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> SignMatrix {
        let mut out = self.clone();
        for j in 0..self.n {
            out.entries.swap(a * self.n + j, b * self.n + j);
        }
        if let SignKind::Conference = self.kind {
            if a != b {
                out.kind = SignKind::Weighing { weight: self.n - 1 };
            }
        }
        out
    }

    pub fn swap_cols(&self, a: usize, b: usize) -> SignMatrix {
        self.transpose().swap_rows(a, b).transpose()
    }

    /// Negating a line keeps orthogonality but breaks regularity.
    pub fn negate_row(&self, i: usize) -> SignMatrix {
        let mut out = self.clone();
        for x in &mut out.entries[i * self.n..(i + 1) * self.n] {
            *x = -*x;
        }
        out.kind = self.loosened();
        out
    }

    pub fn negate_col(&self, j: usize) -> SignMatrix {
        self.transpose().negate_row(j).transpose()
    }

    /// Signs rows and columns so that the nonzero entries of the first row
    /// and first column are all `+1`.
    pub fn normalize(&self) -> SignMatrix {
        let n = self.n;
        let mut e = self.entries.clone();
        for i in 0..n {
            let pivot = if e[i * n] != 0 || n == 1 {
                e[i * n]
            } else {
                e[i * n + 1]
            };
            if pivot < 0 {
                for x in &mut e[i * n..(i + 1) * n] {
                    *x = -*x;
                }
            }
        }
        for j in 1..n {
            let pivot = if e[j] != 0 { e[j] } else { e[n + j] };
            if pivot < 0 {
                for i in 0..n {
                    e[i * n + j] = -e[i * n + j];
                }
            }
        }
        let kind = self.loosened();
        SignMatrix::new(n, e, kind).expect("equivalence operations preserve orthogonality")
    }

    /// The `(n-1) x (n-1)` block left after deleting the first row and column.
    pub fn core(&self) -> Vec<i8> {
        let n = self.n;
        (1..n)
            .flat_map(|i| (1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }
}

/// Order-`2^k` Sylvester matrix, normalized.
pub fn sylvester(k: u32) -> Result<SignMatrix> {
    if k > SYLVESTER_MAX {
        return Err(CretanError::SizeCap {
            what: "sylvester exponent",
            value: k as u64,
            limit: SYLVESTER_MAX as u64,
        });
    }
    let n = 1usize << k;
    let entries = (0..n * n)
        .map(|t| {
            if ((t / n) & (t % n)).count_ones() % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    SignMatrix::new(n, entries, SignKind::Hadamard)
}

/// Symmetric Paley conference matrix `W(q+1, q)` over GF(q), `q = 1 (mod 4)`:
/// a border of ones around `Q[i][j] = chi(x_j - x_i)`.
pub fn paley_conference(q: u64) -> Result<SignMatrix> {
    if q > 1000 {
        return Err(CretanError::SizeCap {
            what: "q",
            value: q,
            limit: 1000,
        });
    }
    let (p, e) = prime_power(q).ok_or(CretanError::NotPrimePower(q))?;
    if q % 4 != 1 {
        return Err(CretanError::BadCongruence {
            value: q,
            residue: 1,
            modulus: 4,
        });
    }
    let f = make_field(p, e)?;
    let xs = f.elements();
    let n = q as usize + 1;
    let mut w = vec![0i8; n * n];
    for j in 1..n {
        w[j] = 1;
        w[j * n] = 1;
    }
    for (i, xi) in xs.iter().enumerate() {
        for (j, xj) in xs.iter().enumerate() {
            w[(i + 1) * n + j + 1] = xj.try_sub(xi)?.quadratic_character();
        }
    }
    SignMatrix::new(n, w, SignKind::Conference)
}

/// `J - 2I` of order 4: the smallest regular Hadamard matrix.
pub fn regular_seed() -> SignMatrix {
    let entries = (0..16).map(|t| if t % 5 == 0 { -1 } else { 1 }).collect();
    SignMatrix::new(4, entries, SignKind::RegularHadamard { m: 1 }).expect("seed is regular")
}

pub fn kronecker_sign(a: &SignMatrix, b: &SignMatrix) -> SignMatrix {
    let (na, nb) = (a.n, b.n);
    let n = na * nb;
    let mut entries = vec![0i8; n * n];
    for i in 0..na {
        for j in 0..na {
            let x = a.get(i, j);
            if x == 0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    entries[(i * nb + k) * n + j * nb + l] = x * b.get(k, l);
                }
            }
        }
    }
    let weight = a.weight() * b.weight();
    let kind = match (a.kind, b.kind) {
        (SignKind::RegularHadamard { m: x }, SignKind::RegularHadamard { m: y }) => {
            SignKind::RegularHadamard { m: 2 * x * y }
        }
        _ if weight == n => SignKind::Hadamard,
        _ => SignKind::Weighing { weight },
    };
    SignMatrix { n, entries, kind }
}

/// Name of the Menon design fixture that would supply `RH(4m^2)`.
pub fn menon_fixture_name(m: usize) -> String {
    format!("{}-{}-{}", 4 * m * m, 2 * m * m - m, m * m - m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum RhPlan {
    Seed,
    Fixture(String),
    /// `RH(a) (x) RH(b)` has parameter `2ab`.
    Kron(usize, usize),
}

fn rh_plan(m: usize, store: &FixtureStore, depth: u32) -> Option<RhPlan> {
    if m == 0 || depth > 16 {
        return None;
    }
    if m == 1 {
        return Some(RhPlan::Seed);
    }
    let name = menon_fixture_name(m);
    if store.has(&name) {
        return Some(RhPlan::Fixture(name));
    }
    if m % 2 == 0 {
        let h = m / 2;
        for a in (1..=h).take_while(|a| a * a <= h) {
            if h % a == 0 && rh_plan(a, store, depth + 1).is_some() && rh_plan(h / a, store, depth + 1).is_some() {
                return Some(RhPlan::Kron(a, h / a));
            }
        }
    }
    None
}

pub fn regular_hadamard_available(m: usize, store: &FixtureStore) -> bool {
    rh_plan(m, store, 0).is_some()
}

/// Regular Hadamard matrix of order `4m^2` from the seed, Kronecker
/// closure, and Menon fixtures (incidence 1 maps to -1, 0 to +1).
pub fn regular_hadamard(m: usize, store: &FixtureStore) -> Result<SignMatrix> {
    match rh_plan(m, store, 0) {
        None if m == 0 => Err(CretanError::Invalid(
            "regular Hadamard parameter m must be positive".into(),
        )),
        None => Err(CretanError::MissingFixture(menon_fixture_name(m))),
        Some(RhPlan::Seed) => Ok(regular_seed()),
        Some(RhPlan::Kron(a, b)) => Ok(kronecker_sign(
            &regular_hadamard(a, store)?,
            &regular_hadamard(b, store)?,
        )),
        Some(RhPlan::Fixture(name)) => {
            let n = 4 * m * m;
            let kind = SignKind::RegularHadamard { m };
            let file = store
                .get(&name)?
                .ok_or_else(|| CretanError::MissingFixture(name.clone()))?;
            match file.body {
                FixtureBody::SignMatrix { rows, .. } => SignMatrix::from_rows(&rows, kind),
                FixtureBody::DifferenceSet { .. } => {
                    let design = develop(&load_fixture(store, &name)?);
                    let entries = design
                        .incidence()
                        .iter()
                        .map(|&x| if x == 1 { -1 } else { 1 })
                        .collect();
                    SignMatrix::new(n, entries, kind)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sylvester_small() {
        let h1 = sylvester(1).unwrap();
        assert_eq!(h1.entries(), &[1, 1, 1, -1]);
        let h2 = sylvester(2).unwrap();
        assert_eq!(h2.gram(), {
            let mut g = vec![0; 16];
            for i in 0..4 {
                g[i * 5] = 4;
            }
            g
        });
        assert_eq!(h2.normalize(), h2);
        assert_eq!(h2.core().len(), 9);
        assert!(sylvester(13).is_err());
        assert_eq!(sylvester(0).unwrap().entries(), &[1]);
    }

    #[test]
    fn sylvester_large_is_checked() {
        let h = sylvester(10).unwrap();
        assert_eq!(h.order(), 1024);
    }

    #[test]
    fn paley_five_and_nine() {
        let w = paley_conference(5).unwrap();
        assert!(w.is_symmetric());
        assert_eq!(w.det() * w.det(), BigInt::from(5).pow(6));
        let w9 = paley_conference(9).unwrap();
        assert_eq!(w9.order(), 10);
        let d = w9.det();
        assert_eq!(if d < BigInt::from(0) { -d } else { d }, BigInt::from(59049));
        assert_eq!(
            paley_conference(7),
            Err(CretanError::BadCongruence {
                value: 7,
                residue: 1,
                modulus: 4
            })
        );
        assert_eq!(paley_conference(13).unwrap().weight(), 13);
    }

    #[test]
    fn regular_orders() {
        let store = FixtureStore::Builtin;
        for (m, n) in [(1, 4), (2, 16), (3, 36), (4, 64), (6, 144)] {
            let h = regular_hadamard(m, &store).unwrap();
            assert_eq!(h.order(), n);
            assert!(h.row_sums().iter().all(|&s| s == 2 * m as i64));
            assert!(h.col_sums().iter().all(|&s| s == 2 * m as i64));
        }
        assert!(matches!(
            regular_hadamard(5, &store),
            Err(CretanError::MissingFixture(_))
        ));
        assert!(!regular_hadamard_available(7, &store));
        assert!(!regular_hadamard_available(3, &FixtureStore::Empty));
        assert_eq!(menon_fixture_name(5), "100-45-20");
    }

    #[test]
    fn kronecker_kinds() {
        let s = regular_seed();
        let k = kronecker_sign(&s, &s);
        assert_eq!(k.kind(), SignKind::RegularHadamard { m: 2 });
        let one = SignMatrix::new(1, vec![1], SignKind::Hadamard).unwrap();
        assert_eq!(kronecker_sign(&s, &one).entries(), s.entries());
        let w = paley_conference(5).unwrap();
        let ww = kronecker_sign(&w, &w);
        assert_eq!(ww.kind(), SignKind::Weighing { weight: 25 });
        assert!(SignMatrix::new(36, ww.entries().to_vec(), ww.kind()).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SignMatrix::new(2, vec![1, 1, 1, 1], SignKind::Hadamard).is_err());
        assert!(SignMatrix::new(2, vec![1, 1, 1, -1], SignKind::RegularHadamard { m: 1 }).is_err());
        let h = sylvester(2).unwrap();
        assert!(SignMatrix::new(4, h.entries().to_vec(), SignKind::RegularHadamard { m: 1 }).is_err());
    }

    proptest! {
        #[test]
        fn equivalence_preserves_det(ops in proptest::collection::vec((0u8..4, 0usize..16, 0usize..16), 0..12)) {
            let store = FixtureStore::Builtin;
            let start = regular_hadamard(2, &store).unwrap();
            let d0 = start.det();
            let mut m = start.clone();
            for (op, a, b) in ops {
                m = match op {
                    0 => m.swap_rows(a, b),
                    1 => m.swap_cols(a, b),
                    2 => m.negate_row(a),
                    _ => m.negate_col(b),
                };
            }
            let d = m.det();
            prop_assert_eq!(d.clone() * d, d0.clone() * d0);
            let nm = m.normalize();
            prop_assert!(nm.rows()[0].iter().all(|&x| x == 1));
            prop_assert!((0..16).all(|i| nm.get(i, 0) == 1));
            prop_assert!(SignMatrix::new(16, nm.entries().to_vec(), SignKind::Hadamard).is_ok());
        }
    }
}
