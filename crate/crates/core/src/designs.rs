//! Difference sets in finite abelian groups and the symmetric designs
//! developed from them.
//!
//! Every difference set, however it was built, passes through
//! [`validate_difference_set`] before it is returned. That brute-force
//! census of ordered differences is the oracle for the whole crate.

use serde::Serialize;

use crate::error::{CretanError, Result};
use crate::field::{is_prime, make_field, prime_power, FieldExt};
use crate::io::fixture::{FixtureBody, FixtureStore};
use crate::linalg::bareiss_det_i64;
use num_bigint::BigInt;

/// Direct product of cyclic groups `Z_f1 x Z_f2 x ...`. Elements are
/// indexed in mixed radix with the first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupDesc {
    factors: Vec<u64>,
}

impl GroupDesc {
    pub fn cyclic(v: u64) -> Self {
        GroupDesc { factors: vec![v] }
    }

    pub fn product(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(CretanError::Invalid("group factors must be positive".into()));
        }
        Ok(GroupDesc { factors })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn coords(&self, mut index: u64) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % f;
            index /= f;
        }
        out
    }

    pub fn index(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.factors.len() {
            return Err(CretanError::Invalid("coordinate count mismatch".into()));
        }
        let mut idx = 0;
        for (&c, &f) in coords.iter().zip(&self.factors) {
            if c >= f {
                return Err(CretanError::Invalid(format!("coordinate {c} out of range for Z_{f}")));
            }
            idx = idx * f + c;
        }
        Ok(idx)
    }

    /// `a - b` in the group, on element indices.
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let diff: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| (x + f - y) % f)
            .collect();
        self.index(&diff).expect("reduced coordinates are in range")
    }
}

impl std::fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| format!("Z{x}")).collect();
        write!(f, "{}", parts.join("xZ").replace("xZZ", "xZ"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DsSource {
    Qr { q: u64 },
    Biquadratic { p: u64 },
    BiquadraticZero { p: u64 },
    Singer { n: u32, q: u64 },
    Fixture { name: String, source: String },
}

impl DsSource {
    pub fn tag(&self) -> &'static str {
        match self {
            DsSource::Qr { .. } => "qr",
            DsSource::Biquadratic { .. } => "biquadratic",
            DsSource::BiquadraticZero { .. } => "biquadratic+0",
            DsSource::Singer { .. } => "singer",
            DsSource::Fixture { .. } => "fixture",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceSet {
    pub group: GroupDesc,
    /// Sorted element indices.
    pub elements: Vec<u64>,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub source: DsSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub v: u64,
    pub k: u64,
    /// How often each group element (by index) occurs as an ordered difference.
    pub counts: Vec<u64>,
    /// The common count, when every nonzero element occurs equally often.
    pub lambda: Option<u64>,
    pub parameter_identity: bool,
    pub passed: bool,
    pub warnings: Vec<String>,
}

/// Brute-force census of ordered differences `a - b`, `a != b`, over `elements`.
pub fn validate_difference_set(group: &GroupDesc, elements: &[u64]) -> CensusReport {
    let v = group.order();
    let k = elements.len() as u64;
    let mut warnings = Vec::new();
    let mut counts = vec![0u64; v as usize];
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let distinct = sorted.len() == elements.len();
    if !distinct {
        warnings.push("duplicate elements".to_string());
    }
    let in_range = elements.iter().all(|&e| e < v);
    if !in_range {
        warnings.push("element outside the group".to_string());
    }
    if in_range {
        for &a in elements {
            for &b in elements {
                if a != b {
                    counts[group.sub(a, b) as usize] += 1;
                }
            }
        }
    }
    let nonzero = &counts[1.min(counts.len())..];
    let lambda = match nonzero.first() {
        Some(&c) if nonzero.iter().all(|&x| x == c) => Some(c),
        None => Some(0),
        _ => None,
    };
    let parameter_identity = lambda.is_some_and(|l| l * (v - 1) == k * k.saturating_sub(1));
    if k == 0 {
        warnings.push("empty set: census is degenerate".to_string());
    }
    if let Some(l) = lambda {
        if !(v > 2 * k && k > 2 * l) {
            warnings.push(format!("({v},{k},{l}) breaks the v > 2k, k > 2*lambda convention"));
        }
    }
    let passed = k > 0 && distinct && in_range && lambda.is_some() && parameter_identity;
    CensusReport {
        v,
        k,
        counts,
        lambda: if in_range { lambda } else { None },
        parameter_identity,
        passed,
        warnings,
    }
}

impl DifferenceSet {
    /// Validates `elements` by census and wraps them.
    pub fn new(group: GroupDesc, mut elements: Vec<u64>, source: DsSource) -> Result<Self> {
        let report = validate_difference_set(&group, &elements);
        if !report.passed {
            let lambda = report
                .lambda
                .map_or_else(|| "unequal difference counts".to_string(), |l| format!("lambda {l}"));
            return Err(CretanError::CensusFailed(format!(
                "{} elements in {group}: {lambda}{}",
                report.k,
                if report.warnings.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", report.warnings.join("; "))
                }
            )));
        }
        elements.sort_unstable();
        Ok(DifferenceSet {
            v: report.v,
            k: report.k,
            lambda: report.lambda.unwrap_or(0),
            group,
            elements,
            source,
        })
    }

    pub fn params(&self) -> (u64, u64, u64) {
        (self.v, self.k, self.lambda)
    }

    pub fn census(&self) -> CensusReport {
        validate_difference_set(&self.group, &self.elements)
    }
}

/// 0/1 incidence matrix of a symmetric (v, k, lambda) design.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sbibd {
    v: usize,
    k: usize,
    lambda: usize,
    incidence: Vec<u8>,
}

impl Sbibd {
    /// Validates row and column sums and `B B^T = (k - lambda) I + lambda J`.
    pub fn from_incidence(v: usize, k: usize, lambda: usize, incidence: Vec<u8>) -> Result<Self> {
        if incidence.len() != v * v {
            return Err(CretanError::NonSquare);
        }
        if incidence.iter().any(|&x| x > 1) {
            return Err(CretanError::Invalid("incidence entries must be 0 or 1".into()));
        }
        let b = Sbibd {
            v,
            k,
            lambda,
            incidence,
        };
        for i in 0..v {
            let row: usize = (0..v).map(|j| b.get(i, j) as usize).sum();
            let col: usize = (0..v).map(|j| b.get(j, i) as usize).sum();
            if row != k || col != k {
                return Err(CretanError::Invalid(format!("line {i} does not sum to k = {k}")));
            }
        }
        for i in 0..v {
            for j in i + 1..v {
                let dot: usize = (0..v).map(|c| (b.get(i, c) & b.get(j, c)) as usize).sum();
                if dot != lambda {
                    return Err(CretanError::Invalid(format!(
                        "rows {i} and {j} meet in {dot} points, not lambda = {lambda}"
                    )));
                }
            }
        }
        Ok(b)
    }

    pub fn v(&self) -> usize {
        self.v
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn lambda(&self) -> usize {
        self.lambda
    }
    pub fn params(&self) -> (usize, usize, usize) {
        (self.v, self.k, self.lambda)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.incidence[i * self.v + j]
    }

    pub fn incidence(&self) -> &[u8] {
        &self.incidence
    }

    /// Exact `|det B|` by fraction-free elimination.
    pub fn abs_det(&self) -> BigInt {
        let e: Vec<i64> = self.incidence.iter().map(|&x| x as i64).collect();
        let d = bareiss_det_i64(self.v, &e);
        if d < BigInt::from(0) {
            -d
        } else {
            d
        }
    }

    /// `k (k - lambda)^((v-1)/2)`, the value `|det B|` must take.
    /// `k (k - lambda)^((v-1)/2)`; for even `v`, `k - lambda` is a square.
    pub fn expected_abs_det(&self) -> BigInt {
        let n = BigInt::from(self.k - self.lambda);
        let half = n.pow(((self.v - 1) / 2) as u32);
        let base = BigInt::from(self.k) * half;
        if self.v % 2 == 0 {
            base * n.sqrt()
        } else {
            base
        }
    }

    /// Swaps 0 and 1: an SBIBD(v, v-k, v-2k+lambda).
    pub fn complement(&self) -> Sbibd {
        Sbibd {
            v: self.v,
            k: self.v - self.k,
            lambda: self.v + self.lambda - 2 * self.k,
            incidence: self.incidence.iter().map(|&x| 1 - x).collect(),
        }
    }
}

/// Group development: row `g`, column `h` is 1 iff `h - g` lies in the set.
pub fn develop(ds: &DifferenceSet) -> Sbibd {
    let v = ds.v as usize;
    let mut member = vec![false; v];
    for &e in &ds.elements {
        member[e as usize] = true;
    }
    let mut inc = vec![0u8; v * v];
    for g in 0..v {
        for h in 0..v {
            if member[ds.group.sub(h as u64, g as u64) as usize] {
                inc[g * v + h] = 1;
            }
        }
    }
    Sbibd::from_incidence(v, ds.k as usize, ds.lambda as usize, inc)
        .expect("a valid difference set develops into a symmetric design")
}

pub fn complement(b: &Sbibd) -> Sbibd {
    b.complement()
}

/// Nonzero squares of GF(q), `q` a prime power `= 3 (mod 4)`: a
/// (q, (q-1)/2, (q-3)/4) difference set in the additive group of GF(q).
pub fn qr_difference_set(q: u64) -> Result<DifferenceSet> {
    let (p, e) = prime_power(q).ok_or(CretanError::NotPrimePower(q))?;
    if q > 1000 {
        return Err(CretanError::SizeCap {
            what: "q",
            value: q,
            limit: 1000,
        });
    }
    if q % 4 != 3 {
        return Err(CretanError::BadCongruence {
            value: q,
            residue: 3,
            modulus: 4,
        });
    }
    let f = make_field(p, e)?;
    let mut squares: Vec<u64> = f
        .elements()
        .iter()
        .skip(1)
        .map(|x| x.try_mul(x).expect("same field").index())
        .collect();
    squares.sort_unstable();
    squares.dedup();
    let group = GroupDesc::product(vec![p; e as usize])?;
    DifferenceSet::new(group, squares, DsSource::Qr { q })
}

/// Fourth powers modulo a prime `p = 1 (mod 4)`, optionally with 0 adjoined.
/// Only returned when the difference census balances.
pub fn biquadratic_difference_set(p: u64, with_zero: bool) -> Result<DifferenceSet> {
    if !is_prime(p) {
        return Err(CretanError::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(CretanError::BadCongruence {
            value: p,
            residue: 1,
            modulus: 4,
        });
    }
    let mut set: Vec<u64> = (1..p).map(|x| crate::field::pow_mod(x, 4, p)).collect();
    set.sort_unstable();
    set.dedup();
    if with_zero {
        set.insert(0, 0);
    }
    let source = if with_zero {
        DsSource::BiquadraticZero { p }
    } else {
        DsSource::Biquadratic { p }
    };
    DifferenceSet::new(GroupDesc::cyclic(p), set, source)
}

/// Singer difference set of PG(n, q): exponents `i mod v` for which the
/// trace from GF(q^(n+1)) to GF(q) of `g^i` vanishes.
pub fn singer_difference_set(n: u32, q: u64) -> Result<DifferenceSet> {
    if n < 2 {
        return Err(CretanError::Invalid("Singer sets need n >= 2".into()));
    }
    let (p, e) = prime_power(q).ok_or(CretanError::NotPrimePower(q))?;
    let size = q.checked_pow(n + 1).unwrap_or(u64::MAX);
    if size > crate::field::FIELD_SIZE_CAP {
        return Err(CretanError::SizeCap {
            what: "q^(n+1)",
            value: size,
            limit: crate::field::FIELD_SIZE_CAP,
        });
    }
    let f = make_field(p, e * (n + 1))?;
    let v = (size - 1) / (q - 1);
    let g = f.primitive();
    let mut x = f.one();
    let mut set = Vec::new();
    for i in 0..v {
        if x.relative_trace(e)?.is_zero() {
            set.push(i);
        }
        x = x.try_mul(&g)?;
    }
    DifferenceSet::new(GroupDesc::cyclic(v), set, DsSource::Singer { n, q })
}

/// Loads and census-validates a difference-set fixture.
pub fn load_fixture(store: &FixtureStore, name: &str) -> Result<DifferenceSet> {
    let file = store
        .get(name)?
        .ok_or_else(|| CretanError::MissingFixture(name.to_string()))?;
    let FixtureBody::DifferenceSet {
        group,
        params,
        elements,
    } = &file.body
    else {
        return Err(CretanError::Invalid(format!(
            "fixture `{name}` is not a difference set"
        )));
    };
    let group = GroupDesc::product(group.clone())?;
    let elements = elements.iter().map(|c| group.index(c)).collect::<Result<Vec<_>>>()?;
    let ds = DifferenceSet::new(
        group,
        elements,
        DsSource::Fixture {
            name: name.to_string(),
            source: file.source.clone(),
        },
    )?;
    if ds.params() != *params {
        return Err(CretanError::CensusFailed(format!(
            "fixture `{name}` declares {:?} but the census gives {:?}",
            params,
            ds.params()
        )));
    }
    Ok(ds)
}

/// How a catalogued difference set is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DesignRecipe {
    Singer { n: u32, q: u64 },
    Biquadratic { p: u64, with_zero: bool },
    Fixture(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub recipe: DesignRecipe,
    pub label: &'static str,
}

/// The difference-set designs of orders 4t+1 below 200 that seed the
/// two-level constructions.
pub const REGISTRY: [RegistryEntry; 12] = [
    RegistryEntry {
        v: 13,
        k: 4,
        lambda: 1,
        recipe: DesignRecipe::Singer { n: 2, q: 3 },
        label: "PG(2,3)",
    },
    RegistryEntry {
        v: 21,
        k: 5,
        lambda: 1,
        recipe: DesignRecipe::Singer { n: 2, q: 4 },
        label: "PG(2,4)",
    },
    RegistryEntry {
        v: 37,
        k: 9,
        lambda: 2,
        recipe: DesignRecipe::Biquadratic {
            p: 37,
            with_zero: false,
        },
        label: "biquadratic residues",
    },
    RegistryEntry {
        v: 45,
        k: 12,
        lambda: 3,
        recipe: DesignRecipe::Fixture("45-12-3"),
        label: "fixture 45-12-3",
    },
    RegistryEntry {
        v: 57,
        k: 8,
        lambda: 1,
        recipe: DesignRecipe::Singer { n: 2, q: 7 },
        label: "PG(2,7)",
    },
    RegistryEntry {
        v: 73,
        k: 9,
        lambda: 1,
        recipe: DesignRecipe::Singer { n: 2, q: 8 },
        label: "PG(2,8)",
    },
    RegistryEntry {
        v: 85,
        k: 21,
        lambda: 5,
        recipe: DesignRecipe::Singer { n: 3, q: 4 },
        label: "PG(3,4)",
    },
    RegistryEntry {
        v: 101,
        k: 25,
        lambda: 6,
        recipe: DesignRecipe::Biquadratic {
            p: 101,
            with_zero: false,
        },
        label: "biquadratic residues",
    },
    RegistryEntry {
        v: 109,
        k: 28,
        lambda: 7,
        recipe: DesignRecipe::Biquadratic {
            p: 109,
            with_zero: true,
        },
        label: "biquadratic residues and 0",
    },
    RegistryEntry {
        v: 121,
        k: 40,
        lambda: 13,
        recipe: DesignRecipe::Singer { n: 4, q: 3 },
        label: "PG(4,3)",
    },
    RegistryEntry {
        v: 133,
        k: 33,
        lambda: 8,
        recipe: DesignRecipe::Fixture("133-33-8"),
        label: "fixture 133-33-8",
    },
    RegistryEntry {
        v: 197,
        k: 49,
        lambda: 12,
        recipe: DesignRecipe::Biquadratic {
            p: 197,
            with_zero: false,
        },
        label: "biquadratic residues",
    },
];

pub fn registry_entry(v: u64) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| e.v == v)
}

impl RegistryEntry {
    pub fn fixture_name(&self) -> Option<&'static str> {
        match self.recipe {
            DesignRecipe::Fixture(name) => Some(name),
            _ => None,
        }
    }

    pub fn available(&self, store: &FixtureStore) -> bool {
        self.fixture_name().is_none_or(|n| store.has(n))
    }

    pub fn build(&self, store: &FixtureStore) -> Result<DifferenceSet> {
        let ds = match self.recipe {
            DesignRecipe::Singer { n, q } => singer_difference_set(n, q)?,
            DesignRecipe::Biquadratic { p, with_zero } => biquadratic_difference_set(p, with_zero)?,
            DesignRecipe::Fixture(name) => load_fixture(store, name)?,
        };
        if ds.params() != (self.v, self.k, self.lambda) {
            return Err(CretanError::CensusFailed(format!(
                "{} produced {:?}",
                self.label,
                ds.params()
            )));
        }
        Ok(ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_sets() {
        let d = qr_difference_set(7).unwrap();
        assert_eq!(d.elements, vec![1, 2, 4]);
        assert_eq!(d.params(), (7, 3, 1));
        assert_eq!(qr_difference_set(11).unwrap().params(), (11, 5, 2));
        assert_eq!(qr_difference_set(27).unwrap().params(), (27, 13, 6));
        assert!(matches!(qr_difference_set(5), Err(CretanError::BadCongruence { .. })));
        assert_eq!(qr_difference_set(15), Err(CretanError::NotPrimePower(15)));
    }

    #[test]
    fn biquadratic_sets() {
        assert_eq!(biquadratic_difference_set(37, false).unwrap().params(), (37, 9, 2));
        let d = biquadratic_difference_set(109, true).unwrap();
        assert_eq!(d.params(), (109, 28, 7));
        assert!(d.elements.contains(&0));
        assert!(matches!(
            biquadratic_difference_set(13, false),
            Err(CretanError::CensusFailed(_))
        ));
        assert!(matches!(
            biquadratic_difference_set(7, false),
            Err(CretanError::BadCongruence { .. })
        ));
    }

    #[test]
    fn singer_sets() {
        assert_eq!(singer_difference_set(2, 3).unwrap().params(), (13, 4, 1));
        assert_eq!(singer_difference_set(2, 4).unwrap().params(), (21, 5, 1));
        assert_eq!(singer_difference_set(2, 2).unwrap().params(), (7, 3, 1));
        assert!(matches!(
            singer_difference_set(2, 101),
            Err(CretanError::SizeCap { .. })
        ));
        assert!(singer_difference_set(1, 3).is_err());
    }

    #[test]
    fn census_examples() {
        let z7 = GroupDesc::cyclic(7);
        let ok = validate_difference_set(&z7, &[1, 2, 4]);
        assert!(ok.passed);
        assert_eq!(&ok.counts[1..], &[1, 1, 1, 1, 1, 1]);
        let bad = validate_difference_set(&z7, &[1, 2, 3]);
        assert!(!bad.passed);
        assert_eq!(bad.counts[1], 2);
        assert_eq!(bad.counts[2], 1);
        let empty = validate_difference_set(&z7, &[]);
        assert!(!empty.passed);
        assert!(empty.warnings.iter().any(|w| w.contains("empty")));
        assert!(!validate_difference_set(&z7, &[1, 1, 2]).passed);
        assert!(!validate_difference_set(&z7, &[1, 9]).passed);
    }

    #[test]
    fn develop_seven() {
        let b = develop(&qr_difference_set(7).unwrap());
        let first: Vec<u8> = (0..7).map(|j| b.get(0, j)).collect();
        assert_eq!(first, vec![0, 1, 1, 0, 1, 0, 0]);
        let c = b.complement();
        assert_eq!(c.params(), (7, 4, 2));
        assert_eq!(c.complement(), b);
        assert!(Sbibd::from_incidence(7, 4, 2, c.incidence().to_vec()).is_ok());
    }

    #[test]
    fn determinant_identity_thirteen() {
        let b = develop(&singer_difference_set(2, 3).unwrap());
        assert_eq!(b.abs_det(), BigInt::from(2916));
        assert_eq!(b.expected_abs_det(), BigInt::from(2916));
    }

    #[test]
    fn complement_of_biquadratic() {
        let b = develop(&biquadratic_difference_set(37, false).unwrap());
        assert_eq!(b.complement().params(), (37, 28, 21));
    }

    #[test]
    fn fixtures_load() {
        let store = FixtureStore::Builtin;
        assert_eq!(load_fixture(&store, "45-12-3").unwrap().params(), (45, 12, 3));
        assert_eq!(load_fixture(&store, "133-33-8").unwrap().params(), (133, 33, 8));
        assert_eq!(load_fixture(&store, "36-15-6").unwrap().params(), (36, 15, 6));
        assert_eq!(
            load_fixture(&FixtureStore::Empty, "45-12-3"),
            Err(CretanError::MissingFixture("45-12-3".into()))
        );
    }

    #[test]
    fn tampered_fixture_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let text = FixtureStore::Builtin.text("45-12-3").unwrap().unwrap();
        std::fs::write(dir.path().join("45-12-3.fix"), text.replace("2 2 2\n", "2 2 1\n")).unwrap();
        let store = FixtureStore::from_dir(dir.path());
        assert!(matches!(
            load_fixture(&store, "45-12-3"),
            Err(CretanError::CensusFailed(_))
        ));
    }

    #[test]
    fn product_group_indexing() {
        let g = GroupDesc::product(vec![3, 3, 5]).unwrap();
        assert_eq!(g.order(), 45);
        for i in 0..45 {
            assert_eq!(g.index(&g.coords(i)).unwrap(), i);
            assert_eq!(g.sub(i, i), 0);
        }
        assert_eq!(g.to_string(), "Z3xZ3xZ5");
    }
}
