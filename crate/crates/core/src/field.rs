//! Arithmetic in GF(p) and GF(p^k).
//!
//! Elements are coefficient vectors over GF(p), lowest degree first. The
//! modulus is the least monic irreducible polynomial of degree `k` when
//! polynomials are ordered by their base-`p` integer encoding (leading
//! coefficients most significant), so every field and every downstream
//! design is reproducible. Elements use the same encoding as their index.

use std::sync::Arc;

use crate::error::{CretanError, Result};

/// Largest field order accepted by [`make_field`].
pub const FIELD_SIZE_CAP: u64 = 1_000_000;

#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    /// Monic, `k + 1` coefficients, lowest first.
    modulus: Vec<u32>,
    primitive: Vec<u32>,
}

pub type Field = Arc<FieldSpec>;

#[derive(Clone, Debug)]
pub struct FieldElem {
    field: Field,
    coeffs: Vec<u32>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|f| n % f == 0)?;
    let mut rest = n;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol by Euler's criterion: 0 if `p | a`, +1 for a nonzero
/// quadratic residue, -1 otherwise. `p` must be an odd prime.
pub fn quadratic_character(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

// Dense polynomials over GF(p), lowest degree first, no trailing zeros.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        super::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    /// Remainder of `a` modulo `m` (`m` nonzero).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
            for (i, &c) in m.iter().enumerate() {
                let sub = (factor as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&acc, m, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or irreducibility test for a monic `f` of degree >= 1.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 0..k / 2 {
            xp = powmod(&xp, p as u64, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn decode(mut index: u64, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let c = (index % p as u64) as u32;
            index /= p as u64;
            c
        })
        .collect()
}

fn encode(coeffs: &[u32], p: u32) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

/// Builds GF(p^k) with the lexicographically least monic irreducible modulus
/// and the least primitive element.
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(CretanError::NotPrime(p));
    }
    if k == 0 {
        return Err(CretanError::Invalid("extension degree must be at least 1".into()));
    }
    let order = p.checked_pow(k).unwrap_or(u64::MAX);
    if order > FIELD_SIZE_CAP {
        return Err(CretanError::SizeCap {
            what: "field order",
            value: order,
            limit: FIELD_SIZE_CAP,
        });
    }
    let p32 = p as u32;
    let tail_count = p.pow(k);
    let modulus = (0..tail_count)
        .map(|t| {
            let mut m = decode(t, p32, k);
            m.push(1);
            m
        })
        .find(|m| k == 1 || poly::is_irreducible(m, p32))
        .expect("an irreducible polynomial of every degree exists");
    let mut spec = FieldSpec {
        p: p32,
        k,
        modulus,
        primitive: vec![],
    };
    let group_order = order - 1;
    let factors = prime_factors(group_order);
    let primitive = (1..order)
        .map(|i| decode(i, p32, k))
        .find(|g| {
            factors.iter().all(|&r| {
                let mut t = poly::powmod(g, group_order / r, &spec.modulus, p32);
                t.resize(k as usize, 0);
                t != one_vec(k)
            })
        })
        .unwrap_or_else(|| one_vec(k));
    spec.primitive = primitive;
    Ok(Arc::new(spec))
}

fn one_vec(k: u32) -> Vec<u32> {
    let mut v = vec![0; k as usize];
    v[0] = 1;
    v
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

/// Field-level constructors; these need the shared handle.
pub trait FieldExt {
    fn zero(&self) -> FieldElem;
    fn one(&self) -> FieldElem;
    fn primitive(&self) -> FieldElem;
    fn elem(&self, coeffs: &[u32]) -> FieldElem;
    /// Element with the given base-`p` index (`0 <= index < order`).
    fn from_index(&self, index: u64) -> FieldElem;
    /// All elements in index order.
    fn elements(&self) -> Vec<FieldElem>;
}

impl FieldExt for Field {
    fn zero(&self) -> FieldElem {
        FieldElem {
            field: self.clone(),
            coeffs: vec![0; self.k as usize],
        }
    }

    fn one(&self) -> FieldElem {
        FieldElem {
            field: self.clone(),
            coeffs: one_vec(self.k),
        }
    }

    fn primitive(&self) -> FieldElem {
        FieldElem {
            field: self.clone(),
            coeffs: self.primitive.clone(),
        }
    }

    fn elem(&self, coeffs: &[u32]) -> FieldElem {
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % self.p).collect();
        let mut r = poly::rem(&c, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        c = r;
        FieldElem {
            field: self.clone(),
            coeffs: c,
        }
    }

    fn from_index(&self, index: u64) -> FieldElem {
        FieldElem {
            field: self.clone(),
            coeffs: decode(index, self.p, self.k),
        }
    }

    fn elements(&self) -> Vec<FieldElem> {
        (0..self.order()).map(|i| self.from_index(i)).collect()
    }
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn index(&self) -> u64 {
        encode(&self.coeffs, self.field.p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == one_vec(self.field.k)
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(CretanError::FieldMismatch)
        }
    }

    fn with(&self, mut coeffs: Vec<u32>) -> FieldElem {
        coeffs.resize(self.field.k as usize, 0);
        FieldElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        let p = self.field.p;
        let c = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(self.with(c))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.field.p;
        self.with(self.coeffs.iter().map(|&a| (p - a) % p).collect())
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        let f = &self.field;
        Ok(self.with(poly::mulmod(&self.coeffs, &other.coeffs, &f.modulus, f.p)))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        let f = &self.field;
        self.with(poly::powmod(&self.coeffs, e, &f.modulus, f.p))
    }

    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(CretanError::ZeroInverse);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// Trace down to a subfield GF(p^e), `e | k`: the sum of `x^(q^i)` for
    /// `q = p^e`, `i < k/e`. The result lies in the subfield.
    pub fn relative_trace(&self, sub_degree: u32) -> Result<FieldElem> {
        let k = self.field.k;
        if sub_degree == 0 || k % sub_degree != 0 {
            return Err(CretanError::Invalid(format!(
                "GF(p^{sub_degree}) is not a subfield of GF(p^{k})"
            )));
        }
        let q = (self.field.p as u64).pow(sub_degree);
        let mut term = self.clone();
        let mut acc = self.clone();
        for _ in 1..k / sub_degree {
            term = term.pow(q);
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Absolute trace to GF(p), returned as an integer in `0..p`.
    pub fn trace_to_prime(&self) -> u32 {
        self.relative_trace(1).expect("1 divides every degree").coeffs[0]
    }

    /// +1 for a nonzero square, -1 for a non-square, 0 for zero (odd `p`).
    pub fn quadratic_character(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.pow((self.field.order() - 1) / 2).is_one() {
            1
        } else {
            -1
        }
    }
}
