//! Exact arithmetic over the rationals and real quadratic fields Q(sqrt d).
//!
//! A [`Scalar`] is either an exact number `(p + q*sqrt(d)) / r` with
//! arbitrary-precision integers, or an explicitly flagged `f64`. Exact values
//! from different quadratic fields cannot be combined; callers demote to
//! float when that happens. Any float operand poisons the result to float.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CretanError, Result};

/// Absolute tolerance for float-mode verification (Gram residuals).
pub const VERIFY_TOL: f64 = 1e-9;
/// Absolute tolerance for float root refinement and modulus checks.
pub const ROOT_TOL: f64 = 1e-12;

/// Canonical `(p + q*sqrt(d)) / r`: `r > 0`, `gcd(p, q, r) = 1`, `d`
/// square-free and not 1, and `q = 0` exactly when `d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: u64,
}

impl QuadNum {
    fn new(p: BigInt, q: BigInt, r: BigInt, d: u64) -> Result<Self> {
        if r.is_zero() {
            return Err(CretanError::DivisionByZero);
        }
        let mut x = QuadNum { p, q, r, d };
        x.canonicalize();
        Ok(x)
    }

    fn canonicalize(&mut self) {
        if self.r.is_negative() {
            self.p = -&self.p;
            self.q = -&self.q;
            self.r = -&self.r;
        }
        if self.d == 0 || self.q.is_zero() {
            self.q = BigInt::zero();
            self.d = 0;
        } else {
            let (root, free) = squarefree_split(self.d);
            if root != 1 {
                self.q = &self.q * BigInt::from(root);
            }
            if free == 1 {
                self.p = &self.p + &self.q;
                self.q = BigInt::zero();
                self.d = 0;
            } else {
                self.d = free;
            }
        }
        let g = self.p.gcd(&self.q).gcd(&self.r);
        if !g.is_zero() && !g.is_one() {
            self.p = &self.p / &g;
            self.q = &self.q / &g;
            self.r = &self.r / &g;
        }
        if self.p.is_zero() && self.q.is_zero() {
            self.r = BigInt::one();
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Sign of `p + q*sqrt(d)`, decided without rounding.
    fn numerator_sign(&self) -> Ordering {
        let sp = self.p.sign();
        let sq = self.q.sign();
        use num_bigint::Sign::*;
        match (sp, sq) {
            (NoSign, NoSign) => Ordering::Equal,
            (_, NoSign) => sign_to_ord(sp),
            (NoSign, _) => sign_to_ord(sq),
            (a, b) if a == b => sign_to_ord(a),
            _ => {
                let pp = &self.p * &self.p;
                let qqd = &self.q * &self.q * BigInt::from(self.d);
                if pp > qqd {
                    sign_to_ord(sp)
                } else {
                    sign_to_ord(sq)
                }
            }
        }
    }

    fn to_f64(&self) -> f64 {
        let p = big_to_f64(&self.p);
        let q = big_to_f64(&self.q);
        let r = big_to_f64(&self.r);
        (p + q * (self.d as f64).sqrt()) / r
    }
}

fn sign_to_ord(s: num_bigint::Sign) -> Ordering {
    match s {
        num_bigint::Sign::Minus => Ordering::Less,
        num_bigint::Sign::NoSign => Ordering::Equal,
        num_bigint::Sign::Plus => Ordering::Greater,
    }
}

/// Converts a big integer to the nearest double, saturating to infinity.
pub fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Splits `n` into `(s, f)` with `n = s^2 * f` and `f` square-free.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    if n == 0 {
        return (1, 0);
    }
    let mut root = 1u64;
    let mut rest = n;
    let mut f = 2u64;
    while f.saturating_mul(f) <= rest {
        while rest % (f * f) == 0 {
            rest /= f * f;
            root *= f;
        }
        f += 1;
    }
    (root, rest)
}

/// An exact quadratic-field number or a flagged double.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(QuadNum),
    Float(f64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::int(0)
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(QuadNum {
            p: BigInt::from(n),
            q: BigInt::zero(),
            r: BigInt::one(),
            d: 0,
        })
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Exact(QuadNum {
            p: n,
            q: BigInt::zero(),
            r: BigInt::one(),
            d: 0,
        })
    }

    pub fn rational(num: i64, den: i64) -> Result<Self> {
        Self::quad(num.into(), 0.into(), den.into(), 0)
    }

    /// `(p + q*sqrt(d)) / r`, canonicalized.
    pub fn quad(p: BigInt, q: BigInt, r: BigInt, d: u64) -> Result<Self> {
        QuadNum::new(p, q, r, d).map(Scalar::Exact)
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Scalar::Float(_))
    }

    pub fn as_exact(&self) -> Option<&QuadNum> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Exact(q) if q.is_rational())
    }

    /// Radicand of an exact irrational value, `None` for rationals and floats.
    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Exact(q) if q.d != 0 => Some(q.d),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn demote(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Scalar::Exact(q) if q.p.is_zero() && q.q.is_zero())
    }

    /// Zero test: exact for exact values, `|x| <= tol` for floats.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(_) => self.is_exact_zero(),
            Scalar::Float(x) => x.abs() <= tol,
        }
    }

    /// Conjugate `q -> -q`. Identity on rationals and floats.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(QuadNum {
                p: x.p.clone(),
                q: -&x.q,
                r: x.r.clone(),
                d: x.d,
            }),
            Scalar::Float(x) => Scalar::Float(*x),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact sign for exact values; float sign otherwise (zero for `0.0`).
    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Exact(q) => q.numerator_sign(),
            Scalar::Float(x) => x.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    fn common_radicand(a: &QuadNum, b: &QuadNum) -> Result<u64> {
        match (a.d, b.d) {
            (0, d) | (d, 0) => Ok(d),
            (d1, d2) if d1 == d2 => Ok(d1),
            (d1, d2) => Err(CretanError::IncompatibleRadicands(d1, d2)),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let d = Self::common_radicand(a, b)?;
                Scalar::quad(&a.p * &b.r + &b.p * &a.r, &a.q * &b.r + &b.q * &a.r, &a.r * &b.r, d)
            }
            _ => Ok(Scalar::Float(self.to_f64() + other.to_f64())),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other.clone())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let d = Self::common_radicand(a, b)?;
                let dd = BigInt::from(d);
                Scalar::quad(
                    &a.p * &b.p + &a.q * &b.q * dd,
                    &a.p * &b.q + &a.q * &b.p,
                    &a.r * &b.r,
                    d,
                )
            }
            _ => Ok(Scalar::Float(self.to_f64() * other.to_f64())),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.p.is_zero() && b.q.is_zero() {
                    return Err(CretanError::DivisionByZero);
                }
                let d = Self::common_radicand(a, b)?;
                // 1/b = r_b (p_b - q_b sqrt d) / (p_b^2 - q_b^2 d)
                let norm = &b.p * &b.p - &b.q * &b.q * BigInt::from(d);
                let inv = Scalar::quad(&b.r * &b.p, -(&b.r * &b.q), norm, d)?;
                self.try_mul(&inv)
            }
            _ => {
                let y = other.to_f64();
                if y == 0.0 {
                    return Err(CretanError::DivisionByZero);
                }
                Ok(Scalar::Float(self.to_f64() / y))
            }
        }
    }

    pub fn square(&self) -> Scalar {
        self.try_mul(self).expect("a value shares its own radicand")
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.try_mul(self).expect("powers share the base radicand");
        }
        acc
    }

    /// `x * y`, demoting both operands to float if their radicands differ.
    pub fn mul_or_demote(&self, other: &Scalar) -> Scalar {
        self.try_mul(other)
            .unwrap_or_else(|_| Scalar::Float(self.to_f64() * other.to_f64()))
    }

    pub fn add_or_demote(&self, other: &Scalar) -> Scalar {
        self.try_add(other)
            .unwrap_or_else(|_| Scalar::Float(self.to_f64() + other.to_f64()))
    }

    /// Exact square root of a non-negative rational, landing in Q(sqrt d).
    /// Returns `None` for negative, irrational or float input.
    pub fn sqrt_rational(&self) -> Option<Scalar> {
        let x = self.as_exact()?;
        if !x.is_rational() || x.p.is_negative() {
            return None;
        }
        // sqrt(p/r) = sqrt(p*r)/r
        let pr = &x.p * &x.r;
        let (root, free) = big_squarefree_split(&pr)?;
        Scalar::quad(BigInt::zero(), root, x.r.clone(), free).ok()
    }

    /// Square root that stays exact when possible and falls back to float.
    pub fn sqrt_or_float(&self) -> Scalar {
        self.sqrt_rational()
            .unwrap_or_else(|| Scalar::Float(self.to_f64().max(0.0).sqrt()))
    }

    /// `|x| <= 1`, decided exactly for exact values.
    pub fn abs_le_one(&self) -> bool {
        match self {
            Scalar::Exact(_) => {
                let one = Scalar::one();
                let upper = one.try_sub(self).expect("rational minus anything");
                let lower = one.try_add(self).expect("rational plus anything");
                upper.signum() != Ordering::Less && lower.signum() != Ordering::Less
            }
            Scalar::Float(x) => x.abs() <= 1.0 + ROOT_TOL,
        }
    }

    /// Exact `|x| == 1` for exact values; within `ROOT_TOL` for floats.
    pub fn is_unit_modulus(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_rational() && q.p.abs() == q.r,
            Scalar::Float(x) => (x.abs() - 1.0).abs() <= ROOT_TOL,
        }
    }

    /// Total order: exact when both values share a field, float otherwise.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        if let Ok(diff) = self.try_sub(other) {
            if diff.is_exact() {
                return diff.signum();
            }
        }
        self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal)
    }
}

fn big_squarefree_split(n: &BigInt) -> Option<(BigInt, u64)> {
    if n.is_zero() {
        return Some((BigInt::zero(), 0));
    }
    let v = n.to_u64()?;
    let (root, free) = squarefree_split(v);
    Some((BigInt::from(root), free))
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(QuadNum {
                p: -x.p,
                q: -x.q,
                r: x.r,
                d: x.d,
            }),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

/// Text grammar:
///
/// ```text
/// INT   := ['-']digits
/// RAT   := INT '/' digits
/// QUAD  := '(' INT ('+'|'-') digits '*sqrt(' digits ')' ')/' digits
/// FLOAT := 'f' decimal-literal
/// ```
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Float(x) => write!(f, "f{x}"),
            Scalar::Exact(x) if x.q.is_zero() => {
                if x.r.is_one() {
                    write!(f, "{}", x.p)
                } else {
                    write!(f, "{}/{}", x.p, x.r)
                }
            }
            Scalar::Exact(x) => {
                let sign = if x.q.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))/{}", x.p, sign, x.q.abs(), x.d, x.r)
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = CretanError;

    fn from_str(s: &str) -> Result<Scalar> {
        parse_scalar(s).map_err(|(column, message)| CretanError::Parse {
            line: 1,
            column,
            message,
        })
    }
}

/// Parses one scalar token; errors carry a 1-based column within `s`.
pub(crate) fn parse_scalar(s: &str) -> std::result::Result<Scalar, (usize, String)> {
    if let Some(rest) = s.strip_prefix('f') {
        return rest
            .parse::<f64>()
            .map(Scalar::Float)
            .map_err(|e| (2, format!("bad float literal `{rest}`: {e}")));
    }
    if let Some(rest) = s.strip_prefix('(') {
        return parse_quad(rest).map_err(|(c, m)| (c + 1, m));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let p = parse_int(num).map_err(|m| (1, m))?;
    let r = match den {
        Some(d) => parse_digits(d).map_err(|m| (num.len() + 2, m))?,
        None => BigInt::one(),
    };
    if r.is_zero() {
        return Err((num.len() + 2, "zero denominator".into()));
    }
    Scalar::quad(p, BigInt::zero(), r, 0).map_err(|e| (1, e.to_string()))
}

fn parse_quad(s: &str) -> std::result::Result<Scalar, (usize, String)> {
    // s is everything after '('
    let bytes = s.as_bytes();
    let mut i = usize::from(bytes.first() == Some(&b'-'));
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let p = parse_int(&s[..i]).map_err(|m| (1, m))?;
    let neg = match bytes.get(i) {
        Some(b'+') => false,
        Some(b'-') => true,
        _ => return Err((i + 1, "expected '+' or '-'".into())),
    };
    let rest = &s[i + 1..];
    let star = rest.find("*sqrt(").ok_or((i + 2, "expected '*sqrt('".to_string()))?;
    let mut q = parse_digits(&rest[..star]).map_err(|m| (i + 2, m))?;
    if neg {
        q = -q;
    }
    let after = &rest[star + 6..];
    let close = after.find(")").ok_or((i + star + 8, "expected ')'".to_string()))?;
    let d_col = i + star + 8;
    let d = after[..close]
        .parse::<u64>()
        .map_err(|e| (d_col, format!("bad radicand: {e}")))?;
    let tail = &after[close + 1..];
    let den = tail
        .strip_prefix(")/")
        .ok_or((d_col + close + 1, "expected ')/'".to_string()))?;
    let r = parse_digits(den).map_err(|m| (d_col + close + 3, m))?;
    if r.is_zero() {
        return Err((d_col + close + 3, "zero denominator".into()));
    }
    Scalar::quad(p, q, r, d).map_err(|e| (1, e.to_string()))
}

fn parse_int(s: &str) -> std::result::Result<BigInt, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let v = parse_digits(digits)?;
    Ok(if s.starts_with('-') { -v } else { v })
}

fn parse_digits(s: &str) -> std::result::Result<BigInt, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected digits, found `{s}`"));
    }
    BigInt::from_str(s).map_err(|e| e.to_string())
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Real roots of `c2*b^2 + c1*b + c0 = 0`, ascending.
///
/// Rational coefficients give exact roots in Q(sqrt disc); float
/// coefficients give float roots. `c2 = 0` degenerates to the linear case.
pub fn solve_quadratic(c0: &Scalar, c1: &Scalar, c2: &Scalar) -> Result<Vec<Scalar>> {
    if c0.is_exact_zero() && c1.is_exact_zero() && c2.is_exact_zero() {
        return Err(CretanError::AllZeroCoefficients);
    }
    let exact = [c0, c1, c2].iter().all(|c| c.is_rational());
    if !exact {
        return Ok(solve_quadratic_f64(c0.to_f64(), c1.to_f64(), c2.to_f64())
            .into_iter()
            .map(Scalar::Float)
            .collect());
    }
    if c2.is_exact_zero() {
        if c1.is_exact_zero() {
            return Ok(Vec::new());
        }
        return Ok(vec![(-c0.clone()).try_div(c1)?]);
    }
    let four = Scalar::int(4);
    let disc = c1.square().try_sub(&four.try_mul(c0)?.try_mul(c2)?)?;
    let two_a = Scalar::int(2).try_mul(c2)?;
    let minus_b = -c1.clone();
    let mut roots = match disc.signum() {
        Ordering::Less => Vec::new(),
        Ordering::Equal => vec![minus_b.try_div(&two_a)?],
        Ordering::Greater => {
            let root = disc
                .sqrt_rational()
                .ok_or_else(|| CretanError::Invalid("discriminant too large for exact square root".into()))?;
            vec![
                minus_b.try_sub(&root)?.try_div(&two_a)?,
                minus_b.try_add(&root)?.try_div(&two_a)?,
            ]
        }
    };
    roots.sort_by(|a, b| a.cmp_value(b));
    Ok(roots)
}

fn solve_quadratic_f64(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    if c2 == 0.0 {
        return if c1 == 0.0 { vec![] } else { vec![-c0 / c1] };
    }
    let disc = c1 * c1 - 4.0 * c0 * c2;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    // stable form
    let t = -0.5 * (c1 + c1.signum() * sq);
    let mut roots = if t == 0.0 { vec![0.0] } else { vec![t / c2, c0 / t] };
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    roots.dedup();
    roots
}

/// Univariate polynomial with [`Scalar`] coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPoly {
    coeffs: Vec<Scalar>,
}

impl ScalarPoly {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let mut p = ScalarPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero_within(ROOT_TOL)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn try_add(&self, other: &ScalarPoly) -> Result<ScalarPoly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Scalar::zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = other.coeffs.get(i).unwrap_or(&zero);
            out.push(a.try_add(b)?);
        }
        Ok(ScalarPoly::new(out))
    }

    pub fn try_sub(&self, other: &ScalarPoly) -> Result<ScalarPoly> {
        self.try_add(&other.scale(&Scalar::int(-1))?)
    }

    pub fn try_mul(&self, other: &ScalarPoly) -> Result<ScalarPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(ScalarPoly::new(vec![]));
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Ok(ScalarPoly::new(out))
    }

    pub fn scale(&self, c: &Scalar) -> Result<ScalarPoly> {
        let coeffs = self.coeffs.iter().map(|a| a.try_mul(c)).collect::<Result<Vec<_>>>()?;
        Ok(ScalarPoly::new(coeffs))
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(x)?.try_add(c)?;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Real roots in `[lo, hi]` located by sign changes on a uniform grid and
    /// refined by bisection until `|p(x)| < ROOT_TOL` or the bracket collapses.
    /// Grid points where the polynomial vanishes are reported directly.
    pub fn roots_by_bisection(&self, lo: f64, hi: f64, grid: usize) -> Vec<f64> {
        let mut roots: Vec<f64> = Vec::new();
        if self.is_zero() || grid == 0 {
            return roots;
        }
        let step = (hi - lo) / grid as f64;
        let xs: Vec<f64> = (0..=grid).map(|i| lo + step * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval_f64(x)).collect();
        for i in 0..=grid {
            if ys[i] == 0.0 {
                roots.push(xs[i]);
            }
            if i < grid && ys[i] != 0.0 && ys[i + 1] != 0.0 && (ys[i] < 0.0) != (ys[i + 1] < 0.0) {
                let (mut a, mut b, mut fa) = (xs[i], xs[i + 1], ys[i]);
                let mut mid = 0.5 * (a + b);
                for _ in 0..200 {
                    mid = 0.5 * (a + b);
                    let fm = self.eval_f64(mid);
                    if fm.abs() < ROOT_TOL || (b - a) < f64::EPSILON * 4.0 {
                        break;
                    }
                    if (fm < 0.0) == (fa < 0.0) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                roots.push(mid);
            }
        }
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, qq: i64, r: i64, d: u64) -> Scalar {
        Scalar::quad(p.into(), qq.into(), r.into(), d).unwrap()
    }

    #[test]
    fn conjugate_pair_norm() {
        let a = q(3, 1, 6, 3);
        let b = q(3, -1, 6, 3);
        assert_eq!(a.try_mul(&b).unwrap(), Scalar::rational(1, 6).unwrap());
    }

    #[test]
    fn basic_family_radius_at_nine() {
        // 1 + 4(n-1)/(n-2)^2 at n = 9
        let frac = Scalar::rational(4 * 8, 49).unwrap();
        let omega = Scalar::one().try_add(&frac).unwrap();
        assert_eq!(omega, Scalar::rational(81, 49).unwrap());
        assert_eq!(omega.to_string(), "81/49");
    }

    #[test]
    fn quadratic_value_as_float() {
        let x = q(14, 3, 2, 3);
        assert!((x.to_f64() - (7.0 + 1.5 * 3f64.sqrt())).abs() < 1e-15);
        assert!((x.demote().to_f64() - 9.598076211353316).abs() < 1e-12);
    }

    #[test]
    fn canonical_form() {
        // (2 + 2 sqrt 12)/4 = (1 + 2 sqrt 3)/2
        let x = q(2, 2, 4, 12);
        let e = x.as_exact().unwrap();
        assert_eq!(
            (e.p().clone(), e.q().clone(), e.r().clone(), e.d()),
            (1.into(), 2.into(), 2.into(), 3)
        );
        // sqrt 4 folds into the rational part
        assert!(q(1, 1, 1, 4).is_rational());
        assert_eq!(q(1, 1, 1, 4), Scalar::int(3));
        // negative denominator
        assert_eq!(q(1, 0, -2, 0).to_string(), "-1/2");
        assert_eq!(q(0, 5, 1, 0), Scalar::zero());
    }

    #[test]
    fn division_and_errors() {
        let a = q(1, 1, 1, 2);
        let inv = Scalar::one().try_div(&a).unwrap();
        assert_eq!(inv, q(-1, 1, 1, 2));
        assert_eq!(a.try_mul(&inv).unwrap(), Scalar::one());
        assert_eq!(Scalar::one().try_div(&Scalar::zero()), Err(CretanError::DivisionByZero));
        assert_eq!(
            q(0, 1, 1, 2).try_add(&q(0, 1, 1, 3)),
            Err(CretanError::IncompatibleRadicands(2, 3))
        );
        let poisoned = Scalar::float(0.5).try_add(&q(0, 1, 1, 3)).unwrap();
        assert!(poisoned.is_float());
    }

    #[test]
    fn abs_le_one_examples() {
        assert!((-q(3, 1, 6, 3)).abs_le_one());
        assert!(!Scalar::int(-2).abs_le_one());
        assert!(Scalar::one().abs_le_one());
        assert!(Scalar::int(-1).abs_le_one());
        assert!(!q(1, 1, 2, 2).abs_le_one()); // 1.207
        assert!(Scalar::float(1.0 + 1e-13).abs_le_one());
    }

    #[test]
    fn quadratic_solver_examples() {
        let r = solve_quadratic(&Scalar::int(1), &Scalar::int(6), &Scalar::int(6)).unwrap();
        assert_eq!(r, vec![q(-3, -1, 6, 3), q(-3, 1, 6, 3)]);
        let r = solve_quadratic(&Scalar::int(3), &Scalar::int(18), &Scalar::int(24)).unwrap();
        assert_eq!(
            r,
            vec![Scalar::rational(-1, 2).unwrap(), Scalar::rational(-1, 4).unwrap()]
        );
        // degenerate: SBIBD(3,2,1) gives 1 + 2b = 0
        let r = solve_quadratic(&Scalar::int(1), &Scalar::int(2), &Scalar::int(0)).unwrap();
        assert_eq!(r, vec![Scalar::rational(-1, 2).unwrap()]);
        assert!(solve_quadratic(&Scalar::int(1), &Scalar::int(0), &Scalar::int(1))
            .unwrap()
            .is_empty());
        assert_eq!(
            solve_quadratic(&Scalar::zero(), &Scalar::zero(), &Scalar::zero()),
            Err(CretanError::AllZeroCoefficients)
        );
        let r = solve_quadratic(&Scalar::int(1), &Scalar::int(-2), &Scalar::int(1)).unwrap();
        assert_eq!(r, vec![Scalar::one()]);
    }

    #[test]
    fn text_grammar() {
        for s in [
            "0",
            "-7",
            "81/49",
            "-1/2",
            "(-3-1*sqrt(3))/6",
            "(0+1*sqrt(2))/2",
            "(14+3*sqrt(3))/2",
        ] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        let f: Scalar = "f-0.125".parse().unwrap();
        assert_eq!(f, Scalar::float(-0.125));
        assert_eq!(f.to_string(), "f-0.125");
        for bad in ["", "1/", "(1+sqrt(2))/2", "(1+2*sqrt(2)/2", "f", "x"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad}");
        }
        assert!(matches!("1/0".parse::<Scalar>(), Err(CretanError::Parse { .. })));
    }

    #[test]
    fn exact_sqrt_of_rationals() {
        assert_eq!(
            Scalar::rational(9, 4).unwrap().sqrt_rational().unwrap(),
            Scalar::rational(3, 2).unwrap()
        );
        assert_eq!(Scalar::rational(1, 2).unwrap().sqrt_rational().unwrap(), q(0, 1, 2, 2));
        assert!(Scalar::int(-1).sqrt_rational().is_none());
    }

    #[test]
    fn bisection_finds_roots() {
        // (x - 0.3)(x + 0.7) = x^2 + 0.4x - 0.21
        let p = ScalarPoly::new(vec![
            Scalar::rational(-21, 100).unwrap(),
            Scalar::rational(2, 5).unwrap(),
            Scalar::one(),
        ]);
        let roots = p.roots_by_bisection(-1.0, 1.0, 1000);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 0.7).abs() < 1e-9 && (roots[1] - 0.3).abs() < 1e-9);
        assert!(ScalarPoly::new(vec![Scalar::zero(), Scalar::zero()]).is_zero());
    }

    fn arb_exact() -> impl Strategy<Value = Scalar> {
        (
            -60i64..60,
            -60i64..60,
            1i64..40,
            prop::sample::select(vec![0u64, 2, 3, 5, 6, 7, 12]),
        )
            .prop_map(|(p, qq, r, d)| q(p, qq, r, d))
    }

    fn arb_same_field() -> impl Strategy<Value = (Scalar, Scalar)> {
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_flat_map(|d| {
            ((-40i64..40, -40i64..40, 1i64..30), (-40i64..40, -40i64..40, 1i64..30))
                .prop_map(move |(a, b)| (q(a.0, a.1, a.2, d), q(b.0, b.1, b.2, d)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn canonicalization_idempotent(x in arb_exact()) {
            let e = x.as_exact().unwrap();
            let again = Scalar::quad(e.p().clone(), e.q().clone(), e.r().clone(), e.d()).unwrap();
            prop_assert_eq!(again, x);
        }

        #[test]
        fn abs_le_one_agrees_with_float(x in arb_exact()) {
            let v = x.to_f64();
            prop_assume!((v.abs() - 1.0).abs() > 1e-9);
            prop_assert_eq!(x.abs_le_one(), v.abs() <= 1.0);
        }

        #[test]
        fn conjugation_involutive_and_multiplicative((x, y) in arb_same_field()) {
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.try_mul(&y).unwrap().conj(), x.conj().try_mul(&y.conj()).unwrap());
        }

        #[test]
        fn text_round_trip(x in arb_exact()) {
            let s = x.to_string();
            prop_assert_eq!(s.parse::<Scalar>().unwrap(), x);
        }

        #[test]
        fn quadratic_roots_annihilate(c0 in -30i64..30, c1 in -30i64..30, c2 in -30i64..30) {
            prop_assume!(c0 != 0 || c1 != 0 || c2 != 0);
            let cs = [Scalar::int(c0), Scalar::int(c1), Scalar::int(c2)];
            let poly = ScalarPoly::new(cs.to_vec());
            for root in solve_quadratic(&cs[0], &cs[1], &cs[2]).unwrap() {
                prop_assert!(poly.eval(&root).unwrap().is_exact_zero());
            }
        }
    }
}
