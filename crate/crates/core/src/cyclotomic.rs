//! Exact arithmetic in `Z[ζ_e]`.
//!
//! Values are stored in the power basis `1, ζ, …, ζ^{φ(e)-1}` of `Z[x]/Φ_e(x)`,
//! which is canonical: two values are equal iff their coordinate vectors are.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `Φ_n` (ascending coefficients) and the reductions of `x^s mod Φ_n` for `0 <= s < n`.
#[derive(Debug)]
struct Basis {
    phi: usize,
    powers: Vec<Vec<BigInt>>,
}

fn poly_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn basis_cache() -> &'static RwLock<HashMap<u32, Arc<Basis>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Basis>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `n`-th cyclotomic polynomial, ascending coefficients.
///
/// Computed as `(x^n - 1) / Π_{d | n, d < n} Φ_d(x)` by exact division; cached.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(p) = poly_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(num);
    // concurrent initialisers compute the same value; first insert wins
    poly_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert(poly)
        .clone()
}

/// Exact quotient of `num` by the monic `den`; panics if the remainder is nonzero.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

fn basis(e: u32) -> Arc<Basis> {
    if let Some(b) = basis_cache().read().unwrap().get(&e) {
        return b.clone();
    }
    let poly = cyclotomic_polynomial(e);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(e as usize);
    let mut cur = vec![BigInt::zero(); phi];
    cur[0] = BigInt::one();
    for _ in 0..e {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow term with Φ_e (monic)
        let top = cur.pop().unwrap();
        cur.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (c, p) in cur.iter_mut().zip(poly.iter()) {
                *c -= &top * p;
            }
        }
    }
    let b = Arc::new(Basis { phi, powers });
    basis_cache().write().unwrap().entry(e).or_insert(b).clone()
}

/// An element of `Z[ζ_e]` in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    e: u32,
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Conj,
    Galois(i64),
}

impl CycInt {
    pub fn zero(e: u32) -> Self {
        let phi = basis(e).phi;
        CycInt {
            e,
            coeffs: vec![BigInt::zero(); phi],
        }
    }

    pub fn from_int(e: u32, n: impl Into<BigInt>) -> Self {
        let mut z = CycInt::zero(e);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(e: u32) -> Self {
        CycInt::from_int(e, 1)
    }

    /// `ζ_e^s`.
    pub fn zeta_pow(e: u32, s: i64) -> Self {
        let b = basis(e);
        CycInt {
            e,
            coeffs: b.powers[s.rem_euclid(e as i64) as usize].clone(),
        }
    }

    /// Reduces `Σ raw[i] ζ^i` into canonical coordinates. Indices beyond `e` wrap since `ζ^e = 1`.
    pub fn canonical_reduce(e: u32, raw: &[BigInt]) -> Self {
        assert!(e >= 1, "modulus must be positive");
        let b = basis(e);
        let mut folded = vec![BigInt::zero(); e as usize];
        for (i, c) in raw.iter().enumerate() {
            folded[i % e as usize] += c;
        }
        let mut coeffs = vec![BigInt::zero(); b.phi];
        for (s, c) in folded.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if s < b.phi {
                coeffs[s] += c;
            } else {
                for (acc, p) in coeffs.iter_mut().zip(&b.powers[s]) {
                    if !p.is_zero() {
                        *acc += &c * p;
                    }
                }
            }
        }
        CycInt { e, coeffs }
    }

    /// Convenience for small raw coefficients.
    pub fn from_raw_i64(e: u32, raw: &[i64]) -> Self {
        let raw: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
        CycInt::canonical_reduce(e, &raw)
    }

    /// Builds a value from canonical coordinates, checking their count.
    pub fn from_coeffs(e: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if e == 0 {
            return Err(Error::MalformedSpec(
                "cyclotomic modulus must be positive".into(),
            ));
        }
        let phi = basis(e).phi;
        if coeffs.len() != phi {
            return Err(Error::MalformedSpec(format!(
                "expected {phi} coordinates for e = {e}, got {}",
                coeffs.len()
            )));
        }
        Ok(CycInt { e, coeffs })
    }

    pub fn modulus(&self) -> u32 {
        self.e
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(n)` iff the value equals the rational integer `n`.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &CycInt) -> Result<()> {
        if self.e != other.e {
            return Err(Error::ModulusMismatch(self.e, other.e));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt> {
        self.check(other)?;
        Ok(CycInt {
            e: self.e,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.check(other)?;
        Ok(CycInt {
            e: self.e,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut raw = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(CycInt::canonical_reduce(self.e, &raw))
    }

    /// The automorphism `ζ ↦ ζ^k`; requires `gcd(k, e) = 1`.
    pub fn galois(&self, k: i64) -> Result<CycInt> {
        let e = self.e as i64;
        let k = k.rem_euclid(e);
        if k.gcd(&e) != 1 {
            return Err(Error::NotCoprime { k, e: self.e });
        }
        let mut raw = vec![BigInt::zero(); self.e as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(i as i64 * k % e) as usize] += c;
        }
        Ok(CycInt::canonical_reduce(self.e, &raw))
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycInt {
        self.galois(-1).expect("-1 is a unit mod e")
    }

    pub fn scale(&self, n: &BigInt) -> CycInt {
        CycInt {
            e: self.e,
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    /// Exact division by a nonzero integer; fails unless every coordinate is divisible.
    pub fn exact_div_by_integer(&self, d: &BigInt) -> Result<CycInt> {
        if d.is_zero() {
            return Err(Error::InexactDivision("zero".into()));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::InexactDivision(d.to_string()));
            }
            coeffs.push(q);
        }
        Ok(CycInt { e: self.e, coeffs })
    }

    /// Floating-point embedding with `ζ = exp(2πi/e)`; for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let e = self.e as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (i, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let t = std::f64::consts::TAU * i as f64 / e;
                (re + c * t.cos(), im + c * t.sin())
            })
    }
}

/// Applies one ring operation; `b` is required for the binary kinds.
pub fn ring_op(kind: RingOp, a: &CycInt, b: Option<&CycInt>) -> Result<CycInt> {
    let rhs =
        || b.ok_or_else(|| Error::MalformedSpec("binary ring operation needs two operands".into()));
    match kind {
        RingOp::Add => a.checked_add(rhs()?),
        RingOp::Sub => a.checked_sub(rhs()?),
        RingOp::Mul => a.checked_mul(rhs()?),
        RingOp::Conj => Ok(a.conj()),
        RingOp::Galois(k) => a.galois(k),
    }
}

// Operator forms panic on modulus mismatch; use the checked_* methods for fallible input.
impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            e: self.e,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycInt {
    /// GAP-style: `E(e)^k` terms over the canonical basis; rational values print as integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_rational_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let term = match i {
                0 => None,
                1 => Some(format!("E({})", self.e)),
                _ => Some(format!("E({})^{i}", self.e)),
            };
            match term {
                None => write!(f, "{mag}")?,
                Some(t) if mag.is_one() => write!(f, "{t}")?,
                Some(t) => write!(f, "{mag}*{t}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycIntJson {
    e: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntJson {
            e: self.e,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycIntJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::from_coeffs(raw.e, coeffs).map_err(D::Error::custom)
    }
}
