//! Prime fields `F_p`, extension fields `F_{p^e}` and the distinguished
//! constants (primitive roots, the non-square `λ`) used by the group
//! constructions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The prime field `F_p` for an odd prime `p < 2^20`.
///
/// Residues are plain `u32` values in `[0, p)`; products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 20;

    pub fn new(p: u64) -> Result<Self> {
        if p > Self::MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces any signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce(t0))
    }

    pub fn elem(self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(self) -> FieldElement {
        self.elem(1)
    }

    /// Euler's criterion; `0` counts as a square.
    pub fn is_square(self, a: u32) -> bool {
        a.is_multiple_of(self.p) || self.pow(a, (self.p as u64 - 1) / 2) == 1
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(self, a: u32) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::ZeroInverse);
        }
        let n = self.p as u64 - 1;
        let mut ord = n;
        for q in prime_factors(n) {
            while ord.is_multiple_of(q) && self.pow(a, ord / q) == 1 {
                ord /= q;
            }
        }
        Ok(ord)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl Serialize for PrimeField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.p)
    }
}

/// A canonical residue together with its field.
///
/// Arithmetic operators panic when the operands live in different fields;
/// use the `checked_*` helpers when that can happen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        Self {
            value: self.field.pow(self.value, e),
            field: self.field,
        }
    }

    pub fn inverse(self) -> Result<Self> {
        field_inverse(self)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        same_field(self.field, rhs.field)?;
        Ok(self * rhs)
    }
}

fn same_field(a: PrimeField, b: PrimeField) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::FieldMismatch {
            left: a.p,
            right: b.p,
        })
    }
}

macro_rules! impl_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.field, rhs.field, "field mismatch");
                FieldElement {
                    value: self.field.$method(self.value, rhs.value),
                    field: self.field,
                }
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

pub fn field_inverse(a: FieldElement) -> Result<FieldElement> {
    Ok(FieldElement {
        value: a.field.inv(a.value)?,
        field: a.field,
    })
}

/// Smallest generator of `F_p^×`.
pub fn primitive_root(field: PrimeField) -> FieldElement {
    let n = field.p as u64 - 1;
    (1..field.p)
        .find(|&a| field.order(a).map(|o| o == n).unwrap_or(false))
        .map(|a| field.elem(a as i64))
        .expect("F_p^× is cyclic")
}

/// The non-square `λ` used for the minus-type form: `-1` when `p ≡ 3 mod 4`,
/// otherwise the smallest primitive root.
pub fn select_lambda(field: PrimeField) -> FieldElement {
    if field.p % 4 == 3 {
        field.elem(-1)
    } else {
        primitive_root(field)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Univariate helpers over F_p (coefficients low to high, trimmed).

fn utrim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn urem(field: PrimeField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = utrim(a.to_vec());
    let m = utrim(m.to_vec());
    let lead_inv = field.inv(*m.last().expect("nonzero modulus")).unwrap();
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = field.mul(*r.last().unwrap(), lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, mi));
        }
        r = utrim(r);
    }
    r
}

fn umulmod(field: PrimeField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(ai, bj));
        }
    }
    urem(field, &out, m)
}

fn upowmod(field: PrimeField, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut base = urem(field, a, m);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = umulmod(field, &acc, &base, m);
        }
        base = umulmod(field, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn ugcd(field: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (utrim(a.to_vec()), utrim(b.to_vec()));
    while !b.is_empty() {
        let r = urem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` of degree `e` is irreducible iff `x^(p^e) ≡ x mod f` and
/// `gcd(x^(p^(e/q)) - x, f) = 1` for every prime `q | e`.
fn is_irreducible(field: PrimeField, f: &[u32]) -> bool {
    let f = utrim(f.to_vec());
    let e = f.len().saturating_sub(1);
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let p = field.p as u64;
    let x = vec![0u32, 1];
    // x^(p^k) mod f by repeated p-th powering.
    let frob = |k: usize| {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = upowmod(field, &acc, p, &f);
        }
        acc
    };
    let minus_x = |mut v: Vec<u32>| {
        v.resize(v.len().max(2), 0);
        v[1] = field.sub(v[1], 1);
        utrim(v)
    };
    if !minus_x(frob(e)).is_empty() {
        return false;
    }
    for q in prime_factors(e as u64) {
        let g = ugcd(field, &minus_x(frob(e / q as usize)), &f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// `F_{p^e} = F_p[t] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    /// Monic, low-to-high, length `e + 1`.
    modulus: Vec<u32>,
}

/// Element of an extension field: coefficient vector of length `e` in the
/// power basis `1, t, …, t^(e-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtElement {
    coeffs: Vec<u32>,
}

impl ExtElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl ExtensionField {
    /// Picks the modulus deterministically: `t` for `e = 1`, `t² − λ` with
    /// `λ = select_lambda(p)` for `e = 2`, otherwise the smallest irreducible
    /// monic polynomial when coefficient vectors `(c_0, …, c_{e-1})` are read
    /// as base-`p` integers with `c_0` least significant.
    pub fn new(base: PrimeField, e: usize) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument(
                "extension degree must be ≥ 1".into(),
            ));
        }
        let modulus = match e {
            1 => vec![0, 1],
            2 => vec![base.neg(select_lambda(base).value), 0, 1],
            _ => smallest_irreducible(base, e),
        };
        Self::with_modulus(base, modulus)
    }

    pub fn with_modulus(base: PrimeField, modulus: Vec<u32>) -> Result<Self> {
        let modulus: Vec<u32> = utrim(modulus.into_iter().map(|c| c % base.p).collect());
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidArgument(
                "modulus must be monic of degree ≥ 1".into(),
            ));
        }
        if !is_irreducible(base, &modulus) {
            return Err(Error::NotIrreducible { p: base.p });
        }
        Ok(Self { base, modulus })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `p^e`, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        (self.base.p as u64).saturating_pow(self.degree() as u32)
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> ExtElement {
        self.embed(1)
    }

    pub fn embed(&self, a: u32) -> ExtElement {
        let mut z = self.zero();
        z.coeffs[0] = a % self.base.p;
        z
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<ExtElement> {
        if coeffs.len() > self.degree() {
            return Err(Error::InvalidArgument("too many coefficients".into()));
        }
        let mut z = self.zero();
        for (slot, &c) in z.coeffs.iter_mut().zip(coeffs) {
            *slot = c % self.base.p;
        }
        Ok(z)
    }

    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.sub(x, y))
                .collect(),
        }
    }

    pub fn scale(&self, a: &ExtElement, c: u32) -> ExtElement {
        ExtElement {
            coeffs: a.coeffs.iter().map(|&x| self.base.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let e = self.degree();
        let f = self.base;
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(ai, bj));
            }
        }
        // Reduce with the monic modulus from the top down.
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                prod[k - e + i] = f.sub(prod[k - e + i], f.mul(c, self.modulus[i]));
            }
        }
        prod.truncate(e);
        ExtElement { coeffs: prod }
    }

    pub fn pow(&self, a: &ExtElement, mut n: u64) -> ExtElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Inverse via Fermat: `a^(p^e − 2)`.
    pub fn inv(&self, a: &ExtElement) -> Result<ExtElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    /// Enumerates every element in base-`p` counting order (`p^e` must be small).
    pub fn elements(&self) -> impl Iterator<Item = ExtElement> + '_ {
        let e = self.degree();
        let p = self.base.p as u64;
        (0..self.size()).map(move |mut n| {
            let mut coeffs = vec![0u32; e];
            for c in coeffs.iter_mut() {
                *c = (n % p) as u32;
                n /= p;
            }
            ExtElement { coeffs }
        })
    }
}

fn smallest_irreducible(base: PrimeField, e: usize) -> Vec<u32> {
    let p = base.p as u64;
    let total = p.pow(e as u32);
    for mut n in 0..total {
        let mut f = vec![0u32; e + 1];
        for c in f.iter_mut().take(e) {
            *c = (n % p) as u32;
            n /= p;
        }
        f[e] = 1;
        if is_irreducible(base, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Uniform draw from `F_{p^e}`; reproducible for a seeded `rng`.
pub fn random_ext_element<R: Rng + ?Sized>(field: &ExtensionField, rng: &mut R) -> ExtElement {
    ExtElement {
        coeffs: (0..field.degree())
            .map(|_| rng.random_range(0..field.base.p))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(2), Err(Error::NotPrime(2)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new(97).is_ok());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(field_inverse(fp(7).elem(3)).unwrap().value(), 5);
        assert_eq!(field_inverse(fp(5).elem(1)).unwrap().value(), 1);
        // brute-force oracle
        let f = fp(13);
        let expect = (1..13).find(|b| (11 * b) % 13 == 1).unwrap();
        assert_eq!(field_inverse(f.elem(11)).unwrap().value(), expect);
        assert_eq!(expect, 6);
        assert_eq!(field_inverse(f.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn inverse_and_power_laws() {
        for p in [3u64, 5, 7, 11, 13, 97] {
            let f = fp(p);
            for a in 1..p as i64 {
                let a = f.elem(a);
                assert_eq!(a * field_inverse(a).unwrap(), f.one());
                for k in 0..p {
                    assert_eq!(a.pow(k) * a.pow(p - 1 - k), f.one());
                }
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(fp(3)).value(), 2);
        assert_eq!(primitive_root(fp(5)).value(), 2);
        assert_eq!(primitive_root(fp(7)).value(), 3);
        for p in [3u64, 5, 7, 11, 13, 17, 97] {
            let f = fp(p);
            let g = primitive_root(f);
            assert_eq!(g.pow(p - 1), f.one());
            for d in 1..p - 1 {
                if (p - 1) % d == 0 {
                    assert_ne!(g.pow(d), f.one(), "p={p} d={d}");
                }
            }
            // smallest: no smaller element has full order
            for a in 1..g.value() {
                assert_ne!(f.order(a).unwrap(), p - 1);
            }
        }
    }

    #[test]
    fn lambda_is_a_non_square() {
        assert_eq!(select_lambda(fp(7)).value(), 6);
        assert_eq!(select_lambda(fp(3)).value(), 2);
        assert_eq!(select_lambda(fp(5)).value(), 2);
        for p in [3u64, 5, 7, 11, 13, 17, 29, 97] {
            let f = fp(p);
            let l = select_lambda(f);
            assert_eq!(l.pow((p - 1) / 2), -f.one(), "p={p}");
        }
    }

    #[test]
    fn extension_moduli() {
        let f9 = ExtensionField::new(fp(3), 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]); // t² − (−1)
        let f27 = ExtensionField::new(fp(3), 3).unwrap();
        assert_eq!(f27.modulus(), &[1, 2, 0, 1]); // t³ + 2t + 1
        assert!(ExtensionField::with_modulus(fp(3), vec![2, 0, 1]).is_err()); // t² − 1
        assert!(ExtensionField::new(fp(3), 8).is_ok());
        assert!(ExtensionField::new(fp(7), 5).is_ok());
    }

    #[test]
    fn irreducibility_matches_root_search_for_small_degrees() {
        // oracle: degree ≤ 3 polynomial is irreducible iff it has no root
        let f = fp(5);
        for n in 0..125u32 {
            let c = [n % 5, (n / 5) % 5, n / 25, 1];
            let has_root = (0..5u32).any(|x| {
                let mut acc = 0;
                for &ci in c.iter().rev() {
                    acc = f.add(f.mul(acc, x), ci);
                }
                acc == 0
            });
            assert_eq!(is_irreducible(f, &c), !has_root, "{c:?}");
        }
    }

    #[test]
    fn every_nonzero_extension_element_is_invertible() {
        for (p, e) in [
            (3u64, 2usize),
            (3, 3),
            (5, 2),
            (7, 2),
            (3, 6),
            (11, 3),
            (43, 2),
        ] {
            let ext = ExtensionField::new(fp(p), e).unwrap();
            assert!(ext.size() <= 2000);
            let one = ext.one();
            for a in ext.elements().filter(|a| !a.is_zero()) {
                assert_eq!(ext.mul(&a, &ext.inv(&a).unwrap()), one);
            }
        }
    }

    #[test]
    fn random_draws_are_reproducible_and_in_range() {
        let ext = ExtensionField::new(fp(5), 1).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = random_ext_element(&ext, &mut r1);
            assert_eq!(a, random_ext_element(&ext, &mut r2));
            assert!(a.coeffs()[0] < 5);
        }
    }

    #[test]
    fn random_draws_are_roughly_uniform() {
        let ext = ExtensionField::new(fp(3), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000usize;
        let mut counts = [0usize; 9];
        for _ in 0..n {
            let a = random_ext_element(&ext, &mut rng);
            counts[(a.coeffs()[0] + 3 * a.coeffs()[1]) as usize] += 1;
        }
        let mean = n as f64 / 9.0;
        let sigma = (n as f64 * (1.0 / 9.0) * (8.0 / 9.0)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 5.0 * sigma, "{counts:?}");
        }
    }
}
