//! Sparse polynomials in `x1, x2, y1, y2` over a prime field.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! graded-lexicographic order with `x1 > x2 > y1 > y2`; iteration is therefore
//! canonical and the text format is produced by walking it backwards.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{ExtElement, ExtensionField, FieldElement, PrimeField};

pub const VAR_NAMES: [&str; 4] = ["x1", "x2", "y1", "y2"];

/// Exponent vector `(u, v, s, t)` of `x1^u x2^v y1^s y2^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(u: u32, v: u32, s: u32, t: u32) -> Self {
        Monomial([u, v, s, t])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Monomial(e)
    }

    #[inline]
    pub fn exponents(&self) -> [u32; 4] {
        self.0
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree in the covector variables `x1, x2`.
    #[inline]
    pub fn x_degree(&self) -> u32 {
        self.0[0] + self.0[1]
    }

    #[inline]
    pub fn y_degree(&self) -> u32 {
        self.0[2] + self.0[3]
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.map(|e| e * k))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        MonomialOrder::Grlex.cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", VAR_NAMES[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    /// Total degree first, ties broken lexicographically with `x1 > x2 > y1 > y2`.
    #[default]
    Grlex,
    /// Pure lexicographic with `x1 > y1 > x2 > y2`.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        let [au, av, as_, at] = a.0;
        let [bu, bv, bs, bt] = b.0;
        match self {
            MonomialOrder::Grlex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::Lex => (au, as_, av, at).cmp(&(bu, bs, bv, bt)),
        }
    }
}

/// A 4×4 matrix over `F_p`, row-major, acting on the variable vector
/// `(x1, x2, y1, y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat4 {
    field: PrimeField,
    entries: [u32; 16],
}

impl Mat4 {
    pub fn new(field: PrimeField, rows: [[i64; 4]; 4]) -> Self {
        let mut entries = [0u32; 16];
        for i in 0..4 {
            for j in 0..4 {
                entries[4 * i + j] = field.reduce(rows[i][j]);
            }
        }
        Self { field, entries }
    }

    pub fn identity(field: PrimeField) -> Self {
        Self::diagonal(field, [1, 1, 1, 1])
    }

    pub fn diagonal(field: PrimeField, d: [u32; 4]) -> Self {
        let mut entries = [0u32; 16];
        for i in 0..4 {
            entries[5 * i] = d[i] % field.p();
        }
        Self { field, entries }
    }

    /// `diag(a, b)` for two row-major 2×2 blocks.
    pub fn block_diag(field: PrimeField, a: [u32; 4], b: [u32; 4]) -> Self {
        let mut entries = [0u32; 16];
        entries[0] = a[0];
        entries[1] = a[1];
        entries[4] = a[2];
        entries[5] = a[3];
        entries[10] = b[0];
        entries[11] = b[1];
        entries[14] = b[2];
        entries[15] = b[3];
        Self { field, entries }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[4 * i + j]
    }

    pub fn rows(&self) -> [[u32; 4]; 4] {
        let mut r = [[0u32; 4]; 4];
        for (i, row) in r.iter_mut().enumerate() {
            row.copy_from_slice(&self.entries[4 * i..4 * i + 4]);
        }
        r
    }

    pub fn mul(&self, other: &Mat4) -> Mat4 {
        let f = self.field;
        let mut entries = [0u32; 16];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0u32;
                for k in 0..4 {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                entries[4 * i + j] = acc;
            }
        }
        Mat4 { field: f, entries }
    }

    pub fn det(&self) -> u32 {
        let f = self.field;
        let mut m = self.rows();
        let mut det = 1u32;
        for col in 0..4 {
            let Some(piv) = (col..4).find(|&r| m[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                m.swap(piv, col);
                det = f.neg(det);
            }
            det = f.mul(det, m[col][col]);
            let inv = f.inv(m[col][col]).unwrap();
            for r in col + 1..4 {
                let factor = f.mul(m[r][col], inv);
                if factor == 0 {
                    continue;
                }
                for c in col..4 {
                    m[r][c] = f.sub(m[r][c], f.mul(factor, m[col][c]));
                }
            }
        }
        det
    }

    /// True when no entry couples the x-block with the y-block.
    pub fn is_block_diagonal(&self) -> bool {
        (0..2).all(|i| (2..4).all(|j| self.get(i, j) == 0 && self.get(j, i) == 0))
    }
}

/// Sparse polynomial over `F_p` with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: PrimeField,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, c: i64) -> Self {
        Self::term(field, Monomial::ONE, c)
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    /// The variable with index `i` in `(x1, x2, y1, y2)`.
    pub fn var(field: PrimeField, i: usize) -> Self {
        Self::term(field, Monomial::var(i), 1)
    }

    pub fn term(field: PrimeField, m: Monomial, c: i64) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, field.reduce(c));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(
        field: PrimeField,
        terms: I,
    ) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, field.reduce(c));
        }
        p
    }

    /// Adds `c·m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &u32)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// `Some(d)` when every term has degree `d`; the zero polynomial is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check_field(&self, other: &Polynomial) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(*m, self.field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_field(other)?;
        let f = self.field;
        let mut out = Polynomial::zero(f);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Polynomial::zero(f);
        }
        Polynomial {
            field: f,
            terms: self.terms.iter().map(|(m, &a)| (*m, f.mul(a, c))).collect(),
        }
    }

    pub fn scalar_mul(&self, c: FieldElement) -> Result<Polynomial> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: c.field().p(),
            });
        }
        Ok(self.scale(c.value()))
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest term under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Result<(Monomial, FieldElement)> {
        let (m, c) = match order {
            MonomialOrder::Grlex => self.terms.iter().next_back(),
            MonomialOrder::Lex => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
        .ok_or(Error::ZeroPolynomial)?;
        Ok((*m, self.field.elem(*c as i64)))
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, &c)| (*m, c))
                .collect(),
        }
    }

    /// Linear change of variables: `z_j ↦ Σ_i A[i][j]·z_i`, i.e. column `j` of
    /// `A` holds the image of `z_j`. With this convention
    /// `f.substitute_linear(A·B) == f.substitute_linear(B).substitute_linear(A)`.
    pub fn substitute_linear(&self, a: &Mat4) -> Result<Polynomial> {
        if a.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: a.field().p(),
            });
        }
        if a.det() == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute_unchecked(a))
    }

    pub(crate) fn substitute_unchecked(&self, a: &Mat4) -> Polynomial {
        let f = self.field;
        let mut max_exp = [0u32; 4];
        for m in self.terms.keys() {
            for i in 0..4 {
                max_exp[i] = max_exp[i].max(m.0[i]);
            }
        }
        // powers[j][k] = (image of z_j)^k
        let powers: Vec<Vec<Polynomial>> = (0..4)
            .map(|j| {
                let image = Polynomial::from_terms(
                    f,
                    (0..4).map(|i| (Monomial::var(i), a.get(i, j) as i64)),
                );
                let mut pw = Vec::with_capacity(max_exp[j] as usize + 1);
                pw.push(Polynomial::one(f));
                for k in 1..=max_exp[j] as usize {
                    let next = &pw[k - 1] * &image;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = Polynomial::zero(f);
        for (m, &c) in &self.terms {
            let mut prod = Polynomial::constant(f, c as i64);
            for j in 0..4 {
                if m.0[j] > 0 {
                    prod = &prod * &powers[j][m.0[j] as usize];
                }
            }
            for (mm, &cc) in &prod.terms {
                out.add_term(*mm, cc);
            }
        }
        out
    }

    /// Evaluates at a point of `F_{p^e}⁴` through the embedding `F_p ↪ F_{p^e}`.
    pub fn evaluate(&self, ext: &ExtensionField, point: &[ExtElement; 4]) -> Result<ExtElement> {
        if ext.base() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: ext.base().p(),
            });
        }
        let mut max_exp = [0u32; 4];
        for m in self.terms.keys() {
            for i in 0..4 {
                max_exp[i] = max_exp[i].max(m.0[i]);
            }
        }
        let powers: Vec<Vec<ExtElement>> = (0..4)
            .map(|i| {
                let mut pw = vec![ext.one()];
                for k in 1..=max_exp[i] as usize {
                    let next = ext.mul(&pw[k - 1], &point[i]);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = ext.zero();
        for (m, &c) in &self.terms {
            let mut t = ext.embed(c);
            for i in 0..4 {
                if m.0[i] > 0 {
                    t = ext.mul(&t, &powers[i][m.0[i] as usize]);
                }
            }
            acc = ext.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Parses the text grammar:
    ///
    /// ```text
    /// poly   := [ '-' ] term ( ('+' | '-') term )*
    /// term   := coeff | coeff '*' powers | powers
    /// powers := power ( '*' power )*
    /// power  := var [ '^' nat ]
    /// var    := 'x1' | 'x2' | 'y1' | 'y2'
    /// coeff  := nat
    /// ```
    ///
    /// Whitespace is ignored and coefficients are reduced mod `p`.
    pub fn parse(text: &str, field: PrimeField) -> Result<Polynomial> {
        Parser::new(text, field).parse()
    }

    /// Canonical text: grlex-descending terms joined by `" + "`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (c, m.degree()) {
                (_, 0) => write!(f, "{c}")?,
                (1, _) => write!(f, "{m}")?,
                _ => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.field.p() - 1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: PrimeField,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: PrimeField) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
            field,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.field);
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let (m, c) = self.term()?;
            let c = if negate { self.field.neg(c) } else { c };
            out.add_term(m, c);
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, u32)> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let c = self.coefficient()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let m = self.powers()?;
                    Ok((m, c))
                } else {
                    Ok((Monomial::ONE, c))
                }
            }
            Some(b) if b.is_ascii_alphabetic() => Ok((self.powers()?, 1)),
            Some(_) => self.err("expected a coefficient or variable"),
            None => self.err("unexpected end of input"),
        }
    }

    fn powers(&mut self) -> Result<Monomial> {
        let mut m = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            m = m.mul(&self.power()?);
        }
        Ok(m)
    }

    fn power(&mut self) -> Result<Monomial> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a variable");
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let Some(idx) = VAR_NAMES.iter().position(|&v| v == name) else {
            return Err(Error::UnknownVariable {
                pos: start,
                name: name.to_string(),
            });
        };
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            exp = self.exponent()?;
        }
        Ok(Monomial::var(idx).pow(exp))
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII digits"))
    }

    /// A coefficient literal reduced mod `p`, digit by digit.
    fn coefficient(&mut self) -> Result<u32> {
        let p = self.field.p() as u64;
        let r = self
            .digits()?
            .bytes()
            .fold(0u64, |r, d| (r * 10 + (d - b'0') as u64) % p);
        Ok(r as u32)
    }

    fn exponent(&mut self) -> Result<u32> {
        let start = self.pos;
        let digits = self.digits()?;
        digits.parse::<u32>().map_err(|_| Error::Syntax {
            pos: start,
            msg: "exponent too large".into(),
        })
    }
}

/// Random polynomial with up to `terms` terms of degree `≤ max_degree`.
pub fn random_polynomial<R: Rng + ?Sized>(
    field: PrimeField,
    max_degree: u32,
    terms: usize,
    rng: &mut R,
) -> Polynomial {
    let mut out = Polynomial::zero(field);
    for _ in 0..terms {
        let d = rng.random_range(0..=max_degree);
        let mut e = [0u32; 4];
        for _ in 0..d {
            e[rng.random_range(0..4)] += 1;
        }
        out.add_term(Monomial(e), rng.random_range(0..field.p()));
    }
    out
}

/// Random homogeneous polynomial of degree `d` with up to `terms` terms.
pub fn random_homogeneous<R: Rng + ?Sized>(
    field: PrimeField,
    d: u32,
    terms: usize,
    rng: &mut R,
) -> Polynomial {
    let mut out = Polynomial::zero(field);
    for _ in 0..terms {
        let mut e = [0u32; 4];
        for _ in 0..d {
            e[rng.random_range(0..4)] += 1;
        }
        out.add_term(Monomial(e), rng.random_range(0..field.p()));
    }
    out
}

/// Random invertible 4×4 matrix (rejection sampling).
pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Mat4 {
    loop {
        let mut rows = [[0i64; 4]; 4];
        for row in rows.iter_mut() {
            for e in row.iter_mut() {
                *e = rng.random_range(0..field.p() as i64);
            }
        }
        let m = Mat4::new(field, rows);
        if m.det() != 0 {
            return m;
        }
    }
}
