//! Dense linear algebra over `F_p` on homogeneous polynomial spaces.

use std::collections::HashMap;

use crate::fields::PrimeField;
use crate::polyring::{Monomial, Polynomial};

/// Which variables a graded piece may involve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Support {
    /// All of `x1, x2, y1, y2`.
    #[default]
    All,
    /// Only the covector variables `x1, x2` (the subring `F_p[V]`).
    XOnly,
}

impl Support {
    pub fn admits(self, m: &Monomial) -> bool {
        match self {
            Support::All => true,
            Support::XOnly => m.y_degree() == 0,
        }
    }
}

/// The monomials of one degree in descending grlex order, with a reverse map.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    degree: u32,
    support: Support,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(degree: u32, support: Support) -> Self {
        let mut monomials = Vec::new();
        let d = degree;
        for u in (0..=d).rev() {
            for v in (0..=d - u).rev() {
                for s in (0..=d - u - v).rev() {
                    let m = Monomial::new(u, v, s, d - u - v - s);
                    if support.admits(&m) {
                        monomials.push(m);
                    }
                }
            }
        }
        Self::from_sorted(degree, support, monomials)
    }

    /// Monomials of bidegree `(a, b)` in `(x, y)`, descending grlex.
    pub fn bidegree(a: u32, b: u32) -> Self {
        let mut monomials = Vec::with_capacity(((a + 1) * (b + 1)) as usize);
        for u in (0..=a).rev() {
            for s in (0..=b).rev() {
                monomials.push(Monomial::new(u, a - u, s, b - s));
            }
        }
        monomials.sort_by(|x, y| y.cmp(x));
        let support = if b == 0 { Support::XOnly } else { Support::All };
        Self::from_sorted(a + b, support, monomials)
    }

    fn from_sorted(degree: u32, support: Support, monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Self {
            degree,
            support,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    #[inline]
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a polynomial whose terms all lie in this piece.
    pub fn to_vector(&self, f: &Polynomial) -> Option<Vec<u32>> {
        let mut v = vec![0u32; self.len()];
        for (m, &c) in f.terms() {
            v[self.index_of(m)?] = c;
        }
        Some(v)
    }

    pub fn to_polynomial(&self, field: PrimeField, v: &[u32]) -> Polynomial {
        let mut f = Polynomial::zero(field);
        for (i, &c) in v.iter().enumerate() {
            f.add_term(self.monomials[i], c);
        }
        f
    }

    /// `vector(self) · g` as a vector in `target`, where `g` is homogeneous.
    pub fn multiply_into(
        &self,
        field: PrimeField,
        v: &[u32],
        g: &Polynomial,
        target: &MonomialIndex,
    ) -> Vec<u32> {
        let mut out = vec![0u32; target.len()];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let m = self.monomials[i];
            for (mg, &cg) in g.terms() {
                let j = target
                    .index_of(&m.mul(mg))
                    .expect("product lies in the target degree");
                out[j] = field.add(out[j], field.mul(c, cg));
            }
        }
        out
    }
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Current rows in insertion order.
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn axpy(field: PrimeField, v: &mut [u32], factor: u32, row: &[u32], from: usize) {
        let p = field.p() as u64;
        let neg = (p - factor as u64) % p;
        for (a, &b) in v[from..].iter_mut().zip(&row[from..]) {
            if b != 0 {
                *a = ((*a as u64 + neg * b as u64) % p) as u32;
            }
        }
    }

    /// Reduces `v` against the current rows in place.
    pub fn reduce(&self, v: &mut [u32]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                Self::axpy(self.field, v, c, row, pc);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = self.field.inv(v[pc]).expect("nonzero pivot");
        for c in v[pc..].iter_mut() {
            *c = self.field.mul(*c, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                Self::axpy(self.field, row, c, &v, pc);
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    /// Rows sorted by pivot column (leftmost first).
    pub fn into_rows(self) -> Vec<Vec<u32>> {
        let mut pairs: Vec<(usize, Vec<u32>)> = self.pivots.into_iter().zip(self.rows).collect();
        pairs.sort_by_key(|(p, _)| *p);
        pairs.into_iter().map(|(_, r)| r).collect()
    }

    pub fn rows_with_pivots(&self) -> impl Iterator<Item = (usize, &Vec<u32>)> {
        self.pivots.iter().copied().zip(&self.rows)
    }
}

/// Basis of `{c : M·c = 0}` for `M` given by `rows` with `ncols` columns.
pub fn null_space(field: PrimeField, rows: Vec<Vec<u32>>, ncols: usize) -> Vec<Vec<u32>> {
    let mut ech = Echelon::new(field, ncols);
    for r in rows {
        ech.insert(r);
        if ech.rank() == ncols {
            return Vec::new();
        }
    }
    let mut is_pivot = vec![false; ncols];
    for (pc, _) in ech.rows_with_pivots() {
        is_pivot[pc] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; ncols];
            v[free] = 1;
            for (pc, row) in ech.rows_with_pivots() {
                v[pc] = field.neg(row[free]);
            }
            v
        })
        .collect()
}
