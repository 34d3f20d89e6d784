//! The covariant matrix `(g_i · f_j)` and certification that its determinant
//! is a nonzero polynomial.
//!
//! A nonzero determinant at a random point of `F_{p^e}⁴` proves the
//! polynomial determinant nonzero. If every trial vanishes, the
//! Schwartz–Zippel bound `(deg / p^e)^trials` limits the chance that a nonzero
//! determinant was missed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::covariant_basis;
use crate::error::{Error, Result};
use crate::fields::{random_ext_element, ExtElement, ExtensionField, FieldElement, PrimeField};
use crate::invariants::{act, LabeledPoly};
use crate::matgroups::{
    diagonal_coset_representatives, orthogonal_group, OrthogonalType, ProductElement,
};
use crate::polyring::{Monomial, MonomialOrder, Polynomial};

/// Largest prime for which [`leading_term_matrix_det`] runs.
pub const EXACT_MAX_P: u32 = 3;

/// Minimum ratio `p^e / degbound` for the evaluation field.
pub const OVERSAMPLING: u64 = 100;

/// Square matrix of polynomials whose columns are homogeneous.
#[derive(Clone, Debug)]
pub struct CovariantMatrix {
    field: PrimeField,
    /// Row labels (coset representatives, or synthetic names).
    rows: Vec<String>,
    columns: Vec<String>,
    entries: Vec<Vec<Polynomial>>,
}

impl CovariantMatrix {
    pub fn from_entries(
        field: PrimeField,
        rows: Vec<String>,
        columns: Vec<String>,
        entries: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let n = entries.len();
        if rows.len() != n || columns.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "covariant matrix must be square".into(),
            ));
        }
        if entries.iter().flatten().any(|f| f.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.p(),
                right: entries
                    .iter()
                    .flatten()
                    .find(|f| f.field() != field)
                    .map_or(0, |f| f.field().p()),
            });
        }
        let m = Self {
            field,
            rows,
            columns,
            entries,
        };
        for j in 0..n {
            let mut degrees = (0..n).filter_map(|i| m.entries[i][j].homogeneous_degree());
            if let Some(d) = degrees.next() {
                if degrees.any(|e| e != d) {
                    return Err(Error::NotHomogeneous(m.columns[j].clone()));
                }
            } else if (0..n).any(|i| !m.entries[i][j].is_zero()) {
                return Err(Error::NotHomogeneous(m.columns[j].clone()));
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn row_labels(&self) -> &[String] {
        &self.rows
    }

    pub fn column_labels(&self) -> &[String] {
        &self.columns
    }

    /// Common degree of column `j` (0 for an all-zero column).
    pub fn column_degree(&self, j: usize) -> u32 {
        self.entries
            .iter()
            .find_map(|r| r[j].homogeneous_degree())
            .unwrap_or(0)
    }

    /// `Σ_j deg(column j)`, a bound on the total degree of the determinant.
    pub fn degree_bound(&self) -> u64 {
        (0..self.size()).map(|j| self.column_degree(j) as u64).sum()
    }

    /// The matrix with rows reordered: row `i` of the result is row
    /// `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.size()];
        for &i in perm {
            if i >= self.size() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        if perm.len() != self.size() {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        Ok(Self {
            field: self.field,
            rows: perm.iter().map(|&i| self.rows[i].clone()).collect(),
            columns: self.columns.clone(),
            entries: perm.iter().map(|&i| self.entries[i].clone()).collect(),
        })
    }
}

/// Rows `(σ^i, 1)` then `(ησ^i, 1)` for `0 ≤ i ≤ p`, columns the covariant
/// basis; entry `(i, j)` is `g_i · f_j`.
pub fn build_covariant_matrix(field: PrimeField, lambda: FieldElement) -> Result<CovariantMatrix> {
    let group = orthogonal_group(field, OrthogonalType::Minus, Some(lambda))?;
    let reps = diagonal_coset_representatives(&group)?;
    let basis = covariant_basis(field, lambda)?;
    from_translates(field, &reps, &basis.members)
}

fn from_translates(
    field: PrimeField,
    reps: &[ProductElement],
    basis: &[LabeledPoly],
) -> Result<CovariantMatrix> {
    let entries = reps
        .iter()
        .map(|g| {
            basis
                .iter()
                .map(|f| act(g, &f.poly))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CovariantMatrix::from_entries(
        field,
        reps.iter().map(ToString::to_string).collect(),
        basis.iter().map(|f| f.label.clone()).collect(),
        entries,
    )
}

/// `(numerator / denominator)^exponent`; zero for an exact verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FailureBound {
    pub numerator: u64,
    pub denominator: u64,
    pub exponent: u32,
    pub value: f64,
}

impl FailureBound {
    fn new(numerator: u64, denominator: u64, exponent: u32) -> Self {
        let value = (numerator as f64 / denominator as f64).powi(exponent as i32);
        Self {
            numerator,
            denominator,
            exponent,
            value,
        }
    }

    fn exact() -> Self {
        Self::new(0, 1, 1)
    }
}

/// Outcome of [`det_nonzero`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroTestVerdict {
    /// `true` is a proof; `false` is probabilistic.
    pub nonzero: bool,
    /// Evaluations performed.
    pub trials: u32,
    pub extension_degree: usize,
    pub degree_bound: u64,
    pub failure_bound: FailureBound,
    /// Point of `F_{p^e}⁴` where the determinant is nonzero.
    pub witness: Option<Vec<ExtElement>>,
    /// The determinant's value at the witness.
    pub witness_value: Option<ExtElement>,
}

/// Smallest `e` with `p^e ≥ OVERSAMPLING · degbound`.
pub fn extension_degree_for(p: u32, degree_bound: u64) -> usize {
    let target = OVERSAMPLING * degree_bound.max(1);
    let mut e = 1;
    let mut q = p as u64;
    while q < target {
        q *= p as u64;
        e += 1;
    }
    e
}

/// Scalar determinant by Gaussian elimination over `F_{p^e}`.
pub fn ext_determinant(ext: &ExtensionField, mut m: Vec<Vec<ExtElement>>) -> ExtElement {
    let n = m.len();
    let mut det = ext.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return ext.zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = ext.sub(&ext.zero(), &det);
        }
        det = ext.mul(&det, &m[col][col]);
        let inv = ext.inv(&m[col][col]).expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = ext.mul(&m[r][col], &inv);
            for c in col..n {
                let sub = ext.mul(&factor, &m[col][c]);
                m[r][c] = ext.sub(&m[r][c], &sub);
            }
        }
    }
    det
}

/// Randomized nonvanishing test of `det M` with a `ChaCha8` stream seeded by
/// `seed`.
pub fn det_nonzero(m: &CovariantMatrix, seed: u64, trials: u32) -> Result<ZeroTestVerdict> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let p = m.field().p();
    let degree_bound = m.degree_bound();
    let e = extension_degree_for(p, degree_bound);
    let ext = ExtensionField::new(m.field(), e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 1..=trials {
        let point: [ExtElement; 4] = std::array::from_fn(|_| random_ext_element(&ext, &mut rng));
        let values = m
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| f.evaluate(&ext, &point))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let det = ext_determinant(&ext, values);
        if !det.is_zero() {
            return Ok(ZeroTestVerdict {
                nonzero: true,
                trials: t,
                extension_degree: e,
                degree_bound,
                failure_bound: FailureBound::exact(),
                witness: Some(point.to_vec()),
                witness_value: Some(det),
            });
        }
    }
    Ok(ZeroTestVerdict {
        nonzero: false,
        trials,
        extension_degree: e,
        degree_bound,
        failure_bound: FailureBound::new(degree_bound, ext.size(), trials),
        witness: None,
        witness_value: None,
    })
}

/// Matrix of leading terms (`None` for zero entries) under `order`.
pub fn leading_term_matrix(
    m: &CovariantMatrix,
    order: MonomialOrder,
) -> Vec<Vec<Option<(Monomial, u32)>>> {
    m.entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|f| {
                    f.leading_term(order)
                        .ok()
                        .map(|(mono, c)| (mono, c.value()))
                })
                .collect()
        })
        .collect()
}

/// Exact determinant of the leading-term matrix, for `p ≤ 3`.
pub fn leading_term_matrix_det(m: &CovariantMatrix, order: MonomialOrder) -> Result<Polynomial> {
    let p = m.field().p();
    if p > EXACT_MAX_P {
        return Err(Error::PrimeTooLargeForExact(p));
    }
    let lt = leading_term_matrix(m, order);
    let n = lt.len();
    let field = m.field();
    let mut out = Polynomial::zero(field);
    let mut used = vec![false; n];
    permutation_terms(&lt, 0, &mut used, 0, Monomial::ONE, 1, field, &mut out);
    Ok(out)
}

/// Adds `Σ_π sign(π)·Π_i lt[i][π(i)]` over the permutations extending the
/// partial choice for rows `< row`.
#[allow(clippy::too_many_arguments)]
fn permutation_terms(
    lt: &[Vec<Option<(Monomial, u32)>>],
    row: usize,
    used: &mut [bool],
    inversions: usize,
    mono: Monomial,
    coeff: u32,
    field: PrimeField,
    out: &mut Polynomial,
) {
    let n = lt.len();
    if row == n {
        let c = if inversions.is_multiple_of(2) {
            coeff
        } else {
            field.neg(coeff)
        };
        out.add_term(mono, c);
        return;
    }
    for col in 0..n {
        if used[col] {
            continue;
        }
        let Some((m, c)) = lt[row][col] else {
            continue;
        };
        // columns already taken to the right of `col` each form an inversion
        let new_inv = used[col + 1..].iter().filter(|&&u| u).count();
        used[col] = true;
        permutation_terms(
            lt,
            row + 1,
            used,
            inversions + new_inv,
            mono.mul(&m),
            field.mul(coeff, c),
            field,
            out,
        );
        used[col] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::select_lambda;
    use crate::invariants::act;
    use crate::matgroups::ProductElement;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn matrix(field: PrimeField, entries: Vec<Vec<&str>>) -> CovariantMatrix {
        let n = entries.len();
        let e = entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| Polynomial::parse(s, field).unwrap())
                    .collect()
            })
            .collect();
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        CovariantMatrix::from_entries(field, labels.clone(), labels, e).unwrap()
    }

    /// Determinant of a small polynomial matrix by cofactor expansion.
    fn cofactor_det(m: &[Vec<Polynomial>]) -> Polynomial {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Polynomial::zero(m[0][0].field());
        for j in 0..n {
            let minor: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, f)| f.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * &cofactor_det(&minor);
            acc = if j % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }

    #[test]
    fn covariant_matrix_shape() {
        let f = fp(3);
        let m = build_covariant_matrix(f, select_lambda(f)).unwrap();
        assert_eq!(m.size(), 8);
        assert_eq!(m.entry(0, 1).to_text(), "x1*y1 + x2*y2");
        let basis = covariant_basis(f, select_lambda(f)).unwrap();
        for (j, b) in basis.members.iter().enumerate() {
            assert_eq!(m.entry(0, j), &b.poly);
        }
        assert_eq!(m.degree_bound(), 32);
    }

    #[test]
    fn basis_is_fixed_by_the_diagonal() {
        for p in [3u64, 5] {
            let f = fp(p);
            let lambda = select_lambda(f);
            let group = orthogonal_group(f, OrthogonalType::Minus, Some(lambda)).unwrap();
            for b in covariant_basis(f, lambda).unwrap().members {
                for g in group.elements() {
                    assert_eq!(act(&ProductElement::new(*g, *g), &b.poly).unwrap(), b.poly);
                }
            }
        }
    }

    #[test]
    fn extension_degrees() {
        assert_eq!(extension_degree_for(3, 32), 8);
        assert_eq!(extension_degree_for(5, 72), 6);
        assert_eq!(extension_degree_for(7, 128), 5);
        assert_eq!(extension_degree_for(7, 0), 3);
    }

    #[test]
    fn duplicated_row_is_reported_zero() {
        let f = fp(5);
        let m = matrix(f, vec![vec!["x1", "y1"], vec!["x1", "y1"]]);
        let v = det_nonzero(&m, 7, 3).unwrap();
        assert!(!v.nonzero);
        assert_eq!(v.trials, 3);
        assert!(v.failure_bound.value <= 1e-6);
        assert_eq!(v.failure_bound.numerator, 2);
        assert_eq!(v.failure_bound.denominator, 625);
    }

    #[test]
    fn nonzero_verdict_is_reproducible() {
        let f = fp(7);
        let m = matrix(f, vec![vec!["x1", "y1"], vec!["x2", "y2"]]);
        let a = det_nonzero(&m, 3, 2).unwrap();
        let b = det_nonzero(&m, 3, 2).unwrap();
        assert!(a.nonzero);
        assert_eq!(a, b);
        assert_eq!(a.failure_bound.numerator, 0);
        // the witness really is a nonvanishing point of x1·y2 − x2·y1
        let ext = ExtensionField::new(f, a.extension_degree).unwrap();
        let w: [ExtElement; 4] = a.witness.clone().unwrap().try_into().unwrap();
        let det = Polynomial::parse("x1*y2 - x2*y1", f).unwrap();
        assert_eq!(det.evaluate(&ext, &w).unwrap(), a.witness_value.unwrap());
    }

    #[test]
    fn ext_determinant_matches_cofactor_expansion() {
        let f = fp(5);
        let m = matrix(
            f,
            vec![
                vec!["x1", "y1 + 2*x2", "3"],
                vec!["x2", "x1 + y2", "1"],
                vec!["y2", "y1", "2"],
            ],
        );
        let ext = ExtensionField::new(f, 3).unwrap();
        let exact = cofactor_det(&m.entries);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let point: [ExtElement; 4] =
                std::array::from_fn(|_| random_ext_element(&ext, &mut rng));
            let values = m
                .entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| e.evaluate(&ext, &point).unwrap())
                        .collect()
                })
                .collect();
            assert_eq!(
                ext_determinant(&ext, values),
                exact.evaluate(&ext, &point).unwrap()
            );
        }
    }

    #[test]
    fn leading_term_det_examples() {
        let f = fp(3);
        let id = matrix(f, vec![vec!["1", "0"], vec!["0", "1"]]);
        assert_eq!(
            leading_term_matrix_det(&id, MonomialOrder::Lex).unwrap(),
            Polynomial::one(f)
        );
        let sing = matrix(f, vec![vec!["x1 + y2", "y1"], vec!["x1", "y1 + x2"]]);
        assert!(leading_term_matrix_det(&sing, MonomialOrder::Lex)
            .unwrap()
            .is_zero());
        let m = matrix(f, vec![vec!["x1", "y1"], vec!["x2", "y2"]]);
        assert_eq!(
            leading_term_matrix_det(&m, MonomialOrder::Lex).unwrap(),
            cofactor_det(&m.entries)
        );
        let f5 = fp(5);
        let m5 = matrix(f5, vec![vec!["1"]]);
        assert_eq!(
            leading_term_matrix_det(&m5, MonomialOrder::Lex),
            Err(Error::PrimeTooLargeForExact(5))
        );
    }

    #[test]
    fn row_permutation_keeps_verdict() {
        let f = fp(3);
        let m = build_covariant_matrix(f, select_lambda(f)).unwrap();
        let perm: Vec<usize> = (0..8).rev().collect();
        let pm = m.permute_rows(&perm).unwrap();
        for seed in 0..3 {
            assert_eq!(
                det_nonzero(&m, seed, 3).unwrap().nonzero,
                det_nonzero(&pm, seed, 3).unwrap().nonzero
            );
        }
    }
}
