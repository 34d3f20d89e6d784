//! Degree-by-degree certification of generating sets and free module bases.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::graded::{graded_fixed_spaces, FixedPieces, Grading, Piece};
use super::linalg::{Echelon, MonomialIndex, Support};
use super::series::{hilbert_denominator, series_expand, IntPoly};
use super::{is_invariant, relative_reynolds, LinearAction};
use crate::error::{Error, Result};
use crate::matgroups::MatrixGroup;
use crate::polyring::Polynomial;

/// A polynomial with a stable name used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledPoly {
    pub label: String,
    #[serde(serialize_with = "serialize_poly")]
    pub poly: Polynomial,
}

fn serialize_poly<S: serde::Serializer>(
    f: &Polynomial,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_text())
}

impl LabeledPoly {
    pub fn new(label: impl Into<String>, poly: Polynomial) -> Self {
        Self {
            label: label.into(),
            poly,
        }
    }
}

/// One degree of a dimension comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: u32,
    pub dim_expected: usize,
    pub dim_actual: usize,
    pub ok: bool,
}

impl DegreeCheck {
    pub fn new(degree: u32, dim_expected: usize, dim_actual: usize) -> Self {
        Self {
            degree,
            dim_expected,
            dim_actual,
            ok: dim_expected == dim_actual,
        }
    }
}

/// Outcome of [`verify_generating_set`]: subalgebra dimension (`dim_actual`)
/// against invariant dimension (`dim_expected`) per degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub max_degree: u32,
    pub per_degree: Vec<DegreeCheck>,
    pub pass: bool,
}

impl GenerationReport {
    pub fn first_failure(&self) -> Option<&DegreeCheck> {
        self.per_degree.iter().find(|c| !c.ok)
    }
}

fn check_homogeneous(f: &LabeledPoly) -> Result<()> {
    if !f.poly.is_zero() && !f.poly.is_homogeneous() {
        return Err(Error::NotHomogeneous(f.label.clone()));
    }
    Ok(())
}

fn check_field<G: LinearAction + ?Sized>(g: &G, f: &LabeledPoly) -> Result<()> {
    if f.poly.field() != g.field() {
        return Err(Error::FieldMismatch {
            left: f.poly.field().p(),
            right: g.field().p(),
        });
    }
    Ok(())
}

/// Whether the algebra generated by `gens` equals the invariant ring of `g`
/// in every degree `≤ max_degree`.
pub fn verify_generating_set<G: LinearAction + ?Sized>(
    g: &G,
    gens: &[LabeledPoly],
    max_degree: u32,
) -> Result<GenerationReport> {
    verify_generating_set_in(g, gens, max_degree, Support::All)
}

/// [`verify_generating_set`] inside the subring selected by `support`.
pub fn verify_generating_set_in<G: LinearAction + ?Sized>(
    g: &G,
    gens: &[LabeledPoly],
    max_degree: u32,
    support: Support,
) -> Result<GenerationReport> {
    for f in gens {
        check_field(g, f)?;
        check_homogeneous(f)?;
        if support == Support::XOnly && f.poly.terms().any(|(m, _)| m.y_degree() > 0) {
            return Err(Error::InvalidArgument(format!(
                "{} involves y-variables",
                f.label
            )));
        }
        if !is_invariant(g, &f.poly)? {
            return Err(Error::NotInvariantGenerator(f.label.clone()));
        }
    }
    let field = g.field();
    let grading = Grading::for_action(&g.generator_actions(), support)
        .refine_for(gens.iter().map(|f| &f.poly));
    let fixed = FixedPieces::compute(g, max_degree, grading);
    let gens: Vec<(Piece, &Polynomial)> = gens
        .iter()
        .filter_map(|f| Some((grading.piece_of(&f.poly)?, &f.poly)))
        .filter(|(pc, _)| pc.degree > 0)
        .collect();

    let mut sub: BTreeMap<Piece, (MonomialIndex, Vec<Vec<u32>>)> = BTreeMap::new();
    for pc in grading.pieces(0) {
        sub.insert(pc, (grading.index(pc), vec![vec![1]]));
    }
    let mut per_degree = vec![DegreeCheck::new(0, fixed.degree_dim(0), 1)];
    for d in 1..=max_degree {
        let grown: Vec<(Piece, MonomialIndex, Vec<Vec<u32>>)> = grading
            .pieces(d)
            .into_par_iter()
            .map(|pc| {
                let index = grading.index(pc);
                let target = fixed.dim(pc);
                let mut ech = Echelon::new(field, index.len());
                'gens: for (gp, gen) in &gens {
                    let Some(src) = pc.checked_sub(*gp) else {
                        continue;
                    };
                    let Some((src_index, rows)) = sub.get(&src) else {
                        continue;
                    };
                    for row in rows {
                        if ech.rank() == target {
                            break 'gens;
                        }
                        ech.insert(src_index.multiply_into(field, row, gen, &index));
                    }
                }
                let rows = ech.into_rows();
                (pc, index, rows)
            })
            .collect();
        let actual = grown.iter().map(|(_, _, rows)| rows.len()).sum();
        per_degree.push(DegreeCheck::new(d, fixed.degree_dim(d), actual));
        for (pc, index, rows) in grown {
            sub.insert(pc, (index, rows));
        }
    }
    let pass = per_degree.iter().all(|c| c.ok);
    Ok(GenerationReport {
        max_degree,
        per_degree,
        pass,
    })
}

/// One degree of a free-basis check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FreeBasisDegree {
    pub degree: u32,
    /// Dimension of `Σ_j F_p[hsop]·f_j` in this degree.
    pub span_dim: usize,
    /// Dimension of the invariants of the small group.
    pub fixed_dim: usize,
    /// Coefficient of `Σ_j t^{deg f_j} / ∏_i (1 − t^{deg h_i})`.
    pub series_dim: i128,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeBasisReport {
    pub max_degree: u32,
    pub per_degree: Vec<FreeBasisDegree>,
    pub pass: bool,
}

impl FreeBasisReport {
    pub fn first_failure(&self) -> Option<&FreeBasisDegree> {
        self.per_degree.iter().find(|c| !c.ok)
    }

    /// Spanning dimension against invariant dimension, per degree.
    pub fn checks(&self) -> Vec<DegreeCheck> {
        self.per_degree
            .iter()
            .map(|c| DegreeCheck {
                degree: c.degree,
                dim_expected: c.fixed_dim,
                dim_actual: c.span_dim,
                ok: c.ok,
            })
            .collect()
    }
}

/// Coordinates of an hsop monomial and the index of its last factor.
type TaggedProduct = (Vec<u32>, usize);

/// Whether `basis` is a free basis of the invariants of `small` over the
/// polynomial algebra generated by `hsop`, in every degree `≤ max_degree`.
pub fn verify_free_basis<S, B>(
    small: &S,
    big: &B,
    hsop: &[LabeledPoly],
    basis: &[LabeledPoly],
    max_degree: u32,
) -> Result<FreeBasisReport>
where
    S: LinearAction + ?Sized,
    B: LinearAction + ?Sized,
{
    for h in hsop {
        check_field(big, h)?;
        check_homogeneous(h)?;
        if h.poly.is_zero() || h.poly.homogeneous_degree() == Some(0) {
            return Err(Error::InvalidArgument(format!(
                "{} must have positive degree",
                h.label
            )));
        }
        if !is_invariant(big, &h.poly)? {
            return Err(Error::NotInvariantGenerator(h.label.clone()));
        }
    }
    for f in basis {
        check_field(small, f)?;
        check_homogeneous(f)?;
        if !is_invariant(small, &f.poly)? {
            return Err(Error::NotInvariantGenerator(f.label.clone()));
        }
    }
    let field = small.field();
    let grading = Grading::for_action(&small.generator_actions(), Support::All)
        .refine_for(hsop.iter().chain(basis).map(|f| &f.poly));
    let fixed = FixedPieces::compute(small, max_degree, grading);

    let basis_degrees: Vec<u32> = basis
        .iter()
        .filter_map(|f| f.poly.homogeneous_degree())
        .collect();
    let hsop_degrees: Vec<u32> = hsop
        .iter()
        .filter_map(|h| h.poly.homogeneous_degree())
        .collect();
    let series = series_expand(
        &IntPoly::sum_of_powers(&basis_degrees),
        &hilbert_denominator(&hsop_degrees),
        max_degree,
    )?;

    let hsop: Vec<(Piece, &Polynomial)> = hsop
        .iter()
        .map(|h| {
            (
                grading.piece_of(&h.poly).expect("nonzero homogeneous"),
                &h.poly,
            )
        })
        .collect();
    let basis: Vec<(Piece, &Polynomial)> = basis
        .iter()
        .filter_map(|f| Some((grading.piece_of(&f.poly)?, &f.poly)))
        .collect();

    // Monomials in the hsop, each tagged with the index of its last factor so
    // that every multiset of factors is produced once.
    let mut products: BTreeMap<Piece, (MonomialIndex, Vec<TaggedProduct>)> = BTreeMap::new();
    for d in 0..=max_degree {
        for pc in grading.pieces(d) {
            let index = grading.index(pc);
            let mut items = Vec::new();
            if d == 0 {
                items.push((vec![1], 0));
            }
            for (i, (hp, h)) in hsop.iter().enumerate() {
                let Some(src) = pc.checked_sub(*hp) else {
                    continue;
                };
                let Some((src_index, src_items)) = products.get(&src) else {
                    continue;
                };
                for (v, last) in src_items {
                    if *last <= i {
                        items.push((src_index.multiply_into(field, v, h, &index), i));
                    }
                }
            }
            products.insert(pc, (index, items));
        }
    }

    let per_degree: Vec<FreeBasisDegree> = (0..=max_degree)
        .into_par_iter()
        .map(|d| {
            let span_dim: usize = grading
                .pieces(d)
                .into_iter()
                .map(|pc| {
                    let index = grading.index(pc);
                    let mut ech = Echelon::new(field, index.len());
                    for (fp, f) in &basis {
                        let Some(src) = pc.checked_sub(*fp) else {
                            continue;
                        };
                        let Some((src_index, items)) = products.get(&src) else {
                            continue;
                        };
                        for (v, _) in items {
                            ech.insert(src_index.multiply_into(field, v, f, &index));
                        }
                    }
                    ech.rank()
                })
                .sum();
            let fixed_dim = fixed.degree_dim(d);
            let series_dim = series.coefficients[d as usize];
            FreeBasisDegree {
                degree: d,
                span_dim,
                fixed_dim,
                series_dim,
                ok: span_dim == fixed_dim && span_dim as i128 == series_dim,
            }
        })
        .collect();
    let pass = per_degree.iter().all(|c| c.ok);
    Ok(FreeBasisReport {
        max_degree,
        per_degree,
        pass,
    })
}

/// Per degree `≤ max_degree`: the dimension of the image of the
/// `h`-invariants under the relative Reynolds operator (`dim_actual`) against
/// the dimension of the `g`-invariants (`dim_expected`).
pub fn relative_reynolds_image_dims(
    g: &MatrixGroup,
    h: &MatrixGroup,
    max_degree: u32,
) -> Result<Vec<DegreeCheck>> {
    let field = g.field();
    let small = graded_fixed_spaces(h, max_degree, Support::All);
    let big = graded_fixed_spaces(g, max_degree, Support::All);
    (0..=max_degree)
        .into_par_iter()
        .map(|d| {
            let source = small.degree(d);
            let index = source.index();
            let mut ech = Echelon::new(field, index.len());
            for f in source.polynomials() {
                let image = relative_reynolds(g, h, &f)?;
                ech.insert(index.to_vector(&image).expect("degree preserved"));
            }
            Ok(DegreeCheck::new(d, big.degree(d).dim(), ech.rank()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::PrimeField;
    use crate::matgroups::{orthogonal_group, special_subgroup, OrthogonalType, ProductGroup};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn labeled(p: u64, items: &[&str]) -> Vec<LabeledPoly> {
        items
            .iter()
            .map(|s| LabeledPoly::new(*s, Polynomial::parse(s, fp(p)).unwrap()))
            .collect()
    }

    #[test]
    fn vector_invariants_of_o2plus_p5() {
        let g = orthogonal_group(fp(5), OrthogonalType::Plus, None).unwrap();
        let gens = labeled(5, &["x1*x2", "x1^4 + x2^4"]);
        let r = verify_generating_set_in(&g, &gens, 10, Support::XOnly).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_generating_set_in(&g, &gens[..1], 10, Support::XOnly).unwrap();
        assert_eq!(r.first_failure().unwrap().degree, 4);
    }

    #[test]
    fn rejects_non_invariant_and_inhomogeneous() {
        let g = orthogonal_group(fp(5), OrthogonalType::Plus, None).unwrap();
        assert_eq!(
            verify_generating_set(&g, &labeled(5, &["x1*y1"]), 4),
            Err(Error::NotInvariantGenerator("x1*y1".into()))
        );
        assert_eq!(
            verify_generating_set(&g, &labeled(5, &["x1*x2 + y1*y2*x1*x2"]), 4),
            Err(Error::NotHomogeneous("x1*x2 + y1*y2*x1*x2".into()))
        );
    }

    #[test]
    fn non_bihomogeneous_generators_fall_back_to_total_degree() {
        let g = special_subgroup(&orthogonal_group(fp(3), OrthogonalType::Plus, None).unwrap());
        let split = labeled(
            3,
            &[
                "x1*x2", "y1*y2", "x1*y1", "x2*y2", "x1^2", "x1*y2", "y2^2", "x2^2", "x2*y1",
                "y1^2",
            ],
        );
        let mixed = labeled(
            3,
            &[
                "x1*x2 + y1*y2",
                "x1*x2 - y1*y2",
                "x1*y1",
                "x2*y2",
                "x1^2",
                "x1*y2",
                "y2^2",
                "x2^2",
                "x2*y1",
                "y1^2",
            ],
        );
        let a = verify_generating_set(&g, &split, 6).unwrap();
        let b = verify_generating_set(&g, &mixed, 6).unwrap();
        assert!(a.pass && b.pass);
        assert_eq!(a.per_degree, b.per_degree);
    }

    #[test]
    fn free_basis_of_trivial_module() {
        // F_3[V ⊕ V*]^{G×G} is free of rank one over the four forms.
        let f = fp(3);
        let minus = orthogonal_group(f, OrthogonalType::Minus, None).unwrap();
        let g = ProductGroup::square(&minus);
        let hsop = labeled(
            3,
            &["x1^2 + x2^2", "x1^4 + x2^4", "y1^2 + y2^2", "y1^4 + y2^4"],
        );
        let one = vec![LabeledPoly::new("1", Polynomial::one(f))];
        let r = verify_free_basis(&g, &g, &hsop, &one, 10).unwrap();
        assert!(r.pass, "{r:?}");
        let bad = vec![LabeledPoly::new("0", Polynomial::zero(f))];
        let r = verify_free_basis(&g, &g, &hsop, &bad, 4).unwrap();
        assert_eq!(r.first_failure().unwrap().degree, 0);
    }

    #[test]
    fn relative_reynolds_surjects_at_p3() {
        let plus = orthogonal_group(fp(3), OrthogonalType::Plus, None).unwrap();
        let so = special_subgroup(&plus);
        let checks = relative_reynolds_image_dims(&plus, &so, 6).unwrap();
        assert!(checks.iter().all(|c| c.ok), "{checks:?}");
        assert_eq!(checks[2].dim_expected, fixed_space_dim(&plus, 2));
    }

    fn fixed_space_dim(g: &MatrixGroup, d: u32) -> usize {
        super::super::fixed_space(g, d).dim()
    }
}
