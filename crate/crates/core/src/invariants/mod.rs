//! Group actions on `F_p[x1, x2, y1, y2]`, averaging and transfer operators,
//! graded fixed spaces, Hilbert series arithmetic and the two verification
//! engines (subalgebra generation and free-module bases).

mod graded;
mod linalg;
mod series;
mod verify;

pub use graded::{
    fixed_space, fixed_space_in, graded_fixed_spaces, hilbert_dims, DegreeBasis, GradedBasis,
};
pub use linalg::{null_space, Echelon, MonomialIndex, Support};
pub use series::{
    hilbert_denominator, quotient_numerator, s_invariant, series_expand, IntPoly, SInvariant,
    SeriesQuotient,
};
pub use verify::{
    relative_reynolds_image_dims, verify_free_basis, verify_generating_set,
    verify_generating_set_in, DegreeCheck, FreeBasisReport, GenerationReport, LabeledPoly,
};

use crate::error::{Error, Result};
use crate::fields::PrimeField;
use crate::matgroups::{coset_representatives, Mat2, MatrixGroup, ProductElement, ProductGroup};
use crate::polyring::{Mat4, Polynomial};

/// Anything that acts on the four variables through a 4×4 matrix.
pub trait Actor {
    fn action_matrix(&self) -> Result<Mat4>;
}

impl Actor for Mat2 {
    fn action_matrix(&self) -> Result<Mat4> {
        Mat2::action_matrix(self)
    }
}

impl Actor for ProductElement {
    fn action_matrix(&self) -> Result<Mat4> {
        ProductElement::action_matrix(self)
    }
}

impl Actor for Mat4 {
    fn action_matrix(&self) -> Result<Mat4> {
        Ok(*self)
    }
}

/// A finite group acting linearly on `F_p[x1, x2, y1, y2]`.
///
/// A [`MatrixGroup`] acts diagonally on vector and covector; a
/// [`ProductGroup`] acts factorwise.
pub trait LinearAction: Sync {
    fn field(&self) -> PrimeField;
    fn order(&self) -> usize;
    /// Action matrices of a generating set.
    fn generator_actions(&self) -> Vec<Mat4>;
    /// Action matrices of every element, produced lazily.
    fn action_matrices(&self) -> Box<dyn Iterator<Item = Mat4> + '_>;
}

impl LinearAction for MatrixGroup {
    fn field(&self) -> PrimeField {
        MatrixGroup::field(self)
    }

    fn order(&self) -> usize {
        MatrixGroup::order(self)
    }

    fn generator_actions(&self) -> Vec<Mat4> {
        self.generators()
            .iter()
            .map(|g| g.action_matrix().expect("group elements are invertible"))
            .collect()
    }

    fn action_matrices(&self) -> Box<dyn Iterator<Item = Mat4> + '_> {
        Box::new(
            self.elements()
                .iter()
                .map(|g| g.action_matrix().expect("group elements are invertible")),
        )
    }
}

impl LinearAction for ProductGroup {
    fn field(&self) -> PrimeField {
        self.left.field()
    }

    fn order(&self) -> usize {
        ProductGroup::order(self)
    }

    fn generator_actions(&self) -> Vec<Mat4> {
        self.generators()
            .iter()
            .map(|g| g.action_matrix().expect("group elements are invertible"))
            .collect()
    }

    fn action_matrices(&self) -> Box<dyn Iterator<Item = Mat4> + '_> {
        Box::new(
            self.elements()
                .map(|g| g.action_matrix().expect("group elements are invertible")),
        )
    }
}

/// `g · f`, the linear substitution by the action matrix of `g`.
pub fn act<A: Actor + ?Sized>(g: &A, f: &Polynomial) -> Result<Polynomial> {
    f.substitute_linear(&g.action_matrix()?)
}

/// Whether every generator of `g` fixes `f`.
pub fn is_invariant<G: LinearAction + ?Sized>(g: &G, f: &Polynomial) -> Result<bool> {
    check_field(g.field(), f)?;
    Ok(g.generator_actions()
        .iter()
        .all(|a| f.substitute_unchecked(a) == *f))
}

fn check_field(field: PrimeField, f: &Polynomial) -> Result<()> {
    if f.field() != field {
        return Err(Error::FieldMismatch {
            left: f.field().p(),
            right: field.p(),
        });
    }
    Ok(())
}

/// Orbit sum `Σ_{g ∈ G} g · f`.
pub fn transfer<G: LinearAction + ?Sized>(g: &G, f: &Polynomial) -> Result<Polynomial> {
    check_field(g.field(), f)?;
    let mut out = Polynomial::zero(f.field());
    for a in g.action_matrices() {
        for (m, &c) in f.substitute_unchecked(&a).terms() {
            out.add_term(*m, c);
        }
    }
    Ok(out)
}

/// Group average `|G|⁻¹ Σ_{g ∈ G} g · f`.
pub fn reynolds<G: LinearAction + ?Sized>(g: &G, f: &Polynomial) -> Result<Polynomial> {
    let field = g.field();
    let order = g.order();
    let residue = (order % field.p() as usize) as u32;
    if residue == 0 {
        return Err(Error::ModularOrder {
            p: field.p(),
            order,
        });
    }
    Ok(transfer(g, f)?.scale(field.inv(residue)?))
}

/// Coset average `[G:H]⁻¹ Σ_{r} r · f` over left coset representatives of
/// `H` in `G`, defined on `H`-invariants.
pub fn relative_reynolds(g: &MatrixGroup, h: &MatrixGroup, f: &Polynomial) -> Result<Polynomial> {
    check_field(g.field(), f)?;
    let reps = coset_representatives(g, h)?;
    if !is_invariant(h, f)? {
        return Err(Error::NotHInvariant);
    }
    let field = g.field();
    let index = reps.len();
    let residue = (index % field.p() as usize) as u32;
    if residue == 0 {
        return Err(Error::ModularIndex {
            p: field.p(),
            index,
        });
    }
    let mut out = Polynomial::zero(field);
    for r in &reps {
        for (m, &c) in act(r, f)?.terms() {
            out.add_term(*m, c);
        }
    }
    Ok(out.scale(field.inv(residue)?))
}
