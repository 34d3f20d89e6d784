//! Named polynomial families: generating sets, vector-invariant families,
//! parameter forms, the covariant basis and the `p = 3` relations.
//!
//! Every invariant family is checked against its group at construction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldElement, PrimeField};
use crate::invariants::{is_invariant, transfer, LabeledPoly, LinearAction};
use crate::matgroups::{orthogonal_group, special_subgroup, MatrixGroup, OrthogonalType};
use crate::polyring::{Monomial, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyName {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "vector_so2plus")]
    VectorSO2Plus,
    #[serde(rename = "vector_plus")]
    VectorPlus,
    #[serde(rename = "vector_minus")]
    VectorMinus,
    #[serde(rename = "covariant_basis")]
    CovariantBasis,
    #[serde(rename = "forms")]
    Forms,
    #[serde(rename = "p3_relations")]
    P3Relations,
}

/// An ordered, labelled list of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedFamily {
    pub name: FamilyName,
    pub p: u32,
    pub lambda: Option<u32>,
    pub members: Vec<LabeledPoly>,
}

impl NamedFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn polynomials(&self) -> impl Iterator<Item = &Polynomial> {
        self.members.iter().map(|m| &m.poly)
    }

    pub fn get(&self, label: &str) -> Option<&Polynomial> {
        self.members
            .iter()
            .find(|m| m.label == label)
            .map(|m| &m.poly)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("families serialize")
    }
}

fn mono(field: PrimeField, u: u32, v: u32, s: u32, t: u32) -> Polynomial {
    Polynomial::term(field, Monomial::new(u, v, s, t), 1)
}

/// `u = x1·y1 + x2·y2`.
pub fn pairing(field: PrimeField) -> Polynomial {
    &mono(field, 1, 0, 1, 0) + &mono(field, 0, 1, 0, 1)
}

/// `x1^k − c·x2^k` (or the same in `y1, y2`).
fn binary_form(field: PrimeField, k: u32, c: FieldElement, on_y: bool) -> Polynomial {
    let (a, b) = if on_y {
        (Monomial::new(0, 0, k, 0), Monomial::new(0, 0, 0, k))
    } else {
        (Monomial::new(k, 0, 0, 0), Monomial::new(0, k, 0, 0))
    };
    Polynomial::from_terms(field, [(a, 1), (b, -(c.value() as i64))])
}

fn checked(family: NamedFamily, group: &dyn LinearAction) -> Result<NamedFamily> {
    for m in &family.members {
        if !is_invariant(group, &m.poly)? {
            return Err(Error::NotInvariantGenerator(m.label.clone()));
        }
    }
    Ok(family)
}

fn minus_group(field: PrimeField, lambda: FieldElement) -> Result<MatrixGroup> {
    orthogonal_group(field, OrthogonalType::Minus, Some(lambda))
}

/// Generators of `F_p[V ⊕ V*]^{SO₂⁺}`: `x1x2, y1y2, x1y1, x2y2` and
/// `x1^{p−1−i}·y2^i, x2^{p−1−i}·y1^i` for `0 ≤ i ≤ p − 1`.
pub fn set_a(field: PrimeField) -> Result<NamedFamily> {
    let p = field.p();
    let mut members = vec![
        LabeledPoly::new("A.x1x2", mono(field, 1, 1, 0, 0)),
        LabeledPoly::new("A.y1y2", mono(field, 0, 0, 1, 1)),
        LabeledPoly::new("A.x1y1", mono(field, 1, 0, 1, 0)),
        LabeledPoly::new("A.x2y2", mono(field, 0, 1, 0, 1)),
    ];
    for i in 0..p {
        members.push(LabeledPoly::new(
            format!("A.x1y2[i={i}]"),
            mono(field, p - 1 - i, 0, 0, i),
        ));
    }
    for i in 0..p {
        members.push(LabeledPoly::new(
            format!("A.x2y1[i={i}]"),
            mono(field, 0, p - 1 - i, i, 0),
        ));
    }
    let family = NamedFamily {
        name: FamilyName::A,
        p,
        lambda: None,
        members,
    };
    let so = special_subgroup(&orthogonal_group(field, OrthogonalType::Plus, None)?);
    checked(family, &so)
}

/// Generators of `F_p[V ⊕ V*]^{O₂⁺}`: `x1x2, y1y2, u` and
/// `x1^{p−1−i}·y2^i + x2^{p−1−i}·y1^i` for `0 ≤ i ≤ p − 1`.
pub fn set_b(field: PrimeField) -> Result<NamedFamily> {
    let p = field.p();
    let mut members = vec![
        LabeledPoly::new("B.x1x2", mono(field, 1, 1, 0, 0)),
        LabeledPoly::new("B.y1y2", mono(field, 0, 0, 1, 1)),
        LabeledPoly::new("B.u", pairing(field)),
    ];
    for i in 0..p {
        members.push(LabeledPoly::new(
            format!("B.sym[i={i}]"),
            &mono(field, p - 1 - i, 0, 0, i) + &mono(field, 0, p - 1 - i, i, 0),
        ));
    }
    let family = NamedFamily {
        name: FamilyName::B,
        p,
        lambda: None,
        members,
    };
    checked(
        family,
        &orthogonal_group(field, OrthogonalType::Plus, None)?,
    )
}

/// The four forms `x1² − λx2², x1^{p+1} − λx2^{p+1}, y1² − λ⁻¹y2²,
/// y1^{p+1} − λ⁻¹y2^{p+1}`; together they generate the invariants of
/// `O₂⁻ × O₂⁻`.
pub fn forms(field: PrimeField, lambda: FieldElement) -> Result<NamedFamily> {
    let family = forms_unchecked(field, lambda, "forms")?;
    checked(family, &minus_group(field, lambda)?)
}

fn forms_unchecked(field: PrimeField, lambda: FieldElement, prefix: &str) -> Result<NamedFamily> {
    let p = field.p();
    let inv = lambda.inverse()?;
    let members = vec![
        LabeledPoly::new(format!("{prefix}.qx"), binary_form(field, 2, lambda, false)),
        LabeledPoly::new(
            format!("{prefix}.qx[p+1]"),
            binary_form(field, p + 1, lambda, false),
        ),
        LabeledPoly::new(format!("{prefix}.qy"), binary_form(field, 2, inv, true)),
        LabeledPoly::new(
            format!("{prefix}.qy[p+1]"),
            binary_form(field, p + 1, inv, true),
        ),
    ];
    Ok(NamedFamily {
        name: FamilyName::Forms,
        p,
        lambda: Some(lambda.value()),
        members,
    })
}

/// `Tr(x1^{p+1−i}·y1^i)` over `group`.
fn trace(field: PrimeField, group: &MatrixGroup, i: u32) -> Result<Polynomial> {
    let p = field.p();
    transfer(group, &mono(field, p + 1 - i, 0, i, 0))
}

/// Generators of `F_p[V ⊕ V*]^{O₂⁻}`: the four forms, `u`, and the traces
/// `Tr(x1^{p+1−i}·y1^i)` for `1 ≤ i ≤ p`.
pub fn set_c(field: PrimeField, lambda: FieldElement) -> Result<NamedFamily> {
    let group = minus_group(field, lambda)?;
    let mut members: Vec<LabeledPoly> = forms_unchecked(field, lambda, "C")?.members;
    members.push(LabeledPoly::new("C.u", pairing(field)));
    for i in 1..=field.p() {
        members.push(LabeledPoly::new(
            format!("C.tr[i={i}]"),
            trace(field, &group, i)?,
        ));
    }
    let family = NamedFamily {
        name: FamilyName::C,
        p: field.p(),
        lambda: Some(lambda.value()),
        members,
    };
    checked(family, &group)
}

/// `f_i = u^i` for `0 ≤ i ≤ p + 1` and `f_{p+1+j} = Tr(x1^{p+1−j}·y1^j)` for
/// `1 ≤ j ≤ p`.
pub fn covariant_basis(field: PrimeField, lambda: FieldElement) -> Result<NamedFamily> {
    let p = field.p();
    let group = minus_group(field, lambda)?;
    let u = pairing(field);
    let mut members: Vec<LabeledPoly> = (0..=p + 1)
        .map(|i| LabeledPoly::new(format!("f{i}"), u.pow(i)))
        .collect();
    for j in 1..=p {
        members.push(LabeledPoly::new(
            format!("f{}", p + 1 + j),
            trace(field, &group, j)?,
        ));
    }
    let family = NamedFamily {
        name: FamilyName::CovariantBasis,
        p,
        lambda: Some(lambda.value()),
        members,
    };
    checked(family, &group)
}

/// `{x1x2, x1^{p−1}, x2^{p−1}}`, generating `F_p[V]^{SO₂⁺}`.
pub fn vector_so2plus(field: PrimeField) -> Result<NamedFamily> {
    let p = field.p();
    let members = vec![
        LabeledPoly::new("V.x1x2", mono(field, 1, 1, 0, 0)),
        LabeledPoly::new("V.x1[p-1]", mono(field, p - 1, 0, 0, 0)),
        LabeledPoly::new("V.x2[p-1]", mono(field, 0, p - 1, 0, 0)),
    ];
    let family = NamedFamily {
        name: FamilyName::VectorSO2Plus,
        p,
        lambda: None,
        members,
    };
    let so = special_subgroup(&orthogonal_group(field, OrthogonalType::Plus, None)?);
    checked(family, &so)
}

/// `{x1x2, x1^{p−1} + x2^{p−1}}`, generating `F_p[V]^{O₂⁺}`.
pub fn vector_plus(field: PrimeField) -> Result<NamedFamily> {
    let p = field.p();
    let members = vec![
        LabeledPoly::new("V.x1x2", mono(field, 1, 1, 0, 0)),
        LabeledPoly::new(
            "V.sym[p-1]",
            &mono(field, p - 1, 0, 0, 0) + &mono(field, 0, p - 1, 0, 0),
        ),
    ];
    let family = NamedFamily {
        name: FamilyName::VectorPlus,
        p,
        lambda: None,
        members,
    };
    checked(
        family,
        &orthogonal_group(field, OrthogonalType::Plus, None)?,
    )
}

/// `{x1² − λx2², x1^{p+1} − λx2^{p+1}}`, generating `F_p[V]^{O₂⁻}`.
pub fn vector_minus(field: PrimeField, lambda: FieldElement) -> Result<NamedFamily> {
    let members = vec![
        LabeledPoly::new("V.qx", binary_form(field, 2, lambda, false)),
        LabeledPoly::new(
            "V.qx[p+1]",
            binary_form(field, field.p() + 1, lambda, false),
        ),
    ];
    let family = NamedFamily {
        name: FamilyName::VectorMinus,
        p: field.p(),
        lambda: Some(lambda.value()),
        members,
    };
    checked(family, &minus_group(field, lambda)?)
}

/// The two expressions `f1·f4 + f2·f3 − u·v` and `f1·f3 + f2·f4 − u² − v²`
/// with `f1 = x1x2, f2 = x1² + x2², f3 = y1y2, f4 = y1² + y2²,
/// u = x1y1 + x2y2, v = x1y2 + x2y1`, built over `field`. Over `F_3` both
/// vanish.
pub fn p3_relations(field: PrimeField) -> NamedFamily {
    let f1 = mono(field, 1, 1, 0, 0);
    let f2 = &mono(field, 2, 0, 0, 0) + &mono(field, 0, 2, 0, 0);
    let f3 = mono(field, 0, 0, 1, 1);
    let f4 = &mono(field, 0, 0, 2, 0) + &mono(field, 0, 0, 0, 2);
    let u = pairing(field);
    let v = &mono(field, 1, 0, 0, 1) + &mono(field, 0, 1, 1, 0);
    let r1 = &(&(&f1 * &f4) + &(&f2 * &f3)) - &(&u * &v);
    let r2 = &(&(&(&f1 * &f3) + &(&f2 * &f4)) - &(&u * &u)) - &(&v * &v);
    NamedFamily {
        name: FamilyName::P3Relations,
        p: field.p(),
        lambda: None,
        members: vec![LabeledPoly::new("rel1", r1), LabeledPoly::new("rel2", r2)],
    }
}

/// Fails with [`Error::RelationFailed`] naming the first nonzero member.
pub fn check_relations(family: &NamedFamily) -> Result<()> {
    match family.members.iter().find(|m| !m.poly.is_zero()) {
        Some(m) => Err(Error::RelationFailed(format!("{} = {}", m.label, m.poly))),
        None => Ok(()),
    }
}
