//! Finite subgroups of `GL₂(F_p)`: closure enumeration, the orthogonal groups
//! of plus and minus type, brute-force stabilizers, coset representatives and
//! the 4×4 matrices through which they act on `F_p[x1, x2, y1, y2]`.
//!
//! A group element `g` acts on the covector variables `(x1, x2)` through `g`
//! and on the vector variables `(y1, y2)` through `(gᵀ)⁻¹`, so the pairing
//! `x1·y1 + x2·y2` is fixed by all of `GL₂`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{primitive_root, select_lambda, FieldElement, PrimeField};
use crate::polyring::Mat4;

/// Upper bound on enumerated group sizes.
pub const CLOSURE_BUDGET: usize = 1_000_000;

/// Largest prime accepted by the `p⁴` brute-force enumerations.
pub const BRUTE_FORCE_MAX_P: u32 = 13;

/// 2×2 matrix over `F_p`, row-major. Orders row-major by entries, which is the
/// canonical element order of every [`MatrixGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    entries: [u32; 4],
    field: PrimeField,
}

impl Mat2 {
    pub fn new(field: PrimeField, rows: [[i64; 2]; 2]) -> Self {
        Self {
            entries: [
                field.reduce(rows[0][0]),
                field.reduce(rows[0][1]),
                field.reduce(rows[1][0]),
                field.reduce(rows[1][1]),
            ],
            field,
        }
    }

    pub fn identity(field: PrimeField) -> Self {
        Self::new(field, [[1, 0], [0, 1]])
    }

    pub fn diagonal(field: PrimeField, a: i64, d: i64) -> Self {
        Self::new(field, [[a, 0], [0, d]])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn rows(&self) -> [[u32; 2]; 2] {
        let e = self.entries;
        [[e[0], e[1]], [e[2], e[3]]]
    }

    pub fn det(&self) -> u32 {
        let f = self.field;
        let e = self.entries;
        f.sub(f.mul(e[0], e[3]), f.mul(e[1], e[2]))
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1, 0, 0, 1]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let f = self.field;
        let (a, b) = (self.entries, o.entries);
        let dot = |x: u32, y: u32, z: u32, w: u32| f.add(f.mul(x, y), f.mul(z, w));
        Mat2 {
            entries: [
                dot(a[0], b[0], a[1], b[2]),
                dot(a[0], b[1], a[1], b[3]),
                dot(a[2], b[0], a[3], b[2]),
                dot(a[2], b[1], a[3], b[3]),
            ],
            field: f,
        }
    }

    pub fn transpose(&self) -> Mat2 {
        let e = self.entries;
        Mat2 {
            entries: [e[0], e[2], e[1], e[3]],
            field: self.field,
        }
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let f = self.field;
        let d = f.inv(self.det()).map_err(|_| Error::SingularMatrix)?;
        let e = self.entries;
        Ok(Mat2 {
            entries: [
                f.mul(e[3], d),
                f.mul(f.neg(e[1]), d),
                f.mul(f.neg(e[2]), d),
                f.mul(e[0], d),
            ],
            field: f,
        })
    }

    pub fn pow(&self, mut n: u64) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity(self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative order of an invertible matrix (bounded by `p²`).
    pub fn order(&self) -> Result<u64> {
        if self.det() == 0 {
            return Err(Error::SingularMatrix);
        }
        let mut acc = *self;
        let mut n = 1u64;
        while !acc.is_identity() {
            acc = acc.mul(self);
            n += 1;
        }
        Ok(n)
    }

    /// `block-diag(g, (gᵀ)⁻¹)`.
    pub fn action_matrix(&self) -> Result<Mat4> {
        let it = self.transpose().inverse()?;
        Ok(Mat4::block_diag(self.field, self.entries, it.entries))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.entries;
        write!(f, "[[{},{}],[{},{}]]", e[0], e[1], e[2], e[3])
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupLabel {
    SO2Plus,
    O2Plus,
    O2Minus,
    GL2,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrthogonalType {
    Plus,
    Minus,
}

/// An enumerated finite subgroup of `GL₂(F_p)`.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: PrimeField,
    elements: Vec<Mat2>,
    generators: Vec<Mat2>,
    label: GroupLabel,
    lambda: Option<FieldElement>,
    /// `σ` for the minus type: a rotation of order `p + 1`.
    rotation: Option<Mat2>,
    notes: Vec<String>,
}

impl MatrixGroup {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted, deduplicated elements.
    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn lambda(&self) -> Option<FieldElement> {
        self.lambda
    }

    pub fn rotation(&self) -> Option<Mat2> {
        self.rotation
    }

    /// Anomalies encountered while constructing the group.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn contains(&self, g: &Mat2) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.field == other.field && self.elements.iter().all(|g| other.contains(g))
    }

    /// Verifies identity membership and closure under products and inverses.
    pub fn validate(&self) -> bool {
        let id = Mat2::identity(self.field);
        self.contains(&id)
            && self.elements.iter().all(|g| {
                g.inverse().map(|gi| self.contains(&gi)).unwrap_or(false)
                    && self.generators.iter().all(|h| self.contains(&g.mul(h)))
            })
    }

    fn with_label(mut self, label: GroupLabel) -> Self {
        self.label = label;
        self
    }
}

/// Smallest subgroup containing `generators`: breadth-first search from the
/// identity, multiplying on the right by each generator in the given order;
/// elements are returned sorted row-major.
pub fn closure(generators: &[Mat2], field: PrimeField) -> Result<MatrixGroup> {
    for g in generators {
        if g.field() != field {
            return Err(Error::FieldMismatch {
                left: field.p(),
                right: g.field().p(),
            });
        }
        if g.det() == 0 {
            return Err(Error::SingularGenerator(g.to_string()));
        }
    }
    let id = Mat2::identity(field);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let gh = g.mul(h);
            if seen.insert(gh) {
                if seen.len() > CLOSURE_BUDGET {
                    return Err(Error::ClosureBudgetExceeded(CLOSURE_BUDGET));
                }
                queue.push_back(gh);
            }
        }
    }
    let mut elements: Vec<Mat2> = seen.into_iter().collect();
    elements.sort();
    Ok(MatrixGroup {
        field,
        elements,
        generators: generators.to_vec(),
        label: GroupLabel::Custom,
        lambda: None,
        rotation: None,
        notes: Vec::new(),
    })
}

/// `ξ = [[0,1],[1,0]]`.
pub fn xi(field: PrimeField) -> Mat2 {
    Mat2::new(field, [[0, 1], [1, 0]])
}

/// `τ_a = diag(a, a⁻¹)`.
pub fn tau(a: FieldElement) -> Result<Mat2> {
    let inv = a.inverse()?;
    Ok(Mat2::diagonal(
        a.field(),
        a.value() as i64,
        inv.value() as i64,
    ))
}

/// `η = diag(−1, 1)`.
pub fn eta(field: PrimeField) -> Mat2 {
    Mat2::diagonal(field, -1, 1)
}

/// The rotation `[[a, λ⁻¹·b], [b, a]]` with `a² − λ⁻¹·b² = 1`. For `λ = −1`
/// this is `[[a, −b], [b, a]]` with `a² + b² = 1`.
pub fn rotation(lambda: FieldElement, a: u32, b: u32) -> Result<Mat2> {
    let f = lambda.field();
    let li = lambda.inverse()?.value();
    Ok(Mat2::new(
        f,
        [[a as i64, f.mul(li, b) as i64], [b as i64, a as i64]],
    ))
}

/// First pair `(a, b)` in lexicographic order with `a² − λ⁻¹b² = 1` whose
/// rotation has order exactly `p + 1`. Pairs in `F_p^× × F_p^×` are tried
/// first; if none qualifies (this happens for `p = 3`, where `a² + b² = 1`
/// forces `ab = 0`), `a = 0` is admitted and the fallback is recorded.
fn find_rotation(lambda: FieldElement) -> Result<(Mat2, Option<String>)> {
    let f = lambda.field();
    let p = f.p();
    let li = lambda.inverse()?.value();
    let on_conic = |a: u32, b: u32| f.sub(f.mul(a, a), f.mul(li, f.mul(b, b))) == 1;
    let search = |a_range: std::ops::Range<u32>| -> Result<Option<Mat2>> {
        for a in a_range {
            for b in 1..p {
                if on_conic(a, b) {
                    let s = rotation(lambda, a, b)?;
                    if s.order()? == p as u64 + 1 {
                        return Ok(Some(s));
                    }
                }
            }
        }
        Ok(None)
    };
    if let Some(s) = search(1..p)? {
        return Ok((s, None));
    }
    if let Some(s) = search(0..1)? {
        let note = format!("no rotation of order p+1 with a, b both nonzero; used {s} (a = 0)");
        return Ok((s, Some(note)));
    }
    Err(Error::NoGeneratorFound {
        p,
        lambda: lambda.value(),
    })
}

/// `O₂⁺(F_p) = ⟨ξ, τ_a⟩` with `a` the smallest primitive root, or
/// `O₂⁻(F_p) = ⟨η, σ⟩` preserving `x1² − λ·x2²`.
pub fn orthogonal_group(
    field: PrimeField,
    kind: OrthogonalType,
    lambda: Option<FieldElement>,
) -> Result<MatrixGroup> {
    match kind {
        OrthogonalType::Plus => {
            let a = primitive_root(field);
            let g = closure(&[xi(field), tau(a)?], field)?;
            Ok(g.with_label(GroupLabel::O2Plus))
        }
        OrthogonalType::Minus => {
            let lambda = lambda.unwrap_or_else(|| select_lambda(field));
            if lambda.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.p(),
                    right: lambda.field().p(),
                });
            }
            if field.is_square(lambda.value()) {
                return Err(Error::InvalidArgument(format!(
                    "lambda = {lambda} is a square in F_{}",
                    field.p()
                )));
            }
            let (sigma, note) = find_rotation(lambda)?;
            let mut g = closure(&[eta(field), sigma], field)?.with_label(GroupLabel::O2Minus);
            g.lambda = Some(lambda);
            g.rotation = Some(sigma);
            g.notes.extend(note);
            Ok(g)
        }
    }
}

/// Every `g ∈ GL₂(F_p)` with `g·D·gᵀ = D`, i.e. every `g` fixing the quadratic
/// form `xᵀ·D·x` under the action on `(x1, x2)`. Independent of
/// [`orthogonal_group`]; costs `p⁴`.
pub fn stabilizer_bruteforce(field: PrimeField, form: &Mat2) -> Result<MatrixGroup> {
    let p = field.p();
    if p > BRUTE_FORCE_MAX_P {
        return Err(Error::PrimeTooLarge {
            p,
            max: BRUTE_FORCE_MAX_P,
        });
    }
    if form.det() == 0 || form.transpose() != *form {
        return Err(Error::InvalidArgument(
            "form must be symmetric and invertible".into(),
        ));
    }
    let mut elements = Vec::new();
    for g in gl2_elements(field) {
        if g.mul(form).mul(&g.transpose()) == *form {
            elements.push(g);
        }
    }
    elements.sort();
    Ok(MatrixGroup {
        field,
        generators: elements.clone(),
        elements,
        label: GroupLabel::Custom,
        lambda: None,
        rotation: None,
        notes: Vec::new(),
    })
}

fn gl2_elements(field: PrimeField) -> impl Iterator<Item = Mat2> {
    let p = field.p() as i64;
    (0..p.pow(4)).filter_map(move |n| {
        let g = Mat2::new(
            field,
            [[n / (p * p * p), (n / (p * p)) % p], [(n / p) % p, n % p]],
        );
        (g.det() != 0).then_some(g)
    })
}

/// `GL₂(F_p)` itself, for `p ≤ 13`.
pub fn general_linear(field: PrimeField) -> Result<MatrixGroup> {
    let p = field.p();
    if p > BRUTE_FORCE_MAX_P {
        return Err(Error::PrimeTooLarge {
            p,
            max: BRUTE_FORCE_MAX_P,
        });
    }
    let mut elements: Vec<Mat2> = gl2_elements(field).collect();
    elements.sort();
    let a = primitive_root(field).value() as i64;
    Ok(MatrixGroup {
        field,
        elements,
        generators: vec![
            Mat2::diagonal(field, a, 1),
            Mat2::new(field, [[-1, 1], [-1, 0]]),
        ],
        label: GroupLabel::GL2,
        lambda: None,
        rotation: None,
        notes: Vec::new(),
    })
}

/// Determinant-one elements. For `O₂⁺` this is `SO₂⁺ = ⟨τ_a⟩`.
pub fn special_subgroup(g: &MatrixGroup) -> MatrixGroup {
    let elements: Vec<Mat2> = g
        .elements
        .iter()
        .copied()
        .filter(|m| m.det() == 1)
        .collect();
    let (label, generators) = match g.label {
        GroupLabel::O2Plus => (
            GroupLabel::SO2Plus,
            vec![tau(primitive_root(g.field)).expect("primitive root is nonzero")],
        ),
        _ => (GroupLabel::Custom, elements.clone()),
    };
    MatrixGroup {
        field: g.field,
        elements,
        generators,
        label,
        lambda: g.lambda,
        rotation: g.rotation,
        notes: Vec::new(),
    }
}

/// One representative per left coset `gH`: the identity first, then the
/// smallest element (in canonical order) of each remaining coset. For
/// `O₂⁺ / SO₂⁺` this yields `[I₂, ξ]`.
pub fn coset_representatives(g: &MatrixGroup, h: &MatrixGroup) -> Result<Vec<Mat2>> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotASubgroup);
    }
    let mut covered: BTreeSet<Mat2> = BTreeSet::new();
    let mut reps = Vec::new();
    let id = Mat2::identity(g.field);
    for x in std::iter::once(id).chain(g.elements.iter().copied()) {
        if covered.contains(&x) {
            continue;
        }
        reps.push(x);
        covered.extend(h.elements.iter().map(|k| x.mul(k)));
    }
    Ok(reps)
}

/// Element `(g1, g2)` of a direct product; `g1` acts on the covector
/// variables and `g2` on the vector variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductElement {
    pub left: Mat2,
    pub right: Mat2,
}

impl ProductElement {
    pub fn new(left: Mat2, right: Mat2) -> Self {
        Self { left, right }
    }

    /// `block-diag(g1, (g2ᵀ)⁻¹)`.
    pub fn action_matrix(&self) -> Result<Mat4> {
        if self.left.field() != self.right.field() {
            return Err(Error::FieldMismatch {
                left: self.left.field().p(),
                right: self.right.field().p(),
            });
        }
        if self.left.det() == 0 {
            return Err(Error::SingularMatrix);
        }
        let it = self.right.transpose().inverse()?;
        Ok(Mat4::block_diag(
            self.left.field(),
            self.left.entries(),
            it.entries(),
        ))
    }

    pub fn mul(&self, o: &ProductElement) -> ProductElement {
        ProductElement {
            left: self.left.mul(&o.left),
            right: self.right.mul(&o.right),
        }
    }
}

impl fmt::Display for ProductElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// `G₁ × G₂`, iterated lazily by pairs.
#[derive(Clone, Debug)]
pub struct ProductGroup {
    pub left: MatrixGroup,
    pub right: MatrixGroup,
}

impl ProductGroup {
    pub fn new(left: MatrixGroup, right: MatrixGroup) -> Result<Self> {
        if left.field() != right.field() {
            return Err(Error::FieldMismatch {
                left: left.field().p(),
                right: right.field().p(),
            });
        }
        Ok(Self { left, right })
    }

    /// `G × G`.
    pub fn square(g: &MatrixGroup) -> Self {
        Self {
            left: g.clone(),
            right: g.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.left.order() * self.right.order()
    }

    pub fn elements(&self) -> impl Iterator<Item = ProductElement> + '_ {
        self.left.elements.iter().flat_map(move |&a| {
            self.right
                .elements
                .iter()
                .map(move |&b| ProductElement::new(a, b))
        })
    }

    /// `(g, 1)` and `(1, g)` for every generator `g` of either factor.
    pub fn generators(&self) -> Vec<ProductElement> {
        let f = self.left.field();
        let id = Mat2::identity(f);
        let mut out: Vec<ProductElement> = self
            .left
            .generators
            .iter()
            .map(|&g| ProductElement::new(g, id))
            .collect();
        out.extend(
            self.right
                .generators
                .iter()
                .map(|&g| ProductElement::new(id, g)),
        );
        out
    }
}

/// Representatives of `(G × G) / Δ(G)` for `G = O₂⁻` built by
/// [`orthogonal_group`]: `(σ^i, 1)` for `i = 0..=p`, then `(ησ^i, 1)`.
pub fn diagonal_coset_representatives(g: &MatrixGroup) -> Result<Vec<ProductElement>> {
    let sigma = g
        .rotation
        .ok_or_else(|| Error::InvalidArgument("group has no distinguished rotation".into()))?;
    let f = g.field;
    let id = Mat2::identity(f);
    let eta = eta(f);
    let n = sigma.order()?;
    let mut reps: Vec<ProductElement> = (0..n)
        .map(|i| ProductElement::new(sigma.pow(i), id))
        .collect();
    reps.extend((0..n).map(|i| ProductElement::new(eta.mul(&sigma.pow(i)), id)));
    // Left cosets of the diagonal are labelled by g1·g2⁻¹; these must be
    // pairwise distinct and exhaust G.
    let labels: BTreeSet<Mat2> = reps
        .iter()
        .map(|r| r.left.mul(&r.right.inverse().expect("invertible")))
        .collect();
    if labels.len() != reps.len()
        || labels.len() != g.order()
        || !labels.iter().all(|l| g.contains(l))
    {
        return Err(Error::NotASubgroup);
    }
    Ok(reps)
}
