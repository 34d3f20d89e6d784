//! Per-degree fixed spaces and their dimensions.
//!
//! When every generator acts block-diagonally on `(x1, x2)` and `(y1, y2)`,
//! each degree splits into bidegree pieces `(a, d − a)` that are preserved
//! separately; fixed spaces and subalgebras are then computed piece by piece.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::linalg::{null_space, Echelon, MonomialIndex, Support};
use super::LinearAction;
use crate::fields::PrimeField;
use crate::polyring::{Mat4, Monomial, Polynomial};

/// A graded piece: a total degree, refined by x-degree when bigraded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Piece {
    pub degree: u32,
    pub x_degree: Option<u32>,
}

impl Piece {
    /// The piece `q` with `q + o = self`, if it exists.
    pub fn checked_sub(self, o: Piece) -> Option<Piece> {
        let degree = self.degree.checked_sub(o.degree)?;
        let x_degree = match (self.x_degree, o.x_degree) {
            (Some(a), Some(b)) => {
                let x = a.checked_sub(b)?;
                if x > degree {
                    return None;
                }
                Some(x)
            }
            _ => None,
        };
        Some(Piece { degree, x_degree })
    }
}

/// How a computation decomposes its graded pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Grading {
    pub bigraded: bool,
    pub support: Support,
}

impl Grading {
    pub fn for_action(gens: &[Mat4], support: Support) -> Self {
        Self {
            bigraded: gens.iter().all(Mat4::is_block_diagonal),
            support,
        }
    }

    /// Drops the bigrading unless every polynomial is bihomogeneous.
    pub fn refine_for<'a>(self, polys: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        let bigraded = self.bigraded && polys.into_iter().all(|f| bidegree(f).is_some());
        Self { bigraded, ..self }
    }

    pub fn pieces(&self, d: u32) -> Vec<Piece> {
        match (self.bigraded, self.support) {
            (false, _) => vec![Piece {
                degree: d,
                x_degree: None,
            }],
            (true, Support::XOnly) => vec![Piece {
                degree: d,
                x_degree: Some(d),
            }],
            (true, Support::All) => (0..=d)
                .rev()
                .map(|a| Piece {
                    degree: d,
                    x_degree: Some(a),
                })
                .collect(),
        }
    }

    /// The piece containing a nonzero homogeneous polynomial.
    pub fn piece_of(&self, f: &Polynomial) -> Option<Piece> {
        let degree = f.homogeneous_degree()?;
        let x_degree = if self.bigraded {
            Some(bidegree(f)?.0)
        } else {
            None
        };
        Some(Piece { degree, x_degree })
    }

    pub fn index(&self, piece: Piece) -> MonomialIndex {
        match piece.x_degree {
            Some(a) => MonomialIndex::bidegree(a, piece.degree - a),
            None => MonomialIndex::new(piece.degree, self.support),
        }
    }
}

/// `(x-degree, y-degree)` shared by every term, if any.
pub(crate) fn bidegree(f: &Polynomial) -> Option<(u32, u32)> {
    let mut terms = f.terms();
    let (m, _) = terms.next()?;
    let bd = (m.x_degree(), m.y_degree());
    terms
        .all(|(m, _)| (m.x_degree(), m.y_degree()) == bd)
        .then_some(bd)
}

/// Powers of the images of the four variables under one action matrix.
pub(crate) struct MonomialImages {
    powers: [Vec<Polynomial>; 4],
    field: PrimeField,
}

impl MonomialImages {
    pub fn new(a: &Mat4, max_degree: u32) -> Self {
        let field = a.field();
        let powers = std::array::from_fn(|j| {
            let image = Polynomial::from_terms(
                field,
                (0..4).map(|i| (Monomial::var(i), a.get(i, j) as i64)),
            );
            let mut pw = vec![Polynomial::one(field)];
            for k in 1..=max_degree as usize {
                let next = &pw[k - 1] * &image;
                pw.push(next);
            }
            pw
        });
        Self { powers, field }
    }

    pub fn image(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::one(self.field);
        for j in 0..4 {
            if m.0[j] > 0 {
                out = &out * &self.powers[j][m.0[j] as usize];
            }
        }
        out
    }
}

/// RREF basis of the fixed vectors of one piece.
pub(crate) fn fixed_piece(
    field: PrimeField,
    images: &[MonomialImages],
    index: &MonomialIndex,
) -> Vec<Vec<u32>> {
    let n = index.len();
    if n == 0 {
        return Vec::new();
    }
    let mut rows = vec![vec![0u32; n]; images.len() * n];
    for (gi, img) in images.iter().enumerate() {
        for (col, m) in index.monomials().iter().enumerate() {
            let mut image = img.image(m);
            image.add_term(*m, field.neg(1));
            for (mm, &c) in image.terms() {
                let row = index
                    .index_of(mm)
                    .expect("action preserves the graded piece");
                rows[gi * n + row][col] = c;
            }
        }
    }
    let mut ech = Echelon::new(field, n);
    for v in null_space(field, rows, n) {
        ech.insert(v);
    }
    ech.into_rows()
}

/// Fixed subspaces of all pieces of degree `≤ max_degree`.
pub(crate) struct FixedPieces {
    pub grading: Grading,
    pub pieces: BTreeMap<Piece, (MonomialIndex, Vec<Vec<u32>>)>,
}

impl FixedPieces {
    pub fn compute<G: LinearAction + ?Sized>(g: &G, max_degree: u32, grading: Grading) -> Self {
        let field = g.field();
        let images: Vec<MonomialImages> = g
            .generator_actions()
            .iter()
            .map(|a| MonomialImages::new(a, max_degree))
            .collect();
        let all: Vec<Piece> = (0..=max_degree).flat_map(|d| grading.pieces(d)).collect();
        let pieces = all
            .into_par_iter()
            .map(|piece| {
                let index = grading.index(piece);
                let rows = fixed_piece(field, &images, &index);
                (piece, (index, rows))
            })
            .collect();
        Self { grading, pieces }
    }

    pub fn dim(&self, piece: Piece) -> usize {
        self.pieces.get(&piece).map_or(0, |(_, rows)| rows.len())
    }

    pub fn degree_dim(&self, d: u32) -> usize {
        self.grading
            .pieces(d)
            .into_iter()
            .map(|pc| self.dim(pc))
            .sum()
    }
}

/// Basis of one homogeneous degree, as RREF rows over its grlex-descending
/// monomial basis.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    field: PrimeField,
    index: MonomialIndex,
    rows: Vec<Vec<u32>>,
}

impl DegreeBasis {
    fn assemble<'a>(
        field: PrimeField,
        degree: u32,
        support: Support,
        parts: impl IntoIterator<Item = (&'a MonomialIndex, &'a Vec<Vec<u32>>)>,
    ) -> Self {
        let index = MonomialIndex::new(degree, support);
        let mut keyed: Vec<(usize, Vec<u32>)> = Vec::new();
        for (part_index, rows) in parts {
            let map: Vec<usize> = part_index
                .monomials()
                .iter()
                .map(|m| index.index_of(m).expect("piece lies in its degree"))
                .collect();
            for r in rows {
                let mut v = vec![0u32; index.len()];
                for (i, &c) in r.iter().enumerate() {
                    v[map[i]] = c;
                }
                let pivot = v.iter().position(|&c| c != 0).expect("nonzero row");
                keyed.push((pivot, v));
            }
        }
        keyed.sort_by_key(|(pivot, _)| *pivot);
        Self {
            field,
            index,
            rows: keyed.into_iter().map(|(_, v)| v).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.index.degree()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.index
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.rows
            .iter()
            .map(|r| self.index.to_polynomial(self.field, r))
            .collect()
    }

    /// Whether `f` (homogeneous of this degree, or zero) lies in the span.
    pub fn contains(&self, f: &Polynomial) -> bool {
        let Some(v) = self.index.to_vector(f) else {
            return false;
        };
        let mut ech = Echelon::new(self.field, self.index.len());
        for r in &self.rows {
            ech.insert(r.clone());
        }
        ech.contains(&v)
    }
}

/// Fixed spaces for every degree `0..=D`.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    support: Support,
    degrees: Vec<DegreeBasis>,
}

impl GradedBasis {
    pub fn support(&self) -> Support {
        self.support
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.len() as u32 - 1
    }

    pub fn degree(&self, d: u32) -> &DegreeBasis {
        &self.degrees[d as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeBasis::dim).collect()
    }
}

/// Degree-`d` invariants of `g` in all four variables.
pub fn fixed_space<G: LinearAction + ?Sized>(g: &G, d: u32) -> DegreeBasis {
    fixed_space_in(g, d, Support::All)
}

/// Degree-`d` invariants of `g` restricted to `support`.
pub fn fixed_space_in<G: LinearAction + ?Sized>(g: &G, d: u32, support: Support) -> DegreeBasis {
    let gens = g.generator_actions();
    let grading = Grading::for_action(&gens, support);
    let images: Vec<MonomialImages> = gens.iter().map(|a| MonomialImages::new(a, d)).collect();
    let parts: Vec<(MonomialIndex, Vec<Vec<u32>>)> = grading
        .pieces(d)
        .into_par_iter()
        .map(|pc| {
            let index = grading.index(pc);
            let rows = fixed_piece(g.field(), &images, &index);
            (index, rows)
        })
        .collect();
    DegreeBasis::assemble(g.field(), d, support, parts.iter().map(|(i, r)| (i, r)))
}

/// Fixed spaces of `g` in every degree up to `max_degree`.
pub fn graded_fixed_spaces<G: LinearAction + ?Sized>(
    g: &G,
    max_degree: u32,
    support: Support,
) -> GradedBasis {
    let grading = Grading::for_action(&g.generator_actions(), support);
    let fixed = FixedPieces::compute(g, max_degree, grading);
    let degrees = (0..=max_degree)
        .map(|d| {
            let parts = grading.pieces(d).into_iter().map(|pc| {
                let (i, r) = &fixed.pieces[&pc];
                (i, r)
            });
            DegreeBasis::assemble(g.field(), d, support, parts)
        })
        .collect();
    GradedBasis { support, degrees }
}

/// `[dim fixed_space(g, d)]` for `d = 0..=max_degree`.
pub fn hilbert_dims<G: LinearAction + ?Sized>(g: &G, max_degree: u32) -> Vec<usize> {
    let grading = Grading::for_action(&g.generator_actions(), Support::All);
    let fixed = FixedPieces::compute(g, max_degree, grading);
    (0..=max_degree).map(|d| fixed.degree_dim(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{act, is_invariant};
    use crate::matgroups::{
        closure, orthogonal_group, special_subgroup, xi, Mat2, OrthogonalType, ProductGroup,
    };

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn so2plus(p: u64) -> crate::matgroups::MatrixGroup {
        special_subgroup(&orthogonal_group(fp(p), OrthogonalType::Plus, None).unwrap())
    }

    /// Dimension of the fixed space by brute force: the number of orbits of
    /// monomials is not enough for non-monomial groups, so the oracle solves
    /// `(g − 1)·c = 0` over the full degree for every group element.
    fn oracle_dim(g: &crate::matgroups::MatrixGroup, d: u32) -> usize {
        let f = g.field();
        let index = MonomialIndex::new(d, Support::All);
        let n = index.len();
        let mut rows = Vec::new();
        for h in g.elements() {
            let mut block = vec![vec![0u32; n]; n];
            for (col, m) in index.monomials().iter().enumerate() {
                let mono = Polynomial::term(f, *m, 1);
                let img = &act(h, &mono).unwrap() - &mono;
                for (mm, &c) in img.terms() {
                    block[index.index_of(mm).unwrap()][col] = c;
                }
            }
            rows.extend(block);
        }
        null_space(f, rows, n).len()
    }

    #[test]
    fn so2plus_low_degree_examples() {
        let g = so2plus(5);
        let b = fixed_space(&g, 2);
        assert_eq!(b.dim(), 4);
        for s in ["x1*x2", "y1*y2", "x1*y1", "x2*y2"] {
            assert!(b.contains(&Polynomial::parse(s, fp(5)).unwrap()));
        }
        assert_eq!(fixed_space(&so2plus(3), 2).dim(), 10);
        assert_eq!(fixed_space(&so2plus(7), 0).dim(), 1);
    }

    #[test]
    fn fixed_spaces_match_element_oracle() {
        for p in [3u64, 5] {
            let f = fp(p);
            for kind in [OrthogonalType::Plus, OrthogonalType::Minus] {
                let g = orthogonal_group(f, kind, None).unwrap();
                for d in 0..=5 {
                    assert_eq!(
                        fixed_space(&g, d).dim(),
                        oracle_dim(&g, d),
                        "p={p} {kind:?} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn non_block_generators_use_total_degree() {
        // swapping x1 with y1 does not preserve the bigrading
        let f = fp(3);
        let swap = Mat4::new(f, [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]]);
        let gens = [swap];
        assert!(!Grading::for_action(&gens, Support::All).bigraded);
        // The fixed space of the swap in degree 1: x1 + y1, x2, y2.
        let images = [MonomialImages::new(&swap, 1)];
        let idx = MonomialIndex::new(1, Support::All);
        assert_eq!(fixed_piece(f, &images, &idx).len(), 3);
    }

    #[test]
    fn bases_are_invariant_and_reduced() {
        let f = fp(5);
        let g = orthogonal_group(f, OrthogonalType::Minus, None).unwrap();
        let gb = graded_fixed_spaces(&g, 6, Support::All);
        assert_eq!(gb.max_degree(), 6);
        for d in 0..=6 {
            let b = gb.degree(d);
            for poly in b.polynomials() {
                assert!(is_invariant(&g, &poly).unwrap());
            }
            let pivots: Vec<usize> = b
                .rows()
                .iter()
                .map(|r| r.iter().position(|&c| c != 0).unwrap())
                .collect();
            assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            for (r, &pc) in b.rows().iter().zip(&pivots) {
                assert_eq!(r[pc], 1);
            }
            for (i, &pc) in pivots.iter().enumerate() {
                for (j, r) in b.rows().iter().enumerate() {
                    if i != j {
                        assert_eq!(r[pc], 0);
                    }
                }
            }
        }
        assert_eq!(gb.dims(), hilbert_dims(&g, 6));
    }

    #[test]
    fn product_hilbert_dims_p3() {
        let f = fp(3);
        let minus = orthogonal_group(f, OrthogonalType::Minus, None).unwrap();
        let g = ProductGroup::square(&minus);
        assert_eq!(hilbert_dims(&g, 8), vec![1, 0, 2, 0, 5, 0, 8, 0, 14]);
    }

    #[test]
    fn x_only_support() {
        let f = fp(5);
        let plus = orthogonal_group(f, OrthogonalType::Plus, None).unwrap();
        // F_5[x1, x2]^{O₂⁺} = F_5[x1x2, x1⁴ + x2⁴]
        let dims: Vec<usize> = (0..=8)
            .map(|d| fixed_space_in(&plus, d, Support::XOnly).dim())
            .collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 2, 0, 2, 0, 3]);
        let trivial = closure(&[Mat2::identity(f)], f).unwrap();
        assert_eq!(fixed_space_in(&trivial, 3, Support::XOnly).dim(), 4);
        assert_eq!(
            act(&xi(f), &Polynomial::var(f, 0)).unwrap(),
            Polynomial::var(f, 1)
        );
    }
}
