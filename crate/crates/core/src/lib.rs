//! Exact invariant theory for the two-dimensional orthogonal groups
//! `O₂⁺(F_p)`, `SO₂⁺(F_p)` and `O₂⁻(F_p)` acting on one vector and one
//! covector, i.e. on `F_p[x1, x2, y1, y2]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`fields`]: prime fields, extension fields and distinguished constants.
//! * [`polyring`]: sparse polynomials in the four variables, the text format,
//!   monomial orders and linear substitutions.
//! * [`matgroups`]: enumerated 2×2 matrix groups, their products, coset
//!   representatives and 4×4 action matrices.
//! * [`invariants`]: averaging and transfer operators, graded fixed spaces,
//!   Hilbert series arithmetic and the generation / free-basis checks.
//! * [`catalog`]: the named polynomial families that the checks consume.
//! * [`zerocheck`]: the covariant matrix and its randomized determinant test.
//! * [`suites`]: named verification suites producing serializable reports.

#![allow(clippy::needless_range_loop)]
pub mod catalog;
pub mod error;
pub mod fields;
pub mod invariants;
pub mod matgroups;
pub mod polyring;
pub mod suites;
pub mod zerocheck;

pub use error::{Error, Result};
pub use fields::{ExtElement, ExtensionField, FieldElement, PrimeField};
pub use matgroups::{Mat2, MatrixGroup, OrthogonalType, ProductElement, ProductGroup};
pub use polyring::{Mat4, Monomial, MonomialOrder, Polynomial};
