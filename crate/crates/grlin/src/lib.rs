//! Exact linear algebra over group-graded rings.
//!
//! A Γ-graded ring decomposes as a direct sum of additive components
//! `R_γ` indexed by a group Γ, with `R_γ · R_δ ⊆ R_{γδ}`. Matrices over
//! such rings are *homogeneous* when every entry `(i, j)` lies in the
//! component prescribed by a pair of degree sequences: `A_ij ∈
//! R_{α_i β_j⁻¹}`. This crate implements exact arithmetic for those
//! matrices and the structures built on top of them:
//!
//! - finitely presented grading groups, their quotients, and degree
//!   sequences ([`grp`]);
//! - a catalog of graded rings with exact scalars — group algebras,
//!   skew group rings, dual numbers, products, and degree-lifts
//!   ([`scalar`], [`ring`]);
//! - homogeneous matrices with distribution-checked block operations:
//!   diagonal sums, determinantal sums, permutation conjugation, and
//!   hollow-block detection ([`hmat`]);
//! - echelon reduction, inversion, and rank over graded division rings
//!   ([`gdlin`]);
//! - rank functions on matrices, finitely presented modules, and maps,
//!   with the translations between the three pictures, prime matrix
//!   ideals, and sampled axiom harnesses ([`rank`]);
//! - matrix ideals with verifiable derivation certificates and a
//!   budgeted certificate search ([`mideal`]);
//! - localization at a set of square matrices: representing tuples,
//!   their ring operations, kernel certificates for the localization
//!   map, and Cramer-style numerator/denominator splits ([`loc`]);
//! - regrading along a group quotient, spectrum restriction, and
//!   division-ring lifts ([`regrade`]);
//! - a stable JSON surface for matrices, certificates, tuples, and
//!   reports ([`json`]) plus seeded sample generators ([`sample`]).

pub mod grp;
pub mod scalar;
pub mod ring;
pub mod hmat;
pub mod gdlin;
pub mod rank;
pub mod sample;
pub mod mideal;
pub mod loc;
pub mod regrade;
pub mod json;
pub mod examples;

#[cfg(doctest)]
mod book {
    //! Each chapter of the guide in `book/` doubles as a doc-test so the
    //! snippets can never drift from the library.
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(ch01, "../../../book/src/groups-and-gradings.md");
    chapter!(ch02, "../../../book/src/graded-rings.md");
    chapter!(ch03, "../../../book/src/homogeneous-matrices.md");
    chapter!(ch04, "../../../book/src/division-rank.md");
    chapter!(ch05, "../../../book/src/rank-functions.md");
    chapter!(ch06, "../../../book/src/matrix-ideals.md");
    chapter!(ch07, "../../../book/src/localization.md");
    chapter!(ch08, "../../../book/src/regrading.md");
}
