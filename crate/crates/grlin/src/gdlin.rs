//! Linear algebra over graded division rings.
//!
//! Every nonzero homogeneous element of such a ring is invertible, so
//! Gaussian elimination by homogeneous elementary operations works
//! verbatim: swaps, unit scalings (which shift one distribution degree),
//! and adding a homogeneous multiple of one row to another (which
//! preserves distributions). All routines run on validated [`HMatrix`]
//! values and rebuild through the validating constructor, so a
//! distribution slip inside the algorithms cannot survive silently.

use crate::hmat::{id_perm, FactorizationWitness, HMatrix, MatError};
use crate::ring::RingError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GdlinError {
    #[error("pivot entry is not invertible; the view is not effectively a graded division ring")]
    NotDivision,
    #[error("matrix is singular (rank {rank})")]
    Singular { rank: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Echelon form together with the invertible transform that produced
/// it: `transform · a = reduced` for rows, `a · transform = reduced`
/// for columns.
#[derive(Clone, Debug)]
pub struct EchelonResult {
    pub reduced: HMatrix,
    pub transform: HMatrix,
    /// (row, col) positions of the pivots, in elimination order.
    pub pivots: Vec<(usize, usize)>,
    pub rank: usize,
}

/// Reduced row echelon form; pivot columns keep their original indices.
pub fn row_echelon(a: &HMatrix) -> Result<EchelonResult, GdlinError> {
    let ring = a.view().ring().clone();
    let mut m = a.clone();
    let mut t = HMatrix::identity(a.view().clone(), a.alpha().clone());
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..m.cols() {
        let Some(i) = (r..m.rows()).find(|&i| !m.entry(i, j).is_zero()) else { continue };
        if i != r {
            let mut perm = id_perm(m.rows());
            perm.swap(i, r);
            m = m.permute(&perm, &id_perm(m.cols()))?;
            t = t.permute(&perm, &id_perm(t.cols()))?;
        }
        let inv = match ring.invert_homogeneous(m.entry(r, j)) {
            Ok(v) => v,
            Err(RingError::NotInvertible | RingError::NotHomogeneous) => {
                return Err(GdlinError::NotDivision)
            }
            Err(e) => return Err(e.into()),
        };
        m = m.scale_row(r, &inv)?;
        t = t.scale_row(r, &inv)?;
        for k in 0..m.rows() {
            if k != r && !m.entry(k, j).is_zero() {
                let c = ring.neg(m.entry(k, j));
                m = m.add_row_multiple(r, k, &c)?;
                t = t.add_row_multiple(r, k, &c)?;
            }
        }
        pivots.push((r, j));
        r += 1;
        if r == m.rows() {
            break;
        }
    }
    Ok(EchelonResult { reduced: m, transform: t, rank: pivots.len(), pivots })
}

/// Reduced column echelon form; pivot rows keep their original indices.
pub fn col_echelon(a: &HMatrix) -> Result<EchelonResult, GdlinError> {
    let ring = a.view().ring().clone();
    let mut m = a.clone();
    let mut t = HMatrix::identity(a.view().clone(), a.beta().clone());
    let mut pivots = Vec::new();
    let mut r = 0;
    for i in 0..m.rows() {
        let Some(j) = (r..m.cols()).find(|&j| !m.entry(i, j).is_zero()) else { continue };
        if j != r {
            let mut perm = id_perm(m.cols());
            perm.swap(j, r);
            m = m.permute(&id_perm(m.rows()), &perm)?;
            t = t.permute(&id_perm(t.rows()), &perm)?;
        }
        let inv = match ring.invert_homogeneous(m.entry(i, r)) {
            Ok(v) => v,
            Err(RingError::NotInvertible | RingError::NotHomogeneous) => {
                return Err(GdlinError::NotDivision)
            }
            Err(e) => return Err(e.into()),
        };
        m = m.scale_col(r, &inv)?;
        t = t.scale_col(r, &inv)?;
        for k in 0..m.cols() {
            if k != r && !m.entry(i, k).is_zero() {
                let c = ring.neg(m.entry(i, k));
                m = m.add_col_multiple(r, k, &c)?;
                t = t.add_col_multiple(r, k, &c)?;
            }
        }
        pivots.push((i, r));
        r += 1;
        if r == m.cols() {
            break;
        }
    }
    Ok(EchelonResult { reduced: m, transform: t, rank: pivots.len(), pivots })
}

/// Rank over the graded division ring (row rank; equal to column rank).
pub fn drank(a: &HMatrix) -> Result<usize, GdlinError> {
    Ok(row_echelon(a)?.rank)
}

/// Inverse of a square matrix; it lives in M_n[β̄][ᾱ].
pub fn invert(a: &HMatrix) -> Result<HMatrix, GdlinError> {
    if !a.is_square() {
        return Err(GdlinError::Shape("inversion needs a square matrix".into()));
    }
    let re = row_echelon(a)?;
    if re.rank < a.rows() {
        return Err(GdlinError::Singular { rank: re.rank });
    }
    // full rank makes the reduced form exactly the identity
    debug_assert_eq!(re.reduced, HMatrix::identity(a.view().clone(), a.beta().clone()));
    Ok(re.transform)
}

pub fn is_invertible(a: &HMatrix) -> Result<bool, GdlinError> {
    if !a.is_square() {
        return Ok(false);
    }
    match invert(a) {
        Ok(_) => Ok(true),
        Err(GdlinError::Singular { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// One solution `u` of `a·u = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve(a: &HMatrix, b: &HMatrix) -> Result<Option<HMatrix>, GdlinError> {
    if a.view() != b.view() || a.alpha() != b.alpha() {
        return Err(GdlinError::Shape("rhs must share the row distribution".into()));
    }
    let n = a.cols();
    let k = b.cols();
    // augmented [a | b]; column scanning gives a-columns priority
    let mut rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut row = a.row(i);
        row.extend(b.row(i));
        rows.push(row);
    }
    let aug = HMatrix::from_rows(
        a.view().clone(),
        a.alpha().clone(),
        a.beta().concat(b.beta()),
        rows,
    )?;
    let re = row_echelon(&aug)?;
    if re.pivots.iter().any(|&(_, j)| j >= n) {
        return Ok(None);
    }
    let ring = a.view().ring().clone();
    let mut entries = vec![ring.zero(); n * k];
    for &(r, j) in &re.pivots {
        for c in 0..k {
            entries[j * k + c] = re.reduced.entry(r, n + c).clone();
        }
    }
    let u = HMatrix::new(a.view().clone(), a.beta().clone(), b.beta().clone(), entries)?;
    debug_assert_eq!(a.mat_mul(&u)?, *b);
    Ok(Some(u))
}

/// Indices (rows, cols) of a maximal invertible square submatrix; both
/// index sets have size `drank(a)`.
pub fn largest_invertible_submatrix(
    a: &HMatrix,
) -> Result<(Vec<usize>, Vec<usize>), GdlinError> {
    let re = row_echelon(a)?;
    let cols: Vec<usize> = re.pivots.iter().map(|&(_, j)| j).collect();
    let restricted = a.submatrix(&id_perm(a.rows()), &cols)?;
    let ce = col_echelon(&restricted)?;
    let rows: Vec<usize> = ce.pivots.iter().map(|&(i, _)| i).collect();
    debug_assert_eq!(rows.len(), cols.len());
    debug_assert!(is_invertible(&a.submatrix(&rows, &cols)?)?);
    Ok((rows, cols))
}

/// Explicit factorization of a singular square matrix through
/// `drank(a) < n` columns: `a = P·Q` with `P = T⁻¹[:, 0..r]` and `Q`
/// the nonzero rows of the reduced form, where `T·a = reduced`.
pub fn nonfull_witness(a: &HMatrix) -> Result<FactorizationWitness, GdlinError> {
    if !a.is_square() {
        return Err(GdlinError::Shape("fullness is a notion for square matrices".into()));
    }
    let re = row_echelon(a)?;
    if re.rank >= a.rows() {
        return Err(GdlinError::Shape("matrix is full; no witness exists".into()));
    }
    let tinv = invert(&re.transform)?;
    let keep: Vec<usize> = (0..re.rank).collect();
    let p = tinv.submatrix(&id_perm(a.rows()), &keep)?;
    let q = re.reduced.submatrix(&keep, &id_perm(a.cols()))?;
    debug_assert_eq!(p.mat_mul(&q)?, *a);
    Ok(FactorizationWitness { p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{DegSeq, GroupElem};
    use crate::hmat::verify_nonfull;
    use crate::ring::{ql, sk, tx, Atom, RingView};
    use crate::scalar::{Field, Scalar};
    use proptest::prelude::*;

    fn zd(n: i64) -> GroupElem {
        GroupElem::V(vec![n])
    }

    fn ql_view() -> RingView {
        RingView::plain(ql())
    }

    /// Laurent matrix with monomial entries c_{ij}·t^{α_i−β_j}; a zero
    /// coefficient leaves the entry zero.
    fn laurent_mat(alpha: &[i64], beta: &[i64], coeffs: &[Vec<i64>]) -> HMatrix {
        let entries = alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &ai)| {
                beta.iter().enumerate().map(move |(j, &bj)| (i, j, ai - bj))
            })
            .map(|(i, j, d)| {
                let c = coeffs[i][j];
                if c == 0 {
                    ql().zero()
                } else {
                    ql().monomial(Atom::Deg(zd(d)), Scalar::from_i64(Field::Q, c)).unwrap()
                }
            })
            .collect();
        HMatrix::new(
            ql_view(),
            DegSeq::new(alpha.iter().map(|&n| zd(n)).collect()),
            DegSeq::new(beta.iter().map(|&n| zd(n)).collect()),
            entries,
        )
        .unwrap()
    }

    #[test]
    fn invert_roundtrip_with_flipped_dists() {
        let a = laurent_mat(&[1, 0], &[0, -1], &[vec![2, 1], vec![1, 1]]);
        let inv = invert(&a).unwrap();
        assert_eq!(inv.alpha(), a.beta());
        assert_eq!(inv.beta(), a.alpha());
        let id_a = HMatrix::identity(ql_view(), a.alpha().clone());
        let id_b = HMatrix::identity(ql_view(), a.beta().clone());
        assert_eq!(a.mat_mul(&inv).unwrap(), id_a);
        assert_eq!(inv.mat_mul(&a).unwrap(), id_b);
    }

    #[test]
    fn singular_reports_rank() {
        // second row is t⁻¹·(first row)
        let a = laurent_mat(&[1, 0], &[0, 0], &[vec![1, 2], vec![1, 2]]);
        assert_eq!(invert(&a), Err(GdlinError::Singular { rank: 1 }));
        assert_eq!(drank(&a).unwrap(), 1);
        let w = nonfull_witness(&a).unwrap();
        verify_nonfull(&a, &w).unwrap();
    }

    #[test]
    fn skew_ring_elimination() {
        // over ℚ(i)[C2;σ]: [[i, x], [x, i]] with uniform dists... entry
        // degrees must match α_iβ_j⁻¹, so off-diagonal x needs β ≠ α.
        let r = sk();
        let e = GroupElem::T(0);
        let x = GroupElem::T(1);
        let iu = r.monomial(Atom::Deg(e.clone()), Scalar::gauss(0, 1)).unwrap();
        let iu2 = r.monomial(Atom::Deg(e.clone()), Scalar::gauss(0, 2)).unwrap();
        let xu = r.monomial(Atom::Deg(x.clone()), Scalar::gauss(1, 0)).unwrap();
        // the twist makes x·i⁻¹·x = i, so [[i, x], [x, i]] is singular
        let sing = HMatrix::new(
            RingView::plain(r.clone()),
            DegSeq::new(vec![e.clone(), x.clone()]),
            DegSeq::new(vec![e.clone(), x.clone()]),
            vec![iu.clone(), xu.clone(), xu.clone(), iu.clone()],
        )
        .unwrap();
        assert_eq!(drank(&sing).unwrap(), 1);
        // [[i, x], [x, 2i]] has Schur complement 2i − i = i ≠ 0
        let a = sing.with_entry(1, 1, iu2).unwrap();
        let inv = invert(&a).unwrap();
        assert_eq!(
            a.mat_mul(&inv).unwrap(),
            HMatrix::identity(RingView::plain(r.clone()), a.alpha().clone())
        );
        assert_eq!(
            inv.mat_mul(&a).unwrap(),
            HMatrix::identity(RingView::plain(r), a.beta().clone())
        );
    }

    #[test]
    fn non_division_rings_are_refused_on_bad_pivots() {
        let r = tx();
        let x = r.monomial(Atom::Dual(zd(0), true), Scalar::one(Field::Q)).unwrap();
        let a = HMatrix::new(
            RingView::plain(r),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0)]),
            vec![x],
        )
        .unwrap();
        assert_eq!(row_echelon(&a).unwrap_err(), GdlinError::NotDivision);
    }

    #[test]
    fn solve_finds_a_solution_and_detects_inconsistency() {
        let a = laurent_mat(&[1, 0], &[0, 0], &[vec![1, 2], vec![1, 2]]);
        // b = a·u for u = (t⁰; t⁰)-shaped columns
        let u = laurent_mat(&[0, 0], &[0], &[vec![1], vec![3]]);
        let b = a.mat_mul(&u).unwrap();
        let got = solve(&a, &b).unwrap().expect("consistent");
        assert_eq!(a.mat_mul(&got).unwrap(), b);
        // an rhs outside the column space: rows of a are dependent but
        // these rhs rows are not matched
        let bad = laurent_mat(&[1, 0], &[0], &[vec![1], vec![5]]);
        assert_eq!(solve(&a, &bad).unwrap(), None);
    }

    #[test]
    fn pivot_submatrix_is_invertible() {
        let a = laurent_mat(
            &[0, 1, 1],
            &[0, 0, -1],
            &[vec![0, 1, 2], vec![0, 2, 4], vec![0, 1, 2]],
        );
        let (rows, cols) = largest_invertible_submatrix(&a).unwrap();
        assert_eq!(rows.len(), drank(&a).unwrap());
        let sub = a.submatrix(&rows, &cols).unwrap();
        assert!(is_invertible(&sub).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn row_rank_equals_col_rank(
            n in 1usize..=4,
            m in 1usize..=4,
            alpha in proptest::collection::vec(-2i64..=2, 4),
            beta in proptest::collection::vec(-2i64..=2, 4),
            coeffs in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 4),
        ) {
            let a = laurent_mat(
                &alpha[..n],
                &beta[..m],
                &coeffs[..n].iter().map(|r| r[..m].to_vec()).collect::<Vec<_>>(),
            );
            let rr = row_echelon(&a).unwrap().rank;
            let cr = col_echelon(&a).unwrap().rank;
            prop_assert_eq!(rr, cr);
            let (ri, cj) = largest_invertible_submatrix(&a).unwrap();
            prop_assert_eq!(ri.len(), rr);
            prop_assert_eq!(cj.len(), rr);
            // transforms certify their factorizations
            let re = row_echelon(&a).unwrap();
            prop_assert_eq!(re.transform.mat_mul(&a).unwrap(), re.reduced);
            let ce = col_echelon(&a).unwrap();
            prop_assert_eq!(a.mat_mul(&ce.transform).unwrap(), ce.reduced);
        }

        #[test]
        fn square_matrices_invert_or_witness(
            n in 1usize..=4,
            alpha in proptest::collection::vec(-2i64..=2, 4),
            beta in proptest::collection::vec(-2i64..=2, 4),
            coeffs in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 4),
        ) {
            let a = laurent_mat(
                &alpha[..n],
                &beta[..n],
                &coeffs[..n].iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>(),
            );
            match invert(&a) {
                Ok(inv) => {
                    prop_assert_eq!(
                        a.mat_mul(&inv).unwrap(),
                        HMatrix::identity(ql_view(), a.alpha().clone())
                    );
                }
                Err(GdlinError::Singular { rank }) => {
                    prop_assert!(rank < n);
                    let w = nonfull_witness(&a).unwrap();
                    prop_assert_eq!(w.interface(), rank);
                    prop_assert!(verify_nonfull(&a, &w).is_ok());
                }
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }
    }
}
