//! Coarsening a grading along a group quotient Γ → Γ/Ω, applied to
//! rings, matrices, rank functions, and prime-oracle spectra, together
//! with the opposite construction: lifting a coarsely graded division
//! base `E` back to a fine grading with degree-γ component `E_{[γ]}·γ`.
//!
//! Coarse views keep the element representation untouched — only the
//! degree bookkeeping is projected — so a finely graded matrix *is* a
//! coarsely graded one with projected distributions, and pulling a
//! coarse oracle back to the fine grading is literally a composition
//! with [`regrade_matrix`].

use std::sync::Arc;

use crate::gdlin;
use crate::grp::{DegSeq, GroupError, Quotient};
use crate::hmat::{HMatrix, MatError};
use crate::rank::{MatrixRankFn, PrimeMatrixIdeal, RankError, VerifyReport};
use crate::ring::{lift_ring, Atom, GradedRing, Hom, RingError, RingView};
use crate::sample::Sampler;

/// View `ring` through the coarser grading given by the quotient.
pub fn regrade_view(ring: Arc<GradedRing>, quot: Arc<Quotient>) -> Result<RingView, RingError> {
    RingView::regraded(ring, quot)
}

/// Reinterpret a finely graded matrix over the coarse view: the entry
/// grid is reused and both distributions are projected class-wise. The
/// result always validates, since entries homogeneous of degree
/// `α_i·β_j⁻¹` stay homogeneous of the projected class.
pub fn regrade_matrix(a: &HMatrix, quot: Arc<Quotient>) -> Result<HMatrix, MatError> {
    if a.view().quot().is_some() {
        return Err(MatError::Unsupported(
            "matrix is already coarsely graded; regrade its fine original".into(),
        ));
    }
    let view = RingView::regraded(a.view().ring().clone(), quot.clone())?;
    let alpha = project_seq(a.alpha(), &quot)?;
    let beta = project_seq(a.beta(), &quot)?;
    let mut entries = Vec::with_capacity(a.rows() * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            entries.push(a.entry(i, j).clone());
        }
    }
    HMatrix::new(view, alpha, beta, entries)
}

fn project_seq(s: &DegSeq, quot: &Arc<Quotient>) -> Result<DegSeq, GroupError> {
    let mut out = Vec::with_capacity(s.len());
    for d in s.iter() {
        out.push(quot.project(d)?);
    }
    Ok(DegSeq::new(out))
}

/// Pull a prime oracle on coarsely graded matrices back to the fine
/// grading: membership is tested after projecting the distributions.
pub fn restrict_pmi(inner: PrimeMatrixIdeal, quot: Arc<Quotient>) -> PrimeMatrixIdeal {
    PrimeMatrixIdeal::Restricted { inner: Box::new(inner), quot }
}

/// Pull a matrix rank function on coarsely graded matrices back to the
/// fine grading the same way.
pub fn restrict_rank(inner: MatrixRankFn, quot: Arc<Quotient>) -> MatrixRankFn {
    MatrixRankFn::Regraded { inner: Box::new(inner), quot }
}

/// Fine-graded lift of a coarsely graded base: the degree-γ component
/// is `E_{[γ]}·γ`. When the base view is an honest graded division ring
/// the lift is one too.
pub fn lift_division_ring(
    name: &str,
    base: RingView,
    quot: Arc<Quotient>,
) -> Result<Arc<GradedRing>, RingError> {
    lift_ring(name, base, quot)
}

/// Lift a hom `φ: R → E` that is graded for the coarse view of R to the
/// degree-tagged hom `ψ: R → D`, `ψ(a_γ) = φ(a_γ)·γ`.
pub fn lift_hom(phi: Hom, lift: Arc<GradedRing>) -> Result<Hom, RingError> {
    Hom::lift_tag(phi, lift)
}

/// Sampled functoriality of [`regrade_matrix`]: it must commute with
/// products, diagonal sums, and determinantal sums of compatible pairs.
pub fn verify_regrade_functorial(
    view: &RingView,
    quot: &Arc<Quotient>,
    seed: u64,
    count: usize,
) -> Result<VerifyReport, RankError> {
    let mut rep = VerifyReport::default();
    let mut s = Sampler::new(seed);
    for idx in 0..count {
        let m = 1 + s.usize(3);
        let n = 1 + s.usize(3);
        let k = 1 + s.usize(3);
        let a = s.hmatrix(view, m, n);
        let lambda = s.degseq(view.group(), k);
        let b = s.hmatrix_with(view, a.beta().clone(), lambda);
        let prod_then = regrade_matrix(&a.mat_mul(&b)?, quot.clone())?;
        let then_prod =
            regrade_matrix(&a, quot.clone())?.mat_mul(&regrade_matrix(&b, quot.clone())?)?;
        rep.check(prod_then == then_prod, || {
            format!("instance {idx}: projection does not commute with products")
        });

        let c = s.hmatrix(view, k, k);
        let sum_then = regrade_matrix(&a.diag_sum(&c)?, quot.clone())?;
        let then_sum =
            regrade_matrix(&a, quot.clone())?.diag_sum(&regrade_matrix(&c, quot.clone())?)?;
        rep.check(sum_then == then_sum, || {
            format!("instance {idx}: projection does not commute with diagonal sums")
        });

        // determinantal sum over the last column of a shared-column pair
        let d1 = s.hmatrix(view, n, n);
        let mut d2 = d1.clone();
        for i in 0..n {
            let deg = view.group().ratio(d1.alpha().get(i), d1.beta().get(n - 1));
            d2 = d2.with_entry(i, n - 1, s.element_of_degree(view, &deg))?;
        }
        let nabla_then = regrade_matrix(&d1.det_sum_col(&d2, n - 1)?, quot.clone())?;
        let then_nabla = regrade_matrix(&d1, quot.clone())?
            .det_sum_col(&regrade_matrix(&d2, quot.clone())?, n - 1)?;
        rep.check(nabla_then == then_nabla, || {
            format!("instance {idx}: projection does not commute with determinantal sums")
        });
    }
    Ok(rep)
}

/// Check on monomial generators that the lift of the trivially graded
/// rationals along ℤ → 1 multiplies exactly like the Laurent ring: under
/// the degree-indexed bijection `t^n ↦ 1·n̄`, products, degrees, and
/// homogeneous inverses all correspond for |n| ≤ `radius`.
pub fn lift_rat_matches_laurent(radius: i64) -> Result<bool, RingError> {
    let z = crate::grp::Group::z();
    let quot = z.quotient(crate::grp::SubgroupSpec::Whole)?;
    let lift = lift_ring("QQ↑ℤ", RingView::plain(crate::ring::rat()), quot)?;
    let laurent = crate::ring::ql();

    let lift_gen = |n: i64| {
        let atom = Atom::Mono(
            crate::grp::GroupElem::V(vec![n]),
            Box::new(Atom::Deg(crate::grp::GroupElem::T(0))),
        );
        lift.monomial(atom, crate::scalar::Scalar::from_i64(lift.field(), 1))
    };
    let laurent_gen = |n: i64| {
        laurent.monomial(
            Atom::Deg(crate::grp::GroupElem::V(vec![n])),
            crate::scalar::Scalar::from_i64(laurent.field(), 1),
        )
    };

    for m in -radius..=radius {
        for n in -radius..=radius {
            let dm = lift_gen(m)?;
            let dn = lift_gen(n)?;
            let tm = laurent_gen(m)?;
            let tn = laurent_gen(n)?;
            // same degree on both sides of the bijection
            let deg_lift = lift.hom_degree(&dm);
            let deg_laurent = laurent.hom_degree(&tm);
            if deg_lift != deg_laurent {
                return Ok(false);
            }
            // products correspond: both sides land on the generator of
            // degree m+n with coefficient 1
            if lift.mul(&dm, &dn) != lift_gen(m + n)? {
                return Ok(false);
            }
            if laurent.mul(&tm, &tn) != laurent_gen(m + n)? {
                return Ok(false);
            }
            // homogeneous inverses correspond
            if lift.invert_homogeneous(&dm)? != lift_gen(-m)? {
                return Ok(false);
            }
            if laurent.invert_homogeneous(&tm)? != laurent_gen(-m)? {
                return Ok(false);
            }
        }
    }
    Ok(lift.is_graded_division())
}

/// Sampled equivalence of the two matrix images attached to a lift: for
/// seeded fine matrices A, invertibility of `A^φ` over the coarse base
/// agrees with invertibility of `A^ψ` over the lift. The report counts
/// both verdicts so callers can insist the comparison was not vacuous.
pub struct LiftAgreement {
    pub report: VerifyReport,
    pub invertible_seen: usize,
    pub singular_seen: usize,
}

pub fn check_lift_equivalence(
    view: &RingView,
    phi: &Hom,
    psi: &Hom,
    seed: u64,
    count: usize,
) -> Result<LiftAgreement, RankError> {
    let mut s = Sampler::new(seed);
    let mut rep = VerifyReport::default();
    let mut invertible_seen = 0usize;
    let mut singular_seen = 0usize;
    for idx in 0..count {
        let n = 1 + s.usize(4);
        // rotate through generic, certainly-invertible, and certainly-
        // singular fine matrices so both verdicts occur
        let a = match idx % 3 {
            0 => s.hmatrix(view, n, n),
            1 => {
                let alpha = s.degseq(view.group(), n);
                s.invertible(view, alpha)
            }
            _ => s.nonfull(view, n, n.saturating_sub(1)),
        };
        let over_base = gdlin::is_invertible(&a.map_hom(phi)?)?;
        let over_lift = gdlin::is_invertible(&a.map_hom(psi)?)?;
        rep.check(over_base == over_lift, || {
            format!("instance {idx}: coarse image and lifted image disagree on invertibility")
        });
        if over_base {
            invertible_seen += 1;
        } else {
            singular_seen += 1;
        }
    }
    Ok(LiftAgreement { report: rep, invertible_seen, singular_seen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{Group, GroupElem, SubgroupSpec};
    use crate::rank::{specialization_leq, verify_pm};
    use crate::ring::{qp, rat};
    use crate::scalar::{Field, Scalar};

    fn z_mod2() -> Arc<Quotient> {
        Group::z().quotient(SubgroupSpec::Lattice(vec![vec![2]])).unwrap()
    }

    #[test]
    fn matrix_projection_folds_degrees() {
        let view = RingView::plain(crate::ring::ql());
        let mut s = Sampler::new(7);
        let a = s.hmatrix(&view, 3, 2);
        let quot = z_mod2();
        let b = regrade_matrix(&a, quot.clone()).unwrap();
        assert_eq!(b.rows(), 3);
        for i in 0..3 {
            assert_eq!(b.alpha().get(i), &quot.project(a.alpha().get(i)).unwrap());
        }
        for (i, j) in [(0, 0), (2, 1)] {
            assert_eq!(b.entry(i, j), a.entry(i, j));
        }
        // the whole quotient erases all degree information
        let erased =
            regrade_matrix(&a, Group::z().quotient(SubgroupSpec::Whole).unwrap()).unwrap();
        assert!(erased.alpha().iter().all(|d| *d == GroupElem::T(0)));
        // double regrading is refused; the fine original must be used
        assert!(regrade_matrix(&b, quot).is_err());
    }

    #[test]
    fn projection_commutes_with_matrix_operations() {
        for ring in [crate::ring::ql(), crate::ring::qp()] {
            let view = RingView::plain(ring);
            let rep = verify_regrade_functorial(&view, &z_mod2(), 11, 40).unwrap();
            assert!(rep.passed(), "{:?}", rep.counterexample());
        }
    }

    #[test]
    fn restricted_oracle_matches_fine_route_when_quotient_is_whole() {
        // coarse oracle: vanishing determinant over the plain polynomial
        // ring read with erased degrees; fine oracle: failure to invert
        // over the Laurent ring. They must agree on fine samples.
        let view = RingView::plain(qp());
        let quot = Group::z().quotient(SubgroupSpec::Whole).unwrap();
        let coarse = restrict_pmi(PrimeMatrixIdeal::DetZero, quot);
        let fine = PrimeMatrixIdeal::singular_kernel(
            Hom::include(qp(), crate::ring::ql()).unwrap(),
        );
        let mut s = Sampler::new(23);
        let mut members = 0;
        for _ in 0..60 {
            let n = 1 + s.usize(3);
            let a = if s.bool() { s.hmatrix(&view, n, n) } else { s.nonfull(&view, n, n - 1) };
            let coarse_in = coarse.contains(&a).unwrap();
            assert_eq!(coarse_in, fine.contains(&a).unwrap());
            members += usize::from(coarse_in);
        }
        assert!(members > 0, "singular samples should occur");
    }

    #[test]
    fn restriction_along_identity_quotient_changes_nothing() {
        let view = RingView::plain(crate::ring::q2());
        let quot = Group::c2().quotient(SubgroupSpec::TableSubset(vec![0])).unwrap();
        assert_eq!(quot.target().order(), Some(2));
        let aug = Hom::augment(crate::ring::q2()).unwrap();
        let direct = PrimeMatrixIdeal::singular_kernel(aug.clone());
        let restricted = restrict_pmi(PrimeMatrixIdeal::singular_kernel(aug), quot);
        let mut s = Sampler::new(5);
        for _ in 0..40 {
            let n = 1 + s.usize(3);
            let a = s.hmatrix(&view, n, n);
            assert_eq!(direct.contains(&a).unwrap(), restricted.contains(&a).unwrap());
        }
    }

    #[test]
    fn restricted_oracle_still_satisfies_the_membership_axioms() {
        let view = RingView::plain(qp());
        let quot = Group::z().quotient(SubgroupSpec::Whole).unwrap();
        let restricted = restrict_pmi(PrimeMatrixIdeal::DetZero, quot);
        let rep = verify_pm(&restricted, &view, 31, 25);
        assert!(rep.passed(), "{:?}", rep.counterexample());
    }

    #[test]
    fn restriction_preserves_specialization_order() {
        // fraction-field kernel ⊆ evaluation kernel, before and after
        // pulling both back along the whole quotient
        let view = RingView::plain(qp());
        let quot = Group::z().quotient(SubgroupSpec::Whole).unwrap();
        let fine1 = restrict_pmi(PrimeMatrixIdeal::DetZero, quot.clone());
        let fine2 = restrict_pmi(
            PrimeMatrixIdeal::singular_kernel(
                Hom::eval_var(qp(), Scalar::from_i64(Field::Q, 0)).unwrap(),
            ),
            quot,
        );
        let rep = specialization_leq(&fine1, &fine2, &view, 17, 80, &[]).unwrap();
        assert!(rep.counterexample.is_none());
    }

    #[test]
    fn rat_lift_is_the_laurent_ring_on_generators() {
        assert!(lift_rat_matches_laurent(2).unwrap());
    }

    #[test]
    fn even_odd_lift_components_are_tagged_base_classes() {
        // lift the ℤ/2-regraded Laurent ring back to a ℤ-grading: the
        // degree-3 component must consist of odd-class base atoms tagged
        // with 3
        let quot = z_mod2();
        let base = RingView::regraded(crate::ring::ql(), quot.clone()).unwrap();
        let lift = lift_division_ring("QL↑2", base.clone(), quot.clone()).unwrap();
        assert!(!lift.is_graded_division());
        let three = GroupElem::V(vec![3]);
        let atoms = lift.basis_atoms_of_degree(&three);
        assert!(!atoms.is_empty());
        let odd = quot.project(&three).unwrap();
        for atom in &atoms {
            let Atom::Mono(g, inner) = atom else { panic!("lift atoms are tagged") };
            assert_eq!(g, &three);
            assert_eq!(base.atom_degree_in_view(inner), odd);
        }
    }

    #[test]
    fn lifted_and_coarse_images_invert_together() {
        // φ: ℚ[t] → ℚ by t ↦ 2 (graded for the erased view);
        // ψ: ℚ[t] → D tags each image with its original degree
        let quot = Group::z().quotient(SubgroupSpec::Whole).unwrap();
        let phi = Hom::eval_var(qp(), Scalar::from_i64(Field::Q, 2)).unwrap();
        let lift = lift_division_ring("QQ↑ℤ", RingView::plain(rat()), quot).unwrap();
        let psi = lift_hom(phi.clone(), lift).unwrap();
        let view = RingView::plain(qp());
        let agree = check_lift_equivalence(&view, &phi, &psi, 41, 60).unwrap();
        assert!(agree.report.passed(), "{:?}", agree.report.counterexample());
        assert!(agree.invertible_seen > 0);
        assert!(agree.singular_seen > 0);
    }
}
