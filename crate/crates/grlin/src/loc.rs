//! Localization against a set Σ of square homogeneous matrices: the
//! inverting-set oracle, row–matrix–column tuples with evaluation,
//! kernel certificates in block form, and rational-closure systems.
//!
//! The localized ring itself is never materialized. Its elements are
//! handled through two interchangeable encodings:
//!
//! - [`LocTuple`] — a triple `(F, A, X)` with `A ∈ Σ`, denoting the
//!   product `F·A⁻¹·X` once `A` becomes invertible. Sums and products
//!   are block assemblies that grow the `A`-block; there is no
//!   reduction procedure, so a hard size cap keeps arithmetic honest.
//! - [`ClosureSystem`] — an `n×(n+1)` homogeneous system `A·u = 0`
//!   with `u₀ = 1`, denoting the last solution entry. This is the
//!   shape Cramer bookkeeping, inverses and common denominators want.
//!
//! Whether a given element maps to zero is *certified*, not decided:
//! a [`MalcolmsonCert`] packs the block identity
//!
//! ```text
//! ( L 0 W )   ( P )
//! ( 0 M 0 ) = (   ) · ( Q V )
//! ( 0 J r )   ( U )
//! ```
//!
//! with `L, M, P, Q ∈ Σ`, which holds for some blocks exactly when `r`
//! dies in the localization. [`malcolmson_verify`] replays the identity
//! and the Σ-memberships; shape or distribution defects are errors,
//! value defects make the verdict `false`. The certificate converts to
//! and from an equivalence of tuples ([`kernel_cert_to_equivalence`],
//! [`equivalence_to_kernel_cert`]) by explicit bordering, and a verified
//! certificate for `r = 1` refutes Σ itself by exhibiting a non-full
//! member ([`refute_unit_cert`]).

use itertools::Itertools;

use crate::gdlin::{self, GdlinError};
use crate::grp::{DegSeq, GroupElem, GroupError};
use crate::hmat::{self, id_perm, FactorizationWitness, HMatrix, MatError};
use crate::rank::{PrimeMatrixIdeal, RankError, VerifyReport};
use crate::ring::{GradedElement, Hom, RingError, RingView};
use crate::sample::Sampler;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocError {
    #[error("malformed localization data: {0}")]
    Malformed(String),
    #[error("matrix escaped the inverting set: {0}")]
    NotInverting(String),
    #[error("matrix image is singular under the inverting hom")]
    SingularImage,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Lin(#[from] GdlinError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn malformed(msg: impl Into<String>) -> LocError {
    LocError::Malformed(msg.into())
}

/// A-blocks larger than this abort tuple arithmetic with a budget
/// error; the encoding has no reduction step, so sizes only grow.
pub const TUPLE_SIZE_CAP: usize = 64;

// ---------------------------------------------------------------- stacks

fn hstack(l: &HMatrix, r: &HMatrix) -> Result<HMatrix, LocError> {
    if l.view() != r.view() {
        return Err(malformed("hstack across different views"));
    }
    if l.alpha() != r.alpha() {
        return Err(malformed("hstack needs matching row distributions"));
    }
    let mut entries = Vec::with_capacity(l.rows() * (l.cols() + r.cols()));
    for i in 0..l.rows() {
        entries.extend(l.row(i));
        entries.extend(r.row(i));
    }
    Ok(HMatrix::new(l.view().clone(), l.alpha().clone(), l.beta().concat(r.beta()), entries)?)
}

fn vstack(t: &HMatrix, b: &HMatrix) -> Result<HMatrix, LocError> {
    if t.view() != b.view() {
        return Err(malformed("vstack across different views"));
    }
    if t.beta() != b.beta() {
        return Err(malformed("vstack needs matching column distributions"));
    }
    let mut entries = Vec::with_capacity((t.rows() + b.rows()) * t.cols());
    for i in 0..t.rows() {
        entries.extend(t.row(i));
    }
    for i in 0..b.rows() {
        entries.extend(b.row(i));
    }
    Ok(HMatrix::new(t.view().clone(), t.alpha().concat(b.alpha()), t.beta().clone(), entries)?)
}

fn hstack3(a: &HMatrix, b: &HMatrix, c: &HMatrix) -> Result<HMatrix, LocError> {
    hstack(&hstack(a, b)?, c)
}

/// Row with a single 1 at `pos`; valid exactly when γ = β_pos.
fn unit_row(view: &RingView, gamma: &GroupElem, beta: &DegSeq, pos: usize) -> Result<HMatrix, LocError> {
    let ring = view.ring().clone();
    let mut entries = vec![ring.zero(); beta.len()];
    entries[pos] = ring.one();
    Ok(HMatrix::new(view.clone(), DegSeq::new(vec![gamma.clone()]), beta.clone(), entries)?)
}

/// Column with a single 1 at `pos`; valid exactly when α_pos = e.
fn unit_col(view: &RingView, alpha: &DegSeq, pos: usize) -> Result<HMatrix, LocError> {
    let ring = view.ring().clone();
    let e = view.group().identity();
    let mut entries = vec![ring.zero(); alpha.len()];
    entries[pos] = ring.one();
    Ok(HMatrix::new(view.clone(), alpha.clone(), DegSeq::new(vec![e]), entries)?)
}

fn scalar_mat(view: &RingView, gamma: &GroupElem, value: GradedElement) -> Result<HMatrix, LocError> {
    let e = view.group().identity();
    Ok(HMatrix::new(
        view.clone(),
        DegSeq::new(vec![gamma.clone()]),
        DegSeq::new(vec![e]),
        vec![value],
    )?)
}

fn ones_col(view: &RingView, rows: usize) -> Result<HMatrix, LocError> {
    let e = view.group().identity();
    let one = view.ring().one();
    Ok(HMatrix::new(
        view.clone(),
        DegSeq::uniform(e.clone(), rows),
        DegSeq::uniform(e, 1),
        vec![one; rows],
    )?)
}

fn is_identity_like(a: &HMatrix) -> bool {
    if !a.is_square() || a.alpha() != a.beta() {
        return false;
    }
    let one = a.view().ring().one();
    (0..a.rows()).all(|i| {
        (0..a.cols()).all(|j| if i == j { *a.entry(i, j) == one } else { a.entry(i, j).is_zero() })
    })
}

// ---------------------------------------------------------- inverting set

/// Membership oracle behind an [`InvertingSet`].
#[derive(Clone, Debug)]
pub enum SigmaOracle {
    /// Complement of a prime matrix ideal: `A ∈ Σ ⟺ A ∉ 𝔭`. Always
    /// closed under the full multiplicative rules.
    NotInKernel(Box<PrimeMatrixIdeal>),
    /// Finite seed list. Membership is the closure of the list under
    /// identity blocks and lower block-triangular assembly, plus
    /// row/column permutations when flagged multiplicative.
    Explicit(Vec<HMatrix>),
}

/// A set Σ of square homogeneous matrices meant to become invertible.
#[derive(Clone, Debug)]
pub struct InvertingSet {
    view: RingView,
    oracle: SigmaOracle,
    multiplicative: bool,
}

impl InvertingSet {
    /// Σ = complement of a prime matrix ideal (e.g. the matrices whose
    /// image under a hom into a graded division ring is invertible).
    pub fn from_kernel(view: RingView, pmi: PrimeMatrixIdeal) -> InvertingSet {
        InvertingSet { view, oracle: SigmaOracle::NotInKernel(Box::new(pmi)), multiplicative: true }
    }

    /// Σ generated by an explicit list of square matrices.
    pub fn explicit(
        view: RingView,
        members: Vec<HMatrix>,
        multiplicative: bool,
    ) -> Result<InvertingSet, LocError> {
        for m in &members {
            if m.view() != &view {
                return Err(malformed("explicit member over a different view"));
            }
            if !m.is_square() {
                return Err(malformed("explicit members must be square"));
            }
        }
        Ok(InvertingSet { view, oracle: SigmaOracle::Explicit(members), multiplicative })
    }

    pub fn view(&self) -> &RingView {
        &self.view
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    pub fn contains(&self, a: &HMatrix) -> Result<bool, LocError> {
        if a.view() != &self.view {
            return Err(malformed("membership query over a different view"));
        }
        if !a.is_square() {
            return Ok(false);
        }
        match &self.oracle {
            SigmaOracle::NotInKernel(pmi) => Ok(!pmi.contains(a)?),
            SigmaOracle::Explicit(members) => {
                if explicit_member(members, a) {
                    return Ok(true);
                }
                if self.multiplicative && a.rows() <= 4 {
                    let n = a.rows();
                    for rp in (0..n).permutations(n) {
                        for cp in (0..n).permutations(n) {
                            if let Ok(b) = a.permute(&rp, &cp) {
                                if explicit_member(members, &b) {
                                    return Ok(true);
                                }
                            }
                        }
                    }
                }
                Ok(false)
            }
        }
    }

    /// Draw a member of Σ with `n` rows, or `None` when the oracle has
    /// nothing to offer at that size.
    pub fn sample_member(&self, s: &mut Sampler, n: usize) -> Option<HMatrix> {
        match &self.oracle {
            SigmaOracle::Explicit(members) => {
                let fitting: Vec<&HMatrix> = members.iter().filter(|m| m.rows() == n).collect();
                if !fitting.is_empty() {
                    let k = s.usize(fitting.len());
                    return Some(fitting[k].clone());
                }
                // identity matrices always belong
                let grp = self.view.group().clone();
                let alpha = s.degseq(&grp, n);
                Some(HMatrix::identity(self.view.clone(), alpha))
            }
            SigmaOracle::NotInKernel(_) => {
                let grp = self.view.group().clone();
                let e = grp.identity();
                for round in 0..60 {
                    // lower-triangular with a Σ-certified diagonal
                    let alpha =
                        if round % 2 == 0 { DegSeq::uniform(e.clone(), n) } else { s.degseq(&grp, n) };
                    let beta = alpha.clone();
                    let mut entries = vec![self.view.ring().zero(); n * n];
                    let mut ok = true;
                    for i in 0..n {
                        let want = grp.ratio(alpha.get(i), beta.get(i));
                        let d = s.element_of_degree(&self.view, &want);
                        let cell = scalar_mat(&self.view, &want, d.clone())
                            .and_then(|m| m.translate_dists(beta.get(i)).map_err(LocError::from));
                        let member = match cell {
                            Ok(m) => self.contains(&m).unwrap_or(false),
                            Err(_) => false,
                        };
                        if !member {
                            ok = false;
                            break;
                        }
                        entries[i * n + i] = d;
                    }
                    if !ok {
                        continue;
                    }
                    for i in 1..n {
                        for j in 0..i {
                            let want = grp.ratio(alpha.get(i), beta.get(j));
                            entries[i * n + j] = s.element_of_degree(&self.view, &want);
                        }
                    }
                    let cand = match HMatrix::new(self.view.clone(), alpha, beta, entries) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    if self.contains(&cand).unwrap_or(false) {
                        return Some(cand);
                    }
                }
                None
            }
        }
    }

    /// Spot-check the closure laws Σ is supposed to satisfy: 1×1
    /// identities at sampled degrees, lower block-triangular assembly
    /// of sampled members, and (when flagged) permutation stability.
    pub fn verify_lower_semimult(&self, seed: u64, count: usize) -> Result<VerifyReport, LocError> {
        let mut rep = VerifyReport { checked: 0, failures: Vec::new() };
        let mut s = Sampler::new(seed);
        let grp = self.view.group().clone();
        for round in 0..count {
            let gamma = s.degree(&grp);
            let unit = HMatrix::identity(self.view.clone(), DegSeq::new(vec![gamma]));
            rep.check(self.contains(&unit)?, || format!("sampled 1×1 identity escaped Σ (round {round})"));

            let na = 1 + s.usize(2);
            let nb = 1 + s.usize(2);
            let a = self.sample_member(&mut s, na);
            let b = self.sample_member(&mut s, nb);
            let (Some(a), Some(b)) = (a, b) else { continue };
            let c = s.hmatrix_with(&self.view, b.alpha().clone(), a.beta().clone());
            let zero = HMatrix::zero(self.view.clone(), a.alpha().clone(), b.beta().clone());
            let block = vstack(&hstack(&a, &zero)?, &hstack(&c, &b)?)?;
            rep.check(self.contains(&block)?, || {
                format!("lower block triangle over two members escaped Σ (round {round})")
            });

            if self.multiplicative {
                let n = block.rows();
                let mut perm: Vec<usize> = (0..n).collect();
                let i = s.usize(n);
                let j = s.usize(n);
                perm.swap(i, j);
                let shuffled = block.permute(&perm, &perm)?;
                rep.check(self.contains(&shuffled)?, || {
                    format!("permuted member escaped a multiplicative Σ (round {round})")
                });
            }
        }
        Ok(rep)
    }
}

fn explicit_member(members: &[HMatrix], a: &HMatrix) -> bool {
    if is_identity_like(a) {
        return true;
    }
    if members.iter().any(|m| m == a) {
        return true;
    }
    let n = a.rows();
    for k in 1..n {
        let clean = (0..k).all(|i| (k..n).all(|j| a.entry(i, j).is_zero()));
        if !clean {
            continue;
        }
        let head: Vec<usize> = (0..k).collect();
        let tail: Vec<usize> = (k..n).collect();
        let (Ok(tl), Ok(br)) = (a.submatrix(&head, &head), a.submatrix(&tail, &tail)) else {
            continue;
        };
        if explicit_member(members, &tl) && explicit_member(members, &br) {
            return true;
        }
    }
    false
}

// ------------------------------------------------------------------ tuples

/// `(F, A, X)` with `F` a row of distribution `(γ, β̄)`, `A ∈ Σ_n[ᾱ][β̄]`
/// and `X` a column of distribution `(ᾱ, e)`; denotes `F·A⁻¹·X`, an
/// element of degree γ of the localization.
#[derive(Clone, Debug, PartialEq)]
pub struct LocTuple {
    f: HMatrix,
    a: HMatrix,
    x: HMatrix,
}

impl LocTuple {
    pub fn new(f: HMatrix, a: HMatrix, x: HMatrix) -> Result<LocTuple, LocError> {
        if f.view() != a.view() || a.view() != x.view() {
            return Err(malformed("tuple blocks over different views"));
        }
        if !a.is_square() {
            return Err(malformed("tuple A-block must be square"));
        }
        if a.rows() == 0 {
            return Err(malformed("tuple A-block must be nonempty"));
        }
        if a.rows() > TUPLE_SIZE_CAP {
            return Err(LocError::Budget(format!(
                "tuple A-block of size {} exceeds the cap {}",
                a.rows(),
                TUPLE_SIZE_CAP
            )));
        }
        if f.rows() != 1 || f.beta() != a.beta() {
            return Err(malformed("F must be one row sharing the A-block column distribution"));
        }
        if x.cols() != 1 || x.alpha() != a.alpha() {
            return Err(malformed("X must be one column sharing the A-block row distribution"));
        }
        let e = x.view().group().identity();
        if x.beta().get(0) != &e {
            return Err(malformed("X must carry the trivial column distribution"));
        }
        Ok(LocTuple { f, a, x })
    }

    pub fn f(&self) -> &HMatrix {
        &self.f
    }

    pub fn a(&self) -> &HMatrix {
        &self.a
    }

    pub fn x(&self) -> &HMatrix {
        &self.x
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn degree(&self) -> &GroupElem {
        self.f.alpha().get(0)
    }

    pub fn view(&self) -> &RingView {
        self.a.view()
    }
}

/// Canonical image of a ring element: `(r, 1, 1)` at the given degree.
pub fn tuple_mu(view: &RingView, r: &GradedElement, gamma: &GroupElem) -> Result<LocTuple, LocError> {
    if !view.is_homogeneous_of(r, gamma) {
        return Err(malformed("element is not homogeneous of the requested degree"));
    }
    let e = view.group().identity();
    let f = HMatrix::new(
        view.clone(),
        DegSeq::new(vec![gamma.clone()]),
        DegSeq::uniform(e.clone(), 1),
        vec![r.clone()],
    )?;
    let a = HMatrix::identity(view.clone(), DegSeq::uniform(e, 1));
    let x = a.clone();
    LocTuple::new(f, a, x)
}

pub fn tuple_neg(t: &LocTuple) -> LocTuple {
    LocTuple { f: t.f.neg(), a: t.a.clone(), x: t.x.clone() }
}

/// Sum of same-degree tuples: `((F′ F), A′⊕A, (X′; X))`.
pub fn tuple_add(sigma: &InvertingSet, s: &LocTuple, t: &LocTuple) -> Result<LocTuple, LocError> {
    if s.view() != t.view() {
        return Err(malformed("tuple sum across different views"));
    }
    if s.degree() != t.degree() {
        return Err(malformed("tuple sum needs equal degrees"));
    }
    let f = hstack(&s.f, &t.f)?;
    let a = s.a.diag_sum(&t.a)?;
    let x = vstack(&s.x, &t.x)?;
    if !sigma.contains(&a)? {
        return Err(LocError::NotInverting("sum A-block escaped Σ".into()));
    }
    LocTuple::new(f, a, x)
}

/// Product of tuples, degree γ′·γ where γ′, γ are the factor degrees.
/// The second factor's blocks stay put; the first factor's blocks are
/// right-translated by γ and glued below via `−X′F`:
///
/// ```text
/// F = (0 F′γ)   A = (  A      0 )   X = (X)
///               (−X′F·γ   A′·γ )       (0)
/// ```
pub fn tuple_mul(sigma: &InvertingSet, s: &LocTuple, t: &LocTuple) -> Result<LocTuple, LocError> {
    if s.view() != t.view() {
        return Err(malformed("tuple product across different views"));
    }
    let view = t.view().clone();
    let gamma = t.degree().clone();
    let a2 = s.a.translate_dists(&gamma)?;
    let x2 = s.x.translate_dists(&gamma)?;
    let f2 = s.f.translate_dists(&gamma)?;
    let cross = x2.mat_mul(&t.f)?.neg();
    let top = hstack(&t.a, &HMatrix::zero(view.clone(), t.a.alpha().clone(), a2.beta().clone()))?;
    let bot = hstack(&cross, &a2)?;
    let a = vstack(&top, &bot)?;
    let f = hstack(&HMatrix::zero(view.clone(), f2.alpha().clone(), t.a.beta().clone()), &f2)?;
    let x = vstack(&t.x, &HMatrix::zero(view, a2.alpha().clone(), t.x.beta().clone()))?;
    if !sigma.contains(&a)? {
        return Err(LocError::NotInverting("product A-block escaped Σ".into()));
    }
    LocTuple::new(f, a, x)
}

/// Evaluate a tuple through a Σ-inverting hom: `F^φ·(A^φ)⁻¹·X^φ`.
pub fn tuple_eval(phi: &Hom, t: &LocTuple) -> Result<GradedElement, LocError> {
    let img = t.a.map_hom(phi)?;
    let inv = match gdlin::invert(&img) {
        Ok(i) => i,
        Err(GdlinError::Singular { .. }) => return Err(LocError::SingularImage),
        Err(e) => return Err(e.into()),
    };
    let out = t.f.map_hom(phi)?.mat_mul(&inv)?.mat_mul(&t.x.map_hom(phi)?)?;
    Ok(out.entry(0, 0).clone())
}

/// The grid of tuples `B_ij = (E_iᵀ, A, E_j)` (translated so the unit
/// entries sit at the identity degree); as a matrix it inverts the
/// image of `A` in the localization, entry `(i,j)` having degree
/// `β_i·α_j⁻¹`.
pub fn inverse_tuple_matrix(sigma: &InvertingSet, a: &HMatrix) -> Result<Vec<Vec<LocTuple>>, LocError> {
    if !a.is_square() {
        return Err(malformed("inverse tuples need a square matrix"));
    }
    if !sigma.contains(a)? {
        return Err(LocError::NotInverting("matrix is not in Σ".into()));
    }
    let grp = a.view().group().clone();
    let n = a.rows();
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let shift = grp.inverse(a.alpha().get(j))?;
            let at = a.translate_dists(&shift)?;
            let gamma = grp.ratio(a.beta().get(i), a.alpha().get(j));
            let f = unit_row(a.view(), &gamma, at.beta(), i)?;
            let x = unit_col(a.view(), at.alpha(), j)?;
            row.push(LocTuple::new(f, at, x)?);
        }
        grid.push(row);
    }
    Ok(grid)
}

// ----------------------------------------------------- kernel certificates

/// Witness that `r` (homogeneous of degree γ) maps to zero in the
/// localization at Σ: blocks satisfying
/// `(L 0 W; 0 M 0; 0 J r) = (P; U)·(Q V)` with `L, M, P, Q ∈ Σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MalcolmsonCert {
    pub r: GradedElement,
    pub gamma: GroupElem,
    pub l: HMatrix,
    pub m: HMatrix,
    pub w: HMatrix,
    pub j: HMatrix,
    pub p: HMatrix,
    pub u: HMatrix,
    pub q: HMatrix,
    pub v: HMatrix,
}

impl MalcolmsonCert {
    pub fn view(&self) -> &RingView {
        self.l.view()
    }
}

fn cert_shape_check(c: &MalcolmsonCert) -> Result<(), LocError> {
    let view = c.l.view();
    let e = view.group().identity();
    for (name, mat) in [
        ("L", &c.l),
        ("M", &c.m),
        ("W", &c.w),
        ("J", &c.j),
        ("P", &c.p),
        ("U", &c.u),
        ("Q", &c.q),
        ("V", &c.v),
    ] {
        if mat.view() != view {
            return Err(malformed(format!("block {name} lives over a different view")));
        }
    }
    if !c.l.is_square() || !c.m.is_square() {
        return Err(malformed("L and M must be square"));
    }
    if c.w.cols() != 1 || c.w.alpha() != c.l.alpha() || c.w.beta().get(0) != &e {
        return Err(malformed("W must be a column of distribution (rows of L, e)"));
    }
    if c.j.rows() != 1 || c.j.beta() != c.m.beta() || c.j.alpha().get(0) != &c.gamma {
        return Err(malformed("J must be a row of distribution (γ, columns of M)"));
    }
    let lm_alpha = c.l.alpha().concat(c.m.alpha());
    let lm_beta = c.l.beta().concat(c.m.beta());
    if !c.p.is_square() || c.p.alpha() != &lm_alpha {
        return Err(malformed("P must be square over the joined row distribution of L and M"));
    }
    if !c.q.is_square() || c.q.beta() != &lm_beta || c.q.alpha() != c.p.beta() {
        return Err(malformed("Q must be square from the interface to the joined columns of L and M"));
    }
    if c.u.rows() != 1 || c.u.beta() != c.p.beta() || c.u.alpha().get(0) != &c.gamma {
        return Err(malformed("U must be a row of distribution (γ, interface)"));
    }
    if c.v.cols() != 1 || c.v.alpha() != c.q.alpha() || c.v.beta().get(0) != &e {
        return Err(malformed("V must be a column of distribution (interface, e)"));
    }
    Ok(())
}

/// Replay a kernel certificate. `Ok(true)` means the block identity
/// holds entrywise and all four Σ-memberships hold; honest mismatches
/// give `Ok(false)`, shape or distribution defects give an error.
pub fn malcolmson_verify(sigma: &InvertingSet, c: &MalcolmsonCert) -> Result<bool, LocError> {
    if sigma.view() != c.view() {
        return Err(malformed("certificate and Σ live over different views"));
    }
    cert_shape_check(c)?;
    let view = c.view().clone();
    let e = view.group().identity();
    let r_mat = scalar_mat(&view, &c.gamma, c.r.clone())?;
    let z_lm = HMatrix::zero(view.clone(), c.l.alpha().clone(), c.m.beta().clone());
    let z_ml = HMatrix::zero(view.clone(), c.m.alpha().clone(), c.l.beta().clone());
    let z_m1 = HMatrix::zero(view.clone(), c.m.alpha().clone(), DegSeq::uniform(e, 1));
    let z_jl = HMatrix::zero(view.clone(), DegSeq::new(vec![c.gamma.clone()]), c.l.beta().clone());
    let lhs = vstack(
        &vstack(&hstack3(&c.l, &z_lm, &c.w)?, &hstack3(&z_ml, &c.m, &z_m1)?)?,
        &hstack3(&z_jl, &c.j, &r_mat)?,
    )?;
    let rhs = vstack(&c.p, &c.u)?.mat_mul(&hstack(&c.q, &c.v)?)?;
    if lhs != rhs {
        return Ok(false);
    }
    for mat in [&c.l, &c.m, &c.p, &c.q] {
        if !sigma.contains(mat)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The degenerate certificate for `r = 0`: both sides are `diag(1,1,0)`.
pub fn trivial_kernel_cert(view: &RingView) -> MalcolmsonCert {
    let grp = view.group().clone();
    let e = grp.identity();
    let one1 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1));
    let i2 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 2));
    let z11 = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 1));
    MalcolmsonCert {
        r: view.ring().zero(),
        gamma: e.clone(),
        l: one1.clone(),
        m: one1,
        w: z11.clone(),
        j: z11,
        p: i2.clone(),
        u: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 2)),
        q: i2,
        v: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 2), DegSeq::uniform(e, 1)),
    }
}

/// Certificate for `−r` out of a certificate for `r` (negate the
/// bottom factor row).
pub fn kernel_cert_negate(c: &MalcolmsonCert) -> MalcolmsonCert {
    MalcolmsonCert {
        r: c.view().ring().neg(&c.r),
        u: c.u.neg(),
        j: c.j.neg(),
        ..c.clone()
    }
}

// --------------------------------------------------- tuple equivalence

/// Witness that two tuples denote the same element: blocks with
/// `L, M, P, Q ∈ Σ` satisfying
///
/// ```text
/// ( A  0  0  0  X )   ( P )
/// ( 0  B  0  0  Y )   (   )
/// ( 0  0  L  0  W ) = ( U ) · ( Q V )
/// ( 0  0  0  M  0 )
/// ( F −G  0  J  0 )
/// ```
///
/// where `first = (F, A, X)` and `second = (G, B, Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleEquivCert {
    pub first: LocTuple,
    pub second: LocTuple,
    pub l: HMatrix,
    pub m: HMatrix,
    pub w: HMatrix,
    pub j: HMatrix,
    pub p: HMatrix,
    pub u: HMatrix,
    pub q: HMatrix,
    pub v: HMatrix,
}

pub fn tuple_equiv_verify(sigma: &InvertingSet, c: &TupleEquivCert) -> Result<bool, LocError> {
    let view = c.first.view().clone();
    if sigma.view() != &view || c.second.view() != &view {
        return Err(malformed("equivalence blocks over different views"));
    }
    if c.first.degree() != c.second.degree() {
        return Err(malformed("equivalent tuples must share a degree"));
    }
    let gamma = c.first.degree().clone();
    let e = view.group().identity();
    if !c.l.is_square() || !c.m.is_square() {
        return Err(malformed("L and M must be square"));
    }
    if c.w.cols() != 1 || c.w.alpha() != c.l.alpha() || c.w.beta().get(0) != &e {
        return Err(malformed("W must be a column of distribution (rows of L, e)"));
    }
    if c.j.rows() != 1 || c.j.beta() != c.m.beta() || c.j.alpha().get(0) != &gamma {
        return Err(malformed("J must be a row of distribution (γ, columns of M)"));
    }
    let rows = c
        .first
        .a()
        .alpha()
        .concat(c.second.a().alpha())
        .concat(c.l.alpha())
        .concat(c.m.alpha());
    let cols =
        c.first.a().beta().concat(c.second.a().beta()).concat(c.l.beta()).concat(c.m.beta());
    if !c.p.is_square() || c.p.alpha() != &rows {
        return Err(malformed("P must be square over the joined row distributions"));
    }
    if !c.q.is_square() || c.q.beta() != &cols || c.q.alpha() != c.p.beta() {
        return Err(malformed("Q must be square from the interface to the joined columns"));
    }
    if c.u.rows() != 1 || c.u.beta() != c.p.beta() || c.u.alpha().get(0) != &gamma {
        return Err(malformed("U must be a row of distribution (γ, interface)"));
    }
    if c.v.cols() != 1 || c.v.alpha() != c.q.alpha() || c.v.beta().get(0) != &e {
        return Err(malformed("V must be a column of distribution (interface, e)"));
    }

    let zero = |al: &DegSeq, be: &DegSeq| HMatrix::zero(view.clone(), al.clone(), be.clone());
    let a1 = c.first.a();
    let a2 = c.second.a();
    let row1 = hstack3(
        &hstack3(a1, &zero(a1.alpha(), a2.beta()), &zero(a1.alpha(), c.l.beta()))?,
        &zero(a1.alpha(), c.m.beta()),
        c.first.x(),
    )?;
    let row2 = hstack3(
        &hstack3(&zero(a2.alpha(), a1.beta()), a2, &zero(a2.alpha(), c.l.beta()))?,
        &zero(a2.alpha(), c.m.beta()),
        c.second.x(),
    )?;
    let row3 = hstack3(
        &hstack3(&zero(c.l.alpha(), a1.beta()), &zero(c.l.alpha(), a2.beta()), &c.l)?,
        &zero(c.l.alpha(), c.m.beta()),
        &c.w,
    )?;
    let e1 = DegSeq::uniform(e.clone(), 1);
    let row4 = hstack3(
        &hstack3(&zero(c.m.alpha(), a1.beta()), &zero(c.m.alpha(), a2.beta()), &zero(c.m.alpha(), c.l.beta()))?,
        &c.m,
        &zero(c.m.alpha(), &e1),
    )?;
    let gseq = DegSeq::new(vec![gamma]);
    let row5 = hstack3(
        &hstack3(c.first.f(), &c.second.f().neg(), &zero(&gseq, c.l.beta()))?,
        &c.j,
        &zero(&gseq, &e1),
    )?;
    let big = vstack(&vstack(&vstack(&row1, &row2)?, &vstack(&row3, &row4)?)?, &row5)?;
    let rhs = vstack(&c.p, &c.u)?.mat_mul(&hstack(&c.q, &c.v)?)?;
    if big != rhs {
        return Ok(false);
    }
    for mat in [&c.l, &c.m, &c.p, &c.q, c.first.a(), c.second.a()] {
        if !sigma.contains(mat)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Expand a kernel certificate for `r` into an equivalence between the
/// zero tuple and the canonical image of `r` (same degree γ): the
/// factors gain a leading 2×2 identity and the bottom row `(0 −r U)`.
pub fn kernel_cert_to_equivalence(c: &MalcolmsonCert) -> Result<TupleEquivCert, LocError> {
    cert_shape_check(c)?;
    let view = c.view().clone();
    let grp = view.group().clone();
    let e = grp.identity();
    let zero_t = tuple_mu(&view, &view.ring().zero(), &c.gamma)?;
    let r_t = tuple_mu(&view, &c.r, &c.gamma)?;
    let i2 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 2));
    let p = i2.diag_sum(&c.p)?;
    let q = i2.diag_sum(&c.q)?;
    let z1 = HMatrix::zero(view.clone(), DegSeq::new(vec![c.gamma.clone()]), DegSeq::uniform(e.clone(), 1));
    let minus_r = scalar_mat(&view, &c.gamma, view.ring().neg(&c.r))?;
    let u = hstack3(&z1, &minus_r, &c.u)?;
    let v = vstack(&ones_col(&view, 2)?, &c.v)?;
    Ok(TupleEquivCert {
        first: zero_t,
        second: r_t,
        l: c.l.clone(),
        m: c.m.clone(),
        w: c.w.clone(),
        j: c.j.clone(),
        p,
        u,
        q,
        v,
    })
}

/// Reverse the orientation of an equivalence. Needs a multiplicative Σ:
/// the factors are permuted (leading blocks swapped) and the bottom row
/// negated.
pub fn equivalence_swap(sigma: &InvertingSet, c: &TupleEquivCert) -> Result<TupleEquivCert, LocError> {
    if !sigma.is_multiplicative() {
        return Err(malformed("swapping an equivalence needs a multiplicative Σ"));
    }
    let n1 = c.first.size();
    let n2 = c.second.size();
    let total = c.p.rows();
    let mut swap: Vec<usize> = Vec::with_capacity(total);
    swap.extend(n1..n1 + n2);
    swap.extend(0..n1);
    swap.extend(n1 + n2..total);
    let p = c.p.permute(&swap, &id_perm(c.p.cols()))?;
    let q = c.q.permute(&id_perm(c.q.rows()), &swap)?;
    Ok(TupleEquivCert {
        first: c.second.clone(),
        second: c.first.clone(),
        l: c.l.clone(),
        m: c.m.clone(),
        w: c.w.clone(),
        j: c.j.neg(),
        p,
        u: c.u.neg(),
        q,
        v: c.v.clone(),
    })
}

/// Contract an equivalence `image-of-r ∼ zero-tuple` (both sides 1×1
/// canonical tuples) into a kernel certificate for `r` by bordering:
/// the produced blocks are `diag(1,1,L)`, `M⊕1`, `(−J r)`, and the
/// factors gain one row and column each.
pub fn equivalence_to_kernel_cert(c: &TupleEquivCert) -> Result<MalcolmsonCert, LocError> {
    let view = c.first.view().clone();
    let grp = view.group().clone();
    let e = grp.identity();
    if c.first.size() != 1 || c.second.size() != 1 {
        return Err(malformed("contraction expects 1×1 canonical tuples"));
    }
    if !is_identity_like(c.first.a())
        || !is_identity_like(c.second.a())
        || !is_identity_like(c.first.x())
        || !is_identity_like(c.second.x())
    {
        return Err(malformed("contraction expects canonical image tuples"));
    }
    if !c.second.f().entry(0, 0).is_zero() {
        return Err(malformed("contraction expects the zero tuple on the right"));
    }
    let gamma = c.first.degree().clone();
    let r = c.first.f().entry(0, 0).clone();
    let i2 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 2));
    let one1 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1));
    let l = i2.diag_sum(&c.l)?;
    let w = vstack(&ones_col(&view, 2)?, &c.w)?;
    let m = c.m.diag_sum(&one1)?;
    let r_mat = scalar_mat(&view, &gamma, r.clone())?;
    let j = hstack(&c.j.neg(), &r_mat)?;
    let all_p_cols: Vec<usize> = (0..c.p.cols()).collect();
    let p_row0 = c.p.submatrix(&[0], &all_p_cols)?;
    let p = vstack(
        &hstack(&c.p, &HMatrix::zero(view.clone(), c.p.alpha().clone(), DegSeq::uniform(e.clone(), 1)))?,
        &hstack(&p_row0.neg(), &one1)?,
    )?;
    let u = hstack(&c.u.neg(), &r_mat)?;
    let e0 = unit_row(&view, &e, c.q.beta(), 0)?;
    let q = vstack(
        &hstack(&c.q, &HMatrix::zero(view.clone(), c.q.alpha().clone(), DegSeq::uniform(e.clone(), 1)))?,
        &hstack(&e0, &one1)?,
    )?;
    let v = vstack(&c.v, &ones_col(&view, 1)?)?;
    Ok(MalcolmsonCert { r, gamma, l, m, w, j, p, u, q, v })
}

// ------------------------------------------------- nonzero localization

/// Outcome of probing an externally supplied certificate for `r = 1`.
#[derive(Clone, Debug)]
pub enum UnitCertOutcome {
    /// The certificate does not verify; the reason pins the first
    /// failing coordinate or the failing Σ-membership.
    Rejected { reason: String },
    /// The certificate verifies, so Σ contains a matrix that is not
    /// full: the exhibited block matrix factors through a strictly
    /// smaller interface, and the localization collapses to zero.
    Contradiction { matrix: HMatrix, witness: FactorizationWitness },
}

/// Report of [`nonzero_localization_check`].
#[derive(Clone, Debug)]
pub struct NonzeroReport {
    pub trials: usize,
    pub members_checked: usize,
    pub all_members_full: bool,
    pub found_unit_cert: Option<Box<MalcolmsonCert>>,
    pub supplied: Option<UnitCertOutcome>,
}

/// Probe whether the localization at Σ can be shown to collapse:
/// samples members (screening them for hollow patterns), searches
/// random Σ-factorizations for a certificate with `r = 1` within the
/// trial budget, and, when a candidate certificate is supplied, either
/// rejects it with coordinates or derives the non-full contradiction.
pub fn nonzero_localization_check(
    sigma: &InvertingSet,
    seed: u64,
    trials: usize,
    supplied: Option<&MalcolmsonCert>,
) -> Result<NonzeroReport, LocError> {
    let mut s = Sampler::new(seed);
    let view = sigma.view().clone();
    let one = view.ring().one();
    let e = view.group().identity();
    let mut members_checked = 0usize;
    let mut all_members_full = true;
    let mut found: Option<Box<MalcolmsonCert>> = None;

    for _ in 0..trials {
        let n = 1 + s.usize(3);
        if let Some(a) = sigma.sample_member(&mut s, n) {
            members_checked += 1;
            let (hollow, _) = a.find_hollow();
            if hollow.is_some() {
                all_members_full = false;
            }
        }
        if found.is_some() {
            continue;
        }
        // bounded search: multiply sampled Σ-members against random
        // borders and try to read the product back as a unit certificate
        let total = 2 + s.usize(2);
        let Some(p_mat) = sigma.sample_member(&mut s, total) else { continue };
        let Some(q_mat) = sigma.sample_member(&mut s, total) else { continue };
        if p_mat.beta() != q_mat.alpha() {
            continue;
        }
        let u_row = s.hmatrix_with(&view, DegSeq::new(vec![e.clone()]), p_mat.beta().clone());
        let v_col = s.hmatrix_with(&view, q_mat.alpha().clone(), DegSeq::new(vec![e.clone()]));
        let big = vstack(&p_mat, &u_row)?.mat_mul(&hstack(&q_mat, &v_col)?)?;
        if *big.entry(total, total) != one {
            continue;
        }
        for k in 1..total {
            let zero_blocks = (0..k).all(|i| (k..total).all(|j| big.entry(i, j).is_zero()))
                && (k..total).all(|i| (0..k).all(|j| big.entry(i, j).is_zero()))
                && (k..total).all(|i| big.entry(i, total).is_zero())
                && (0..k).all(|j| big.entry(total, j).is_zero());
            if !zero_blocks {
                continue;
            }
            let head: Vec<usize> = (0..k).collect();
            let tail: Vec<usize> = (k..total).collect();
            let cand = MalcolmsonCert {
                r: one.clone(),
                gamma: e.clone(),
                l: big.submatrix(&head, &head)?,
                m: big.submatrix(&tail, &tail)?,
                w: big.submatrix(&head, &[total])?,
                j: big.submatrix(&[total], &tail)?,
                p: p_mat.clone(),
                u: u_row.clone(),
                q: q_mat.clone(),
                v: v_col.clone(),
            };
            if matches!(malcolmson_verify(sigma, &cand), Ok(true)) {
                found = Some(Box::new(cand));
                break;
            }
        }
    }
    let supplied = match supplied {
        Some(c) => Some(refute_unit_cert(sigma, c)?),
        None => None,
    };
    Ok(NonzeroReport { trials, members_checked, all_members_full, found_unit_cert: found, supplied })
}

/// Examine a purported certificate for `r = 1`. A verifying one turns
/// into the contradiction `(L −WJ W; 0 M 0; 0 0 1) = (P; U)·(Q_L, Q_M−VJ, V)`,
/// a square matrix in Σ factored through a smaller interface.
pub fn refute_unit_cert(sigma: &InvertingSet, c: &MalcolmsonCert) -> Result<UnitCertOutcome, LocError> {
    let view = sigma.view().clone();
    let e = view.group().identity();
    if c.r != view.ring().one() || c.gamma != e {
        return Ok(UnitCertOutcome::Rejected { reason: "certificate is not about the unit".into() });
    }
    match malcolmson_verify(sigma, c) {
        Err(err) => Ok(UnitCertOutcome::Rejected { reason: format!("malformed: {err}") }),
        Ok(false) => {
            let reason = locate_cert_defect(sigma, c)?;
            Ok(UnitCertOutcome::Rejected { reason })
        }
        Ok(true) => {
            let wj = c.w.mat_mul(&c.j)?;
            let z_ml = HMatrix::zero(view.clone(), c.m.alpha().clone(), c.l.beta().clone());
            let z_m1 = HMatrix::zero(view.clone(), c.m.alpha().clone(), DegSeq::uniform(e.clone(), 1));
            let z_1l = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), c.l.beta().clone());
            let z_1m = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), c.m.beta().clone());
            let one1 = HMatrix::identity(view.clone(), DegSeq::uniform(e, 1));
            let t = vstack(
                &vstack(&hstack3(&c.l, &wj.neg(), &c.w)?, &hstack3(&z_ml, &c.m, &z_m1)?)?,
                &hstack3(&z_1l, &z_1m, &one1)?,
            )?;
            let lcols: Vec<usize> = (0..c.l.cols()).collect();
            let mcols: Vec<usize> = (c.l.cols()..c.q.cols()).collect();
            let all_q_rows: Vec<usize> = (0..c.q.rows()).collect();
            let q_l = c.q.submatrix(&all_q_rows, &lcols)?;
            let q_m = c.q.submatrix(&all_q_rows, &mcols)?;
            let vj = c.v.mat_mul(&c.j)?;
            let q_m_adj = q_m.add(&vj.neg())?;
            let witness = FactorizationWitness {
                p: vstack(&c.p, &c.u)?,
                q: hstack3(&q_l, &q_m_adj, &c.v)?,
            };
            hmat::verify_nonfull(&t, &witness)
                .map_err(|err| malformed(format!("contradiction assembly failed: {err}")))?;
            Ok(UnitCertOutcome::Contradiction { matrix: t, witness })
        }
    }
}

fn locate_cert_defect(sigma: &InvertingSet, c: &MalcolmsonCert) -> Result<String, LocError> {
    let view = c.view().clone();
    let e = view.group().identity();
    let r_mat = scalar_mat(&view, &c.gamma, c.r.clone())?;
    let z_lm = HMatrix::zero(view.clone(), c.l.alpha().clone(), c.m.beta().clone());
    let z_ml = HMatrix::zero(view.clone(), c.m.alpha().clone(), c.l.beta().clone());
    let z_m1 = HMatrix::zero(view.clone(), c.m.alpha().clone(), DegSeq::uniform(e, 1));
    let z_jl = HMatrix::zero(view.clone(), DegSeq::new(vec![c.gamma.clone()]), c.l.beta().clone());
    let lhs = vstack(
        &vstack(&hstack3(&c.l, &z_lm, &c.w)?, &hstack3(&z_ml, &c.m, &z_m1)?)?,
        &hstack3(&z_jl, &c.j, &r_mat)?,
    )?;
    let rhs = vstack(&c.p, &c.u)?.mat_mul(&hstack(&c.q, &c.v)?)?;
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if lhs.entry(i, j) != rhs.entry(i, j) {
                return Ok(format!("block identity fails at ({i},{j})"));
            }
        }
    }
    for (name, mat) in [("L", &c.l), ("M", &c.m), ("P", &c.p), ("Q", &c.q)] {
        if !sigma.contains(mat)? {
            return Ok(format!("block {name} escaped Σ"));
        }
    }
    Ok("no defect found".into())
}

// ------------------------------------------------------ closure systems

/// An `n×(n+1)` homogeneous system over the base ring together with a
/// normalized solution column over the target: `A^f·u = 0`, leading
/// column at the identity degree, `u₀ = 1`. Denotes the last entry of
/// `u`, an element of degree β_last of the rational closure.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureSystem {
    a: HMatrix,
    u: HMatrix,
}

impl ClosureSystem {
    pub fn new(a: HMatrix, u: HMatrix) -> Result<ClosureSystem, LocError> {
        if a.cols() != a.rows() + 1 || a.rows() == 0 {
            return Err(malformed("system matrix must be n×(n+1)"));
        }
        if u.cols() != 1 || u.rows() != a.cols() {
            return Err(malformed("solution must be a column of length n+1"));
        }
        if u.alpha().as_slice() != a.beta().as_slice() {
            return Err(malformed("solution distribution must mirror the system columns"));
        }
        let e_base = a.view().group().identity();
        if a.beta().get(0) != &e_base {
            return Err(malformed("leading system column must sit at the identity degree"));
        }
        let e_tgt = u.view().group().identity();
        if u.beta().get(0) != &e_tgt {
            return Err(malformed("solution must carry the trivial column distribution"));
        }
        if *u.entry(0, 0) != u.view().ring().one() {
            return Err(malformed("solution must be normalized with a leading 1"));
        }
        Ok(ClosureSystem { a, u })
    }

    pub fn a(&self) -> &HMatrix {
        &self.a
    }

    pub fn u(&self) -> &HMatrix {
        &self.u
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// Degree of the denoted element: the last column degree.
    pub fn degree(&self) -> &GroupElem {
        self.a.beta().get(self.a.rows())
    }

    /// The denoted element: the last solution entry.
    pub fn value(&self) -> &GradedElement {
        self.u.entry(self.a.rows(), 0)
    }

    /// Columns 0..n (drop the last).
    pub fn numerator(&self) -> Result<HMatrix, LocError> {
        let rows: Vec<usize> = (0..self.a.rows()).collect();
        let cols: Vec<usize> = (0..self.a.rows()).collect();
        Ok(self.a.submatrix(&rows, &cols)?)
    }

    /// Columns 1..=n (drop the first).
    pub fn denominator(&self) -> Result<HMatrix, LocError> {
        let rows: Vec<usize> = (0..self.a.rows()).collect();
        let cols: Vec<usize> = (1..=self.a.rows()).collect();
        Ok(self.a.submatrix(&rows, &cols)?)
    }

    /// Check the system against a Σ-inverting hom: the denominator is
    /// in Σ and the solution annihilates the image.
    pub fn validate(&self, f: &Hom, sigma: &InvertingSet) -> Result<(), LocError> {
        if self.a.view() != sigma.view() {
            return Err(malformed("system and Σ live over different views"));
        }
        if !sigma.contains(&self.denominator()?)? {
            return Err(LocError::NotInverting("system denominator escaped Σ".into()));
        }
        let img = self.a.map_hom(f)?;
        let prod = img.mat_mul(&self.u)?;
        if !prod.is_zero() {
            return Err(malformed("solution does not annihilate the system image"));
        }
        Ok(())
    }
}

/// Square data `A^f·u = rhs^f` with the denoted element at the last
/// solution entry; the bridge between systems and bordered forms.
#[derive(Clone, Debug)]
struct SolvedForm {
    a: HMatrix,
    rhs: HMatrix,
    u: HMatrix,
}

fn system_to_solved(sys: &ClosureSystem) -> Result<SolvedForm, LocError> {
    let n = sys.size();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (1..=n).collect();
    let a = sys.a.submatrix(&rows, &cols)?;
    let rhs = sys.a.submatrix(&rows, &[0])?.neg();
    let urows: Vec<usize> = (1..=n).collect();
    let u = sys.u.submatrix(&urows, &[0])?;
    Ok(SolvedForm { a, rhs, u })
}

fn solved_to_system(s: &SolvedForm) -> Result<ClosureSystem, LocError> {
    let tv = s.u.view().clone();
    let e = tv.group().identity();
    let one = HMatrix::new(
        tv.clone(),
        DegSeq::uniform(e.clone(), 1),
        DegSeq::uniform(e, 1),
        vec![tv.ring().one()],
    )?;
    ClosureSystem::new(hstack(&s.rhs.neg(), &s.a)?, vstack(&one, &s.u)?)
}

/// Split of a closure system into numerator/denominator data, with the
/// invertibility bookkeeping that ties the element to the numerator.
#[derive(Clone, Debug)]
pub struct CramerSplit {
    pub numerator: HMatrix,
    pub denominator: HMatrix,
    pub value: GradedElement,
    pub degree: GroupElem,
    pub numerator_invertible: bool,
    pub value_invertible: bool,
    /// When the value is zero, the numerator image is not full; this
    /// factorization through a smaller interface witnesses it.
    pub zero_witness: Option<FactorizationWitness>,
}

/// Verify the pivotal identity
/// `(A_•^f | −A₀^f) = (A_• A_∞)^f · (I u_•; 0 x)` and split the system.
pub fn cramer_split(
    f: &Hom,
    sigma: &InvertingSet,
    a: &HMatrix,
    u: &HMatrix,
) -> Result<CramerSplit, LocError> {
    let sys = ClosureSystem::new(a.clone(), u.clone())?;
    sys.validate(f, sigma)?;
    let n = sys.size();
    let numerator = sys.numerator()?;
    let denominator = sys.denominator()?;
    let den_img = denominator.map_hom(f)?;
    let tv = den_img.view().clone();
    let x = sys.value().clone();

    let mid_rows: Vec<usize> = (1..n).collect();
    let u_mid = sys.u.submatrix(&mid_rows, &[0])?;
    let beta_mid = den_img.beta().select(&(0..n - 1).collect::<Vec<_>>());
    let beta_last = den_img.beta().get(n - 1).clone();
    let ident = HMatrix::identity(tv.clone(), beta_mid.clone());
    let x_mat = scalar_mat(&tv, &beta_last, x.clone())?;
    let top = hstack(&ident, &u_mid)?;
    let bot = hstack(
        &HMatrix::zero(tv.clone(), DegSeq::new(vec![beta_last.clone()]), beta_mid),
        &x_mat,
    )?;
    let pivot = den_img.mat_mul(&vstack(&top, &bot)?)?;
    let all_rows: Vec<usize> = (0..n).collect();
    let a_mid_img = den_img.submatrix(&all_rows, &(0..n - 1).collect::<Vec<_>>())?;
    let a0_img = sys.a.submatrix(&all_rows, &[0])?.map_hom(f)?;
    let expected = hstack(&a_mid_img, &a0_img.neg())?;
    if pivot != expected {
        return Err(malformed("pivotal identity failed; inconsistent system"));
    }

    let num_img = numerator.map_hom(f)?;
    let numerator_invertible = gdlin::is_invertible(&num_img)?;
    let value_invertible = f.target().invert_homogeneous(&x).is_ok();
    if f.target().is_graded_division() && numerator_invertible != value_invertible {
        return Err(malformed("invertibility of the value and of the numerator disagree"));
    }
    let zero_witness = if x.is_zero() {
        let q = hstack(&u_mid.neg(), &ident_like(&num_img, n)?)?;
        let witness = FactorizationWitness { p: a_mid_img, q };
        hmat::verify_nonfull(&num_img, &witness)
            .map_err(|err| malformed(format!("zero-value witness failed: {err}")))?;
        Some(witness)
    } else {
        None
    };
    Ok(CramerSplit {
        numerator,
        denominator,
        value: x,
        degree: sys.degree().clone(),
        numerator_invertible,
        value_invertible,
        zero_witness,
    })
}

fn ident_like(num_img: &HMatrix, n: usize) -> Result<HMatrix, LocError> {
    // identity over the numerator's trailing column degrees
    let cols: Vec<usize> = (1..n).collect();
    let beta = num_img.beta().select(&cols);
    Ok(HMatrix::identity(num_img.view().clone(), beta))
}

/// The full inverse image of a Σ-member with its degree labels:
/// entry `(i,j)` of the inverse carries degree `β_i·α_j⁻¹`.
pub fn rational_closure_entries(
    f: &Hom,
    sigma: &InvertingSet,
    a: &HMatrix,
) -> Result<Vec<Vec<(GradedElement, GroupElem)>>, LocError> {
    if !sigma.contains(a)? {
        return Err(LocError::NotInverting("matrix is not in Σ".into()));
    }
    let img = a.map_hom(f)?;
    let inv = match gdlin::invert(&img) {
        Ok(i) => i,
        Err(GdlinError::Singular { .. }) => return Err(LocError::SingularImage),
        Err(e) => return Err(e.into()),
    };
    let grp = a.view().group().clone();
    let mut grid = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut row = Vec::with_capacity(a.cols());
        for j in 0..a.cols() {
            row.push((inv.entry(i, j).clone(), grp.ratio(a.beta().get(i), a.alpha().get(j))));
        }
        grid.push(row);
    }
    Ok(grid)
}

fn split_last(u: &HMatrix) -> Result<(HMatrix, GradedElement), LocError> {
    let n = u.rows();
    let mid: Vec<usize> = (0..n - 1).collect();
    Ok((u.submatrix(&mid, &[0])?, u.entry(n - 1, 0).clone()))
}

/// Sum of two same-degree closure elements as a new closure system:
/// the block denominator stacks both denominators lower-triangularly
/// with the second last column repeated.
pub fn closure_sum(
    f: &Hom,
    sigma: &InvertingSet,
    sx: &ClosureSystem,
    sy: &ClosureSystem,
) -> Result<ClosureSystem, LocError> {
    sx.validate(f, sigma)?;
    sy.validate(f, sigma)?;
    if sx.degree() != sy.degree() {
        return Err(malformed("closure sum needs matching degrees"));
    }
    let dx = system_to_solved(sx)?;
    let dy = system_to_solved(sy)?;
    let view = dx.a.view().clone();
    let n = dx.a.rows();
    let n2 = dy.a.rows();
    let rows_x: Vec<usize> = (0..n).collect();
    let rows_y: Vec<usize> = (0..n2).collect();
    let a_mid = dx.a.submatrix(&rows_x, &(0..n - 1).collect::<Vec<_>>())?;
    let a_inf = dx.a.submatrix(&rows_x, &[n - 1])?;
    let b_mid = dy.a.submatrix(&rows_y, &(0..n2 - 1).collect::<Vec<_>>())?;
    let b_inf = dy.a.submatrix(&rows_y, &[n2 - 1])?;
    let top = hstack3(
        &hstack(&a_mid, &a_inf)?,
        &HMatrix::zero(view.clone(), dx.a.alpha().clone(), b_mid.beta().clone()),
        &HMatrix::zero(view.clone(), dx.a.alpha().clone(), b_inf.beta().clone()),
    )?;
    let bot = hstack3(
        &hstack(
            &HMatrix::zero(view.clone(), dy.a.alpha().clone(), a_mid.beta().clone()),
            &b_inf.neg(),
        )?,
        &b_mid,
        &b_inf,
    )?;
    let block = vstack(&top, &bot)?;
    let rhs = vstack(&dx.rhs, &dy.rhs)?;

    let (u_mid, x) = split_last(&dx.u)?;
    let (v_mid, y) = split_last(&dy.u)?;
    let tv = dx.u.view().clone();
    let tr = tv.ring().clone();
    let gamma_t = dx.u.alpha().get(n - 1).clone();
    let x_mat = scalar_mat(&tv, &gamma_t, x.clone())?;
    let xy_mat = scalar_mat(&tv, &gamma_t, tr.add(&x, &y))?;
    let w = vstack(&vstack(&u_mid, &x_mat)?, &vstack(&v_mid, &xy_mat)?)?;
    let out = solved_to_system(&SolvedForm { a: block, rhs, u: w })?;
    out.validate(f, sigma)?;
    Ok(out)
}

/// Product of closure elements `x·y` as a new closure system of degree
/// γ·δ: the second denominator leads, the first follows translated by
/// δ, glued by the first right-hand side in the shared column.
pub fn closure_mul(
    f: &Hom,
    sigma: &InvertingSet,
    sx: &ClosureSystem,
    sy: &ClosureSystem,
) -> Result<ClosureSystem, LocError> {
    sx.validate(f, sigma)?;
    sy.validate(f, sigma)?;
    let dx = system_to_solved(sx)?;
    let dy = system_to_solved(sy)?;
    let view = dx.a.view().clone();
    let delta = sy.degree().clone();
    let n = dx.a.rows();
    let n2 = dy.a.rows();
    let rows_y: Vec<usize> = (0..n2).collect();
    let b_mid = dy.a.submatrix(&rows_y, &(0..n2 - 1).collect::<Vec<_>>())?;
    let b_inf = dy.a.submatrix(&rows_y, &[n2 - 1])?;
    let a_t = dx.a.translate_dists(&delta)?;
    let rhs_t = dx.rhs.translate_dists(&delta)?;
    let top = hstack3(
        &b_mid,
        &b_inf,
        &HMatrix::zero(view.clone(), dy.a.alpha().clone(), a_t.beta().clone()),
    )?;
    let bot = hstack3(
        &HMatrix::zero(view.clone(), a_t.alpha().clone(), b_mid.beta().clone()),
        &rhs_t.neg(),
        &a_t,
    )?;
    let block = vstack(&top, &bot)?;
    let rhs = vstack(
        &dy.rhs,
        &HMatrix::zero(view, a_t.alpha().clone(), dy.rhs.beta().clone()),
    )?;

    let (u_mid, x) = split_last(&dx.u)?;
    let (v_mid, y) = split_last(&dy.u)?;
    let tv = dx.u.view().clone();
    let tr = tv.ring().clone();
    let delta_t = dy.u.alpha().get(n2 - 1).clone();
    let y_mat = scalar_mat(&tv, &delta_t, y.clone())?;
    let mut scaled = Vec::with_capacity(n - 1);
    for i in 0..u_mid.rows() {
        scaled.push(tr.mul(u_mid.entry(i, 0), &y));
    }
    let u_mid_y = HMatrix::new(
        tv.clone(),
        u_mid.alpha().translate(tv.group(), &delta_t)?,
        u_mid.beta().clone(),
        scaled,
    )?;
    let gamma_t = dx.u.alpha().get(n - 1).clone();
    let xy_deg = tv.group().compose(&gamma_t, &delta_t)?;
    let xy_mat = scalar_mat(&tv, &xy_deg, tr.mul(&x, &y))?;
    let w = vstack(&vstack(&v_mid, &y_mat)?, &vstack(&u_mid_y, &xy_mat)?)?;
    let out = solved_to_system(&SolvedForm { a: block, rhs, u: w })?;
    out.validate(f, sigma)?;
    Ok(out)
}

/// A tuple denoting the same element as a closure system: the unit row
/// picks the last solution entry out of the denominator inverse.
pub fn system_to_tuple(sigma: &InvertingSet, sys: &ClosureSystem) -> Result<LocTuple, LocError> {
    let d = system_to_solved(sys)?;
    if !sigma.contains(&d.a)? {
        return Err(LocError::NotInverting("system denominator escaped Σ".into()));
    }
    let gamma = sys.degree().clone();
    let f = unit_row(d.a.view(), &gamma, d.a.beta(), d.a.rows() - 1)?;
    LocTuple::new(f, d.a, d.rhs)
}

/// For an invertible closure element of degree γ, the reordered system
/// `(A_∞ A_• A₀)·γ⁻¹` solved by `(1; u_•x⁻¹; x⁻¹)` realizes `x⁻¹` at
/// degree γ⁻¹; returned as a tuple over the base ring.
pub fn closure_inverse_witness(
    f: &Hom,
    sigma: &InvertingSet,
    sys: &ClosureSystem,
) -> Result<LocTuple, LocError> {
    sys.validate(f, sigma)?;
    let x = sys.value().clone();
    let x_inv = f
        .target()
        .invert_homogeneous(&x)
        .map_err(|_| malformed("closure value is not invertible"))?;
    let n = sys.size();
    let grp = sys.a.view().group().clone();
    let gamma = sys.degree().clone();
    let ginv = grp.inverse(&gamma)?;
    let mut order: Vec<usize> = Vec::with_capacity(n + 1);
    order.push(n);
    order.extend(1..n);
    order.push(0);
    let re = sys.a.translate_dists(&ginv)?.permute(&id_perm(n), &order)?;

    let tv = sys.u.view().clone();
    let tr = tv.ring().clone();
    let tginv = tv.group().inverse(sys.u.alpha().get(n))?;
    let mut entries = Vec::with_capacity(n + 1);
    entries.push(tr.one());
    for i in 1..n {
        entries.push(tr.mul(sys.u.entry(i, 0), &x_inv));
    }
    entries.push(x_inv);
    let u = HMatrix::new(
        tv.clone(),
        sys.u.alpha().select(&order).translate(tv.group(), &tginv)?,
        sys.u.beta().clone(),
        entries,
    )?;
    let inv_sys = ClosureSystem::new(re, u)?;
    inv_sys.validate(f, sigma)?;
    system_to_tuple(sigma, &inv_sys)
}

/// Rewrite two closure systems over a shared denominator: the outputs
/// denote the same two elements, and their denominators coincide up to
/// the right translation by γ⁻¹δ.
pub fn common_denominator(
    f: &Hom,
    sigma: &InvertingSet,
    sx: &ClosureSystem,
    sy: &ClosureSystem,
) -> Result<(ClosureSystem, ClosureSystem), LocError> {
    sx.validate(f, sigma)?;
    sy.validate(f, sigma)?;
    let view = sx.a.view().clone();
    let grp = view.group().clone();
    let gamma = sx.degree().clone();
    let delta = sy.degree().clone();
    // B-blocks of the first system move by δ⁻¹γ, A-blocks of the
    // second by γ⁻¹δ, so the denominators match entrywise.
    let to_first = grp.compose(&grp.inverse(&delta)?, &gamma)?;
    let to_second = grp.inverse(&to_first)?;

    let n = sx.size();
    let n2 = sy.size();
    let rows_x: Vec<usize> = (0..n).collect();
    let rows_y: Vec<usize> = (0..n2).collect();
    let a0 = sx.a.submatrix(&rows_x, &[0])?;
    let a_mid = sx.a.submatrix(&rows_x, &(1..n).collect::<Vec<_>>())?;
    let a_inf = sx.a.submatrix(&rows_x, &[n])?;
    let b0 = sy.a.submatrix(&rows_y, &[0])?;
    let b_mid = sy.a.submatrix(&rows_y, &(1..n2).collect::<Vec<_>>())?;
    let b_inf = sy.a.submatrix(&rows_y, &[n2])?;

    // first output: (A₀ A_• A_∞ 0 0; 0 0 −B_∞' B_•' B_∞')
    let b_mid_1 = b_mid.translate_dists(&to_first)?;
    let b_inf_1 = b_inf.translate_dists(&to_first)?;
    let top1 = hstack3(
        &hstack3(&a0, &a_mid, &a_inf)?,
        &HMatrix::zero(view.clone(), sx.a.alpha().clone(), b_mid_1.beta().clone()),
        &HMatrix::zero(view.clone(), sx.a.alpha().clone(), b_inf_1.beta().clone()),
    )?;
    let bot1 = hstack3(
        &hstack3(
            &HMatrix::zero(view.clone(), b_inf_1.alpha().clone(), a0.beta().clone()),
            &HMatrix::zero(view.clone(), b_inf_1.alpha().clone(), a_mid.beta().clone()),
            &b_inf_1.neg(),
        )?,
        &b_mid_1,
        &b_inf_1,
    )?;
    let m1 = vstack(&top1, &bot1)?;

    let tv = sx.u.view().clone();
    let tr = tv.ring().clone();
    let (u_mid, x) = split_last(&sx.u.submatrix(&(1..=n).collect::<Vec<_>>(), &[0])?)?;
    let gamma_t = sx.u.alpha().get(n).clone();
    let x_mat = scalar_mat(&tv, &gamma_t, x)?;
    let zeros_mid = HMatrix::zero(
        tv.clone(),
        sy.u.alpha().select(&(1..n2).collect::<Vec<_>>()).translate(tv.group(), &to_first)?,
        sx.u.beta().clone(),
    );
    let one_t = HMatrix::new(
        tv.clone(),
        DegSeq::uniform(tv.group().identity(), 1),
        DegSeq::uniform(tv.group().identity(), 1),
        vec![tr.one()],
    )?;
    let w1 = vstack(&vstack(&vstack(&one_t, &u_mid)?, &x_mat.clone())?, &vstack(&zeros_mid, &x_mat)?)?;
    let out1 = ClosureSystem::new(m1, w1)?;
    out1.validate(f, sigma)?;

    // second output: (0 A_•'' A_∞'' 0 0; B₀ 0 −B_∞ B_• B_∞)
    let a_mid_2 = a_mid.translate_dists(&to_second)?;
    let a_inf_2 = a_inf.translate_dists(&to_second)?;
    let top2 = hstack3(
        &hstack3(
            &HMatrix::zero(view.clone(), a_mid_2.alpha().clone(), b0.beta().clone()),
            &a_mid_2,
            &a_inf_2,
        )?,
        &HMatrix::zero(view.clone(), a_mid_2.alpha().clone(), b_mid.beta().clone()),
        &HMatrix::zero(view.clone(), a_mid_2.alpha().clone(), b_inf.beta().clone()),
    )?;
    let bot2 = hstack3(
        &hstack3(
            &b0,
            &HMatrix::zero(view.clone(), b0.alpha().clone(), a_mid_2.beta().clone()),
            &b_inf.neg(),
        )?,
        &b_mid,
        &b_inf,
    )?;
    let m2 = vstack(&top2, &bot2)?;
    let (v_mid, y) = split_last(&sy.u.submatrix(&(1..=n2).collect::<Vec<_>>(), &[0])?)?;
    let delta_t = sy.u.alpha().get(n2).clone();
    let y_mat = scalar_mat(&tv, &delta_t, y)?;
    let zeros_a = HMatrix::zero(
        tv.clone(),
        sx.u.alpha().select(&(1..n).collect::<Vec<_>>()).translate(tv.group(), &to_second)?,
        sx.u.beta().clone(),
    );
    let zero_d = HMatrix::zero(tv.clone(), DegSeq::new(vec![delta_t]), sx.u.beta().clone());
    let w2 = vstack(&vstack(&vstack(&one_t, &zeros_a)?, &zero_d)?, &vstack(&v_mid, &y_mat)?)?;
    let out2 = ClosureSystem::new(m2, w2)?;
    out2.validate(f, sigma)?;
    Ok((out1, out2))
}

// ------------------------------------------------- entry representations

/// The interchangeable shapes in which one rational-closure element can
/// be presented; [`representation_normalize`] converts between them.
#[derive(Clone, Debug)]
pub enum ClosureRep {
    /// x = `(row, col)` entry of the inverse image of a Σ-member;
    /// degree β_row·α_col⁻¹.
    Entry { a: HMatrix, row: usize, col: usize },
    /// Entry form translated so column `col` sits at the identity.
    BasedEntry { a: HMatrix, row: usize, col: usize },
    /// `A^f·u = e_col` with x = `u[row]`.
    InverseColumn { a: HMatrix, u: HMatrix, row: usize, col: usize },
    /// `A^f·u = rhs^f` with x = `u[row]`.
    SolvedColumn { a: HMatrix, rhs: HMatrix, u: HMatrix, row: usize },
    /// `A^f·u = rhs^f` with x at the last position.
    LastEntry { a: HMatrix, rhs: HMatrix, u: HMatrix },
    /// x = `b^f·(A^f)⁻¹·c^f`.
    Sandwich { b: HMatrix, a: HMatrix, c: HMatrix },
    /// Homogeneous n×(n+1) system with a normalized solution.
    System(ClosureSystem),
}

pub fn rep_form(rep: &ClosureRep) -> u8 {
    match rep {
        ClosureRep::Entry { .. } => 1,
        ClosureRep::BasedEntry { .. } => 2,
        ClosureRep::InverseColumn { .. } => 3,
        ClosureRep::SolvedColumn { .. } => 4,
        ClosureRep::LastEntry { .. } => 5,
        ClosureRep::Sandwich { .. } => 6,
        ClosureRep::System(_) => 7,
    }
}

fn invert_image(f: &Hom, a: &HMatrix) -> Result<HMatrix, LocError> {
    match gdlin::invert(&a.map_hom(f)?) {
        Ok(i) => Ok(i),
        Err(GdlinError::Singular { .. }) => Err(LocError::SingularImage),
        Err(e) => Err(e.into()),
    }
}

/// The element a representation denotes, computed over the target.
pub fn rep_value(f: &Hom, rep: &ClosureRep) -> Result<GradedElement, LocError> {
    match rep {
        ClosureRep::Entry { a, row, col } | ClosureRep::BasedEntry { a, row, col } => {
            Ok(invert_image(f, a)?.entry(*row, *col).clone())
        }
        ClosureRep::InverseColumn { u, row, .. } => Ok(u.entry(*row, 0).clone()),
        ClosureRep::SolvedColumn { u, row, .. } => Ok(u.entry(*row, 0).clone()),
        ClosureRep::LastEntry { u, .. } => Ok(u.entry(u.rows() - 1, 0).clone()),
        ClosureRep::Sandwich { b, a, c } => {
            let inv = invert_image(f, a)?;
            let out = b.map_hom(f)?.mat_mul(&inv)?.mat_mul(&c.map_hom(f)?)?;
            Ok(out.entry(0, 0).clone())
        }
        ClosureRep::System(sys) => Ok(sys.value().clone()),
    }
}

/// The degree a representation assigns to its element.
pub fn rep_degree(rep: &ClosureRep) -> Result<GroupElem, LocError> {
    match rep {
        ClosureRep::Entry { a, row, col } | ClosureRep::BasedEntry { a, row, col } => {
            let grp = a.view().group().clone();
            Ok(grp.ratio(a.beta().get(*row), a.alpha().get(*col)))
        }
        ClosureRep::InverseColumn { a, row, col, .. } => {
            let grp = a.view().group().clone();
            Ok(grp.ratio(a.beta().get(*row), a.alpha().get(*col)))
        }
        ClosureRep::SolvedColumn { a, row, .. } => Ok(a.beta().get(*row).clone()),
        ClosureRep::LastEntry { a, .. } => Ok(a.beta().get(a.cols() - 1).clone()),
        ClosureRep::Sandwich { b, .. } => Ok(b.alpha().get(0).clone()),
        ClosureRep::System(sys) => Ok(sys.degree().clone()),
    }
}

/// Convert a representation to the requested form (1–7) by stepping
/// along the conversion cycle; every step is an explicit bordering,
/// translation, or solve, and Σ-memberships are re-checked as borders
/// are introduced.
pub fn representation_normalize(
    f: &Hom,
    sigma: &InvertingSet,
    rep: &ClosureRep,
    target: u8,
) -> Result<ClosureRep, LocError> {
    if !(1..=7).contains(&target) {
        return Err(malformed("requested form must be between 1 and 7"));
    }
    let mut cur = rep.clone();
    for _ in 0..12 {
        if rep_form(&cur) == target {
            return Ok(cur);
        }
        cur = rep_step(f, sigma, cur, target)?;
    }
    Err(malformed("normalization did not converge"))
}

fn rep_step(f: &Hom, sigma: &InvertingSet, cur: ClosureRep, target: u8) -> Result<ClosureRep, LocError> {
    let e = sigma.view().group().identity();
    match cur {
        ClosureRep::Entry { a, row, col } => {
            let grp = a.view().group().clone();
            let shift = grp.inverse(a.alpha().get(col))?;
            Ok(ClosureRep::BasedEntry { a: a.translate_dists(&shift)?, row, col })
        }
        ClosureRep::BasedEntry { a, row, col } => {
            if !sigma.contains(&a)? {
                return Err(LocError::NotInverting("entry matrix escaped Σ".into()));
            }
            let inv = invert_image(f, &a)?;
            let all: Vec<usize> = (0..inv.rows()).collect();
            let u = inv.submatrix(&all, &[col])?;
            Ok(ClosureRep::InverseColumn { a, u, row, col })
        }
        ClosureRep::InverseColumn { a, u, row, col } => {
            let rhs = unit_col(a.view(), a.alpha(), col)?;
            Ok(ClosureRep::SolvedColumn { a, rhs, u, row })
        }
        ClosureRep::SolvedColumn { a, rhs, u, row } => {
            let n = a.rows();
            if row == n - 1 {
                return Ok(ClosureRep::LastEntry { a, rhs, u });
            }
            // border so the element lands at the last position
            let view = a.view().clone();
            let beta_j = a.beta().get(row).clone();
            let neg_ej = unit_row(&view, &beta_j, a.beta(), row)?.neg();
            let corner = HMatrix::identity(view.clone(), DegSeq::new(vec![beta_j.clone()]));
            let a5 = vstack(
                &hstack(&a, &HMatrix::zero(view.clone(), a.alpha().clone(), DegSeq::new(vec![beta_j.clone()])))?,
                &hstack(&neg_ej, &corner)?,
            )?;
            if !sigma.contains(&a5)? {
                return Err(LocError::NotInverting("bordered matrix escaped Σ".into()));
            }
            let rhs5 = vstack(
                &rhs,
                &HMatrix::zero(view, DegSeq::new(vec![beta_j]), rhs.beta().clone()),
            )?;
            let x = u.entry(row, 0).clone();
            let tv = u.view().clone();
            let x_mat = scalar_mat(&tv, u.alpha().get(row), x)?;
            let u5 = vstack(&u, &x_mat)?;
            Ok(ClosureRep::LastEntry { a: a5, rhs: rhs5, u: u5 })
        }
        ClosureRep::LastEntry { a, rhs, u } => {
            if target == 7 {
                return Ok(ClosureRep::System(solved_to_system(&SolvedForm { a, rhs, u })?));
            }
            let gamma = a.beta().get(a.cols() - 1).clone();
            let b = unit_row(a.view(), &gamma, a.beta(), a.cols() - 1)?;
            Ok(ClosureRep::Sandwich { b, a, c: rhs })
        }
        ClosureRep::Sandwich { b, a, c } => {
            // (1 0 0; c A 0; 0 b 1) with x at the (n+1, 0) inverse entry
            let view = a.view().clone();
            let gamma = b.alpha().get(0).clone();
            let one_e = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1));
            let one_g = HMatrix::identity(view.clone(), DegSeq::new(vec![gamma.clone()]));
            let row0 = hstack3(
                &one_e,
                &HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), a.beta().clone()),
                &HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::new(vec![gamma.clone()])),
            )?;
            let rowmid = hstack3(
                &c,
                &a,
                &HMatrix::zero(view.clone(), a.alpha().clone(), DegSeq::new(vec![gamma.clone()])),
            )?;
            let rowlast = hstack3(
                &HMatrix::zero(view.clone(), DegSeq::new(vec![gamma.clone()]), DegSeq::uniform(e.clone(), 1)),
                &b,
                &one_g,
            )?;
            let m = vstack(&vstack(&row0, &rowmid)?, &rowlast)?;
            if !sigma.contains(&m)? {
                return Err(LocError::NotInverting("embedded 3-block matrix escaped Σ".into()));
            }
            Ok(ClosureRep::Entry { row: m.rows() - 1, col: 0, a: m })
        }
        ClosureRep::System(sys) => {
            let d = system_to_solved(&sys)?;
            Ok(ClosureRep::LastEntry { a: d.a, rhs: d.rhs, u: d.u })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{exf, q2, qp, ql, Atom, GradedRing};
    use crate::scalar::{Field, Scalar};

    fn zd(n: i64) -> GroupElem {
        GroupElem::V(vec![n])
    }

    fn q2_view() -> RingView {
        RingView::plain(q2())
    }

    fn qp_view() -> RingView {
        RingView::plain(qp())
    }

    fn exf_view() -> RingView {
        RingView::plain(exf())
    }

    fn x_elem() -> GradedElement {
        q2().monomial(Atom::Deg(GroupElem::T(1)), Scalar::one(Field::Q)).unwrap()
    }

    fn t_pow(r: &std::sync::Arc<GradedRing>, n: i64) -> GradedElement {
        r.monomial(Atom::Deg(zd(n)), Scalar::one(Field::Q)).unwrap()
    }

    fn exf_side(side: u8, deg: usize) -> GradedElement {
        exf()
            .monomial(Atom::Side(side, Box::new(Atom::Deg(GroupElem::T(deg)))), Scalar::one(Field::Q))
            .unwrap()
    }

    fn sigma_q2() -> InvertingSet {
        InvertingSet::from_kernel(q2_view(), PrimeMatrixIdeal::singular_kernel(Hom::identity(q2())))
    }

    fn sigma_qp() -> InvertingSet {
        InvertingSet::from_kernel(
            qp_view(),
            PrimeMatrixIdeal::singular_kernel(Hom::include(qp(), ql()).unwrap()),
        )
    }

    fn sigma_exf_left() -> InvertingSet {
        InvertingSet::from_kernel(
            exf_view(),
            PrimeMatrixIdeal::singular_kernel(Hom::proj_left(exf()).unwrap()),
        )
    }

    /// Kernel certificate for r = (0, u) over the direct product with Σ
    /// the matrices whose kept component is invertible: the discarded
    /// idempotent s satisfies r·s = 0 and diag(1,s) ∈ Σ absorbs it.
    fn component_cert(keep_left: bool, unit_deg: usize) -> MalcolmsonCert {
        let view = exf_view();
        let e = view.group().identity();
        let (dead, live) = if keep_left { (1, 0) } else { (0, 1) };
        let r = exf_side(dead, unit_deg);
        let s = exf_side(live, 0);
        let gamma = view.hom_degree(&r);
        let gamma = match gamma {
            crate::ring::HomDeg::Of(d) => d,
            _ => e.clone(),
        };
        let one1 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1));
        let s_mat = HMatrix::new(
            view.clone(),
            DegSeq::uniform(e.clone(), 1),
            DegSeq::uniform(e.clone(), 1),
            vec![s.clone()],
        )
        .unwrap();
        let pq = one1.diag_sum(&s_mat).unwrap();
        let u = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![gamma.clone()]),
            DegSeq::uniform(e.clone(), 2),
            vec![view.ring().zero(), r.clone()],
        )
        .unwrap();
        let v = HMatrix::new(
            view.clone(),
            DegSeq::uniform(e.clone(), 2),
            DegSeq::uniform(e.clone(), 1),
            vec![view.ring().zero(), exf_side(dead, 0)],
        )
        .unwrap();
        MalcolmsonCert {
            r,
            gamma: gamma.clone(),
            l: one1,
            m: s_mat,
            w: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 1)),
            j: HMatrix::zero(view.clone(), DegSeq::new(vec![gamma]), DegSeq::uniform(e, 1)),
            p: pq.clone(),
            u,
            q: pq,
            v,
        }
    }

    #[test]
    fn canonical_image_tuples_square_to_the_group_identity() {
        let view = q2_view();
        let sigma = sigma_q2();
        let phi = Hom::identity(q2());
        let x = x_elem();
        let mu_x = tuple_mu(&view, &x, &GroupElem::T(1)).unwrap();
        let sq = tuple_mul(&sigma, &mu_x, &mu_x).unwrap();
        assert_eq!(sq.degree(), &GroupElem::T(0));
        assert_eq!(tuple_eval(&phi, &sq).unwrap(), q2().one());
        assert_eq!(tuple_eval(&phi, &mu_x).unwrap(), x);
    }

    #[test]
    fn one_by_one_tuple_inverts_the_laurent_generator() {
        let view = qp_view();
        let inc = Hom::include(qp(), ql()).unwrap();
        let f = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(-1)]),
            DegSeq::new(vec![zd(-1)]),
            vec![qp().one()],
        )
        .unwrap();
        let a = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(-1)]),
            vec![t_pow(&qp(), 1)],
        )
        .unwrap();
        let x = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0)]),
            vec![qp().one()],
        )
        .unwrap();
        let t = LocTuple::new(f, a, x).unwrap();
        assert_eq!(t.degree(), &zd(-1));
        assert_eq!(tuple_eval(&inc, &t).unwrap(), t_pow(&ql(), -1));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism_on_sampled_tuples() {
        let view = qp_view();
        let sigma = sigma_qp();
        let inc = Hom::include(qp(), ql()).unwrap();
        let lq = ql();
        let mut s = Sampler::new(41);
        let mut checked = 0;
        for round in 0..60 {
            let n = 1 + s.usize(2);
            let Some(a) = sigma.sample_member(&mut s, n) else { continue };
            let Some(b) = sigma.sample_member(&mut s, n) else { continue };
            let grp = view.group().clone();
            let gamma = s.degree(&grp);
            let f_row = s.hmatrix_with(&view, DegSeq::new(vec![gamma.clone()]), a.beta().clone());
            let e = grp.identity();
            let x_col = s.hmatrix_with(&view, a.alpha().clone(), DegSeq::new(vec![e.clone()]));
            let g_row = s.hmatrix_with(&view, DegSeq::new(vec![gamma.clone()]), b.beta().clone());
            let y_col = s.hmatrix_with(&view, b.alpha().clone(), DegSeq::new(vec![e]));
            let tu = LocTuple::new(f_row, a, x_col).unwrap();
            let tv = LocTuple::new(g_row, b, y_col).unwrap();
            let eu = tuple_eval(&inc, &tu).unwrap();
            let ev = tuple_eval(&inc, &tv).unwrap();

            let sum = tuple_add(&sigma, &tu, &tv).unwrap();
            assert_eq!(tuple_eval(&inc, &sum).unwrap(), lq.add(&eu, &ev), "sum law, round {round}");
            let prod = tuple_mul(&sigma, &tu, &tv).unwrap();
            assert_eq!(tuple_eval(&inc, &prod).unwrap(), lq.mul(&eu, &ev), "product law, round {round}");
            assert_eq!(tuple_eval(&inc, &tuple_neg(&tu)).unwrap(), lq.neg(&eu), "negation law");

            let r = s.element_of_degree(&view, &zd(1));
            let mu = tuple_mu(&view, &r, &zd(1)).unwrap();
            assert_eq!(tuple_eval(&inc, &mu).unwrap(), inc.apply(&r), "image law");
            checked += 1;
        }
        assert!(checked >= 30, "only {checked} tuple rounds materialized");
    }

    #[test]
    fn mu_images_respect_the_unit_and_zero_laws() {
        let view = q2_view();
        let sigma = sigma_q2();
        let phi = Hom::identity(q2());
        let x = x_elem();
        let t = tuple_mu(&view, &x, &GroupElem::T(1)).unwrap();
        // t + 0 and t·1 keep the value; t + (−t) kills it
        let zero_t = tuple_mu(&view, &q2().zero(), &GroupElem::T(1)).unwrap();
        let with_zero = tuple_add(&sigma, &t, &zero_t).unwrap();
        assert_eq!(tuple_eval(&phi, &with_zero).unwrap(), x);
        let one_t = tuple_mu(&view, &q2().one(), &GroupElem::T(0)).unwrap();
        let with_one = tuple_mul(&sigma, &t, &one_t).unwrap();
        assert_eq!(tuple_eval(&phi, &with_one).unwrap(), x);
        let cancel = tuple_add(&sigma, &t, &tuple_neg(&t)).unwrap();
        assert!(tuple_eval(&phi, &cancel).unwrap().is_zero());
        // mixed elements are not homogeneous images
        let mixed = q2().add(&q2().one(), &x);
        assert!(matches!(tuple_mu(&view, &mixed, &GroupElem::T(1)), Err(LocError::Malformed(_))));
    }

    #[test]
    fn inverse_tuples_evaluate_to_the_inverse_matrix() {
        let view = q2_view();
        let sigma = sigma_q2();
        let phi = Hom::identity(q2());
        let x = x_elem();
        let e = GroupElem::T(0);
        let xb = GroupElem::T(1);
        let dist = DegSeq::new(vec![e.clone(), xb.clone()]);
        let a = HMatrix::new(
            view.clone(),
            dist.clone(),
            dist,
            vec![q2().one(), x.clone(), x.clone(), q2().neg(&q2().one())],
        )
        .unwrap();
        let inv = gdlin::invert(&a.map_hom(&phi).unwrap()).unwrap();
        // hand value: the (0,0) entry is 1/2
        let half = q2().monomial(Atom::Deg(e.clone()), Scalar::from_ratio(1, 2)).unwrap();
        assert_eq!(inv.entry(0, 0), &half);

        let grid = inverse_tuple_matrix(&sigma, &a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(&tuple_eval(&phi, &grid[i][j]).unwrap(), inv.entry(i, j), "entry ({i},{j})");
            }
        }
        let entries = rational_closure_entries(&phi, &sigma, &a).unwrap();
        let want_deg = [[e.clone(), xb.clone()], [xb, e]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(&entries[i][j].0, inv.entry(i, j));
                assert_eq!(entries[i][j].1, want_deg[i][j]);
            }
        }
    }

    #[test]
    fn zero_certificate_verifies_and_unit_variant_fails() {
        let sigma = sigma_q2();
        let cert = trivial_kernel_cert(&q2_view());
        assert_eq!(malcolmson_verify(&sigma, &cert).unwrap(), true);
        let unit = MalcolmsonCert { r: q2().one(), ..cert };
        assert_eq!(malcolmson_verify(&sigma, &unit).unwrap(), false);
    }

    #[test]
    fn component_killers_certify_kernel_membership() {
        let sigma = sigma_exf_left();
        let pi = Hom::proj_left(exf()).unwrap();
        for cert in [component_cert(true, 0), component_cert(true, 1), kernel_cert_negate(&component_cert(true, 0))] {
            assert_eq!(malcolmson_verify(&sigma, &cert).unwrap(), true);
            assert!(pi.apply(&cert.r).is_zero(), "certified element must die in the target");
        }
        let sigma_r = InvertingSet::from_kernel(
            exf_view(),
            PrimeMatrixIdeal::singular_kernel(Hom::proj_right(exf()).unwrap()),
        );
        let mirror = component_cert(false, 1);
        assert_eq!(malcolmson_verify(&sigma_r, &mirror).unwrap(), true);
        assert!(Hom::proj_right(exf()).unwrap().apply(&mirror.r).is_zero());
    }

    #[test]
    fn homogeneous_perturbations_invalidate_certificates() {
        let sigma = sigma_exf_left();
        let view = exf_view();
        let grp = view.group().clone();
        let cert = component_cert(true, 0);
        let mut s = Sampler::new(7);
        let mut rejected = 0;
        let mut tried = 0;
        while tried < 100 {
            let mut c = cert.clone();
            let which = s.usize(8);
            let target: &mut HMatrix = match which {
                0 => &mut c.l,
                1 => &mut c.m,
                2 => &mut c.w,
                3 => &mut c.j,
                4 => &mut c.p,
                5 => &mut c.u,
                6 => &mut c.q,
                _ => &mut c.v,
            };
            let i = s.usize(target.rows());
            let j = s.usize(target.cols());
            let want = grp.ratio(target.alpha().get(i), target.beta().get(j));
            let delta = s.element_of_degree(&view, &want);
            if delta.is_zero() {
                continue;
            }
            tried += 1;
            let bumped = view.ring().add(target.entry(i, j), &delta);
            *target = target.with_entry(i, j, bumped).unwrap();
            match malcolmson_verify(&sigma, &c) {
                Ok(false) => rejected += 1,
                Ok(true) => panic!("perturbed certificate slipped through (block {which})"),
                Err(err) => panic!("perturbation should stay well-formed: {err}"),
            }
        }
        assert_eq!(rejected, 100);
    }

    #[test]
    fn sigma_failures_and_malformed_shapes_separate() {
        let view = q2_view();
        let sigma = sigma_q2();
        let e = view.group().identity();
        // identity holds with a singular L: rejected at the Σ check
        let zero1 = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 1));
        let one1 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1));
        let p = zero1.diag_sum(&one1).unwrap();
        let cert = MalcolmsonCert {
            r: q2().zero(),
            gamma: e.clone(),
            l: zero1.clone(),
            m: one1.clone(),
            w: zero1.clone(),
            j: zero1.clone(),
            p: p.clone(),
            u: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 2)),
            q: HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 2)),
            v: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 2), DegSeq::uniform(e.clone(), 1)),
        };
        assert_eq!(malcolmson_verify(&sigma, &cert).unwrap(), false);
        // wrong W shape is malformed, not false
        let bad = MalcolmsonCert {
            w: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 2), DegSeq::uniform(e.clone(), 1)),
            ..trivial_kernel_cert(&view)
        };
        assert!(matches!(malcolmson_verify(&sigma, &bad), Err(LocError::Malformed(_))));
    }

    #[test]
    fn kernel_and_equivalence_certificates_roundtrip() {
        let sigma = sigma_exf_left();
        for cert in [component_cert(true, 0), component_cert(true, 1), trivial_kernel_cert(&exf_view())] {
            let eq = kernel_cert_to_equivalence(&cert).unwrap();
            assert_eq!(tuple_equiv_verify(&sigma, &eq).unwrap(), true, "expansion verifies");
            assert!(eq.first.f().entry(0, 0).is_zero());
            assert_eq!(eq.second.f().entry(0, 0), &cert.r);

            let swapped = equivalence_swap(&sigma, &eq).unwrap();
            assert_eq!(tuple_equiv_verify(&sigma, &swapped).unwrap(), true, "swap verifies");

            let back = equivalence_to_kernel_cert(&swapped).unwrap();
            assert_eq!(back.r, cert.r);
            assert_eq!(back.gamma, cert.gamma);
            assert_eq!(malcolmson_verify(&sigma, &back).unwrap(), true, "contraction verifies");
        }
    }

    #[test]
    fn inverting_sets_close_identities_and_triangles() {
        let view = qp_view();
        let e = view.group().identity();
        let t_mat = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(1)]),
            DegSeq::new(vec![zd(0)]),
            vec![t_pow(&qp(), 1)],
        )
        .unwrap();
        let sigma = InvertingSet::explicit(view.clone(), vec![t_mat.clone()], false).unwrap();
        assert!(sigma.contains(&HMatrix::identity(view.clone(), DegSeq::new(vec![zd(3)]))).unwrap());
        let tri = t_mat.diag_sum(&HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1))).unwrap();
        assert!(sigma.contains(&tri).unwrap());
        let zero1 = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 1));
        assert!(!sigma.contains(&zero1).unwrap());
        assert!(sigma.verify_lower_semimult(5, 40).unwrap().passed());

        // permuted placement needs the multiplicative flag
        let placed = t_mat
            .diag_sum(&HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1)))
            .unwrap();
        let swapped = placed.permute(&[1, 0], &[0, 1]).unwrap();
        assert!(!sigma.contains(&swapped).unwrap());
        let sigma_m = InvertingSet::explicit(view.clone(), vec![t_mat], true).unwrap();
        assert!(sigma_m.contains(&swapped).unwrap());

        let kernel_sigma = sigma_qp();
        assert!(kernel_sigma.verify_lower_semimult(11, 60).unwrap().passed());
        assert!(!kernel_sigma.contains(&zero1).unwrap());
    }

    #[test]
    fn cramer_split_flags_invertibility() {
        let view = qp_view();
        let sigma = sigma_qp();
        let inc = Hom::include(qp(), ql()).unwrap();
        // x = t⁻¹: system (−1 t)·(1; t⁻¹) = 0
        let a = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0), zd(-1)]),
            vec![qp().neg(&qp().one()), t_pow(&qp(), 1)],
        )
        .unwrap();
        let tv = RingView::plain(ql());
        let u = HMatrix::new(
            tv.clone(),
            DegSeq::new(vec![zd(0), zd(-1)]),
            DegSeq::new(vec![zd(0)]),
            vec![ql().one(), t_pow(&ql(), -1)],
        )
        .unwrap();
        let split = cramer_split(&inc, &sigma, &a, &u).unwrap();
        assert_eq!(split.value, t_pow(&ql(), -1));
        assert_eq!(split.degree, zd(-1));
        assert!(split.numerator_invertible && split.value_invertible);
        assert!(split.zero_witness.is_none());

        // trivial x = 1 via (−1 1)
        let a1 = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0), zd(0)]),
            vec![qp().neg(&qp().one()), qp().one()],
        )
        .unwrap();
        let u1 = HMatrix::new(
            tv.clone(),
            DegSeq::new(vec![zd(0), zd(0)]),
            DegSeq::new(vec![zd(0)]),
            vec![ql().one(), ql().one()],
        )
        .unwrap();
        let split1 = cramer_split(&inc, &sigma, &a1, &u1).unwrap();
        assert_eq!(split1.value, ql().one());
        assert!(split1.numerator_invertible);

        // x = 0: numerator is not full and the witness proves it
        let a0 = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(0), zd(1)]),
            DegSeq::new(vec![zd(0), zd(-1), zd(0)]),
            vec![
                qp().neg(&qp().one()),
                t_pow(&qp(), 1),
                qp().zero(),
                qp().zero(),
                qp().zero(),
                t_pow(&qp(), 1),
            ],
        )
        .unwrap();
        let u0 = HMatrix::new(
            tv,
            DegSeq::new(vec![zd(0), zd(-1), zd(0)]),
            DegSeq::new(vec![zd(0)]),
            vec![ql().one(), t_pow(&ql(), -1), ql().zero()],
        )
        .unwrap();
        let split0 = cramer_split(&inc, &sigma, &a0, &u0).unwrap();
        assert!(split0.value.is_zero());
        assert!(!split0.numerator_invertible && !split0.value_invertible);
        assert!(split0.zero_witness.is_some());
    }

    #[test]
    fn closure_sums_and_products_track_values() {
        let view = qp_view();
        let sigma = sigma_qp();
        let inc = Hom::include(qp(), ql()).unwrap();
        let tv = RingView::plain(ql());
        let sys = |p: i64| -> ClosureSystem {
            // (−1 t^p)·(1; t⁻ᵖ) = 0 realizes t⁻ᵖ at degree −p
            let a = HMatrix::new(
                view.clone(),
                DegSeq::new(vec![zd(0)]),
                DegSeq::new(vec![zd(0), zd(-p)]),
                vec![qp().neg(&qp().one()), t_pow(&qp(), p)],
            )
            .unwrap();
            let u = HMatrix::new(
                tv.clone(),
                DegSeq::new(vec![zd(0), zd(-p)]),
                DegSeq::new(vec![zd(0)]),
                vec![ql().one(), t_pow(&ql(), -p)],
            )
            .unwrap();
            ClosureSystem::new(a, u).unwrap()
        };
        let s1 = sys(1);
        let sum = closure_sum(&inc, &sigma, &s1, &s1).unwrap();
        let two_t_inv = ql().scale(&Scalar::from_i64(Field::Q, 2), &t_pow(&ql(), -1));
        assert_eq!(sum.value(), &two_t_inv);
        assert_eq!(sum.degree(), &zd(-1));

        let s2 = sys(2);
        let prod = closure_mul(&inc, &sigma, &s1, &s2).unwrap();
        assert_eq!(prod.value(), &t_pow(&ql(), -3));
        assert_eq!(prod.degree(), &zd(-3));
    }

    #[test]
    fn inverse_witnesses_flip_the_degree() {
        let view = qp_view();
        let sigma = sigma_qp();
        let inc = Hom::include(qp(), ql()).unwrap();
        let tv = RingView::plain(ql());
        let a = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0), zd(-1)]),
            vec![qp().neg(&qp().one()), t_pow(&qp(), 1)],
        )
        .unwrap();
        let u = HMatrix::new(
            tv,
            DegSeq::new(vec![zd(0), zd(-1)]),
            DegSeq::new(vec![zd(0)]),
            vec![ql().one(), t_pow(&ql(), -1)],
        )
        .unwrap();
        let sys = ClosureSystem::new(a, u).unwrap();
        let inv_tuple = closure_inverse_witness(&inc, &sigma, &sys).unwrap();
        assert_eq!(inv_tuple.degree(), &zd(1));
        assert_eq!(tuple_eval(&inc, &inv_tuple).unwrap(), t_pow(&ql(), 1));
        // the forward system itself converts to a tuple evaluating to x
        let direct = system_to_tuple(&sigma, &sys).unwrap();
        assert_eq!(tuple_eval(&inc, &direct).unwrap(), t_pow(&ql(), -1));
    }

    #[test]
    fn common_denominators_share_entries() {
        let view = qp_view();
        let sigma = sigma_qp();
        let inc = Hom::include(qp(), ql()).unwrap();
        let tv = RingView::plain(ql());
        let mk = |p: i64| -> ClosureSystem {
            let a = HMatrix::new(
                view.clone(),
                DegSeq::new(vec![zd(0)]),
                DegSeq::new(vec![zd(0), zd(-p)]),
                vec![qp().neg(&qp().one()), t_pow(&qp(), p)],
            )
            .unwrap();
            let u = HMatrix::new(
                tv.clone(),
                DegSeq::new(vec![zd(0), zd(-p)]),
                DegSeq::new(vec![zd(0)]),
                vec![ql().one(), t_pow(&ql(), -p)],
            )
            .unwrap();
            ClosureSystem::new(a, u).unwrap()
        };
        let (o1, o2) = common_denominator(&inc, &sigma, &mk(1), &mk(2)).unwrap();
        assert_eq!(o1.value(), &t_pow(&ql(), -1));
        assert_eq!(o2.value(), &t_pow(&ql(), -2));
        assert_eq!(o1.a().rows(), 2);
        assert_eq!(o1.a().cols(), 3);
        // same denominator entries; distributions differ by γ⁻¹δ
        let d1 = o1.denominator().unwrap();
        let d2 = o2.denominator().unwrap();
        let shift = view.group().compose(&zd(1), &zd(-2)).unwrap();
        assert_eq!(d2, d1.translate_dists(&shift).unwrap());
    }

    #[test]
    fn representation_forms_cycle_preserving_value() {
        let view = qp_view();
        let sigma = sigma_qp();
        let inc = Hom::include(qp(), ql()).unwrap();
        let a = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(1)]),
            DegSeq::new(vec![zd(0)]),
            vec![t_pow(&qp(), 1)],
        )
        .unwrap();
        let start = ClosureRep::Entry { a, row: 0, col: 0 };
        let want = t_pow(&ql(), -1);
        assert_eq!(rep_value(&inc, &start).unwrap(), want);
        assert_eq!(rep_degree(&start).unwrap(), zd(-1));
        for form in 1..=7u8 {
            let rep = representation_normalize(&inc, &sigma, &start, form).unwrap();
            assert_eq!(rep_form(&rep), form, "requested form {form}");
            assert_eq!(rep_value(&inc, &rep).unwrap(), want, "value at form {form}");
            assert_eq!(rep_degree(&rep).unwrap(), zd(-1), "degree at form {form}");
        }
        // and a full lap back to the entry form
        let lap = representation_normalize(&inc, &sigma, &start, 6).unwrap();
        let back = representation_normalize(&inc, &sigma, &lap, 1).unwrap();
        assert_eq!(rep_value(&inc, &back).unwrap(), want);

        // bordering path: a 2×2 entry away from the last row
        let sigma2 = sigma_q2();
        let phi = Hom::identity(q2());
        let x = x_elem();
        let dist = DegSeq::new(vec![GroupElem::T(0), GroupElem::T(1)]);
        let a2 = HMatrix::new(
            q2_view(),
            dist.clone(),
            dist,
            vec![q2().one(), x.clone(), x, q2().neg(&q2().one())],
        )
        .unwrap();
        let start2 = ClosureRep::Entry { a: a2, row: 0, col: 0 };
        let half = q2().monomial(Atom::Deg(GroupElem::T(0)), Scalar::from_ratio(1, 2)).unwrap();
        assert_eq!(rep_value(&phi, &start2).unwrap(), half);
        for form in [5u8, 7, 6, 1] {
            let rep = representation_normalize(&phi, &sigma2, &start2, form).unwrap();
            assert_eq!(rep_form(&rep), form);
            assert_eq!(rep_value(&phi, &rep).unwrap(), half, "2×2 value at form {form}");
            assert_eq!(rep_degree(&rep).unwrap(), GroupElem::T(0));
        }
    }

    #[test]
    fn nonzero_reports_search_and_contradiction() {
        let sigma = sigma_q2();
        let report = nonzero_localization_check(&sigma, 23, 60, None).unwrap();
        assert!(report.found_unit_cert.is_none(), "no unit certificate over a graded field");
        assert!(report.members_checked > 0);
        assert!(report.all_members_full);

        // degenerate Σ generated by the zero 1×1: the localization dies
        let view = q2_view();
        let e = view.group().identity();
        let zero1 = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 1));
        let one1 = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), 1));
        let degenerate = InvertingSet::explicit(view.clone(), vec![zero1.clone()], false).unwrap();
        let unit_cert = MalcolmsonCert {
            r: q2().one(),
            gamma: e.clone(),
            l: one1.clone(),
            m: zero1.clone(),
            w: zero1.clone(),
            j: zero1.clone(),
            p: one1.diag_sum(&zero1).unwrap(),
            u: HMatrix::new(
                view.clone(),
                DegSeq::uniform(e.clone(), 1),
                DegSeq::uniform(e.clone(), 2),
                vec![q2().zero(), q2().one()],
            )
            .unwrap(),
            q: one1.diag_sum(&zero1).unwrap(),
            v: HMatrix::new(
                view.clone(),
                DegSeq::uniform(e.clone(), 2),
                DegSeq::uniform(e, 1),
                vec![q2().zero(), q2().one()],
            )
            .unwrap(),
        };
        let report = nonzero_localization_check(&degenerate, 3, 20, Some(&unit_cert)).unwrap();
        assert!(!report.all_members_full, "the zero member is visibly hollow");
        match report.supplied.unwrap() {
            UnitCertOutcome::Contradiction { matrix, witness } => {
                assert!(hmat::verify_nonfull(&matrix, &witness).is_ok());
                assert!(matrix.rows() > witness.interface());
            }
            other => panic!("expected the contradiction path, got {other:?}"),
        }

        // a tampered unit certificate is rejected with coordinates
        let mut broken = unit_cert;
        broken.v = broken.v.with_entry(0, 0, q2().one()).unwrap();
        let report = nonzero_localization_check(&degenerate, 3, 5, Some(&broken)).unwrap();
        match report.supplied.unwrap() {
            UnitCertOutcome::Rejected { reason } => {
                assert!(reason.contains("block identity fails"), "got: {reason}");
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn oversized_blocks_trip_the_budget() {
        let view = q2_view();
        let e = view.group().identity();
        let n = TUPLE_SIZE_CAP + 1;
        let a = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), n));
        let f = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), n));
        let x = HMatrix::zero(view, DegSeq::uniform(e.clone(), n), DegSeq::uniform(e, 1));
        assert!(matches!(LocTuple::new(f, a, x), Err(LocError::Budget(_))));
    }
}
