//! Rank functions on homogeneous matrices, modules, and free-module
//! maps, together with prime matrix ideals and the verification
//! harnesses that check the axiom systems on seeded samples.
//!
//! A matrix rank function valued in ℕ is subject to four axioms:
//! normalization on the 1×1 identity, sub-multiplicativity on products,
//! additivity on diagonal sums, and super-additivity on block
//! triangular sums. Prime matrix ideals are sets of square matrices
//! subject to six axioms. Either object induces the other, and both
//! induce rank functions on finitely presented modules (via
//! presentation matrices) and on maps of graded free modules; all the
//! translations are implemented as genuine computations so the round
//! trips can be tested rather than simplified away.

use crate::gdlin::{self, GdlinError};
use crate::grp::DegSeq;
use crate::hmat::{id_perm, HMatrix, MatError};
use crate::ring::{Hom, RingError, RingView};
use crate::sample::Sampler;
use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankError {
    #[error("prime matrix ideal membership needs a square matrix")]
    NotSquare,
    #[error("the hom target is not a graded division ring")]
    TargetNotDivision,
    #[error("rank exceeded the generator count while deriving a module rank")]
    NegativeModuleRank,
    #[error(transparent)]
    Gdlin(#[from] GdlinError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// ℕ-valued rank on homogeneous matrices.
#[derive(Clone, Debug)]
pub enum MatrixRankFn {
    /// rank(A) = rank of the entrywise image under a hom into a graded
    /// division ring.
    Induced { hom: Hom },
    /// rank(A) = size of the largest square submatrix outside the ideal.
    FromPmi { pmi: Box<PrimeMatrixIdeal> },
    /// rank(A) = generators − module rank of the cokernel.
    FromModule { di: Box<ModuleRankFn> },
    /// rank(A) = map rank of A read as a free-module map.
    FromMap { rho: Box<MapRankFn> },
    /// Base rank with finitely many explicit overrides (used to study
    /// how the harnesses catch axiom violations).
    Table { base: Box<MatrixRankFn>, overrides: Vec<(HMatrix, usize)> },
    /// rank(A) = inner rank of A regraded along a quotient; the inner
    /// rank acts on the coarser grading.
    Regraded { inner: Box<MatrixRankFn>, quot: std::sync::Arc<crate::grp::Quotient> },
}

impl MatrixRankFn {
    pub fn induced(hom: Hom) -> Result<MatrixRankFn, RankError> {
        if !hom.target().is_graded_division() {
            return Err(RankError::TargetNotDivision);
        }
        Ok(MatrixRankFn::Induced { hom })
    }

    pub fn from_pmi(pmi: PrimeMatrixIdeal) -> MatrixRankFn {
        MatrixRankFn::FromPmi { pmi: Box::new(pmi) }
    }

    pub fn with_override(self, target: HMatrix, value: usize) -> MatrixRankFn {
        match self {
            MatrixRankFn::Table { base, mut overrides } => {
                overrides.push((target, value));
                MatrixRankFn::Table { base, overrides }
            }
            other => MatrixRankFn::Table { base: Box::new(other), overrides: vec![(target, value)] },
        }
    }

    pub fn rank(&self, a: &HMatrix) -> Result<usize, RankError> {
        match self {
            MatrixRankFn::Induced { hom } => Ok(gdlin::drank(&a.map_hom(hom)?)?),
            MatrixRankFn::FromPmi { pmi } => {
                let max = a.rows().min(a.cols());
                for k in (1..=max).rev() {
                    for rows in (0..a.rows()).combinations(k) {
                        for cols in (0..a.cols()).combinations(k) {
                            let sub = a.submatrix(&rows, &cols)?;
                            if !pmi.contains(&sub)? {
                                return Ok(k);
                            }
                        }
                    }
                }
                Ok(0)
            }
            MatrixRankFn::FromModule { di } => {
                let m = a.rows();
                let d = di.di(&GradedModule::from_presentation(a.clone()))?;
                m.checked_sub(d).ok_or(RankError::NegativeModuleRank)
            }
            MatrixRankFn::FromMap { rho } => rho.rho(a),
            MatrixRankFn::Table { base, overrides } => {
                for (t, v) in overrides {
                    if t == a {
                        return Ok(*v);
                    }
                }
                base.rank(a)
            }
            MatrixRankFn::Regraded { inner, quot } => {
                inner.rank(&crate::regrade::regrade_matrix(a, quot.clone())?)
            }
        }
    }
}

/// Set of square homogeneous matrices playing the role of a prime ideal.
#[derive(Clone, Debug)]
pub enum PrimeMatrixIdeal {
    /// A ∈ 𝒫 iff the entrywise image of A is singular. The target must
    /// be a graded division ring, or an ungraded division-ring image of
    /// one (a graded division ring composed with any hom into a nonzero
    /// ring inverts exactly the same matrices, so the membership test is
    /// unchanged).
    SingularKernel { hom: Hom },
    /// A ∈ 𝒫 iff rank(A) < size(A).
    FromRank { rank: Box<MatrixRankFn> },
    /// A ∈ 𝒫 iff the Leibniz determinant of A vanishes. Restricted to
    /// commutative integral domains, where vanishing determinant is the
    /// same as singularity over the field of fractions; this gives an
    /// elimination-free oracle to compare the division-closure routes
    /// against.
    DetZero,
    /// Membership tested after regrading the matrix along a quotient.
    Restricted { inner: Box<PrimeMatrixIdeal>, quot: std::sync::Arc<crate::grp::Quotient> },
}

impl PrimeMatrixIdeal {
    pub fn singular_kernel(hom: Hom) -> PrimeMatrixIdeal {
        PrimeMatrixIdeal::SingularKernel { hom }
    }

    pub fn from_rank(rank: MatrixRankFn) -> PrimeMatrixIdeal {
        PrimeMatrixIdeal::FromRank { rank: Box::new(rank) }
    }

    pub fn contains(&self, a: &HMatrix) -> Result<bool, RankError> {
        if !a.is_square() {
            return Err(RankError::NotSquare);
        }
        match self {
            PrimeMatrixIdeal::SingularKernel { hom } => {
                Ok(!gdlin::is_invertible(&a.map_hom(hom)?)?)
            }
            PrimeMatrixIdeal::FromRank { rank } => Ok(rank.rank(a)? < a.rows()),
            PrimeMatrixIdeal::DetZero => {
                if !a.view().ring().is_integral_domain() || !a.view().ring().is_commutative() {
                    return Err(RankError::Ring(RingError::Unsupported(
                        "determinant membership needs a commutative integral domain".into(),
                    )));
                }
                Ok(leibniz_det(a).is_zero())
            }
            PrimeMatrixIdeal::Restricted { inner, quot } => {
                let regraded = crate::regrade::regrade_matrix(a, quot.clone())?;
                inner.contains(&regraded)
            }
        }
    }
}

/// Σ_σ sgn(σ)·a_{0σ(0)}···a_{n−1,σ(n−1)} by direct expansion; the sample
/// sizes in play keep this cheap, and it shares no code with the
/// elimination-based ranks.
fn leibniz_det(a: &HMatrix) -> crate::ring::GradedElement {
    let ring = a.view().ring().clone();
    let n = a.rows();
    let mut total = ring.zero();
    for perm in (0..n).permutations(n) {
        let mut prod = ring.one();
        for (i, &j) in perm.iter().enumerate() {
            prod = ring.mul(&prod, a.entry(i, j));
        }
        if perm_sign(&perm) < 0 {
            prod = ring.neg(&prod);
        }
        total = ring.add(&total, &prod);
    }
    total
}

fn perm_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Finitely presented graded module, given as the cokernel of a map of
/// graded free modules: `m` generators (rows) and `n` relations
/// (columns).
#[derive(Clone, PartialEq, Debug)]
pub struct GradedModule {
    pres: HMatrix,
}

impl GradedModule {
    pub fn from_presentation(pres: HMatrix) -> GradedModule {
        GradedModule { pres }
    }

    /// Free module on the given generator degrees (no relations).
    pub fn free(view: RingView, alpha: DegSeq) -> GradedModule {
        GradedModule { pres: HMatrix::zero(view, alpha, DegSeq::new(vec![])) }
    }

    pub fn presentation(&self) -> &HMatrix {
        &self.pres
    }

    pub fn generators(&self) -> usize {
        self.pres.rows()
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule, MatError> {
        Ok(GradedModule { pres: self.pres.diag_sum(&other.pres)? })
    }
}

/// ℕ-valued rank on finitely presented graded modules.
#[derive(Clone, Debug)]
pub enum ModuleRankFn {
    /// di(coker A) = generators − rank(A).
    FromMatrix { rank: Box<MatrixRankFn> },
    /// di(coker A) = ρ(identity on the generators) − ρ(A).
    FromMap { rho: Box<MapRankFn> },
}

impl ModuleRankFn {
    pub fn from_matrix(rank: MatrixRankFn) -> ModuleRankFn {
        ModuleRankFn::FromMatrix { rank: Box::new(rank) }
    }

    pub fn from_map(rho: MapRankFn) -> ModuleRankFn {
        ModuleRankFn::FromMap { rho: Box::new(rho) }
    }

    pub fn di(&self, m: &GradedModule) -> Result<usize, RankError> {
        let a = m.presentation();
        match self {
            ModuleRankFn::FromMatrix { rank } => a
                .rows()
                .checked_sub(rank.rank(a)?)
                .ok_or(RankError::NegativeModuleRank),
            ModuleRankFn::FromMap { rho } => {
                let idq = HMatrix::identity(a.view().clone(), a.alpha().clone());
                rho.rho(&idq)?
                    .checked_sub(rho.rho(a)?)
                    .ok_or(RankError::NegativeModuleRank)
            }
        }
    }
}

/// ℕ-valued rank on maps of graded free modules (given by matrices).
#[derive(Clone, Debug)]
pub enum MapRankFn {
    FromMatrix { rank: Box<MatrixRankFn> },
    /// ρ(f: P→Q) = di(Q) − di(coker f).
    FromModule { di: Box<ModuleRankFn> },
}

impl MapRankFn {
    pub fn from_matrix(rank: MatrixRankFn) -> MapRankFn {
        MapRankFn::FromMatrix { rank: Box::new(rank) }
    }

    pub fn from_module(di: ModuleRankFn) -> MapRankFn {
        MapRankFn::FromModule { di: Box::new(di) }
    }

    pub fn rho(&self, f: &HMatrix) -> Result<usize, RankError> {
        match self {
            MapRankFn::FromMatrix { rank } => rank.rank(f),
            MapRankFn::FromModule { di } => {
                let free_q = GradedModule::free(f.view().clone(), f.alpha().clone());
                let coker = GradedModule::from_presentation(f.clone());
                di.di(&free_q)?
                    .checked_sub(di.di(&coker)?)
                    .ok_or(RankError::NegativeModuleRank)
            }
        }
    }
}

/// Outcome of an axiom-verification run: a count of executed checks and
/// the failures in evaluation order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counterexample(&self) -> Option<&str> {
        self.failures.first().map(|s| s.as_str())
    }

    pub fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(label());
        }
    }
}

/// One pre-generated bundle of operands for the matrix-rank axioms.
#[derive(Clone, Debug)]
pub struct MatrfInstance {
    /// Primary operand (m×n).
    pub a: HMatrix,
    /// Right factor compatible with `a` for products.
    pub b_mul: HMatrix,
    /// Independent square partner for ⊕ and block sums.
    pub b_sum: HMatrix,
    /// [a c; 0 b_sum] with a random compatible filler.
    pub block: HMatrix,
    /// Invertible with columns matching `a`'s rows (so p·a is defined).
    pub p: HMatrix,
    /// Invertible with rows matching `a`'s columns (so a·q is defined).
    pub q: HMatrix,
}

/// Deterministic operand stream for [`verify_matrf`]. The first
/// instance's `a` is the canonical target for corruption experiments.
pub fn matrf_samples(view: &RingView, seed: u64, count: usize) -> Vec<MatrfInstance> {
    let mut s = Sampler::new(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let m = 1 + s.usize(4);
        let n = 1 + s.usize(4);
        let k = 1 + s.usize(4);
        let a = s.hmatrix(view, m, n);
        let lambda = s.degseq(view.group(), k);
        let b_mul = s.hmatrix_with(view, a.beta().clone(), lambda);
        let nb = 1 + s.usize(3);
        let b_sum = s.hmatrix(view, nb, nb);
        let block = block_upper_random(&mut s, &a, &b_sum);
        let p = gdlin::invert(&s.invertible(view, a.alpha().clone()))
            .expect("sampled matrix is invertible");
        let q = s.invertible(view, a.beta().clone());
        out.push(MatrfInstance { a, b_mul, b_sum, block, p, q });
    }
    out
}

/// `[a c; 0 b]` with a randomly sampled top-right filler of the forced
/// degrees.
pub fn block_upper_random(s: &mut Sampler, a: &HMatrix, b: &HMatrix) -> HMatrix {
    let mut block = a.diag_sum(b).expect("same view");
    let grp = a.view().group().clone();
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let d = grp.ratio(a.alpha().get(i), b.beta().get(j));
            let e = s.element_of_degree(a.view(), &d);
            block = block
                .with_entry(i, a.cols() + j, e)
                .expect("filler degree derived from the distributions");
        }
    }
    block
}

/// `[a 0; c b]` with a randomly sampled lower-left filler.
pub fn block_lower_random(s: &mut Sampler, a: &HMatrix, b: &HMatrix) -> HMatrix {
    let mut block = a.diag_sum(b).expect("same view");
    let grp = a.view().group().clone();
    for i in 0..b.rows() {
        for j in 0..a.cols() {
            let d = grp.ratio(b.alpha().get(i), a.beta().get(j));
            let e = s.element_of_degree(a.view(), &d);
            block = block
                .with_entry(a.rows() + i, j, e)
                .expect("filler degree derived from the distributions");
        }
    }
    block
}

/// Check the four matrix-rank axioms plus the standard consequences
/// (identity/zero normalization, invariance under invertible factors,
/// bounds, and monotonicity under adding rows or columns) on every
/// instance.
pub fn verify_matrf(rank: &MatrixRankFn, instances: &[MatrfInstance]) -> VerifyReport {
    let mut rep = VerifyReport::default();
    for (idx, inst) in instances.iter().enumerate() {
        let r = match exercise_matrf(rank, inst, &mut rep, idx) {
            Ok(()) => continue,
            Err(e) => e,
        };
        rep.failures.push(format!("instance {idx}: evaluation error: {r}"));
    }
    rep
}

fn exercise_matrf(
    rank: &MatrixRankFn,
    inst: &MatrfInstance,
    rep: &mut VerifyReport,
    idx: usize,
) -> Result<(), RankError> {
    let a = &inst.a;
    let view = a.view().clone();
    let (m, n) = (a.rows(), a.cols());
    let ra = rank.rank(a)?;

    // normalization: identities and zero matrices
    let one = HMatrix::identity(view.clone(), a.alpha().select(&[0]));
    rep.check(rank.rank(&one)? == 1, || format!("instance {idx}: rank((1)) ≠ 1"));
    let idn = HMatrix::identity(view.clone(), a.alpha().clone());
    rep.check(rank.rank(&idn)? == m, || format!("instance {idx}: rank(I_{m}) ≠ {m}"));
    let z = HMatrix::zero(view.clone(), a.alpha().clone(), a.beta().clone());
    rep.check(rank.rank(&z)? == 0, || format!("instance {idx}: rank(0) ≠ 0"));
    // rank ≥ 0 holds by the ℕ-valued signature; counted, not computed
    rep.check(true, || unreachable!());

    // products
    let rb = rank.rank(&inst.b_mul)?;
    let rab = rank.rank(&a.mat_mul(&inst.b_mul)?)?;
    rep.check(rab <= ra.min(rb), || {
        format!("instance {idx}: rank(AB) = {rab} exceeds min({ra},{rb})")
    });

    // diagonal and block-triangular sums
    let rs = rank.rank(&inst.b_sum)?;
    let rsum = rank.rank(&a.diag_sum(&inst.b_sum)?)?;
    rep.check(rsum == ra + rs, || {
        format!("instance {idx}: rank(A⊕B) = {rsum} ≠ {ra} + {rs}")
    });
    let rblock = rank.rank(&inst.block)?;
    rep.check(rblock >= ra + rs, || {
        format!("instance {idx}: rank([A C; 0 B]) = {rblock} < {ra} + {rs}")
    });

    // invariance under invertible factors and their ranks
    rep.check(rank.rank(&inst.p.mat_mul(a)?)? == ra, || {
        format!("instance {idx}: rank(PA) ≠ rank(A)")
    });
    rep.check(rank.rank(&a.mat_mul(&inst.q)?)? == ra, || {
        format!("instance {idx}: rank(AQ) ≠ rank(A)")
    });
    rep.check(rank.rank(&inst.q)? == inst.q.rows(), || {
        format!("instance {idx}: invertible matrix not of full rank")
    });

    // bounds and monotonicity
    rep.check(ra <= m.min(n), || format!("instance {idx}: rank exceeds min(m,n)"));
    if m >= 2 {
        let sub = a.submatrix(&(0..m - 1).collect::<Vec<_>>(), &id_perm(n))?;
        rep.check(rank.rank(&sub)? <= ra, || {
            format!("instance {idx}: dropping a row increased the rank")
        });
    }
    let wide = stack_cols(a, a)?;
    rep.check(rank.rank(&wide)? >= ra, || {
        format!("instance {idx}: adding columns decreased the rank")
    });

    // distribution erasure: translating both distributions keeps the
    // same entry grid and must keep the rank
    let shifted = a.translate_dists(&sample_shift(&view))?;
    rep.check(rank.rank(&shifted)? == ra, || {
        format!("instance {idx}: rank changed under distribution translation")
    });
    Ok(())
}

fn sample_shift(view: &RingView) -> crate::grp::GroupElem {
    // a fixed nontrivial degree when one exists, identity otherwise
    let ball = view.group().ball(1);
    ball.into_iter()
        .find(|d| *d != view.group().identity())
        .unwrap_or_else(|| view.group().identity())
}

/// `[a | b]` horizontally (same rows).
pub fn stack_cols(a: &HMatrix, b: &HMatrix) -> Result<HMatrix, MatError> {
    if a.alpha() != b.alpha() {
        return Err(MatError::DistMismatch("horizontal stack needs equal row dists".into()));
    }
    let mut rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut row = a.row(i);
        row.extend(b.row(i));
        rows.push(row);
    }
    HMatrix::from_rows(a.view().clone(), a.alpha().clone(), a.beta().concat(b.beta()), rows)
}

/// `[a; b]` vertically (same columns).
pub fn stack_rows(a: &HMatrix, b: &HMatrix) -> Result<HMatrix, MatError> {
    if a.beta() != b.beta() {
        return Err(MatError::DistMismatch("vertical stack needs equal column dists".into()));
    }
    let mut rows = Vec::with_capacity(a.rows() + b.rows());
    for i in 0..a.rows() {
        rows.push(a.row(i));
    }
    for i in 0..b.rows() {
        rows.push(b.row(i));
    }
    HMatrix::from_rows(a.view().clone(), a.alpha().concat(b.alpha()), a.beta().clone(), rows)
}

/// Sample a member of the ideal: rejection on random squares first,
/// then a guaranteed non-full product.
pub fn sample_member(
    pmi: &PrimeMatrixIdeal,
    view: &RingView,
    s: &mut Sampler,
    n: usize,
) -> Result<HMatrix, RankError> {
    for _ in 0..16 {
        let a = s.hmatrix(view, n, n);
        if pmi.contains(&a)? {
            return Ok(a);
        }
    }
    let a = s.nonfull(view, n, n.saturating_sub(1));
    debug_assert!(pmi.contains(&a)?);
    Ok(a)
}

/// Replace column `j` of `a` with freshly sampled entries of the forced
/// degrees.
pub fn resample_col(a: &HMatrix, j: usize, s: &mut Sampler) -> Result<HMatrix, RankError> {
    let grp = a.view().group().clone();
    let mut out = a.clone();
    for i in 0..a.rows() {
        let d = grp.ratio(a.alpha().get(i), a.beta().get(j));
        out = out.with_entry(i, j, s.element_of_degree(a.view(), &d))?;
    }
    Ok(out)
}

/// Check the six prime-matrix-ideal axioms plus selected consequences
/// — determinantal sums against non-full or member partners, block
/// triangular reductions, multiplicativity of the complement, and the
/// product/diagonal-sum equivalence — on `count` seeded instances.
pub fn verify_pm(pmi: &PrimeMatrixIdeal, view: &RingView, seed: u64, count: usize) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let mut s = Sampler::new(seed);
    for idx in 0..count {
        if let Err(e) = exercise_pm(pmi, view, &mut s, &mut rep, idx) {
            rep.failures.push(format!("instance {idx}: evaluation error: {e}"));
        }
    }
    rep
}

fn exercise_pm(
    pmi: &PrimeMatrixIdeal,
    view: &RingView,
    s: &mut Sampler,
    rep: &mut VerifyReport,
    idx: usize,
) -> Result<(), RankError> {
    let n = 2 + s.usize(3);

    // PM1: matrices that factor through fewer columns are members
    let nf = s.nonfull(view, n, n - 1);
    rep.check(pmi.contains(&nf)?, || format!("instance {idx}: non-full matrix not a member"));

    // PM2: determinantal sums of members over a shared column (members
    // built as P·Q₁ and P·Q₂ with one column of Q resampled, so they
    // agree outside column j)
    let r = n - 1;
    let lambda = s.degseq(view.group(), r);
    let alpha = s.degseq(view.group(), n);
    let beta = s.degseq(view.group(), n);
    let p_thin = s.hmatrix_with(view, alpha, lambda.clone());
    let q1 = s.hmatrix_with(view, lambda, beta);
    let j = s.usize(n);
    let q2 = resample_col(&q1, j, s)?;
    let mem_a = p_thin.mat_mul(&q1)?;
    let mem_b = p_thin.mat_mul(&q2)?;
    rep.check(pmi.contains(&mem_a)? && pmi.contains(&mem_b)?, || {
        format!("instance {idx}: thin products not members")
    });
    let nabla = mem_a.det_sum_col(&mem_b, j)?;
    rep.check(pmi.contains(&nabla)?, || {
        format!("instance {idx}: determinantal sum of members left the ideal")
    });
    // same over a row, via the flip (grading groups here are abelian)
    let nabla_row = {
        // the transposes share all rows except j, since the originals
        // share all columns except j
        let at = mem_a.transpose_flip()?;
        let bt = mem_b.transpose_flip()?;
        at.det_sum_row(&bt, j).ok().map(|nr| (at, bt, nr))
    };
    if let Some((at, bt, nr)) = nabla_row {
        if pmi.contains(&at)? && pmi.contains(&bt)? {
            rep.check(pmi.contains(&nr)?, || {
                format!("instance {idx}: row determinantal sum of members left the ideal")
            });
        }
    }

    // PM3: members absorb arbitrary diagonal partners
    let nb = 1 + s.usize(3);
    let any_b = s.hmatrix(view, nb, nb);
    rep.check(pmi.contains(&mem_a.diag_sum(&any_b)?)?, || {
        format!("instance {idx}: member ⊕ arbitrary not a member")
    });

    // PM4: primeness of diagonal sums
    let any_a = s.hmatrix(view, n, n);
    let sum = any_a.diag_sum(&any_b)?;
    if pmi.contains(&sum)? {
        rep.check(pmi.contains(&any_a)? || pmi.contains(&any_b)?, || {
            format!("instance {idx}: A⊕B in the ideal but neither factor is")
        });
    } else {
        rep.checked += 1;
    }

    // PM5 and consequence (6)/(8): no identity or invertible member
    let idn = HMatrix::identity(view.clone(), any_a.alpha().clone());
    rep.check(!pmi.contains(&idn)?, || format!("instance {idx}: identity inside the ideal"));
    let inv = s.invertible(view, any_a.alpha().clone());
    rep.check(!pmi.contains(&inv)?, || {
        format!("instance {idx}: invertible matrix inside the ideal")
    });

    // PM6: permutation stability (checked directly, never derived)
    let mut rp = id_perm(n);
    let (i1, i2) = (s.usize(n), s.usize(n));
    rp.swap(i1, i2);
    let mut cp = id_perm(n);
    let (j1, j2) = (s.usize(n), s.usize(n));
    cp.swap(j1, j2);
    rep.check(pmi.contains(&mem_a.permute(&rp, &cp)?)?, || {
        format!("instance {idx}: permuting a member left the ideal")
    });

    // Lemma item (1): C = A∇B with B non-full ⟹ (A ∈ 𝒫 ⇔ C ∈ 𝒫)
    let b_nf = s.nonfull(view, n, n - 1);
    let a_free = resample_col(&b_nf, j, s)?;
    let c1 = a_free.det_sum_col(&b_nf, j)?;
    rep.check(pmi.contains(&a_free)? == pmi.contains(&c1)?, || {
        format!("instance {idx}: ∇ with a non-full partner changed membership")
    });

    // Lemma item (4): triangular fillers do not matter
    let mem_small = sample_member(pmi, view, s, 2)?;
    let plain = mem_small.diag_sum(&any_b)?;
    let low = block_lower_random(s, &mem_small, &any_b);
    let up = block_upper_random(s, &mem_small, &any_b);
    let want = pmi.contains(&plain)?;
    rep.check(pmi.contains(&low)? == want, || {
        format!("instance {idx}: lower-left filler changed membership")
    });
    rep.check(pmi.contains(&up)? == want, || {
        format!("instance {idx}: top-right filler changed membership")
    });

    // Lemma item (5): the complement is multiplicative — identity in it,
    // closed under ⊕ and triangular fillers
    if !pmi.contains(&any_a)? && !pmi.contains(&any_b)? {
        let comp_sum = any_a.diag_sum(&any_b)?;
        rep.check(!pmi.contains(&comp_sum)?, || {
            format!("instance {idx}: ⊕ of two non-members fell into the ideal")
        });
        let comp_low = block_lower_random(s, &any_a, &any_b);
        rep.check(!pmi.contains(&comp_low)?, || {
            format!("instance {idx}: triangular sum of two non-members fell into the ideal")
        });
    } else {
        rep.checked += 2;
    }

    // Lemma item (7): AB ∈ 𝒫 ⇔ A ⊕ B ∈ 𝒫 for composable squares
    let comp_b = {
        let delta = s.degseq(view.group(), n);
        s.hmatrix_with(view, any_a.beta().clone(), delta)
    };
    let prod = any_a.mat_mul(&comp_b)?;
    rep.check(pmi.contains(&prod)? == pmi.contains(&any_a.diag_sum(&comp_b)?)?, || {
        format!("instance {idx}: product and diagonal sum disagree on membership")
    });

    // Lemma item (9): C = A∇B with B a member ⟹ (A ∈ 𝒫 ⇔ C ∈ 𝒫)
    let b_mem = sample_member(pmi, view, s, n)?;
    let a9 = resample_col(&b_mem, j, s)?;
    let c9 = a9.det_sum_col(&b_mem, j)?;
    rep.check(pmi.contains(&a9)? == pmi.contains(&c9)?, || {
        format!("instance {idx}: ∇ with a member partner changed membership")
    });
    Ok(())
}

/// Check the module-rank axioms: normalization on free modules, the
/// zero module, additivity on direct sums, the right-exact-sequence
/// bounds, and invariance under distribution translation.
pub fn verify_modrf(di: &ModuleRankFn, view: &RingView, seed: u64, count: usize) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let mut s = Sampler::new(seed);
    for idx in 0..count {
        let run = (|| -> Result<(), RankError> {
            let m = 1 + s.usize(3);
            let alpha = s.degseq(view.group(), m);
            let free = GradedModule::free(view.clone(), alpha.clone());
            rep.check(di.di(&free)? == m, || {
                format!("instance {idx}: free module of rank {m} misranked")
            });
            let zero_mod = GradedModule::from_presentation(HMatrix::identity(
                view.clone(),
                alpha.clone(),
            ));
            rep.check(di.di(&zero_mod)? == 0, || {
                format!("instance {idx}: zero module has nonzero rank")
            });

            let (cols_a, rows_c, cols_c) = (1 + s.usize(3), 1 + s.usize(3), 1 + s.usize(3));
            let a = s.hmatrix(view, m, cols_a);
            let c = s.hmatrix(view, rows_c, cols_c);
            let ma = GradedModule::from_presentation(a.clone());
            let mc = GradedModule::from_presentation(c.clone());
            let dsum = ma.direct_sum(&mc)?;
            rep.check(di.di(&dsum)? == di.di(&ma)? + di.di(&mc)?, || {
                format!("instance {idx}: module rank not additive on ⊕")
            });

            // D = [A X; 0 C] gives an exact sequence
            // coker A → coker D → coker C → 0
            let dm = GradedModule::from_presentation(block_upper_random(&mut s, &a, &c));
            let (da, dd, dc) = (di.di(&ma)?, di.di(&dm)?, di.di(&mc)?);
            rep.check(dc <= dd && dd <= da + dc, || {
                format!("instance {idx}: exactness bounds violated: {da}, {dd}, {dc}")
            });

            // same entry grid under translated distributions
            let shifted =
                GradedModule::from_presentation(a.translate_dists(&sample_shift(view))?);
            rep.check(di.di(&shifted)? == di.di(&ma)?, || {
                format!("instance {idx}: module rank changed under distribution translation")
            });
            Ok(())
        })();
        if let Err(e) = run {
            rep.failures.push(format!("instance {idx}: evaluation error: {e}"));
        }
    }
    rep
}

/// Check the map-rank axioms: normalization on identities, zero maps,
/// additivity on ⊕, sub-multiplicativity under composition, invariance
/// under invertible pre/post-composition, and distribution erasure.
pub fn verify_maprf(rho: &MapRankFn, view: &RingView, seed: u64, count: usize) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let mut s = Sampler::new(seed);
    for idx in 0..count {
        let run = (|| -> Result<(), RankError> {
            let m = 1 + s.usize(3);
            let n = 1 + s.usize(3);
            let f = s.hmatrix(view, m, n);
            let idm = HMatrix::identity(view.clone(), f.alpha().clone());
            rep.check(rho.rho(&idm)? == m, || {
                format!("instance {idx}: identity map misranked")
            });
            let z = HMatrix::zero(view.clone(), f.alpha().clone(), f.beta().clone());
            rep.check(rho.rho(&z)? == 0, || format!("instance {idx}: zero map has rank > 0"));

            let g = {
                let k = 1 + s.usize(3);
                let lam = s.degseq(view.group(), k);
                s.hmatrix_with(view, f.beta().clone(), lam)
            };
            let rf = rho.rho(&f)?;
            let rg = rho.rho(&g)?;
            rep.check(rho.rho(&f.mat_mul(&g)?)? <= rf.min(rg), || {
                format!("instance {idx}: composition rank exceeds the factors")
            });

            let (rows_h, cols_h) = (1 + s.usize(3), 1 + s.usize(3));
            let h = s.hmatrix(view, rows_h, cols_h);
            rep.check(rho.rho(&f.diag_sum(&h)?)? == rf + rho.rho(&h)?, || {
                format!("instance {idx}: map rank not additive on ⊕")
            });

            let p = gdlin::invert(&s.invertible(view, f.alpha().clone()))
                .expect("sampled invertible");
            rep.check(rho.rho(&p.mat_mul(&f)?)? == rf, || {
                format!("instance {idx}: invertible precomposition changed the rank")
            });

            let shifted = f.translate_dists(&sample_shift(view))?;
            rep.check(rho.rho(&shifted)? == rf, || {
                format!("instance {idx}: map rank changed under distribution translation")
            });
            Ok(())
        })();
        if let Err(e) = run {
            rep.failures.push(format!("instance {idx}: evaluation error: {e}"));
        }
    }
    rep
}

/// Result of a sampled inclusion check between two prime matrix ideals.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecReport {
    pub checked: usize,
    /// First sampled matrix inside the first ideal but not the second.
    pub counterexample: Option<HMatrix>,
}

impl SpecReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Verify 𝒫₁ ⊆ 𝒫₂ on the `include` list first (in order), then on
/// seeded random squares.
pub fn specialization_leq(
    p1: &PrimeMatrixIdeal,
    p2: &PrimeMatrixIdeal,
    view: &RingView,
    seed: u64,
    count: usize,
    include: &[HMatrix],
) -> Result<SpecReport, RankError> {
    let mut checked = 0;
    for a in include {
        checked += 1;
        if p1.contains(a)? && !p2.contains(a)? {
            return Ok(SpecReport { checked, counterexample: Some(a.clone()) });
        }
    }
    let mut s = Sampler::new(seed);
    for _ in 0..count {
        let n = 1 + s.usize(4);
        let a = s.hmatrix(view, n, n);
        checked += 1;
        if p1.contains(&a)? && !p2.contains(&a)? {
            return Ok(SpecReport { checked, counterexample: Some(a) });
        }
        let nf = s.nonfull(view, n, n.saturating_sub(1));
        checked += 1;
        if p1.contains(&nf)? && !p2.contains(&nf)? {
            return Ok(SpecReport { checked, counterexample: Some(nf) });
        }
    }
    Ok(SpecReport { checked, counterexample: None })
}
