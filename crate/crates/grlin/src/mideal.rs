//! Matrix ideals presented by generators, with machine-checkable
//! membership certificates.
//!
//! A membership claim `A ∈ ⟨X₀, …, X_{k-1}⟩` unwinds into a binary tree.
//! Inner nodes are determinantal sums along a shared row or column (the
//! two children agree everywhere off that line and add up on it), and
//! every leaf is one of
//!
//! - an explicit thin factorization `P·Q` of a square matrix through a
//!   strictly smaller interface,
//! - a *hollow* matrix — a zero `r×s` block with `r + s` larger than the
//!   matrix size, which forces such a factorization,
//! - a generator placed on the diagonal next to an arbitrary square pad
//!   and shuffled by row and column permutations.
//!
//! [`verify_derivation`] replays a tree against a generator list.
//! Structural defects — wrong shapes, foreign views, bad indices or
//! permutations — are reported as errors; honest value mismatches make
//! the verdict `false`. [`search_derivation`] looks for a tree by
//! iterative deepening over line splits drawn from small homogeneous
//! pools. Membership is only semi-decidable, so a miss is always
//! relative to the [`SearchBudget`] the result carries.
//!
//! [`MatrixIdealHandle`] adds the two quotient conventions used by the
//! rest of the crate: identity padding (`A ⊕ I_k`) for ideal membership
//! and diagonal powers (`A ⊕ ⋯ ⊕ A`) for radical membership. The
//! `cert_*` combinators transport an existing certificate along the
//! closure operations (diagonal sums, permutations, determinantal sums,
//! column operations, summand extraction) without re-searching.

use crate::gdlin::{self, GdlinError};
use crate::grp::{DegSeq, GroupElem};
use crate::hmat::{id_perm, verify_nonfull, FactorizationWitness, HMatrix, MatError, WitnessError};
use crate::ring::{GradedElement, HomDeg, RingView};
use crate::scalar::Scalar;
use itertools::Itertools;
use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MidealError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Lin(#[from] GdlinError),
}

fn malformed(msg: &str) -> MidealError {
    MidealError::Malformed(msg.to_string())
}

/// Which kind of line a determinantal sum is taken along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Row,
    Col,
}

/// One node of a membership certificate. Every node records the matrix
/// it derives, so subtrees stay checkable in isolation.
#[derive(Clone, Debug, PartialEq)]
pub enum CertNode {
    /// `target = witness.p · witness.q` with interface below the size.
    NonFull { target: HMatrix, witness: FactorizationWitness },
    /// Zero block `rows × cols` with `|rows| + |cols| > n`.
    Hollow { target: HMatrix, rows: Vec<usize>, cols: Vec<usize> },
    /// `target = (generators[index] ⊕ pad)` conjugated by permutations:
    /// `target(i, j) = (g ⊕ pad)(row_perm[i], col_perm[j])`.
    Generator {
        target: HMatrix,
        index: usize,
        pad: HMatrix,
        row_perm: Vec<usize>,
        col_perm: Vec<usize>,
    },
    /// Determinantal sum of the children along `line`.
    DetSum { target: HMatrix, axis: Axis, line: usize, left: Box<CertNode>, right: Box<CertNode> },
}

impl CertNode {
    pub fn target(&self) -> &HMatrix {
        match self {
            CertNode::NonFull { target, .. }
            | CertNode::Hollow { target, .. }
            | CertNode::Generator { target, .. }
            | CertNode::DetSum { target, .. } => target,
        }
    }

    /// Longest chain of determinantal sums above a leaf.
    pub fn depth(&self) -> usize {
        match self {
            CertNode::DetSum { left, right, .. } => 1 + left.depth().max(right.depth()),
            _ => 0,
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            CertNode::DetSum { left, right, .. } => left.leaves() + right.leaves(),
            _ => 1,
        }
    }
}

/// Replay a certificate. `Ok(true)` means every node checks out;
/// `Ok(false)` means the tree is well-formed but some value does not
/// match; `Err` means the tree itself is broken (shapes, views,
/// indices, permutations).
pub fn verify_derivation(cert: &CertNode, generators: &[HMatrix]) -> Result<bool, MidealError> {
    match cert {
        CertNode::NonFull { target, witness } => match verify_nonfull(target, witness) {
            Ok(()) => Ok(true),
            Err(WitnessError::ProductMismatch) => Ok(false),
            Err(WitnessError::Malformed(m)) => Err(MidealError::Malformed(m)),
        },
        CertNode::Hollow { target, rows, cols } => {
            if !target.is_square() {
                return Err(malformed("hollow targets must be square"));
            }
            let n = target.rows();
            let ri: BTreeSet<usize> = rows.iter().copied().collect();
            let cj: BTreeSet<usize> = cols.iter().copied().collect();
            if ri.len() != rows.len() || cj.len() != cols.len() {
                return Err(malformed("repeated index in the hollow block"));
            }
            if ri.iter().any(|&i| i >= n) || cj.iter().any(|&j| j >= n) {
                return Err(malformed("hollow block index out of range"));
            }
            if rows.len() + cols.len() <= n {
                return Err(malformed("zero block too small to force non-fullness"));
            }
            for &i in &ri {
                for &j in &cj {
                    if !target.entry(i, j).is_zero() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        CertNode::Generator { target, index, pad, row_perm, col_perm } => {
            let Some(g) = generators.get(*index) else {
                return Err(malformed("generator index out of range"));
            };
            if g.view() != target.view() || pad.view() != target.view() {
                return Err(malformed("certificate crosses ring views"));
            }
            if !pad.is_square() {
                return Err(malformed("generator padding must be square"));
            }
            let src = g.diag_sum(pad)?;
            let scattered = src.permute(row_perm, col_perm)?;
            if scattered.rows() != target.rows() {
                return Err(malformed("generator embedding has the wrong size"));
            }
            Ok(scattered == *target)
        }
        CertNode::DetSum { target, axis, line, left, right } => {
            let l = left.target();
            let r = right.target();
            if l.view() != target.view() || r.view() != target.view() {
                return Err(malformed("determinantal summands cross ring views"));
            }
            let same_frame = |m: &HMatrix| {
                m.rows() == target.rows()
                    && m.cols() == target.cols()
                    && m.alpha() == target.alpha()
                    && m.beta() == target.beta()
            };
            if !same_frame(l) || !same_frame(r) {
                return Err(malformed("determinantal summands must share the target's shape and distributions"));
            }
            let lines = match axis {
                Axis::Col => target.cols(),
                Axis::Row => target.rows(),
            };
            if *line >= lines {
                return Err(malformed("summed line index out of range"));
            }
            let ring = target.view().ring().clone();
            for i in 0..target.rows() {
                for j in 0..target.cols() {
                    let on = match axis {
                        Axis::Col => j == *line,
                        Axis::Row => i == *line,
                    };
                    let ok = if on {
                        ring.add(l.entry(i, j), r.entry(i, j)) == *target.entry(i, j)
                    } else {
                        l.entry(i, j) == r.entry(i, j) && l.entry(i, j) == target.entry(i, j)
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
            Ok(verify_derivation(left, generators)? && verify_derivation(right, generators)?)
        }
    }
}

/// Resource limits for the certificate search. Membership is
/// semi-decidable, so every miss is reported relative to one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum determinantal-sum nesting.
    pub depth: usize,
    /// Largest identity block tried when testing `A ⊕ I_k`.
    pub pad: usize,
    /// Radius of the degree ball that seeds homogeneous value pools.
    pub degree_ball: i64,
    /// Hard cap on visited subproblems across one search.
    pub node_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget { depth: 3, pad: 2, degree_ball: 1, node_cap: 50_000 }
    }
}

/// What a failed search actually exhausted. `exhausted` is `true` only
/// when every split inside the budget was tried; a node-cap truncation
/// clears it.
#[derive(Clone, Copy, Debug)]
pub struct SearchMiss {
    pub budget: SearchBudget,
    pub nodes: usize,
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
pub enum SearchResult {
    Found(Box<CertNode>),
    NotFound(SearchMiss),
}

impl SearchResult {
    pub fn found(&self) -> Option<&CertNode> {
        match self {
            SearchResult::Found(c) => Some(c),
            SearchResult::NotFound(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.found().is_some()
    }
}

/// Upper bound on split candidates examined per line.
const SPLIT_CAP: usize = 400;

/// Look for a derivation of `target` from the generators by iterative
/// deepening. Shallower certificates win; pools of candidate values are
/// finite, so this is an under-approximation of membership.
pub fn search_derivation(
    target: &HMatrix,
    generators: &[HMatrix],
    budget: &SearchBudget,
) -> Result<SearchResult, MidealError> {
    if !target.is_square() {
        return Err(malformed("only square matrices can be derived"));
    }
    for g in generators {
        if !g.is_square() {
            return Err(malformed("generators must be square"));
        }
        if g.view() != target.view() {
            return Err(malformed("generators must share the target's ring view"));
        }
    }
    // Over a plainly graded division ring the identity map is itself an
    // epic graded division ring, so with no generators an invertible
    // target can never be derived; mark such targets as dead ends.
    let prune_invertible = generators.is_empty()
        && target.view().quot().is_none()
        && target.view().ring().is_graded_division();
    let mut s = Searcher {
        gens: generators,
        budget: *budget,
        prune_invertible,
        memo: HashMap::new(),
        no_leaf: HashSet::new(),
        nodes: 0,
        truncated: false,
    };
    for depth in 0..=budget.depth {
        if let Some(cert) = s.derive(target, depth)? {
            return Ok(SearchResult::Found(Box::new(cert)));
        }
    }
    Ok(SearchResult::NotFound(SearchMiss {
        budget: *budget,
        nodes: s.nodes,
        exhausted: !s.truncated,
    }))
}

enum Memo {
    Found(CertNode),
    /// Exhaustively failed when entered with this much remaining depth.
    Failed { depth: usize },
}

struct Searcher<'a> {
    gens: &'a [HMatrix],
    budget: SearchBudget,
    prune_invertible: bool,
    memo: HashMap<String, Memo>,
    no_leaf: HashSet<String>,
    nodes: usize,
    truncated: bool,
}

impl Searcher<'_> {
    fn derive(&mut self, t: &HMatrix, depth_left: usize) -> Result<Option<CertNode>, MidealError> {
        let key = fingerprint(t);
        match self.memo.get(&key) {
            Some(Memo::Found(c)) => return Ok(Some(c.clone())),
            Some(Memo::Failed { depth }) if *depth >= depth_left => return Ok(None),
            _ => {}
        }
        if self.nodes >= self.budget.node_cap {
            self.truncated = true;
            return Ok(None);
        }
        self.nodes += 1;
        if !self.no_leaf.contains(&key) {
            if let Some(cert) = self.leaf(t)? {
                self.memo.insert(key, Memo::Found(cert.clone()));
                return Ok(Some(cert));
            }
            self.no_leaf.insert(key.clone());
            if self.prune_invertible && gdlin::is_invertible(t).unwrap_or(false) {
                self.memo.insert(key, Memo::Failed { depth: usize::MAX });
                return Ok(None);
            }
        }
        if depth_left > 0 {
            let n = t.rows();
            let ring = t.view().ring().clone();
            let lines = (0..n).map(|j| (Axis::Col, j)).chain((0..n).map(|i| (Axis::Row, i)));
            for (axis, line) in lines {
                let cur = line_of(t, axis, line);
                for lv in self.line_splits(t, axis, line) {
                    let rv: Vec<GradedElement> =
                        cur.iter().zip(&lv).map(|(c, l)| ring.sub(c, l)).collect();
                    if rv == cur {
                        continue;
                    }
                    let (Ok(l), Ok(r)) =
                        (with_line(t, axis, line, &lv), with_line(t, axis, line, &rv))
                    else {
                        continue;
                    };
                    if let Some(cl) = self.derive(&l, depth_left - 1)? {
                        if let Some(cr) = self.derive(&r, depth_left - 1)? {
                            let cert = CertNode::DetSum {
                                target: t.clone(),
                                axis,
                                line,
                                left: Box::new(cl),
                                right: Box::new(cr),
                            };
                            self.memo.insert(key, Memo::Found(cert.clone()));
                            return Ok(Some(cert));
                        }
                    }
                }
            }
        }
        match self.memo.entry(key) {
            Entry::Occupied(mut e) => {
                if let Memo::Failed { depth } = e.get_mut() {
                    if *depth < depth_left {
                        *depth = depth_left;
                    }
                }
            }
            Entry::Vacant(v) => {
                v.insert(Memo::Failed { depth: depth_left });
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, t: &HMatrix) -> Result<Option<CertNode>, MidealError> {
        if let Some(cert) = self.generator_leaf(t)? {
            return Ok(Some(cert));
        }
        let (hollow, _exact) = t.find_hollow();
        if let Some((rows, cols)) = hollow {
            return Ok(Some(CertNode::Hollow { target: t.clone(), rows, cols }));
        }
        let mut echelon_concluded = false;
        match gdlin::nonfull_witness(t) {
            Ok(witness) => {
                return Ok(Some(CertNode::NonFull { target: t.clone(), witness }));
            }
            Err(GdlinError::Shape(_)) => echelon_concluded = true,
            Err(GdlinError::NotDivision | GdlinError::Singular { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        if !echelon_concluded && t.rows() == 2 {
            if let Some(witness) = self.rank_one(t) {
                return Ok(Some(CertNode::NonFull { target: t.clone(), witness }));
            }
        }
        Ok(None)
    }

    /// Match the target as a generator scattered by permutations around
    /// an arbitrary diagonal pad.
    fn generator_leaf(&self, t: &HMatrix) -> Result<Option<CertNode>, MidealError> {
        let n = t.rows();
        for (gi, g) in self.gens.iter().enumerate() {
            let m = g.rows();
            if m > n {
                continue;
            }
            for sigma in (0..n).permutations(m) {
                if (0..m).any(|i| t.alpha().get(sigma[i]) != g.alpha().get(i)) {
                    continue;
                }
                'tau: for tau in (0..n).permutations(m) {
                    if (0..m).any(|j| t.beta().get(tau[j]) != g.beta().get(j)) {
                        continue;
                    }
                    for i in 0..m {
                        for j in 0..m {
                            if t.entry(sigma[i], tau[j]) != g.entry(i, j) {
                                continue 'tau;
                            }
                        }
                    }
                    let ci: Vec<usize> = (0..n).filter(|i| !sigma.contains(i)).collect();
                    let cj: Vec<usize> = (0..n).filter(|j| !tau.contains(j)).collect();
                    for &i in &sigma {
                        for &j in &cj {
                            if !t.entry(i, j).is_zero() {
                                continue 'tau;
                            }
                        }
                    }
                    for &i in &ci {
                        for &j in &tau {
                            if !t.entry(i, j).is_zero() {
                                continue 'tau;
                            }
                        }
                    }
                    let pad = t.submatrix(&ci, &cj)?;
                    let mut rp = vec![0usize; n];
                    let mut cp = vec![0usize; n];
                    for (i, &ti) in sigma.iter().enumerate() {
                        rp[ti] = i;
                    }
                    for (k, &ti) in ci.iter().enumerate() {
                        rp[ti] = m + k;
                    }
                    for (j, &tj) in tau.iter().enumerate() {
                        cp[tj] = j;
                    }
                    for (k, &tj) in cj.iter().enumerate() {
                        cp[tj] = m + k;
                    }
                    return Ok(Some(CertNode::Generator {
                        target: t.clone(),
                        index: gi,
                        pad,
                        row_perm: rp,
                        col_perm: cp,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Thin factorization through a single column, found by enumerating
    /// interface degrees and small homogeneous pools. Only used where
    /// echelon reduction cannot decide (non-division pivots).
    fn rank_one(&self, t: &HMatrix) -> Option<FactorizationWitness> {
        let view = t.view();
        let grp = view.group().clone();
        let ring = view.ring().clone();
        let n = t.rows();
        let mut lambdas = grp.ball(self.budget.degree_ball);
        lambdas.extend(t.alpha().iter().cloned());
        lambdas.extend(t.beta().iter().cloned());
        lambdas.sort();
        lambdas.dedup();
        for lam in &lambdas {
            let p_pools: Vec<Vec<GradedElement>> = (0..n)
                .map(|i| value_pool(view, &grp.ratio(t.alpha().get(i), lam), t, self.budget.degree_ball))
                .collect();
            let q_pools: Vec<Vec<GradedElement>> = (0..n)
                .map(|j| value_pool(view, &grp.ratio(lam, t.beta().get(j)), t, self.budget.degree_ball))
                .collect();
            for p in p_pools.iter().map(|pool| pool.iter()).multi_cartesian_product() {
                let mut qs: Vec<GradedElement> = Vec::with_capacity(n);
                let ok = (0..n).all(|j| {
                    match q_pools[j]
                        .iter()
                        .find(|q| (0..n).all(|i| ring.mul(p[i], q) == *t.entry(i, j)))
                    {
                        Some(q) => {
                            qs.push(q.clone());
                            true
                        }
                        None => false,
                    }
                });
                if !ok {
                    continue;
                }
                let pm = HMatrix::new(
                    view.clone(),
                    t.alpha().clone(),
                    DegSeq::uniform(lam.clone(), 1),
                    p.iter().map(|e| (*e).clone()).collect(),
                );
                let qm = HMatrix::new(view.clone(), DegSeq::uniform(lam.clone(), 1), t.beta().clone(), qs);
                if let (Ok(pm), Ok(qm)) = (pm, qm) {
                    return Some(FactorizationWitness { p: pm, q: qm });
                }
            }
        }
        None
    }

    /// Candidate replacement lines: change one position (two for small
    /// matrices) to a value from the homogeneous pool.
    fn line_splits(&self, t: &HMatrix, axis: Axis, line: usize) -> Vec<Vec<GradedElement>> {
        let cur = line_of(t, axis, line);
        let n = cur.len();
        let view = t.view().clone();
        let pools: Vec<Vec<GradedElement>> = (0..n)
            .map(|pos| {
                let d = line_degree(t, axis, line, pos);
                self.split_values(&view, &d, &cur[pos], t)
            })
            .collect();
        let mut out = Vec::new();
        for pos in 0..n {
            for v in &pools[pos] {
                let mut lv = cur.clone();
                lv[pos] = v.clone();
                out.push(lv);
            }
        }
        if n <= 3 {
            for p1 in 0..n {
                for p2 in p1 + 1..n {
                    for v1 in &pools[p1] {
                        for v2 in &pools[p2] {
                            let mut lv = cur.clone();
                            lv[p1] = v1.clone();
                            lv[p2] = v2.clone();
                            out.push(lv);
                            if out.len() >= SPLIT_CAP {
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out.truncate(SPLIT_CAP);
        out
    }

    fn split_values(
        &self,
        view: &RingView,
        d: &GroupElem,
        cur: &GradedElement,
        t: &HMatrix,
    ) -> Vec<GradedElement> {
        let ring = view.ring();
        let mut out = value_pool(view, d, t, self.budget.degree_ball);
        let units: Vec<GradedElement> = view
            .basis_atoms_of_class(d, self.budget.degree_ball)
            .into_iter()
            .map(|a| ring.monomial(a, Scalar::one(ring.field())).expect("enumerated atom is valid"))
            .collect();
        for m in &units {
            out.push(ring.add(cur, m));
            out.push(ring.sub(cur, m));
        }
        out.sort();
        out.dedup();
        out.retain(|v| v != cur);
        out
    }
}

/// Zero, signed unit monomials of the requested degree, and target
/// entries of that degree (with negatives).
fn value_pool(view: &RingView, d: &GroupElem, t: &HMatrix, ball: i64) -> Vec<GradedElement> {
    let ring = view.ring();
    let mut out = vec![ring.zero()];
    for atom in view.basis_atoms_of_class(d, ball) {
        let m = ring.monomial(atom, Scalar::one(ring.field())).expect("enumerated atom is valid");
        out.push(ring.neg(&m));
        out.push(m);
    }
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let e = t.entry(i, j);
            if view.hom_degree(e) == HomDeg::Of(d.clone()) {
                out.push(ring.neg(e));
                out.push(e.clone());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn line_of(t: &HMatrix, axis: Axis, line: usize) -> Vec<GradedElement> {
    match axis {
        Axis::Col => t.col(line),
        Axis::Row => t.row(line),
    }
}

fn with_line(
    t: &HMatrix,
    axis: Axis,
    line: usize,
    values: &[GradedElement],
) -> Result<HMatrix, MatError> {
    let mut entries = Vec::with_capacity(t.rows() * t.cols());
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let (on, pos) = match axis {
                Axis::Col => (j == line, i),
                Axis::Row => (i == line, j),
            };
            entries.push(if on { values[pos].clone() } else { t.entry(i, j).clone() });
        }
    }
    HMatrix::new(t.view().clone(), t.alpha().clone(), t.beta().clone(), entries)
}

/// Degree a homogeneous entry must have at position `pos` of the line.
fn line_degree(t: &HMatrix, axis: Axis, line: usize, pos: usize) -> GroupElem {
    let grp = t.view().group();
    match axis {
        Axis::Col => grp.ratio(t.alpha().get(pos), t.beta().get(line)),
        Axis::Row => grp.ratio(t.alpha().get(line), t.beta().get(pos)),
    }
}

fn fingerprint(t: &HMatrix) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = write!(s, "{:?}|{:?}", t.alpha(), t.beta());
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let _ = write!(s, "|{:?}", t.entry(i, j));
        }
    }
    s
}

/// A matrix ideal given by square homogeneous generators over one view,
/// together with the budget all membership questions run under.
#[derive(Clone, Debug)]
pub struct MatrixIdealHandle {
    view: RingView,
    generators: Vec<HMatrix>,
    budget: SearchBudget,
}

#[derive(Clone, Debug)]
pub enum MembershipOutcome {
    Member { pad: usize, cert: Box<CertNode> },
    NotFound(SearchMiss),
}

impl MembershipOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipOutcome::Member { .. })
    }

    pub fn cert(&self) -> Option<&CertNode> {
        match self {
            MembershipOutcome::Member { cert, .. } => Some(cert),
            MembershipOutcome::NotFound(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum RadicalOutcome {
    Member { power: usize, pad: usize, cert: Box<CertNode> },
    NotFound(SearchMiss),
}

impl MatrixIdealHandle {
    pub fn new(
        view: RingView,
        generators: Vec<HMatrix>,
        budget: SearchBudget,
    ) -> Result<MatrixIdealHandle, MidealError> {
        for g in &generators {
            if !g.is_square() {
                return Err(malformed("generators must be square"));
            }
            if g.view() != &view {
                return Err(malformed("generators must live over the handle's ring view"));
            }
        }
        Ok(MatrixIdealHandle { view, generators, budget })
    }

    /// The ideal generated by nothing: membership reduces to
    /// derivability from non-full matrices alone.
    pub fn least(view: RingView, budget: SearchBudget) -> MatrixIdealHandle {
        MatrixIdealHandle { view, generators: Vec::new(), budget }
    }

    pub fn view(&self) -> &RingView {
        &self.view
    }

    pub fn generators(&self) -> &[HMatrix] {
        &self.generators
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    /// Ideal membership: search `A ⊕ I_k` for `k = 0, …, budget.pad`,
    /// with identity blocks graded at the group identity.
    pub fn ideal_member(&self, a: &HMatrix) -> Result<MembershipOutcome, MidealError> {
        if a.view() != &self.view {
            return Err(malformed("the queried matrix lives over a different ring view"));
        }
        if !a.is_square() {
            return Err(malformed("membership is asked of square matrices"));
        }
        let e = self.view.group().identity();
        let mut nodes = 0;
        let mut exhausted = true;
        for k in 0..=self.budget.pad {
            let probe = if k == 0 {
                a.clone()
            } else {
                a.diag_sum(&HMatrix::identity(self.view.clone(), DegSeq::uniform(e.clone(), k)))?
            };
            match search_derivation(&probe, &self.generators, &self.budget)? {
                SearchResult::Found(cert) => return Ok(MembershipOutcome::Member { pad: k, cert }),
                SearchResult::NotFound(m) => {
                    nodes += m.nodes;
                    exhausted &= m.exhausted;
                }
            }
        }
        Ok(MembershipOutcome::NotFound(SearchMiss { budget: self.budget, nodes, exhausted }))
    }

    /// Radical membership: least `r ≤ power_cap` with `A ⊕ ⋯ ⊕ A`
    /// (`r` copies) in the ideal.
    pub fn radical_member(
        &self,
        a: &HMatrix,
        power_cap: usize,
    ) -> Result<RadicalOutcome, MidealError> {
        let mut nodes = 0;
        let mut exhausted = true;
        let mut stack = a.clone();
        for r in 1..=power_cap {
            if r > 1 {
                stack = stack.diag_sum(a)?;
            }
            match self.ideal_member(&stack)? {
                MembershipOutcome::Member { pad, cert } => {
                    return Ok(RadicalOutcome::Member { power: r, pad, cert });
                }
                MembershipOutcome::NotFound(m) => {
                    nodes += m.nodes;
                    exhausted &= m.exhausted;
                }
            }
        }
        Ok(RadicalOutcome::NotFound(SearchMiss { budget: self.budget, nodes, exhausted }))
    }

    /// Product ideal, generated by pairwise diagonal sums.
    pub fn product(&self, other: &MatrixIdealHandle) -> Result<MatrixIdealHandle, MidealError> {
        if self.view != other.view {
            return Err(malformed("product of ideals over different ring views"));
        }
        let generators = product_generators(&self.generators, &other.generators)?;
        Ok(MatrixIdealHandle { view: self.view.clone(), generators, budget: self.budget })
    }
}

/// Pairwise diagonal sums `X_i ⊕ Y_j`; empty if either family is empty.
pub fn product_generators(xs: &[HMatrix], ys: &[HMatrix]) -> Result<Vec<HMatrix>, MidealError> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(x.diag_sum(y)?);
        }
    }
    Ok(out)
}

/// Obstructions to mapping the view into a graded division ring: a
/// derivable identity matrix rules out every such image, and a derivable
/// diagonal of nonzero homogeneous elements rules out an injective one.
#[derive(Clone, Debug)]
pub struct ExistenceProbe {
    pub identity_obstruction: Option<Box<CertNode>>,
    pub fractions_obstruction: Option<Box<CertNode>>,
    pub nodes: usize,
    pub exhausted: bool,
}

pub fn existence_probe(
    view: &RingView,
    budget: &SearchBudget,
) -> Result<ExistenceProbe, MidealError> {
    let grp = view.group().clone();
    let ring = view.ring().clone();
    let e = grp.identity();
    let mut nodes = 0;
    let mut exhausted = true;
    let mut identity_obstruction = None;
    for n in 1..=2usize {
        let target = HMatrix::identity(view.clone(), DegSeq::uniform(e.clone(), n));
        match search_derivation(&target, &[], budget)? {
            SearchResult::Found(cert) => {
                identity_obstruction = Some(cert);
                break;
            }
            SearchResult::NotFound(m) => {
                nodes += m.nodes;
                exhausted &= m.exhausted;
            }
        }
    }
    let mut pool: Vec<GradedElement> = Vec::new();
    for d in grp.ball(budget.degree_ball) {
        for atom in view.basis_atoms_of_class(&d, budget.degree_ball) {
            pool.push(ring.monomial(atom, Scalar::one(ring.field())).expect("enumerated atom is valid"));
        }
    }
    pool.sort();
    pool.dedup();
    let mut fractions_obstruction = None;
    let mut diagonals: Vec<Vec<&GradedElement>> = pool.iter().map(|a| vec![a]).collect();
    let mut pairs: Vec<(usize, usize)> = (0..pool.len())
        .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
        .collect();
    // mixed pairs are the likeliest obstructions, try them first
    pairs.sort_by_key(|&(i, j)| i == j);
    diagonals.extend(pairs.into_iter().map(|(i, j)| vec![&pool[i], &pool[j]]));
    for picks in diagonals {
        let target = hom_diagonal(view, &picks)?;
        match search_derivation(&target, &[], budget)? {
            SearchResult::Found(cert) => {
                fractions_obstruction = Some(cert);
                break;
            }
            SearchResult::NotFound(m) => {
                nodes += m.nodes;
                exhausted &= m.exhausted;
            }
        }
    }
    Ok(ExistenceProbe { identity_obstruction, fractions_obstruction, nodes, exhausted })
}

/// Diagonal of nonzero homogeneous elements, with distributions that
/// make every diagonal slot carry its element's degree.
fn hom_diagonal(view: &RingView, picks: &[&GradedElement]) -> Result<HMatrix, MidealError> {
    let grp = view.group().clone();
    let e = grp.identity();
    let ring = view.ring().clone();
    let deg = |a: &GradedElement| match view.hom_degree(a) {
        HomDeg::Of(d) => Ok(d),
        _ => Err(malformed("diagonal entries must be nonzero homogeneous")),
    };
    let (alpha, beta) = match picks {
        [a] => (DegSeq::new(vec![deg(a)?]), DegSeq::uniform(e, 1)),
        [a, b] => (
            DegSeq::new(vec![deg(a)?, e.clone()]),
            DegSeq::new(vec![e.clone(), grp.inverse(&deg(b)?).expect("degree lies in the group")]),
        ),
        _ => return Err(malformed("probed diagonals have one or two entries")),
    };
    let n = picks.len();
    let mut entries = vec![ring.zero(); n * n];
    for (i, a) in picks.iter().enumerate() {
        entries[i * n + i] = (*a).clone();
    }
    Ok(HMatrix::new(view.clone(), alpha, beta, entries)?)
}

/// Transport a certificate along a diagonal pad: derives `target ⊕ b`.
pub fn cert_diagsum(cert: &CertNode, b: &HMatrix) -> Result<CertNode, MidealError> {
    if !b.is_square() {
        return Err(malformed("diagonal padding must be square"));
    }
    if b.view() != cert.target().view() {
        return Err(malformed("padding lives over a different ring view"));
    }
    Ok(match cert {
        CertNode::NonFull { target, witness } => {
            let p = witness.p.diag_sum(b)?;
            let q = witness.q.diag_sum(&HMatrix::identity(b.view().clone(), b.beta().clone()))?;
            CertNode::NonFull { target: target.diag_sum(b)?, witness: FactorizationWitness { p, q } }
        }
        CertNode::Hollow { target, rows, cols } => {
            // the zero-block inequality weakens under padding, so fall
            // back to the factorization it guarantees
            let witness = target.hollow_to_witness(rows, cols)?;
            let as_nonfull = CertNode::NonFull { target: target.clone(), witness };
            cert_diagsum(&as_nonfull, b)?
        }
        CertNode::Generator { target, index, pad, row_perm, col_perm } => {
            let n = target.rows();
            let mut rp = row_perm.clone();
            rp.extend(n..n + b.rows());
            let mut cp = col_perm.clone();
            cp.extend(n..n + b.rows());
            CertNode::Generator {
                target: target.diag_sum(b)?,
                index: *index,
                pad: pad.diag_sum(b)?,
                row_perm: rp,
                col_perm: cp,
            }
        }
        CertNode::DetSum { target, axis, line, left, right } => CertNode::DetSum {
            target: target.diag_sum(b)?,
            axis: *axis,
            line: *line,
            left: Box::new(cert_diagsum(left, b)?),
            right: Box::new(cert_diagsum(right, b)?),
        },
    })
}

/// Transport a certificate along permutations: derives
/// `target.permute(rp, cp)`.
pub fn cert_perm(cert: &CertNode, rp: &[usize], cp: &[usize]) -> Result<CertNode, MidealError> {
    Ok(match cert {
        CertNode::NonFull { target, witness } => {
            let t = target.permute(rp, cp)?;
            let p = witness.p.permute(rp, &id_perm(witness.p.cols()))?;
            let q = witness.q.permute(&id_perm(witness.q.rows()), cp)?;
            CertNode::NonFull { target: t, witness: FactorizationWitness { p, q } }
        }
        CertNode::Hollow { target, rows, cols } => {
            let t = target.permute(rp, cp)?;
            let n = t.rows();
            let rows2: Vec<usize> = (0..n).filter(|&i| rows.contains(&rp[i])).collect();
            let cols2: Vec<usize> = (0..n).filter(|&j| cols.contains(&cp[j])).collect();
            CertNode::Hollow { target: t, rows: rows2, cols: cols2 }
        }
        CertNode::Generator { target, index, pad, row_perm, col_perm } => {
            let t = target.permute(rp, cp)?;
            let rp2: Vec<usize> = rp.iter().map(|&i| row_perm[i]).collect();
            let cp2: Vec<usize> = cp.iter().map(|&j| col_perm[j]).collect();
            CertNode::Generator {
                target: t,
                index: *index,
                pad: pad.clone(),
                row_perm: rp2,
                col_perm: cp2,
            }
        }
        CertNode::DetSum { target, axis, line, left, right } => {
            let t = target.permute(rp, cp)?;
            let moved = match axis {
                Axis::Col => cp.iter().position(|&j| j == *line),
                Axis::Row => rp.iter().position(|&i| i == *line),
            }
            .ok_or_else(|| malformed("permutation misses the summed line"))?;
            CertNode::DetSum {
                target: t,
                axis: *axis,
                line: moved,
                left: Box::new(cert_perm(left, rp, cp)?),
                right: Box::new(cert_perm(right, rp, cp)?),
            }
        }
    })
}

/// Join two certificates into a determinantal sum; the children must
/// agree off the summed line.
pub fn cert_detsum(
    axis: Axis,
    line: usize,
    left: CertNode,
    right: CertNode,
) -> Result<CertNode, MidealError> {
    let l = left.target();
    let r = right.target();
    if l.view() != r.view() {
        return Err(malformed("summands live over different ring views"));
    }
    if l.rows() != r.rows() || l.cols() != r.cols() || l.alpha() != r.alpha() || l.beta() != r.beta()
    {
        return Err(malformed("summands must share shape and distributions"));
    }
    let lines = match axis {
        Axis::Col => l.cols(),
        Axis::Row => l.rows(),
    };
    if line >= lines {
        return Err(malformed("summed line index out of range"));
    }
    let ring = l.view().ring().clone();
    let mut entries = Vec::with_capacity(l.rows() * l.cols());
    for i in 0..l.rows() {
        for j in 0..l.cols() {
            let on = match axis {
                Axis::Col => j == line,
                Axis::Row => i == line,
            };
            if on {
                entries.push(ring.add(l.entry(i, j), r.entry(i, j)));
            } else {
                if l.entry(i, j) != r.entry(i, j) {
                    return Err(malformed("summands disagree off the summed line"));
                }
                entries.push(l.entry(i, j).clone());
            }
        }
    }
    let target = HMatrix::new(l.view().clone(), l.alpha().clone(), l.beta().clone(), entries)?;
    Ok(CertNode::DetSum { target, axis, line, left: Box::new(left), right: Box::new(right) })
}

/// Column operation on a derived matrix: adds `(column from) · a` to
/// `column to`, which keeps membership because the correction term has
/// proportional columns.
pub fn cert_colop(
    cert: &CertNode,
    from: usize,
    to: usize,
    a: &GradedElement,
) -> Result<CertNode, MidealError> {
    let t = cert.target();
    let n = t.rows();
    if from >= n || to >= n || from == to {
        return Err(malformed("column operation needs two distinct columns in range"));
    }
    let ring = t.view().ring().clone();
    let mut b_entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            b_entries.push(if j == to {
                ring.mul(t.entry(i, from), a)
            } else {
                t.entry(i, j).clone()
            });
        }
    }
    let b = HMatrix::new(t.view().clone(), t.alpha().clone(), t.beta().clone(), b_entries)?;
    let keep: Vec<usize> = (0..n).filter(|&j| j != to).collect();
    let p = t.submatrix(&id_perm(n), &keep)?;
    let mut q_entries = vec![ring.zero(); keep.len() * n];
    for (r, &k) in keep.iter().enumerate() {
        q_entries[r * n + k] = ring.one();
        if k == from {
            q_entries[r * n + to] = a.clone();
        }
    }
    let q = HMatrix::new(t.view().clone(), t.beta().select(&keep), t.beta().clone(), q_entries)?;
    let witness = FactorizationWitness { p, q };
    debug_assert!(verify_nonfull(&b, &witness).is_ok());
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(if j == to {
                ring.add(t.entry(i, j), b.entry(i, j))
            } else {
                t.entry(i, j).clone()
            });
        }
    }
    let target = HMatrix::new(t.view().clone(), t.alpha().clone(), t.beta().clone(), entries)?;
    Ok(CertNode::DetSum {
        target,
        axis: Axis::Col,
        line: to,
        left: Box::new(cert.clone()),
        right: Box::new(CertNode::NonFull { target: b, witness }),
    })
}

/// Undo a determinantal sum with a non-full summand: from a derivation
/// of `whole = a ∇ discarded` recover one of `a`, by summing `whole`
/// with the line-negated summand.
pub fn cert_extract_left(
    whole: CertNode,
    discarded: &HMatrix,
    witness: &FactorizationWitness,
    axis: Axis,
    line: usize,
) -> Result<CertNode, MidealError> {
    if verify_nonfull(discarded, witness).is_err() {
        return Err(malformed("the discarded summand needs a valid non-fullness witness"));
    }
    let c = whole.target();
    if c.view() != discarded.view()
        || c.rows() != discarded.rows()
        || c.cols() != discarded.cols()
        || c.alpha() != discarded.alpha()
        || c.beta() != discarded.beta()
    {
        return Err(malformed("the whole and the discarded summand must share shape and distributions"));
    }
    let lines = match axis {
        Axis::Col => c.cols(),
        Axis::Row => c.rows(),
    };
    if line >= lines {
        return Err(malformed("summed line index out of range"));
    }
    let ring = c.view().ring().clone();
    let mut entries = Vec::with_capacity(c.rows() * c.cols());
    for i in 0..c.rows() {
        for j in 0..c.cols() {
            let on = match axis {
                Axis::Col => j == line,
                Axis::Row => i == line,
            };
            if on {
                entries.push(ring.sub(c.entry(i, j), discarded.entry(i, j)));
            } else {
                if c.entry(i, j) != discarded.entry(i, j) {
                    return Err(malformed("the whole and the discarded summand must agree off the summed line"));
                }
                entries.push(c.entry(i, j).clone());
            }
        }
    }
    let target = HMatrix::new(c.view().clone(), c.alpha().clone(), c.beta().clone(), entries)?;
    let neg_line: Vec<GradedElement> =
        line_of(discarded, axis, line).iter().map(|v| ring.neg(v)).collect();
    let bneg = with_line(discarded, axis, line, &neg_line)?;
    let wneg = match axis {
        Axis::Col => {
            let qcol: Vec<GradedElement> =
                witness.q.col(line).iter().map(|v| ring.neg(v)).collect();
            FactorizationWitness {
                p: witness.p.clone(),
                q: with_line(&witness.q, Axis::Col, line, &qcol)?,
            }
        }
        Axis::Row => {
            let prow: Vec<GradedElement> =
                witness.p.row(line).iter().map(|v| ring.neg(v)).collect();
            FactorizationWitness {
                p: with_line(&witness.p, Axis::Row, line, &prow)?,
                q: witness.q.clone(),
            }
        }
    };
    Ok(CertNode::DetSum {
        target,
        axis,
        line,
        left: Box::new(whole),
        right: Box::new(CertNode::NonFull { target: bneg, witness: wneg }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{exf, q2, sk, tx, Atom, RingView};
    use crate::sample::Sampler;
    use crate::scalar::Field;

    fn ze(n: i64) -> GroupElem {
        GroupElem::V(vec![n])
    }

    fn tview() -> RingView {
        RingView::plain(tx())
    }

    fn x_elem() -> GradedElement {
        tx().monomial(Atom::Dual(ze(0), true), Scalar::one(Field::Q)).unwrap()
    }

    /// Diagonal with two copies of the square-zero generator.
    fn tx_xx() -> HMatrix {
        let v = tview();
        HMatrix::from_rows(
            v,
            DegSeq::uniform(ze(0), 2),
            DegSeq::uniform(ze(0), 2),
            vec![vec![x_elem(), tx().zero()], vec![tx().zero(), x_elem()]],
        )
        .unwrap()
    }

    fn x_one() -> HMatrix {
        let v = tview();
        HMatrix::new(v, DegSeq::uniform(ze(0), 1), DegSeq::uniform(ze(0), 1), vec![x_elem()])
            .unwrap()
    }

    fn budget(depth: usize) -> SearchBudget {
        SearchBudget { depth, pad: 1, degree_ball: 1, node_cap: 50_000 }
    }

    fn first_nonfull(cert: &CertNode) -> Option<(&HMatrix, &FactorizationWitness)> {
        match cert {
            CertNode::NonFull { target, witness } => Some((target, witness)),
            CertNode::DetSum { left, right, .. } => {
                first_nonfull(left).or_else(|| first_nonfull(right))
            }
            _ => None,
        }
    }

    #[test]
    fn zero_product_diagonal_splits_into_thin_and_hollow_parts() {
        let t = tx_xx();
        let res = search_derivation(&t, &[], &budget(1)).unwrap();
        let SearchResult::Found(cert) = res else { panic!("expected a derivation") };
        assert_eq!(cert.depth(), 1);
        assert_eq!(cert.leaves(), 2);
        assert!(verify_derivation(&cert, &[]).unwrap());
    }

    #[test]
    fn orthogonal_idempotent_diagonal_derives_over_the_product_ring() {
        let v = RingView::plain(exf());
        let left = exf()
            .monomial(Atom::Side(0, Box::new(Atom::Deg(GroupElem::T(0)))), Scalar::one(Field::Q))
            .unwrap();
        let right = exf()
            .monomial(Atom::Side(1, Box::new(Atom::Deg(GroupElem::T(0)))), Scalar::one(Field::Q))
            .unwrap();
        let e = GroupElem::T(0);
        let t = HMatrix::from_rows(
            v,
            DegSeq::uniform(e.clone(), 2),
            DegSeq::uniform(e, 2),
            vec![vec![left, exf().zero()], vec![exf().zero(), right]],
        )
        .unwrap();
        let res = search_derivation(&t, &[], &budget(1)).unwrap();
        let SearchResult::Found(cert) = res else { panic!("expected a derivation") };
        assert!(verify_derivation(&cert, &[]).unwrap());
    }

    #[test]
    fn hand_built_decomposition_of_the_zero_product_diagonal_checks_out() {
        let v = tview();
        let e = ze(0);
        let one = tx().one();
        let zero = tx().zero();
        // thin summand: (x 0; 1 x) = (x; 1)(1 x)
        let thin = HMatrix::from_rows(
            v.clone(),
            DegSeq::uniform(e.clone(), 2),
            DegSeq::uniform(e.clone(), 2),
            vec![vec![x_elem(), zero.clone()], vec![one.clone(), x_elem()]],
        )
        .unwrap();
        let p = HMatrix::new(
            v.clone(),
            DegSeq::uniform(e.clone(), 2),
            DegSeq::uniform(e.clone(), 1),
            vec![x_elem(), one.clone()],
        )
        .unwrap();
        let q = HMatrix::new(
            v.clone(),
            DegSeq::uniform(e.clone(), 1),
            DegSeq::uniform(e.clone(), 2),
            vec![one.clone(), x_elem()],
        )
        .unwrap();
        let left = CertNode::NonFull { target: thin, witness: FactorizationWitness { p, q } };
        // hollow summand: (0 0; -1 x)
        let hollow_target = HMatrix::from_rows(
            v,
            DegSeq::uniform(e.clone(), 2),
            DegSeq::uniform(e, 2),
            vec![vec![zero.clone(), zero], vec![tx().neg(&one), x_elem()]],
        )
        .unwrap();
        let right = CertNode::Hollow { target: hollow_target, rows: vec![0], cols: vec![0, 1] };
        let node = cert_detsum(Axis::Col, 0, left, right).unwrap();
        assert_eq!(node.target(), &tx_xx());
        assert!(verify_derivation(&node, &[]).unwrap());
    }

    #[test]
    fn perturbed_witness_is_rejected_without_erroring() {
        let res = search_derivation(&tx_xx(), &[], &budget(1)).unwrap();
        let SearchResult::Found(cert) = res else { panic!("expected a derivation") };
        let (target, witness) = first_nonfull(&cert).expect("a thin leaf");
        let doubled = tx().scale(&Scalar::from_i64(Field::Q, 2), witness.q.entry(0, 0));
        let bad = CertNode::NonFull {
            target: target.clone(),
            witness: FactorizationWitness {
                p: witness.p.clone(),
                q: witness.q.with_entry(0, 0, doubled).unwrap(),
            },
        };
        assert_eq!(verify_derivation(&bad, &[]).unwrap(), false);

        let CertNode::DetSum { target, axis, line, left, right } = (*cert).clone() else {
            panic!("expected a determinantal sum at the root")
        };
        let shifted = tx().add(target.entry(0, 0), &tx().one());
        let bad_sum = CertNode::DetSum {
            target: target.with_entry(0, 0, shifted).unwrap(),
            axis,
            line,
            left,
            right,
        };
        assert_eq!(verify_derivation(&bad_sum, &[]).unwrap(), false);
    }

    #[test]
    fn malformed_certificates_error_rather_than_fail() {
        let t = tx_xx();
        let empty_pad = t.submatrix(&[], &[]).unwrap();
        let missing_gen = CertNode::Generator {
            target: t.clone(),
            index: 0,
            pad: empty_pad,
            row_perm: id_perm(2),
            col_perm: id_perm(2),
        };
        assert!(verify_derivation(&missing_gen, &[]).is_err());

        let small_block = CertNode::Hollow { target: t.clone(), rows: vec![0], cols: vec![1] };
        assert!(verify_derivation(&small_block, &[]).is_err());

        let v = tview();
        let z1 = HMatrix::zero(v.clone(), DegSeq::uniform(ze(0), 1), DegSeq::uniform(ze(0), 1));
        let tiny = CertNode::NonFull {
            target: z1.clone(),
            witness: FactorizationWitness {
                p: HMatrix::zero(v.clone(), DegSeq::uniform(ze(0), 1), DegSeq::new(vec![])),
                q: HMatrix::zero(v, DegSeq::new(vec![]), DegSeq::uniform(ze(0), 1)),
            },
        };
        assert!(verify_derivation(&tiny, &[]).unwrap());
        let res = search_derivation(&t, &[], &budget(1)).unwrap();
        let SearchResult::Found(big) = res else { panic!("expected a derivation") };
        let mismatched = CertNode::DetSum {
            target: t,
            axis: Axis::Col,
            line: 0,
            left: Box::new(tiny),
            right: big,
        };
        assert!(verify_derivation(&mismatched, &[]).is_err());
    }

    #[test]
    fn generator_occurrences_are_found_under_scattering() {
        let v = tview();
        let handle = MatrixIdealHandle::new(v.clone(), vec![x_one()], budget(1)).unwrap();
        let one = tx().one();
        let scattered = HMatrix::from_rows(
            v,
            DegSeq::uniform(ze(0), 2),
            DegSeq::uniform(ze(0), 2),
            vec![vec![one, tx().zero()], vec![tx().zero(), x_elem()]],
        )
        .unwrap();
        let out = handle.ideal_member(&scattered).unwrap();
        let MembershipOutcome::Member { pad, cert } = out else { panic!("expected membership") };
        assert_eq!(pad, 0);
        assert!(matches!(*cert, CertNode::Generator { index: 0, .. }));
        assert!(verify_derivation(&cert, handle.generators()).unwrap());
    }

    #[test]
    fn identity_padding_recovers_members_of_the_quotient() {
        let v = tview();
        let diag_x1 = HMatrix::from_rows(
            v.clone(),
            DegSeq::uniform(ze(0), 2),
            DegSeq::uniform(ze(0), 2),
            vec![vec![x_elem(), tx().zero()], vec![tx().zero(), tx().one()]],
        )
        .unwrap();
        let handle = MatrixIdealHandle::new(v, vec![diag_x1], budget(1)).unwrap();
        let out = handle.ideal_member(&x_one()).unwrap();
        let MembershipOutcome::Member { pad, cert } = out else { panic!("expected membership") };
        assert_eq!(pad, 1);
        assert!(verify_derivation(&cert, handle.generators()).unwrap());
    }

    #[test]
    fn nilpotent_misses_the_least_ideal_but_its_square_power_lands() {
        let mut b = budget(2);
        b.pad = 0;
        let handle = MatrixIdealHandle::least(tview(), b);
        match handle.ideal_member(&x_one()).unwrap() {
            MembershipOutcome::NotFound(miss) => assert!(miss.exhausted),
            MembershipOutcome::Member { .. } => panic!("a nonzero 1×1 slot cannot be derived"),
        }
        match handle.radical_member(&x_one(), 3).unwrap() {
            RadicalOutcome::Member { power, pad, cert } => {
                assert_eq!(power, 2);
                assert_eq!(pad, 0);
                assert!(verify_derivation(&cert, handle.generators()).unwrap());
            }
            RadicalOutcome::NotFound(_) => panic!("the doubled diagonal is derivable"),
        }
    }

    #[test]
    fn identity_resists_derivation_over_graded_fields() {
        for view in [RingView::plain(q2()), RingView::plain(sk())] {
            let mut b = budget(4);
            b.pad = 0;
            let i1 = HMatrix::identity(view.clone(), DegSeq::uniform(view.group().identity(), 1));
            match search_derivation(&i1, &[], &b).unwrap() {
                SearchResult::NotFound(miss) => assert!(miss.exhausted),
                SearchResult::Found(_) => panic!("an invertible matrix is never derivable here"),
            }
        }
    }

    #[test]
    fn existence_probe_distinguishes_product_rings_from_graded_fields() {
        let probe = existence_probe(&RingView::plain(exf()), &budget(1)).unwrap();
        assert!(probe.identity_obstruction.is_none());
        let cert = probe.fractions_obstruction.expect("orthogonal idempotents obstruct fractions");
        assert!(verify_derivation(&cert, &[]).unwrap());

        for view in [RingView::plain(q2()), RingView::plain(sk())] {
            let probe = existence_probe(&view, &budget(1)).unwrap();
            assert!(probe.identity_obstruction.is_none());
            assert!(probe.fractions_obstruction.is_none());
            assert!(probe.exhausted);
        }
    }

    #[test]
    fn search_honors_the_node_cap() {
        let b = SearchBudget { depth: 2, pad: 0, degree_ball: 1, node_cap: 5 };
        match search_derivation(&x_one(), &[], &b).unwrap() {
            SearchResult::NotFound(miss) => {
                assert!(!miss.exhausted);
                assert!(miss.nodes <= 5);
            }
            SearchResult::Found(_) => panic!("a nonzero 1×1 slot cannot be derived"),
        }
    }

    #[test]
    fn column_operation_preserves_derivability() {
        let res = search_derivation(&tx_xx(), &[], &budget(1)).unwrap();
        let SearchResult::Found(cert) = res else { panic!("expected a derivation") };
        let moved = cert_colop(&cert, 0, 1, &tx().one()).unwrap();
        let expected = HMatrix::from_rows(
            tview(),
            DegSeq::uniform(ze(0), 2),
            DegSeq::uniform(ze(0), 2),
            vec![vec![x_elem(), x_elem()], vec![tx().zero(), x_elem()]],
        )
        .unwrap();
        assert_eq!(moved.target(), &expected);
        assert!(verify_derivation(&moved, &[]).unwrap());
    }

    #[test]
    fn extraction_recovers_the_kept_summand() {
        let res = search_derivation(&tx_xx(), &[], &budget(1)).unwrap();
        let SearchResult::Found(cert) = res else { panic!("expected a derivation") };
        let v = tview();
        let e = ze(0);
        let discarded = HMatrix::from_rows(
            v,
            DegSeq::uniform(e.clone(), 2),
            DegSeq::uniform(e, 2),
            vec![vec![tx().zero(), tx().zero()], vec![tx().neg(&tx().one()), x_elem()]],
        )
        .unwrap();
        let witness = discarded.hollow_to_witness(&[0], &[0, 1]).unwrap();
        let kept = cert_extract_left(*cert, &discarded, &witness, Axis::Col, 0).unwrap();
        let expected = HMatrix::from_rows(
            tview(),
            DegSeq::uniform(ze(0), 2),
            DegSeq::uniform(ze(0), 2),
            vec![vec![x_elem(), tx().zero()], vec![tx().one(), x_elem()]],
        )
        .unwrap();
        assert_eq!(kept.target(), &expected);
        assert!(verify_derivation(&kept, &[]).unwrap());
    }

    #[test]
    fn padding_and_permuting_keep_certificates_valid() {
        let res = search_derivation(&tx_xx(), &[], &budget(1)).unwrap();
        let SearchResult::Found(cert) = res else { panic!("expected a derivation") };
        let pad = HMatrix::identity(tview(), DegSeq::uniform(ze(0), 1));
        let padded = cert_diagsum(&cert, &pad).unwrap();
        assert_eq!(padded.target().rows(), 3);
        assert!(verify_derivation(&padded, &[]).unwrap());

        let swapped = cert_perm(&cert, &[1, 0], &[1, 0]).unwrap();
        assert_eq!(swapped.target(), &tx_xx());
        assert!(verify_derivation(&swapped, &[]).unwrap());

        let rotated = cert_perm(&padded, &[2, 0, 1], &[1, 2, 0]).unwrap();
        assert_eq!(rotated.target(), &padded.target().permute(&[2, 0, 1], &[1, 2, 0]).unwrap());
        assert!(verify_derivation(&rotated, &[]).unwrap());
    }

    #[test]
    fn product_ideal_pairs_generators() {
        let v = tview();
        let h = MatrixIdealHandle::new(v, vec![x_one()], budget(1)).unwrap();
        let prod = h.product(&h).unwrap();
        assert_eq!(prod.generators().len(), 1);
        assert_eq!(prod.generators()[0], tx_xx());
        let out = prod.ideal_member(&tx_xx()).unwrap();
        let MembershipOutcome::Member { pad, .. } = out else { panic!("expected membership") };
        assert_eq!(pad, 0);
    }

    #[test]
    fn sampled_nonfull_matrices_have_depth_zero_derivations() {
        let view = RingView::plain(q2());
        let mut s = Sampler::new(0x6d1dea1);
        for _ in 0..20 {
            let n = 1 + s.usize(3);
            let a = s.nonfull(&view, n, n.saturating_sub(1));
            let res = search_derivation(&a, &[], &budget(0)).unwrap();
            let SearchResult::Found(cert) = res else { panic!("expected a depth-zero derivation") };
            assert_eq!(cert.depth(), 0);
            assert!(verify_derivation(&cert, &[]).unwrap());
            let alpha = s.degseq(view.group(), 1);
            let pad = HMatrix::identity(view.clone(), alpha);
            let padded = cert_diagsum(&cert, &pad).unwrap();
            assert!(verify_derivation(&padded, &[]).unwrap());
        }
    }
}
