//! Homogeneous matrices over a graded ring view.
//!
//! A matrix carries a row distribution ᾱ and a column distribution β̄ in
//! the view's grading group; the entry at (i, j) must be homogeneous of
//! degree α_i·β_j⁻¹. The validating constructor is the only way to build
//! one, so every arithmetic combination (product, diagonal sum,
//! determinantal sum, permutation, transposition-with-flip) re-derives
//! its distributions and stays inside the homogeneous world by
//! construction.

use crate::grp::{DegSeq, GroupElem};
use crate::ring::{GradedElement, Hom, HomDeg, RingError, RingView};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row},{col}) must be homogeneous of degree {expected}, found {found}")]
    Distribution { row: usize, col: usize, expected: String, found: String },
    #[error("matrices live over different ring views")]
    ViewMismatch,
    #[error("distributions do not match: {0}")]
    DistMismatch(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid permutation")]
    BadPermutation,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] crate::grp::GroupError),
}

/// Exhaustive zero-block search limit (2^n subsets are scanned).
const HOLLOW_EXACT_LIMIT: usize = 12;

#[derive(Clone, PartialEq, Debug)]
pub struct HMatrix {
    view: RingView,
    rows: usize,
    cols: usize,
    alpha: DegSeq,
    beta: DegSeq,
    /// Row-major entries.
    entries: Vec<GradedElement>,
}

impl HMatrix {
    /// Validating constructor: shapes, degree membership, and the
    /// homogeneity of every entry against α_i·β_j⁻¹ are all checked.
    pub fn new(
        view: RingView,
        alpha: DegSeq,
        beta: DegSeq,
        entries: Vec<GradedElement>,
    ) -> Result<HMatrix, MatError> {
        let rows = alpha.len();
        let cols = beta.len();
        if entries.len() != rows * cols {
            return Err(MatError::Shape(format!(
                "{}×{} needs {} entries, found {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let grp = view.group().clone();
        for d in alpha.iter().chain(beta.iter()) {
            if !grp.contains(d) {
                return Err(MatError::Shape("distribution degree outside the group".into()));
            }
        }
        let m = HMatrix { view, rows, cols, alpha, beta, entries };
        for i in 0..rows {
            for j in 0..cols {
                let e = m.entry(i, j);
                m.view.ring().check_element(e)?;
                let want = grp.ratio(m.alpha.get(i), m.beta.get(j));
                if !m.view.is_homogeneous_of(e, &want) {
                    let found = match m.view.hom_degree(e) {
                        HomDeg::Zero => "0".to_string(),
                        HomDeg::Of(d) => grp.fmt_elem(&d),
                        HomDeg::Mixed => "mixed".to_string(),
                    };
                    return Err(MatError::Distribution {
                        row: i,
                        col: j,
                        expected: grp.fmt_elem(&want),
                        found,
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(
        view: RingView,
        alpha: DegSeq,
        beta: DegSeq,
        rows: Vec<Vec<GradedElement>>,
    ) -> Result<HMatrix, MatError> {
        let flat: Vec<GradedElement> = rows.into_iter().flatten().collect();
        HMatrix::new(view, alpha, beta, flat)
    }

    /// Matrix of integer constants with all distributions at the
    /// identity degree.
    pub fn constants(view: RingView, grid: Vec<Vec<i64>>) -> Result<HMatrix, MatError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(MatError::Shape("ragged constant grid".into()));
        }
        let e = view.group().identity();
        let ring = view.ring().clone();
        let entries = grid.into_iter().flatten().map(|k| ring.int(k)).collect();
        HMatrix::new(view, DegSeq::uniform(e.clone(), rows), DegSeq::uniform(e, cols), entries)
    }

    pub fn identity(view: RingView, alpha: DegSeq) -> HMatrix {
        let n = alpha.len();
        let ring = view.ring().clone();
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        HMatrix { view, rows: n, cols: n, alpha: alpha.clone(), beta: alpha, entries }
    }

    pub fn zero(view: RingView, alpha: DegSeq, beta: DegSeq) -> HMatrix {
        let entries = vec![view.ring().zero(); alpha.len() * beta.len()];
        HMatrix { view, rows: alpha.len(), cols: beta.len(), alpha, beta, entries }
    }

    pub fn view(&self) -> &RingView {
        &self.view
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn alpha(&self) -> &DegSeq {
        &self.alpha
    }

    pub fn beta(&self) -> &DegSeq {
        &self.beta
    }

    pub fn entry(&self, i: usize, j: usize) -> &GradedElement {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<GradedElement> {
        (0..self.cols).map(|j| self.entry(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<GradedElement> {
        (0..self.rows).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Replace one entry, revalidating its degree.
    pub fn with_entry(&self, i: usize, j: usize, e: GradedElement) -> Result<HMatrix, MatError> {
        if i >= self.rows || j >= self.cols {
            return Err(MatError::Index(format!("({i},{j})")));
        }
        let mut entries = self.entries.clone();
        entries[i * self.cols + j] = e;
        HMatrix::new(self.view.clone(), self.alpha.clone(), self.beta.clone(), entries)
    }

    /// Select rows `ri` and columns `cj` (repetitions allowed).
    pub fn submatrix(&self, ri: &[usize], cj: &[usize]) -> Result<HMatrix, MatError> {
        if ri.iter().any(|&i| i >= self.rows) || cj.iter().any(|&j| j >= self.cols) {
            return Err(MatError::Index("submatrix selection".into()));
        }
        let entries = ri
            .iter()
            .flat_map(|&i| cj.iter().map(move |&j| self.entry(i, j).clone()))
            .collect();
        Ok(HMatrix {
            view: self.view.clone(),
            rows: ri.len(),
            cols: cj.len(),
            alpha: self.alpha.select(ri),
            beta: self.beta.select(cj),
            entries,
        })
    }

    pub fn add(&self, other: &HMatrix) -> Result<HMatrix, MatError> {
        self.require_same_dists(other)?;
        let ring = self.view.ring().clone();
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Ok(HMatrix { entries, ..self.clone() })
    }

    pub fn neg(&self) -> HMatrix {
        let ring = self.view.ring().clone();
        let entries = self.entries.iter().map(|e| ring.neg(e)).collect();
        HMatrix { entries, ..self.clone() }
    }

    /// `self · other`; the inner distributions must agree exactly.
    pub fn mat_mul(&self, other: &HMatrix) -> Result<HMatrix, MatError> {
        if self.view != other.view {
            return Err(MatError::ViewMismatch);
        }
        if self.beta != *other.alpha() {
            return Err(MatError::DistMismatch(
                "product needs the left column distribution to equal the right row distribution"
                    .into(),
            ));
        }
        let ring = self.view.ring().clone();
        let mut entries = vec![ring.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    acc = ring.add(&acc, &ring.mul(self.entry(i, k), other.entry(k, j)));
                }
                entries[i * other.cols + j] = acc;
            }
        }
        Ok(HMatrix {
            view: self.view.clone(),
            rows: self.rows,
            cols: other.cols,
            alpha: self.alpha.clone(),
            beta: other.beta.clone(),
            entries,
        })
    }

    /// Block-diagonal sum `A ⊕ B` (either side may be 0×0).
    pub fn diag_sum(&self, other: &HMatrix) -> Result<HMatrix, MatError> {
        if self.view != other.view {
            return Err(MatError::ViewMismatch);
        }
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let ring = self.view.ring().clone();
        let mut entries = vec![ring.zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[i * cols + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                entries[(self.rows + i) * cols + (self.cols + j)] = other.entry(i, j).clone();
            }
        }
        Ok(HMatrix {
            view: self.view.clone(),
            rows,
            cols,
            alpha: self.alpha.concat(&other.alpha),
            beta: self.beta.concat(&other.beta),
            entries,
        })
    }

    /// Determinantal sum over column `j`: both matrices must agree in
    /// every other column and in both distributions; column `j` is added.
    pub fn det_sum_col(&self, other: &HMatrix, j: usize) -> Result<HMatrix, MatError> {
        if self.view != other.view {
            return Err(MatError::ViewMismatch);
        }
        self.require_same_dists(other)?;
        if j >= self.cols {
            return Err(MatError::Index(format!("column {j}")));
        }
        for jj in 0..self.cols {
            if jj != j && (0..self.rows).any(|i| self.entry(i, jj) != other.entry(i, jj)) {
                return Err(MatError::DistMismatch(format!(
                    "determinantal sum requires agreement outside column {j}, found a difference in column {jj}"
                )));
            }
        }
        let ring = self.view.ring().clone();
        let mut entries = self.entries.clone();
        for i in 0..self.rows {
            entries[i * self.cols + j] = ring.add(self.entry(i, j), other.entry(i, j));
        }
        Ok(HMatrix { entries, ..self.clone() })
    }

    /// Determinantal sum over a row, routed through the
    /// transpose-with-flipped-distributions (so it is available exactly
    /// when the grading group is abelian).
    pub fn det_sum_row(&self, other: &HMatrix, i: usize) -> Result<HMatrix, MatError> {
        let a = self.transpose_flip()?;
        let b = other.transpose_flip()?;
        a.det_sum_col(&b, i)?.transpose_flip()
    }

    /// Transpose with distributions (β̄⁻¹, ᾱ⁻¹); requires an abelian
    /// grading group for the entry degrees to stay consistent.
    pub fn transpose_flip(&self) -> Result<HMatrix, MatError> {
        let grp = self.view.group().clone();
        if !grp.is_abelian() {
            return Err(MatError::Unsupported(
                "transpose with flipped distributions needs an abelian grading group".into(),
            ));
        }
        let mut entries = vec![self.view.ring().zero(); self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.entry(i, j).clone();
            }
        }
        Ok(HMatrix {
            view: self.view.clone(),
            rows: self.cols,
            cols: self.rows,
            alpha: self.beta.inverse_all(&grp)?,
            beta: self.alpha.inverse_all(&grp)?,
            entries,
        })
    }

    /// Reindex rows and columns: entry (i, j) of the result is entry
    /// (row_perm[i], col_perm[j]) of the original.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<HMatrix, MatError> {
        if !is_permutation(row_perm, self.rows) || !is_permutation(col_perm, self.cols) {
            return Err(MatError::BadPermutation);
        }
        self.submatrix(row_perm, col_perm)
    }

    /// Right-translate both distributions by `d`; the entry degrees
    /// α_i·d·(β_j·d)⁻¹ are unchanged, for any grading group.
    pub fn translate_dists(&self, d: &GroupElem) -> Result<HMatrix, MatError> {
        let grp = self.view.group().clone();
        Ok(HMatrix {
            alpha: self.alpha.translate(&grp, d)?,
            beta: self.beta.translate(&grp, d)?,
            ..self.clone()
        })
    }

    /// Multiply row `i` on the left by a homogeneous `c` of degree δ;
    /// the row degree becomes δ·α_i.
    pub fn scale_row(&self, i: usize, c: &GradedElement) -> Result<HMatrix, MatError> {
        if i >= self.rows {
            return Err(MatError::Index(format!("row {i}")));
        }
        let ring = self.view.ring().clone();
        let grp = self.view.group().clone();
        let HomDeg::Of(delta) = self.view.hom_degree(c) else {
            return Err(MatError::Unsupported("row scale needs a nonzero homogeneous scalar".into()));
        };
        let mut alpha: Vec<GroupElem> = self.alpha.iter().cloned().collect();
        alpha[i] = grp.comp(&delta, &alpha[i]);
        let mut entries = self.entries.clone();
        for j in 0..self.cols {
            entries[i * self.cols + j] = ring.mul(c, self.entry(i, j));
        }
        HMatrix::new(self.view.clone(), DegSeq::new(alpha), self.beta.clone(), entries)
    }

    /// Multiply column `j` on the right by a homogeneous `c` of degree
    /// δ; the column degree becomes δ⁻¹·β_j.
    pub fn scale_col(&self, j: usize, c: &GradedElement) -> Result<HMatrix, MatError> {
        if j >= self.cols {
            return Err(MatError::Index(format!("column {j}")));
        }
        let ring = self.view.ring().clone();
        let grp = self.view.group().clone();
        let HomDeg::Of(delta) = self.view.hom_degree(c) else {
            return Err(MatError::Unsupported(
                "column scale needs a nonzero homogeneous scalar".into(),
            ));
        };
        let mut beta: Vec<GroupElem> = self.beta.iter().cloned().collect();
        beta[j] = grp.comp(&grp.inv(&delta), &beta[j]);
        let mut entries = self.entries.clone();
        for i in 0..self.rows {
            entries[i * self.cols + j] = ring.mul(self.entry(i, j), c);
        }
        HMatrix::new(self.view.clone(), self.alpha.clone(), DegSeq::new(beta), entries)
    }

    /// row_dst += c·row_src with c homogeneous of degree
    /// α_dst·α_src⁻¹; distributions are unchanged.
    pub fn add_row_multiple(
        &self,
        src: usize,
        dst: usize,
        c: &GradedElement,
    ) -> Result<HMatrix, MatError> {
        if src >= self.rows || dst >= self.rows || src == dst {
            return Err(MatError::Index("row operation".into()));
        }
        let ring = self.view.ring().clone();
        let grp = self.view.group().clone();
        let want = grp.ratio(self.alpha.get(dst), self.alpha.get(src));
        if !self.view.is_homogeneous_of(c, &want) {
            return Err(MatError::Unsupported(
                "row-multiple coefficient has the wrong degree".into(),
            ));
        }
        let mut entries = self.entries.clone();
        for j in 0..self.cols {
            entries[dst * self.cols + j] =
                ring.add(self.entry(dst, j), &ring.mul(c, self.entry(src, j)));
        }
        Ok(HMatrix { entries, ..self.clone() })
    }

    /// col_dst += col_src·c with c homogeneous of degree
    /// β_src·β_dst⁻¹; distributions are unchanged.
    pub fn add_col_multiple(
        &self,
        src: usize,
        dst: usize,
        c: &GradedElement,
    ) -> Result<HMatrix, MatError> {
        if src >= self.cols || dst >= self.cols || src == dst {
            return Err(MatError::Index("column operation".into()));
        }
        let ring = self.view.ring().clone();
        let grp = self.view.group().clone();
        let want = grp.ratio(self.beta.get(src), self.beta.get(dst));
        if !self.view.is_homogeneous_of(c, &want) {
            return Err(MatError::Unsupported(
                "column-multiple coefficient has the wrong degree".into(),
            ));
        }
        let mut entries = self.entries.clone();
        for i in 0..self.rows {
            entries[i * self.cols + dst] =
                ring.add(self.entry(i, dst), &ring.mul(self.entry(i, src), c));
        }
        Ok(HMatrix { entries, ..self.clone() })
    }

    /// Apply a ring hom entrywise. Graded homs preserve the
    /// distributions; evaluation-style homs into a trivially graded
    /// target collapse them to the identity degree.
    pub fn map_hom(&self, f: &Hom) -> Result<HMatrix, MatError> {
        if self.view.ring() != f.source() {
            return Err(MatError::ViewMismatch);
        }
        let entries: Vec<GradedElement> = self.entries.iter().map(|e| f.apply(e)).collect();
        let target = RingView::plain(f.target().clone());
        let (alpha, beta) = if f.is_graded() {
            if self.view.quot().is_some() {
                return Err(MatError::Unsupported(
                    "graded image of a regraded view is not defined here".into(),
                ));
            }
            (self.alpha.clone(), self.beta.clone())
        } else {
            let e = target.group().identity();
            (DegSeq::uniform(e.clone(), self.rows), DegSeq::uniform(e, self.cols))
        };
        HMatrix::new(target, alpha, beta, entries)
    }

    /// Search for a zero block spanning rows I and columns J with
    /// |I| + |J| > n. Exhaustive for up to 2^`HOLLOW_EXACT_LIMIT` row
    /// subsets; the flag reports whether the search was exhaustive.
    pub fn find_hollow(&self) -> (Option<(Vec<usize>, Vec<usize>)>, bool) {
        if !self.is_square() || self.rows == 0 {
            return (None, true);
        }
        let n = self.rows;
        if n > HOLLOW_EXACT_LIMIT {
            return (None, false);
        }
        for mask in 1u32..(1 << n) {
            let rows: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let cols: Vec<usize> = (0..n)
                .filter(|&j| rows.iter().all(|&i| self.entry(i, j).is_zero()))
                .collect();
            if rows.len() + cols.len() > n {
                return (Some((rows, cols)), true);
            }
        }
        (None, true)
    }

    /// Turn a hollow block (rows I, cols J, |I| + |J| > n) into an
    /// explicit factorization through (n−|I|) + (n−|J|) < n columns.
    pub fn hollow_to_witness(
        &self,
        block_rows: &[usize],
        block_cols: &[usize],
    ) -> Result<FactorizationWitness, MatError> {
        if !self.is_square() {
            return Err(MatError::Shape("hollow factorization needs a square matrix".into()));
        }
        let n = self.rows;
        let r = block_rows.len();
        let s = block_cols.len();
        if r + s <= n {
            return Err(MatError::Shape("block too small: need |I| + |J| > n".into()));
        }
        for &i in block_rows {
            for &j in block_cols {
                if !self.entry(i, j).is_zero() {
                    return Err(MatError::Shape(format!("entry ({i},{j}) is not zero")));
                }
            }
        }
        // Row order: I first, complement after. Column order: complement
        // of J first, J last. In that layout A' = [[T, 0], [U, V]] and
        //   A' = [[T, 0], [0, I_{n−r}]] · [[I_{n−s}, 0], [U, V]]
        // with interface distribution λ = β'_{1..n−s} * α'_{r+1..n}.
        let row_perm = ordered_split(n, block_rows);
        let col_perm: Vec<usize> = {
            let mut v = ordered_split(n, block_cols);
            // complement first, block columns last
            v.rotate_left(s);
            v
        };
        let ap = self.permute(&row_perm, &col_perm)?;
        let ring = self.view.ring().clone();
        let k = 2 * n - r - s;
        let lambda = {
            let beta_head = ap.beta.select(&(0..n - s).collect::<Vec<_>>());
            let alpha_tail = ap.alpha.select(&(r..n).collect::<Vec<_>>());
            beta_head.concat(&alpha_tail)
        };
        let mut p_entries = vec![ring.zero(); n * k];
        let mut q_entries = vec![ring.zero(); k * n];
        for i in 0..r {
            for j in 0..n - s {
                p_entries[i * k + j] = ap.entry(i, j).clone();
            }
        }
        for i in 0..n - r {
            p_entries[(r + i) * k + (n - s + i)] = ring.one();
        }
        for j in 0..n - s {
            q_entries[j * n + j] = ring.one();
        }
        for i in 0..n - r {
            for j in 0..n {
                q_entries[(n - s + i) * n + j] = ap.entry(r + i, j).clone();
            }
        }
        let p_perm = HMatrix::new(self.view.clone(), ap.alpha.clone(), lambda.clone(), p_entries)?;
        let q_perm = HMatrix::new(self.view.clone(), lambda, ap.beta.clone(), q_entries)?;
        // Undo the permutations by scattering rows of P and columns of Q
        // back to their original positions.
        let p = p_perm.permute(&invert_permutation(&row_perm), &id_perm(k))?;
        let q = q_perm.permute(&id_perm(k), &invert_permutation(&col_perm))?;
        Ok(FactorizationWitness { p, q })
    }

    fn require_same_dists(&self, other: &HMatrix) -> Result<(), MatError> {
        if self.view != other.view {
            return Err(MatError::ViewMismatch);
        }
        if self.alpha != other.alpha || self.beta != other.beta {
            return Err(MatError::DistMismatch("distributions differ".into()));
        }
        Ok(())
    }

    pub fn fmt(&self) -> String {
        let ring = self.view.ring();
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> =
                    (0..self.cols).map(|j| ring.fmt_element(self.entry(i, j))).collect();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `A = P·Q` through fewer columns than A's size, witnessing that A is
/// not full for the graded rank.
#[derive(Clone, PartialEq, Debug)]
pub struct FactorizationWitness {
    pub p: HMatrix,
    pub q: HMatrix,
}

impl FactorizationWitness {
    pub fn interface(&self) -> usize {
        self.p.cols()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("malformed witness: {0}")]
    Malformed(String),
    #[error("witness factors do not multiply back to the target")]
    ProductMismatch,
}

/// Check that `w` proves `a` factors through fewer than `a.rows()`
/// columns: shape and distribution violations are malformed data, an
/// honest product mismatch is a verification failure.
pub fn verify_nonfull(a: &HMatrix, w: &FactorizationWitness) -> Result<(), WitnessError> {
    if w.p.view() != a.view() || w.q.view() != a.view() {
        return Err(WitnessError::Malformed("witness over a different ring view".into()));
    }
    if !a.is_square() {
        return Err(WitnessError::Malformed("target must be square".into()));
    }
    let n = a.rows();
    if w.p.rows() != n || w.q.cols() != n {
        return Err(WitnessError::Malformed("outer witness shape mismatch".into()));
    }
    if w.p.cols() != w.q.rows() {
        return Err(WitnessError::Malformed("inner witness shapes differ".into()));
    }
    if w.interface() >= n {
        return Err(WitnessError::Malformed(format!(
            "interface {} does not drop below {}",
            w.interface(),
            n
        )));
    }
    if w.p.alpha() != a.alpha() || w.q.beta() != a.beta() {
        return Err(WitnessError::Malformed("outer distributions differ from the target".into()));
    }
    if w.p.beta() != w.q.alpha() {
        return Err(WitnessError::Malformed("interface distributions differ".into()));
    }
    let prod = w.p.mat_mul(&w.q).map_err(|e| WitnessError::Malformed(e.to_string()))?;
    if prod == *a {
        Ok(())
    } else {
        Err(WitnessError::ProductMismatch)
    }
}

pub fn id_perm(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in p {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

pub fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    inv
}

/// Indices in `chosen` (in order), then the complement (in order).
fn ordered_split(n: usize, chosen: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = chosen.to_vec();
    v.extend((0..n).filter(|i| !chosen.contains(i)));
    v
}
