//! Grading groups, their elements, degree sequences, and quotients.
//!
//! Three group shapes cover everything the ring catalog needs: finite
//! groups by multiplication table, finitely generated abelian groups
//! (a `moduli` vector, `0` marking a free ℤ factor), and binary direct
//! products. Quotients produce a [`Quotient`] handle that projects
//! parent elements onto a freshly built target group: coset tables for
//! finite parents, Smith normal form for abelian parents.

use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element does not belong to this group")]
    ForeignElement,
    #[error("subgroup data does not describe a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("quotients are not supported for this group shape")]
    UnsupportedQuotient,
    #[error("sequences have mismatched lengths")]
    LengthMismatch,
}

/// Internal shape of a [`Group`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupKind {
    /// Finite group: `mul[a][b]` is the product index, index 0 is the
    /// identity.
    Table {
        names: Vec<String>,
        mul: Vec<Vec<usize>>,
        inv: Vec<usize>,
    },
    /// Direct sum of cyclic groups; `moduli[i] == 0` means a free ℤ
    /// factor. Elements are coordinate vectors, stored reduced into
    /// `[0, m)` wherever `m > 0`.
    Abelian { moduli: Vec<u64> },
    /// Direct product of two groups.
    Product { left: Arc<Group>, right: Arc<Group> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Group {
    kind: GroupKind,
}

/// Element of a [`Group`]; the variant must match the group shape.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum GroupElem {
    T(usize),
    V(Vec<i64>),
    P(Box<GroupElem>, Box<GroupElem>),
}

impl Group {
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Trivial group with the single element `e`.
    pub fn trivial() -> Arc<Group> {
        Group::table(vec!["e"], vec![vec![0]]).expect("trivial table is valid")
    }

    /// Order-two group written multiplicatively as `{e, x}`.
    pub fn c2() -> Arc<Group> {
        Group::table(vec!["e", "x"], vec![vec![0, 1], vec![1, 0]]).expect("C2 table is valid")
    }

    /// Finite group from a multiplication table; index 0 must be the
    /// identity and every row/column a permutation (so inverses exist).
    pub fn table(names: Vec<&str>, mul: Vec<Vec<usize>>) -> Result<Arc<Group>, GroupError> {
        let n = names.len();
        let bad = |msg: &str| GroupError::NotSubgroup(msg.to_string());
        if n == 0 || mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(bad("table shape"));
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(bad("index 0 is not an identity"));
            }
            for b in 0..n {
                if mul[a][b] >= n {
                    return Err(bad("table entry out of range"));
                }
                if mul[a][b] == 0 {
                    inv[a] = b;
                }
            }
            if inv[a] == usize::MAX {
                return Err(bad("missing inverse"));
            }
        }
        // associativity, feasible at table sizes
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(bad("table is not associative"));
                    }
                }
            }
        }
        Ok(Arc::new(Group {
            kind: GroupKind::Table {
                names: names.into_iter().map(String::from).collect(),
                mul,
                inv,
            },
        }))
    }

    /// ℤ^k.
    pub fn free_abelian(rank: usize) -> Arc<Group> {
        Arc::new(Group {
            kind: GroupKind::Abelian {
                moduli: vec![0; rank],
            },
        })
    }

    /// ℤ, the grading group of Laurent and polynomial rings.
    pub fn z() -> Arc<Group> {
        Group::free_abelian(1)
    }

    pub fn abelian(moduli: Vec<u64>) -> Arc<Group> {
        Arc::new(Group {
            kind: GroupKind::Abelian { moduli },
        })
    }

    pub fn product(left: Arc<Group>, right: Arc<Group>) -> Arc<Group> {
        Arc::new(Group {
            kind: GroupKind::Product { left, right },
        })
    }

    pub fn identity(&self) -> GroupElem {
        match &self.kind {
            GroupKind::Table { .. } => GroupElem::T(0),
            GroupKind::Abelian { moduli } => GroupElem::V(vec![0; moduli.len()]),
            GroupKind::Product { left, right } => GroupElem::P(
                Box::new(left.identity()),
                Box::new(right.identity()),
            ),
        }
    }

    /// Reduce an abelian coordinate vector into canonical range.
    pub fn vec_elem(&self, coords: Vec<i64>) -> Result<GroupElem, GroupError> {
        match &self.kind {
            GroupKind::Abelian { moduli } if moduli.len() == coords.len() => {
                Ok(GroupElem::V(reduce_coords(coords, moduli)))
            }
            _ => Err(GroupError::ForeignElement),
        }
    }

    pub fn contains(&self, e: &GroupElem) -> bool {
        match (&self.kind, e) {
            (GroupKind::Table { names, .. }, GroupElem::T(i)) => *i < names.len(),
            (GroupKind::Abelian { moduli }, GroupElem::V(v)) => {
                v.len() == moduli.len()
                    && v.iter()
                        .zip(moduli)
                        .all(|(c, m)| *m == 0 || (0..*m as i64).contains(c))
            }
            (GroupKind::Product { left, right }, GroupElem::P(a, b)) => {
                left.contains(a) && right.contains(b)
            }
            _ => false,
        }
    }

    pub fn compose(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem, GroupError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(GroupError::ForeignElement);
        }
        Ok(self.comp(a, b))
    }

    pub fn inverse(&self, a: &GroupElem) -> Result<GroupElem, GroupError> {
        if !self.contains(a) {
            return Err(GroupError::ForeignElement);
        }
        Ok(self.inv(a))
    }

    /// Unchecked composition; callers guarantee membership.
    pub(crate) fn comp(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        match (&self.kind, a, b) {
            (GroupKind::Table { mul, .. }, GroupElem::T(i), GroupElem::T(j)) => {
                GroupElem::T(mul[*i][*j])
            }
            (GroupKind::Abelian { moduli }, GroupElem::V(u), GroupElem::V(v)) => GroupElem::V(
                reduce_coords(u.iter().zip(v).map(|(x, y)| x + y).collect(), moduli),
            ),
            (GroupKind::Product { left, right }, GroupElem::P(a1, a2), GroupElem::P(b1, b2)) => {
                GroupElem::P(Box::new(left.comp(a1, b1)), Box::new(right.comp(a2, b2)))
            }
            _ => panic!("group element shape mismatch"),
        }
    }

    pub(crate) fn inv(&self, a: &GroupElem) -> GroupElem {
        match (&self.kind, a) {
            (GroupKind::Table { inv, .. }, GroupElem::T(i)) => GroupElem::T(inv[*i]),
            (GroupKind::Abelian { moduli }, GroupElem::V(v)) => {
                GroupElem::V(reduce_coords(v.iter().map(|x| -x).collect(), moduli))
            }
            (GroupKind::Product { left, right }, GroupElem::P(a1, a2)) => {
                GroupElem::P(Box::new(left.inv(a1)), Box::new(right.inv(a2)))
            }
            _ => panic!("group element shape mismatch"),
        }
    }

    /// `a·b⁻¹`, the degree prescribed for entry `(i, j)` by sequences
    /// with `a = α_i`, `b = β_j`.
    pub(crate) fn ratio(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.comp(a, &self.inv(b))
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            GroupKind::Table { mul, .. } => {
                (0..mul.len()).all(|a| (0..mul.len()).all(|b| mul[a][b] == mul[b][a]))
            }
            GroupKind::Abelian { .. } => true,
            GroupKind::Product { left, right } => left.is_abelian() && right.is_abelian(),
        }
    }

    /// All elements, when the group is finite.
    pub fn elements(&self) -> Option<Vec<GroupElem>> {
        match &self.kind {
            GroupKind::Table { names, .. } => Some((0..names.len()).map(GroupElem::T).collect()),
            GroupKind::Abelian { moduli } => {
                if moduli.iter().any(|m| *m == 0) {
                    return None;
                }
                let mut out = vec![vec![]];
                for m in moduli {
                    out = out
                        .into_iter()
                        .flat_map(|v: Vec<i64>| {
                            (0..*m as i64).map(move |c| {
                                let mut w = v.clone();
                                w.push(c);
                                w
                            })
                        })
                        .collect();
                }
                Some(out.into_iter().map(GroupElem::V).collect())
            }
            GroupKind::Product { left, right } => {
                let (ls, rs) = (left.elements()?, right.elements()?);
                Some(
                    ls.iter()
                        .flat_map(|l| {
                            rs.iter()
                                .map(move |r| GroupElem::P(Box::new(l.clone()), Box::new(r.clone())))
                        })
                        .collect(),
                )
            }
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.elements().map(|e| e.len())
    }

    /// Finite slice of the group used by samplers and searches: all of a
    /// finite group, coordinates within `radius` of 0 on free factors.
    pub fn ball(&self, radius: i64) -> Vec<GroupElem> {
        match &self.kind {
            GroupKind::Table { names, .. } => (0..names.len()).map(GroupElem::T).collect(),
            GroupKind::Abelian { moduli } => {
                let mut out = vec![vec![]];
                for m in moduli {
                    let range: Vec<i64> = if *m == 0 {
                        (-radius..=radius).collect()
                    } else {
                        (0..*m as i64).collect()
                    };
                    out = out
                        .into_iter()
                        .flat_map(|v: Vec<i64>| {
                            range.iter().map(move |c| {
                                let mut w = v.clone();
                                w.push(*c);
                                w
                            })
                        })
                        .collect();
                }
                out.into_iter().map(GroupElem::V).collect()
            }
            GroupKind::Product { left, right } => left
                .ball(radius)
                .iter()
                .flat_map(|l| {
                    right
                        .ball(radius)
                        .into_iter()
                        .map(move |r| GroupElem::P(Box::new(l.clone()), Box::new(r)))
                })
                .collect(),
        }
    }

    pub fn fmt_elem(&self, e: &GroupElem) -> String {
        match (&self.kind, e) {
            (GroupKind::Table { names, .. }, GroupElem::T(i)) => names[*i].clone(),
            (GroupKind::Abelian { .. }, GroupElem::V(v)) => {
                if v.len() == 1 {
                    format!("{}", v[0])
                } else {
                    let mut s = String::from("(");
                    for (k, c) in v.iter().enumerate() {
                        if k > 0 {
                            s.push(',');
                        }
                        let _ = write!(s, "{c}");
                    }
                    s.push(')');
                    s
                }
            }
            (GroupKind::Product { left, right }, GroupElem::P(a, b)) => {
                format!("({},{})", left.fmt_elem(a), right.fmt_elem(b))
            }
            _ => "<foreign>".to_string(),
        }
    }

    /// Build the quotient by a normal subgroup.
    pub fn quotient(self: &Arc<Group>, omega: SubgroupSpec) -> Result<Arc<Quotient>, GroupError> {
        Quotient::new(self.clone(), omega)
    }
}

fn reduce_coords(coords: Vec<i64>, moduli: &[u64]) -> Vec<i64> {
    coords
        .into_iter()
        .zip(moduli)
        .map(|(c, m)| if *m == 0 { c } else { c.rem_euclid(*m as i64) })
        .collect()
}

/// Degree sequence attached to one side of a homogeneous matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DegSeq(Vec<GroupElem>);

impl DegSeq {
    pub fn new(v: Vec<GroupElem>) -> DegSeq {
        DegSeq(v)
    }

    pub fn uniform(d: GroupElem, len: usize) -> DegSeq {
        DegSeq(vec![d; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &GroupElem {
        &self.0[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElem> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[GroupElem] {
        &self.0
    }

    /// `ᾱ * β̄`, the sequence used by diagonal sums and block rows.
    pub fn concat(&self, other: &DegSeq) -> DegSeq {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        DegSeq(v)
    }

    /// Entrywise right translation `α_i ↦ α_i·d`.
    pub fn translate(&self, g: &Group, d: &GroupElem) -> Result<DegSeq, GroupError> {
        if !g.contains(d) || self.0.iter().any(|a| !g.contains(a)) {
            return Err(GroupError::ForeignElement);
        }
        Ok(DegSeq(self.0.iter().map(|a| g.comp(a, d)).collect()))
    }

    /// Entrywise inverse `α_i ↦ α_i⁻¹`, the flip used when transposing
    /// distributions.
    pub fn inverse_all(&self, g: &Group) -> Result<DegSeq, GroupError> {
        if self.0.iter().any(|a| !g.contains(a)) {
            return Err(GroupError::ForeignElement);
        }
        Ok(DegSeq(self.0.iter().map(|a| g.inv(a)).collect()))
    }

    pub fn select(&self, idx: &[usize]) -> DegSeq {
        DegSeq(idx.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl FromIterator<GroupElem> for DegSeq {
    fn from_iter<T: IntoIterator<Item = GroupElem>>(iter: T) -> Self {
        DegSeq(iter.into_iter().collect())
    }
}

/// How to carve a (normal) subgroup out of a parent group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    /// Ω = Γ; the quotient is trivial.
    Whole,
    /// For table groups: the member indices.
    TableSubset(Vec<usize>),
    /// For abelian groups: generating vectors of a sublattice (relations
    /// from the parent's own moduli are added automatically).
    Lattice(Vec<Vec<i64>>),
}

enum Projection {
    ToTrivial,
    Cosets { class_of: Vec<usize> },
    Linear {
        /// Rows of the unimodular transform kept after dropping modulus-1
        /// coordinates.
        rows: Vec<Vec<i64>>,
        moduli: Vec<u64>,
    },
}

/// A quotient Γ → Γ/Ω with a concrete target group and projection.
pub struct Quotient {
    parent: Arc<Group>,
    target: Arc<Group>,
    proj: Projection,
    spec: SubgroupSpec,
}

impl PartialEq for Quotient {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.spec == other.spec
    }
}
impl Eq for Quotient {}

impl std::fmt::Debug for Quotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Quotient")
            .field("parent", &self.parent)
            .field("spec", &self.spec)
            .finish()
    }
}

impl Quotient {
    fn new(parent: Arc<Group>, spec: SubgroupSpec) -> Result<Arc<Quotient>, GroupError> {
        let built = match (&spec, parent.kind()) {
            (SubgroupSpec::Whole, _) => (Group::trivial(), Projection::ToTrivial),
            (SubgroupSpec::TableSubset(subset), GroupKind::Table { names, mul, inv }) => {
                table_quotient(names, mul, inv, subset)?
            }
            (SubgroupSpec::Lattice(gens), GroupKind::Abelian { moduli }) => {
                abelian_quotient(moduli, gens)?
            }
            _ => return Err(GroupError::UnsupportedQuotient),
        };
        Ok(Arc::new(Quotient {
            parent,
            target: built.0,
            proj: built.1,
            spec,
        }))
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn project(&self, e: &GroupElem) -> Result<GroupElem, GroupError> {
        if !self.parent.contains(e) {
            return Err(GroupError::ForeignElement);
        }
        Ok(match (&self.proj, e) {
            (Projection::ToTrivial, _) => GroupElem::T(0),
            (Projection::Cosets { class_of }, GroupElem::T(i)) => GroupElem::T(class_of[*i]),
            (Projection::Linear { rows, moduli }, GroupElem::V(v)) => {
                let coords = rows
                    .iter()
                    .map(|r| r.iter().zip(v).map(|(a, x)| a * x).sum())
                    .collect();
                GroupElem::V(reduce_coords(coords, moduli))
            }
            _ => unreachable!("projection shape verified at construction"),
        })
    }
}

fn table_quotient(
    names: &[String],
    mul: &[Vec<usize>],
    inv: &[usize],
    subset: &[usize],
) -> Result<(Arc<Group>, Projection), GroupError> {
    let n = names.len();
    let mut member = vec![false; n];
    for &s in subset {
        if s >= n {
            return Err(GroupError::NotSubgroup("index out of range".into()));
        }
        member[s] = true;
    }
    if !member[0] {
        return Err(GroupError::NotSubgroup("missing identity".into()));
    }
    for &a in subset {
        if !member[inv[a]] {
            return Err(GroupError::NotSubgroup("not closed under inverse".into()));
        }
        for &b in subset {
            if !member[mul[a][b]] {
                return Err(GroupError::NotSubgroup("not closed under product".into()));
            }
        }
    }
    for g in 0..n {
        for &w in subset {
            if !member[mul[mul[g][w]][inv[g]]] {
                return Err(GroupError::NotNormal);
            }
        }
    }
    // left cosets, represented by their least member
    let mut rep = vec![usize::MAX; n];
    for g in 0..n {
        let r = subset.iter().map(|&w| mul[g][w]).min().unwrap();
        rep[g] = r;
    }
    let mut reps: Vec<usize> = (0..n).filter(|&g| rep[g] == g).collect();
    reps.sort_unstable();
    let class_index = |g: usize| reps.iter().position(|&r| r == rep[g]).unwrap();
    let class_of: Vec<usize> = (0..n).map(class_index).collect();
    let qn = reps.len();
    let qmul: Vec<Vec<usize>> = (0..qn)
        .map(|a| (0..qn).map(|b| class_of[mul[reps[a]][reps[b]]]).collect())
        .collect();
    let qnames: Vec<String> = reps.iter().map(|&r| format!("[{}]", names[r])).collect();
    let target = Group::table(qnames.iter().map(String::as_str).collect(), qmul)
        .expect("coset table inherits group laws");
    Ok((target, Projection::Cosets { class_of }))
}

fn abelian_quotient(
    moduli: &[u64],
    gens: &[Vec<i64>],
) -> Result<(Arc<Group>, Projection), GroupError> {
    let k = moduli.len();
    if gens.iter().any(|g| g.len() != k) {
        return Err(GroupError::NotSubgroup("generator length".into()));
    }
    // relation columns: the sublattice generators plus the parent moduli
    let mut cols: Vec<Vec<i64>> = gens.to_vec();
    for (i, m) in moduli.iter().enumerate() {
        if *m > 0 {
            let mut c = vec![0; k];
            c[i] = *m as i64;
            cols.push(c);
        }
    }
    let r = cols.len();
    let mut a = vec![vec![0i64; r]; k];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..k {
            a[i][j] = c[i];
        }
    }
    let (u, diag) = smith(&mut a, k, r);
    let mut rows = Vec::new();
    let mut out_moduli = Vec::new();
    for i in 0..k {
        let d = diag[i];
        if d == 1 {
            continue;
        }
        rows.push(u[i].clone());
        out_moduli.push(d);
    }
    if out_moduli.is_empty() {
        return Ok((Group::trivial(), Projection::ToTrivial));
    }
    let target = Group::abelian(out_moduli.clone());
    Ok((
        target,
        Projection::Linear {
            rows,
            moduli: out_moduli,
        },
    ))
}

/// Smith normal form of the k×r matrix `a` (destructive); returns the
/// unimodular row transform U (so U·a_original has the returned diagonal
/// up to column operations) and the per-row invariant factors (`0` on
/// free rows).
fn smith(a: &mut [Vec<i64>], k: usize, r: usize) -> (Vec<Vec<i64>>, Vec<u64>) {
    let mut u: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    let lim = k.min(r);
    for t in 0..lim {
        'pivot: loop {
            // smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..r {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..k {
                let q = div_round(a[i][t], a[t][t]);
                if q != 0 {
                    for j in 0..r {
                        a[i][j] -= q * a[t][j];
                    }
                    for j in 0..k {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..r {
                let q = div_round(a[t][j], a[t][t]);
                if q != 0 {
                    for i in 0..k {
                        a[i][j] -= q * a[i][t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // enforce the divisibility chain
            for i in t + 1..k {
                for j in t + 1..r {
                    if a[i][j] % a[t][t] != 0 {
                        for jj in 0..r {
                            a[t][jj] += a[i][jj];
                        }
                        for jj in 0..k {
                            u[t][jj] += u[i][jj];
                        }
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        if a[t][t] < 0 {
            for j in 0..r {
                a[t][j] = -a[t][j];
            }
            for j in 0..k {
                u[t][j] = -u[t][j];
            }
        }
    }
    let diag = (0..k)
        .map(|i| if i < lim { a[i][i] as u64 } else { 0 })
        .collect();
    (u, diag)
}

/// Division rounded to nearest, keeping remainders at most half the
/// divisor in magnitude.
fn div_round(a: i64, b: i64) -> i64 {
    let q = a / b;
    let rem = a - q * b;
    if 2 * rem.abs() > b.abs() {
        q + if (rem < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}
