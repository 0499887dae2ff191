//! Graded rings with exact scalars, their elements, and graded ring
//! homomorphisms.
//!
//! A ring here is a free module over its coefficient [`Field`] on a set
//! of *atoms*, each atom carrying a degree in the grading group. The
//! supported constructions are group algebras (optionally with a support
//! restriction, e.g. polynomial inside Laurent), skew group rings whose
//! twist acts by complex conjugation, dual numbers `E[x]/(x²)` with `x`
//! central of trivial degree, binary direct products graded by a common
//! group, and degree lifts `D_γ = E_{[γ]}·γ` used when refining a
//! grading along a group quotient.
//!
//! Elements are plain atom→coefficient maps; all arithmetic goes through
//! `&GradedRing` methods, and matrix-level code revalidates membership
//! at its boundaries.

use crate::grp::{Group, GroupElem, GroupError, GroupKind, Quotient};
use crate::scalar::{Field, Scalar};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("atom does not belong to this ring")]
    ForeignAtom,
    #[error("scalar field mismatch: expected {expected}, found {found}")]
    WrongField { expected: Field, found: Field },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not a unit")]
    NotInvertible,
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    #[error("homomorphism endpoints do not match: {0}")]
    HomMismatch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Basis monomial of a graded ring; the variant must match the ring
/// construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// `u_γ` in a group algebra or skew group ring.
    Deg(GroupElem),
    /// `u_γ·x^f` in a dual-numbers ring (`f` marks the `x` factor).
    Dual(GroupElem, bool),
    /// Component atom of a direct product (`0` = left, `1` = right).
    Side(u8, Box<Atom>),
    /// `γ·a` in a degree lift, tagging a base atom with a parent degree.
    Mono(GroupElem, Box<Atom>),
}

/// Ring element: finitely many atoms with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct GradedElement {
    terms: BTreeMap<Atom, Scalar>,
}

impl GradedElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, atom: Atom, s: &Scalar) {
        match self.terms.get_mut(&atom) {
            Some(existing) => {
                let sum = &*existing + s;
                if sum.is_zero() {
                    self.terms.remove(&atom);
                } else {
                    *existing = sum;
                }
            }
            None => {
                if !s.is_zero() {
                    self.terms.insert(atom, s.clone());
                }
            }
        }
    }
}

/// Support restriction on a group algebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SupportRule {
    All,
    /// Only non-negative degrees (ℤ-graded subring such as ℚ[t] ⊆ ℚ[t,t⁻¹]).
    NonNegative,
}

impl SupportRule {
    fn allows(&self, d: &GroupElem) -> bool {
        match self {
            SupportRule::All => true,
            SupportRule::NonNegative => matches!(d, GroupElem::V(v) if v.len() == 1 && v[0] >= 0),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum RingKind {
    GroupAlgebra { support: SupportRule },
    /// Skew group algebra over a finite group; `action[g]` marks the
    /// elements acting by complex conjugation on coefficients.
    SkewGroup { action: Vec<bool> },
    /// Base group algebra extended by a central `x` with `x² = 0` and
    /// trivial degree.
    Dual,
    Product { left: Arc<GradedRing>, right: Arc<GradedRing> },
    /// `D_γ = E_{[γ]}·γ` inside `E[Γ]` for a Γ/Ω-graded base `E`.
    Lift { base: Box<RingView>, quot: Arc<Quotient> },
}

#[derive(Clone, PartialEq, Debug)]
pub struct GradedRing {
    name: String,
    group: Arc<Group>,
    field: Field,
    kind: RingKind,
    graded_division: bool,
}

/// ℚ[C2], a commutative graded field on `{1, x}`.
pub fn q2() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "Q2".into(),
        group: Group::c2(),
        field: Field::Q,
        kind: RingKind::GroupAlgebra { support: SupportRule::All },
        graded_division: true,
    })
}

/// ℚ[t,t⁻¹], the ℤ-graded Laurent ring (a graded field).
pub fn ql() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "QL".into(),
        group: Group::z(),
        field: Field::Q,
        kind: RingKind::GroupAlgebra { support: SupportRule::All },
        graded_division: true,
    })
}

/// ℚ[t] with its ℤ-grading (support in ℕ; not a graded division ring).
pub fn qp() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "QP".into(),
        group: Group::z(),
        field: Field::Q,
        kind: RingKind::GroupAlgebra { support: SupportRule::NonNegative },
        graded_division: false,
    })
}

/// ℚ(i)[C2;σ] where the nontrivial degree conjugates coefficients:
/// `x·c = c̄·x`. A noncommutative graded division ring.
pub fn sk() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "SK".into(),
        group: Group::c2(),
        field: Field::Qi,
        kind: RingKind::SkewGroup { action: vec![false, true] },
        graded_division: true,
    })
}

/// ℚ[t,t⁻¹][x]/(x²) with `x` central of degree 0; graded local but not
/// a graded division ring.
pub fn tx() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "TX".into(),
        group: Group::z(),
        field: Field::Q,
        kind: RingKind::Dual,
        graded_division: false,
    })
}

/// ℚ[C2] × ℚ[C2] graded diagonally by C2.
pub fn exf() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "EXF".into(),
        group: Group::c2(),
        field: Field::Q,
        kind: RingKind::Product { left: q2(), right: q2() },
        graded_division: false,
    })
}

/// ℚ as a trivially graded field.
pub fn rat() -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: "QQ".into(),
        group: Group::trivial(),
        field: Field::Q,
        kind: RingKind::GroupAlgebra { support: SupportRule::All },
        graded_division: true,
    })
}

/// Group algebra of an arbitrary group over an arbitrary field.
pub fn group_algebra(name: &str, group: Arc<Group>, field: Field) -> Arc<GradedRing> {
    Arc::new(GradedRing {
        name: name.into(),
        group,
        field,
        kind: RingKind::GroupAlgebra { support: SupportRule::All },
        graded_division: true,
    })
}

/// Lift of a Γ/Ω-graded base ring back to a Γ-grading: the component of
/// degree γ is `E_{[γ]}·γ`. The lift is flagged a graded division ring
/// only when the base view is an honest (un-regraded) graded division
/// ring.
pub fn lift_ring(
    name: &str,
    base: RingView,
    quot: Arc<Quotient>,
) -> Result<Arc<GradedRing>, RingError> {
    if base.group() != quot.target() {
        return Err(RingError::Unsupported(
            "lift base must be graded by the quotient target".into(),
        ));
    }
    let graded_division = base.quot.is_none() && base.ring.graded_division;
    Ok(Arc::new(GradedRing {
        name: name.into(),
        group: quot.parent().clone(),
        field: base.ring.field,
        kind: RingKind::Lift { base: Box::new(base), quot },
        graded_division,
    }))
}

/// Degree shape of an element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HomDeg {
    /// The zero element, homogeneous of every degree.
    Zero,
    Of(GroupElem),
    Mixed,
}

impl GradedRing {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn is_graded_division(&self) -> bool {
        self.graded_division
    }

    pub fn is_commutative(&self) -> bool {
        match &self.kind {
            RingKind::GroupAlgebra { .. } => self.group.is_abelian(),
            RingKind::SkewGroup { action } => {
                self.group.is_abelian() && action.iter().all(|conj| !conj)
            }
            // the dual variable is central and the coefficients commute
            RingKind::Dual => self.group.is_abelian(),
            RingKind::Product { left, right } => left.is_commutative() && right.is_commutative(),
            RingKind::Lift { base, .. } => base.ring().is_commutative(),
        }
    }

    /// Conservative syntactic test for the absence of zero divisors:
    /// true exactly for group algebras of torsion-free abelian (or
    /// trivial) groups over a field, which covers the polynomial and
    /// Laurent rings of the catalog.
    pub fn is_integral_domain(&self) -> bool {
        if !matches!(self.kind, RingKind::GroupAlgebra { .. }) {
            return false;
        }
        match self.group.kind() {
            GroupKind::Table { .. } => self.group.order() == Some(1),
            GroupKind::Abelian { moduli } => moduli.iter().all(|&m| m == 0),
            GroupKind::Product { .. } => false,
        }
    }

    pub fn zero(&self) -> GradedElement {
        GradedElement::default()
    }

    pub fn one(&self) -> GradedElement {
        let mut out = GradedElement::default();
        for atom in self.one_atoms() {
            out.insert_add(atom, &Scalar::one(self.field));
        }
        out
    }

    fn one_atoms(&self) -> Vec<Atom> {
        match &self.kind {
            RingKind::GroupAlgebra { .. } | RingKind::SkewGroup { .. } => {
                vec![Atom::Deg(self.group.identity())]
            }
            RingKind::Dual => vec![Atom::Dual(self.group.identity(), false)],
            RingKind::Product { left, right } => {
                let mut v: Vec<Atom> = left
                    .one_atoms()
                    .into_iter()
                    .map(|a| Atom::Side(0, Box::new(a)))
                    .collect();
                v.extend(right.one_atoms().into_iter().map(|a| Atom::Side(1, Box::new(a))));
                v
            }
            RingKind::Lift { base, .. } => base
                .ring
                .one_atoms()
                .into_iter()
                .map(|a| Atom::Mono(self.group.identity(), Box::new(a)))
                .collect(),
        }
    }

    /// Single-term element `s·atom`.
    pub fn monomial(&self, atom: Atom, s: Scalar) -> Result<GradedElement, RingError> {
        let mut e = GradedElement::default();
        e.insert_add(atom, &s);
        self.check_element(&e)?;
        Ok(e)
    }

    pub fn from_terms(&self, terms: Vec<(Atom, Scalar)>) -> Result<GradedElement, RingError> {
        let mut e = GradedElement::default();
        for (a, s) in terms {
            e.insert_add(a, &s);
        }
        self.check_element(&e)?;
        Ok(e)
    }

    /// Integer multiple of 1.
    pub fn int(&self, n: i64) -> GradedElement {
        self.scale(&Scalar::from_i64(self.field, n), &self.one())
    }

    pub fn add(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let mut out = a.clone();
        for (atom, s) in b.terms() {
            out.insert_add(atom.clone(), s);
        }
        out
    }

    pub fn neg(&self, a: &GradedElement) -> GradedElement {
        let mut out = GradedElement::default();
        for (atom, s) in a.terms() {
            out.terms.insert(atom.clone(), -s);
        }
        out
    }

    pub fn sub(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, s: &Scalar, a: &GradedElement) -> GradedElement {
        let mut out = GradedElement::default();
        if s.is_zero() {
            return out;
        }
        for (atom, c) in a.terms() {
            out.insert_add(atom.clone(), &(s * c));
        }
        out
    }

    pub fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let mut out = GradedElement::default();
        for (aa, ca) in a.terms() {
            for (ab, cb) in b.terms() {
                if let Some((atom, c)) = self.term_mul(aa, ca, ab, cb) {
                    out.insert_add(atom, &c);
                }
            }
        }
        out
    }

    /// Product of two basis terms; `None` when the product vanishes
    /// structurally (x² in dual numbers, mismatched product components).
    fn term_mul(&self, aa: &Atom, ca: &Scalar, ab: &Atom, cb: &Scalar) -> Option<(Atom, Scalar)> {
        match (&self.kind, aa, ab) {
            (RingKind::GroupAlgebra { .. }, Atom::Deg(g), Atom::Deg(h)) => {
                Some((Atom::Deg(self.group.comp(g, h)), ca * cb))
            }
            (RingKind::SkewGroup { action }, Atom::Deg(g), Atom::Deg(h)) => {
                let GroupElem::T(gi) = g else { panic!("skew group atom shape") };
                let twisted = if action[*gi] { cb.conj() } else { cb.clone() };
                Some((Atom::Deg(self.group.comp(g, h)), ca * &twisted))
            }
            (RingKind::Dual, Atom::Dual(g, f), Atom::Dual(h, e)) => {
                if *f && *e {
                    return None;
                }
                Some((Atom::Dual(self.group.comp(g, h), *f || *e), ca * cb))
            }
            (RingKind::Product { left, right }, Atom::Side(s, ia), Atom::Side(t, ib)) => {
                if s != t {
                    return None;
                }
                let side = if *s == 0 { left } else { right };
                let (atom, c) = side.term_mul(ia, ca, ib, cb)?;
                Some((Atom::Side(*s, Box::new(atom)), c))
            }
            (RingKind::Lift { base, .. }, Atom::Mono(g, ia), Atom::Mono(h, ib)) => {
                let (atom, c) = base.ring.term_mul(ia, ca, ib, cb)?;
                Some((Atom::Mono(self.group.comp(g, h), Box::new(atom)), c))
            }
            _ => panic!("atom shape does not match ring construction"),
        }
    }

    /// Degree of a single atom in the ring's own grading group.
    pub fn atom_degree(&self, atom: &Atom) -> GroupElem {
        match (&self.kind, atom) {
            (RingKind::GroupAlgebra { .. } | RingKind::SkewGroup { .. }, Atom::Deg(g)) => g.clone(),
            (RingKind::Dual, Atom::Dual(g, _)) => g.clone(),
            // product components share the grading group
            (RingKind::Product { left, right }, Atom::Side(s, inner)) => {
                if *s == 0 { left.atom_degree(inner) } else { right.atom_degree(inner) }
            }
            (RingKind::Lift { .. }, Atom::Mono(g, _)) => g.clone(),
            _ => panic!("atom shape does not match ring construction"),
        }
    }

    /// `Zero`, a single degree, or `Mixed`.
    pub fn hom_degree(&self, e: &GradedElement) -> HomDeg {
        let mut it = e.terms();
        let Some((first, _)) = it.next() else { return HomDeg::Zero };
        let d = self.atom_degree(first);
        for (a, _) in it {
            if self.atom_degree(a) != d {
                return HomDeg::Mixed;
            }
        }
        HomDeg::Of(d)
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, e: &GradedElement, d: &GroupElem) -> bool {
        match self.hom_degree(e) {
            HomDeg::Zero => true,
            HomDeg::Of(actual) => actual == *d,
            HomDeg::Mixed => false,
        }
    }

    /// Validate atom shapes, group membership, support, and scalar field.
    pub fn check_element(&self, e: &GradedElement) -> Result<(), RingError> {
        for (atom, s) in e.terms() {
            if s.field() != self.field {
                return Err(RingError::WrongField { expected: self.field, found: s.field() });
            }
            self.check_atom(atom)?;
        }
        Ok(())
    }

    fn check_atom(&self, atom: &Atom) -> Result<(), RingError> {
        match (&self.kind, atom) {
            (RingKind::GroupAlgebra { support }, Atom::Deg(g)) => {
                if self.group.contains(g) && support.allows(g) {
                    Ok(())
                } else {
                    Err(RingError::ForeignAtom)
                }
            }
            (RingKind::SkewGroup { action }, Atom::Deg(g)) => match g {
                GroupElem::T(i) if *i < action.len() && self.group.contains(g) => Ok(()),
                _ => Err(RingError::ForeignAtom),
            },
            (RingKind::Dual, Atom::Dual(g, _)) => {
                if self.group.contains(g) {
                    Ok(())
                } else {
                    Err(RingError::ForeignAtom)
                }
            }
            (RingKind::Product { left, right }, Atom::Side(s, inner)) => match s {
                0 => left.check_atom(inner),
                1 => right.check_atom(inner),
                _ => Err(RingError::ForeignAtom),
            },
            (RingKind::Lift { base, quot }, Atom::Mono(g, inner)) => {
                if !self.group.contains(g) {
                    return Err(RingError::ForeignAtom);
                }
                base.ring.check_atom(inner)?;
                // the inner atom must sit in the component matched to g
                let class = quot.project(g)?;
                if base.atom_degree_in_view(inner) == class {
                    Ok(())
                } else {
                    Err(RingError::ForeignAtom)
                }
            }
            _ => Err(RingError::ForeignAtom),
        }
    }

    /// All basis atoms of one degree (finite for every catalog ring; a
    /// degree-ball cutoff bounds the enumeration inside lift bases).
    pub fn basis_atoms_of_degree(&self, d: &GroupElem) -> Vec<Atom> {
        match &self.kind {
            RingKind::GroupAlgebra { support } => {
                if self.group.contains(d) && support.allows(d) {
                    vec![Atom::Deg(d.clone())]
                } else {
                    vec![]
                }
            }
            RingKind::SkewGroup { .. } => {
                if self.group.contains(d) {
                    vec![Atom::Deg(d.clone())]
                } else {
                    vec![]
                }
            }
            RingKind::Dual => {
                if self.group.contains(d) {
                    vec![Atom::Dual(d.clone(), false), Atom::Dual(d.clone(), true)]
                } else {
                    vec![]
                }
            }
            RingKind::Product { left, right } => {
                let mut v: Vec<Atom> = left
                    .basis_atoms_of_degree(d)
                    .into_iter()
                    .map(|a| Atom::Side(0, Box::new(a)))
                    .collect();
                v.extend(
                    right
                        .basis_atoms_of_degree(d)
                        .into_iter()
                        .map(|a| Atom::Side(1, Box::new(a))),
                );
                v
            }
            RingKind::Lift { base, quot } => {
                if !self.group.contains(d) {
                    return vec![];
                }
                let Ok(class) = quot.project(d) else { return vec![] };
                base.basis_atoms_of_class(&class, 2)
                    .into_iter()
                    .map(|a| Atom::Mono(d.clone(), Box::new(a)))
                    .collect()
            }
        }
    }

    /// Two-sided inverse of a homogeneous unit. The candidate is built
    /// per construction and then certified by multiplying back, so a
    /// non-unit (zero, a zero divisor component, a dual-number with
    /// nilpotent part only, a support violation) reports
    /// [`RingError::NotInvertible`].
    pub fn invert_homogeneous(&self, e: &GradedElement) -> Result<GradedElement, RingError> {
        if e.is_zero() {
            return Err(RingError::NotInvertible);
        }
        let HomDeg::Of(d) = self.hom_degree(e) else {
            return Err(RingError::NotHomogeneous);
        };
        let candidate = self.inverse_candidate(e, &d)?;
        self.check_element(&candidate)?;
        let one = self.one();
        if self.mul(e, &candidate) == one && self.mul(&candidate, e) == one {
            Ok(candidate)
        } else {
            Err(RingError::NotInvertible)
        }
    }

    fn inverse_candidate(
        &self,
        e: &GradedElement,
        d: &GroupElem,
    ) -> Result<GradedElement, RingError> {
        let dinv = self.group.inv(d);
        match &self.kind {
            RingKind::GroupAlgebra { support } => {
                if !support.allows(&dinv) {
                    return Err(RingError::NotInvertible);
                }
                let (_, c) = e.terms().next().expect("nonzero");
                let ci = c.inv().ok_or(RingError::NotInvertible)?;
                let mut out = GradedElement::default();
                out.insert_add(Atom::Deg(dinv), &ci);
                Ok(out)
            }
            RingKind::SkewGroup { action } => {
                let (_, c) = e.terms().next().expect("nonzero");
                let ci = c.inv().ok_or(RingError::NotInvertible)?;
                let GroupElem::T(di) = d else { panic!("skew group atom shape") };
                let coeff = if action[*di] { ci.conj() } else { ci };
                let mut out = GradedElement::default();
                out.insert_add(Atom::Deg(dinv), &coeff);
                Ok(out)
            }
            RingKind::Dual => {
                // (c + d·x)t^γ inverts to (c⁻¹ − c⁻²d·x)t^{-γ} when c ≠ 0
                let mut c = Scalar::zero(self.field);
                let mut dx = Scalar::zero(self.field);
                for (atom, s) in e.terms() {
                    let Atom::Dual(_, flag) = atom else { unreachable!() };
                    if *flag {
                        dx = s.clone();
                    } else {
                        c = s.clone();
                    }
                }
                let ci = c.inv().ok_or(RingError::NotInvertible)?;
                let mut out = GradedElement::default();
                out.insert_add(Atom::Dual(dinv.clone(), false), &ci);
                out.insert_add(Atom::Dual(dinv, true), &-&(&(&ci * &ci) * &dx));
                Ok(out)
            }
            RingKind::Product { left, right } => {
                let (l, r) = split_product(e);
                let li = left.invert_homogeneous(&l).map_err(|_| RingError::NotInvertible)?;
                let ri = right.invert_homogeneous(&r).map_err(|_| RingError::NotInvertible)?;
                Ok(join_product(&li, &ri))
            }
            RingKind::Lift { base, .. } => {
                let mut inner = GradedElement::default();
                for (atom, s) in e.terms() {
                    let Atom::Mono(_, ia) = atom else { unreachable!() };
                    inner.insert_add(ia.as_ref().clone(), s);
                }
                let ii = base
                    .ring
                    .invert_homogeneous(&inner)
                    .map_err(|_| RingError::NotInvertible)?;
                let mut out = GradedElement::default();
                for (atom, s) in ii.terms() {
                    out.insert_add(Atom::Mono(dinv.clone(), Box::new(atom.clone())), s);
                }
                Ok(out)
            }
        }
    }

    /// Human-readable rendering; atoms are named per construction.
    pub fn fmt_element(&self, e: &GradedElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        if let RingKind::Product { left, right } = &self.kind {
            let (l, r) = split_product(e);
            return format!("({}, {})", left.fmt_element(&l), right.fmt_element(&r));
        }
        let mut parts = Vec::new();
        for (atom, s) in e.terms() {
            let name = self.fmt_atom(atom);
            let cs = format!("{s}");
            let coeff = if cs.contains(['+', '-']) && !cs.starts_with('-') || cs.contains('i') {
                format!("({cs})")
            } else {
                cs
            };
            parts.push(if name == "1" {
                coeff
            } else if coeff == "1" {
                name
            } else {
                format!("{coeff}·{name}")
            });
        }
        parts.join(" + ")
    }

    fn fmt_atom(&self, atom: &Atom) -> String {
        match (&self.kind, atom) {
            (RingKind::GroupAlgebra { .. } | RingKind::SkewGroup { .. }, Atom::Deg(g)) => {
                self.fmt_monomial(g)
            }
            (RingKind::Dual, Atom::Dual(g, f)) => {
                let base = self.fmt_monomial(g);
                match (base.as_str(), f) {
                    (_, false) => base,
                    ("1", true) => "x".to_string(),
                    (_, true) => format!("{base}·x"),
                }
            }
            (RingKind::Lift { base, .. }, Atom::Mono(g, inner)) => {
                format!("⟨{}|{}⟩", self.group.fmt_elem(g), base.ring.fmt_atom(inner))
            }
            _ => "?".to_string(),
        }
    }

    fn fmt_monomial(&self, g: &GroupElem) -> String {
        match g {
            GroupElem::T(_) => {
                let n = self.group.fmt_elem(g);
                if n == "e" { "1".to_string() } else { n }
            }
            GroupElem::V(v) if v.len() == 1 => match v[0] {
                0 => "1".to_string(),
                1 => "t".to_string(),
                n => format!("t^{n}"),
            },
            other => {
                let mut s = String::from("t^");
                let _ = write!(s, "{}", self.group.fmt_elem(other));
                s
            }
        }
    }
}

/// Split a product-ring element into its two component elements.
pub fn split_product(e: &GradedElement) -> (GradedElement, GradedElement) {
    let mut l = GradedElement::default();
    let mut r = GradedElement::default();
    for (atom, s) in e.terms() {
        let Atom::Side(side, inner) = atom else { panic!("not a product atom") };
        let target = if *side == 0 { &mut l } else { &mut r };
        target.insert_add(inner.as_ref().clone(), s);
    }
    (l, r)
}

/// Assemble a product-ring element from component elements.
pub fn join_product(l: &GradedElement, r: &GradedElement) -> GradedElement {
    let mut out = GradedElement::default();
    for (atom, s) in l.terms() {
        out.insert_add(Atom::Side(0, Box::new(atom.clone())), s);
    }
    for (atom, s) in r.terms() {
        out.insert_add(Atom::Side(1, Box::new(atom.clone())), s);
    }
    out
}

/// A ring together with an optional regrading along a group quotient.
/// Quotient views share the underlying element representation; only the
/// degree bookkeeping changes.
#[derive(Clone, PartialEq, Debug)]
pub struct RingView {
    ring: Arc<GradedRing>,
    quot: Option<Arc<Quotient>>,
}

impl RingView {
    pub fn plain(ring: Arc<GradedRing>) -> RingView {
        RingView { ring, quot: None }
    }

    pub fn regraded(ring: Arc<GradedRing>, quot: Arc<Quotient>) -> Result<RingView, RingError> {
        if quot.parent() != ring.group() {
            return Err(RingError::Unsupported(
                "quotient parent must be the ring's grading group".into(),
            ));
        }
        Ok(RingView { ring, quot: Some(quot) })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn quot(&self) -> Option<&Arc<Quotient>> {
        self.quot.as_ref()
    }

    /// Effective grading group of the view.
    pub fn group(&self) -> &Arc<Group> {
        match &self.quot {
            Some(q) => q.target(),
            None => self.ring.group(),
        }
    }

    pub fn atom_degree_in_view(&self, atom: &Atom) -> GroupElem {
        let d = self.ring.atom_degree(atom);
        match &self.quot {
            Some(q) => q.project(&d).expect("atom degree lies in the parent group"),
            None => d,
        }
    }

    pub fn hom_degree(&self, e: &GradedElement) -> HomDeg {
        let mut it = e.terms();
        let Some((first, _)) = it.next() else { return HomDeg::Zero };
        let d = self.atom_degree_in_view(first);
        for (a, _) in it {
            if self.atom_degree_in_view(a) != d {
                return HomDeg::Mixed;
            }
        }
        HomDeg::Of(d)
    }

    pub fn is_homogeneous_of(&self, e: &GradedElement, d: &GroupElem) -> bool {
        match self.hom_degree(e) {
            HomDeg::Zero => true,
            HomDeg::Of(actual) => actual == *d,
            HomDeg::Mixed => false,
        }
    }

    /// Base-ring atoms whose view degree equals `class`, enumerated over
    /// a bounded ball of base degrees.
    pub fn basis_atoms_of_class(&self, class: &GroupElem, radius: i64) -> Vec<Atom> {
        match &self.quot {
            None => self.ring.basis_atoms_of_degree(class),
            Some(q) => {
                let mut out = Vec::new();
                for d in self.ring.group().ball(radius) {
                    if q.project(&d).expect("ball stays in the group") == *class {
                        out.extend(self.ring.basis_atoms_of_degree(&d));
                    }
                }
                out
            }
        }
    }
}

/// Named graded (or trivially regraded) ring homomorphism.
#[derive(Clone, PartialEq, Debug)]
pub struct Hom {
    name: String,
    source: Arc<GradedRing>,
    target: Arc<GradedRing>,
    /// Degree-preserving for the source's own grading; evaluation-style
    /// maps into trivially graded targets are flagged `false`.
    graded: bool,
    kind: HomKind,
}

#[derive(Clone, PartialEq, Debug)]
enum HomKind {
    Identity,
    ProjLeft,
    ProjRight,
    /// Support-restricted group algebra into the full one (same atoms).
    Include,
    /// Group algebra onto its coefficient field, `u_γ ↦ 1`.
    Augment,
    /// ℤ-graded group algebra onto the field, `u_n ↦ c^n`.
    EvalVar { value: Scalar },
    /// Dual numbers onto the base group algebra, `x ↦ 0`.
    KillDual,
    /// Lift a hom `φ` into the quotient-graded base to the Γ-graded lift:
    /// a homogeneous `a_γ` maps to `φ(a_γ)·γ`.
    LiftTag { phi: Box<Hom> },
    Compose { first: Box<Hom>, then: Box<Hom> },
}

impl Hom {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<GradedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedRing> {
        &self.target
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn identity(ring: Arc<GradedRing>) -> Hom {
        Hom {
            name: format!("id-{}", ring.name().to_lowercase()),
            source: ring.clone(),
            target: ring,
            graded: true,
            kind: HomKind::Identity,
        }
    }

    pub fn proj_left(ring: Arc<GradedRing>) -> Result<Hom, RingError> {
        let RingKind::Product { left, .. } = ring.kind() else {
            return Err(RingError::HomMismatch("projection needs a product source".into()));
        };
        Ok(Hom {
            name: "pi-l".into(),
            source: ring.clone(),
            target: left.clone(),
            graded: true,
            kind: HomKind::ProjLeft,
        })
    }

    pub fn proj_right(ring: Arc<GradedRing>) -> Result<Hom, RingError> {
        let RingKind::Product { right, .. } = ring.kind() else {
            return Err(RingError::HomMismatch("projection needs a product source".into()));
        };
        Ok(Hom {
            name: "pi-r".into(),
            source: ring.clone(),
            target: right.clone(),
            graded: true,
            kind: HomKind::ProjRight,
        })
    }

    pub fn include(source: Arc<GradedRing>, target: Arc<GradedRing>) -> Result<Hom, RingError> {
        let ok = matches!(source.kind(), RingKind::GroupAlgebra { .. })
            && matches!(target.kind(), RingKind::GroupAlgebra { support: SupportRule::All })
            && source.group() == target.group()
            && source.field() == target.field();
        if !ok {
            return Err(RingError::HomMismatch(
                "inclusion needs group algebras over the same group and field".into(),
            ));
        }
        Ok(Hom {
            name: format!(
                "{}-to-{}",
                source.name().to_lowercase(),
                target.name().to_lowercase()
            ),
            source,
            target,
            graded: true,
            kind: HomKind::Include,
        })
    }

    /// `u_γ ↦ 1`; the target is the trivially graded coefficient field.
    pub fn augment(source: Arc<GradedRing>) -> Result<Hom, RingError> {
        if !matches!(source.kind(), RingKind::GroupAlgebra { .. }) || source.field() != Field::Q {
            return Err(RingError::HomMismatch(
                "augmentation implemented for rational group algebras".into(),
            ));
        }
        Ok(Hom {
            name: format!("aug-{}", source.name().to_lowercase()),
            source,
            target: rat(),
            graded: false,
            kind: HomKind::Augment,
        })
    }

    /// `t ↦ value` on a ℤ-graded group algebra; `value = 0` is allowed
    /// only when the support excludes negative degrees.
    pub fn eval_var(source: Arc<GradedRing>, value: Scalar) -> Result<Hom, RingError> {
        let RingKind::GroupAlgebra { support } = source.kind() else {
            return Err(RingError::HomMismatch("evaluation needs a group algebra".into()));
        };
        if source.group().kind() != Group::z().kind() || value.field() != source.field() {
            return Err(RingError::HomMismatch("evaluation needs a ℤ-graded source".into()));
        }
        if value.is_zero() && *support == SupportRule::All {
            return Err(RingError::HomMismatch(
                "t ↦ 0 undefined when t is invertible".into(),
            ));
        }
        Ok(Hom {
            name: format!("eval@{value}"),
            source,
            target: rat(),
            graded: false,
            kind: HomKind::EvalVar { value },
        })
    }

    /// Dual numbers onto their base group algebra, killing `x`.
    pub fn kill_dual(source: Arc<GradedRing>, target: Arc<GradedRing>) -> Result<Hom, RingError> {
        let ok = matches!(source.kind(), RingKind::Dual)
            && matches!(target.kind(), RingKind::GroupAlgebra { support: SupportRule::All })
            && source.group() == target.group()
            && source.field() == target.field();
        if !ok {
            return Err(RingError::HomMismatch(
                "kill-dual maps dual numbers onto the matching group algebra".into(),
            ));
        }
        Ok(Hom {
            name: "kill-x".into(),
            source,
            target,
            graded: true,
            kind: HomKind::KillDual,
        })
    }

    /// Lift `φ: R → E` (graded for the regraded view of R) to the
    /// Γ-graded hom `ψ: R → D`, `ψ(a_γ) = φ(a_γ)·γ`.
    pub fn lift_tag(phi: Hom, lift: Arc<GradedRing>) -> Result<Hom, RingError> {
        let RingKind::Lift { base, quot } = lift.kind() else {
            return Err(RingError::HomMismatch("target is not a lift ring".into()));
        };
        if phi.target() != base.ring() || quot.parent() != phi.source().group() {
            return Err(RingError::HomMismatch(
                "φ must map the lifted ring's source into the lift base".into(),
            ));
        }
        Ok(Hom {
            name: format!("lift({})", phi.name()),
            source: phi.source.clone(),
            target: lift,
            graded: true,
            kind: HomKind::LiftTag { phi: Box::new(phi) },
        })
    }

    pub fn compose(first: Hom, then: Hom) -> Result<Hom, RingError> {
        if first.target != then.source {
            return Err(RingError::HomMismatch("composition endpoints differ".into()));
        }
        Ok(Hom {
            name: format!("{}∘{}", then.name, first.name),
            source: first.source.clone(),
            target: then.target.clone(),
            graded: first.graded && then.graded,
            kind: HomKind::Compose { first: Box::new(first), then: Box::new(then) },
        })
    }

    pub fn apply_checked(&self, e: &GradedElement) -> Result<GradedElement, RingError> {
        self.source.check_element(e)?;
        Ok(self.apply(e))
    }

    pub fn apply(&self, e: &GradedElement) -> GradedElement {
        match &self.kind {
            HomKind::Identity => e.clone(),
            HomKind::ProjLeft => split_product(e).0,
            HomKind::ProjRight => split_product(e).1,
            HomKind::Include => e.clone(),
            HomKind::Augment => {
                let mut total = Scalar::zero(self.target.field());
                for (_, s) in e.terms() {
                    total = &total + s;
                }
                self.target.scale(&total, &self.target.one())
            }
            HomKind::EvalVar { value } => {
                let mut total = Scalar::zero(self.target.field());
                for (atom, s) in e.terms() {
                    let Atom::Deg(GroupElem::V(v)) = atom else { panic!("ℤ-graded atom shape") };
                    total = &total + &(s * &scalar_pow(value, v[0]));
                }
                self.target.scale(&total, &self.target.one())
            }
            HomKind::KillDual => {
                let mut out = GradedElement::default();
                for (atom, s) in e.terms() {
                    let Atom::Dual(g, f) = atom else { panic!("dual atom shape") };
                    if !*f {
                        out.insert_add(Atom::Deg(g.clone()), s);
                    }
                }
                out
            }
            HomKind::LiftTag { phi } => {
                // apply φ per homogeneous component and tag with the degree
                let mut by_deg: BTreeMap<GroupElem, GradedElement> = BTreeMap::new();
                for (atom, s) in e.terms() {
                    let d = self.source.atom_degree(atom);
                    by_deg
                        .entry(d)
                        .or_default()
                        .insert_add(atom.clone(), s);
                }
                let mut out = GradedElement::default();
                for (d, comp) in by_deg {
                    for (atom, s) in phi.apply(&comp).terms() {
                        out.insert_add(Atom::Mono(d.clone(), Box::new(atom.clone())), s);
                    }
                }
                out
            }
            HomKind::Compose { first, then } => then.apply(&first.apply(e)),
        }
    }
}

/// The fixed registry of catalog homomorphisms, addressable by
/// [`Hom::name`]: id-q2, pi-l, pi-r, qp-to-ql, aug-q2, kill-x, and a
/// default evaluation point eval@2.
pub fn named_homs() -> Vec<Hom> {
    vec![
        Hom::identity(q2()),
        Hom::proj_left(exf()).expect("EXF is a product"),
        Hom::proj_right(exf()).expect("EXF is a product"),
        Hom::include(qp(), ql()).expect("QP sits inside QL"),
        Hom::augment(q2()).expect("Q2 is a rational group algebra"),
        Hom::kill_dual(tx(), ql()).expect("TX is dual over QL"),
        Hom::eval_var(qp(), Scalar::from_i64(Field::Q, 2)).expect("QP is ℤ-graded"),
    ]
}

/// `value^n` with negative exponents via the inverse; panics on a
/// negative power of zero (callers validate at hom construction).
fn scalar_pow(value: &Scalar, n: i64) -> Scalar {
    if n < 0 {
        let inv = value.inv().expect("negative power of zero");
        return scalar_pow(&inv, -n);
    }
    let mut acc = Scalar::one(value.field());
    for _ in 0..n {
        acc = &acc * value;
    }
    acc
}

/// Outcome of the sampled graded-local probe.
#[derive(Clone, PartialEq, Debug)]
pub enum LocalCheck {
    /// No sum of two sampled non-units of the trivial-degree component
    /// was a unit.
    LocalOnSample,
    /// Two non-units whose sum is a unit.
    NotLocal(GradedElement, GradedElement),
    /// The sample was empty; nothing was decided.
    Inconclusive,
}

/// Probe graded locality through the trivial-degree component: sample
/// elements of `R_e`, split them into units and non-units, and look for
/// two non-units with a unit sum. `budget` bounds the coefficient range.
pub fn is_graded_local(ring: &Arc<GradedRing>, budget: i64) -> LocalCheck {
    if budget <= 0 {
        return LocalCheck::Inconclusive;
    }
    let atoms = ring.basis_atoms_of_degree(&ring.group().identity());
    if atoms.is_empty() {
        return LocalCheck::Inconclusive;
    }
    // all coefficient vectors over the atoms with entries in [-budget, budget]
    let coeffs: Vec<i64> = (-budget..=budget).collect();
    let mut pool: Vec<GradedElement> = vec![ring.zero()];
    for atom in &atoms {
        let mut next = Vec::new();
        for e in &pool {
            for c in &coeffs {
                let mut e2 = e.clone();
                e2.insert_add(atom.clone(), &Scalar::from_i64(ring.field(), *c));
                next.push(e2);
            }
        }
        pool = next;
    }
    let nonunits: Vec<&GradedElement> = pool
        .iter()
        .filter(|e| ring.invert_homogeneous(e).is_err())
        .collect();
    for a in &nonunits {
        for b in &nonunits {
            let sum = ring.add(a, b);
            if ring.invert_homogeneous(&sum).is_ok() {
                return LocalCheck::NotLocal((*a).clone(), (*b).clone());
            }
        }
    }
    LocalCheck::LocalOnSample
}
