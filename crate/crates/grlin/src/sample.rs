//! Deterministic sampling of degrees, scalars, elements, and
//! homogeneous matrices. Everything is driven by a seeded ChaCha8
//! stream, so a (seed, parameters) pair reproduces the same data on
//! every run and every platform.

use crate::grp::{DegSeq, Group, GroupElem};
use crate::hmat::HMatrix;
use crate::ring::{GradedElement, RingView};
use crate::scalar::{Field, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
    /// Degrees are drawn from the ball of this radius.
    pub degree_ball: i64,
    /// Integer coefficients are drawn from [-coeff_bound, coeff_bound].
    pub coeff_bound: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), degree_ball: 2, coeff_bound: 2 }
    }

    pub fn with_params(seed: u64, degree_ball: i64, coeff_bound: i64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), degree_ball, coeff_bound }
    }

    pub fn usize(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.usize(items.len())]
    }

    pub fn bool(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn degree(&mut self, g: &Group) -> GroupElem {
        let ball = g.ball(self.degree_ball);
        ball[self.usize(ball.len())].clone()
    }

    pub fn degseq(&mut self, g: &Group, len: usize) -> DegSeq {
        DegSeq::new((0..len).map(|_| self.degree(g)).collect())
    }

    pub fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.coeff_bound..=self.coeff_bound)
    }

    pub fn scalar(&mut self, f: Field) -> Scalar {
        match f {
            Field::Qi => {
                let re = self.int();
                let im = self.int();
                Scalar::gauss(re, im)
            }
            _ => Scalar::from_i64(f, self.int()),
        }
    }

    pub fn nonzero_scalar(&mut self, f: Field) -> Scalar {
        loop {
            let s = self.scalar(f);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Random element of one view degree: random coefficients over the
    /// basis atoms of that degree (possibly zero; empty when the degree
    /// has no atoms, e.g. negative degrees in a support-restricted ring).
    pub fn element_of_degree(&mut self, view: &RingView, d: &GroupElem) -> GradedElement {
        let ring = view.ring().clone();
        let atoms = if view.quot().is_some() {
            view.basis_atoms_of_class(d, self.degree_ball)
        } else {
            ring.basis_atoms_of_degree(d)
        };
        let mut terms = Vec::new();
        for atom in atoms {
            let s = self.scalar(ring.field());
            if !s.is_zero() {
                terms.push((atom, s));
            }
        }
        ring.from_terms(terms).expect("sampled atoms belong to the ring")
    }

    /// Random homogeneous unit of the given degree; `None` when the
    /// sampled degree carries no unit (tried a bounded number of times).
    pub fn unit_of_degree(&mut self, view: &RingView, d: &GroupElem) -> Option<GradedElement> {
        for _ in 0..64 {
            let e = self.element_of_degree(view, d);
            if view.ring().invert_homogeneous(&e).is_ok() {
                return Some(e);
            }
        }
        None
    }

    /// Random element with up to `parts` homogeneous components.
    pub fn element(&mut self, view: &RingView, parts: usize) -> GradedElement {
        let ring = view.ring().clone();
        let mut acc = ring.zero();
        for _ in 0..parts {
            let d = self.degree(view.group());
            acc = ring.add(&acc, &self.element_of_degree(view, &d));
        }
        acc
    }

    /// Random matrix with freshly sampled distributions.
    pub fn hmatrix(&mut self, view: &RingView, rows: usize, cols: usize) -> HMatrix {
        let alpha = self.degseq(view.group(), rows);
        let beta = self.degseq(view.group(), cols);
        self.hmatrix_with(view, alpha, beta)
    }

    /// Random matrix with prescribed distributions; entries are random
    /// homogeneous elements of the forced degrees.
    pub fn hmatrix_with(&mut self, view: &RingView, alpha: DegSeq, beta: DegSeq) -> HMatrix {
        let grp = view.group().clone();
        let mut entries = Vec::with_capacity(alpha.len() * beta.len());
        for i in 0..alpha.len() {
            for j in 0..beta.len() {
                let d = grp.ratio(alpha.get(i), beta.get(j));
                entries.push(self.element_of_degree(view, &d));
            }
        }
        HMatrix::new(view.clone(), alpha, beta, entries)
            .expect("sampled entries match the sampled distributions")
    }

    /// Random invertible square matrix over an (effective) graded
    /// division view: rejection sampling first, then a guaranteed
    /// fallback of the form identity + strictly upper triangular.
    pub fn invertible(&mut self, view: &RingView, alpha: DegSeq) -> HMatrix {
        for _ in 0..64 {
            let beta = self.degseq(view.group(), alpha.len());
            let a = self.hmatrix_with(view, alpha.clone(), beta);
            if crate::gdlin::is_invertible(&a).unwrap_or(false) {
                return a;
            }
        }
        let mut a = HMatrix::identity(view.clone(), alpha.clone());
        let grp = view.group().clone();
        for i in 0..alpha.len() {
            for j in (i + 1)..alpha.len() {
                let d = grp.ratio(alpha.get(i), alpha.get(j));
                let e = self.element_of_degree(view, &d);
                a = a.with_entry(i, j, e).expect("degree was derived from the distributions");
            }
        }
        a
    }

    /// Random n×n matrix that factors through `r` columns (hence has
    /// rank at most `r`).
    pub fn nonfull(&mut self, view: &RingView, n: usize, r: usize) -> HMatrix {
        let lambda = self.degseq(view.group(), r);
        let alpha = self.degseq(view.group(), n);
        let beta = self.degseq(view.group(), n);
        let p = self.hmatrix_with(view, alpha, lambda.clone());
        let q = self.hmatrix_with(view, lambda, beta);
        p.mat_mul(&q).expect("interface distributions agree by construction")
    }

    /// Fresh sub-sampler with an independent but deterministic stream.
    pub fn fork(&mut self, salt: u64) -> Sampler {
        let seed = self.rng.gen::<u64>() ^ salt;
        Sampler::with_params(seed, self.degree_ball, self.coeff_bound)
    }
}
