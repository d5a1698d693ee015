//! Finitely supported complex linear combinations over a group with a solved
//! word problem, together with the canonical trace (coefficient of the
//! identity) and the shift action. This is the dense group-algebra level of
//! the group von Neumann algebra; every trace identity we reproduce lives
//! here.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::ap_groups::{Ap4Group, Ap5Element, Ap5Group, ApNormalForm};

/// Coefficients smaller than this are pruned after every operation.
pub const PRUNE_EPS: f64 = 1e-12;

/// A group whose elements have canonical comparable normal forms, with a
/// shift automorphism.
pub trait TracedGroup {
    type Elem: Clone + Ord + Eq + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn shift(&self, a: &Self::Elem, k: i64) -> Self::Elem;
}

impl TracedGroup for Ap4Group {
    type Elem = ApNormalForm;

    fn identity(&self) -> ApNormalForm {
        Ap4Group::identity(self)
    }
    fn mul(&self, a: &ApNormalForm, b: &ApNormalForm) -> ApNormalForm {
        Ap4Group::mul(self, a, b)
    }
    fn inverse(&self, a: &ApNormalForm) -> ApNormalForm {
        Ap4Group::inverse(self, a)
    }
    fn shift(&self, a: &ApNormalForm, k: i64) -> ApNormalForm {
        Ap4Group::shift(self, a, k)
    }
}

impl TracedGroup for Ap5Group {
    type Elem = Ap5Element;

    fn identity(&self) -> Ap5Element {
        Ap5Group::identity(self)
    }
    fn mul(&self, a: &Ap5Element, b: &Ap5Element) -> Ap5Element {
        Ap5Group::mul(self, a, b)
    }
    fn inverse(&self, a: &Ap5Element) -> Ap5Element {
        Ap5Group::inverse(self, a)
    }
    fn shift(&self, a: &Ap5Element, k: i64) -> Ap5Element {
        Ap5Group::shift(self, a, k)
    }
}

/// A finitely supported element `Σ c_g · g`.
pub struct AlgebraElement<G: TracedGroup> {
    terms: BTreeMap<G::Elem, Complex64>,
}

impl<G: TracedGroup> Debug for AlgebraElement<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<G: TracedGroup> Clone for AlgebraElement<G> {
    fn clone(&self) -> Self {
        AlgebraElement {
            terms: self.terms.clone(),
        }
    }
}

impl<G: TracedGroup> PartialEq for AlgebraElement<G> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<G: TracedGroup> AlgebraElement<G> {
    pub fn zero() -> Self {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&G::Elem, Complex64)> {
        self.terms.iter().map(|(g, &c)| (g, c))
    }

    pub fn coefficient(&self, g: &G::Elem) -> Complex64 {
        self.terms.get(g).copied().unwrap_or(Complex64::ZERO)
    }

    fn insert(&mut self, g: G::Elem, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                if c.norm() > PRUNE_EPS {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.norm() > PRUNE_EPS {
                    e.insert(v);
                } else {
                    e.remove();
                }
            }
        }
    }
}

/// The group algebra `C[G]` with trace, adjoint and shift.
#[derive(Debug, Clone)]
pub struct GroupAlgebra<G: TracedGroup> {
    group: G,
}

impl<G: TracedGroup> GroupAlgebra<G> {
    pub fn new(group: G) -> Self {
        GroupAlgebra { group }
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn one(&self) -> AlgebraElement<G> {
        self.from_group(self.group.identity())
    }

    pub fn from_group(&self, g: G::Elem) -> AlgebraElement<G> {
        let mut e = AlgebraElement::zero();
        e.insert(g, Complex64::new(1.0, 0.0));
        e
    }

    pub fn scaled(&self, g: G::Elem, c: Complex64) -> AlgebraElement<G> {
        let mut e = AlgebraElement::zero();
        e.insert(g, c);
        e
    }

    pub fn add(&self, x: &AlgebraElement<G>, y: &AlgebraElement<G>) -> AlgebraElement<G> {
        let mut out = x.clone();
        for (g, c) in &y.terms {
            out.insert(g.clone(), *c);
        }
        out
    }

    pub fn scale(&self, x: &AlgebraElement<G>, c: Complex64) -> AlgebraElement<G> {
        let mut out = AlgebraElement::zero();
        for (g, v) in &x.terms {
            out.insert(g.clone(), *v * c);
        }
        out
    }

    /// Convolution product: normal-form concatenation of supports, bilinear.
    pub fn mul(&self, x: &AlgebraElement<G>, y: &AlgebraElement<G>) -> AlgebraElement<G> {
        let mut out = AlgebraElement::zero();
        for (g, cg) in &x.terms {
            for (h, ch) in &y.terms {
                out.insert(self.group.mul(g, h), cg * ch);
            }
        }
        out
    }

    /// `Σ c_g g  ↦  Σ conj(c_g) g^{-1}`.
    pub fn adjoint(&self, x: &AlgebraElement<G>) -> AlgebraElement<G> {
        let mut out = AlgebraElement::zero();
        for (g, c) in &x.terms {
            out.insert(self.group.inverse(g), c.conj());
        }
        out
    }

    /// Coefficient of the identity normal form.
    pub fn trace(&self, x: &AlgebraElement<G>) -> Complex64 {
        x.coefficient(&self.group.identity())
    }

    pub fn shift(&self, x: &AlgebraElement<G>, k: i64) -> AlgebraElement<G> {
        let mut out = AlgebraElement::zero();
        for (g, c) in &x.terms {
            out.insert(self.group.shift(g, k), *c);
        }
        out
    }

    /// `τ(Π_i α^{c_i n}(a_i))`, products left to right.
    pub fn k_fold_trace(
        &self,
        elements: &[AlgebraElement<G>],
        exponents: &[i64],
        n: i64,
    ) -> Complex64 {
        assert_eq!(elements.len(), exponents.len());
        let mut product = self.one();
        for (a, &c) in elements.iter().zip(exponents) {
            let shifted = self.shift(a, c * n);
            product = self.mul(&product, &shifted);
        }
        self.trace(&product)
    }

    /// `b·b*` for `b = Σ λ_i w_i`; non-negative and self-adjoint by
    /// construction.
    pub fn positive_element(
        &self,
        words: &[G::Elem],
        coefficients: &[Complex64],
    ) -> AlgebraElement<G> {
        assert_eq!(words.len(), coefficients.len());
        let mut b = AlgebraElement::zero();
        for (w, &c) in words.iter().zip(coefficients) {
            b.insert(w.clone(), c);
        }
        let b_star = self.adjoint(&b);
        self.mul(&b, &b_star)
    }

    /// Symmetric Cesàro average of the k-fold trace over `n = -N..=N`.
    pub fn symmetric_cesaro(
        &self,
        elements: &[AlgebraElement<G>],
        exponents: &[i64],
        n_max: i64,
    ) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for n in -n_max..=n_max {
            acc += self.k_fold_trace(elements, exponents, n);
        }
        acc / Complex64::new((2 * n_max + 1) as f64, 0.0)
    }
}
