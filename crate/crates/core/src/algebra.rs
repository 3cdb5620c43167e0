//! Boolean algebras that set expressions can be evaluated in.
//!
//! The same expression tree is interpreted over interval sets, over single
//! bits (one partition cell at a time) and over bit vectors (all cells at
//! once). Keeping a single evaluator for every carrier is what makes the
//! binary encoding of a set-valued map exact.

use crate::interval::{IntervalSet, Universe};
use crate::matrix::BoolVector;

pub trait BooleanAlgebra {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn complement(&self, a: &Self::Elem) -> Self::Elem;

    /// `a ∧ ¬b`
    fn difference(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.meet(a, &self.complement(b))
    }

    /// `(¬a ∧ b) ∨ (a ∧ ¬b)`
    fn sym_diff(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.join(
            &self.meet(&self.complement(a), b),
            &self.meet(a, &self.complement(b)),
        )
    }
}

/// `(𝒫(𝕏), ∪, ∩, 𝒞, ∅, 𝕏)` over a fixed universe.
impl BooleanAlgebra for Universe {
    type Elem = IntervalSet;

    fn zero(&self) -> IntervalSet {
        IntervalSet::empty()
    }

    fn one(&self) -> IntervalSet {
        self.carrier().clone()
    }

    fn join(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.union(b)
    }

    fn meet(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.intersect(b)
    }

    fn complement(&self, a: &IntervalSet) -> IntervalSet {
        Universe::complement(self, a)
    }

    // the direct merges agree with the defaults for subsets of the universe
    fn difference(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.difference(b)
    }

    fn sym_diff(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.sym_diff(b)
    }
}

/// The two-element algebra `{0, 1}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bits;

impl BooleanAlgebra for Bits {
    type Elem = bool;

    fn zero(&self) -> bool {
        false
    }

    fn one(&self) -> bool {
        true
    }

    fn join(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }

    fn meet(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }

    fn complement(&self, a: &bool) -> bool {
        !*a
    }

    fn sym_diff(&self, a: &bool, b: &bool) -> bool {
        a != b
    }
}

/// Bitwise operations on fixed-length vectors (𝔹^κ).
#[derive(Debug, Clone, Copy)]
pub struct BitVectors {
    pub len: usize,
}

impl BooleanAlgebra for BitVectors {
    type Elem = BoolVector;

    fn zero(&self) -> BoolVector {
        BoolVector::zeros(self.len)
    }

    fn one(&self) -> BoolVector {
        BoolVector::ones(self.len)
    }

    fn join(&self, a: &BoolVector, b: &BoolVector) -> BoolVector {
        a.or(b)
    }

    fn meet(&self, a: &BoolVector, b: &BoolVector) -> BoolVector {
        a.and(b)
    }

    fn complement(&self, a: &BoolVector) -> BoolVector {
        a.not()
    }

    fn sym_diff(&self, a: &BoolVector, b: &BoolVector) -> BoolVector {
        a.xor(b)
    }
}
