//! Square groups: word-problem machinery built on flat connections.
//!
//! A square group is presented by quadruple relations `e0 e1 e2 e3 = id`
//! drawn from a *square base*: a cyclically closed set of alternating
//! horizontal/vertical quadruples with unique continuation (at most one
//! quadruple per ordered leading pair). Group elements are represented
//! canonically by maximal reduced flat connections on monotone lattice
//! regions; concatenation of a symbol onto a normal form either collapses
//! a boundary edge or extends the region and re-maximalizes. Equality of
//! group elements is structural equality of normal forms.

mod base;
mod connection;
mod region;

pub use base::{validate_base, BaseError, EnumeratedBase, SquareBase};
pub use connection::{
    complete_from_path, concatenate, extend_maximal, extend_maximal_shuffled, integrate,
    integrate_along, is_flat, normal_form, FlatConnection, NormalForm,
};
pub use region::{Dir, MonotoneRegion};

use std::fmt::Debug;
use std::hash::Hash;

/// Edge orientation. Horizontal edges carry horizontal symbols, vertical
/// edges vertical symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Identifies a generator family. The orientation of a family never changes;
/// `token` is the canonical spelling used in serialized normal forms.
pub trait Family: Clone + Ord + Eq + Hash + Debug {
    fn token(&self) -> String;
}

impl Family for String {
    fn token(&self) -> String {
        self.clone()
    }
}

impl Family for &'static str {
    fn token(&self) -> String {
        (*self).to_string()
    }
}

/// A letter of the alphabet `H ∪ V ∪ H⁻¹ ∪ V⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol<F: Family> {
    pub family: F,
    pub orientation: Orientation,
    pub inverted: bool,
}

impl<F: Family> Symbol<F> {
    pub fn new(family: F, orientation: Orientation, inverted: bool) -> Self {
        Symbol {
            family,
            orientation,
            inverted,
        }
    }

    pub fn horizontal(family: F) -> Self {
        Symbol::new(family, Orientation::Horizontal, false)
    }

    pub fn vertical(family: F) -> Self {
        Symbol::new(family, Orientation::Vertical, false)
    }

    /// Flips only `inverted`; involutive.
    pub fn inverse(&self) -> Self {
        Symbol {
            family: self.family.clone(),
            orientation: self.orientation,
            inverted: !self.inverted,
        }
    }

    pub fn token(&self) -> String {
        if self.inverted {
            format!("{}^-1", self.family.token())
        } else {
            self.family.token()
        }
    }
}

/// Inverts a word: reverses it and inverts each letter.
pub fn invert_word<F: Family>(word: &[Symbol<F>]) -> Vec<Symbol<F>> {
    word.iter().rev().map(Symbol::inverse).collect()
}
