//! Square bases as completion oracles.

use super::{Family, Symbol};
use std::collections::BTreeMap;
use std::fmt;

/// Completion oracle for a square base. `complete(e0, e1)` returns the unique
/// `(e2, e3)` with `(e0, e1, e2, e3)` in the base, if any. Implementations
/// must be cyclically closed: if `complete(e0, e1) = (e2, e3)` then
/// `complete(e1, e2) = (e3, e0)`.
pub trait SquareBase<F: Family> {
    fn complete(&self, first: &Symbol<F>, second: &Symbol<F>) -> Option<(Symbol<F>, Symbol<F>)>;
}

impl<F: Family, B: SquareBase<F> + ?Sized> SquareBase<F> for &B {
    fn complete(&self, first: &Symbol<F>, second: &Symbol<F>) -> Option<(Symbol<F>, Symbol<F>)> {
        (**self).complete(first, second)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseError<F: Family> {
    /// Two distinct quadruples share the leading ordered pair.
    UniqueContinuationViolation { first: Symbol<F>, second: Symbol<F> },
    /// A quadruple does not alternate horizontal/vertical.
    OrientationViolation { quadruple: [Symbol<F>; 4] },
}

impl<F: Family> fmt::Display for BaseError<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseError::UniqueContinuationViolation { first, second } => write!(
                f,
                "two distinct completions for leading pair ({}, {})",
                first.token(),
                second.token()
            ),
            BaseError::OrientationViolation { quadruple } => write!(
                f,
                "quadruple ({}, {}, {}, {}) does not alternate orientation",
                quadruple[0].token(),
                quadruple[1].token(),
                quadruple[2].token(),
                quadruple[3].token()
            ),
        }
    }
}

impl<F: Family> std::error::Error for BaseError<F> {}

type SymbolPair<F> = (Symbol<F>, Symbol<F>);

/// A finite square base stored as an explicit completion table.
/// Infinite bases (the AP families) implement [`SquareBase`] directly.
#[derive(Debug, Clone, Default)]
pub struct EnumeratedBase<F: Family> {
    table: BTreeMap<SymbolPair<F>, SymbolPair<F>>,
}

impl<F: Family> EnumeratedBase<F> {
    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// All stored quadruples, rotations included.
    pub fn quadruples(&self) -> impl Iterator<Item = [Symbol<F>; 4]> + '_ {
        self.table
            .iter()
            .map(|((e0, e1), (e2, e3))| [e0.clone(), e1.clone(), e2.clone(), e3.clone()])
    }
}

impl<F: Family> SquareBase<F> for EnumeratedBase<F> {
    fn complete(&self, first: &Symbol<F>, second: &Symbol<F>) -> Option<(Symbol<F>, Symbol<F>)> {
        self.table.get(&(first.clone(), second.clone())).cloned()
    }
}

/// Builds the completion table from a list of quadruples, closing under
/// cyclic rotation. Rejects non-alternating quadruples and any ordered pair
/// with two distinct completions.
pub fn validate_base<F: Family>(
    quadruples: &[[Symbol<F>; 4]],
) -> Result<EnumeratedBase<F>, BaseError<F>> {
    let mut table: BTreeMap<SymbolPair<F>, SymbolPair<F>> = BTreeMap::new();
    for q in quadruples {
        for i in 0..4 {
            let a = q[i].orientation;
            let b = q[(i + 1) % 4].orientation;
            if a == b {
                return Err(BaseError::OrientationViolation {
                    quadruple: q.clone(),
                });
            }
        }
        for rot in 0..4 {
            let e = |k: usize| q[(rot + k) % 4].clone();
            let key = (e(0), e(1));
            let val = (e(2), e(3));
            match table.get(&key) {
                Some(existing) if *existing != val => {
                    return Err(BaseError::UniqueContinuationViolation {
                        first: key.0,
                        second: key.1,
                    });
                }
                _ => {
                    table.insert(key, val);
                }
            }
        }
    }
    Ok(EnumeratedBase { table })
}
