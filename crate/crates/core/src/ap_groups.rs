//! The AP4 and AP5 groups: square groups whose relations encode arithmetic
//! progressions, with the time-shift automorphism `T`.
//!
//! AP4 is generated by `e_{i,n}` (`i` in `0..4`, `n` an integer) subject to
//! `e_{0,n} e_{1,n+r} e_{2,n+2r} e_{3,n+3r} = id` for spacings `r` in a
//! user-supplied set `A`. The square base is the completion oracle derived
//! from "two points determine a line": an ordered pair of adjacent-family
//! generators pins down `(n, r)`, and the completion exists iff the index
//! equations are integer-solvable with `r` allowed.
//!
//! AP5 is a product of five factor groups; factor `i` omits family `i` and
//! allows every integer spacing.

use crate::square_group::{
    concatenate, extend_maximal, integrate, invert_word, normal_form, Family, NormalForm,
    Orientation, SquareBase, Symbol,
};
use std::collections::BTreeSet;

/// Generator family `e_{i,n}`: the surviving square-group families are the
/// pairs (family index, time index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApFamily {
    pub family_index: u8,
    pub time_index: i64,
}

impl Family for ApFamily {
    fn token(&self) -> String {
        format!("e{}[{}]", self.family_index, self.time_index)
    }
}

pub type ApSymbol = Symbol<ApFamily>;
pub type ApNormalForm = NormalForm<ApFamily>;

/// AP4 orientation: families 0 and 2 horizontal, 1 and 3 vertical.
fn ap4_orientation(family_index: u8) -> Orientation {
    if family_index.is_multiple_of(2) {
        Orientation::Horizontal
    } else {
        Orientation::Vertical
    }
}

/// The AP4 square base for spacing set `A`.
#[derive(Debug, Clone)]
pub struct Ap4Base {
    allowed: BTreeSet<i64>,
}

impl Ap4Base {
    pub fn new(allowed: impl IntoIterator<Item = i64>) -> Self {
        Ap4Base {
            allowed: allowed.into_iter().collect(),
        }
    }

    pub fn allowed(&self) -> &BTreeSet<i64> {
        &self.allowed
    }

    pub fn symbol(&self, family_index: u8, time_index: i64, inverted: bool) -> ApSymbol {
        debug_assert!(family_index < 4);
        Symbol::new(
            ApFamily {
                family_index,
                time_index,
            },
            ap4_orientation(family_index),
            inverted,
        )
    }
}

impl SquareBase<ApFamily> for Ap4Base {
    fn complete(&self, first: &ApSymbol, second: &ApSymbol) -> Option<(ApSymbol, ApSymbol)> {
        if first.inverted || second.inverted {
            return None;
        }
        let f1 = first.family.family_index;
        let f2 = second.family.family_index;
        if f1 >= 4 || f2 != (f1 + 1) % 4 {
            return None;
        }
        let (t1, t2) = (first.family.time_index, second.family.time_index);
        // time of family f in the relation with offset n and spacing r is n + f*r
        let (n, r) = if f1 < 3 {
            let r = t2 - t1;
            (t1 - f1 as i64 * r, r)
        } else {
            // pair (e_{3,t1}, e_{0,t2}): t1 = n + 3r, t2 = n
            if (t1 - t2) % 3 != 0 {
                return None;
            }
            (t2, (t1 - t2) / 3)
        };
        if !self.allowed.contains(&r) {
            return None;
        }
        let mk = |f: u8| {
            let t = n + f as i64 * r;
            Symbol::new(
                ApFamily {
                    family_index: f,
                    time_index: t,
                },
                ap4_orientation(f),
                false,
            )
        };
        Some((mk((f1 + 2) % 4), mk((f1 + 3) % 4)))
    }
}

/// One factor of the AP5 group: families `{0..4} \ {omitted}` with every
/// integer spacing allowed. Surviving families in increasing order alternate
/// H, V, H, V.
#[derive(Debug, Clone, Copy)]
pub struct Ap5FactorBase {
    omitted: u8,
    surviving: [u8; 4],
}

impl Ap5FactorBase {
    pub fn new(omitted: u8) -> Self {
        assert!(omitted < 5);
        let mut surviving = [0u8; 4];
        let mut k = 0;
        for f in 0..5u8 {
            if f != omitted {
                surviving[k] = f;
                k += 1;
            }
        }
        Ap5FactorBase { omitted, surviving }
    }

    pub fn omitted(&self) -> u8 {
        self.omitted
    }

    pub fn surviving(&self) -> [u8; 4] {
        self.surviving
    }

    fn position(&self, family_index: u8) -> Option<usize> {
        self.surviving.iter().position(|&f| f == family_index)
    }

    fn orientation_at(&self, position: usize) -> Orientation {
        if position.is_multiple_of(2) {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    pub fn symbol(&self, family_index: u8, time_index: i64, inverted: bool) -> Option<ApSymbol> {
        let pos = self.position(family_index)?;
        Some(Symbol::new(
            ApFamily {
                family_index,
                time_index,
            },
            self.orientation_at(pos),
            inverted,
        ))
    }
}

impl SquareBase<ApFamily> for Ap5FactorBase {
    fn complete(&self, first: &ApSymbol, second: &ApSymbol) -> Option<(ApSymbol, ApSymbol)> {
        if first.inverted || second.inverted {
            return None;
        }
        let p1 = self.position(first.family.family_index)?;
        let p2 = self.position(second.family.family_index)?;
        if p2 != (p1 + 1) % 4 {
            return None;
        }
        let g1 = self.surviving[p1] as i64;
        let g2 = self.surviving[p2] as i64;
        let (t1, t2) = (first.family.time_index, second.family.time_index);
        // t = n + g*r for actual family value g
        let span = g2 - g1;
        if (t2 - t1) % span != 0 {
            return None;
        }
        let r = (t2 - t1) / span;
        let n = t1 - g1 * r;
        let mk = |pos: usize| {
            let f = self.surviving[pos];
            let t = n + f as i64 * r;
            Symbol::new(
                ApFamily {
                    family_index: f,
                    time_index: t,
                },
                self.orientation_at(pos),
                false,
            )
        };
        Some((mk((p1 + 2) % 4), mk((p1 + 3) % 4)))
    }
}

/// The AP4 group with its shift automorphism.
#[derive(Debug, Clone)]
pub struct Ap4Group {
    base: Ap4Base,
}

impl Ap4Group {
    pub fn new(allowed: impl IntoIterator<Item = i64>) -> Self {
        Ap4Group {
            base: Ap4Base::new(allowed),
        }
    }

    pub fn base(&self) -> &Ap4Base {
        &self.base
    }

    pub fn generator(&self, family_index: u8, time_index: i64) -> ApNormalForm {
        let sym = self.base.symbol(family_index, time_index, false);
        normal_form(&[sym], &self.base)
    }

    pub fn word(&self, letters: &[(u8, i64, bool)]) -> ApNormalForm {
        let syms: Vec<ApSymbol> = letters
            .iter()
            .map(|&(f, t, inv)| self.base.symbol(f, t, inv))
            .collect();
        normal_form(&syms, &self.base)
    }

    pub fn identity(&self) -> ApNormalForm {
        NormalForm::identity()
    }

    pub fn mul(&self, a: &ApNormalForm, b: &ApNormalForm) -> ApNormalForm {
        let mut out = a.clone();
        for sym in integrate(b.connection()) {
            out = concatenate(&out, &sym, &self.base);
        }
        out
    }

    pub fn inverse(&self, a: &ApNormalForm) -> ApNormalForm {
        normal_form(&invert_word(&integrate(a.connection())), &self.base)
    }

    /// The automorphism `T^k`: relabels every time index `n -> n + k`.
    pub fn shift(&self, a: &ApNormalForm, k: i64) -> ApNormalForm {
        shift_normal_form(a, k, &self.base)
    }
}

/// Relabels time indices on a normal form; the AP bases are shift-invariant
/// so the result is again maximal reduced (re-checked in debug builds).
fn shift_normal_form<B: SquareBase<ApFamily>>(a: &ApNormalForm, k: i64, base: &B) -> ApNormalForm {
    let shifted = a.map_symbols(|sym| {
        Symbol::new(
            ApFamily {
                family_index: sym.family.family_index,
                time_index: sym.family.time_index + k,
            },
            sym.orientation,
            sym.inverted,
        )
    });
    debug_assert_eq!(
        extend_maximal(shifted.connection(), base).region(),
        shifted.connection().region(),
        "time shift broke maximality"
    );
    shifted
}

/// Whether the AP4 relation word `e_{0,0} e_{1,r} e_{2,2r} e_{3,3r}` reduces
/// to the identity for the base built from `A`. Equals `A.contains(r)`.
pub fn verify_slop(allowed: &BTreeSet<i64>, r: i64, window: i64) -> bool {
    assert!(r.abs() <= window, "spacing outside window");
    assert!(
        allowed.iter().all(|a| a.abs() <= window),
        "A outside window"
    );
    let group = Ap4Group::new(allowed.iter().copied());
    let word = group.word(&[
        (0, 0, false),
        (1, r, false),
        (2, 2 * r, false),
        (3, 3 * r, false),
    ]);
    word.is_identity()
}

/// An element of the five-factor AP5 group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ap5Element(pub [ApNormalForm; 5]);

impl Ap5Element {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(NormalForm::is_identity)
    }
}

/// The AP5 product group.
#[derive(Debug, Clone)]
pub struct Ap5Group {
    factors: [Ap5FactorBase; 5],
}

impl Default for Ap5Group {
    fn default() -> Self {
        Self::new()
    }
}

impl Ap5Group {
    pub fn new() -> Self {
        Ap5Group {
            factors: [
                Ap5FactorBase::new(0),
                Ap5FactorBase::new(1),
                Ap5FactorBase::new(2),
                Ap5FactorBase::new(3),
                Ap5FactorBase::new(4),
            ],
        }
    }

    pub fn factor(&self, i: usize) -> &Ap5FactorBase {
        &self.factors[i]
    }

    pub fn identity(&self) -> Ap5Element {
        Ap5Element(std::array::from_fn(|_| NormalForm::identity()))
    }

    /// The distinguished element `e_j` (tuple of `e_{j,0}` per factor, with
    /// the `j`-th component the identity).
    pub fn distinguished(&self, j: u8) -> Ap5Element {
        self.letter(j, 0, false)
    }

    /// The tuple for `T^t(e_j^{±1})`.
    pub fn letter(&self, j: u8, time: i64, inverted: bool) -> Ap5Element {
        Ap5Element(std::array::from_fn(|i| {
            match self.factors[i].symbol(j, time, inverted) {
                Some(sym) => normal_form(&[sym], &self.factors[i]),
                None => NormalForm::identity(),
            }
        }))
    }

    pub fn mul(&self, a: &Ap5Element, b: &Ap5Element) -> Ap5Element {
        Ap5Element(std::array::from_fn(|i| {
            let mut out = a.0[i].clone();
            for sym in integrate(b.0[i].connection()) {
                out = concatenate(&out, &sym, &self.factors[i]);
            }
            out
        }))
    }

    pub fn inverse(&self, a: &Ap5Element) -> Ap5Element {
        Ap5Element(std::array::from_fn(|i| {
            normal_form(
                &invert_word(&integrate(a.0[i].connection())),
                &self.factors[i],
            )
        }))
    }

    pub fn shift(&self, a: &Ap5Element, k: i64) -> Ap5Element {
        Ap5Element(std::array::from_fn(|i| {
            shift_normal_form(&a.0[i], k, &self.factors[i])
        }))
    }
}

/// One letter choice for the quintuple relation test: identity or `e_j^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slop3Letter {
    Id,
    Gen { family: u8, inverted: bool },
}

impl Slop3Letter {
    pub fn all() -> Vec<Slop3Letter> {
        let mut out = vec![Slop3Letter::Id];
        for family in 0..5u8 {
            for inverted in [false, true] {
                out.push(Slop3Letter::Gen { family, inverted });
            }
        }
        out
    }

    pub fn token(&self) -> String {
        match self {
            Slop3Letter::Id => "id".to_string(),
            Slop3Letter::Gen { family, inverted } => {
                if *inverted {
                    format!("e{family}^-1")
                } else {
                    format!("e{family}")
                }
            }
        }
    }
}

/// Brute-force classification of the solutions of
/// `g0 (T^r g1) (T^{2r} g2) (T^{3r} g3) (T^{4r} g4) = id`
/// over the 11^5 letter tuples. Enumeration shares work along common
/// prefixes: at depth `l` each factor's partial normal form is extended by
/// the single letter contribution `e^{(i)}_{j, l r}`.
pub fn classify_slop3(r: i64) -> Vec<[Slop3Letter; 5]> {
    assert!(r != 0, "spacing must be nonzero");
    let group = Ap5Group::new();
    let letters = Slop3Letter::all();
    let mut solutions = Vec::new();
    let mut tuple = [Slop3Letter::Id; 5];

    fn rec(
        group: &Ap5Group,
        letters: &[Slop3Letter],
        r: i64,
        depth: usize,
        state: &[ApNormalForm; 5],
        tuple: &mut [Slop3Letter; 5],
        solutions: &mut Vec<[Slop3Letter; 5]>,
    ) {
        if depth == 5 {
            if state.iter().all(NormalForm::is_identity) {
                solutions.push(*tuple);
            }
            return;
        }
        let time = depth as i64 * r;
        for &letter in letters {
            tuple[depth] = letter;
            let next: [ApNormalForm; 5] = match letter {
                Slop3Letter::Id => state.clone(),
                Slop3Letter::Gen { family, inverted } => {
                    std::array::from_fn(|i| match group.factors[i].symbol(family, time, inverted) {
                        Some(sym) => concatenate(&state[i], &sym, &group.factors[i]),
                        None => state[i].clone(),
                    })
                }
            };
            rec(group, letters, r, depth + 1, &next, tuple, solutions);
        }
    }

    let identity: [ApNormalForm; 5] = std::array::from_fn(|_| NormalForm::identity());
    rec(
        &group,
        &letters,
        r,
        0,
        &identity,
        &mut tuple,
        &mut solutions,
    );
    solutions.sort();
    solutions
}

/// True when the tuple is the identity tuple, a permutation of
/// `(e_0..e_4)`, or a permutation of their inverses.
pub fn is_expected_slop3_solution(tuple: &[Slop3Letter; 5]) -> bool {
    if tuple.iter().all(|l| *l == Slop3Letter::Id) {
        return true;
    }
    let mut families: Vec<u8> = Vec::new();
    let mut signs: BTreeSet<bool> = BTreeSet::new();
    for l in tuple {
        match l {
            Slop3Letter::Id => return false,
            Slop3Letter::Gen { family, inverted } => {
                families.push(*family);
                signs.insert(*inverted);
            }
        }
    }
    families.sort_unstable();
    families == [0, 1, 2, 3, 4] && signs.len() == 1
}

/// Signed-count homomorphism on factor `i`: maps `e_{j,n}` to `+1`,
/// `e_{k,n}` to `-1`, every other surviving family to `0`. Relation words
/// evaluate to zero.
pub fn signed_count_hom(word: &[ApSymbol], j: u8, k: u8, factor: &Ap5FactorBase) -> i64 {
    assert!(factor.position(j).is_some() && factor.position(k).is_some() && j != k);
    word.iter()
        .map(|sym| {
            let sgn = if sym.inverted { -1 } else { 1 };
            if sym.family.family_index == j {
                sgn
            } else if sym.family.family_index == k {
                -sgn
            } else {
                0
            }
        })
        .sum()
}

/// Weighted homomorphism on factor `i`. With surviving families
/// `f0 < f1 < f2 < f3` it maps `e_{f1,n} -> (f3-f2) n`, `e_{f2,n} -> (f1-f3) n`,
/// `e_{f3,n} -> (f2-f1) n` and `e_{f0,n} -> 0`; both `sum c_p = 0` and
/// `Σ c_p f_p = 0` hold, so every defining relation evaluates to zero.
/// For factor 4 this is the map `e_{1,n} -> n`, `e_{2,n} -> -2n`, `e_{3,n} -> n`.
pub fn weighted_hom(word: &[ApSymbol], factor: &Ap5FactorBase) -> i64 {
    let f = factor.surviving.map(|x| x as i64);
    let weights = [0, f[3] - f[2], f[1] - f[3], f[2] - f[1]];
    word.iter()
        .map(|sym| {
            let pos = factor
                .position(sym.family.family_index)
                .expect("symbol family not in factor");
            let sgn: i64 = if sym.inverted { -1 } else { 1 };
            sgn * weights[pos] * sym.family.time_index
        })
        .sum()
}
