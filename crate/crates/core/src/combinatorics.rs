//! Progression-free sets and hexagon statistics in cyclic groups.
//!
//! Provides the sphere-digit construction of 3AP-free sets, exact 3AP and
//! hexagon counters with brute-force oracles, the shifted/dilated three-copy
//! set `E` whose progression statistics drive the negative restricted third
//! moment, and randomized sign-vector search for a negative hexagon sum `X`.

use crate::rng::CounterRng;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A subset of `Z/dZ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicSet {
    modulus: i64,
    members: BTreeSet<i64>,
}

impl CyclicSet {
    pub fn new(modulus: i64, members: impl IntoIterator<Item = i64>) -> Self {
        assert!(modulus > 0);
        let members: BTreeSet<i64> = members.into_iter().map(|x| x.rem_euclid(modulus)).collect();
        CyclicSet { modulus, members }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.members.contains(&x.rem_euclid(self.modulus))
    }

    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        self.members.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.members.iter().copied().collect()
    }

    fn bitset(&self) -> Vec<bool> {
        let mut b = vec![false; self.modulus as usize];
        for &x in &self.members {
            b[x as usize] = true;
        }
        b
    }

    /// No `x, x+r, x+2r` with `r != 0` all members (arithmetic mod `d`).
    pub fn is_3ap_free(&self) -> bool {
        count_3aps(self, SpacingFilter::All) == self.len() as u64
    }
}

/// A choice of sign per residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector {
    modulus: i64,
    signs: Vec<i8>,
}

impl SignVector {
    pub fn new(modulus: i64, signs: Vec<i8>) -> Self {
        assert_eq!(signs.len(), modulus as usize);
        assert!(signs.iter().all(|&s| s == 1 || s == -1));
        SignVector { modulus, signs }
    }

    pub fn random(modulus: i64, rng: &mut CounterRng) -> Self {
        SignVector {
            modulus,
            signs: (0..modulus).map(|_| rng.sign()).collect(),
        }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn sign(&self, x: i64) -> i8 {
        self.signs[x.rem_euclid(self.modulus) as usize]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The map `b = ε · 1_F` as a complex vector.
    pub fn masked(&self, f: &CyclicSet) -> Vec<Complex64> {
        assert_eq!(self.modulus, f.modulus());
        (0..self.modulus)
            .map(|x| {
                if f.contains(x) {
                    Complex64::new(self.signs[x as usize] as f64, 0.0)
                } else {
                    Complex64::ZERO
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    /// The digit embedding does not fit in the requested cyclic group.
    InfeasibleParameters(String),
}

impl fmt::Display for CombinatoricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombinatoricsError::InfeasibleParameters(msg) => {
                write!(f, "infeasible parameters: {msg}")
            }
        }
    }
}

impl std::error::Error for CombinatoricsError {}

/// Sphere-digit construction: embeds the largest sphere
/// `{x in [-R, R]^n : |x|^2 = r}` into `Z/dZ` using base `10R` digits and a
/// unit shift, landing in `[1, d/10]`. The image contains no non-trivial
/// three-term progression.
pub fn behrend_set(d: i64, radius: i64, n_dim: u32) -> Result<CyclicSet, CombinatoricsError> {
    if d <= 0 || radius < 1 || n_dim < 1 {
        return Err(CombinatoricsError::InfeasibleParameters(
            "need d > 0, R >= 1, n >= 1".into(),
        ));
    }
    let base = 10 * radius;
    let mut cap: i64 = 1;
    for _ in 0..n_dim {
        cap = cap.checked_mul(base).ok_or_else(|| {
            CombinatoricsError::InfeasibleParameters("digit base overflow".into())
        })?;
        if cap > d {
            return Err(CombinatoricsError::InfeasibleParameters(format!(
                "(10R)^n = {cap} exceeds d = {d}"
            )));
        }
    }
    // enumerate [-R, R]^n grouped by squared norm
    let side = (2 * radius + 1) as usize;
    let mut points_by_norm: std::collections::BTreeMap<i64, Vec<Vec<i64>>> =
        std::collections::BTreeMap::new();
    let total = side.pow(n_dim);
    if total > 4_000_000 {
        return Err(CombinatoricsError::InfeasibleParameters(
            "sphere enumeration too large".into(),
        ));
    }
    for idx in 0..total {
        let mut rem = idx;
        let mut coords = Vec::with_capacity(n_dim as usize);
        let mut norm = 0i64;
        for _ in 0..n_dim {
            let digit = (rem % side) as i64 - radius;
            rem /= side;
            coords.push(digit);
            norm += digit * digit;
        }
        points_by_norm.entry(norm).or_default().push(coords);
    }
    let (_, sphere) = points_by_norm
        .iter()
        .max_by_key(|(_, pts)| pts.len())
        .expect("nonempty enumeration");
    let embed = |coords: &[i64]| -> i64 {
        let mut v = 0i64;
        for &c in coords.iter().rev() {
            v = v * base + (c + radius);
        }
        v + 1
    };
    let members: Vec<i64> = sphere.iter().map(|p| embed(p)).collect();
    let max = members.iter().copied().max().unwrap_or(1);
    if max > d / 10 {
        return Err(CombinatoricsError::InfeasibleParameters(format!(
            "embedded maximum {max} exceeds d/10 = {}",
            d / 10
        )));
    }
    Ok(CyclicSet::new(d, members))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingFilter {
    All,
    Div3,
    NonDiv3,
}

/// Exact count of pairs `(x, r)` with `x, x+r, x+2r` all in `F`, filtered on
/// `r mod 3`. Trivial progressions are the `r = 0` pairs.
pub fn count_3aps(f: &CyclicSet, filter: SpacingFilter) -> u64 {
    let d = f.modulus();
    let bits = f.bitset();
    let mut count = 0u64;
    for x in 0..d {
        if !bits[x as usize] {
            continue;
        }
        for r in 0..d {
            let keep = match filter {
                SpacingFilter::All => true,
                SpacingFilter::Div3 => r % 3 == 0,
                SpacingFilter::NonDiv3 => r % 3 != 0,
            };
            if !keep {
                continue;
            }
            let b = ((x + r) % d) as usize;
            let c = ((x + 2 * r) % d) as usize;
            if bits[b] && bits[c] {
                count += 1;
            }
        }
    }
    count
}

/// The six residues of the hexagon with base point `x` and parameters `h, k`.
pub fn hexagon_points(d: i64, x: i64, h: i64, k: i64) -> [i64; 6] {
    [
        x.rem_euclid(d),
        (x + h).rem_euclid(d),
        (x + k).rem_euclid(d),
        (x + k + 2 * h).rem_euclid(d),
        (x + 2 * k + h).rem_euclid(d),
        (x + 2 * k + 2 * h).rem_euclid(d),
    ]
}

/// Exact count of triples `(x, h, k)` whose hexagon lies in `F`.
/// Enumerates `(x, x+h, x+k)` over `F^3` and checks the remaining three
/// memberships.
pub fn count_hexagons(f: &CyclicSet) -> u64 {
    hexagon_triples(f).len() as u64
}

/// All `(x, h, k)` triples whose hexagon lies in `F`.
pub fn hexagon_triples(f: &CyclicSet) -> Vec<(i64, i64, i64)> {
    let d = f.modulus();
    let bits = f.bitset();
    let members = f.to_vec();
    let mut out = Vec::new();
    for &x in &members {
        for &p in &members {
            let h = (p - x).rem_euclid(d);
            for &q in &members {
                let k = (q - x).rem_euclid(d);
                let a = (x + k + 2 * h).rem_euclid(d);
                let b = (x + 2 * k + h).rem_euclid(d);
                let c = (x + 2 * k + 2 * h).rem_euclid(d);
                if bits[a as usize] && bits[b as usize] && bits[c as usize] {
                    out.push((x, h, k));
                }
            }
        }
    }
    out
}

/// O(d^3) brute-force hexagon count over all parameter triples; the oracle
/// for [`count_hexagons`] at small `d`.
pub fn count_hexagons_brute(f: &CyclicSet) -> u64 {
    let d = f.modulus();
    let bits = f.bitset();
    let mut count = 0u64;
    for x in 0..d {
        for h in 0..d {
            for k in 0..d {
                if hexagon_points(d, x, h, k).iter().all(|&p| bits[p as usize]) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Result of the three-copy construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NegavSample {
    pub e_set: CyclicSet,
    pub shifts: [i64; 3],
    /// 3AP pairs with spacing not divisible by 3.
    pub good: u64,
    /// 3AP pairs with spacing divisible by 3 (only the trivial `r = 0` ones).
    pub bad: u64,
}

impl NegavSample {
    /// The restricted third moment of the rank-2 matrix built on `E` equals
    /// `8 * bad - good`.
    pub fn restricted_third_moment(&self) -> i64 {
        8 * self.bad as i64 - self.good as i64
    }
}

/// Three randomly shifted, dilated copies of `F`:
/// `E = { 3(f + h_i) + i : i in {0,1,2}, f in F }` with `h_i` uniform in
/// `[1, d/3]`. By construction the only progressions in `E` with spacing
/// divisible by 3 are trivial, so `bad = |E|`.
pub fn lemma_negav_e(f: &CyclicSet, d: i64, seed: u64) -> NegavSample {
    assert!(d % 3 == 0, "need 3 | d");
    assert!(
        f.members().all(|x| (1..=d / 10).contains(&x)),
        "F must lie in [1, d/10]"
    );
    let mut rng = CounterRng::new(seed);
    let shifts = [(); 3].map(|_| 1 + rng.below((d / 3) as u64) as i64);
    let mut members = Vec::new();
    for (i, &h) in shifts.iter().enumerate() {
        for fx in f.members() {
            members.push((3 * (fx + h) + i as i64).rem_euclid(d));
        }
    }
    let e_set = CyclicSet::new(d, members);
    let good = count_3aps(&e_set, SpacingFilter::NonDiv3);
    let bad = count_3aps(&e_set, SpacingFilter::Div3);
    NegavSample {
        e_set,
        shifts,
        good,
        bad,
    }
}

/// Scans seeds `seed0, seed0+1, ...` until the three-copy construction
/// yields `good > 8 * bad`. Seed scanning is cheap because the class sums
/// of `f0 - 2 f1 + f2` determine `good` without rebuilding `E`.
pub fn search_negav_seed(
    f: &CyclicSet,
    d: i64,
    seed0: u64,
    max_seeds: u64,
) -> Option<(u64, NegavSample)> {
    assert!(d % 3 == 0);
    let m = d / 3;
    let classes = offset_classes(&f.to_vec(), m);
    let f_len = f.len() as i64;
    for seed in seed0..seed0.saturating_add(max_seeds) {
        let mut rng = CounterRng::new(seed);
        let h = [(); 3].map(|_| 1 + rng.below(m as u64) as i64);
        let u = (-(h[0] - 2 * h[1] + h[2])).rem_euclid(m);
        let v = (-(h[1] - 2 * h[0] + h[2]) - 1).rem_euclid(m);
        let w = (-(h[0] + h[1] - 2 * h[2]) + 1).rem_euclid(m);
        let predicted_good = 2 * (classes[u as usize] + classes[v as usize] + classes[w as usize]);
        if predicted_good > 24 * f_len {
            let sample = lemma_negav_e(f, d, seed);
            debug_assert_eq!(sample.good as i64, predicted_good);
            if sample.good > 8 * sample.bad {
                return Some((seed, sample));
            }
        }
    }
    None
}

/// Class sums `N(c) = #{(f0,f1,f2) in F^3 : f0 - 2 f1 + f2 = c mod m}`.
fn offset_classes(f: &[i64], m: i64) -> Vec<i64> {
    let mut classes = vec![0i64; m as usize];
    for &f0 in f {
        for &f1 in f {
            for &f2 in f {
                classes[(f0 - 2 * f1 + f2).rem_euclid(m) as usize] += 1;
            }
        }
    }
    classes
}

/// Simulated-annealing search for a 3AP-free `F` inside `[1, n]` maximizing
/// the margin `2 * (N(u)+N(v)+N(w)) - 24 |F|` over linked class triples;
/// a positive margin means the three-copy construction can beat the `8x`
/// threshold for a suitable shift triple. Moves add, remove, or swap a
/// single element. Returns the best set and its margin.
pub fn anneal_concentrated_set(n: i64, m: i64, seed: u64, steps: u64) -> (Vec<i64>, f64) {
    let mut rng = CounterRng::new(seed);
    let mut current = greedy_3apfree_subset(n, &mut rng);
    let min_size = (current.len() * 3 / 5).max(4);
    let ratio_of = |f: &[i64]| -> f64 {
        best_linked_classes(&offset_classes(f, m), m).0 as f64 / (24.0 * f.len() as f64)
    };
    let mut cur = ratio_of(&current);
    let mut best = (current.clone(), cur);
    for step in 0..steps {
        let temp = 0.08 * (1.0 - step as f64 / steps as f64).max(0.02) + 0.002;
        let mut next = current.clone();
        match rng.below(4) {
            0 => {
                let x = 1 + rng.below(n as u64) as i64;
                if next.contains(&x) {
                    continue;
                }
                next.push(x);
            }
            3 => {
                if next.len() <= min_size {
                    continue;
                }
                let out_idx = rng.usize_below(next.len());
                next.swap_remove(out_idx);
            }
            _ => {
                let out_idx = rng.usize_below(next.len());
                let x = 1 + rng.below(n as u64) as i64;
                if next.contains(&x) {
                    continue;
                }
                next[out_idx] = x;
            }
        }
        if !integer_3ap_free(&next) {
            continue;
        }
        let ratio = ratio_of(&next);
        let accept = ratio >= cur || rng.unit() < ((ratio - cur) / temp).exp();
        if accept {
            current = next;
            cur = ratio;
            if ratio > best.1 {
                best = (current.clone(), ratio);
            }
        }
    }
    best.0.sort_unstable();
    best
}

/// Best `2 * (N(u) + N(v) + N(w))` over class triples with `u+v+w = 0 mod m`,
/// together with the argmax triple.
pub fn best_linked_classes(classes: &[i64], m: i64) -> (i64, (i64, i64, i64)) {
    let mut idx: Vec<usize> = (0..classes.len()).collect();
    idx.sort_unstable_by_key(|&i| std::cmp::Reverse(classes[i]));
    let top = &idx[..idx.len().min(80)];
    let mut best = (i64::MIN, (0, 0, 0));
    for &u in top {
        for &v in top {
            let w = (-(u as i64) - v as i64).rem_euclid(m) as usize;
            let s = 2 * (classes[u] + classes[v] + classes[w]);
            if s > best.0 {
                best = (s, (u as i64, v as i64, w as i64));
            }
        }
    }
    best
}

fn integer_3ap_free(f: &[i64]) -> bool {
    let set: BTreeSet<i64> = f.iter().copied().collect();
    for &a in &set {
        for &b in &set {
            if b > a && set.contains(&(2 * b - a)) {
                return false;
            }
        }
    }
    true
}

fn greedy_3apfree_subset(n: i64, rng: &mut CounterRng) -> Vec<i64> {
    let mut order: Vec<i64> = (1..=n).collect();
    rng.shuffle(&mut order);
    let mut f: Vec<i64> = Vec::new();
    for x in order {
        f.push(x);
        if !integer_3ap_free(&f) {
            f.pop();
        }
    }
    f
}

/// `X(b) = Σ_{x,h,k} conj(b(x)) b(x+h) b(x+k) conj(b(x+k+2h)) conj(b(x+2k+h)) b(x+2k+2h)`.
pub fn hexagon_sum_x(b: &[Complex64]) -> Complex64 {
    let d = b.len() as i64;
    let mut total = Complex64::ZERO;
    for x in 0..d {
        for h in 0..d {
            for k in 0..d {
                let p = hexagon_points(d, x, h, k);
                total += b[p[0] as usize].conj()
                    * b[p[1] as usize]
                    * b[p[2] as usize]
                    * b[p[3] as usize].conj()
                    * b[p[4] as usize].conj()
                    * b[p[5] as usize];
            }
        }
    }
    total
}

/// Precomputed hexagon incidence for fast sign-vector evaluation: per
/// hexagon, the residues appearing an odd number of times (even
/// multiplicities contribute +1 regardless of signs).
pub struct HexagonTable {
    pub modulus: i64,
    odd_residues: Vec<Vec<u32>>,
    /// per residue, the hexagon indices it flips
    incidence: Vec<Vec<u32>>,
}

impl HexagonTable {
    pub fn new(f: &CyclicSet) -> Self {
        let d = f.modulus();
        let triples = hexagon_triples(f);
        let mut odd_residues = Vec::with_capacity(triples.len());
        let mut incidence = vec![Vec::new(); d as usize];
        for (idx, &(x, h, k)) in triples.iter().enumerate() {
            let pts = hexagon_points(d, x, h, k);
            let mut counts = std::collections::BTreeMap::new();
            for &p in &pts {
                *counts.entry(p).or_insert(0u32) += 1;
            }
            let odd: Vec<u32> = counts
                .iter()
                .filter(|(_, &c)| c % 2 == 1)
                .map(|(&p, _)| p as u32)
                .collect();
            for &p in &odd {
                incidence[p as usize].push(idx as u32);
            }
            odd_residues.push(odd);
        }
        HexagonTable {
            modulus: d,
            odd_residues,
            incidence,
        }
    }

    pub fn hexagon_count(&self) -> u64 {
        self.odd_residues.len() as u64
    }

    /// Hexagons whose sign product is +1 for every sign choice.
    pub fn even_hexagons(&self) -> u64 {
        self.odd_residues.iter().filter(|o| o.is_empty()).count() as u64
    }

    /// `X` for the sign vector; integer-valued.
    pub fn x_value(&self, signs: &SignVector) -> i64 {
        self.odd_residues
            .iter()
            .map(|odd| {
                odd.iter()
                    .map(|&p| signs.sign(p as i64) as i64)
                    .product::<i64>()
            })
            .sum()
    }

    fn x_and_values(&self, signs: &SignVector) -> (i64, Vec<i8>) {
        let values: Vec<i8> = self
            .odd_residues
            .iter()
            .map(|odd| odd.iter().map(|&p| signs.sign(p as i64)).product::<i8>())
            .collect();
        (values.iter().map(|&v| v as i64).sum(), values)
    }
}

/// Exact expectation of `X` over independent uniform signs: the number of
/// hexagons whose six points all have even multiplicity. For a 3AP-free `F`
/// and odd `d` this is `|F|` (only the `h = k = 0` hexagons survive).
pub fn exact_expectation_x(f: &CyclicSet) -> u64 {
    HexagonTable::new(f).even_hexagons()
}

/// Draws random sign vectors (optionally refined by greedy single flips)
/// until `X < 0`; returns the witness.
pub fn search_negative_x(
    f: &CyclicSet,
    d: i64,
    seed: u64,
    max_draws: u64,
) -> Option<(SignVector, i64)> {
    assert_eq!(f.modulus(), d);
    assert!(d % 2 == 1, "collapse analysis requires odd d");
    assert!(f.is_3ap_free(), "F must be 3AP-free");
    let table = HexagonTable::new(f);
    for draw in 0..max_draws {
        let mut rng = CounterRng::stream(seed, draw);
        let mut signs = SignVector::random(d, &mut rng);
        let (mut x, mut values) = table.x_and_values(&signs);
        // greedy single-flip descent
        let mut improved = true;
        while improved && x >= 0 {
            improved = false;
            for res in 0..d {
                let delta: i64 = table.incidence[res as usize]
                    .iter()
                    .map(|&i| -2 * values[i as usize] as i64)
                    .sum();
                if delta < 0 {
                    x += delta;
                    signs.signs[res as usize] = -signs.signs[res as usize];
                    for &i in &table.incidence[res as usize] {
                        values[i as usize] = -values[i as usize];
                    }
                    improved = true;
                }
            }
        }
        if x < 0 {
            debug_assert_eq!(table.x_value(&signs), x);
            return Some((signs, x));
        }
    }
    None
}

/// Monte-Carlo mean and standard error of `X` over `draws` sign vectors.
pub fn monte_carlo_mean_x(f: &CyclicSet, seed: u64, draws: u64) -> (f64, f64) {
    let table = HexagonTable::new(f);
    let d = f.modulus();
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for draw in 0..draws {
        let mut rng = CounterRng::stream(seed, draw);
        let signs = SignVector::random(d, &mut rng);
        let x = table.x_value(&signs) as f64;
        sum += x;
        sumsq += x * x;
    }
    let mean = sum / draws as f64;
    let var = (sumsq / draws as f64 - mean * mean).max(0.0);
    (mean, (var / draws as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_set_basics() {
        let f = CyclicSet::new(10, [3, 13, -1]);
        assert_eq!(f.len(), 2); // 3 == 13 mod 10
        assert!(f.contains(9));
        assert!(f.contains(-1));
    }

    #[test]
    fn count_3aps_trivial_cases() {
        let empty = CyclicSet::new(12, []);
        assert_eq!(count_3aps(&empty, SpacingFilter::All), 0);
        let full = CyclicSet::new(12, 0..12);
        assert_eq!(count_3aps(&full, SpacingFilter::All), 144);
    }

    #[test]
    fn ap_free_set_counts_only_trivial() {
        // {1, 2, 4, 8} has no 3AP mod 13? 1,2,... check via counter
        let f = CyclicSet::new(13, [1, 2, 5, 11]);
        let c = count_3aps(&f, SpacingFilter::All);
        assert_eq!(f.is_3ap_free(), c == f.len() as u64);
    }

    #[test]
    fn behrend_set_is_3ap_free_and_contained() {
        let f = behrend_set(1000, 1, 2).unwrap();
        assert!(!f.is_empty());
        assert!(f.is_3ap_free());
        assert!(f.members().all(|x| (1..=100).contains(&x)));
        assert_eq!(count_3aps(&f, SpacingFilter::All), f.len() as u64);
    }

    #[test]
    fn behrend_degenerate_dimension() {
        // n = 1: spheres are {±s}, at most 2 points
        let f = behrend_set(1000, 2, 1).unwrap();
        assert!(f.len() <= 2);
    }

    #[test]
    fn behrend_infeasible() {
        assert!(behrend_set(50, 2, 3).is_err());
        // fits (10R)^n <= d but overflows [1, d/10]
        assert!(behrend_set(100, 1, 2).is_err());
    }

    #[test]
    fn hexagon_counts_match_brute_force() {
        let mut rng = CounterRng::new(99);
        for trial in 0..8 {
            let d = 9 + 3 * trial as i64;
            let members: Vec<i64> = (0..d).filter(|_| rng.unit() < 0.3).collect();
            let f = CyclicSet::new(d, members);
            assert_eq!(count_hexagons(&f), count_hexagons_brute(&f), "d = {d}");
        }
    }

    #[test]
    fn hexagon_empty_and_singleton() {
        let empty = CyclicSet::new(15, []);
        assert_eq!(count_hexagons(&empty), 0);
        let single = CyclicSet::new(15, [4]);
        // only h = k = 0 works when d is odd
        assert_eq!(count_hexagons(&single), 1);
    }

    #[test]
    fn hexagon_sum_matches_counts_for_all_plus() {
        let f = CyclicSet::new(25, [1, 5, 7, 8, 10, 14, 16]);
        assert!(f.is_3ap_free());
        let signs = SignVector::new(25, vec![1; 25]);
        let b = signs.masked(&f);
        let x = hexagon_sum_x(&b);
        assert!((x.im).abs() < 1e-9);
        assert!((x.re - count_hexagons(&f) as f64).abs() < 1e-9);
        let zero = vec![Complex64::ZERO; 25];
        assert_eq!(hexagon_sum_x(&zero), Complex64::ZERO);
    }

    #[test]
    fn hexagon_table_matches_direct_sum() {
        let mut rng = CounterRng::new(7);
        let d = 21;
        let members: Vec<i64> = (0..d).filter(|_| rng.unit() < 0.35).collect();
        let f = CyclicSet::new(d, members);
        let table = HexagonTable::new(&f);
        for trial in 0..5 {
            let mut r2 = CounterRng::stream(11, trial);
            let signs = SignVector::random(d, &mut r2);
            let b = signs.masked(&f);
            let direct = hexagon_sum_x(&b);
            assert!((direct.im).abs() < 1e-9);
            assert_eq!(direct.re.round() as i64, table.x_value(&signs));
        }
    }

    #[test]
    fn expectation_is_f_size_for_3apfree_odd_d() {
        let f = CyclicSet::new(25, [1, 5, 7, 8, 10, 14, 16]);
        assert_eq!(exact_expectation_x(&f), f.len() as u64);
        let f2 = CyclicSet::new(41, [1, 2, 4, 8, 9, 21, 30]);
        if f2.is_3ap_free() {
            assert_eq!(exact_expectation_x(&f2), f2.len() as u64);
        }
    }

    #[test]
    fn negav_e_construction_properties() {
        let d = 210;
        let f = CyclicSet::new(d, [1, 2, 4, 8, 9, 11]);
        assert!(f.is_3ap_free());
        let sample = lemma_negav_e(&f, d, 12345);
        // copies are disjoint mod 3, so |E| = 3|F|
        assert_eq!(sample.e_set.len(), 3 * f.len());
        // only trivial progressions with spacing divisible by 3
        assert_eq!(sample.bad, sample.e_set.len() as u64);
        assert_eq!(
            sample.good + sample.bad,
            count_3aps(&sample.e_set, SpacingFilter::All)
        );
        // empty F gives empty E
        let empty = lemma_negav_e(&CyclicSet::new(d, []), d, 1);
        assert!(empty.e_set.is_empty());
        assert_eq!((empty.good, empty.bad), (0, 0));
    }

    #[test]
    fn negative_x_no_witness_without_hexagons() {
        // F with only trivial hexagons: X = |F| > 0 for all signs
        let f = CyclicSet::new(11, [1, 2]);
        assert!(f.is_3ap_free());
        let table = HexagonTable::new(&f);
        assert_eq!(table.hexagon_count(), 2);
        assert!(search_negative_x(&f, 11, 5, 20).is_none());
    }

    #[test]
    fn negative_x_witness_found_at_d25() {
        let f = CyclicSet::new(25, [1, 5, 7, 8, 10, 14, 16]);
        let (signs, x) = search_negative_x(&f, 25, 1, 200).expect("witness");
        assert!(x < 0);
        let b = signs.masked(&f);
        let direct = hexagon_sum_x(&b);
        assert!((direct.re - x as f64).abs() < 1e-9);
    }

    #[test]
    fn monte_carlo_mean_near_exact() {
        let f = CyclicSet::new(25, [1, 5, 7, 8, 10, 14, 16]);
        let (mean, se) = monte_carlo_mean_x(&f, 777, 4000);
        let exact = exact_expectation_x(&f) as f64;
        assert!(
            (mean - exact).abs() <= 4.0 * se.max(0.05),
            "mean {mean} too far from exact {exact} (se {se})"
        );
    }
}
