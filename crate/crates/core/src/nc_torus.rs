//! Truncated noncommutative torus: finitely supported Laurent combinations
//! `Σ c_{h,k} e₁^h e₂^k` of two unitaries with twist `u = e^{2πi/d}` for odd
//! `d`, trace picking the constant coefficient, and the phase-scaling shift
//! `α(e_i) = θ_i e_i`.
//!
//! Monomials multiply by `(e₁^a e₂^b)(e₁^c e₂^f) = u^{-bc} e₁^{a+c} e₂^{b+f}`.
//! With this orientation of the twist the product `g g*` of the truncated
//! sum `g = Σ_{k=1}^M Σ_h c_h e₁^h e₂^k` has coefficients
//! `c_{h,k} = M (1-|k|/M)₊ Σ_l c_{l+h} conj(c_l) u^{kl}`, and
//! `τ(e₁^h e₂^k e₁^{-2h} e₂^{-2k} e₁^h e₂^k) = u^{3hk}`.

use crate::combinatorics::{CyclicSet, SignVector};
use num_complex::Complex64;
use std::collections::BTreeMap;

const PRUNE_EPS: f64 = 1e-12;

/// Generic phases used by the convergence diagnostics: `(√2, √3)` in turns,
/// non-resonant for every lattice frequency exercised in the tests. A test
/// parameter, not a semantic constant.
pub fn generic_phases() -> (f64, f64) {
    (std::f64::consts::SQRT_2, 3.0f64.sqrt())
}

/// A finitely supported element of the noncommutative torus algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    d: i64,
    coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl TorusElement {
    pub fn zero(d: i64) -> Self {
        assert!(d > 0 && d % 2 == 1, "modulus must be positive odd");
        TorusElement {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(d: i64) -> Self {
        Self::monomial(d, 0, 0, Complex64::new(1.0, 0.0))
    }

    /// `c · e₁^h e₂^k`.
    pub fn monomial(d: i64, h: i64, k: i64, c: Complex64) -> Self {
        let mut e = Self::zero(d);
        e.insert(h, k, c);
        e
    }

    pub fn modulus(&self) -> i64 {
        self.d
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, h: i64, k: i64) -> Complex64 {
        self.coeffs.get(&(h, k)).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.coeffs.iter().map(|(&hk, &c)| (hk, c))
    }

    fn insert(&mut self, h: i64, k: i64, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry((h, k)) {
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

    fn twist(&self, exponent: i64) -> Complex64 {
        let e = exponent.rem_euclid(self.d);
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / self.d as f64)
    }

    pub fn add(&self, other: &TorusElement) -> TorusElement {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (&(h, k), &c) in &other.coeffs {
            out.insert(h, k, c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> TorusElement {
        let mut out = Self::zero(self.d);
        for (&(h, k), &v) in &self.coeffs {
            out.insert(h, k, v * c);
        }
        out
    }

    /// Twisted product, bilinear over the monomial law.
    pub fn mul(&self, other: &TorusElement) -> TorusElement {
        assert_eq!(self.d, other.d);
        let mut out = Self::zero(self.d);
        for (&(h1, k1), &c1) in &self.coeffs {
            for (&(h2, k2), &c2) in &other.coeffs {
                let w = self.twist(-k1 * h2);
                out.insert(h1 + h2, k1 + k2, c1 * c2 * w);
            }
        }
        out
    }

    /// `(c e₁^h e₂^k)* = conj(c) u^{-hk} e₁^{-h} e₂^{-k}`.
    pub fn adjoint(&self) -> TorusElement {
        let mut out = Self::zero(self.d);
        for (&(h, k), &c) in &self.coeffs {
            let w = self.twist(-h * k);
            out.insert(-h, -k, c.conj() * w);
        }
        out
    }

    /// Coefficient of `e₁^0 e₂^0`.
    pub fn trace(&self) -> Complex64 {
        self.coefficient(0, 0)
    }

    /// The shift `c_{h,k} ↦ θ₁^h θ₂^k c_{h,k}` iterated `n` times, with
    /// phases given in turns.
    pub fn shifted(&self, t1: f64, t2: f64, n: i64) -> TorusElement {
        let mut out = Self::zero(self.d);
        for (&(h, k), &c) in &self.coeffs {
            let phase = 2.0 * std::f64::consts::PI * (n as f64) * (h as f64 * t1 + k as f64 * t2);
            out.insert(h, k, c * Complex64::from_polar(1.0, phase));
        }
        out
    }
}

/// `a = g g*` for `g = Σ_{k=1}^M Σ_h c_h e₁^h e₂^k`, `c_h = b(h) 1_{[1,M]}(h)`
/// with `b` a `d`-periodic map. Computed by the closed coefficient law
/// `c_{h,k} = M (1-|k|/M)₊ Σ_l c_{l+h} conj(c_l) u^{kl}`; for small `M` this
/// is asserted against the direct product `g g*` (and the acceptance suite
/// re-checks the law independently).
pub fn build_a(b: &[Complex64], m_trunc: i64, d: i64) -> TorusElement {
    assert!(m_trunc >= 1);
    assert_eq!(b.len(), d as usize);
    let coeff = |l: i64| -> Complex64 {
        if (1..=m_trunc).contains(&l) {
            b[l.rem_euclid(d) as usize]
        } else {
            Complex64::ZERO
        }
    };
    let mut a = TorusElement::zero(d);
    for h in -(m_trunc - 1)..=(m_trunc - 1) {
        for k in -(m_trunc - 1)..=(m_trunc - 1) {
            let weight = (m_trunc - k.abs()).max(0) as f64;
            if weight == 0.0 {
                continue;
            }
            let mut s = Complex64::ZERO;
            let lo = 1.max(1 - h);
            let hi = m_trunc.min(m_trunc - h);
            for l in lo..=hi {
                s += coeff(l + h) * coeff(l).conj() * a.twist(k * l);
            }
            a.insert(h, k, s * weight);
        }
    }
    if m_trunc <= 24 {
        let direct = build_a_direct(b, m_trunc, d);
        let mut max_rel = 0.0f64;
        for (&hk, &c) in &direct.coeffs {
            let rel = (c - a.coefficient(hk.0, hk.1)).norm() / (1.0 + c.norm());
            max_rel = max_rel.max(rel);
        }
        for (&hk, &c) in &a.coeffs {
            let rel = (c - direct.coefficient(hk.0, hk.1)).norm() / (1.0 + c.norm());
            max_rel = max_rel.max(rel);
        }
        assert!(
            max_rel < 1e-9,
            "coefficient law deviates from g g* ({max_rel:.3e})"
        );
    }
    a
}

/// Direct `g g*` through the generic product; quadratic in the support of `g`.
pub fn build_a_direct(b: &[Complex64], m_trunc: i64, d: i64) -> TorusElement {
    let mut g = TorusElement::zero(d);
    for k in 1..=m_trunc {
        for h in 1..=m_trunc {
            let c = b[h.rem_euclid(d) as usize];
            if c.norm() > PRUNE_EPS {
                g.insert(h, k, c);
            }
        }
    }
    g.mul(&g.adjoint())
}

/// The sign-masked periodic map `b = ε · 1_F` used by the negativity pipeline.
pub fn signed_indicator(f: &CyclicSet, signs: &SignVector) -> Vec<Complex64> {
    signs.masked(f)
}

/// The Cesàro limit of `τ(a α^n(a) α^{2n}(a))` for generic phases:
/// `Σ_{h,k} c_{h,k} c_{-2h,-2k} c_{h,k} u^{3hk}`.
pub fn generic_limit(a: &TorusElement) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (&(h, k), &c) in &a.coeffs {
        let c2 = a.coefficient(-2 * h, -2 * k);
        if c2 == Complex64::ZERO {
            continue;
        }
        acc += c * c * c2 * a.twist(3 * h * k);
    }
    acc
}

/// Symmetric empirical average `(1/(2N+1)) Σ_{n=-N}^{N} τ(a α^n(a) α^{2n}(a))`
/// with `α(e_i) = e^{2πi t_i} e_i`. Evaluated exactly by summing the closed
/// Dirichlet kernel over support pairs; algebraically identical to the
/// per-`n` average (cross-checked against it on small supports).
pub fn empirical_cesaro(a: &TorusElement, t1: f64, t2: f64, n_max: i64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (&(h1, k1), &c1) in &a.coeffs {
        for (&(h2, k2), &c2) in &a.coeffs {
            let (h3, k3) = (-(h1 + h2), -(k1 + k2));
            let c3 = a.coefficient(h3, k3);
            if c3 == Complex64::ZERO {
                continue;
            }
            // twist of E(h1,k1) E(h2,k2) E(h3,k3)
            let tw = a.twist(-k1 * h2 - (k1 + k2) * h3);
            // phase per step n: θ₁^{h2 + 2 h3} θ₂^{k2 + 2 k3}
            let freq = (h2 + 2 * h3) as f64 * t1 + (k2 + 2 * k3) as f64 * t2;
            acc += c1 * c2 * c3 * tw * dirichlet(freq, n_max);
        }
    }
    acc
}

/// Per-`n` evaluation of the same average; the small-support oracle.
pub fn empirical_cesaro_naive(a: &TorusElement, t1: f64, t2: f64, n_max: i64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for n in -n_max..=n_max {
        let a1 = a.shifted(t1, t2, n);
        let a2 = a.shifted(t1, t2, 2 * n);
        acc += a.mul(&a1).mul(&a2).trace();
    }
    acc / Complex64::new((2 * n_max + 1) as f64, 0.0)
}

/// `(1/(2N+1)) Σ_{n=-N}^{N} e^{2πi n x}` for `x` in turns.
fn dirichlet(x: f64, n_max: i64) -> f64 {
    let m = 2 * n_max + 1;
    let half = std::f64::consts::PI * x;
    let s = half.sin();
    if s.abs() < 1e-13 {
        // resonant frequency (x integral to double precision)
        return 1.0;
    }
    (m as f64 * half).sin() / (m as f64 * s)
}

/// `(1/N) Σ_{n=1}^{N} θ₁^{hn} θ₂^{kn}` for the monomial `(h, k) ≠ (0, 0)`;
/// tends to 0 for generic phases, stays at 1 on resonances.
pub fn ergodicity_probe(t1: f64, t2: f64, monomial: (i64, i64), n_max: i64) -> Complex64 {
    let (h, k) = monomial;
    assert!(
        (h, k) != (0, 0),
        "the constant monomial is fixed by the shift"
    );
    let mut acc = Complex64::ZERO;
    for n in 1..=n_max {
        let phase = 2.0 * std::f64::consts::PI * n as f64 * (h as f64 * t1 + k as f64 * t2);
        acc += Complex64::from_polar(1.0, phase);
    }
    acc / Complex64::new(n_max as f64, 0.0)
}

/// Geometric-series tail bound for the probe: `|avg| <= 2 / (N |1 - z|)`.
pub fn probe_bound(t1: f64, t2: f64, monomial: (i64, i64), n_max: i64) -> f64 {
    let (h, k) = monomial;
    let z = Complex64::from_polar(
        1.0,
        2.0 * std::f64::consts::PI * (h as f64 * t1 + k as f64 * t2),
    );
    let dist = (Complex64::new(1.0, 0.0) - z).norm();
    if dist < 1e-12 {
        f64::INFINITY
    } else {
        2.0 / (n_max as f64 * dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: &TorusElement, b: &TorusElement, tol: f64) {
        for (hk, v) in a.coefficients() {
            assert!(
                (v - b.coefficient(hk.0, hk.1)).norm() < tol,
                "mismatch at {hk:?}"
            );
        }
        for (hk, v) in b.coefficients() {
            assert!(
                (v - a.coefficient(hk.0, hk.1)).norm() < tol,
                "mismatch at {hk:?}"
            );
        }
    }

    #[test]
    fn monomial_traces() {
        let one = TorusElement::one(5);
        assert_eq!(one.trace(), c(1.0, 0.0));
        let m = TorusElement::monomial(5, 2, -1, c(3.0, 0.0));
        assert_eq!(m.trace(), Complex64::ZERO);
    }

    #[test]
    fn commutation_relation() {
        // with this twist orientation, e₁ e₂ = u e₂ e₁
        let d = 7;
        let e1 = TorusElement::monomial(d, 1, 0, c(1.0, 0.0));
        let e2 = TorusElement::monomial(d, 0, 1, c(1.0, 0.0));
        let e1e2 = e1.mul(&e2);
        let e2e1 = e2.mul(&e1);
        let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
        let expect = e2e1.scale(u);
        for (hk, v) in e1e2.coefficients() {
            assert!((v - expect.coefficient(hk.0, hk.1)).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_generators() {
        let d = 9;
        let e1 = TorusElement::monomial(d, 1, 0, c(1.0, 0.0));
        assert_close(&e1.mul(&e1.adjoint()), &TorusElement::one(d), 1e-12);
        let e2 = TorusElement::monomial(d, 0, 1, c(1.0, 0.0));
        let m = e1.mul(&e2);
        assert_close(&m.mul(&m.adjoint()), &TorusElement::one(d), 1e-12);
    }

    #[test]
    fn trace_identity_u_3hk() {
        // τ(e₁^h e₂^k e₁^{-2h} e₂^{-2k} e₁^h e₂^k) = u^{3hk}
        let d = 11;
        for h in -5i64..=5 {
            for k in -5i64..=5 {
                let x = TorusElement::monomial(d, h, k, c(1.0, 0.0));
                let y = TorusElement::monomial(d, -2 * h, -2 * k, c(1.0, 0.0));
                let t = x.mul(&y).mul(&x).trace();
                let want = Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (3 * h * k).rem_euclid(d) as f64 / d as f64,
                );
                assert!((t - want).norm() < 1e-10, "h={h} k={k}: {t} vs {want}");
            }
        }
    }

    #[test]
    fn adjoint_involution_and_positivity() {
        let d = 9;
        let mut rng = CounterRng::new(21);
        for _ in 0..10 {
            let mut x = TorusElement::zero(d);
            for _ in 0..5 {
                x.insert(
                    rng.range_i64(-4, 4),
                    rng.range_i64(-4, 4),
                    c(rng.unit() * 2.0 - 1.0, rng.unit() * 2.0 - 1.0),
                );
            }
            assert_close(&x.adjoint().adjoint(), &x, 1e-12);
            let val = x.mul(&x.adjoint()).trace();
            let expected: f64 = x.coefficients().map(|(_, v)| v.norm_sqr()).sum();
            assert!(val.im.abs() < 1e-10);
            assert!((val.re - expected).abs() < 1e-9);
            assert!(val.re >= -1e-10);
        }
    }

    #[test]
    fn trace_is_tracial() {
        let d = 7;
        let mut rng = CounterRng::new(23);
        for _ in 0..10 {
            let mut x = TorusElement::zero(d);
            let mut y = TorusElement::zero(d);
            for _ in 0..4 {
                x.insert(
                    rng.range_i64(-3, 3),
                    rng.range_i64(-3, 3),
                    c(rng.unit(), rng.unit()),
                );
                y.insert(
                    rng.range_i64(-3, 3),
                    rng.range_i64(-3, 3),
                    c(rng.unit(), rng.unit()),
                );
            }
            let xy = x.mul(&y).trace();
            let yx = y.mul(&x).trace();
            assert!((xy - yx).norm() < 1e-12);
        }
    }

    #[test]
    fn build_a_trivial_cases() {
        let d = 5;
        // b = 0 gives a = 0
        let zero = vec![Complex64::ZERO; d as usize];
        assert_eq!(build_a(&zero, 3, d).support_size(), 0);
        // M = 1, b = δ₁: g = e₁ e₂ is unitary, so a = 1
        let mut delta = vec![Complex64::ZERO; d as usize];
        delta[1] = c(1.0, 0.0);
        let a = build_a(&delta, 1, d);
        assert_close(&a, &TorusElement::one(d), 1e-12);
    }

    #[test]
    fn build_a_matches_direct_product() {
        let mut rng = CounterRng::new(31);
        for (d, m) in [(5i64, 2i64), (7, 4), (9, 8), (9, 5)] {
            let b: Vec<Complex64> = (0..d)
                .map(|_| c(rng.unit() * 2.0 - 1.0, rng.unit() * 2.0 - 1.0))
                .collect();
            let fast = build_a(&b, m, d);
            let direct = build_a_direct(&b, m, d);
            for (hk, v) in direct.coefficients() {
                assert!(
                    (v - fast.coefficient(hk.0, hk.1)).norm() < 1e-9 * (1.0 + v.norm()),
                    "d={d} M={m} at {hk:?}"
                );
            }
            assert_eq!(fast.support_size(), direct.support_size());
        }
    }

    #[test]
    fn generic_limit_trivial_cases() {
        let d = 5;
        assert_eq!(generic_limit(&TorusElement::one(d)), c(1.0, 0.0));
        let t = TorusElement::monomial(d, 0, 0, c(0.5, 0.0));
        assert!((generic_limit(&t) - c(0.125, 0.0)).norm() < 1e-12);
        assert_eq!(generic_limit(&TorusElement::zero(d)), Complex64::ZERO);
    }

    #[test]
    fn generic_limit_real_for_self_adjoint_a() {
        let d = 9;
        let mut rng = CounterRng::new(41);
        let b: Vec<Complex64> = (0..d).map(|_| c(rng.unit() * 2.0 - 1.0, 0.0)).collect();
        let a = build_a(&b, 6, d);
        let lim = generic_limit(&a);
        assert!(
            lim.im.abs() < 1e-9 * (1.0 + lim.re.abs()),
            "limit {lim} not real"
        );
    }

    #[test]
    fn empirical_matches_naive_on_small_support() {
        let d = 5;
        let mut rng = CounterRng::new(43);
        let b: Vec<Complex64> = (0..d)
            .map(|_| c(rng.unit() * 2.0 - 1.0, rng.unit() * 2.0 - 1.0))
            .collect();
        let a = build_a(&b, 3, d);
        let (t1, t2) = generic_phases();
        for n in [0i64, 1, 7, 40] {
            let fast = empirical_cesaro(&a, t1, t2, n);
            let slow = empirical_cesaro_naive(&a, t1, t2, n);
            assert!(
                (fast - slow).norm() < 1e-9 * (1.0 + slow.norm()),
                "N={n}: {fast} vs {slow}"
            );
        }
        // N = 0 is τ(a³)
        let cube = a.mul(&a).mul(&a).trace();
        assert!((empirical_cesaro(&a, t1, t2, 0) - cube).norm() < 1e-9);
        // a = 1 averages to 1 for every N
        let one = TorusElement::one(d);
        assert!((empirical_cesaro(&one, t1, t2, 123) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn empirical_converges_to_generic_limit() {
        let d = 5;
        let mut rng = CounterRng::new(47);
        let b: Vec<Complex64> = (0..d).map(|_| c(rng.unit() * 2.0 - 1.0, 0.0)).collect();
        let a = build_a(&b, 4, d);
        let lim = generic_limit(&a);
        let (t1, t2) = generic_phases();
        let far = empirical_cesaro(&a, t1, t2, 500);
        let near = empirical_cesaro(&a, t1, t2, 20000);
        assert!((near - lim).norm() < (far - lim).norm());
        assert!((near - lim).norm() < 5e-3 * (1.0 + lim.norm()));
    }

    #[test]
    fn ergodicity_probe_behaviour() {
        let (t1, t2) = generic_phases();
        let n = 10_000;
        // generic phases: average small, within the geometric bound
        for mono in [(1i64, 0i64), (0, 1), (1, 1), (-3, 2)] {
            let avg = ergodicity_probe(t1, t2, mono, n);
            let bound = probe_bound(t1, t2, mono, n);
            assert!(
                avg.norm() <= bound + 1e-12,
                "{mono:?}: {} > {bound}",
                avg.norm()
            );
            assert!(
                avg.norm() < 1e-2,
                "{mono:?} average too large: {}",
                avg.norm()
            );
        }
        // resonant phase: average stays at 1
        let avg = ergodicity_probe(0.5, 0.25, (2, 0), 100);
        assert!((avg - c(1.0, 0.0)).norm() < 1e-12);
    }
}
