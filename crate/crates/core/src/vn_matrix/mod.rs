//! Finite-dimensional von Neumann dynamical systems: the d×d complex matrix
//! algebra with normalized trace `τ(B) = tr(B)/d` and a unitary-conjugation
//! shift `α(B) = U B U*`.
//!
//! Working in the eigenbasis of `U` makes `α^n` an entrywise phase twist,
//! which turns Cesàro limits of trace products into exact resonance sums
//! whenever the eigenphases are commensurate.

mod cmatrix;
mod eigen;
mod negative;

pub use cmatrix::CMatrix;
pub use eigen::{hermitian_eigen, unitary_eigen, HermitianEigen, UnitaryEigen};
pub use negative::{
    build_negav_matrix, has_sum, psd_factor, restricted_third_moment, tao_prediction,
    CrossedProductTrace, PsdWitness,
};

use num_complex::Complex64;
use std::fmt;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
pub const EIGEN_FLOOR_TOL: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixError {
    NotUnitary {
        deviation: f64,
    },
    NotHermitian {
        deviation: f64,
    },
    NotPsd {
        floor: f64,
    },
    /// The eigenphases are not commensurate; exact period averaging is
    /// unavailable.
    PeriodUndetected,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:.3e})")
            }
            MatrixError::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:.3e})")
            }
            MatrixError::NotPsd { floor } => {
                write!(
                    f,
                    "matrix is not positive semi-definite (eigen floor {floor:.3e})"
                )
            }
            MatrixError::PeriodUndetected => write!(f, "eigenphases are not commensurate"),
        }
    }
}

impl std::error::Error for MatrixError {}

/// How the eigenphases of the shift unitary relate to roots of unity.
#[derive(Debug, Clone)]
enum PhaseInfo {
    /// Phase of eigenvector `j` is `num[j] / den` turns; `α` has period
    /// dividing `den`.
    Rational {
        numerators: Vec<i64>,
        denominator: i64,
    },
    Irrational,
}

/// A d×d matrix algebra with normalized trace and the shift `B ↦ U B U*`.
pub struct MatrixSystem {
    dim: usize,
    u: CMatrix,
    /// Columns are the eigenvectors of `U`.
    basis: CMatrix,
    /// True when `basis` is the identity (diagonal systems); basis changes
    /// are skipped in that case.
    standard_basis: bool,
    /// Eigenphases in turns, `U v_j = e^{2πi θ_j} v_j`.
    thetas: Vec<f64>,
    phases: PhaseInfo,
}

impl MatrixSystem {
    /// The standard diagonal-phase system: `U = diag(e^{2πi j/d})`.
    pub fn diagonal_phase(dim: usize) -> Self {
        let u = CMatrix::from_fn(dim, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / dim as f64)
            } else {
                Complex64::ZERO
            }
        });
        MatrixSystem {
            dim,
            u,
            basis: CMatrix::identity(dim),
            standard_basis: true,
            thetas: (0..dim).map(|j| j as f64 / dim as f64).collect(),
            phases: PhaseInfo::Rational {
                numerators: (0..dim as i64).collect(),
                denominator: dim as i64,
            },
        }
    }

    /// A diagonal system with arbitrary phases (in turns).
    pub fn diagonal_with_phases(thetas: Vec<f64>) -> Self {
        let dim = thetas.len();
        let u = CMatrix::from_fn(dim, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * thetas[i])
            } else {
                Complex64::ZERO
            }
        });
        let phases = detect_rational(&thetas);
        MatrixSystem {
            dim,
            u,
            basis: CMatrix::identity(dim),
            standard_basis: true,
            thetas,
            phases,
        }
    }

    /// A system conjugated by an arbitrary unitary; the eigenstructure is
    /// computed numerically.
    pub fn from_unitary(u: CMatrix) -> Result<Self, MatrixError> {
        let dev = u
            .matmul(&u.adjoint())
            .max_abs_diff(&CMatrix::identity(u.dim()));
        if dev > UNITARY_TOL {
            return Err(MatrixError::NotUnitary { deviation: dev });
        }
        let dim = u.dim();
        let e = unitary_eigen(&u);
        let thetas: Vec<f64> = e
            .values
            .iter()
            .map(|v| {
                let t = v.arg() / (2.0 * std::f64::consts::PI);
                t.rem_euclid(1.0)
            })
            .collect();
        let phases = detect_rational(&thetas);
        Ok(MatrixSystem {
            dim,
            u,
            basis: e.vectors,
            standard_basis: false,
            thetas,
            phases,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    /// `τ(B) = tr(B) / d`.
    pub fn trace(&self, b: &CMatrix) -> Complex64 {
        b.matrix_trace() / Complex64::new(self.dim as f64, 0.0)
    }

    /// `α(B) = U B U*`.
    pub fn shift(&self, b: &CMatrix) -> CMatrix {
        self.u.matmul(b).matmul(&self.u.adjoint())
    }

    /// `α^n(B)` computed in the eigenbasis (entrywise phase twist).
    pub fn shift_n(&self, b: &CMatrix, n: i64) -> CMatrix {
        let tilde = self.to_eigenbasis(b);
        let twisted = self.twist(&tilde, n, 1);
        self.from_eigenbasis(&twisted)
    }

    pub fn to_eigenbasis(&self, b: &CMatrix) -> CMatrix {
        if self.standard_basis {
            return b.clone();
        }
        self.basis.adjoint().matmul(b).matmul(&self.basis)
    }

    pub fn from_eigenbasis(&self, b: &CMatrix) -> CMatrix {
        if self.standard_basis {
            return b.clone();
        }
        self.basis.matmul(b).matmul(&self.basis.adjoint())
    }

    /// Entrywise `e^{2πi c n (θ_j - θ_k)}` twist of an eigenbasis matrix:
    /// the representation of `α^{cn}`.
    fn twist(&self, tilde: &CMatrix, n: i64, c: i64) -> CMatrix {
        let d = self.dim;
        let mut out = tilde.clone();
        let phase: Vec<Complex64> = (0..d)
            .map(|j| {
                Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (c * n) as f64 * self.thetas[j],
                )
            })
            .collect();
        for j in 0..d {
            for k in 0..d {
                out[(j, k)] = tilde[(j, k)] * phase[j] * phase[k].conj();
            }
        }
        out
    }

    /// `τ(a · α^n(a) · α^{2n}(a) ⋯ α^{(k-1)n}(a))`.
    pub fn multi_trace(&self, a: &CMatrix, n: i64, k: usize) -> Complex64 {
        assert!(k >= 1);
        let tilde = self.to_eigenbasis(a);
        let mut prod = tilde.clone();
        for t in 1..k {
            prod = prod.matmul(&self.twist(&tilde, n, t as i64));
        }
        prod.matrix_trace() / Complex64::new(self.dim as f64, 0.0)
    }

    /// Symmetric empirical average of [`Self::multi_trace`] over `|n| <= n_max`.
    pub fn empirical_cesaro(&self, a: &CMatrix, k: usize, n_max: i64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for n in -n_max..=n_max {
            acc += self.multi_trace(a, n, k);
        }
        acc / Complex64::new((2 * n_max + 1) as f64, 0.0)
    }

    /// Exact period of the shift (the order of the phase pattern), when the
    /// eigenphases are commensurate.
    pub fn period(&self) -> Result<i64, MatrixError> {
        match &self.phases {
            PhaseInfo::Rational { denominator, .. } => Ok(*denominator),
            PhaseInfo::Irrational => Err(MatrixError::PeriodUndetected),
        }
    }

    /// The exact Cesàro limit of `τ(a α^n(a) ⋯ α^{(k-1)n}(a))`: for
    /// commensurate phases this is the resonance sum over index tuples whose
    /// phase exponents cancel, equal to the average over one exact period
    /// and hence to the `N → ∞` symmetric Cesàro limit.
    pub fn cesaro_limit(&self, a: &CMatrix, k: usize) -> Result<Complex64, MatrixError> {
        let PhaseInfo::Rational {
            numerators,
            denominator,
        } = &self.phases
        else {
            return Err(MatrixError::PeriodUndetected);
        };
        let d = self.dim;
        let q = *denominator;
        let tilde = self.to_eigenbasis(a);
        match k {
            2 => {
                // resonance: θ_j = θ_k
                let mut acc = Complex64::ZERO;
                for j in 0..d {
                    for l in 0..d {
                        if numerators[j].rem_euclid(q) == numerators[l].rem_euclid(q) {
                            acc += tilde[(j, l)] * tilde[(l, j)];
                        }
                    }
                }
                Ok(acc / Complex64::new(d as f64, 0.0))
            }
            3 => {
                // resonance: θ_k + θ_l - 2 θ_j = 0
                let mut buckets: std::collections::HashMap<i64, Vec<usize>> =
                    std::collections::HashMap::new();
                for (l, &p) in numerators.iter().enumerate() {
                    buckets.entry(p.rem_euclid(q)).or_default().push(l);
                }
                let mut acc = Complex64::ZERO;
                for j in 0..d {
                    for kk in 0..d {
                        let want = (2 * numerators[j] - numerators[kk]).rem_euclid(q);
                        if let Some(ls) = buckets.get(&want) {
                            for &l in ls {
                                acc += tilde[(j, kk)] * tilde[(kk, l)] * tilde[(l, j)];
                            }
                        }
                    }
                }
                Ok(acc / Complex64::new(d as f64, 0.0))
            }
            _ => {
                // average over one exact period
                let mut acc = Complex64::ZERO;
                for n in 0..q {
                    acc += self.multi_trace(a, n, k);
                }
                Ok(acc / Complex64::new(q as f64, 0.0))
            }
        }
    }

    /// Exact Cesàro limit of `α^n(a)` itself (the mean ergodic theorem):
    /// kills every eigenbasis entry with distinct phases. For the standard
    /// diagonal-phase system this is the restriction to the diagonal.
    pub fn ergodic_average(&self, a: &CMatrix) -> Result<CMatrix, MatrixError> {
        let PhaseInfo::Rational {
            numerators,
            denominator,
        } = &self.phases
        else {
            return Err(MatrixError::PeriodUndetected);
        };
        let q = *denominator;
        let tilde = self.to_eigenbasis(a);
        let d = self.dim;
        let projected = CMatrix::from_fn(d, |j, k| {
            if numerators[j].rem_euclid(q) == numerators[k].rem_euclid(q) {
                tilde[(j, k)]
            } else {
                Complex64::ZERO
            }
        });
        Ok(self.from_eigenbasis(&projected))
    }

    /// Direct average of `α^n(a)` over `n = 1..=n_count`.
    pub fn shift_average(&self, a: &CMatrix, n_count: i64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim);
        for n in 1..=n_count {
            acc = acc.add(&self.shift_n(a, n));
        }
        acc.scale(Complex64::new(1.0 / n_count as f64, 0.0))
    }

    /// `(1/N) Σ_{n=1}^{N} α^n(a) α^{2n}(b)`.
    pub fn triple_average(&self, a: &CMatrix, b: &CMatrix, n_count: i64) -> CMatrix {
        let ta = self.to_eigenbasis(a);
        let tb = self.to_eigenbasis(b);
        let mut acc = CMatrix::zeros(self.dim);
        for n in 1..=n_count {
            let term = self.twist(&ta, n, 1).matmul(&self.twist(&tb, n, 2));
            acc = acc.add(&term);
        }
        self.from_eigenbasis(&acc.scale(Complex64::new(1.0 / n_count as f64, 0.0)))
    }

    /// Exact limit of [`Self::triple_average`]: the resonance sum
    /// `θ_j - θ_k + 2(θ_k - θ_l) = 0`, equal to the average over one period.
    pub fn triple_average_limit(&self, a: &CMatrix, b: &CMatrix) -> Result<CMatrix, MatrixError> {
        let PhaseInfo::Rational { denominator, .. } = &self.phases else {
            return Err(MatrixError::PeriodUndetected);
        };
        Ok(self.triple_average(a, b, *denominator))
    }

    /// Diagonalizes the shift superoperator `B ↦ U B U*` over the
    /// d²-dimensional matrix space. The eigenoperators are `√d · v_j v_k*`
    /// with eigenvalue `λ_j λ̄_k`; they are orthonormal for `⟨A,B⟩ = τ(A*B)`
    /// and span everything, so the weakly-stable complement is zero.
    pub fn reversible_split(&self) -> Vec<(Complex64, CMatrix)> {
        let d = self.dim;
        let scale = (d as f64).sqrt();
        let mut out = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                let op = CMatrix::from_fn(d, |r, c| {
                    self.basis[(r, j)] * self.basis[(c, k)].conj() * scale
                });
                let lam = Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (self.thetas[j] - self.thetas[k]),
                );
                out.push((lam, op));
            }
        }
        out
    }
}

/// Continued-fraction detection of a common denominator for the phases.
fn detect_rational(thetas: &[f64]) -> PhaseInfo {
    const MAX_DEN: i64 = 1 << 16;
    const TOL: f64 = 1e-9;
    let mut nums = Vec::with_capacity(thetas.len());
    let mut den: i64 = 1;
    for &t in thetas {
        let Some((p, q)) = rational_approx(t.rem_euclid(1.0), MAX_DEN, TOL) else {
            return PhaseInfo::Irrational;
        };
        den = lcm(den, q);
        if den > MAX_DEN {
            return PhaseInfo::Irrational;
        }
        nums.push((p, q));
    }
    let numerators = nums.into_iter().map(|(p, q)| p * (den / q)).collect();
    PhaseInfo::Rational {
        numerators,
        denominator: den,
    }
}

fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor() as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let approx = p1 as f64 / q1 as f64;
        if (x - approx).abs() < tol {
            return Some((p1.rem_euclid(q1.max(1)), q1));
        }
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    let approx = p1 as f64 / q1.max(1) as f64;
    if q1 >= 1 && (x - approx).abs() < tol {
        Some((p1.rem_euclid(q1), q1))
    } else {
        None
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn random_matrix(d: usize, rng: &mut CounterRng) -> CMatrix {
        CMatrix::from_fn(d, |_, _| {
            Complex64::new(rng.unit() * 2.0 - 1.0, rng.unit() * 2.0 - 1.0)
        })
    }

    #[test]
    fn shift_preserves_trace() {
        let sys = MatrixSystem::diagonal_phase(8);
        let mut rng = CounterRng::new(1);
        for _ in 0..10 {
            let b = random_matrix(8, &mut rng);
            let tb = sys.trace(&b);
            let ts = sys.trace(&sys.shift(&b));
            assert!((tb - ts).norm() < 1e-12);
        }
    }

    #[test]
    fn shift_n_matches_repeated_shift() {
        let sys = MatrixSystem::diagonal_phase(6);
        let mut rng = CounterRng::new(2);
        let b = random_matrix(6, &mut rng);
        let mut it = b.clone();
        for n in 1..=5 {
            it = sys.shift(&it);
            assert!(sys.shift_n(&b, n).max_abs_diff(&it) < 1e-11, "n = {n}");
        }
        // negative shifts invert
        let back = sys.shift_n(&sys.shift_n(&b, 3), -3);
        assert!(back.max_abs_diff(&b) < 1e-11);
    }

    #[test]
    fn multi_trace_identity_element() {
        let sys = MatrixSystem::diagonal_phase(5);
        let id = CMatrix::identity(5);
        for k in 1..=4 {
            for n in -3i64..=3 {
                let t = sys.multi_trace(&id, n, k);
                assert!((t - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn multi_trace_symmetry_for_self_adjoint() {
        // conj τ(a α^n(a) α^{2n}(a)) = τ(a α^{-n}(a) α^{-2n}(a))
        let sys = MatrixSystem::diagonal_phase(7);
        let mut rng = CounterRng::new(3);
        let b = random_matrix(7, &mut rng);
        let a = b.add(&b.adjoint());
        for n in -4i64..=4 {
            let fwd = sys.multi_trace(&a, n, 3);
            let bwd = sys.multi_trace(&a, -n, 3);
            assert!((fwd.conj() - bwd).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn cesaro_limit_matches_period_average() {
        let sys = MatrixSystem::diagonal_phase(6);
        let mut rng = CounterRng::new(4);
        let b = random_matrix(6, &mut rng);
        let a = b.add(&b.adjoint());
        for k in [2usize, 3] {
            let exact = sys.cesaro_limit(&a, k).unwrap();
            let mut avg = Complex64::ZERO;
            let p = sys.period().unwrap();
            for n in 0..p {
                avg += sys.multi_trace(&a, n, k);
            }
            avg /= Complex64::new(p as f64, 0.0);
            assert!((exact - avg).norm() < 1e-10, "k = {k}: {exact} vs {avg}");
        }
    }

    #[test]
    fn cesaro_limit_k2_is_projection_pairing() {
        // k = 2 limit equals τ(a E_diag(a)) for the diagonal-phase system
        let d = 9;
        let sys = MatrixSystem::diagonal_phase(d);
        let mut rng = CounterRng::new(5);
        let a = random_matrix(d, &mut rng);
        let limit = sys.cesaro_limit(&a, 2).unwrap();
        let mut expect = Complex64::ZERO;
        for j in 0..d {
            expect += a[(j, j)] * a[(j, j)];
        }
        expect /= Complex64::new(d as f64, 0.0);
        assert!((limit - expect).norm() < 1e-11);
    }

    #[test]
    fn ergodic_average_is_diagonal_restriction() {
        let d = 8;
        let sys = MatrixSystem::diagonal_phase(d);
        let mut rng = CounterRng::new(6);
        let a = random_matrix(d, &mut rng);
        let avg = sys.ergodic_average(&a).unwrap();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { a[(i, j)] } else { Complex64::ZERO };
                assert!((avg[(i, j)] - want).norm() < 1e-12);
            }
        }
        // and it matches the direct average over one exact period
        let direct = sys.shift_average(&a, sys.period().unwrap());
        assert!(direct.max_abs_diff(&avg) < 1e-10);
    }

    #[test]
    fn triple_average_periodicity() {
        let d = 5;
        let sys = MatrixSystem::diagonal_phase(d);
        let mut rng = CounterRng::new(7);
        let a = random_matrix(d, &mut rng);
        let b = random_matrix(d, &mut rng);
        let one = sys.triple_average_limit(&a, &b).unwrap();
        for k in [2i64, 3] {
            let multi = sys.triple_average(&a, &b, sys.period().unwrap() * k);
            assert!(multi.max_abs_diff(&one) < 1e-10, "k = {k}");
        }
        // degenerate inputs
        let zero = CMatrix::zeros(d);
        assert!(sys.triple_average(&zero, &b, 7).max_abs() < 1e-14);
        let id = CMatrix::identity(d);
        assert!(
            sys.triple_average(&id, &id, 11)
                .max_abs_diff(&CMatrix::identity(d))
                < 1e-12
        );
    }

    #[test]
    fn reversible_split_diagonal_system() {
        let d = 5;
        let sys = MatrixSystem::diagonal_phase(d);
        let split = sys.reversible_split();
        assert_eq!(split.len(), d * d);
        // eigen-operators are matrix units with eigenvalue e^{2πi(j-k)/d}
        for (idx, (lam, op)) in split.iter().enumerate() {
            let (j, k) = (idx / d, idx % d);
            let want = Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (j as f64 - k as f64) / d as f64,
            );
            assert!((lam - want).norm() < 1e-12);
            // α(op) = λ op
            let shifted = sys.shift(op);
            assert!(shifted.max_abs_diff(&op.scale(*lam)) < 1e-9);
        }
    }

    #[test]
    fn reversible_split_orthonormal_general_unitary() {
        // conjugated diagonal system
        let d = 4;
        let mut rng = CounterRng::new(8);
        let h = {
            let b = random_matrix(d, &mut rng);
            b.add(&b.adjoint())
        };
        let v = hermitian_eigen(&h).vectors;
        let lam = CMatrix::from_fn(d, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / d as f64)
            } else {
                Complex64::ZERO
            }
        });
        let u = v.matmul(&lam).matmul(&v.adjoint());
        let sys = MatrixSystem::from_unitary(u).unwrap();
        let split = sys.reversible_split();
        assert_eq!(split.len(), d * d);
        for (lam, op) in &split {
            assert!(sys.shift(op).max_abs_diff(&op.scale(*lam)) < 1e-9);
        }
        // Gram orthonormality under τ(A* B)
        for (i, (_, a)) in split.iter().enumerate() {
            for (j, (_, b)) in split.iter().enumerate() {
                let g = sys.trace(&a.adjoint().matmul(b));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - Complex64::new(want, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn period_detection() {
        let sys = MatrixSystem::diagonal_phase(12);
        assert_eq!(sys.period().unwrap(), 12);
        let sys = MatrixSystem::diagonal_with_phases(vec![0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(sys.period().unwrap(), 12);
        let irr = MatrixSystem::diagonal_with_phases(vec![std::f64::consts::SQRT_2 - 1.0, 0.5]);
        assert!(matches!(irr.period(), Err(MatrixError::PeriodUndetected)));
        assert!(matches!(
            irr.cesaro_limit(&CMatrix::identity(2), 3),
            Err(MatrixError::PeriodUndetected)
        ));
    }

    #[test]
    fn from_unitary_rejects_non_unitary() {
        let m = CMatrix::from_fn(3, |i, j| Complex64::new((i + j) as f64, 0.0));
        assert!(matches!(
            MatrixSystem::from_unitary(m),
            Err(MatrixError::NotUnitary { .. })
        ));
    }
}
