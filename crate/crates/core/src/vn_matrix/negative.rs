//! The negative restricted-third-moment pipeline: the rank-2 matrix built on
//! a three-copy set `E`, its cyclic third moment, Hermitian square roots,
//! and the crossed-product trace value of `τ(a α^n(a) α^{2n}(a))` which is
//! independent of `n ≠ 0`.

use super::cmatrix::CMatrix;
use super::eigen::hermitian_eigen;
use super::{MatrixError, EIGEN_FLOOR_TOL, HERMITIAN_TOL};
use crate::combinatorics::CyclicSet;
use num_complex::Complex64;
use rayon::prelude::*;

/// A Hermitian matrix together with its certified smallest eigenvalue.
#[derive(Debug, Clone)]
pub struct PsdWitness {
    matrix: CMatrix,
    eigen_floor: f64,
}

impl PsdWitness {
    pub fn new(matrix: CMatrix) -> Result<Self, MatrixError> {
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(MatrixError::NotHermitian { deviation: dev });
        }
        let eig = hermitian_eigen(&matrix);
        let floor = eig.values.first().copied().unwrap_or(0.0);
        if floor < EIGEN_FLOOR_TOL {
            return Err(MatrixError::NotPsd { floor });
        }
        Ok(PsdWitness {
            matrix,
            eigen_floor: floor,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigen_floor(&self) -> f64 {
        self.eigen_floor
    }
}

/// `A(j,k) = 1_E(j) 1_E(k) + 1_E(j) ω^{-j} 1_E(k) ω^{k}` with `ω = e^{2πi/3}`:
/// a sum of two rank-one projections, positive semi-definite by construction
/// and certified numerically.
pub fn build_negav_matrix(e_set: &CyclicSet, d: i64) -> Result<PsdWitness, MatrixError> {
    assert_eq!(e_set.modulus(), d);
    assert!(d % 3 == 0, "need 3 | d");
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let ind: Vec<f64> = (0..d)
        .map(|x| if e_set.contains(x) { 1.0 } else { 0.0 })
        .collect();
    let a = CMatrix::from_fn(d as usize, |j, k| {
        let jj = ind[j];
        let kk = ind[k];
        if jj == 0.0 || kk == 0.0 {
            return Complex64::ZERO;
        }
        let twist = omega.powi(-(j as i32)) * omega.powi(k as i32);
        Complex64::new(1.0, 0.0) + twist
    });
    PsdWitness::new(a)
}

/// `Σ_{n,r} A(n, n+r) A(n+r, n+2r) A(n+2r, n)` with indices mod `d`;
/// real by conjugate symmetry.
pub fn restricted_third_moment(a: &CMatrix) -> f64 {
    let d = a.dim();
    let mut acc = Complex64::ZERO;
    for n in 0..d {
        for r in 0..d {
            let p1 = (n + r) % d;
            let p2 = (n + 2 * r) % d;
            acc += a[(n, p1)] * a[(p1, p2)] * a[(p2, n)];
        }
    }
    debug_assert!(acc.im.abs() < 1e-7 * (1.0 + acc.re.abs()));
    acc.re
}

/// Hermitian square root via eigendecomposition: `b` with `b b^* = A`,
/// reconstruction certified in max-norm. Negative eigenvalue dust is
/// clipped to zero; genuinely negative spectra are rejected.
pub fn psd_factor(a: &CMatrix) -> Result<CMatrix, MatrixError> {
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(MatrixError::NotHermitian { deviation: dev });
    }
    let eig = hermitian_eigen(a);
    let floor = eig.values.first().copied().unwrap_or(0.0);
    if floor < -1e-6 {
        return Err(MatrixError::NotPsd { floor });
    }

    let roots: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let mut scaled = eig.vectors.clone();
    scaled.scale_columns(
        &roots
            .iter()
            .map(|&r| Complex64::new(r, 0.0))
            .collect::<Vec<_>>(),
    );
    let b = scaled.matmul(&eig.vectors.adjoint());
    let tol = 1e-8 + 4.0 * floor.min(0.0).abs();
    let err = b.matmul(&b.adjoint()).max_abs_diff(a);
    assert!(
        err <= tol * (1.0 + a.max_abs()),
        "square-root reconstruction error {err} exceeds tolerance"
    );
    Ok(b)
}

/// Precomputed tables for the exact crossed-product trace value
/// `τ(a α^n(a) α^{2n}(a))` (`n ≠ 0`), where
/// `a = (Σ_j f_j m^j)(Σ_j f_j m^j)^*` with `f_j(x) = b(x, x+j) 1_{1<=j<=Nd}`:
///
/// `(1/d) Σ_x Σ_h g_h(x) g_{-2h}(x+h) g_h(x-h)`,
/// `g_h(x) = Σ_j f_{j+h}(x) conj(f_j(x+h))`.
///
/// The `j`-sum splits into whole periods (a Gram-matrix multiple) plus a
/// window correction that depends only on `h mod d` and the sign of `h`, so
/// the tables cost `O(d^3)` once and each evaluation `O(N d^2)`.
pub struct CrossedProductTrace {
    d: i64,
    gram: CMatrix,
    wpos: Vec<Vec<Complex64>>,
    wneg: Vec<Vec<Complex64>>,
}

impl CrossedProductTrace {
    pub fn new(b: &CMatrix) -> Self {
        let d = b.dim() as i64;
        let du = d as usize;
        let gram = b.matmul(&b.adjoint());
        // rem(h̄) = (d - h̄) mod d window entries;
        // positive h: window z = x + h̄ + 1 .. x + h̄ + rem
        // negative h (|h| ≡ h̄): window z = x + 1 .. x + rem
        let build = |positive: bool| -> Vec<Vec<Complex64>> {
            (0..du)
                .into_par_iter()
                .map(|hbar| {
                    let rem = ((d - hbar as i64) % d) as usize;
                    let mut row = vec![Complex64::ZERO; du];
                    for x in 0..du {
                        let partner = if positive {
                            (x + hbar) % du
                        } else {
                            (x + du - hbar) % du
                        };
                        let zstart = if positive { x + hbar + 1 } else { x + 1 };
                        let mut acc = Complex64::ZERO;
                        for t in 0..rem {
                            let z = (zstart + t) % du;
                            acc += b[(x, z)] * b[(partner, z)].conj();
                        }
                        row[x] = acc;
                    }
                    row
                })
                .collect()
        };
        let wpos = build(true);
        let wneg = build(false);
        CrossedProductTrace {
            d,
            gram,
            wpos,
            wneg,
        }
    }

    fn g(&self, nd: i64, h: i64, x: i64) -> Complex64 {
        let d = self.d;
        let du = d as usize;
        let habs = h.abs();
        if habs >= nd {
            return Complex64::ZERO;
        }
        let q = ((nd - habs) / d) as f64;
        let hbar = (habs % d) as usize;
        let xu = x.rem_euclid(d) as usize;
        if h >= 0 {
            let partner = (xu + hbar) % du;
            self.gram[(xu, partner)] * q + self.wpos[hbar][xu]
        } else {
            let partner = (xu + du - hbar) % du;
            self.gram[(xu, partner)] * q + self.wneg[hbar][xu]
        }
    }

    pub fn eval(&self, n_big: i64) -> f64 {
        assert!(n_big >= 1);
        let d = self.d;
        let nd = n_big * d;
        let mut acc = Complex64::ZERO;
        for x in 0..d {
            for h in -(nd - 1)..nd {
                let v1 = self.g(nd, h, x);
                if v1 == Complex64::ZERO {
                    continue;
                }
                let v2 = self.g(nd, -2 * h, x + h);
                if v2 == Complex64::ZERO {
                    continue;
                }
                let v3 = self.g(nd, h, x - h);
                acc += v1 * v2 * v3;
            }
        }
        let result = acc / Complex64::new(d as f64, 0.0);
        debug_assert!(
            result.im.abs() <= 1e-6 * (1.0 + result.re.abs()),
            "crossed-product trace should be real, got {result}"
        );
        result.re
    }
}

/// One-shot evaluation of the crossed-product trace value.
pub fn has_sum(b: &CMatrix, n_big: i64) -> f64 {
    CrossedProductTrace::new(b).eval(n_big)
}

/// The τ-scaling target: the large-N prediction
/// `(17/48) (N^4/d) Σ_{m,r} A(m,m+r) A(m+r,m+2r) A(m+2r,m)` divided by
/// `N^4`; the constant is `∫ (1-|h|)_+^2 (1-|2h|)_+ dh = 17/48`.
pub fn tao_prediction(a: &CMatrix) -> f64 {
    let d = a.dim() as f64;
    (17.0 / 48.0) * restricted_third_moment(a) / d
}
