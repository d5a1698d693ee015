//! Hermitian and unitary eigendecompositions.
//!
//! Hermitian matrices are reduced to real symmetric tridiagonal form by
//! complex Householder reflections, then diagonalized by the implicit-shift
//! QL iteration with accumulated transformations. Unitary matrices are
//! diagonalized through the commuting Hermitian pair `(U+U*)/2`, `(U-U*)/2i`.

use super::cmatrix::CMatrix;
use num_complex::Complex64;

const TINY: f64 = 1e-300;

pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix. The input's Hermitian deviation
/// must be negligible; only the Hermitian part informs the output.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let n = a.dim();
    if n == 0 {
        return HermitianEigen {
            values: vec![],
            vectors: CMatrix::zeros(0),
        };
    }
    let mut w = a.clone();
    let mut q = CMatrix::identity(n);

    // Householder reduction to Hermitian tridiagonal form.
    for k in 0..n.saturating_sub(2) {
        let norm2: f64 = (k + 1..n).map(|i| w[(i, k)].norm_sqr()).sum();
        let norm = norm2.sqrt();
        if norm < TINY {
            continue;
        }
        let x0 = w[(k + 1, k)];
        let phase = if x0.norm() > TINY {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v = vec![Complex64::ZERO; n];
        for i in k + 1..n {
            v[i] = w[(i, k)];
        }
        v[k + 1] -= alpha;
        let vn2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vn2 < TINY {
            continue;
        }
        let beta = 2.0 / vn2;
        // w := H w H with H = I - beta v v^*. The reflector only mixes the
        // trailing block; column/row k are set directly to (alpha, 0, ...).
        let lo = k + 1;
        let mut p = vec![Complex64::ZERO; n];
        for i in lo..n {
            let mut s = Complex64::ZERO;
            for j in lo..n {
                s += w[(i, j)] * v[j];
            }
            p[i] = s * beta;
        }
        let sigma: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let half = sigma * (0.5 * beta);
        let u: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - half * vi).collect();
        for i in lo..n {
            for j in lo..n {
                let delta = u[i] * v[j].conj() + v[i] * u[j].conj();
                w[(i, j)] -= delta;
            }
        }
        w[(lo, k)] = alpha;
        w[(k, lo)] = alpha.conj();
        for i in lo + 1..n {
            w[(i, k)] = Complex64::ZERO;
            w[(k, i)] = Complex64::ZERO;
        }
        // q := q H, touching only columns k+1..n
        for i in 0..n {
            let mut s = Complex64::ZERO;
            for j in lo..n {
                s += q[(i, j)] * v[j];
            }
            s *= beta;
            for j in lo..n {
                let vc = v[j].conj();
                q[(i, j)] -= s * vc;
            }
        }
    }

    // Phase-rotate so the off-diagonal becomes real non-negative.
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n];
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for i in 0..n {
        diag[i] = w[(i, i)].re;
    }
    for i in 0..n - 1 {
        let e = w[(i + 1, i)] * phases[i];
        let mag = e.norm();
        phases[i + 1] = if mag > TINY {
            e / mag
        } else {
            Complex64::new(1.0, 0.0)
        };
        off[i] = mag;
    }
    q.scale_columns(&phases);

    tridiagonal_ql(&mut diag, &mut off, &mut q);

    // sort ascending, permute vectors accordingly
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, |i, j| q[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, rotations
/// accumulated into the complex column basis `z`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut CMatrix) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    let eps = f64::EPSILON;
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |m, &x| m.max(x.abs()));
    let floor = eps * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd + floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 64, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // accumulate the rotation in columns i, i+1 of z
                let dim = z.dim();
                for k in 0..dim {
                    f = z[(k, i + 1)].re;
                    let fi = z[(k, i + 1)].im;
                    let zre = z[(k, i)].re;
                    let zim = z[(k, i)].im;
                    z[(k, i + 1)] = Complex64::new(s * zre + c * f, s * zim + c * fi);
                    z[(k, i)] = Complex64::new(c * zre - s * f, c * zim - s * fi);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

pub struct UnitaryEigen {
    /// Unit-modulus eigenvalues.
    pub values: Vec<Complex64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a unitary matrix via its commuting Hermitian real
/// and imaginary parts: diagonalize `(U+U*)/2`, then split each eigenspace
/// by `(U-U*)/2i`.
pub fn unitary_eigen(u: &CMatrix) -> UnitaryEigen {
    let n = u.dim();
    let ustar = u.adjoint();
    let x = u.add(&ustar).scale(Complex64::new(0.5, 0.0));
    let y = u.sub(&ustar).scale(Complex64::new(0.0, -0.5));
    let ex = hermitian_eigen(&x);
    let mut vectors = ex.vectors;
    let mut values = vec![Complex64::ZERO; n];

    // group numerically equal eigenvalues of X
    let tol = 1e-8 * (1.0 + x.max_abs());
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (ex.values[end] - ex.values[start]).abs() <= tol {
            end += 1;
        }
        let g = end - start;
        if g == 1 {
            let col: Vec<Complex64> = (0..n).map(|i| vectors[(i, start)]).collect();
            let yv = mat_vec(&y, &col);
            let lam_im: Complex64 = col.iter().zip(&yv).map(|(a, b)| a.conj() * b).sum();
            values[start] = Complex64::new(ex.values[start], lam_im.re);
        } else {
            // project Y onto the eigenspace and diagonalize the block
            let block = CMatrix::from_fn(g, |a, b| {
                let mut s = Complex64::ZERO;
                for i in 0..n {
                    let mut yv = Complex64::ZERO;
                    for j in 0..n {
                        yv += y[(i, j)] * vectors[(j, start + b)];
                    }
                    s += vectors[(i, start + a)].conj() * yv;
                }
                s
            });
            let eb = hermitian_eigen(&block);
            // rotate the eigenspace columns
            let old: Vec<Vec<Complex64>> = (0..g)
                .map(|b| (0..n).map(|i| vectors[(i, start + b)]).collect())
                .collect();
            for b in 0..g {
                for i in 0..n {
                    let s: Complex64 = old
                        .iter()
                        .enumerate()
                        .map(|(a, col)| col[i] * eb.vectors[(a, b)])
                        .sum();
                    vectors[(i, start + b)] = s;
                }
                values[start + b] = Complex64::new(ex.values[start], eb.values[b]);
            }
        }
        start = end;
    }
    // snap to unit modulus (the pair (x, y) satisfies x^2 + y^2 = 1)
    for v in values.iter_mut() {
        let m = v.norm();
        if m > TINY {
            *v /= m;
        }
    }
    UnitaryEigen { values, vectors }
}

fn mat_vec(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}
