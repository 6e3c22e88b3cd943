//! Hermitian eigensolver and the closed-form spectrum of the twisted ring operator.
//!
//! The solver reduces the input to Hermitian tridiagonal form with Householder
//! reflections, rescales the basis by unit phases so the tridiagonal becomes
//! real symmetric, then runs implicit-shift QL. Eigenvalues are produced in
//! real arithmetic only.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Result, RingError};
use crate::grid::RingGrid;
use crate::matrix::CMatrix;
use crate::scalar::{wrap_phase, Real};

/// QL iterations allowed per eigenvalue before giving up.
pub const MAX_ITERATIONS: usize = 50;

/// Off-diagonal deflation threshold, relative to the adjacent diagonal magnitudes.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Input symmetry tolerance, entrywise absolute.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// Column `j` pairs with `eigenvalues[j]`.
    pub eigenvectors: CMatrix<T>,
    /// `max_j max_i |(M v_j - lambda_j v_j)_i|`.
    pub residual: T,
}

impl<T: Real> SpectrumResult<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(j)
    }

    /// Largest `|<v_i, v_j> - delta_ij|` over all column pairs.
    pub fn orthonormality_defect(&self) -> T {
        let v = &self.eigenvectors;
        v.conj_transpose()
            .matmul(v)
            .max_abs_diff(&CMatrix::identity(v.dim()))
    }

    /// Index of the eigenvalue closest to `target`; ties go to the smaller eigenvalue.
    pub fn nearest_index(&self, target: T) -> Option<usize> {
        nearest_index(&self.eigenvalues, target)
    }
}

/// Index of the value in an ascending slice closest to `target`; ties go to
/// the smaller value.
pub fn nearest_index<T: Real>(sorted: &[T], target: T) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, &v) in sorted.iter().enumerate() {
        let d = (v - target).abs();
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    best.map(|(i, _)| i)
}

/// Full eigen-decomposition of a complex Hermitian matrix.
pub fn hermitian_eigen<T, M>(matrix: &M) -> Result<SpectrumResult<T>>
where
    T: Real,
    M: AsRef<CMatrix<T>> + ?Sized,
{
    let a = matrix.as_ref();
    let n = a.dim();

    let (defect, row, col) = a.hermitian_defect();
    if defect > T::tol(HERMITIAN_TOL) {
        return Err(RingError::NotHermitian {
            row,
            col,
            deviation: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    if n == 0 {
        return Ok(SpectrumResult {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0),
            residual: T::zero(),
        });
    }

    let (mut diag, mut off, mut z) = tridiagonalize(a);
    tridiagonal_ql(&mut diag, &mut off, &mut z)?;

    canonicalize_phases(&mut z);
    let order = sorted_order(&diag, &z);
    let eigenvalues: Vec<T> = order.iter().map(|&j| diag[j]).collect();
    let mut eigenvectors = CMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = z[(r, src)];
        }
    }

    let residual = residual_norm(a, &eigenvalues, &eigenvectors);
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

/// Householder reduction `A = Z T Z^H` with `T` real symmetric tridiagonal.
///
/// Returns the diagonal, the sub-diagonal (`off[i]` couples `i` and `i+1`,
/// `off[n-1] = 0`) and the accumulated unitary `Z`.
fn tridiagonalize<T: Real>(input: &CMatrix<T>) -> (Vec<T>, Vec<T>, CMatrix<T>) {
    let n = input.dim();
    let mut a = input.clone();
    let mut q = CMatrix::identity(n);
    let two = T::lit(2.0);
    let mut v = vec![Complex::<T>::zero(); n];
    let mut w = vec![Complex::<T>::zero(); n];

    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n)
            .map(|i| a[(i, k)].norm_sqr())
            .fold(T::zero(), |s, x| s + x)
            .sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        // v = x - alpha e_1 with alpha = -phase * |x| avoids cancellation
        for vi in v.iter_mut().take(k + 1) {
            *vi = Complex::zero();
        }
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] += phase * norm;
        let vnorm2 = (k + 1..n)
            .map(|i| v[i].norm_sqr())
            .fold(T::zero(), |s, x| s + x);
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = two / vnorm2;

        // A <- H A, H = I - beta v v^H
        for c in 0..n {
            let mut dot = Complex::zero();
            for i in k + 1..n {
                dot += v[i].conj() * a[(i, c)];
            }
            w[c] = dot * beta;
        }
        for i in k + 1..n {
            for c in 0..n {
                let upd = v[i] * w[c];
                a[(i, c)] -= upd;
            }
        }
        // A <- A H
        for r in 0..n {
            let mut dot = Complex::zero();
            for i in k + 1..n {
                dot += a[(r, i)] * v[i];
            }
            w[r] = dot * beta;
        }
        for r in 0..n {
            for i in k + 1..n {
                let upd = w[r] * v[i].conj();
                a[(r, i)] -= upd;
            }
        }
        // Q <- Q H
        for r in 0..n {
            let mut dot = Complex::zero();
            for i in k + 1..n {
                dot += q[(r, i)] * v[i];
            }
            let s = dot * beta;
            for i in k + 1..n {
                let upd = s * v[i].conj();
                q[(r, i)] -= upd;
            }
        }
    }

    // Rotate basis vectors by unit phases so that the sub-diagonal is real
    // and nonnegative: with d_{j+1} = d_j e_j / |e_j|, conj(d_{j+1}) e_j d_j = |e_j|.
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![T::zero(); n];
    let mut scale = Complex::new(T::one(), T::zero());
    for j in 0..n {
        if j > 0 {
            let e = a[(j, j - 1)];
            let mag = e.norm();
            off[j - 1] = mag;
            if mag > T::zero() {
                scale *= e / mag;
            }
        }
        for r in 0..n {
            q[(r, j)] *= scale;
        }
    }
    (diag, off, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, applying the
/// plane rotations to the columns of `z`.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T], z: &mut CMatrix<T>) -> Result<()> {
    let n = d.len();
    let tol = T::tol(DEFLATION_TOL);
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= tol * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                let off_norm = e.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
                return Err(RingError::NoConvergence {
                    iterations: MAX_ITERATIONS,
                    off_diagonal_norm: off_norm.to_f64().unwrap_or(f64::NAN),
                });
            }

            // Wilkinson-style shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated_early = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.dim() {
                    let zi1 = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * s + zi1 * c;
                    z[(k, i)] = zi * c - zi1 * s;
                }
            }
            if deflated_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Multiplies each column by a unit phase so that its largest-magnitude
/// component (lowest index on ties) is real and positive.
fn canonicalize_phases<T: Real>(z: &mut CMatrix<T>) {
    let n = z.dim();
    for col in 0..n {
        let mut best = 0;
        let mut best_mag = T::neg_infinity();
        for r in 0..n {
            let mag = z[(r, col)].norm();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if best_mag > T::zero() {
            let rot = z[(best, col)].conj() / best_mag;
            for r in 0..n {
                z[(r, col)] *= rot;
            }
            z[(best, col)] = Complex::new(z[(best, col)].re, T::zero());
        }
    }
}

/// Ascending by eigenvalue, ties broken by the phase of the first eigenvector component.
fn sorted_order<T: Real>(values: &[T], z: &CMatrix<T>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                z[(0, a)]
                    .arg()
                    .partial_cmp(&z[(0, b)].arg())
                    .unwrap_or(Ordering::Equal)
            })
    });
    order
}

fn residual_norm<T: Real>(a: &CMatrix<T>, values: &[T], vectors: &CMatrix<T>) -> T {
    let mut worst = T::zero();
    for (j, &lambda) in values.iter().enumerate() {
        let v = vectors.column(j);
        let av = a.mul_vec(&v);
        for (x, y) in av.iter().zip(&v) {
            worst = worst.max((*x - *y * lambda).norm());
        }
    }
    worst
}

/// Closed-form spectrum of the twisted operator: `sin((2 pi m + phi)/N)/dx - k`
/// for `m = 0..N-1`, ascending.
///
/// The twisted operator is diagonalized by `v_j = e^{i kappa j}` with
/// `e^{i kappa N} = e^{i phi}`, i.e. `kappa = (2 pi m + phi)/N`, and the
/// central difference maps that mode to `sin(kappa)/dx`.
pub fn analytic_twisted_spectrum<T: Real>(grid: &RingGrid<T>, gauge_k: T, twist_phi: T) -> Vec<T> {
    let n = grid.n_points();
    let nn = T::from_count(n);
    let phi = wrap_phase(twist_phi);
    let mut values: Vec<T> = (0..n)
        .map(|m| ((T::two_pi() * T::from_count(m) + phi) / nn).sin() / grid.dx() - gauge_k)
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    values
}
