//! Ring discretization and the central-difference momentum operator.
//!
//! The ring coordinate `x` covers `[-pi, pi)` with `N` equally spaced
//! samples; the seam sits between the last sample and the first. The
//! momentum operator `-i d/dx - k` is discretized with a next-neighbour
//! central difference, so the matrix has purely imaginary off-diagonal
//! bands of magnitude `1/(2 dx)` and `-k` on the diagonal. The two
//! wraparound cells couple across the seam and carry the twist phase.

use num_complex::Complex;

use crate::error::{Result, RingError};
use crate::matrix::CMatrix;
use crate::scalar::{wrap_phase, Real};

/// Uniform sampling of the ring coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct RingGrid<T> {
    n_points: usize,
    dx: T,
    x_values: Vec<T>,
}

impl<T: Real> RingGrid<T> {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(RingError::StencilDegenerate(n_points));
        }
        let dx = T::two_pi() / T::from_count(n_points);
        let x_values = (0..n_points)
            .map(|j| -T::PI() + T::from_count(j) * dx)
            .collect();
        Ok(Self {
            n_points,
            dx,
            x_values,
        })
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn x_values(&self) -> &[T] {
        &self.x_values
    }

    /// Samples a function of the coordinate at every grid point.
    pub fn sample<F>(&self, f: F) -> Vec<Complex<T>>
    where
        F: Fn(T) -> Complex<T>,
    {
        self.x_values.iter().map(|&x| f(x)).collect()
    }
}

pub fn make_ring_grid<T: Real>(n_points: usize) -> Result<RingGrid<T>> {
    RingGrid::new(n_points)
}

/// Discretized momentum operator with gauge constant and seam twist.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T> {
    grid: RingGrid<T>,
    gauge_k: T,
    twist_phi: T,
    entries: CMatrix<T>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn grid(&self) -> &RingGrid<T> {
        &self.grid
    }

    pub fn gauge_k(&self) -> T {
        self.gauge_k
    }

    /// Twist phase, canonicalized into (-pi, pi].
    pub fn twist_phi(&self) -> T {
        self.twist_phi
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix<T> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.grid.n_points
    }
}

impl<T> AsRef<CMatrix<T>> for OperatorMatrix<T> {
    fn as_ref(&self) -> &CMatrix<T> {
        &self.entries
    }
}

/// Periodic (untwisted) momentum operator.
pub fn build_linear_operator<T: Real>(grid: &RingGrid<T>, gauge_k: T) -> OperatorMatrix<T> {
    assemble(grid, gauge_k, T::zero())
}

/// Momentum operator whose seam cells are rotated in opposite directions by `twist_phi`.
///
/// Row 0 reaches back across the seam with `+i e^{-i phi} / (2 dx)` and row
/// `N-1` reaches forward with the conjugate `-i e^{+i phi} / (2 dx)`, so a
/// vector obeying `v[j + N] = e^{i phi} v[j]` is differentiated smoothly
/// across the seam. `phi = 0` gives the periodic operator bit for bit.
pub fn build_twisted_operator<T: Real>(
    grid: &RingGrid<T>,
    gauge_k: T,
    twist_phi: T,
) -> OperatorMatrix<T> {
    assemble(grid, gauge_k, wrap_phase(twist_phi))
}

fn assemble<T: Real>(grid: &RingGrid<T>, gauge_k: T, twist_phi: T) -> OperatorMatrix<T> {
    let n = grid.n_points;
    let s = (T::lit(2.0) * grid.dx).recip();
    let forward = Complex::new(T::zero(), -s);
    let backward = Complex::new(T::zero(), s);
    let diag = Complex::new(T::zero() - gauge_k, T::zero());

    let mut m = CMatrix::zeros(n);
    for r in 0..n {
        m[(r, r)] = diag;
    }
    for r in 0..n - 1 {
        m[(r, r + 1)] = forward;
        m[(r + 1, r)] = backward;
    }
    let corner = Complex::new(T::zero(), T::one()) * Complex::from_polar(T::one(), -twist_phi) * s;
    m[(0, n - 1)] = corner;
    m[(n - 1, 0)] = corner.conj();

    OperatorMatrix {
        grid: grid.clone(),
        gauge_k,
        twist_phi,
        entries: m,
    }
}

/// Seam phase jump of a plane wave with momentum `q` in gauge `gauge_k`:
/// `2 pi (q + k)` reduced into (-pi, pi].
pub fn twist_from_state<T: Real>(q: T, gauge_k: T) -> T {
    wrap_phase(T::two_pi() * (q + gauge_k))
}
