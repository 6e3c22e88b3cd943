//! Exact plane-wave algebra on the ring and on the infinite line.
//!
//! A plane wave `psi(x) = A e^{i (q + k) x}` is an eigenfunction of
//! `-i d/dx - k` with eigenvalue `q` for every gauge `k`. Whether it is an
//! admissible state on the ring depends on the boundary rule: the periodic
//! rule needs `q + k` to be an integer, while the density/current rule
//! accepts every real `q` and leaves a phase jump at the seam.

use num_complex::Complex;

use crate::error::{Result, RingError};
use crate::grid::{twist_from_state, RingGrid};
use crate::scalar::{distance_to_integer, wrap_phase, Real};

/// Default tolerance for integer tests on total phase winding.
pub const DEFAULT_INTEGER_TOL: f64 = 1e-9;

/// Default tolerance for seam-continuity checks.
pub const DEFAULT_SEAM_TOL: f64 = 1e-9;

/// Complex wavefunction on the ring with an analytic derivative.
///
/// The density, slope and current helpers default to their formulas in
/// terms of `value` and `derivative`; closed forms may override them.
pub trait RingWave<T: Real> {
    fn value(&self, x: T) -> Complex<T>;

    fn derivative(&self, x: T) -> Complex<T>;

    /// `|psi|^2`
    fn density(&self, x: T) -> T {
        self.value(x).norm_sqr()
    }

    /// `d|psi|^2/dx = 2 Re(conj(psi) psi')`
    fn density_slope(&self, x: T) -> T {
        T::lit(2.0) * (self.value(x).conj() * self.derivative(x)).re
    }

    /// `|psi|^2 d(alpha)/dx = Im(conj(psi) psi')`
    fn current(&self, x: T) -> T {
        (self.value(x).conj() * self.derivative(x)).im
    }

    /// Phase gradient `d(alpha)/dx`; `None` where the density vanishes.
    fn phase_gradient(&self, x: T) -> Option<T> {
        let rho = self.density(x);
        if rho > T::zero() {
            Some(self.current(x) / rho)
        } else {
            None
        }
    }
}

/// Plane-wave eigenfunction `A e^{i (q + k) x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveState<T> {
    pub q: T,
    pub gauge_k: T,
    amplitude: T,
}

impl<T: Real> PlaneWaveState<T> {
    /// Unit-normalized over `[-pi, pi)`: `A = 1/sqrt(2 pi)`.
    pub fn new(q: T, gauge_k: T) -> Self {
        Self {
            q,
            gauge_k,
            amplitude: T::two_pi().sqrt().recip(),
        }
    }

    pub fn with_amplitude(q: T, gauge_k: T, amplitude: T) -> Result<Self> {
        if !(amplitude > T::zero()) {
            return Err(RingError::InvalidArgument(format!(
                "plane-wave amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self {
            q,
            gauge_k,
            amplitude,
        })
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// Total wavenumber `q + k` appearing in the exponent.
    pub fn wavenumber(&self) -> T {
        self.q + self.gauge_k
    }

    /// Residual `(-i d/dx - k - q) psi` at `x`, evaluated numerically.
    pub fn momentum_residual(&self, x: T) -> Complex<T> {
        let minus_i = Complex::new(T::zero(), -T::one());
        minus_i * self.derivative(x) - self.value(x) * self.gauge_k - self.value(x) * self.q
    }
}

impl<T: Real> RingWave<T> for PlaneWaveState<T> {
    fn value(&self, x: T) -> Complex<T> {
        Complex::from_polar(self.amplitude, self.wavenumber() * x)
    }

    fn derivative(&self, x: T) -> Complex<T> {
        self.value(x) * Complex::new(T::zero(), self.wavenumber())
    }

    fn density(&self, _x: T) -> T {
        self.amplitude * self.amplitude
    }

    fn density_slope(&self, _x: T) -> T {
        T::zero()
    }

    fn current(&self, _x: T) -> T {
        self.amplitude * self.amplitude * self.wavenumber()
    }

    fn phase_gradient(&self, _x: T) -> Option<T> {
        Some(self.wavenumber())
    }
}

/// Eigenvalue of `-i d/dx - k` on a plane wave.
///
/// The cancellation is done symbolically, so the result is `q` bit for bit in
/// every gauge. [`PlaneWaveState::momentum_residual`] checks it numerically.
pub fn apply_momentum_analytic<T: Real>(state: &PlaneWaveState<T>) -> T {
    // -i d/dx yields q + k, the gauge term takes k back
    state.q
}

/// Periodic boundary rule: the wave joins itself smoothly iff `q + k` is an integer.
pub fn check_linear_bc<T: Real>(state: &PlaneWaveState<T>, tol: T) -> bool {
    distance_to_integer(state.wavenumber()) <= tol
}

/// Allowed eigenvalue `m - k` for winding number `m` under the periodic rule.
pub fn linear_bc_eigenvalue<T: Real>(m: i64, gauge_k: T) -> T {
    T::from_i64(m).expect("winding number representable") - gauge_k
}

/// Seam mismatches of the quantities the density/current boundary rule keeps continuous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearBcReport<T> {
    pub density_jump: T,
    pub density_slope_jump: T,
    pub phase_gradient_jump: T,
    pub current_jump: T,
    pub satisfied: bool,
}

/// Checks continuity of density, density slope, phase gradient and current
/// between `x = pi` and `x = -pi` with the default tolerance.
pub fn check_nonlinear_bc<T: Real, W: RingWave<T> + ?Sized>(wave: &W) -> NonlinearBcReport<T> {
    check_nonlinear_bc_with_tol(wave, T::tol(DEFAULT_SEAM_TOL))
}

pub fn check_nonlinear_bc_with_tol<T: Real, W: RingWave<T> + ?Sized>(
    wave: &W,
    tol: T,
) -> NonlinearBcReport<T> {
    let (lo, hi) = (-T::PI(), T::PI());
    let density_jump = (wave.density(hi) - wave.density(lo)).abs();
    let density_slope_jump = (wave.density_slope(hi) - wave.density_slope(lo)).abs();
    let current_jump = (wave.current(hi) - wave.current(lo)).abs();
    let phase_gradient_jump = match (wave.phase_gradient(hi), wave.phase_gradient(lo)) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => T::zero(),
        _ => T::infinity(),
    };
    let satisfied = [density_jump, density_slope_jump, phase_gradient_jump, current_jump]
        .iter()
        .all(|&j| j <= tol);
    NonlinearBcReport {
        density_jump,
        density_slope_jump,
        phase_gradient_jump,
        current_jump,
        satisfied,
    }
}

/// Phase discontinuity of the wave at the seam, in (-pi, pi].
pub fn phase_jump<T: Real>(state: &PlaneWaveState<T>) -> T {
    twist_from_state(state.q, state.gauge_k)
}

/// Amplitude/phase split of a derivative: `psi' = (A_x + i A alpha_x) e^{i alpha}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarDerivative<T> {
    pub amp_gradient: T,
    pub phase_gradient: T,
    pub amplitude: T,
    pub phase: T,
}

impl<T: Real> PolarDerivative<T> {
    pub fn reconstruct(&self) -> Complex<T> {
        Complex::new(self.amp_gradient, self.amplitude * self.phase_gradient)
            * Complex::from_polar(T::one(), self.phase)
    }
}

/// Centered-difference amplitude and phase gradients of a sampled ring function.
///
/// Neighbours wrap around the seam. Phase steps are unwrapped to the nearest
/// branch, so adjacent samples must differ in phase by less than pi.
pub fn polar_decompose_derivative<T: Real>(
    samples: &[Complex<T>],
    grid: &RingGrid<T>,
    index: usize,
) -> Result<PolarDerivative<T>> {
    let n = grid.n_points();
    if samples.len() != n {
        return Err(RingError::Shape {
            expected: n,
            found: samples.len(),
        });
    }
    if index >= n {
        return Err(RingError::InvalidArgument(format!(
            "sample index {index} outside grid of {n} points"
        )));
    }
    let prev = (index + n - 1) % n;
    let next = (index + 1) % n;
    for &j in &[prev, index, next] {
        if samples[j].norm() == T::zero() {
            return Err(RingError::UndefinedPhase(j));
        }
    }
    let two_dx = T::lit(2.0) * grid.dx();
    let (a_prev, a_here, a_next) = (samples[prev].norm(), samples[index].norm(), samples[next].norm());
    let (p_prev, p_here, p_next) = (samples[prev].arg(), samples[index].arg(), samples[next].arg());
    let step_back = wrap_phase(p_here - p_prev);
    let step_fwd = wrap_phase(p_next - p_here);
    Ok(PolarDerivative {
        amp_gradient: (a_next - a_prev) / two_dx,
        phase_gradient: (step_back + step_fwd) / two_dx,
        amplitude: a_here,
        phase: p_here,
    })
}
