//! Superpositions of plane waves over a common base momentum.
//!
//! `psi(x) = A e^{i(q + k)x} sum_j a_j e^{i n_j x}`. The density only sees
//! the offset differences `n_i - n_j`, so it matches the ring period exactly
//! when every difference is an integer. Integer-offset plane waves are also
//! mutually orthonormal under the ring inner product, while arbitrary real
//! offsets are not.

use num_complex::Complex;
use num_traits::Zero;

use crate::continuum::{PlaneWaveState, RingWave};
use crate::error::{Result, RingError};
use crate::matrix::CMatrix;
use crate::scalar::{distance_to_integer, Real};

/// Default absolute tolerance for offset integer tests.
pub const DEFAULT_OFFSET_TOL: f64 = 1e-9;

/// Default number of Simpson panels for ring quadratures.
pub const DEFAULT_QUADRATURE_PANELS: usize = 1024;

/// One `a_j e^{i n_j x}` component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<T> {
    pub offset: T,
    pub coeff: Complex<T>,
}

impl<T> Term<T> {
    pub fn new(offset: T, coeff: Complex<T>) -> Self {
        Self { offset, coeff }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState<T> {
    q: T,
    gauge_k: T,
    terms: Vec<Term<T>>,
    amplitude: T,
}

impl<T: Real> SuperpositionState<T> {
    /// Offsets must be strictly increasing and at least one coefficient nonzero.
    pub fn new(q: T, gauge_k: T, terms: Vec<Term<T>>, amplitude: T) -> Result<Self> {
        if terms.is_empty() {
            return Err(RingError::InvalidArgument("superposition needs at least one term".into()));
        }
        if !(amplitude > T::zero()) {
            return Err(RingError::InvalidArgument(format!(
                "superposition amplitude must be positive, got {amplitude}"
            )));
        }
        if terms.windows(2).any(|w| !(w[0].offset < w[1].offset)) {
            return Err(RingError::InvalidArgument(
                "superposition offsets must be strictly increasing".into(),
            ));
        }
        if terms.iter().all(|t| t.coeff.is_zero()) {
            return Err(RingError::InvalidArgument(
                "superposition needs a nonzero coefficient".into(),
            ));
        }
        Ok(Self {
            q,
            gauge_k,
            terms,
            amplitude,
        })
    }

    /// Real coefficients keyed by offset, unit amplitude; test and CLI shorthand.
    pub fn from_real_pairs(q: T, gauge_k: T, pairs: &[(T, T)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(n, a)| Term::new(n, Complex::new(a, T::zero())))
            .collect();
        Self::new(q, gauge_k, terms, T::one())
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn gauge_k(&self) -> T {
        self.gauge_k
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// Same superposition in another gauge.
    pub fn with_gauge(&self, gauge_k: T) -> Self {
        Self {
            gauge_k,
            ..self.clone()
        }
    }

    fn envelope(&self, x: T) -> Complex<T> {
        self.terms
            .iter()
            .fold(Complex::zero(), |acc, t| acc + t.coeff * Complex::from_polar(T::one(), t.offset * x))
    }

    fn envelope_derivative(&self, x: T) -> Complex<T> {
        self.terms.iter().fold(Complex::zero(), |acc, t| {
            acc + t.coeff * Complex::new(T::zero(), t.offset) * Complex::from_polar(T::one(), t.offset * x)
        })
    }

    fn active_offsets(&self) -> impl Iterator<Item = T> + '_ {
        self.terms.iter().filter(|t| !t.coeff.is_zero()).map(|t| t.offset)
    }
}

impl<T: Real> RingWave<T> for SuperpositionState<T> {
    fn value(&self, x: T) -> Complex<T> {
        Complex::from_polar(self.amplitude, (self.q + self.gauge_k) * x) * self.envelope(x)
    }

    fn derivative(&self, x: T) -> Complex<T> {
        let carrier = Complex::from_polar(self.amplitude, (self.q + self.gauge_k) * x);
        let k_total = Complex::new(T::zero(), self.q + self.gauge_k);
        carrier * (k_total * self.envelope(x) + self.envelope_derivative(x))
    }

    // Global phase factors have unit modulus and are dropped.
    fn density(&self, x: T) -> T {
        self.amplitude * self.amplitude * self.envelope(x).norm_sqr()
    }

    fn density_slope(&self, x: T) -> T {
        let a2 = self.amplitude * self.amplitude;
        a2 * T::lit(2.0) * (self.envelope(x).conj() * self.envelope_derivative(x)).re
    }
}

/// `|psi(x)|^2`; independent of `q` and of the gauge.
pub fn density<T: Real>(state: &SuperpositionState<T>, x: T) -> T {
    state.density(x)
}

/// Pair term `2 |a_i| |a_j| cos((n_j - n_i) x - phase)` of the density expansion,
/// with `phase = arg(a_i conj(a_j))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTerm<T> {
    pub lower: T,
    pub upper: T,
    pub magnitude: T,
    pub phase: T,
}

impl<T: Real> CrossTerm<T> {
    pub fn frequency(&self) -> T {
        self.upper - self.lower
    }

    pub fn eval(&self, x: T) -> T {
        self.magnitude * (self.frequency() * x - self.phase).cos()
    }
}

/// Pairwise interference terms, ordered by `(i, j)` with `i < j`.
pub fn cross_terms<T: Real>(state: &SuperpositionState<T>) -> Vec<CrossTerm<T>> {
    let terms = state.terms();
    let mut out = Vec::new();
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            out.push(CrossTerm {
                lower: a.offset,
                upper: b.offset,
                magnitude: T::lit(2.0) * a.coeff.norm() * b.coeff.norm(),
                phase: (a.coeff * b.coeff.conj()).arg(),
            });
        }
    }
    out
}

/// Density rebuilt from the diagonal weights plus [`cross_terms`].
pub fn density_from_expansion<T: Real>(state: &SuperpositionState<T>, x: T) -> T {
    let diag = state
        .terms()
        .iter()
        .fold(T::zero(), |s, t| s + t.coeff.norm_sqr());
    let cross = cross_terms(state)
        .iter()
        .fold(T::zero(), |s, c| s + c.eval(x));
    state.amplitude() * state.amplitude() * (diag + cross)
}

/// Outcome of the density periodicity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityVerdict<T> {
    /// Every pairwise offset difference is within tolerance of an integer.
    pub periodic: bool,
    /// `|rho(pi) - rho(-pi)|`
    pub value_jump: T,
    /// `|rho'(pi) - rho'(-pi)|`
    pub slope_jump: T,
    /// First pair of offsets whose difference is not an integer.
    pub offending_pair: Option<(T, T)>,
}

impl<T: Real> PeriodicityVerdict<T> {
    /// Whether the seam witness, read at `tol`, says the same as the integer test.
    pub fn witness_agrees(&self, tol: T) -> bool {
        let continuous = self.value_jump <= tol && self.slope_jump <= tol;
        continuous == self.periodic
    }
}

/// Classifies whether the density repeats with the ring period.
///
/// The verdict is the exact integer-difference criterion; the value and
/// slope mismatches at the seam are reported as a numeric witness. Both are
/// needed: a symmetric density can agree in value at `+-pi` while its slope
/// does not.
pub fn is_density_periodic<T: Real>(state: &SuperpositionState<T>, tol: T) -> PeriodicityVerdict<T> {
    let offsets: Vec<T> = state.active_offsets().collect();
    let mut offending_pair = None;
    'outer: for (i, &a) in offsets.iter().enumerate() {
        for &b in &offsets[i + 1..] {
            if distance_to_integer(b - a) > tol {
                offending_pair = Some((a, b));
                break 'outer;
            }
        }
    }
    let (lo, hi) = (-T::PI(), T::PI());
    PeriodicityVerdict {
        periodic: offending_pair.is_none(),
        value_jump: (state.density(hi) - state.density(lo)).abs(),
        slope_jump: (state.density_slope(hi) - state.density_slope(lo)).abs(),
        offending_pair,
    }
}

/// `sin(t)/t` with the removable singularity filled in.
pub fn sinc<T: Real>(t: T) -> T {
    if t == T::zero() {
        T::one()
    } else {
        t.sin() / t
    }
}

/// Ring inner product `(1/2pi) int conj(psi_a) psi_b dx` of unit-modulus plane
/// waves (`A = 1`), in closed form `sinc((q_b - q_a) pi)`.
pub fn inner_product<T: Real>(a: &PlaneWaveState<T>, b: &PlaneWaveState<T>) -> Result<Complex<T>> {
    if a.gauge_k != b.gauge_k {
        return Err(RingError::GaugeMismatch(
            a.gauge_k.to_f64().unwrap_or(f64::NAN),
            b.gauge_k.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(Complex::new(sinc((b.q - a.q) * T::PI()), T::zero()))
}

/// Gram matrix of unit-modulus plane waves with momenta `qs` in one gauge.
pub fn gram_matrix<T: Real>(qs: &[T], gauge_k: T) -> CMatrix<T> {
    let n = qs.len();
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let a = PlaneWaveState::new(qs[i], gauge_k);
            let b = PlaneWaveState::new(qs[j], gauge_k);
            g[(i, j)] = inner_product(&a, &b).expect("shared gauge");
        }
    }
    g
}

/// `(1/2pi) int_{-pi}^{pi} f(x) dx` by composite Simpson with `panels` panels.
pub fn ring_average<T, F>(f: F, panels: usize) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    if panels < 2 || !panels.is_multiple_of(2) {
        return Err(RingError::InvalidArgument(format!(
            "Simpson quadrature needs an even panel count >= 2, got {panels}"
        )));
    }
    let h = T::two_pi() / T::from_count(panels);
    let mut sum = f(-T::PI()) + f(T::PI());
    for i in 1..panels {
        let x = -T::PI() + T::from_count(i) * h;
        let w = if i % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
        sum += f(x) * w;
    }
    Ok(sum * (h / T::lit(3.0)) / T::two_pi())
}

/// Quadrature counterpart of [`inner_product`].
pub fn inner_product_quadrature<T: Real>(
    a: &PlaneWaveState<T>,
    b: &PlaneWaveState<T>,
    panels: usize,
) -> Result<Complex<T>> {
    if a.gauge_k != b.gauge_k {
        return Err(RingError::GaugeMismatch(
            a.gauge_k.to_f64().unwrap_or(f64::NAN),
            b.gauge_k.to_f64().unwrap_or(f64::NAN),
        ));
    }
    ring_average(
        |x| Complex::from_polar(T::one(), a.wavenumber() * x).conj() * Complex::from_polar(T::one(), b.wavenumber() * x),
        panels,
    )
}

/// Quadratic band energy `(q + n)^2` in units with `hbar = 1`, `2m = 1`.
pub fn band_energy<T: Real>(q: T, n: i64) -> T {
    let e = q + T::from_i64(n).expect("band index representable");
    e * e
}

/// Offsets split by whether they sit on the integer lattice.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HilbertPartition<T> {
    pub accepted: Vec<T>,
    pub rejected: Vec<T>,
}

/// Keeps the offsets (relative to the `a_0` term) that lie within `tol` of an
/// integer; those plane waves form the orthonormal, superposable subset.
pub fn hilbert_subset_filter<T: Real>(candidate_offsets: &[T], tol: T) -> HilbertPartition<T> {
    let (accepted, rejected) = candidate_offsets
        .iter()
        .partition(|&&n| distance_to_integer(n) <= tol);
    HilbertPartition { accepted, rejected }
}
