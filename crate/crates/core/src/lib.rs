//! Momentum operator on a one-dimensional ring.
//!
//! The ring coordinate runs over `[-pi, pi)`. The crate builds the
//! central-difference momentum matrix for periodic and phase-twisted seams,
//! diagonalizes it, compares the result with the closed-form twisted
//! circulant spectrum, and provides the continuum plane-wave algebra used to
//! reason about gauge dependence, density periodicity of superpositions,
//! orthonormality and quadratic bands.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` style guards below deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuum;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod superposition;
pub mod sweep;

pub use continuum::{
    apply_momentum_analytic, check_linear_bc, check_nonlinear_bc, check_nonlinear_bc_with_tol,
    linear_bc_eigenvalue, phase_jump, polar_decompose_derivative, NonlinearBcReport, PlaneWaveState,
    PolarDerivative, RingWave,
};
pub use eigen::{analytic_twisted_spectrum, hermitian_eigen, nearest_index, SpectrumResult};
pub use error::{Result, RingError};
pub use grid::{
    build_linear_operator, build_twisted_operator, make_ring_grid, twist_from_state, OperatorMatrix, RingGrid,
};
pub use matrix::CMatrix;
pub use num_complex::Complex;
pub use scalar::{wrap_phase, Real};
pub use superposition::{
    band_energy, cross_terms, density, gram_matrix, hilbert_subset_filter, inner_product, inner_product_quadrature,
    is_density_periodic, ring_average, CrossTerm, HilbertPartition, PeriodicityVerdict, SuperpositionState, Term,
};
pub use sweep::{
    band_table, convergence_study, gauge_comparison, loglog_slope, phi_sweep, track_branches, BandRow, ConvergenceRow, GaugeRow, SweepRow,
    SweepTable,
};

pub type RingGrid64 = RingGrid<f64>;
pub type OperatorMatrix64 = OperatorMatrix<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type SpectrumResult64 = SpectrumResult<f64>;
pub type PlaneWaveState64 = PlaneWaveState<f64>;
pub type SuperpositionState64 = SuperpositionState<f64>;
pub type SweepTable64 = SweepTable<f64>;

pub type RingGrid32 = RingGrid<f32>;
pub type OperatorMatrix32 = OperatorMatrix<f32>;
pub type SpectrumResult32 = SpectrumResult<f32>;
