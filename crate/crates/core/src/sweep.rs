//! Twist sweeps, gauge convergence studies and band tables.

use std::cmp::Ordering;

use serde::Serialize;

use crate::continuum::linear_bc_eigenvalue;
use crate::eigen::{hermitian_eigen, nearest_index};
use crate::error::{Result, RingError};
use crate::grid::{build_linear_operator, build_twisted_operator, twist_from_state, RingGrid};
use crate::scalar::Real;
use crate::superposition::band_energy;

/// Default number of twist samples on `[0, pi]` (one degree apart).
pub const DEFAULT_SWEEP_STEPS: usize = 181;

/// Spectrum at one twist magnitude and sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    /// Twist magnitude in `[0, pi]`.
    pub phi: T,
    /// `+1` for a `+phi` twist, `-1` for `-phi`.
    pub branch_sign: i8,
    /// Ascending.
    pub eigenvalues: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<T> {
    pub n_points: usize,
    pub gauge_k: T,
    /// Ordered by `(phi, branch_sign)`.
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Real> SweepTable<T> {
    pub fn phi_values(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for row in &self.rows {
            if out.last() != Some(&row.phi) {
                out.push(row.phi);
            }
        }
        out
    }

    pub fn rows_for_sign(&self, sign: i8) -> impl Iterator<Item = &SweepRow<T>> {
        self.rows.iter().filter(move |r| r.branch_sign == sign)
    }

    pub fn row(&self, step: usize, sign: i8) -> Option<&SweepRow<T>> {
        self.rows_for_sign(sign).nth(step)
    }
}

/// Spectra of the twisted operator for `steps` twist magnitudes evenly spaced
/// on `[0, pi]`, each at `+phi` and `-phi`.
///
/// Plotted against `|phi|`, the two signs give the two momentum bands that
/// emanate from every untwisted level.
pub fn phi_sweep<T: Real>(grid: &RingGrid<T>, gauge_k: T, steps: usize) -> Result<SweepTable<T>> {
    if steps < 2 {
        return Err(RingError::InvalidArgument(format!(
            "a twist sweep needs at least 2 steps, got {steps}"
        )));
    }
    let last = T::from_count(steps - 1);
    let mut rows = Vec::with_capacity(2 * steps);
    for i in 0..steps {
        let phi = T::PI() * (T::from_count(i) / last);
        for sign in [-1i8, 1] {
            let twist = if sign < 0 { -phi } else { phi };
            let spectrum = hermitian_eigen(&build_twisted_operator(grid, gauge_k, twist))?;
            rows.push(SweepRow {
                phi,
                branch_sign: sign,
                eigenvalues: spectrum.eigenvalues,
            });
        }
    }
    Ok(SweepTable {
        n_points: grid.n_points(),
        gauge_k,
        rows,
    })
}

/// Follows each level of one twist sign through the sweep by greedy
/// nearest-neighbour matching between consecutive steps.
///
/// Returns one polyline per level as `(phi, eigenvalue)` points. Only meant
/// for drawing; the numerics live in the rows themselves.
pub fn track_branches<T: Real>(table: &SweepTable<T>, sign: i8) -> Vec<Vec<(T, T)>> {
    let mut rows = table.rows_for_sign(sign);
    let first = match rows.next() {
        Some(r) => r,
        None => return Vec::new(),
    };
    let mut lines: Vec<Vec<(T, T)>> = first.eigenvalues.iter().map(|&e| vec![(first.phi, e)]).collect();
    for row in rows {
        let mut taken = vec![false; row.eigenvalues.len()];
        // match lines in order of their closest available candidate
        let mut pairs: Vec<(T, usize, usize)> = Vec::new();
        for (li, line) in lines.iter().enumerate() {
            let last = line.last().expect("nonempty line").1;
            for (ci, &e) in row.eigenvalues.iter().enumerate() {
                pairs.push(((e - last).abs(), li, ci));
            }
        }
        pairs.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(Ordering::Equal)
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        let mut assigned = vec![false; lines.len()];
        for (_, li, ci) in pairs {
            if assigned[li] || taken[ci] {
                continue;
            }
            assigned[li] = true;
            taken[ci] = true;
            lines[li].push((row.phi, row.eigenvalues[ci]));
        }
    }
    lines
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow<T> {
    pub n_points: usize,
    pub gauge_k: T,
    pub eigenvalue: T,
    pub error: T,
}

/// For every `(N, k)`, builds the operator twisted by the seam jump of a
/// momentum-`q` plane wave and reports how far its closest eigenvalue sits
/// from `q`.
pub fn convergence_study<T: Real>(
    q: T,
    gauge_ks: &[T],
    n_points_list: &[usize],
) -> Result<Vec<ConvergenceRow<T>>> {
    let mut out = Vec::with_capacity(gauge_ks.len() * n_points_list.len());
    for &k in gauge_ks {
        for &n in n_points_list {
            let grid = RingGrid::new(n)?;
            let op = build_twisted_operator(&grid, k, twist_from_state(q, k));
            let spectrum = hermitian_eigen(&op)?;
            let idx = nearest_index(&spectrum.eigenvalues, q).expect("nonempty spectrum");
            let eigenvalue = spectrum.eigenvalues[idx];
            out.push(ConvergenceRow {
                n_points: n,
                gauge_k: k,
                eigenvalue,
                error: (eigenvalue - q).abs(),
            });
        }
    }
    Ok(out)
}

/// Least-squares slope of `ln(error)` against `ln(dx)`.
///
/// `None` with fewer than two rows or when any error is exactly zero.
pub fn loglog_slope<T: Real>(rows: &[ConvergenceRow<T>]) -> Option<T> {
    if rows.len() < 2 || rows.iter().any(|r| !(r.error > T::zero())) {
        return None;
    }
    let pts: Vec<(T, T)> = rows
        .iter()
        .map(|r| {
            let dx = T::two_pi() / T::from_count(r.n_points);
            (dx.ln(), r.error.ln())
        })
        .collect();
    let m = T::from_count(pts.len());
    let mx = pts.iter().fold(T::zero(), |s, p| s + p.0) / m;
    let my = pts.iter().fold(T::zero(), |s, p| s + p.1) / m;
    let sxy = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    if sxx == T::zero() {
        return None;
    }
    Some(sxy / sxx)
}

/// Eigenvalue seen for a momentum-`q` state in one gauge, under each seam rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeRow<T> {
    pub gauge_k: T,
    /// `m - k` for the winding `m` closest to `q + k`.
    pub periodic_continuum: T,
    /// Eigenvalue of the periodic matrix closest to `q`.
    pub periodic_discrete: T,
    /// Eigenvalue of the matrix twisted by the seam jump of the state, closest to `q`.
    pub twisted_discrete: T,
}

/// Contrasts the periodic seam, whose allowed eigenvalues move with the gauge,
/// with the twisted seam, which keeps the eigenvalue at `q` in every gauge.
pub fn gauge_comparison<T: Real>(grid: &RingGrid<T>, q: T, gauge_ks: &[T]) -> Result<Vec<GaugeRow<T>>> {
    gauge_ks
        .iter()
        .map(|&k| {
            let winding = (q + k).round().to_i64().ok_or_else(|| {
                RingError::InvalidArgument(format!("winding q + k = {} out of range", q + k))
            })?;
            let periodic = hermitian_eigen(&build_linear_operator(grid, k))?;
            let twisted = hermitian_eigen(&build_twisted_operator(grid, k, twist_from_state(q, k)))?;
            let pick = |v: &[T]| v[nearest_index(v, q).expect("nonempty spectrum")];
            Ok(GaugeRow {
                gauge_k: k,
                periodic_continuum: linear_bc_eigenvalue(winding, k),
                periodic_discrete: pick(&periodic.eigenvalues),
                twisted_discrete: pick(&twisted.eigenvalues),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandRow<T> {
    pub q: T,
    pub n: i64,
    pub energy: T,
}

/// `(q + n)^2` for each band index in `n_min..=n_max` and `q_samples` momenta
/// evenly spaced on `[-1/2, 1/2]`.
pub fn band_table<T: Real>(n_min: i64, n_max: i64, q_samples: usize) -> Result<Vec<BandRow<T>>> {
    if q_samples < 2 {
        return Err(RingError::InvalidArgument(format!(
            "band table needs at least 2 momentum samples, got {q_samples}"
        )));
    }
    if n_min > n_max {
        return Err(RingError::InvalidArgument(format!(
            "empty band range {n_min}..={n_max}"
        )));
    }
    let half = T::lit(0.5);
    let last = T::from_count(q_samples - 1);
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        for i in 0..q_samples {
            let q = -half + T::from_count(i) / last;
            rows.push(BandRow {
                q,
                n,
                energy: band_energy(q, n),
            });
        }
    }
    Ok(rows)
}
