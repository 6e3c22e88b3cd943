//! Acceptance criteria for the ring momentum toolkit.
//!
//! Runs every criterion, prints one PASS/FAIL line each, and exits nonzero if
//! any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistring::io::{emit_sweep_csv, parse_sweep_csv, sweep_records};
use twistring::{
    analytic_twisted_spectrum, band_table, build_linear_operator, build_twisted_operator, convergence_study,
    gram_matrix, hermitian_eigen, inner_product, inner_product_quadrature, is_density_periodic,
    linear_bc_eigenvalue, loglog_slope, make_ring_grid, nearest_index, phi_sweep, CMatrix, Complex,
    PlaneWaveState, SuperpositionState, Term,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn timed<F: FnOnce() -> Outcome>(limit: Duration, f: F) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    check(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {elapsed:.2?}"))
}

/// Untwisted N = 20 levels nearest -1, 0, +1.
fn ac1_endpoints() -> Outcome {
    timed(Duration::from_millis(100), || {
        let g = make_ring_grid(20).map_err(|e| e.to_string())?;
        let res = hermitian_eigen(&build_twisted_operator(&g, 0.0, 0.0)).map_err(|e| e.to_string())?;
        let level = 10.0 / PI * (PI / 10.0).sin();
        let oracle = analytic_twisted_spectrum(&g, 0.0, 0.0);
        let mut found = Vec::new();
        for (target, expected) in [(-1.0, -level), (0.0, 0.0), (1.0, level)] {
            let v = res.eigenvalues[nearest_index(&res.eigenvalues, target).unwrap()];
            let o = oracle[nearest_index(&oracle, target).unwrap()];
            check((v - expected).abs() <= 1e-9, format!("level near {target}: {v} vs {expected}"))?;
            check((v - o).abs() <= 1e-9, format!("level near {target}: {v} vs oracle {o}"))?;
            check((v - target).abs() <= 0.017, format!("level {v} too far from {target}"))?;
            found.push(v);
        }
        check((level - 0.98363).abs() < 1e-5, "closed-form level value")?;
        Ok(format!("levels {:.5?}", found))
    })
}

/// Two monotone branches per level, separation at pi/2 from the closed form.
fn ac2_splitting() -> Outcome {
    timed(Duration::from_secs(1), || {
        let n = 20;
        let g = make_ring_grid(n).map_err(|e| e.to_string())?;
        let dx = g.dx();
        let table = phi_sweep(&g, 0.0, 181).map_err(|e| e.to_string())?;
        let nn = n as f64;
        for m in [-1.0, 0.0, 1.0_f64] {
            let lo = ((2.0 * m - 1.0) * PI / nn).sin() / dx;
            let hi = ((2.0 * m + 1.0) * PI / nn).sin() / dx;
            let mut prev: Option<(f64, f64)> = None;
            for step in 1..180 {
                let plus = table.row(step, 1).unwrap();
                let minus = table.row(step, -1).unwrap();
                let phi = plus.phi;
                let mut inside: Vec<f64> = plus
                    .eigenvalues
                    .iter()
                    .chain(&minus.eigenvalues)
                    .copied()
                    .filter(|&e| e > lo && e < hi)
                    .collect();
                inside.sort_by(|a, b| a.partial_cmp(b).unwrap());
                inside.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
                check(inside.len() == 2, format!("m={m} phi={phi}: {} branches", inside.len()))?;
                let up = ((2.0 * PI * m + phi) / nn).sin() / dx;
                let down = ((2.0 * PI * m - phi) / nn).sin() / dx;
                check(
                    (inside[1] - up).abs() <= 1e-9 && (inside[0] - down).abs() <= 1e-9,
                    format!("m={m} phi={phi}: branches {inside:?} vs ({down}, {up})"),
                )?;
                if let Some((pd, pu)) = prev {
                    check(inside[0] < pd && inside[1] > pu, format!("m={m} phi={phi}: not monotone"))?;
                }
                prev = Some((inside[0], inside[1]));
                if step == 90 {
                    check((phi - PI / 2.0).abs() < 1e-15, "step 90 is pi/2")?;
                    let sep = 2.0 * (10.0 / PI) * (PI / 40.0).sin() * (2.0 * PI * m / 20.0).cos();
                    check(
                        ((inside[1] - inside[0]) - sep).abs() <= 1e-9,
                        format!("m={m}: separation {} vs {sep}", inside[1] - inside[0]),
                    )?;
                }
            }
        }
        Ok("levels -1, 0, +1 split into two monotone branches".into())
    })
}

fn ac3_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = rng.gen_range(3..=40);
        let k = rng.gen_range(-2.0..=2.0);
        // (-pi, pi]
        let phi = PI - rng.gen_range(0.0..2.0 * PI);
        let g = make_ring_grid(n).map_err(|e| e.to_string())?;
        let res = hermitian_eigen(&build_twisted_operator(&g, k, phi)).map_err(|e| e.to_string())?;
        let d = max_diff(&res.eigenvalues, &analytic_twisted_spectrum(&g, k, phi));
        worst = worst.max(d);
        check(d <= 1e-9, format!("N={n} k={k} phi={phi}: diff {d:e}"))?;
    }
    Ok(format!("max |numeric - closed form| = {worst:.2e}"))
}

fn ac4_hermiticity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let n = rng.gen_range(3..=64);
        let k = rng.gen_range(-10.0..10.0);
        let phi = rng.gen_range(-10.0 * PI..10.0 * PI);
        let g = make_ring_grid(n).map_err(|e| e.to_string())?;
        let m = build_twisted_operator(&g, k, phi);
        let e = m.entries();
        check(e.is_exactly_hermitian(), format!("config {i}: N={n} k={k} phi={phi}"))?;
        check(e.conj_transpose() == *e, format!("config {i}: conjugate transpose differs"))?;
    }
    Ok("1000/1000 exactly Hermitian".into())
}

fn ac5_linear_gauge_dependence() -> Outcome {
    for m in -5..=5 {
        for k in [0.0, 0.25, -0.7, 1.0, 3.3] {
            check(linear_bc_eigenvalue(m, k) == m as f64 - k, format!("m={m} k={k}"))?;
        }
    }
    check(linear_bc_eigenvalue(1, 0.25) == 0.75, "n = m - k at (1, 0.25)")?;
    let mut worst = 0.0_f64;
    for n in [7, 20, 33] {
        let g = make_ring_grid(n).map_err(|e| e.to_string())?;
        let a = hermitian_eigen(&build_linear_operator(&g, 0.0_f64)).map_err(|e| e.to_string())?;
        let b = hermitian_eigen(&build_linear_operator(&g, 0.25)).map_err(|e| e.to_string())?;
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            worst = worst.max(((x - y) - 0.25).abs());
        }
    }
    check(worst <= 1e-10, format!("spectrum shift off by {worst:e}"))?;
    Ok(format!("n = m - k exact; k=0 vs k=0.25 spectra shift by 0.25 (dev {worst:.1e})"))
}

fn ac6_gauge_invariance_convergence() -> Outcome {
    timed(Duration::from_secs(5), || {
        let q = 0.37_f64;
        let ns = [20, 40, 80, 160, 320];
        let mut slopes = Vec::new();
        for k in [0.0, 0.5, 1.2] {
            let rows = convergence_study(q, &[k], &ns).map_err(|e| e.to_string())?;
            check(
                rows.windows(2).all(|w| w[1].error < w[0].error),
                format!("k={k}: errors not decreasing"),
            )?;
            let last = rows.last().unwrap();
            check(last.error < 1e-3, format!("k={k}: N=320 error {}", last.error))?;
            let slope = loglog_slope(&rows).ok_or("degenerate fit")?;
            check((slope - 2.0).abs() <= 0.1, format!("k={k}: slope {slope}"))?;
            slopes.push(slope);
        }
        Ok(format!("slopes {:.4?}", slopes))
    })
}

fn random_superposition(rng: &mut ChaCha8Rng, integer: bool) -> SuperpositionState<f64> {
    let len = rng.gen_range(2..=5);
    let mut offsets = vec![0.0_f64];
    let mut forced = !integer;
    while offsets.len() < len {
        let mut n = rng.gen_range(-4..=6) as f64;
        if forced || (!integer && rng.gen_bool(0.5)) {
            n += rng.gen_range(0.1..0.9);
            forced = false;
        }
        if offsets.iter().all(|&o| (o - n).abs() > 1e-3) {
            offsets.push(n);
        }
    }
    offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let terms = offsets
        .into_iter()
        .map(|n| Term::new(n, Complex::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI))))
        .collect();
    SuperpositionState::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), terms, 1.0).unwrap()
}

fn ac7_periodicity_rule() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agree = 0;
    for i in 0..100 {
        let integer = rng.gen_bool(0.5);
        let s = random_superposition(&mut rng, integer);
        let v = is_density_periodic(&s, 1e-9);
        check(v.periodic == integer, format!("case {i}: classifier says {}", v.periodic))?;
        if v.witness_agrees(1e-6) {
            agree += 1;
        }
    }
    check(agree == 100, format!("{agree}/100 agree"))?;
    Ok("100/100 classifier/witness agreement".into())
}

fn ac8_orthonormality() -> Outcome {
    let g = gram_matrix(&[-2.0, -1.0, 0.0, 1.0, 2.0], 0.0);
    let dev = g.max_abs_diff(&CMatrix::identity(5));
    check(dev <= 1e-12, format!("integer Gram deviates by {dev:e}"))?;
    let a = PlaneWaveState::new(0.0, 0.0);
    let b = PlaneWaveState::new(0.5, 0.0);
    let ip = inner_product(&a, &b).map_err(|e| e.to_string())?;
    let quad = inner_product_quadrature(&a, &b, 1024).map_err(|e| e.to_string())?;
    check((ip.re - 2.0 / PI).abs() <= 1e-15, format!("<0|0.5> = {ip}"))?;
    check((ip - quad).norm() <= 1e-8, format!("quadrature {quad} vs {ip}"))?;
    Ok(format!("Gram dev {dev:.1e}; <0|0.5> = {:.8} (quad diff {:.1e})", ip.re, (ip - quad).norm()))
}

fn ac9_bands() -> Outcome {
    let rows = band_table::<f64>(-1, 1, 3).map_err(|e| e.to_string())?;
    check(rows.len() == 9, "9 rows")?;
    let min = rows
        .iter()
        .min_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap())
        .unwrap();
    check(min.q == 0.0 && min.n == 0 && min.energy == 0.0, format!("minimum at {min:?}"))?;
    check(rows.iter().filter(|r| r.energy == 0.0).count() == 1, "unique minimum")?;
    let at = |q: f64, n: i64| rows.iter().find(|r| r.q == q && r.n == n).map(|r| r.energy);
    check(at(0.5, 0) == Some(0.25), "E(0.5, 0) = 0.25")?;
    check(at(-0.5, 1) == Some(0.25), "E(-0.5, 1) = 0.25")?;
    Ok("minimum E(0,0)=0; zone-edge E(0.5,0)=E(-0.5,1)=0.25".into())
}

fn ac10_csv_round_trip() -> Outcome {
    let g = make_ring_grid(20).map_err(|e| e.to_string())?;
    let table = phi_sweep::<f64>(&g, 0.0, 181).map_err(|e| e.to_string())?;
    let mut first = Vec::new();
    emit_sweep_csv(&table, &mut first).map_err(|e| e.to_string())?;
    let mut second = Vec::new();
    emit_sweep_csv(&phi_sweep(&g, 0.0, 181).map_err(|e| e.to_string())?, &mut second).map_err(|e| e.to_string())?;
    check(first == second, "CSV output not byte-identical across runs")?;
    let parsed = parse_sweep_csv::<f64, _>(first.as_slice()).map_err(|e| e.to_string())?;
    let original = sweep_records(&table);
    check(parsed.len() == original.len(), "row count")?;
    for (p, o) in parsed.iter().zip(&original) {
        check(
            p.eigenvalue.to_bits() == o.eigenvalue.to_bits() && p.phi.to_bits() == o.phi.to_bits(),
            format!("row {o:?} came back as {p:?}"),
        )?;
        check(p.index == o.index && p.branch_sign == o.branch_sign, "row keys")?;
    }
    Ok(format!("{} rows bit-exact, output deterministic", parsed.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1  sweep endpoints at zero twist", ac1_endpoints),
        ("AC2  two-branch splitting over [0, pi]", ac2_splitting),
        ("AC3  numeric vs closed-form spectra", ac3_oracle_equivalence),
        ("AC4  exact Hermiticity", ac4_hermiticity),
        ("AC5  gauge dependence, periodic seam", ac5_linear_gauge_dependence),
        ("AC6  gauge invariance, twisted seam", ac6_gauge_invariance_convergence),
        ("AC7  density periodicity rule", ac7_periodicity_rule),
        ("AC8  orthonormality dichotomy", ac8_orthonormality),
        ("AC9  quadratic bands", ac9_bands),
        ("AC10 CSV determinism and round trip", ac10_csv_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
