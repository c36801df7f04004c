use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use qei_core::carnot::{
    h_dilate, h_mul, h_norm, h_psi, radial_sublaplacian_check, CarnotError, HGroup, HPoint,
};
use qei_core::comparison::{
    decompose_pairing, discrete_comparison_check, monotone_pairing, CompareOptions, DiscreteField,
};
use qei_core::func::{log_grid, DiffusionCoeff, ScalarFunc};
use qei_core::gh::{compute_g, h_asymptotic_slope, invert_h};
use qei_core::ko::ko_classify;
use qei_core::radial::{integrate_blowup, BlowupStatus, IntegrateOptions, RadialProblem};
use qei_core::rng::SplitMix64;
use qei_core::verdict::{decide, Conclusion, ProblemSpec, Relation, Setting, Verdict};

pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn crit(index: usize, name: &'static str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult {
        index,
        name,
        passed,
        detail,
    }
}

pub fn render(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "criterion {:2} [{}] {}: {}\n",
            r.index,
            if r.passed { "pass" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!(
        "{} of {} criteria passed\n",
        results.len() - failed,
        results.len()
    ));
    out
}

/// Criteria 1..11; criterion 12 reruns these and compares the rendered
/// reports byte for byte.
fn run_base(seed: u64) -> Vec<CriterionResult> {
    vec![
        c1_boundary_law(),
        c2_h_closed_form(),
        c3_log_diffusion(),
        c4_blowup_radius(),
        c5_global_existence(),
        c6_gradient_blowup(),
        c7_monotone_pairing(seed),
        c8_discrete_comparison(seed),
        c9_heisenberg(seed),
        c10_golden_table(),
        c11_ko_blowup_consistency(),
    ]
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    let mut results = run_base(seed);
    let first = render(&results);
    let second = render(&run_base(seed));
    let passed = first == second;
    results.push(crit(
        12,
        "determinism",
        passed,
        if passed {
            "two runs with the same seed render byte-identical reports".into()
        } else {
            "reports differ between two runs with the same seed".into()
        },
    ));
    results
}

// --- criterion 1 ------------------------------------------------------------

fn c1_boundary_law() -> CriterionResult {
    let mut failures = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for dq in [-0.2, 0.0, 0.2] {
            let q = p - 1.0 + dq;
            let f = ScalarFunc::power(1.0, q);
            let start = Instant::now();
            let outcome = ko_classify(&f, p, -1.0);
            let elapsed = start.elapsed();
            match outcome {
                Ok(r) => {
                    let ok = if dq > 0.0 {
                        r.classification.converges()
                    } else {
                        r.classification.diverges()
                    };
                    if !ok {
                        failures.push(format!("p={p} q={q}: wrong class"));
                    }
                }
                Err(e) => failures.push(format!("p={p} q={q}: {e}")),
            }
            if elapsed > Duration::from_secs(1) {
                failures.push(format!("p={p} q={q}: over 1 s"));
            }
        }
    }
    let passed = failures.is_empty();
    crit(
        1,
        "tail-integral boundary law",
        passed,
        if passed {
            "9 power-law cases classified correctly, each under 1 s".into()
        } else {
            failures.join("; ")
        },
    )
}

// --- criterion 2 ------------------------------------------------------------

fn c2_h_closed_form() -> CriterionResult {
    let mut max_rel: f64 = 0.0;
    let mut err = None;
    for p in [1.5, 2.0, 3.0] {
        let a = DiffusionCoeff::p_laplacian(p);
        for big_t in log_grid(1e-3, 1e3, 4) {
            match invert_h(&a, big_t) {
                Ok(h) => {
                    let exact = (p / (p - 1.0) * big_t).powf(1.0 / p);
                    max_rel = max_rel.max(((h - exact) / exact).abs());
                }
                Err(e) => err = Some(format!("p={p} T={big_t}: {e}")),
            }
        }
    }
    if let Some(e) = err {
        return crit(2, "inverse growth transform closed form", false, e);
    }
    crit(
        2,
        "inverse growth transform closed form",
        max_rel <= 1e-8,
        format!("max relative deviation {max_rel:.3e} (bound 1e-8)"),
    )
}

// --- criterion 3 ------------------------------------------------------------

fn c3_log_diffusion() -> CriterionResult {
    let a = DiffusionCoeff::LogDiffusion;
    let mut max_abs: f64 = 0.0;
    for k in 0..=400 {
        let t = 0.25 * k as f64;
        match compute_g(&a, t) {
            Ok(g) => max_abs = max_abs.max((g - (t - t.ln_1p())).abs()),
            Err(e) => {
                return crit(3, "logarithmic diffusion transform", false, format!("{e}"))
            }
        }
    }
    let slope = match h_asymptotic_slope(&a) {
        Ok(s) => s.slope,
        Err(e) => return crit(3, "logarithmic diffusion transform", false, format!("{e}")),
    };
    let passed = max_abs <= 1e-10 && (slope - 1.0).abs() <= 1e-2;
    crit(
        3,
        "logarithmic diffusion transform",
        passed,
        format!("max |G - (t - ln(1+t))| = {max_abs:.3e}, asymptotic slope {slope}"),
    )
}

// --- criteria 4-6 -----------------------------------------------------------

fn c4_blowup_radius() -> CriterionResult {
    let prob = RadialProblem {
        coeff: DiffusionCoeff::p_laplacian(2.0),
        dimension: 4.0,
        g: ScalarFunc::power(8.0, 3.0),
        initial: 1.0,
    };
    let start = Instant::now();
    let result = integrate_blowup(&prob, &IntegrateOptions::default());
    let elapsed = start.elapsed();
    match result {
        Ok(r) => match r.status {
            BlowupStatus::FiniteBlowup {
                radius,
                radius_error,
            } => {
                let passed = (radius - 1.0).abs() <= 1e-3 && elapsed < Duration::from_secs(5);
                crit(
                    4,
                    "pole-type blow-up radius oracle",
                    passed,
                    format!("R = {radius} (error estimate {radius_error}), oracle 1"),
                )
            }
            other => crit(
                4,
                "pole-type blow-up radius oracle",
                false,
                format!("unexpected status {other:?}"),
            ),
        },
        Err(e) => crit(4, "pole-type blow-up radius oracle", false, format!("{e}")),
    }
}

fn c5_global_existence() -> CriterionResult {
    let prob = RadialProblem {
        coeff: DiffusionCoeff::p_laplacian(2.0),
        dimension: 3.0,
        g: ScalarFunc::constant(1.0),
        initial: 1.0,
    };
    match integrate_blowup(&prob, &IntegrateOptions::default()) {
        Ok(r) => {
            if !matches!(r.status, BlowupStatus::GlobalExistence { .. }) {
                return crit(
                    5,
                    "global-existence oracle",
                    false,
                    format!("unexpected status {:?}", r.status),
                );
            }
            let mut max_rel: f64 = 0.0;
            for (radius, phi, _) in &r.trajectory {
                if *radius <= 10.0 {
                    let exact = 1.0 + radius * radius / 6.0;
                    max_rel = max_rel.max(((phi - exact) / exact).abs());
                }
            }
            crit(
                5,
                "global-existence oracle",
                max_rel <= 1e-6,
                format!("max relative deviation from 1 + r^2/6 is {max_rel:.3e} up to r = 10"),
            )
        }
        Err(e) => crit(5, "global-existence oracle", false, format!("{e}")),
    }
}

fn c6_gradient_blowup() -> CriterionResult {
    let prob = RadialProblem {
        coeff: DiffusionCoeff::MeanCurvature,
        dimension: 2.0,
        g: ScalarFunc::constant(1.0),
        initial: 1.0,
    };
    match integrate_blowup(&prob, &IntegrateOptions::default()) {
        Ok(r) => match r.status {
            BlowupStatus::GradientBlowup { r_star, .. } => crit(
                6,
                "gradient blow-up oracle",
                (r_star - 2.0).abs() <= 1e-3,
                format!("r* = {r_star}, oracle 2"),
            ),
            other => crit(
                6,
                "gradient blow-up oracle",
                false,
                format!("unexpected status {other:?}"),
            ),
        },
        Err(e) => crit(6, "gradient blow-up oracle", false, format!("{e}")),
    }
}

// --- criterion 7 ------------------------------------------------------------

fn c7_monotone_pairing(seed: u64) -> CriterionResult {
    let coeffs = [
        DiffusionCoeff::p_laplacian(1.5),
        DiffusionCoeff::p_laplacian(2.0),
        DiffusionCoeff::p_laplacian(3.0),
        DiffusionCoeff::MeanCurvature,
        DiffusionCoeff::LogDiffusion,
    ];
    let mut worst: f64 = 0.0;
    for (ci, a) in coeffs.iter().enumerate() {
        let mut rng = SplitMix64::new(seed ^ (0xc0ffee + ci as u64));
        for _ in 0..100_000 {
            let xi = [
                rng.uniform(-5.0, 5.0),
                rng.uniform(-5.0, 5.0),
                rng.uniform(-5.0, 5.0),
            ];
            let eta = [
                rng.uniform(-5.0, 5.0),
                rng.uniform(-5.0, 5.0),
                rng.uniform(-5.0, 5.0),
            ];
            let nx = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
            let ne = eta.iter().map(|c| c * c).sum::<f64>().sqrt();
            let scale = match (a.flux(nx), a.flux(ne)) {
                (Ok(fx), Ok(fe)) => (fx + fe) * (nx + ne) + 1.0,
                _ => {
                    return crit(7, "monotone operator pairing", false, "flux eval failed".into())
                }
            };
            let pairing = match monotone_pairing(a, &xi, &eta) {
                Ok(v) => v,
                Err(e) => {
                    return crit(7, "monotone operator pairing", false, format!("{e}"))
                }
            };
            let (i1, i2) = match decompose_pairing(a, &xi, &eta) {
                Ok(v) => v,
                Err(e) => {
                    return crit(7, "monotone operator pairing", false, format!("{e}"))
                }
            };
            for v in [pairing, i1, i2] {
                worst = worst.max(-v / scale);
            }
        }
    }
    crit(
        7,
        "monotone operator pairing",
        worst <= 1e-12,
        format!("500000 random pairs, worst normalized negativity {worst:.3e} (bound 1e-12)"),
    )
}

// --- criterion 8 ------------------------------------------------------------

fn hermite_sample(traj: &[(f64, f64, f64)], r: f64) -> f64 {
    let idx = traj.partition_point(|(tr, _, _)| *tr < r);
    if idx == 0 {
        return traj[0].1;
    }
    if idx >= traj.len() {
        return traj[traj.len() - 1].1;
    }
    let (r0, p0, d0) = traj[idx - 1];
    let (r1, p1, d1) = traj[idx];
    let h = r1 - r0;
    let s = (r - r0) / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    h00 * p0 + h10 * h * d0 + h01 * p1 + h11 * h * d1
}

fn c8_discrete_comparison(seed: u64) -> CriterionResult {
    let coeff = DiffusionCoeff::p_laplacian(2.0);
    let g = ScalarFunc::power(8.0, 3.0);
    let mut rng = SplitMix64::new(seed ^ 0x5eed5eed);
    let mut violations = 0usize;
    let mut hypothesis_failures = 0usize;

    // Randomized instances around the closed-form supersolution
    // v = 1/(1 - r^2), an exact solution of the D = 4 radial problem
    // with source 8 t^3; u = v - delta is then a strict subsolution.
    for i in 0..200 {
        let delta = rng.uniform(0.01, 0.5);
        let r_lo = rng.uniform(0.05, 0.15);
        let r_hi = rng.uniform(0.6, 0.85);
        let n = 60 + rng.uniform_usize(120);
        let mut grid = Vec::with_capacity(n + 1);
        let mut uv = Vec::with_capacity(n + 1);
        let mut vv = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let r = r_lo + (r_hi - r_lo) * j as f64 / n as f64;
            let v = 1.0 / (1.0 - r * r);
            grid.push(r);
            vv.push(v);
            uv.push(v - delta);
        }
        let gmax = 8.0 * vv[n] * vv[n] * vv[n];
        let u = DiscreteField::new(grid.clone(), uv, 4.0).expect("valid field");
        let v = DiscreteField::new(grid, vv, 4.0).expect("valid field");
        let opts = CompareOptions {
            epsilon: Some(1e-10),
            residual_tol: Some(0.05 * (1.0 + gmax)),
            seed: seed ^ i,
            random_pairs: 500,
        };
        match discrete_comparison_check(&coeff, &u, &v, &g, &g, &opts) {
            Ok(cert) => {
                if !cert.conclusion_holds {
                    violations += 1;
                }
                if !cert.hypotheses_passed() {
                    hypothesis_failures += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }

    // End-to-end instance: the integrated blow-up profile of criterion 4
    // as supersolution, resampled by cubic interpolation.
    let prob = RadialProblem {
        coeff: DiffusionCoeff::p_laplacian(2.0),
        dimension: 4.0,
        g: g.clone(),
        initial: 1.0,
    };
    let end_to_end = match integrate_blowup(&prob, &IntegrateOptions::default()) {
        Ok(res) => {
            let delta = 0.05;
            let n = 750usize;
            let mut grid = Vec::with_capacity(n + 1);
            let mut uv = Vec::with_capacity(n + 1);
            let mut vv = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let r = 0.05 + (0.8 - 0.05) * j as f64 / n as f64;
                grid.push(r);
                vv.push(hermite_sample(&res.trajectory, r));
                uv.push(1.0 / (1.0 - r * r) - delta);
            }
            let gmax = 8.0 * vv[n] * vv[n] * vv[n];
            let u = DiscreteField::new(grid.clone(), uv, 4.0).expect("valid field");
            let v = DiscreteField::new(grid, vv, 4.0).expect("valid field");
            let opts = CompareOptions {
                epsilon: Some(1e-6),
                residual_tol: Some(0.05 * (1.0 + gmax)),
                seed,
                random_pairs: 1000,
            };
            discrete_comparison_check(&coeff, &u, &v, &g, &g, &opts)
                .map(|c| c.passed())
                .unwrap_or(false)
        }
        Err(_) => false,
    };

    let passed = violations == 0 && hypothesis_failures == 0 && end_to_end;
    crit(
        8,
        "discrete comparison principle",
        passed,
        format!(
            "200 randomized instances: {violations} conclusion violations, \
             {hypothesis_failures} hypothesis failures; end-to-end instance {}",
            if end_to_end { "passed" } else { "FAILED" }
        ),
    )
}

// --- criterion 9 ------------------------------------------------------------

#[derive(Serialize)]
pub struct CarnotSuiteReport {
    pub schema_version: &'static str,
    pub n: usize,
    pub homogeneous_dimension: f64,
    pub triples: usize,
    pub group_max_err: f64,
    pub norm_max_rel: f64,
    pub psi_points: usize,
    pub psi_in_range: bool,
    pub radial_cases: usize,
    pub radial_max_rel: f64,
    pub flux_max_rel: f64,
    pub pass: bool,
}

fn random_point(rng: &mut SplitMix64, n: usize) -> HPoint {
    let x = (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect();
    let y = (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect();
    HPoint::new(x, y, rng.uniform(-4.0, 4.0))
}

pub fn load_points_csv(path: &std::path::Path, n: usize) -> Result<Vec<HPoint>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse()).collect();
        let cols = match cols {
            Ok(c) => c,
            Err(_) if i == 0 => continue,
            Err(_) => bail!("{}: line {}: non-numeric data", path.display(), i + 1),
        };
        if cols.len() != 2 * n + 1 {
            bail!(
                "{}: line {}: expected {} columns for n = {n}",
                path.display(),
                i + 1,
                2 * n + 1
            );
        }
        points.push(HPoint::new(
            cols[0..n].to_vec(),
            cols[n..2 * n].to_vec(),
            cols[2 * n],
        ));
    }
    Ok(points)
}

pub fn carnot_suite(
    seed: u64,
    n: usize,
    supplied: Option<&[HPoint]>,
) -> Result<CarnotSuiteReport, CarnotError> {
    let group = HGroup::new(n);
    let mut rng = SplitMix64::new(seed ^ 0xca2107);

    let mut group_max_err: f64 = 0.0;
    let triples = 1000;
    for _ in 0..triples {
        let (a, b, c) = (
            random_point(&mut rng, n),
            random_point(&mut rng, n),
            random_point(&mut rng, n),
        );
        let left = h_mul(&h_mul(&a, &b)?, &c)?;
        let right = h_mul(&a, &h_mul(&b, &c)?)?;
        group_max_err = group_max_err.max((left.t - right.t).abs());
        for i in 0..n {
            group_max_err = group_max_err
                .max((left.x[i] - right.x[i]).abs())
                .max((left.y[i] - right.y[i]).abs());
        }
        let id = h_mul(&a, &a.inverse())?;
        group_max_err = group_max_err.max(id.t.abs());
        for i in 0..n {
            group_max_err = group_max_err.max(id.x[i].abs()).max(id.y[i].abs());
        }
    }

    let mut norm_max_rel: f64 = 0.0;
    for _ in 0..1000 {
        let a = random_point(&mut rng, n);
        let norm = h_norm(&a);
        if norm < 1e-6 {
            continue;
        }
        for scale in [0.5, 2.0, 10.0] {
            let d = h_norm(&h_dilate(&a, scale)?);
            norm_max_rel = norm_max_rel.max((d - scale * norm).abs() / (scale * norm));
        }
        norm_max_rel = norm_max_rel.max((h_norm(&a.inverse()) - norm).abs() / norm);
    }

    let mut psi_in_range = true;
    let mut psi_points = 0usize;
    let mut check_psi = |p: &HPoint| -> Result<(), CarnotError> {
        if h_norm(p) < 1e-6 {
            return Ok(());
        }
        let psi = h_psi(p)?;
        psi_points += 1;
        if !(0.0..=1.0 + 1e-12).contains(&psi) {
            psi_in_range = false;
        }
        Ok(())
    };
    match supplied {
        Some(points) => {
            for p in points {
                check_psi(p)?;
            }
        }
        None => {
            for _ in 0..10_000 {
                let p = random_point(&mut rng, n);
                check_psi(&p)?;
            }
        }
    }

    let zetas = [
        ScalarFunc::parse("t^2").expect("literal"),
        ScalarFunc::parse("t^3").expect("literal"),
        ScalarFunc::parse("exp(t)").expect("literal"),
    ];
    let mut radial_max_rel: f64 = 0.0;
    let mut flux_max_rel: f64 = 0.0;
    let mut radial_cases = 0usize;
    'outer: loop {
        let x = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let y = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let a = HPoint::new(x, y, rng.uniform(-4.0, 4.0));
        for zeta in &zetas {
            for p in [2.0, 3.0] {
                let c = radial_sublaplacian_check(zeta, p, &a, 1e-4)?;
                radial_max_rel = radial_max_rel.max(c.rel_err);
                flux_max_rel = flux_max_rel.max(c.flux_rel_err);
                radial_cases += 1;
                if radial_cases >= 100 {
                    break 'outer;
                }
            }
        }
    }

    let pass = group_max_err <= 1e-12
        && norm_max_rel <= 1e-12
        && psi_in_range
        && radial_max_rel <= 1e-6
        && flux_max_rel <= 1e-9;
    Ok(CarnotSuiteReport {
        schema_version: crate::report::SCHEMA_VERSION,
        n,
        homogeneous_dimension: group.homogeneous_dim(),
        triples,
        group_max_err,
        norm_max_rel,
        psi_points,
        psi_in_range,
        radial_cases,
        radial_max_rel,
        flux_max_rel,
        pass,
    })
}

fn c9_heisenberg(seed: u64) -> CriterionResult {
    match carnot_suite(seed, 1, None) {
        Ok(s) => crit(
            9,
            "Heisenberg-group suite",
            s.pass,
            format!(
                "group err {:.3e}, norm rel {:.3e}, psi in [0,1] at {} points: {}, \
                 radial rel {:.3e}, flux rel {:.3e}",
                s.group_max_err,
                s.norm_max_rel,
                s.psi_points,
                s.psi_in_range,
                s.radial_max_rel,
                s.flux_max_rel
            ),
        ),
        Err(e) => crit(9, "Heisenberg-group suite", false, format!("{e}")),
    }
}

// --- criterion 10 -----------------------------------------------------------

fn cites(v: &Verdict, theorem: &str) -> bool {
    v.justification
        .iter()
        .any(|c| c.theorem == theorem && c.licensed.is_some())
}

fn c10_golden_table() -> CriterionResult {
    let scenarios: Vec<(&str, ProblemSpec, &str)> = vec![
        (
            "a",
            ProblemSpec {
                operator: DiffusionCoeff::p_laplacian(2.0),
                f: ScalarFunc::power_sign(-1.0, 3.0),
                setting: Setting::Euclidean { n: 3 },
                relation: Relation::Equation,
            },
            "liouville.zero",
        ),
        (
            "b",
            ProblemSpec {
                operator: DiffusionCoeff::MeanCurvature,
                f: ScalarFunc::constant(1.0),
                setting: Setting::Euclidean { n: 3 },
                relation: Relation::Inequality,
            },
            "nonexistence.bounded_flux",
        ),
        (
            "c",
            ProblemSpec {
                operator: DiffusionCoeff::p_laplacian(2.0),
                f: ScalarFunc::parse("max(0-t,0)^2").expect("literal"),
                setting: Setting::Euclidean { n: 3 },
                relation: Relation::Inequality,
            },
            "positivity.p_laplacian",
        ),
        (
            "d",
            ProblemSpec {
                operator: DiffusionCoeff::MeanCurvature,
                f: ScalarFunc::parse("min(1-t,0)+max(0-t-1,0)").expect("literal"),
                setting: Setting::Euclidean { n: 3 },
                relation: Relation::Equation,
            },
            "constancy.bounded_flux",
        ),
        (
            "e",
            ProblemSpec {
                operator: DiffusionCoeff::p_laplacian(3.0),
                f: ScalarFunc::power(1.0, 3.0),
                setting: Setting::Euclidean { n: 2 },
                relation: Relation::Inequality,
            },
            "liouville.constant",
        ),
        (
            "f",
            ProblemSpec {
                operator: DiffusionCoeff::p_laplacian(2.0),
                f: ScalarFunc::parse("1+max(0-t,0)^3").expect("literal"),
                setting: Setting::Euclidean { n: 3 },
                relation: Relation::Inequality,
            },
            "nonexistence.p_laplacian",
        ),
        (
            "g",
            ProblemSpec {
                operator: DiffusionCoeff::p_laplacian(3.0),
                f: ScalarFunc::parse("max(0-t,0)^2").expect("literal"),
                setting: Setting::Euclidean { n: 3 },
                relation: Relation::Inequality,
            },
            "",
        ),
        (
            "h",
            ProblemSpec {
                operator: DiffusionCoeff::p_laplacian(2.0),
                f: ScalarFunc::power_sign(-1.0, 3.0),
                setting: Setting::Carnot { q: 4 },
                relation: Relation::Equation,
            },
            "liouville.zero.carnot",
        ),
    ];
    let mut failures = Vec::new();
    for (label, spec, theorem) in &scenarios {
        let v = decide(spec, None, None);
        let ok = match *label {
            "a" | "h" => v.conclusion == Conclusion::ZeroOnly,
            "b" | "f" => v.conclusion == Conclusion::NoSolutions,
            "c" => v.conclusion == Conclusion::NonnegativeAndPositiveOrZero,
            "d" | "e" => matches!(v.conclusion, Conclusion::ConstantOnly { .. }),
            "g" => v.conclusion == Conclusion::NoConclusion,
            _ => false,
        };
        if !ok {
            failures.push(format!("({label}): got {}", v.conclusion));
            continue;
        }
        if !theorem.is_empty() && !cites(&v, theorem) {
            failures.push(format!("({label}): does not cite {theorem}"));
        }
    }
    let passed = failures.is_empty();
    crit(
        10,
        "verdict golden table",
        passed,
        if passed {
            "8 scenarios match their expected conclusions and citations".into()
        } else {
            failures.join("; ")
        },
    )
}

// --- criterion 11 -----------------------------------------------------------

fn c11_ko_blowup_consistency() -> CriterionResult {
    let mut failures = Vec::new();
    for q in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let converges = match ko_classify(&ScalarFunc::power(1.0, q), 2.0, -1.0) {
            Ok(r) => r.classification.converges(),
            Err(e) => {
                failures.push(format!("q={q}: {e}"));
                continue;
            }
        };
        let prob = RadialProblem {
            coeff: DiffusionCoeff::p_laplacian(2.0),
            dimension: 3.0,
            g: ScalarFunc::power(1.0, q),
            initial: 1.0,
        };
        let finite = match integrate_blowup(&prob, &IntegrateOptions::default()) {
            Ok(r) => matches!(r.status, BlowupStatus::FiniteBlowup { .. }),
            Err(e) => {
                failures.push(format!("q={q}: {e}"));
                continue;
            }
        };
        if converges != finite {
            failures.push(format!(
                "q={q}: tail integral converges = {converges}, finite blow-up = {finite}"
            ));
        }
    }
    let passed = failures.is_empty();
    crit(
        11,
        "tail-integral / blow-up consistency",
        passed,
        if passed {
            "finite blow-up exactly where the tail integral converges (5 exponents)".into()
        } else {
            failures.join("; ")
        },
    )
}
