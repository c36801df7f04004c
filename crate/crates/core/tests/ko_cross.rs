use qei_core::func::ScalarFunc;
use qei_core::ko::{ko_classify, ko_classify_two_sided, Classification};
use qei_core::rng::SplitMix64;

/// Independent oracle for `int_{-inf}^{-1} F(t)^{-1/p} dt` with
/// `f = c|t|^q`, so `F(t) = c(|t|^{q+1} - 1)/(q + 1)` in closed form.
/// After `x = -t` and the desingularizing substitution `x = 1 + s^2`
/// the integrand is smooth and is summed with composite Simpson over
/// dyadic segments, plus an analytic power-law tail.
fn power_law_oracle(c: f64, q: f64, p: f64) -> f64 {
    // x^{q+1} - 1 written as expm1((q+1) ln1p(s^2)) to stay accurate
    // near the endpoint where x - 1 = s^2 underflows in x.
    let g = |s: f64| {
        let inner = c * f64::exp_m1((q + 1.0) * f64::ln_1p(s * s)) / (q + 1.0);
        inner.powf(-1.0 / p) * 2.0 * s
    };
    let simpson = |a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut sum = g(a) + g(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * g(a + i as f64 * h);
        }
        sum * h / 3.0
    };
    // s = 0 endpoint: the integrand vanishes like s^{1 - 2/p} for p > 2
    // it is singular-but-integrable; start the first panel at a tiny
    // offset and refine the segment near zero dyadically instead.
    let mut total = 0.0;
    let mut lo: f64 = 1e-8;
    while lo < 1.0 {
        let hi = (lo * 2.0).min(1.0);
        total += simpson(lo, hi, 256);
        lo = hi;
    }
    let mut k = 0;
    loop {
        let (a, b) = (f64::powi(2.0, k), f64::powi(2.0, k + 1));
        let seg = simpson(a, b, 512);
        total += seg;
        if seg < 1e-12 * total || k > 60 {
            break;
        }
        k += 1;
    }
    // Tail beyond s = 2^{k+1}: integrand ~ K s^{1 - 2(q+1)/p}.
    let s_end = f64::powi(2.0, k + 1);
    let m = 2.0 * (q + 1.0) / p - 1.0;
    let coeff = (c / (q + 1.0)).powf(-1.0 / p) * 2.0;
    total += coeff * s_end.powf(-m) / m;
    total
}

#[test]
fn boundary_law_power_sources() {
    for p in [1.5, 2.0, 3.0] {
        for dq in [-0.2, 0.0, 0.2] {
            let q = p - 1.0 + dq;
            let f = ScalarFunc::power(1.0, q);
            let report = ko_classify(&f, p, -1.0).unwrap();
            if dq > 0.0 {
                assert!(
                    report.classification.converges(),
                    "p = {p}, q = {q}: expected convergence, got {:?}",
                    report.classification
                );
            } else {
                assert!(
                    report.classification.diverges(),
                    "p = {p}, q = {q}: expected divergence, got {:?}",
                    report.classification
                );
            }
        }
    }
}

#[test]
fn random_power_laws_match_closed_form_oracle() {
    let mut rng = SplitMix64::new(42);
    for i in 0..20 {
        let p = 1.3 + 2.2 * rng.next_f64();
        let q = p - 1.0 + 0.3 + 1.7 * rng.next_f64();
        let c = 0.5 + 3.5 * rng.next_f64();
        let f = ScalarFunc::power(c, q);
        let report = ko_classify(&f, p, -1.0).unwrap();
        let value = match report.classification {
            Classification::Converges { value, .. } => value,
            ref other => panic!("case {i} (p={p}, q={q}, c={c}): got {other:?}"),
        };
        let oracle = power_law_oracle(c, q, p);
        let rel = ((value - oracle) / oracle).abs();
        assert!(
            rel < 1e-3,
            "case {i}: p={p}, q={q}, c={c}: value {value} vs oracle {oracle} (rel {rel})"
        );
    }
}

#[test]
fn monotone_in_the_source() {
    // A pointwise-larger source shrinks the convergent integral.
    let mut prev = f64::INFINITY;
    for c in [0.5, 1.0, 2.0, 4.0] {
        let f = ScalarFunc::power(c, 3.0);
        let report = ko_classify(&f, 2.0, -1.0).unwrap();
        let value = match report.classification {
            Classification::Converges { value, .. } => value,
            ref other => panic!("c = {c}: got {other:?}"),
        };
        assert!(value < prev, "c = {c}: {value} not below {prev}");
        prev = value;
    }
}

#[test]
fn odd_sources_give_symmetric_sides() {
    for q in [2.0, 3.0, 4.5] {
        let f = ScalarFunc::power_sign(-1.0, q);
        let (left, right) = ko_classify_two_sided(&f, 2.0, -1.0, 1.0).unwrap();
        match (&left.classification, &right.classification) {
            (
                Classification::Converges { value: l, .. },
                Classification::Converges { value: r, .. },
            ) => {
                assert!(
                    ((l - r) / l).abs() < 1e-9,
                    "q = {q}: sides {l} vs {r}"
                );
            }
            other => panic!("q = {q}: {other:?}"),
        }
    }
}
