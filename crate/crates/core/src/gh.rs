//! The growth transform `G(t) = t^2 A(t) - int_0^t s A(s) ds` and its
//! inverse `H = G^{-1}`, which converts flux data of the operator into
//! the barrier-growth rate used by the existence/nonexistence tests.
//!
//! Builtins have closed forms; expression coefficients go through
//! adaptive quadrature and monotone inversion. `G` is bounded for
//! bounded-flux coefficients (mean curvature has `sup G = 1`), and
//! inverting past the bound is reported as a flux mismatch instead of
//! an out-of-range extrapolation.

use alloc::vec::Vec;
use core::fmt;

use crate::expr::DomainError;
use crate::func::DiffusionCoeff;
use crate::math;
use crate::quad::{adaptive_gk, QuadError};

#[derive(Clone, Debug)]
pub enum GhError {
    /// Requested `H(T)` with `T` at or above the supremum of `G`.
    FluxMismatch { requested: f64, bound: f64 },
    /// The tabulated transform is not strictly increasing near `t`.
    NonMonotone { t: f64 },
    Eval(DomainError),
    Quadrature { value: f64, abs_error: f64 },
}

impl fmt::Display for GhError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhError::FluxMismatch { requested, bound } => write!(
                f,
                "growth transform is bounded by {bound}; cannot invert at {requested}"
            ),
            GhError::NonMonotone { t } => {
                write!(f, "growth transform not strictly increasing near t = {t}")
            }
            GhError::Eval(e) => write!(f, "{e}"),
            GhError::Quadrature { value, abs_error } => write!(
                f,
                "quadrature for the growth transform did not converge (value ~ {value}, error ~ {abs_error})"
            ),
        }
    }
}

impl core::error::Error for GhError {}

impl From<DomainError> for GhError {
    fn from(e: DomainError) -> Self {
        GhError::Eval(e)
    }
}

impl From<QuadError<DomainError>> for GhError {
    fn from(e: QuadError<DomainError>) -> Self {
        match e {
            QuadError::Eval(d) => GhError::Eval(d),
            QuadError::SubdivisionLimit { value, abs_error } => {
                GhError::Quadrature { value, abs_error }
            }
        }
    }
}

/// `G(t)` for `t >= 0`, using the closed form when the coefficient is a
/// builtin.
pub fn compute_g(a: &DiffusionCoeff, t: f64) -> Result<f64, GhError> {
    match a {
        DiffusionCoeff::PLaplacian { p } => Ok((p - 1.0) / p * math::pow(t, *p)),
        DiffusionCoeff::MeanCurvature => Ok(1.0 - 1.0 / math::sqrt(1.0 + t * t)),
        DiffusionCoeff::LogDiffusion => Ok(t - math::ln1p(t)),
        DiffusionCoeff::Expr(_) => compute_g_quadrature(a, t),
    }
}

/// `G(t)` via `t Phi(t) - int_0^t Phi(s) ds` with adaptive quadrature,
/// regardless of whether a closed form exists. Kept separate so the two
/// routes can be cross-checked.
pub fn compute_g_quadrature(a: &DiffusionCoeff, t: f64) -> Result<f64, GhError> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let head = t * a.flux(t)?;
    let integral = adaptive_gk(|s| a.flux(s), 0.0, t, 1e-12, 1e-14, 5000)?;
    Ok(head - integral.value)
}

/// Supremum of `G` over `t >= 0`, when finite and known in closed form.
pub fn g_supremum(a: &DiffusionCoeff) -> Option<f64> {
    match a {
        DiffusionCoeff::MeanCurvature => Some(1.0),
        _ => None,
    }
}

const INVERT_REL_TOL: f64 = 1e-10;
const INVERT_ABS_TOL: f64 = 1e-12;

/// `H(T) = G^{-1}(T)` for `T >= 0`.
///
/// Guarantees `|G(H(T)) - T| <= max(1e-12, 1e-10 T)`. For bounded-flux
/// coefficients, values at or above `sup G` yield `FluxMismatch`.
pub fn invert_h(a: &DiffusionCoeff, big_t: f64) -> Result<f64, GhError> {
    if big_t < 0.0 {
        return Err(GhError::FluxMismatch {
            requested: big_t,
            bound: 0.0,
        });
    }
    if big_t == 0.0 {
        return Ok(0.0);
    }
    match a {
        DiffusionCoeff::PLaplacian { p } => {
            Ok(math::pow(p / (p - 1.0) * big_t, 1.0 / p))
        }
        DiffusionCoeff::MeanCurvature => {
            if big_t >= 1.0 {
                return Err(GhError::FluxMismatch {
                    requested: big_t,
                    bound: 1.0,
                });
            }
            // 1 - 1/sqrt(1+t^2) = T  =>  t = sqrt(1/(1-T)^2 - 1)
            let r = 1.0 / (1.0 - big_t);
            Ok(math::sqrt(r * r - 1.0))
        }
        DiffusionCoeff::LogDiffusion => Ok(invert_log_diffusion(big_t)),
        DiffusionCoeff::Expr(_) => invert_numeric(a, big_t),
    }
}

// Solves t - ln(1+t) = T by Newton iteration; G' = t/(1+t).
fn invert_log_diffusion(big_t: f64) -> f64 {
    let mut t = if big_t < 0.5 {
        math::sqrt(2.0 * big_t)
    } else {
        big_t + math::ln1p(big_t)
    };
    for _ in 0..60 {
        let g = t - math::ln1p(t);
        let dg = t / (1.0 + t);
        if dg == 0.0 {
            break;
        }
        let step = (g - big_t) / dg;
        let next = t - step;
        if next <= 0.0 {
            t *= 0.5;
            continue;
        }
        t = next;
        if math::abs(step) <= 1e-16 * t {
            break;
        }
    }
    t
}

fn invert_numeric(a: &DiffusionCoeff, big_t: f64) -> Result<f64, GhError> {
    // Bracket by doubling. If G stalls below the target the transform is
    // bounded and the request is out of range.
    let mut hi = 1.0;
    let mut g_hi = compute_g(a, hi)?;
    let mut stalls = 0;
    while g_hi < big_t {
        let next = hi * 2.0;
        let g_next = compute_g(a, next)?;
        if !g_next.is_finite() {
            break;
        }
        if g_next <= g_hi * (1.0 + 1e-12) {
            stalls += 1;
            if stalls >= 8 {
                return Err(GhError::FluxMismatch {
                    requested: big_t,
                    bound: g_next,
                });
            }
        } else {
            stalls = 0;
        }
        hi = next;
        g_hi = g_next;
        if hi > 1e300 {
            return Err(GhError::FluxMismatch {
                requested: big_t,
                bound: g_hi,
            });
        }
    }
    let mut lo = 0.0;
    let mut g_lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let g_mid = compute_g(a, mid)?;
        if g_mid < g_lo {
            return Err(GhError::NonMonotone { t: mid });
        }
        if g_mid < big_t {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    let check = compute_g(a, t)?;
    if math::abs(check - big_t) > (INVERT_REL_TOL * big_t).max(INVERT_ABS_TOL) {
        return Err(GhError::Quadrature {
            value: t,
            abs_error: math::abs(check - big_t),
        });
    }
    Ok(t)
}

/// Precomputed monotone table of `(t, G(t))` on a geometric grid, with a
/// monotonicity certificate established at build time. Speeds up
/// repeated inversions for expression coefficients.
#[derive(Clone, Debug)]
pub struct GhTable {
    ts: Vec<f64>,
    gs: Vec<f64>,
}

impl GhTable {
    /// Builds a table on a geometric grid `t in [t_min, t_max]` and
    /// certifies that `G` is strictly increasing across it.
    pub fn build(
        a: &DiffusionCoeff,
        t_min: f64,
        t_max: f64,
        points: usize,
    ) -> Result<Self, GhError> {
        let mut ts = Vec::with_capacity(points + 1);
        let mut gs = Vec::with_capacity(points + 1);
        ts.push(0.0);
        gs.push(0.0);
        let l0 = math::ln(t_min);
        let l1 = math::ln(t_max);
        for i in 0..=points {
            let t = math::exp(l0 + (l1 - l0) * i as f64 / points as f64);
            let g = compute_g(a, t)?;
            if let Some(&last) = gs.last() {
                if g <= last {
                    return Err(GhError::NonMonotone { t });
                }
            }
            ts.push(t);
            gs.push(g);
        }
        Ok(Self { ts, gs })
    }

    pub fn g_max(&self) -> f64 {
        *self.gs.last().unwrap()
    }

    pub fn t_max(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Inverts `G` at `big_t` using the table bracket, refining by
    /// bisection on the exact transform.
    pub fn invert(&self, a: &DiffusionCoeff, big_t: f64) -> Result<f64, GhError> {
        if big_t < 0.0 || big_t > self.g_max() {
            return Err(GhError::FluxMismatch {
                requested: big_t,
                bound: self.g_max(),
            });
        }
        if big_t == 0.0 {
            return Ok(0.0);
        }
        let idx = match self
            .gs
            .binary_search_by(|g| g.partial_cmp(&big_t).unwrap())
        {
            Ok(i) => return Ok(self.ts[i]),
            Err(i) => i,
        };
        let mut lo = self.ts[idx - 1];
        let mut hi = self.ts[idx];
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if compute_g(a, mid)? < big_t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Log-log slope fit of `H(T)` over `T = 10^k`, `k = 2..8`.
#[derive(Clone, Debug)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub points_used: usize,
    pub max_residual: f64,
}

/// Estimates the asymptotic power of `H`: fits `ln H` against `ln T` at
/// `T = 10^2 .. 10^8` and trims the smallest-`T` points one at a time
/// (down to four) while the fit residual exceeds 1e-3, so pre-asymptotic
/// curvature does not bias the slope.
pub fn h_asymptotic_slope(a: &DiffusionCoeff) -> Result<SlopeEstimate, GhError> {
    let mut pts = Vec::new();
    for k in 2..=8 {
        let big_t = math::pow(10.0, k as f64);
        let h = invert_h(a, big_t)?;
        pts.push((math::ln(big_t), math::ln(h)));
    }
    loop {
        let (slope, intercept, max_residual) = fit(&pts);
        if max_residual <= 1e-3 || pts.len() <= 4 {
            return Ok(SlopeEstimate {
                slope,
                intercept,
                points_used: pts.len(),
                max_residual,
            });
        }
        pts.remove(0);
    }
}

fn fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let max_residual = pts
        .iter()
        .map(|&(x, y)| math::abs(y - (slope * x + intercept)))
        .fold(0.0, f64::max);
    (slope, intercept, max_residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn closed_forms() {
        // p = 2: G(t) = t^2/2, H(T) = sqrt(2T).
        let a = DiffusionCoeff::p_laplacian(2.0);
        assert!((compute_g(&a, 3.0).unwrap() - 4.5).abs() < 1e-15);
        assert!((invert_h(&a, 2.0).unwrap() - 2.0).abs() < 1e-14);

        // Frozen values: G(1) for the log and curvature operators.
        let g = compute_g(&DiffusionCoeff::LogDiffusion, 1.0).unwrap();
        assert!((g - 0.306_852_819_440_054_7).abs() < 1e-15);
        let g = compute_g(&DiffusionCoeff::MeanCurvature, 1.0).unwrap();
        assert!((g - 0.292_893_218_813_452_5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_vs_quadrature() {
        let cases = [
            DiffusionCoeff::p_laplacian(1.5),
            DiffusionCoeff::p_laplacian(2.0),
            DiffusionCoeff::p_laplacian(3.0),
            DiffusionCoeff::MeanCurvature,
            DiffusionCoeff::LogDiffusion,
        ];
        for a in &cases {
            for t in [0.25, 1.0, 4.0, 50.0] {
                let c = compute_g(a, t).unwrap();
                let q = compute_g_quadrature(a, t).unwrap();
                assert!(
                    (c - q).abs() <= 1e-10 * (1.0 + c.abs()),
                    "{a} at {t}: {c} vs {q}"
                );
            }
        }
    }

    #[test]
    fn invert_round_trip() {
        let cases = [
            DiffusionCoeff::p_laplacian(1.5),
            DiffusionCoeff::p_laplacian(3.0),
            DiffusionCoeff::LogDiffusion,
            DiffusionCoeff::Expr(parse_expr("1").unwrap()),
        ];
        for a in &cases {
            for big_t in [1e-3, 0.5, 7.0, 1e4] {
                let h = invert_h(a, big_t).unwrap();
                let back = compute_g(a, h).unwrap();
                assert!(
                    (back - big_t).abs() <= (1e-10 * big_t).max(1e-12),
                    "{a} at {big_t}: H = {h}, G(H) = {back}"
                );
            }
        }
        // Bounded transform: inversion below the bound works, at the
        // bound it refuses.
        let mc = DiffusionCoeff::MeanCurvature;
        let h = invert_h(&mc, 0.9).unwrap();
        assert!((compute_g(&mc, h).unwrap() - 0.9).abs() < 1e-12);
        assert!(matches!(
            invert_h(&mc, 1.0),
            Err(GhError::FluxMismatch { .. })
        ));
        assert!(matches!(
            invert_h(&mc, 5.0),
            Err(GhError::FluxMismatch { .. })
        ));
    }

    #[test]
    fn bounded_expr_transform_mismatch() {
        // Expression form of the curvature coefficient: numeric path
        // must also detect the bound.
        let a = DiffusionCoeff::Expr(parse_expr("1/sqrt(1+t^2)").unwrap());
        let h = invert_h(&a, 0.5).unwrap();
        let exact = invert_h(&DiffusionCoeff::MeanCurvature, 0.5).unwrap();
        assert!((h - exact).abs() < 1e-8 * (1.0 + exact));
        assert!(matches!(
            invert_h(&a, 2.0),
            Err(GhError::FluxMismatch { .. })
        ));
    }

    #[test]
    fn table_certificate() {
        let a = DiffusionCoeff::Expr(parse_expr("1").unwrap());
        let table = GhTable::build(&a, 1e-3, 1e3, 200).unwrap();
        for big_t in [1e-4, 0.3, 12.0] {
            let t = table.invert(&a, big_t).unwrap();
            let exact = math::sqrt(2.0 * big_t);
            assert!((t - exact).abs() < 1e-9 * (1.0 + exact), "{big_t}");
        }
        assert!(matches!(
            table.invert(&a, 1e9),
            Err(GhError::FluxMismatch { .. })
        ));

        // A decreasing "flux" fails certification.
        let bad = DiffusionCoeff::Expr(parse_expr("1/t^3").unwrap());
        assert!(matches!(
            GhTable::build(&bad, 1e-1, 1e2, 50),
            Err(GhError::NonMonotone { .. })
        ));
    }

    #[test]
    fn asymptotic_slopes() {
        for p in [1.5, 2.0, 3.0] {
            let s = h_asymptotic_slope(&DiffusionCoeff::p_laplacian(p)).unwrap();
            assert!((s.slope - 1.0 / p).abs() < 1e-6, "p = {p}: {}", s.slope);
        }
        let s = h_asymptotic_slope(&DiffusionCoeff::LogDiffusion).unwrap();
        assert!((s.slope - 1.0).abs() < 1e-2, "{}", s.slope);
        assert!(s.max_residual <= 1e-3);
    }
}
