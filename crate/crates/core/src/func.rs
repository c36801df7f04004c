//! Scalar nonlinearities and diffusion coefficients, together with the
//! sampled audits of the structural hypotheses the positivity theorems
//! rest on: positivity/monotonicity of `f` on half-lines and the
//! admissibility of `A` (positive, with `t A(t)` strictly increasing).
//!
//! All checks here are sampled evidence, not proofs, and the reports say
//! so explicitly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::{eval_expr, DomainError, Expr};
use crate::math;

/// Body of a scalar function of one variable.
///
/// Builtins have closed-form evaluation: `Power` is `c*|t|^q`,
/// `PowerSign` is `c*sign(t)*|t|^q`, `LogPower` is `c*ln(1+|t|)^q`.
#[derive(Clone, Debug)]
pub enum FuncBody {
    Expr(Expr),
    PowerSign { c: f64, q: f64 },
    Power { c: f64, q: f64 },
    LogPower { c: f64, q: f64 },
    Constant(f64),
}

/// A scalar function with declared domain and optional reflection /
/// negation wrappers (`t -> f(-t)` and `t -> -f(t)`), which the
/// two-sided Keller-Osserman reduction composes.
#[derive(Clone, Debug)]
pub struct ScalarFunc {
    pub body: FuncBody,
    /// Closed interval of validity; evaluation outside is a domain error.
    pub domain: (f64, f64),
    reflect: bool,
    negate: bool,
}

impl ScalarFunc {
    pub fn new(body: FuncBody) -> Self {
        Self {
            body,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            reflect: false,
            negate: false,
        }
    }

    pub fn expr(e: Expr) -> Self {
        Self::new(FuncBody::Expr(e))
    }

    pub fn parse(src: &str) -> Result<Self, crate::expr::ParseError> {
        Ok(Self::expr(crate::expr::parse_expr(src)?))
    }

    pub fn power(c: f64, q: f64) -> Self {
        Self::new(FuncBody::Power { c, q })
    }

    pub fn power_sign(c: f64, q: f64) -> Self {
        Self::new(FuncBody::PowerSign { c, q })
    }

    pub fn log_power(c: f64, q: f64) -> Self {
        Self::new(FuncBody::LogPower { c, q })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(FuncBody::Constant(c))
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    /// `t -> f(-t)`.
    pub fn reflected(mut self) -> Self {
        self.reflect = !self.reflect;
        let (lo, hi) = self.domain;
        self.domain = (-hi, -lo);
        self
    }

    /// `t -> -f(t)`.
    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self
    }

    pub fn eval(&self, t: f64) -> Result<f64, DomainError> {
        if !(t >= self.domain.0 && t <= self.domain.1) {
            return Err(DomainError {
                what: "outside declared domain",
                subexpr: format!("{self}"),
                t,
            });
        }
        let x = if self.reflect { -t } else { t };
        let v = match &self.body {
            FuncBody::Expr(e) => eval_expr(e, x)?,
            FuncBody::Power { c, q } => c * math::pow(math::abs(x), *q),
            FuncBody::PowerSign { c, q } => c * math::sign(x) * math::pow(math::abs(x), *q),
            FuncBody::LogPower { c, q } => c * math::pow(math::ln1p(math::abs(x)), *q),
            FuncBody::Constant(c) => *c,
        };
        Ok(if self.negate { -v } else { v })
    }
}

impl fmt::Display for ScalarFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negate {
            write!(f, "-[")?;
        }
        match &self.body {
            FuncBody::Expr(e) => write!(f, "{e}")?,
            FuncBody::Power { c, q } => write!(f, "{c}*abs(t)^{q}")?,
            FuncBody::PowerSign { c, q } => write!(f, "{c}*sign(t)*abs(t)^{q}")?,
            FuncBody::LogPower { c, q } => write!(f, "{c}*ln(1+abs(t))^{q}")?,
            FuncBody::Constant(c) => write!(f, "{c}")?,
        }
        if self.negate {
            write!(f, "]")?;
        }
        if self.reflect {
            write!(f, " @ t -> -t")?;
        }
        Ok(())
    }
}

/// Diffusion coefficient `A` of the operator `div(A(|grad u|) grad u)`.
///
/// Builtins carry closed forms for the flux `Phi(t) = t A(t)` and its
/// inverse: `PLaplacian(p)` is `A(t) = t^{p-2}`, `MeanCurvature` is
/// `1/sqrt(1+t^2)`, `LogDiffusion` is `ln(1+t)/t` (extended by
/// continuity with `A(0) = 1`).
#[derive(Clone, Debug)]
pub enum DiffusionCoeff {
    PLaplacian { p: f64 },
    MeanCurvature,
    LogDiffusion,
    Expr(Expr),
}

impl fmt::Display for DiffusionCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffusionCoeff::PLaplacian { p } => write!(f, "p-laplacian(p={p})"),
            DiffusionCoeff::MeanCurvature => write!(f, "mean-curvature"),
            DiffusionCoeff::LogDiffusion => write!(f, "log-diffusion"),
            DiffusionCoeff::Expr(e) => write!(f, "A(t) = {e}"),
        }
    }
}

/// Asymptotic regime of the flux `t A(t)` as `t -> +infinity`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FluxClass {
    Bounded { limit: f64 },
    Unbounded,
}

#[derive(Clone, Debug)]
pub enum FluxError {
    /// The asymptotic regime was not numerically resolved.
    Inconclusive { last_estimate: f64 },
    Eval(DomainError),
}

impl fmt::Display for FluxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluxError::Inconclusive { last_estimate } => write!(
                f,
                "flux classification inconclusive (last estimate {last_estimate})"
            ),
            FluxError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FluxError {}

#[derive(Clone, Debug)]
pub enum FluxInvError {
    /// Requested value at or beyond the bounded-flux limit.
    BeyondLimit { y: f64, limit: f64 },
    /// Bracketing failed (flux not observed to reach `y`).
    NoBracket { y: f64 },
    Eval(DomainError),
}

impl fmt::Display for FluxInvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluxInvError::BeyondLimit { y, limit } => {
                write!(f, "flux inverse of {y} beyond limit {limit}")
            }
            FluxInvError::NoBracket { y } => write!(f, "could not bracket flux inverse of {y}"),
            FluxInvError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FluxInvError {}

impl DiffusionCoeff {
    pub fn p_laplacian(p: f64) -> Self {
        DiffusionCoeff::PLaplacian { p }
    }

    /// `A(t)` for `t >= 0`.
    pub fn eval(&self, t: f64) -> Result<f64, DomainError> {
        match self {
            DiffusionCoeff::PLaplacian { p } => Ok(math::pow(t, p - 2.0)),
            DiffusionCoeff::MeanCurvature => Ok(1.0 / math::sqrt(1.0 + t * t)),
            DiffusionCoeff::LogDiffusion => {
                if t == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(math::ln1p(t) / t)
                }
            }
            DiffusionCoeff::Expr(e) => eval_expr(e, t),
        }
    }

    /// Flux `Phi(t) = t A(t)` for `t >= 0`, with `Phi(0) = 0`.
    pub fn flux(&self, t: f64) -> Result<f64, DomainError> {
        match self {
            DiffusionCoeff::PLaplacian { p } => Ok(math::pow(t, p - 1.0)),
            DiffusionCoeff::MeanCurvature => Ok(t / math::sqrt(1.0 + t * t)),
            DiffusionCoeff::LogDiffusion => Ok(math::ln1p(t)),
            DiffusionCoeff::Expr(e) => {
                if t == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(t * eval_expr(e, t)?)
                }
            }
        }
    }

    /// Odd extension of the flux: `Phi(s) = A(|s|) s` for signed slopes.
    pub fn flux_signed(&self, s: f64) -> Result<f64, DomainError> {
        let v = self.flux(math::abs(s))?;
        Ok(if s < 0.0 { -v } else { v })
    }

    /// `Phi^{-1}(y)` for `y >= 0`.
    pub fn flux_inverse(&self, y: f64) -> Result<f64, FluxInvError> {
        if y < 0.0 {
            return Err(FluxInvError::NoBracket { y });
        }
        match self {
            DiffusionCoeff::PLaplacian { p } => Ok(math::pow(y, 1.0 / (p - 1.0))),
            DiffusionCoeff::MeanCurvature => {
                if y >= 1.0 {
                    Err(FluxInvError::BeyondLimit { y, limit: 1.0 })
                } else {
                    Ok(y / math::sqrt(1.0 - y * y))
                }
            }
            DiffusionCoeff::LogDiffusion => Ok(math::expm1(y)),
            DiffusionCoeff::Expr(_) => {
                if y == 0.0 {
                    return Ok(0.0);
                }
                if let Ok(FluxClass::Bounded { limit }) = self.classify_flux() {
                    if y >= limit {
                        return Err(FluxInvError::BeyondLimit { y, limit });
                    }
                }
                // Bracket by doubling, then bisect on the monotone flux.
                let mut hi = 1.0;
                let mut n = 0;
                while self.flux(hi).map_err(FluxInvError::Eval)? < y {
                    hi *= 2.0;
                    n += 1;
                    if n > 1100 {
                        return Err(FluxInvError::NoBracket { y });
                    }
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    if self.flux(mid).map_err(FluxInvError::Eval)? < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// Bounded-flux limit, when known analytically.
    pub fn flux_limit(&self) -> Option<f64> {
        match self {
            DiffusionCoeff::MeanCurvature => Some(1.0),
            _ => None,
        }
    }

    /// Classifies the behaviour of `t A(t)` as `t -> +infinity`.
    ///
    /// Builtins are decided in closed form; expression-defined
    /// coefficients are probed at `t = 2^k`, `k <= 60`, declaring the
    /// flux bounded when successive estimates stabilize to relative
    /// 1e-9 (the returned limit gets one Aitken acceleration step) and
    /// unbounded when estimates grow beyond 1e12.
    pub fn classify_flux(&self) -> Result<FluxClass, FluxError> {
        match self {
            DiffusionCoeff::PLaplacian { .. } | DiffusionCoeff::LogDiffusion => {
                Ok(FluxClass::Unbounded)
            }
            DiffusionCoeff::MeanCurvature => Ok(FluxClass::Bounded { limit: 1.0 }),
            DiffusionCoeff::Expr(_) => {
                let mut prev = self.flux(1.0).map_err(FluxError::Eval)?;
                let mut prev2 = f64::NAN;
                for k in 1..=60 {
                    let t = math::exp2(k as f64);
                    let s = self.flux(t).map_err(FluxError::Eval)?;
                    if s > 1e12 {
                        return Ok(FluxClass::Unbounded);
                    }
                    if math::abs(s - prev) <= 1e-9 * math::abs(s) {
                        // One Aitken step on the last three estimates.
                        let limit = if prev2.is_finite() {
                            let d1 = prev - prev2;
                            let d2 = s - prev;
                            let dd = d2 - d1;
                            if dd != 0.0 {
                                s - d2 * d2 / dd
                            } else {
                                s
                            }
                        } else {
                            s
                        };
                        return Ok(FluxClass::Bounded { limit });
                    }
                    prev2 = prev;
                    prev = s;
                }
                Err(FluxError::Inconclusive { last_estimate: prev })
            }
        }
    }

    /// Sampled audit of the admissibility conditions `A(t) > 0` and
    /// `(t A(t))' > 0` for `t > 0`.
    pub fn admissibility_check(&self) -> HypothesisReport {
        let mut checks = Vec::new();
        let grid = log_grid(1e-6, 1e6, 20);
        let mut positive = CheckOutcome::Pass;
        let mut increasing = CheckOutcome::Pass;
        let mut prev_flux: Option<(f64, f64)> = None;
        for &t in &grid {
            match self.eval(t) {
                Ok(a) if a > 0.0 => {}
                Ok(_) => {
                    positive = CheckOutcome::Fail { witness: t };
                    break;
                }
                Err(_) => {
                    positive = CheckOutcome::Inconclusive;
                    break;
                }
            }
        }
        for &t in &grid {
            match self.flux(t) {
                Ok(phi) => {
                    if let Some((_, prev)) = prev_flux {
                        if phi <= prev {
                            increasing = CheckOutcome::Fail { witness: t };
                            break;
                        }
                    }
                    prev_flux = Some((t, phi));
                }
                Err(_) => {
                    increasing = CheckOutcome::Inconclusive;
                    break;
                }
            }
        }
        checks.push(HypothesisCheck {
            id: String::from("A(t) > 0 for t > 0"),
            outcome: positive,
        });
        checks.push(HypothesisCheck {
            id: String::from("t*A(t) strictly increasing for t > 0"),
            outcome: increasing,
        });
        HypothesisReport {
            checks,
            grid: String::from("log grid 1e-6..1e6, 20 points/decade"),
            sampled: true,
        }
    }
}

// --- hypothesis reports ----------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum CheckOutcome {
    Pass,
    Fail { witness: f64 },
    Inconclusive,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    pub id: String,
    pub outcome: CheckOutcome,
}

/// Result of a sampled hypothesis audit. `sampled` is always true: the
/// report is evidence on a grid, not a proof.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
    pub grid: String,
    pub sampled: bool,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.passed())
    }

    pub fn first_failure(&self) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| !c.outcome.passed())
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.outcome {
                CheckOutcome::Pass => writeln!(f, "  [pass] {}", c.id)?,
                CheckOutcome::Fail { witness } => {
                    writeln!(f, "  [FAIL] {} (witness t = {witness})", c.id)?
                }
                CheckOutcome::Inconclusive => writeln!(f, "  [????] {}", c.id)?,
            }
        }
        writeln!(f, "  grid: {} (sampled, not a proof)", self.grid)
    }
}

#[derive(Clone, Debug)]
pub enum FuncError {
    InvalidInterval { alpha: f64, beta: f64 },
    Eval(DomainError),
}

impl fmt::Display for FuncError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncError::InvalidInterval { alpha, beta } => {
                write!(f, "invalid interval: alpha = {alpha} > beta = {beta}")
            }
            FuncError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FuncError {}

impl From<DomainError> for FuncError {
    fn from(e: DomainError) -> Self {
        FuncError::Eval(e)
    }
}

// --- sampling grids --------------------------------------------------------

const MONOTONE_TOL: f64 = 1e-12;

pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let l0 = math::ln(lo);
    let l1 = math::ln(hi);
    let n = ((l1 - l0) / core::f64::consts::LN_10 * per_decade as f64) as usize + 1;
    for i in 0..=n {
        out.push(math::exp(l0 + (l1 - l0) * i as f64 / n as f64));
    }
    out
}

/// Ascending sample grid on `(-inf, alpha)`: offsets `2^k (1 + j/16)`,
/// `k = -40..40`, `j = 0..15`, plus a uniform grid of step 1e-3 on the
/// last ten units before `alpha`.
pub fn sample_grid_below(alpha: f64) -> Vec<f64> {
    let mut offsets = Vec::new();
    for k in -40..=40 {
        let base = math::exp2(k as f64);
        for j in 0..16 {
            offsets.push(base * (1.0 + j as f64 / 16.0));
        }
    }
    let mut i = 1;
    while (i as f64) * 1e-3 < 10.0 {
        offsets.push(i as f64 * 1e-3);
        i += 1;
    }
    offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    offsets.dedup();
    let mut grid: Vec<f64> = offsets.iter().rev().map(|d| alpha - d).collect();
    grid.dedup();
    grid
}

/// Ascending sample grid on `(beta, +inf)`, mirroring [`sample_grid_below`].
pub fn sample_grid_above(beta: f64) -> Vec<f64> {
    let below = sample_grid_below(-beta);
    below.iter().rev().map(|t| -t).collect()
}

fn check_positive_nonincreasing(
    f: &ScalarFunc,
    grid: &[f64],
    side: &str,
    want_negative: bool,
    checks: &mut Vec<HypothesisCheck>,
) -> Result<(), DomainError> {
    let mut sign_outcome = CheckOutcome::Pass;
    let mut mono_outcome = CheckOutcome::Pass;
    let mut prev: Option<f64> = None;
    for &t in grid {
        let v = f.eval(t)?;
        let sign_ok = if want_negative { v < 0.0 } else { v > 0.0 };
        if !sign_ok && sign_outcome.passed() {
            sign_outcome = CheckOutcome::Fail { witness: t };
        }
        if let Some(p) = prev {
            if v > p + MONOTONE_TOL && mono_outcome.passed() {
                mono_outcome = CheckOutcome::Fail { witness: t };
            }
        }
        prev = Some(v);
    }
    checks.push(HypothesisCheck {
        id: format!(
            "f {} on {side}",
            if want_negative { "< 0" } else { "> 0" }
        ),
        outcome: sign_outcome,
    });
    checks.push(HypothesisCheck {
        id: format!("f non-increasing on {side}"),
        outcome: mono_outcome,
    });
    Ok(())
}

/// Sampled audit of positivity and monotonicity of `f` on the negative
/// half-line: `f(t) > 0` and `f` non-increasing for `t < 0`.
pub fn check_condition_f(f: &ScalarFunc) -> Result<HypothesisReport, DomainError> {
    check_condition_f_at(f, 0.0)
}

/// Same audit relative to a threshold `alpha` (on `(-inf, alpha)`).
pub fn check_condition_f_at(f: &ScalarFunc, alpha: f64) -> Result<HypothesisReport, DomainError> {
    let grid = sample_grid_below(alpha);
    let mut checks = Vec::new();
    check_positive_nonincreasing(f, &grid, "(-inf, alpha)", false, &mut checks)?;
    Ok(HypothesisReport {
        checks,
        grid: format!(
            "dyadic offsets 2^k(1+j/16), k=-40..40, plus uniform step 1e-3 below alpha = {alpha}"
        ),
        sampled: true,
    })
}

/// Sampled audit of the two-sided condition: `f` positive non-increasing
/// on `(-inf, alpha)` and negative non-increasing on `(beta, +inf)`.
pub fn check_condition_fodd(
    f: &ScalarFunc,
    alpha: f64,
    beta: f64,
) -> Result<HypothesisReport, FuncError> {
    if alpha > beta {
        return Err(FuncError::InvalidInterval { alpha, beta });
    }
    let mut checks = Vec::new();
    check_positive_nonincreasing(f, &sample_grid_below(alpha), "(-inf, alpha)", false, &mut checks)?;
    check_positive_nonincreasing(f, &sample_grid_above(beta), "(beta, +inf)", true, &mut checks)?;
    Ok(HypothesisReport {
        checks,
        grid: format!(
            "dyadic offsets 2^k(1+j/16), k=-40..40, plus uniform step 1e-3 outside [{alpha}, {beta}]"
        ),
        sampled: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn condition_f_pass_and_fail() {
        // f(t) = -t is positive and decreasing on t < 0.
        let f = ScalarFunc::parse("-t").unwrap();
        assert!(check_condition_f(&f).unwrap().passed());

        // f(t) = |t|^2 satisfies the condition.
        let f = ScalarFunc::power(1.0, 2.0);
        assert!(check_condition_f(&f).unwrap().passed());

        // A function with sign changes on the negative axis fails. The
        // grammar has no sin, so use a polynomial with a root at -2.
        let f = ScalarFunc::parse("-(t+2)*t*t").unwrap();
        let report = check_condition_f(&f).unwrap();
        assert!(!report.passed());
        let fail = report.first_failure().unwrap();
        match fail.outcome {
            CheckOutcome::Fail { witness } => assert!(witness >= -2.0 && witness < 0.0),
            _ => panic!("expected failure with witness"),
        }
    }

    #[test]
    fn condition_fodd() {
        // f(t) = -sign(t)|t|^q passes with alpha = beta = 0.
        let f = ScalarFunc::power_sign(-1.0, 2.0);
        assert!(check_condition_fodd(&f, 0.0, 0.0).unwrap().passed());

        // Constant 1 fails on the (beta, inf) side.
        let f = ScalarFunc::constant(1.0);
        let rep = check_condition_fodd(&f, 0.0, 0.0).unwrap();
        assert!(!rep.passed());
        assert!(rep.checks.iter().any(|c| c.id.contains("(beta, +inf)") && !c.outcome.passed()));

        // f(t) = -t with alpha = -1, beta = 1 passes.
        let f = ScalarFunc::parse("-t").unwrap();
        assert!(check_condition_fodd(&f, -1.0, 1.0).unwrap().passed());

        assert!(matches!(
            check_condition_fodd(&ScalarFunc::constant(0.0), 1.0, -1.0),
            Err(FuncError::InvalidInterval { .. })
        ));
    }

    #[test]
    fn reflect_matches_condition_f() {
        // g(t) = f(-t) positive non-increasing on t<0 iff f positive
        // non-decreasing... the audited property transfers through the
        // reflection helper.
        let f = ScalarFunc::power(2.0, 3.0); // 2|t|^3, passes condition f
        let g = f.clone().reflected();
        for t in [-3.0, -1.0, -0.25, 2.0] {
            assert_eq!(f.eval(t).unwrap(), g.eval(-t).unwrap());
        }
    }

    #[test]
    fn flux_classification_builtins() {
        assert_eq!(
            DiffusionCoeff::MeanCurvature.classify_flux().unwrap(),
            FluxClass::Bounded { limit: 1.0 }
        );
        for p in [1.1, 1.5, 2.0, 3.0, 5.0] {
            assert_eq!(
                DiffusionCoeff::p_laplacian(p).classify_flux().unwrap(),
                FluxClass::Unbounded
            );
        }
        assert_eq!(
            DiffusionCoeff::LogDiffusion.classify_flux().unwrap(),
            FluxClass::Unbounded
        );
    }

    #[test]
    fn flux_classification_expr() {
        // Expression-defined mean curvature stabilizes to limit 1.
        let a = DiffusionCoeff::Expr(parse_expr("1/sqrt(1+t^2)").unwrap());
        match a.classify_flux().unwrap() {
            FluxClass::Bounded { limit } => assert!((limit - 1.0).abs() < 1e-6),
            other => panic!("unexpected {other:?}"),
        }
        // Expression-defined p-laplacian flux grows beyond the cutoff.
        let a = DiffusionCoeff::Expr(parse_expr("1").unwrap());
        assert_eq!(a.classify_flux().unwrap(), FluxClass::Unbounded);
    }

    #[test]
    fn log_diffusion_continuity_at_zero() {
        let a = DiffusionCoeff::LogDiffusion;
        assert_eq!(a.eval(0.0).unwrap(), 1.0);
        assert!((a.eval(1e-8).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn admissibility_of_builtins() {
        for a in [
            DiffusionCoeff::p_laplacian(1.5),
            DiffusionCoeff::p_laplacian(3.0),
            DiffusionCoeff::MeanCurvature,
            DiffusionCoeff::LogDiffusion,
        ] {
            assert!(a.admissibility_check().passed(), "{a}");
        }
    }

    #[test]
    fn flux_inverse_round_trip() {
        let cases = [
            DiffusionCoeff::p_laplacian(1.5),
            DiffusionCoeff::p_laplacian(3.0),
            DiffusionCoeff::MeanCurvature,
            DiffusionCoeff::LogDiffusion,
            DiffusionCoeff::Expr(parse_expr("1/sqrt(1+t^2)").unwrap()),
        ];
        for a in &cases {
            for t in [0.1, 0.7, 2.5] {
                let y = a.flux(t).unwrap();
                let back = a.flux_inverse(y).unwrap();
                assert!((back - t).abs() < 1e-9 * (1.0 + t), "{a}: {t} vs {back}");
            }
        }
        assert!(matches!(
            DiffusionCoeff::MeanCurvature.flux_inverse(1.0),
            Err(FluxInvError::BeyondLimit { .. })
        ));
    }
}
