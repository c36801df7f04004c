//! Integration of the singular radial initial-value problem
//! `(r^{D-1} Phi(phi'))' = r^{D-1} g(phi)`, `phi(0) = a`, `phi'(0) = 0`,
//! where `Phi(s) = A(s) s` is the flux of the diffusion coefficient.
//!
//! The solver works in the state `(phi, w)` with `w = r^{D-1} Phi(phi')`
//! (the conserved flux form), which avoids differentiating `A` and is
//! well-behaved at `phi' = 0` for degenerate coefficients. A series
//! expansion starts the trajectory off the `r = 0` singularity, and an
//! embedded Dormand-Prince 5(4) pair integrates outward until one of:
//! value blow-up (unbounded flux), gradient blow-up (bounded flux), the
//! radius budget, or step underflow.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::DomainError;
use crate::func::{sample_grid_above, DiffusionCoeff, FluxClass, FluxInvError, ScalarFunc};
use crate::math;
use crate::quad::gauss16;

#[derive(Clone, Debug)]
pub struct RadialProblem {
    pub coeff: DiffusionCoeff,
    /// Dimension parameter `D > 1`; real so that Euclidean `N` and
    /// Carnot homogeneous `Q` share one code path.
    pub dimension: f64,
    pub g: ScalarFunc,
    /// Initial value `a > 0`.
    pub initial: f64,
}

#[derive(Clone, Debug)]
pub enum RadialError {
    InvalidProblem { reason: String },
    Eval(DomainError),
}

impl fmt::Display for RadialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialError::InvalidProblem { reason } => write!(f, "invalid problem: {reason}"),
            RadialError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RadialError {}

impl From<DomainError> for RadialError {
    fn from(e: DomainError) -> Self {
        RadialError::Eval(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlowupStatus {
    /// `phi -> +infinity` at a finite radius.
    FiniteBlowup { radius: f64, radius_error: f64 },
    GlobalExistence { r_end: f64, phi_end: f64 },
    /// Bounded-flux coefficient: `phi'` leaves the domain of the flux
    /// inverse at a finite radius.
    GradientBlowup { r_star: f64, phi_end: f64 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct BlowupResult {
    pub status: BlowupStatus,
    /// Accepted steps as `(r, phi, phi')`.
    pub trajectory: Vec<(f64, f64, f64)>,
    pub steps_taken: usize,
}

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    pub r0: f64,
    pub r_max: f64,
    /// Value at which `phi` counts as blown up.
    pub cap: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            r0: 1e-6,
            r_max: 1e3,
            cap: 1e10,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
        }
    }
}

impl RadialProblem {
    pub fn validate(&self) -> Result<(), RadialError> {
        if !(self.dimension > 1.0) {
            return Err(RadialError::InvalidProblem {
                reason: format!("dimension must exceed 1 (got {})", self.dimension),
            });
        }
        if !(self.initial > 0.0) {
            return Err(RadialError::InvalidProblem {
                reason: format!("initial value must be positive (got {})", self.initial),
            });
        }
        let ga = self.g.eval(self.initial)?;
        if !(ga > 0.0) {
            return Err(RadialError::InvalidProblem {
                reason: format!("g(a) must be positive (got g({}) = {ga})", self.initial),
            });
        }
        // Sampled monotonicity of the source on (0, +inf).
        let mut prev: Option<f64> = None;
        for t in sample_grid_above(0.0) {
            let v = self.g.eval(t)?;
            if let Some(p) = prev {
                if v < p - 1e-12 {
                    return Err(RadialError::InvalidProblem {
                        reason: format!("g not non-decreasing on (0, inf): g({t}) = {v} < {p}"),
                    });
                }
            }
            prev = Some(v);
        }
        Ok(())
    }
}

/// Start-off-singularity expansion: from the leading-order balance
/// `r^{D-1} Phi(phi') ~ g(a) r^D / D` one gets
/// `phi'(r0) = Phi^{-1}(g(a) r0 / D)` and `phi(r0)` by quadrature of the
/// same expression.
pub fn series_start(prob: &RadialProblem, r0: f64) -> Result<(f64, f64), RadialError> {
    prob.validate()?;
    let ga = prob.g.eval(prob.initial)?;
    let d = prob.dimension;
    let slope = prob
        .coeff
        .flux_inverse(ga * r0 / d)
        .map_err(|e| RadialError::InvalidProblem {
            reason: format!("series start leaves the flux domain: {e}"),
        })?;
    let bump = gauss16(
        |s| {
            prob.coeff
                .flux_inverse(ga * s / d)
                .map_err(|e| RadialError::InvalidProblem {
                    reason: format!("series start leaves the flux domain: {e}"),
                })
        },
        0.0,
        r0,
    )?;
    Ok((prob.initial + bump, slope))
}

struct Deriv<'a> {
    prob: &'a RadialProblem,
    dm1: f64,
}

enum DerivResult {
    Ok { dphi: f64, dw: f64 },
    /// The flux inverse left its domain (bounded-flux saturation).
    FluxDomain,
}

impl Deriv<'_> {
    fn eval(&self, r: f64, phi: f64, w: f64) -> Result<DerivResult, RadialError> {
        let weight = math::pow(r, self.dm1);
        let y = w / weight;
        let dphi = match self.prob.coeff.flux_inverse(y) {
            Ok(v) => v,
            Err(FluxInvError::BeyondLimit { .. }) | Err(FluxInvError::NoBracket { .. }) => {
                return Ok(DerivResult::FluxDomain)
            }
            Err(FluxInvError::Eval(e)) => return Err(RadialError::Eval(e)),
        };
        let dw = weight * self.prob.g.eval(phi)?;
        Ok(DerivResult::Ok { dphi, dw })
    }
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Cubic Hermite interpolation of `phi` within a step, used to refine
/// threshold-crossing radii.
fn hermite(phi0: f64, d0: f64, phi1: f64, d1: f64, h: f64, theta: f64) -> f64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    (2.0 * t3 - 3.0 * t2 + 1.0) * phi0
        + (t3 - 2.0 * t2 + theta) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * phi1
        + (t3 - t2) * h * d1
}

fn crossing_radius(r: f64, h: f64, phi0: f64, d0: f64, phi1: f64, d1: f64, level: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if hermite(phi0, d0, phi1, d1, h, mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    r + 0.5 * (lo + hi) * h
}

/// One Aitken acceleration pass over a sequence.
fn aitken(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in xs.windows(3) {
        let d1 = w[1] - w[0];
        let d2 = w[2] - w[1];
        let dd = d2 - d1;
        out.push(if dd != 0.0 { w[2] - d2 * d2 / dd } else { w[2] });
    }
    out
}

pub fn integrate_blowup(
    prob: &RadialProblem,
    opts: &IntegrateOptions,
) -> Result<BlowupResult, RadialError> {
    prob.validate()?;
    let flux_limit = match prob.coeff.classify_flux() {
        Ok(FluxClass::Bounded { limit }) => Some(limit),
        _ => None,
    };
    let deriv = Deriv {
        prob,
        dm1: prob.dimension - 1.0,
    };

    let (phi0, dphi0) = series_start(prob, opts.r0)?;
    let ga = prob.g.eval(prob.initial)?;
    let mut r = opts.r0;
    let mut phi = phi0;
    let mut w = ga * math::pow(opts.r0, prob.dimension) / prob.dimension;
    let mut dphi = dphi0;

    let mut trajectory = Vec::new();
    trajectory.push((r, phi, dphi));
    let mut steps_taken = 0usize;

    // Decade-crossing radii for the blow-up extrapolation.
    let mut next_level_exp = 4i32;
    let mut crossings: Vec<f64> = Vec::new();

    let mut h = opts.r0;

    let finish_blowup = |crossings: &[f64], r: f64, phi: f64, trajectory: Vec<(f64, f64, f64)>, steps_taken: usize| {
        // Gap ratios of successive decade crossings discriminate a
        // genuine finite-radius pole (geometric contraction toward R)
        // from fast-but-global growth hitting the cap (evenly spaced
        // crossings).
        let gaps: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
        let ratios: Vec<f64> = gaps
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect();
        let n = ratios.len();
        let contracting = if n >= 2 {
            let tail = &ratios[n.saturating_sub(3)..];
            tail.iter().sum::<f64>() / tail.len() as f64 <= 0.97
        } else {
            true
        };
        if !contracting {
            return BlowupResult {
                status: BlowupStatus::GlobalExistence {
                    r_end: r,
                    phi_end: phi,
                },
                trajectory,
                steps_taken,
            };
        }
        let ext1 = aitken(crossings);
        let ext2 = aitken(&ext1);
        let best = ext2.last().or(ext1.last()).copied().unwrap_or(r);
        let pool: Vec<f64> = if ext2.len() >= 3 {
            ext2[ext2.len() - 3..].to_vec()
        } else if ext1.len() >= 3 {
            ext1[ext1.len() - 3..].to_vec()
        } else {
            alloc::vec![best, r]
        };
        let lo = pool.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = pool.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        BlowupResult {
            status: BlowupStatus::FiniteBlowup {
                radius: best,
                radius_error: (hi - lo).abs().max(1e-15),
            },
            trajectory,
            steps_taken,
        }
    };

    loop {
        if r >= opts.r_max {
            return Ok(BlowupResult {
                status: BlowupStatus::GlobalExistence {
                    r_end: r,
                    phi_end: phi,
                },
                trajectory,
                steps_taken,
            });
        }
        if h > opts.r_max - r {
            h = opts.r_max - r;
        }

        // Stage evaluations; a flux-domain exit rejects the step.
        let mut kp = [0.0f64; 7];
        let mut kw = [0.0f64; 7];
        let mut domain_exit = false;
        for i in 0..7 {
            let mut pi = phi;
            let mut wi = w;
            for j in 0..i {
                pi += h * DP_A[i][j] * kp[j];
                wi += h * DP_A[i][j] * kw[j];
            }
            match deriv.eval(r + DP_C[i] * h, pi, wi)? {
                DerivResult::Ok { dphi, dw } => {
                    kp[i] = dphi;
                    kw[i] = dw;
                }
                DerivResult::FluxDomain => {
                    domain_exit = true;
                    break;
                }
            }
        }

        let mut accept = false;
        let mut phi_new = phi;
        let mut w_new = w;
        let mut err = f64::INFINITY;
        if !domain_exit {
            phi_new = phi;
            w_new = w;
            let mut phi4 = phi;
            let mut w4 = w;
            for i in 0..7 {
                // 5th-order weights are the last row of the a-matrix
                // plus the k7 = 0 contribution (FSAL structure).
                let b5 = if i < 6 { DP_A[6][i] } else { 0.0 };
                phi_new += h * b5 * kp[i];
                w_new += h * b5 * kw[i];
                phi4 += h * DP_B4[i] * kp[i];
                w4 += h * DP_B4[i] * kw[i];
            }
            let ep = (phi_new - phi4)
                / (opts.abs_tol + opts.rel_tol * math::abs(phi_new).max(math::abs(phi)));
            let ew =
                (w_new - w4) / (opts.abs_tol + opts.rel_tol * math::abs(w_new).max(math::abs(w)));
            err = math::sqrt(0.5 * (ep * ep + ew * ew));
            accept = err <= 1.0 && phi_new.is_finite() && w_new.is_finite() && phi_new >= phi;
        }

        if accept {
            steps_taken += 1;
            let weight = math::pow(r + h, deriv.dm1);
            let y = w_new / weight;
            let dphi_new = match prob.coeff.flux_inverse(y) {
                Ok(v) => v,
                Err(_) => {
                    // Saturated exactly at the step end.
                    return Ok(BlowupResult {
                        status: BlowupStatus::GradientBlowup {
                            r_star: r + h,
                            phi_end: phi_new,
                        },
                        trajectory,
                        steps_taken,
                    });
                }
            };
            // Flux round-trip consistency of the state transformation.
            let back = prob.coeff.flux(dphi_new)? * weight;
            if math::abs(back - w_new) > 1e-9 * (1.0 + math::abs(w_new)) {
                return Ok(BlowupResult {
                    status: BlowupStatus::Inconclusive {
                        reason: format!(
                            "flux round-trip failed at r = {}: {} vs {}",
                            r + h,
                            back,
                            w_new
                        ),
                    },
                    trajectory,
                    steps_taken,
                });
            }

            // Record decade crossings refined by Hermite interpolation.
            while (next_level_exp as f64) <= 10.0
                && phi_new >= math::pow(10.0, next_level_exp as f64)
            {
                let level = math::pow(10.0, next_level_exp as f64);
                crossings.push(crossing_radius(r, h, phi, dphi, phi_new, dphi_new, level));
                next_level_exp += 1;
            }

            r += h;
            phi = phi_new;
            w = w_new;
            dphi = dphi_new;
            trajectory.push((r, phi, dphi));

            if phi >= opts.cap {
                return Ok(finish_blowup(&crossings, r, phi, trajectory, steps_taken));
            }
            if let Some(limit) = flux_limit {
                if y >= limit * (1.0 - 1e-9) {
                    return Ok(BlowupResult {
                        status: BlowupStatus::GradientBlowup {
                            r_star: r,
                            phi_end: phi,
                        },
                        trajectory,
                        steps_taken,
                    });
                }
            }
            let factor = if err > 0.0 {
                (0.9 * math::pow(err, -0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h *= factor;
        } else {
            h *= 0.5;
        }

        if h < 1e-14 * r {
            if let Some(limit) = flux_limit {
                let y = w / math::pow(r, deriv.dm1);
                if y >= limit * (1.0 - 1e-6) {
                    return Ok(BlowupResult {
                        status: BlowupStatus::GradientBlowup {
                            r_star: r,
                            phi_end: phi,
                        },
                        trajectory,
                        steps_taken,
                    });
                }
            }
            if !crossings.is_empty() && phi > 1e4 {
                // Value blow-up so steep the cap is unreachable in f64.
                return Ok(finish_blowup(&crossings, r, phi, trajectory, steps_taken));
            }
            return Ok(BlowupResult {
                status: BlowupStatus::Inconclusive {
                    reason: format!("step size underflow at r = {r} (phi = {phi})"),
                },
                trajectory,
                steps_taken,
            });
        }
    }
}

/// Runs `integrate_blowup` for a family of initial values; per-entry
/// failures are recorded without aborting the sweep.
pub fn blowup_radius_curve(
    template: &RadialProblem,
    a_values: &[f64],
) -> Vec<(f64, Result<BlowupResult, RadialError>)> {
    a_values
        .iter()
        .map(|&a| {
            let prob = RadialProblem {
                initial: a,
                ..template.clone()
            };
            (a, integrate_blowup(&prob, &IntegrateOptions::default()))
        })
        .collect()
}
