//! The monotone-operator pairing kernel and a discrete comparison
//! verifier for radial finite-volume sub- and supersolutions.
//!
//! The pairing `(A(|xi|)xi - A(|eta|)eta) . (xi - eta)` is nonnegative
//! for admissible coefficients; its decomposition into a norm part and
//! an angle part makes the sign structure checkable term by term. The
//! discrete verifier replays the comparison argument on a grid: ordered
//! boundary values, sub/supersolution residual signs, and a monotone
//! source together force `u <= v + epsilon` at every node.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::DomainError;
use crate::func::{CheckOutcome, DiffusionCoeff, HypothesisCheck, ScalarFunc};
use crate::math;
use crate::rng::SplitMix64;

#[derive(Clone, Debug)]
pub enum ComparisonError {
    DimensionMismatch { left: usize, right: usize },
    GridMismatch { detail: String },
    GridTooCoarse { nodes: usize },
    Eval(DomainError),
}

impl fmt::Display for ComparisonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonError::DimensionMismatch { left, right } => {
                write!(f, "vector lengths differ: {left} vs {right}")
            }
            ComparisonError::GridMismatch { detail } => write!(f, "grid mismatch: {detail}"),
            ComparisonError::GridTooCoarse { nodes } => {
                write!(f, "grid too coarse: {nodes} nodes (need at least 3)")
            }
            ComparisonError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ComparisonError {}

impl From<DomainError> for ComparisonError {
    fn from(e: DomainError) -> Self {
        ComparisonError::Eval(e)
    }
}

fn norm(v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &c in v {
        acc += c * c;
    }
    math::sqrt(acc)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// `(A(|xi|)xi - A(|eta|)eta) . (xi - eta)`, with the convention
/// `A(0)*0 = lim Phi = 0` so degenerate coefficients (`A(0)` infinite)
/// are handled through the flux.
pub fn monotone_pairing(
    a: &DiffusionCoeff,
    xi: &[f64],
    eta: &[f64],
) -> Result<f64, ComparisonError> {
    if xi.len() != eta.len() {
        return Err(ComparisonError::DimensionMismatch {
            left: xi.len(),
            right: eta.len(),
        });
    }
    let nx = norm(xi);
    let ne = norm(eta);
    // A(|xi|) xi = Phi(|xi|) xi / |xi|
    let cx = if nx > 0.0 { a.flux(nx)? / nx } else { 0.0 };
    let ce = if ne > 0.0 { a.flux(ne)? / ne } else { 0.0 };
    let mut acc = 0.0;
    for i in 0..xi.len() {
        acc += (cx * xi[i] - ce * eta[i]) * (xi[i] - eta[i]);
    }
    Ok(acc)
}

/// Splits the pairing into `I1 = (Phi(|xi|) - Phi(|eta|))(|xi| - |eta|)`
/// and `I2 = (A(|xi|) + A(|eta|))(|xi||eta| - xi.eta)`; both are
/// individually nonnegative for admissible `A` and they sum to the
/// pairing.
pub fn decompose_pairing(
    a: &DiffusionCoeff,
    xi: &[f64],
    eta: &[f64],
) -> Result<(f64, f64), ComparisonError> {
    if xi.len() != eta.len() {
        return Err(ComparisonError::DimensionMismatch {
            left: xi.len(),
            right: eta.len(),
        });
    }
    let nx = norm(xi);
    let ne = norm(eta);
    let i1 = (a.flux(nx)? - a.flux(ne)?) * (nx - ne);
    let mut gap = nx * ne - dot(xi, eta);
    // Cauchy-Schwarz makes the gap nonnegative; values at rounding noise
    // are exact zeros (parallel vectors).
    if math::abs(gap) <= 4.0 * f64::EPSILON * nx * ne {
        gap = 0.0;
    }
    // The angle term vanishes identically for parallel (or zero)
    // vectors; skipping the evaluation avoids inf * 0 when A(0) is
    // infinite for degenerate coefficients.
    let i2 = if gap == 0.0 {
        0.0
    } else {
        (a.eval(nx)? + a.eval(ne)?) * gap
    };
    Ok((i1, i2))
}

/// Radial (or flat, `D = 1`) field sampled on a strictly increasing
/// grid.
#[derive(Clone, Debug)]
pub struct DiscreteField {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub dimension: f64,
}

impl DiscreteField {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, dimension: f64) -> Result<Self, ComparisonError> {
        if grid.len() != values.len() {
            return Err(ComparisonError::GridMismatch {
                detail: format!("{} grid nodes vs {} values", grid.len(), values.len()),
            });
        }
        if grid.len() < 3 {
            return Err(ComparisonError::GridTooCoarse { nodes: grid.len() });
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ComparisonError::GridMismatch {
                    detail: format!("grid not strictly increasing at {}", w[0]),
                });
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ComparisonError::GridMismatch {
                detail: String::from("non-finite field value"),
            });
        }
        Ok(Self {
            grid,
            values,
            dimension,
        })
    }
}

/// Conservative finite-volume residual of `div(A(|u'|) u')` in radial
/// coordinates at the interior nodes: midpoint fluxes
/// `r^{D-1} Phi(slope)` differenced against the cell-integrated weight.
pub fn discrete_radial_operator(
    a: &DiffusionCoeff,
    field: &DiscreteField,
) -> Result<Vec<f64>, ComparisonError> {
    let r = &field.grid;
    let u = &field.values;
    let d = field.dimension;
    let m = r.len();
    let half_flux = |i: usize| -> Result<f64, ComparisonError> {
        let rm = 0.5 * (r[i] + r[i + 1]);
        let slope = (u[i + 1] - u[i]) / (r[i + 1] - r[i]);
        Ok(math::pow(rm, d - 1.0) * a.flux_signed(slope)?)
    };
    let mut out = Vec::with_capacity(m - 2);
    let mut w_left = half_flux(0)?;
    for i in 1..m - 1 {
        let w_right = half_flux(i)?;
        let rl = 0.5 * (r[i - 1] + r[i]);
        let rr = 0.5 * (r[i] + r[i + 1]);
        let vol = (math::pow(rr, d) - math::pow(rl, d)) / d;
        out.push((w_right - w_left) / vol);
        w_left = w_right;
    }
    Ok(out)
}

/// Which monotonicity case of the source hypothesis the certificate
/// used: the unrestricted ordered-pairs case, or the variant restricted
/// to nonnegative arguments (which additionally requires `v >= 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceCase {
    Unrestricted,
    NonnegativeOnly,
}

#[derive(Clone, Debug)]
pub struct ComparisonCertificate {
    pub case: SourceCase,
    pub hypothesis_checks: Vec<HypothesisCheck>,
    pub conclusion_holds: bool,
    /// Worst violating node of the conclusion, as (index, excess beyond
    /// `v + epsilon`).
    pub first_violation: Option<(usize, f64)>,
    pub epsilon: f64,
    pub residual_tol: f64,
    /// Hypothesis checks are grid/random samples, not proofs.
    pub sampled: bool,
}

impl ComparisonCertificate {
    pub fn hypotheses_passed(&self) -> bool {
        self.hypothesis_checks.iter().all(|c| c.outcome.passed())
    }

    /// Pass means: all hypotheses held on the samples and the
    /// conclusion held. With a failed hypothesis the conclusion flag is
    /// informational only.
    pub fn passed(&self) -> bool {
        self.hypotheses_passed() && self.conclusion_holds
    }
}

#[derive(Clone, Debug)]
pub struct CompareOptions {
    /// Slack added to `v` in the conclusion; defaults to
    /// `1e-8 (1 + max|v|)`.
    pub epsilon: Option<f64>,
    /// Tolerance for the residual sign checks; defaults to
    /// `1e-8 (1 + sup |g| over the field range)`.
    pub residual_tol: Option<f64>,
    pub seed: u64,
    pub random_pairs: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            epsilon: None,
            residual_tol: None,
            seed: 0,
            random_pairs: 1000,
        }
    }
}

/// Verifies the discrete comparison argument: `u` a subsolution of
/// `g1`, `v` a supersolution of `g2`, ordered boundary data, monotone
/// source pairing — and then the conclusion `u <= v + epsilon`
/// everywhere.
pub fn discrete_comparison_check(
    a: &DiffusionCoeff,
    u: &DiscreteField,
    v: &DiscreteField,
    g1: &ScalarFunc,
    g2: &ScalarFunc,
    opts: &CompareOptions,
) -> Result<ComparisonCertificate, ComparisonError> {
    if u.grid.len() != v.grid.len()
        || u.grid
            .iter()
            .zip(&v.grid)
            .any(|(x, y)| x != y)
        || u.dimension != v.dimension
    {
        return Err(ComparisonError::GridMismatch {
            detail: String::from("u and v must share grid and dimension"),
        });
    }

    let mut checks = Vec::new();

    // Sample pool for the source-ordering hypothesis: all node values
    // plus uniform draws over their range.
    let mut pool: Vec<f64> = u.values.iter().chain(v.values.iter()).cloned().collect();
    let lo = pool.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pool.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut rng = SplitMix64::new(opts.seed);
    for _ in 0..opts.random_pairs {
        pool.push(rng.uniform(lo, hi));
    }

    let ordered_pairs_ok = |restrict_nonneg: bool| -> Result<Option<(f64, f64)>, DomainError> {
        let mut rng = SplitMix64::new(opts.seed ^ 0x5eed);
        for _ in 0..opts.random_pairs {
            let mut t = pool[rng.uniform_usize(pool.len())];
            let mut s = pool[rng.uniform_usize(pool.len())];
            if s > t {
                core::mem::swap(&mut t, &mut s);
            }
            if restrict_nonneg && s < 0.0 {
                continue;
            }
            if g1.eval(t)? < g2.eval(s)? - 1e-12 {
                return Ok(Some((t, s)));
            }
        }
        Ok(None)
    };

    // Case detection: try the unrestricted ordering first; fall back to
    // the nonnegative-arguments variant, which is only available when v
    // is nonnegative.
    let v_nonneg = v.values.iter().all(|&x| x >= 0.0);
    let (case, h1_outcome) = match ordered_pairs_ok(false).map_err(ComparisonError::Eval)? {
        None => (SourceCase::Unrestricted, CheckOutcome::Pass),
        Some(witness_full) => {
            if v_nonneg {
                match ordered_pairs_ok(true).map_err(ComparisonError::Eval)? {
                    None => (SourceCase::NonnegativeOnly, CheckOutcome::Pass),
                    Some((t, _)) => (
                        SourceCase::NonnegativeOnly,
                        CheckOutcome::Fail { witness: t },
                    ),
                }
            } else {
                (
                    SourceCase::Unrestricted,
                    CheckOutcome::Fail {
                        witness: witness_full.0,
                    },
                )
            }
        }
    };
    checks.push(HypothesisCheck {
        id: String::from(match case {
            SourceCase::Unrestricted => "g1(t) >= g2(s) for sampled t >= s",
            SourceCase::NonnegativeOnly => "g1(t) >= g2(s) for sampled t >= s >= 0, and v >= 0",
        }),
        outcome: h1_outcome,
    });
    if case == SourceCase::NonnegativeOnly {
        checks.push(HypothesisCheck {
            id: String::from("v >= 0 at every node"),
            outcome: if v_nonneg {
                CheckOutcome::Pass
            } else {
                CheckOutcome::Inconclusive
            },
        });
    }

    // H2: admissibility of the coefficient.
    let adm = a.admissibility_check();
    checks.push(HypothesisCheck {
        id: String::from("t*A(t) increasing and positive (sampled)"),
        outcome: if adm.passed() {
            CheckOutcome::Pass
        } else {
            adm.first_failure()
                .map(|c| c.outcome.clone())
                .unwrap_or(CheckOutcome::Inconclusive)
        },
    });

    // H3: boundary ordering.
    let m = u.grid.len();
    let boundary_ok = u.values[0] <= v.values[0] && u.values[m - 1] <= v.values[m - 1];
    checks.push(HypothesisCheck {
        id: String::from("u <= v at both boundary nodes"),
        outcome: if boundary_ok {
            CheckOutcome::Pass
        } else if u.values[0] > v.values[0] {
            CheckOutcome::Fail {
                witness: u.grid[0],
            }
        } else {
            CheckOutcome::Fail {
                witness: u.grid[m - 1],
            }
        },
    });

    // (S): residual signs at interior nodes.
    let g_sup = {
        let mut s = 0.0f64;
        for &t in &pool {
            s = s
                .max(math::abs(g1.eval(t).map_err(ComparisonError::Eval)?))
                .max(math::abs(g2.eval(t).map_err(ComparisonError::Eval)?));
        }
        s
    };
    let tol = opts.residual_tol.unwrap_or(1e-8 * (1.0 + g_sup));
    let lu = discrete_radial_operator(a, u)?;
    let lv = discrete_radial_operator(a, v)?;
    let mut sub_outcome = CheckOutcome::Pass;
    let mut sup_outcome = CheckOutcome::Pass;
    for i in 1..m - 1 {
        let gu = g1.eval(u.values[i]).map_err(ComparisonError::Eval)?;
        if lu[i - 1] < gu - tol && sub_outcome.passed() {
            sub_outcome = CheckOutcome::Fail {
                witness: u.grid[i],
            };
        }
        let gv = g2.eval(v.values[i]).map_err(ComparisonError::Eval)?;
        if lv[i - 1] > gv + tol && sup_outcome.passed() {
            sup_outcome = CheckOutcome::Fail {
                witness: v.grid[i],
            };
        }
    }
    checks.push(HypothesisCheck {
        id: String::from("L(u) >= g1(u) - tol at interior nodes (subsolution)"),
        outcome: sub_outcome,
    });
    checks.push(HypothesisCheck {
        id: String::from("L(v) <= g2(v) + tol at interior nodes (supersolution)"),
        outcome: sup_outcome,
    });

    // Conclusion: u <= v + epsilon at every node.
    let vmax = v.values.iter().fold(0.0f64, |acc, &x| acc.max(math::abs(x)));
    let epsilon = opts.epsilon.unwrap_or(1e-8 * (1.0 + vmax));
    let mut first_violation = None;
    for i in 0..m {
        let excess = u.values[i] - v.values[i] - epsilon;
        if excess > 0.0 {
            match first_violation {
                Some((_, worst)) if worst >= excess => {}
                _ => first_violation = Some((i, excess)),
            }
        }
    }

    Ok(ComparisonCertificate {
        case,
        hypothesis_checks: checks,
        conclusion_holds: first_violation.is_none(),
        first_violation,
        epsilon,
        residual_tol: tol,
        sampled: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use alloc::vec;

    fn ones() -> DiffusionCoeff {
        DiffusionCoeff::Expr(parse_expr("1").unwrap())
    }

    #[test]
    fn pairing_examples() {
        let a = ones();
        // identical arguments
        assert_eq!(monotone_pairing(&a, &[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        // A = 1: squared distance
        let v = monotone_pairing(&a, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        // A(t) = t (p = 3): (4 - 1) * 1 = 3
        let a3 = DiffusionCoeff::p_laplacian(3.0);
        let v = monotone_pairing(&a3, &[2.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
    }

    #[test]
    fn decomposition() {
        let a = DiffusionCoeff::MeanCurvature;
        // parallel vectors: angle part vanishes
        let (_, i2) = decompose_pairing(&a, &[2.0, 4.0], &[1.0, 2.0]).unwrap();
        assert_eq!(i2, 0.0);
        // equal norms, different directions: norm part vanishes
        let (i1, i2) = decompose_pairing(&a, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!(i1.abs() < 1e-15);
        assert!(i2 > 0.0);
        // sum property on a generic pair
        for coeff in [
            DiffusionCoeff::p_laplacian(1.5),
            DiffusionCoeff::p_laplacian(3.0),
            DiffusionCoeff::MeanCurvature,
            DiffusionCoeff::LogDiffusion,
        ] {
            let xi = [1.3, -0.4, 2.0];
            let eta = [-0.2, 0.9, 1.1];
            let p = monotone_pairing(&coeff, &xi, &eta).unwrap();
            let (i1, i2) = decompose_pairing(&coeff, &xi, &eta).unwrap();
            assert!((p - (i1 + i2)).abs() <= 1e-12 * (1.0 + p.abs()), "{coeff}");
            assert!(i1 >= -1e-12 && i2 >= -1e-12, "{coeff}");
        }
    }

    #[test]
    fn degenerate_zero_gradient() {
        // p < 2 has A(0) = inf; the flux convention keeps everything
        // finite.
        let a = DiffusionCoeff::p_laplacian(1.5);
        let v = monotone_pairing(&a, &[0.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let (i1, i2) = decompose_pairing(&a, &[0.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!(i1.is_finite() && i2 == 0.0);
    }

    #[test]
    fn radial_operator_oracles() {
        // D = 1, u = x^2: exact second difference = 2.
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
        let vals: Vec<f64> = grid.iter().map(|x| x * x).collect();
        let field = DiscreteField::new(grid, vals, 1.0).unwrap();
        for r in discrete_radial_operator(&ones(), &field).unwrap() {
            assert!((r - 2.0).abs() < 1e-12, "{r}");
        }

        // D = 3, u = 1 + r^2/6: residual 1.
        let grid: Vec<f64> = (1..=40).map(|i| 0.1 + i as f64 * 0.02).collect();
        let vals: Vec<f64> = grid.iter().map(|r| 1.0 + r * r / 6.0).collect();
        let field = DiscreteField::new(grid, vals, 3.0).unwrap();
        for r in discrete_radial_operator(&ones(), &field).unwrap() {
            assert!((r - 1.0).abs() < 1e-10, "{r}");
        }

        // constant field: all zero
        let grid: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let vals = vec![3.0; 10];
        let field = DiscreteField::new(grid, vals, 2.5).unwrap();
        for r in discrete_radial_operator(&DiffusionCoeff::MeanCurvature, &field).unwrap() {
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn comparison_convex_below_chord() {
        // u = x^2 - x <= 0 = v on [0, 1] with zero sources.
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let uvals: Vec<f64> = grid.iter().map(|x| x * x - x).collect();
        let vvals = vec![0.0; grid.len()];
        let u = DiscreteField::new(grid.clone(), uvals, 1.0).unwrap();
        let v = DiscreteField::new(grid, vvals, 1.0).unwrap();
        let zero = ScalarFunc::constant(0.0);
        let cert =
            discrete_comparison_check(&ones(), &u, &v, &zero, &zero, &CompareOptions::default())
                .unwrap();
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn comparison_reflexive() {
        let grid: Vec<f64> = (1..=30).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = grid.iter().map(|r| 1.0 + r).collect();
        let u = DiscreteField::new(grid.clone(), vals.clone(), 3.0).unwrap();
        let v = DiscreteField::new(grid, vals, 3.0).unwrap();
        // Source chosen weaker than the actual residual so the sign
        // checks hold on both sides.
        let g = ScalarFunc::constant(-100.0);
        let g2 = ScalarFunc::constant(-200.0);
        let cert = discrete_comparison_check(
            &DiffusionCoeff::p_laplacian(2.0),
            &u,
            &v,
            &g2,
            &g,
            &CompareOptions {
                residual_tol: Some(300.0),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(cert.conclusion_holds, "{cert:?}");
    }

    #[test]
    fn boundary_violation_detected() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let uvals = vec![1.0; grid.len()];
        let vvals = vec![0.0; grid.len()];
        let u = DiscreteField::new(grid.clone(), uvals, 1.0).unwrap();
        let v = DiscreteField::new(grid, vvals, 1.0).unwrap();
        let zero = ScalarFunc::constant(0.0);
        let cert =
            discrete_comparison_check(&ones(), &u, &v, &zero, &zero, &CompareOptions::default())
                .unwrap();
        assert!(!cert.passed());
        assert!(!cert.conclusion_holds);
        assert!(cert.first_violation.is_some());
    }
}
