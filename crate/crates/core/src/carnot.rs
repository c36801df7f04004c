//! Heisenberg-group calculus: group law, anisotropic dilations, the
//! quartic gauge norm, horizontal vector fields, and a numerical
//! verification that the horizontal p-Laplacian of a gauge-radial
//! function collapses to the one-dimensional radial expression (with
//! the angular factor `psi = |grad_H N|`).
//!
//! Points of the group live in `R^{2n+1}` as `(x, y, t)`; the
//! homogeneous dimension is `Q = 2n + 2`.

use alloc::vec::Vec;
use core::fmt;

use crate::expr::DomainError;
use crate::func::ScalarFunc;
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
}

impl HPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>, t: f64) -> Self {
        assert_eq!(x.len(), y.len());
        Self { x, y, t }
    }

    pub fn origin(n: usize) -> Self {
        Self {
            x: alloc::vec![0.0; n],
            y: alloc::vec![0.0; n],
            t: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn inverse(&self) -> Self {
        Self {
            x: self.x.iter().map(|v| -v).collect(),
            y: self.y.iter().map(|v| -v).collect(),
            t: -self.t,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HGroup {
    pub n: usize,
}

impl HGroup {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self { n }
    }

    /// Homogeneous dimension `Q = 2n + 2`.
    pub fn homogeneous_dim(&self) -> f64 {
        (2 * self.n + 2) as f64
    }
}

#[derive(Clone, Debug)]
pub enum CarnotError {
    DimensionMismatch { left: usize, right: usize },
    NonpositiveScale { scale: f64 },
    OriginSingularity,
    /// The operator degenerates on the center axis for p < 2.
    AxisDegeneracy { psi: f64 },
    /// Finite differencing produced non-finite values.
    StencilFailure,
    Eval(DomainError),
}

impl fmt::Display for CarnotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CarnotError::DimensionMismatch { left, right } => {
                write!(f, "points from different groups: n = {left} vs {right}")
            }
            CarnotError::NonpositiveScale { scale } => {
                write!(f, "dilation scale must be positive (got {scale})")
            }
            CarnotError::OriginSingularity => write!(f, "undefined at the group identity"),
            CarnotError::AxisDegeneracy { psi } => write!(
                f,
                "degenerate on the center axis (psi = {psi}) for p < 2"
            ),
            CarnotError::StencilFailure => write!(f, "finite-difference stencil failed"),
            CarnotError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CarnotError {}

impl From<DomainError> for CarnotError {
    fn from(e: DomainError) -> Self {
        CarnotError::Eval(e)
    }
}

/// Group law: `(a o b) = (x_a + x_b, y_a + y_b,
/// t_a + t_b + 2 sum(x_a_i y_b_i - x_b_i y_a_i))`.
pub fn h_mul(a: &HPoint, b: &HPoint) -> Result<HPoint, CarnotError> {
    if a.n() != b.n() {
        return Err(CarnotError::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let mut twist = 0.0;
    for i in 0..a.n() {
        twist += a.x[i] * b.y[i] - b.x[i] * a.y[i];
    }
    Ok(HPoint {
        x: a.x.iter().zip(&b.x).map(|(p, q)| p + q).collect(),
        y: a.y.iter().zip(&b.y).map(|(p, q)| p + q).collect(),
        t: a.t + b.t + 2.0 * twist,
    })
}

/// Anisotropic dilation `(Rx, Ry, R^2 t)`.
pub fn h_dilate(a: &HPoint, scale: f64) -> Result<HPoint, CarnotError> {
    if !(scale > 0.0) {
        return Err(CarnotError::NonpositiveScale { scale });
    }
    Ok(HPoint {
        x: a.x.iter().map(|v| v * scale).collect(),
        y: a.y.iter().map(|v| v * scale).collect(),
        t: a.t * scale * scale,
    })
}

/// Quartic gauge norm `((sum x_i^2 + y_i^2)^2 + t^2)^{1/4}`, homogeneous
/// of degree 1 under [`h_dilate`].
pub fn h_norm(a: &HPoint) -> f64 {
    let mut horiz = 0.0;
    for i in 0..a.n() {
        horiz += a.x[i] * a.x[i] + a.y[i] * a.y[i];
    }
    math::sqrt(math::sqrt(horiz * horiz + a.t * a.t))
}

fn fd4<F>(f: F, h: f64) -> Result<f64, CarnotError>
where
    F: Fn(f64) -> Result<f64, CarnotError>,
{
    // 4th-order central first derivative.
    let v = (-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CarnotError::StencilFailure)
    }
}

/// Horizontal gradient `(X_1 F, ..., X_n F, Y_1 F, ..., Y_n F)` by
/// 4th-order central differences, with `X_i = d/dx_i + 2 y_i d/dt` and
/// `Y_i = d/dy_i - 2 x_i d/dt`.
pub fn h_grad_apply<F>(f: F, a: &HPoint, h: f64) -> Result<Vec<f64>, CarnotError>
where
    F: Fn(&HPoint) -> Result<f64, CarnotError>,
{
    let n = a.n();
    let at_x = |i: usize, d: f64| {
        let mut p = a.clone();
        p.x[i] += d;
        f(&p)
    };
    let at_y = |i: usize, d: f64| {
        let mut p = a.clone();
        p.y[i] += d;
        f(&p)
    };
    let at_t = |d: f64| {
        let mut p = a.clone();
        p.t += d;
        f(&p)
    };
    let dt = fd4(at_t, h)?;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(fd4(|d| at_x(i, d), h)? + 2.0 * a.y[i] * dt);
    }
    for i in 0..n {
        out.push(fd4(|d| at_y(i, d), h)? - 2.0 * a.x[i] * dt);
    }
    Ok(out)
}

/// `psi = |grad_H N| = sqrt(sum x_i^2 + y_i^2) / N`, the angular factor
/// of the gauge norm; homogeneous of degree 0, valued in [0, 1], and
/// vanishing exactly on the center axis.
pub fn h_psi(a: &HPoint) -> Result<f64, CarnotError> {
    let nrm = h_norm(a);
    if nrm == 0.0 {
        return Err(CarnotError::OriginSingularity);
    }
    let mut horiz = 0.0;
    for i in 0..a.n() {
        horiz += a.x[i] * a.x[i] + a.y[i] * a.y[i];
    }
    Ok(math::sqrt(horiz) / nrm)
}

#[derive(Clone, Debug)]
pub struct RadialCheck {
    /// Divergence-form horizontal p-Laplacian computed by nested
    /// numerical horizontal gradients.
    pub direct: f64,
    /// The collapsed radial expression
    /// `(p-1) psi^p |z'|^{p-2} (z'' + (Q-1)/(p-1) z'/r)` at `r = N`.
    pub radial: f64,
    /// The equivalent conserved-flux expression
    /// `psi^p N^{1-Q} (r^{Q-1}|z'|^{p-2} z')'`.
    pub flux_form: f64,
    pub rel_err: f64,
    pub flux_rel_err: f64,
    pub psi: f64,
    pub r: f64,
}

fn signed_power(d: f64, p: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    math::pow(math::abs(d), p - 2.0) * d
}

/// Verifies at one point that the horizontal p-Laplacian of the
/// gauge-radial function `zeta(N(.))` agrees with the one-dimensional
/// radial expression, both evaluated numerically and independently.
///
/// `h` is the inner finite-difference step (default taste: 1e-4); the
/// second (outer) differentiation uses `10 h` to control cancellation.
pub fn radial_sublaplacian_check(
    zeta: &ScalarFunc,
    p: f64,
    a: &HPoint,
    h: f64,
) -> Result<RadialCheck, CarnotError> {
    let group = HGroup::new(a.n());
    let q = group.homogeneous_dim();
    let r = h_norm(a);
    if r == 0.0 {
        return Err(CarnotError::OriginSingularity);
    }
    let psi = h_psi(a)?;
    if psi < 1e-6 && p < 2.0 {
        return Err(CarnotError::AxisDegeneracy { psi });
    }

    let v = |pt: &HPoint| -> Result<f64, CarnotError> { Ok(zeta.eval(h_norm(pt))?) };

    // Radial side: zeta' and zeta'' by 4th-order stencils at step 1e-3
    // (the second derivative needs the larger step to beat roundoff).
    let hz = 1e-3_f64.max(h);
    let z = |d: f64| -> Result<f64, CarnotError> { Ok(zeta.eval(r + d)?) };
    let z1 = fd4(z, hz)?;
    let z2 = {
        let v = (-z(2.0 * hz)? + 16.0 * z(hz)? - 30.0 * z(0.0)? + 16.0 * z(-hz)? - z(-2.0 * hz)?)
            / (12.0 * hz * hz);
        if !v.is_finite() {
            return Err(CarnotError::StencilFailure);
        }
        v
    };
    let radial = (p - 1.0)
        * math::pow(psi, p)
        * math::pow(math::abs(z1).max(if p < 2.0 { 1e-12 } else { 0.0 }), p - 2.0)
        * (z2 + (q - 1.0) / (p - 1.0) * z1 / r);

    // Direct side: sum_j E_j(|grad_H v|^{p-2} (grad_H v)_j) with the
    // horizontal fields E_j, all gradients numeric.
    let flux_component = |pt: &HPoint, j: usize| -> Result<f64, CarnotError> {
        let grad = h_grad_apply(&v, pt, h)?;
        let mut norm2 = 0.0;
        for g in &grad {
            norm2 += g * g;
        }
        let mut norm = math::sqrt(norm2);
        if p < 2.0 && norm < 1e-12 {
            norm = 1e-12;
        }
        let factor = if norm == 0.0 {
            0.0
        } else {
            math::pow(norm, p - 2.0)
        };
        Ok(factor * grad[j])
    };
    let h_outer = 10.0 * h;
    let n = a.n();
    let mut direct = 0.0;
    for j in 0..2 * n {
        let gj = |pt: &HPoint| flux_component(pt, j);
        let outer = h_grad_apply(gj, a, h_outer)?;
        direct += outer[j];
    }

    // Flux form: psi^p N^{1-Q} (r^{Q-1} |z'|^{p-2} z')' with the outer
    // derivative on a coarser stencil plus one Richardson step.
    let w = |s: f64| -> Result<f64, CarnotError> {
        let d = fd4(|dd| Ok(zeta.eval(s + dd)?), hz)?;
        Ok(math::pow(s, q - 1.0) * signed_power(d, p))
    };
    let delta = 1e-2;
    let wd = |dl: f64| fd4(|d| w(r + d), dl);
    let w1 = wd(delta)?;
    let w2 = wd(0.5 * delta)?;
    let wprime = (16.0 * w2 - w1) / 15.0;
    let flux_form = math::pow(psi, p) * math::pow(r, 1.0 - q) * wprime;

    let scale = math::abs(radial).max(math::abs(direct)).max(1e-300);
    let rel_err = math::abs(direct - radial) / scale;
    let flux_scale = math::abs(radial).max(math::abs(flux_form)).max(1e-300);
    let flux_rel_err = math::abs(flux_form - radial) / flux_scale;
    Ok(RadialCheck {
        direct,
        radial,
        flux_form,
        rel_err,
        flux_rel_err,
        psi,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use alloc::vec;

    fn pt(x: f64, y: f64, t: f64) -> HPoint {
        HPoint::new(vec![x], vec![y], t)
    }

    #[test]
    fn group_law() {
        let a = pt(1.0, 0.0, 0.0);
        let b = pt(0.0, 1.0, 0.0);
        assert_eq!(h_mul(&a, &b).unwrap(), pt(1.0, 1.0, 2.0));

        let e = HPoint::origin(1);
        assert_eq!(h_mul(&a, &e).unwrap(), a);
        assert_eq!(h_mul(&a, &a.inverse()).unwrap(), e);

        // associativity on random triples
        let mut rng = SplitMix64::new(42);
        for _ in 0..200 {
            let rnd = |rng: &mut SplitMix64| pt(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-4.0, 4.0));
            let (a, b, c) = (rnd(&mut rng), rnd(&mut rng), rnd(&mut rng));
            let left = h_mul(&h_mul(&a, &b).unwrap(), &c).unwrap();
            let right = h_mul(&a, &h_mul(&b, &c).unwrap()).unwrap();
            assert!((left.t - right.t).abs() <= 1e-12);
            assert_eq!(left.x, right.x);
            assert_eq!(left.y, right.y);
        }
    }

    #[test]
    fn dilations_and_norm() {
        assert_eq!(h_dilate(&pt(1.0, 0.0, 1.0), 2.0).unwrap(), pt(2.0, 0.0, 4.0));
        assert!(matches!(
            h_dilate(&pt(1.0, 0.0, 1.0), 0.0),
            Err(CarnotError::NonpositiveScale { .. })
        ));

        assert_eq!(h_norm(&HPoint::origin(1)), 0.0);
        assert_eq!(h_norm(&pt(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(h_norm(&pt(0.0, 0.0, 4.0)), 2.0);

        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let a = pt(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-4.0, 4.0));
            // homogeneity degree 1 and symmetry under inversion
            for scale in [0.5, 2.0, 10.0] {
                let d = h_dilate(&a, scale).unwrap();
                assert!((h_norm(&d) - scale * h_norm(&a)).abs() <= 1e-12 * scale * h_norm(&a));
            }
            assert_eq!(h_norm(&a.inverse()), h_norm(&a));
            // dilation composition
            let d = h_dilate(&h_dilate(&a, 2.0).unwrap(), 3.0).unwrap();
            let d2 = h_dilate(&a, 6.0).unwrap();
            assert!((d.t - d2.t).abs() < 1e-12 * (1.0 + d2.t.abs()));
        }
    }

    #[test]
    fn horizontal_gradient() {
        let a = pt(0.7, -0.3, 1.2);
        // F = x_1
        let g = h_grad_apply(|p| Ok(p.x[0]), &a, 1e-4).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-10);
        assert!(g[1].abs() < 1e-10);
        // F = t: X = 2y, Y = -2x
        let g = h_grad_apply(|p| Ok(p.t), &a, 1e-4).unwrap();
        assert!((g[0] - 2.0 * a.y[0]).abs() < 1e-10);
        assert!((g[1] + 2.0 * a.x[0]).abs() < 1e-10);
        // F = N^4 at (1,0,0): X_1 F = 4, Y_1 F = 0
        let f = |p: &HPoint| {
            let n = h_norm(p);
            Ok(n * n * n * n)
        };
        let g = h_grad_apply(f, &pt(1.0, 0.0, 0.0), 1e-4).unwrap();
        assert!((g[0] - 4.0).abs() < 1e-9, "{}", g[0]);
        assert!(g[1].abs() < 1e-9, "{}", g[1]);
    }

    #[test]
    fn psi_properties() {
        assert!((h_psi(&pt(1.0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(h_psi(&pt(0.0, 0.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(
            h_psi(&HPoint::origin(1)),
            Err(CarnotError::OriginSingularity)
        ));

        let mut rng = SplitMix64::new(99);
        for _ in 0..200 {
            let a = pt(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-4.0, 4.0));
            if h_norm(&a) < 1e-3 {
                continue;
            }
            let psi = h_psi(&a).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&psi));
            // degree-0 homogeneity
            for scale in [0.5, 2.0] {
                let ps = h_psi(&h_dilate(&a, scale).unwrap()).unwrap();
                assert!((ps - psi).abs() <= 1e-10 * (1.0 + psi));
            }
        }
    }

    #[test]
    fn psi_matches_numeric_gradient_of_norm() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let a = pt(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(-4.0, 4.0));
            let grad = h_grad_apply(|p| Ok(h_norm(p)), &a, 1e-4).unwrap();
            let num: f64 = math::sqrt(grad.iter().map(|g| g * g).sum());
            let psi = h_psi(&a).unwrap();
            assert!((num - psi).abs() <= 1e-6 * (1.0 + psi), "{num} vs {psi}");
        }
    }

    #[test]
    fn radial_identity_examples() {
        // zeta = r^2, p = 2 at (1,0,0): psi = 1, value 2 + 3*2 = 8.
        let zeta = ScalarFunc::parse("t^2").unwrap();
        let c = radial_sublaplacian_check(&zeta, 2.0, &pt(1.0, 0.0, 0.0), 1e-4).unwrap();
        assert!((c.radial - 8.0).abs() < 1e-6, "{}", c.radial);
        assert!(c.rel_err <= 1e-6, "rel err {}", c.rel_err);
        assert!(c.flux_rel_err <= 1e-9, "flux rel err {}", c.flux_rel_err);

        // constant zeta: everything zero
        let zeta = ScalarFunc::constant(5.0);
        let c = radial_sublaplacian_check(&zeta, 2.0, &pt(1.0, 1.0, 0.5), 1e-4).unwrap();
        assert!(c.direct.abs() < 1e-8 && c.radial.abs() < 1e-12);

        // zeta = r, p = 2 at (1,1,0)
        let zeta = ScalarFunc::parse("t").unwrap();
        let c = radial_sublaplacian_check(&zeta, 2.0, &pt(1.0, 1.0, 0.0), 1e-4).unwrap();
        assert!(c.rel_err <= 1e-6, "rel err {}", c.rel_err);
    }

    #[test]
    fn radial_identity_random_points() {
        let mut rng = SplitMix64::new(11);
        let zetas = [
            ScalarFunc::parse("t^2").unwrap(),
            ScalarFunc::parse("t^3").unwrap(),
            ScalarFunc::parse("exp(t)").unwrap(),
        ];
        for _ in 0..20 {
            let a = pt(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(-4.0, 4.0));
            for zeta in &zetas {
                for p in [2.0, 3.0] {
                    let c = radial_sublaplacian_check(zeta, p, &a, 1e-4).unwrap();
                    assert!(
                        c.rel_err <= 1e-6,
                        "zeta {zeta}, p {p}, point {a:?}: rel {}",
                        c.rel_err
                    );
                    assert!(
                        c.flux_rel_err <= 1e-9,
                        "zeta {zeta}, p {p}: flux rel {}",
                        c.flux_rel_err
                    );
                }
            }
        }
    }
}
