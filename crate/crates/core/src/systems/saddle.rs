//! The irregular saddle `f = φ₁ ∘ T` and its pieces.

use super::comb::{EGeometry, Fiber};
use crate::fmath::ceil;
use crate::metric::{Point, SpaceTag};
use crate::{Error, Result};

/// `T₁ = diag(1/2, 1/2)` on `{x ≥ y ≥ 0}`, `T₂ = diag(1/2, 2)` on
/// `{x ≤ 0 or y ≤ 0}` and `T₃(x, y) = (x/2, −3x/2 + 2y)` on `{y ≥ x ≥ 0}`.
///
/// `T₃` is the linear map sending `(1, 1)` to `(1/2, 1/2)` and `(0, 1)` to
/// `(0, 2)`. Each sector is mapped onto itself.
pub fn piecewise_t(x: f64, y: f64) -> (f64, f64) {
    if x >= y && y >= 0.0 {
        (0.5 * x, 0.5 * y)
    } else if y >= x && x >= 0.0 {
        (0.5 * x, -1.5 * x + 2.0 * y)
    } else {
        (0.5 * x, 2.0 * y)
    }
}

/// Inverse of [`piecewise_t`].
pub fn piecewise_t_inv(u: f64, v: f64) -> (f64, f64) {
    if u >= v && v >= 0.0 {
        (2.0 * u, 2.0 * v)
    } else if v >= u && u >= 0.0 {
        (2.0 * u, 0.5 * v + 1.5 * u)
    } else {
        (2.0 * u, 0.5 * v)
    }
}

/// Fixed-step RK4 settings for the vertical flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    /// Longest flow time accepted in one call.
    pub max_time: f64,
    /// Compare against a half-step run and fail above `tolerance`.
    pub verify: bool,
    pub tolerance: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-3,
            max_time: 1e3,
            verify: true,
            tolerance: 1e-6,
        }
    }
}

impl IntegratorConfig {
    /// Coarse unverified settings for bulk scans where only the escape
    /// pattern matters.
    pub fn scan() -> Self {
        IntegratorConfig {
            step: 0.05,
            verify: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Domain(alloc::format!("integrator step must be positive, got {}", self.step)));
        }
        if !(self.max_time > 0.0) || !(self.tolerance > 0.0) {
            return Err(Error::Domain("integrator max_time and tolerance must be positive".into()));
        }
        Ok(())
    }
}

fn rk4(fiber: &Fiber<'_>, y0: f64, t: f64, steps: usize) -> f64 {
    let h = t / steps as f64;
    let mut y = y0;
    for _ in 0..steps {
        let k1 = fiber.rho(y);
        let k2 = fiber.rho(y + 0.5 * h * k1);
        let k3 = fiber.rho(y + 0.5 * h * k2);
        let k4 = fiber.rho(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

/// Height reached after flowing `(x, y)` for time `t` along `X = (0, ρ)`,
/// with the step-halving discrepancy (0 when not verified).
pub fn flow_height(geom: &EGeometry, cfg: &IntegratorConfig, x: f64, y: f64, t: f64) -> Result<(f64, f64)> {
    if !t.is_finite() || t.abs() > cfg.max_time {
        return Err(Error::Domain(alloc::format!("flow time {t} outside ±{}", cfg.max_time)));
    }
    let fiber = geom.fiber(x);
    if t == 0.0 || fiber.rho(y) == 0.0 {
        return Ok((y, 0.0));
    }
    let steps = ceil(t.abs() / cfg.step).max(1.0) as usize;
    let coarse = rk4(&fiber, y, t, steps);
    if !cfg.verify {
        return Ok((coarse, 0.0));
    }
    let fine = rk4(&fiber, y, t, 2 * steps);
    let discrepancy = (fine - coarse).abs();
    if discrepancy > cfg.tolerance {
        return Err(Error::Accuracy {
            discrepancy,
            tolerance: cfg.tolerance,
            x,
            y,
        });
    }
    Ok((fine, discrepancy))
}

/// Flow `φ_t(p)` of the vertical field `X(p) = (0, ρ(p))`.
pub fn flow_time(geom: &EGeometry, cfg: &IntegratorConfig, p: &Point, t: f64) -> Result<Point> {
    check_plane2(p)?;
    let (y, _) = flow_height(geom, cfg, p.x(), p.y(), t)?;
    Ok(Point::plane2(p.x(), y))
}

fn check_plane2(p: &Point) -> Result<()> {
    if p.tag() != SpaceTag::Plane2 {
        return Err(Error::SpaceMismatch(alloc::format!("saddle acts on plane2 points, got {}", p.tag().name())));
    }
    Ok(())
}

/// The irregular saddle with its truncated comb and integrator settings.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Saddle {
    pub geometry: EGeometry,
    pub integrator: IntegratorConfig,
}

impl Saddle {
    pub fn new(geometry: EGeometry, integrator: IntegratorConfig) -> Result<Saddle> {
        integrator.validate()?;
        Ok(Saddle { geometry, integrator })
    }

    /// Same saddle with different integrator settings.
    pub fn with_integrator(&self, integrator: IntegratorConfig) -> Saddle {
        Saddle {
            geometry: self.geometry.clone(),
            integrator,
        }
    }

    /// `f(x, y) = φ₁(T(x, y))`.
    pub fn forward(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (u, v) = piecewise_t(x, y);
        let (w, _) = flow_height(&self.geometry, &self.integrator, u, v, 1.0)?;
        Ok((u, w))
    }

    /// `f⁻¹(x, y) = T⁻¹(φ₋₁(x, y))`.
    pub fn backward(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (w, _) = flow_height(&self.geometry, &self.integrator, x, y, -1.0)?;
        Ok(piecewise_t_inv(x, w))
    }

    pub fn rho(&self, p: &Point) -> f64 {
        self.geometry.rho(p)
    }
}

/// `R₁ = {(x, y) ∈ [0, 1]² : x ≥ y}`.
pub fn in_r1(x: f64, y: f64) -> bool {
    (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) && x >= y
}
