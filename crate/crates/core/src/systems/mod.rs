//! Catalog of dynamical systems: the torus cat map, the time-one map of
//! the annulus rotation field, the irregular saddle in two and three
//! dimensions, the circle doubling map and the shift on its inverse limit.

mod comb;
mod maps;
mod saddle;

pub use comb::{EGeometry, ESegment, SegmentKind};
pub use maps::{
    annulus_flow, cat_backward, cat_eigenvectors, cat_forward, cat_lambda, cat_linear, doubling, doubling_arc,
    doubling_preimages, doubling_steps_to,
};
pub use saddle::{flow_height, flow_time, in_r1, piecewise_t, piecewise_t_inv, IntegratorConfig, Saddle};

use alloc::vec::Vec;

use crate::metric::{Metric, Point, SolenoidPoint, SpaceTag};
use crate::{Error, Result};

/// Time direction of a single evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// A catalog system with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum DynSystem {
    /// `(x, y) ↦ (2x + y, x + y)` on the torus.
    CatMap,
    /// Time-one map of `X = (−y, x)/r` on `1 ≤ r ≤ 2`.
    AnnulusTimeOne,
    /// `f = φ₁ ∘ T` on the plane.
    IrregularSaddle2d(Saddle),
    /// `(x, y, z) ↦ (f(x, y), 2z)`.
    IrregularSaddle3d(Saddle),
    /// `θ ↦ 2θ`, not invertible.
    DoublingCircle,
    /// Shift on windows of half width `K` of the doubling inverse limit.
    SolenoidShift { half_width: usize },
}

/// One line of the catalog listing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub space: &'static str,
    pub invertible: bool,
    pub description: &'static str,
}

pub const CATALOG: [CatalogEntry; 6] = [
    CatalogEntry {
        id: "cat_map",
        space: "torus2",
        invertible: true,
        description: "hyperbolic toral automorphism (x, y) -> (2x + y, x + y) mod 1",
    },
    CatalogEntry {
        id: "annulus_time_one",
        space: "annulus",
        invertible: true,
        description: "time-one map of X = (-y, x)/r on 1 <= r <= 2; rotation by 1/r",
    },
    CatalogEntry {
        id: "irregular_saddle_2d",
        space: "plane2",
        invertible: true,
        description: "f = phi_1 o T with the vertical field X = (0, dist(., E))",
    },
    CatalogEntry {
        id: "irregular_saddle_3d",
        space: "plane3",
        invertible: true,
        description: "(x, y, z) -> (f(x, y), 2z)",
    },
    CatalogEntry {
        id: "doubling_circle",
        space: "circle",
        invertible: false,
        description: "theta -> 2 theta mod 1; two preimages per point",
    },
    CatalogEntry {
        id: "solenoid_shift",
        space: "solenoid",
        invertible: true,
        description: "shift on compatible windows of the doubling inverse limit",
    },
];

/// Default window half width for solenoid points.
pub const DEFAULT_SOLENOID_K: usize = 16;

impl DynSystem {
    /// Catalog system with default parameters.
    pub fn from_id(id: &str) -> Result<DynSystem> {
        Ok(match id {
            "cat_map" => DynSystem::CatMap,
            "annulus_time_one" => DynSystem::AnnulusTimeOne,
            "irregular_saddle_2d" => DynSystem::IrregularSaddle2d(Saddle::default()),
            "irregular_saddle_3d" => DynSystem::IrregularSaddle3d(Saddle::default()),
            "doubling_circle" => DynSystem::DoublingCircle,
            "solenoid_shift" => DynSystem::SolenoidShift {
                half_width: DEFAULT_SOLENOID_K,
            },
            other => return Err(Error::Domain(alloc::format!("unknown system `{other}`"))),
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            DynSystem::CatMap => "cat_map",
            DynSystem::AnnulusTimeOne => "annulus_time_one",
            DynSystem::IrregularSaddle2d(_) => "irregular_saddle_2d",
            DynSystem::IrregularSaddle3d(_) => "irregular_saddle_3d",
            DynSystem::DoublingCircle => "doubling_circle",
            DynSystem::SolenoidShift { .. } => "solenoid_shift",
        }
    }

    /// Space of `Point`s the map acts on; `None` for the solenoid.
    pub fn space(&self) -> Option<SpaceTag> {
        match self {
            DynSystem::CatMap => Some(SpaceTag::Torus2),
            DynSystem::AnnulusTimeOne => Some(SpaceTag::Annulus),
            DynSystem::IrregularSaddle2d(_) => Some(SpaceTag::Plane2),
            DynSystem::IrregularSaddle3d(_) => Some(SpaceTag::Plane3),
            DynSystem::DoublingCircle => Some(SpaceTag::Circle),
            DynSystem::SolenoidShift { .. } => None,
        }
    }

    pub fn metric(&self) -> Option<Metric> {
        self.space().map(Metric::natural)
    }

    pub fn is_invertible(&self) -> bool {
        !matches!(self, DynSystem::DoublingCircle)
    }

    pub fn saddle(&self) -> Option<&Saddle> {
        match self {
            DynSystem::IrregularSaddle2d(s) | DynSystem::IrregularSaddle3d(s) => Some(s),
            _ => None,
        }
    }

    /// One step of the map in direction `dir`.
    pub fn eval(&self, p: &Point, dir: Direction) -> Result<Point> {
        let Some(space) = self.space() else {
            return Err(Error::SpaceMismatch("the solenoid shift acts on SolenoidPoint values".into()));
        };
        if p.tag() != space {
            return Err(Error::SpaceMismatch(alloc::format!(
                "{} acts on {} points, got {}",
                self.id(),
                space.name(),
                p.tag().name()
            )));
        }
        let fwd = dir == Direction::Forward;
        match self {
            DynSystem::CatMap => Ok(if fwd { cat_forward(p) } else { cat_backward(p) }),
            DynSystem::AnnulusTimeOne => annulus_flow(p, if fwd { 1.0 } else { -1.0 }),
            DynSystem::IrregularSaddle2d(s) => {
                let (x, y) = if fwd { s.forward(p.x(), p.y())? } else { s.backward(p.x(), p.y())? };
                Ok(Point::plane2(x, y))
            }
            DynSystem::IrregularSaddle3d(s) => {
                let ((x, y), z) = if fwd {
                    (s.forward(p.x(), p.y())?, 2.0 * p.z())
                } else {
                    (s.backward(p.x(), p.y())?, 0.5 * p.z())
                };
                Ok(Point::plane3(x, y, z))
            }
            DynSystem::DoublingCircle => {
                if fwd {
                    Ok(doubling(p))
                } else {
                    Err(Error::UnsupportedDirection("doubling_circle"))
                }
            }
            DynSystem::SolenoidShift { .. } => unreachable!("handled above"),
        }
    }

    /// `f^n(p)`, negative `n` meaning backward steps.
    pub fn iterate(&self, p: &Point, n: i64) -> Result<Point> {
        let dir = if n >= 0 { Direction::Forward } else { Direction::Backward };
        let mut q = *p;
        for _ in 0..n.unsigned_abs() {
            q = self.eval(&q, dir)?;
        }
        Ok(q)
    }

    /// `(n, f^n(p))` for `n = -back..=fwd`.
    pub fn orbit(&self, p: &Point, back: u32, fwd: u32) -> Result<Vec<(i64, Point)>> {
        let mut past = Vec::with_capacity(back as usize);
        let mut q = *p;
        for n in 1..=back as i64 {
            q = self.eval(&q, Direction::Backward)?;
            past.push((-n, q));
        }
        past.reverse();
        past.push((0, *p));
        let mut q = *p;
        for n in 1..=fwd as i64 {
            q = self.eval(&q, Direction::Forward)?;
            past.push((n, q));
        }
        Ok(past)
    }

    /// Shift (or inverse shift) of a solenoid window.
    pub fn eval_solenoid(&self, a: &SolenoidPoint, dir: Direction) -> Result<SolenoidPoint> {
        match self {
            DynSystem::SolenoidShift { half_width } => {
                if a.half_width() != *half_width {
                    return Err(Error::SpaceMismatch(alloc::format!(
                        "window half width {} for a shift on K = {half_width}",
                        a.half_width()
                    )));
                }
                Ok(match dir {
                    Direction::Forward => a.shift(),
                    Direction::Backward => a.unshift(),
                })
            }
            _ => Err(Error::SpaceMismatch(alloc::format!("{} does not act on solenoid points", self.id()))),
        }
    }
}
