//! Covers by open boxes, their order and mesh, and two-sided estimates of
//! the ε-dimension of a sampled compact set.
//!
//! A [`PointCloud`] with resolution `h` stands for the union of the closed
//! `h`-balls around its samples. Covers produced here contain every such
//! ball inside a single box, so their order is an honest upper bound for
//! the represented set. Periodic clouds are first lifted to the plane
//! through a [`Chart`]; this requires the cloud to be small enough that the
//! lift is an isometry.

mod bricks;
mod cover;
mod estimate;
mod oracle;
mod path;

pub use bricks::{brick_cover, brick_cover_with, BrickLayout, BRICK_SCALES};
pub use cover::{cover_order, mesh, Cover, OpenBox};
pub use estimate::{dim_eps_estimate, dim_eps_estimate_with, dim_eps_lower, DimEstimate};
pub use oracle::{dim_eps_oracle, ORACLE_LIMIT};
pub use path::path_cover;

use alloc::vec::Vec;

use crate::fmath::wrap_half;
use crate::metric::{Point, PointCloud, SpaceTag};
use crate::{Error, Result};

/// Largest per-axis extent a periodic cloud may have in its lift.
pub const MAX_LIFT_SPAN: f64 = 0.5;

/// How cloud points are mapped to the Euclidean coordinates of a cover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart {
    /// Plane and annulus clouds: coordinates used as they are.
    Identity,
    /// Torus clouds: representatives nearest `origin`.
    TorusLift { origin: [f64; 2] },
    /// Circle clouds: angle measured from `cut`, embedded as `(θ − cut, 0)`.
    CircleCut { cut: f64 },
}

impl Chart {
    /// Chart in which `c` and covers of mesh `< epsilon` keep their geometry.
    pub fn for_cloud(c: &PointCloud, epsilon: f64) -> Result<Chart> {
        let chart = match c.tag() {
            SpaceTag::Plane2 | SpaceTag::Plane3 | SpaceTag::Annulus => return Ok(Chart::Identity),
            SpaceTag::Torus2 => {
                let p = c.points().first().ok_or(Error::Empty)?;
                Chart::TorusLift { origin: [p.x(), p.y()] }
            }
            SpaceTag::Circle => {
                let mut th: Vec<f64> = c.iter().map(|p| p.theta()).collect();
                if th.is_empty() {
                    return Err(Error::Empty);
                }
                th.sort_by(f64::total_cmp);
                let mut gap = 1.0 - th[th.len() - 1] + th[0];
                let mut cut = crate::fmath::wrap01(th[th.len() - 1] + 0.5 * gap);
                for w in th.windows(2) {
                    if w[1] - w[0] > gap {
                        gap = w[1] - w[0];
                        cut = 0.5 * (w[0] + w[1]);
                    }
                }
                Chart::CircleCut { cut }
            }
        };
        if epsilon > 0.5 * MAX_LIFT_SPAN {
            return Err(Error::Domain(alloc::format!(
                "epsilon = {epsilon} too large for a periodic space (at most {})",
                0.5 * MAX_LIFT_SPAN
            )));
        }
        if !chart.is_isometric_for(c) {
            return Err(Error::Domain(alloc::format!(
                "{} cloud wraps around: lifted extent exceeds {MAX_LIFT_SPAN}",
                c.tag().name()
            )));
        }
        Ok(chart)
    }

    /// Dimension of the Euclidean coordinates produced for `tag`.
    pub fn target_dim(&self, tag: SpaceTag) -> usize {
        match tag {
            SpaceTag::Plane3 => 3,
            _ => 2,
        }
    }

    /// Chart coordinates of `p` as a plane point.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        match (self, p.tag()) {
            (Chart::Identity, SpaceTag::Plane2 | SpaceTag::Annulus) => Ok(Point::plane2(p.x(), p.y())),
            (Chart::Identity, SpaceTag::Plane3) => Ok(*p),
            (Chart::TorusLift { origin }, SpaceTag::Torus2) => Ok(Point::plane2(
                origin[0] + wrap_half(p.x() - origin[0]),
                origin[1] + wrap_half(p.y() - origin[1]),
            )),
            (Chart::CircleCut { cut }, SpaceTag::Circle) => {
                Ok(Point::plane2(crate::fmath::wrap01(p.theta() - cut), 0.0))
            }
            (chart, tag) => Err(Error::SpaceMismatch(alloc::format!(
                "chart {chart:?} does not apply to {} points",
                tag.name()
            ))),
        }
    }

    pub fn lift(&self, c: &PointCloud) -> Result<Vec<Point>> {
        c.iter().map(|p| self.apply(p)).collect()
    }

    /// Whether the lift of `c` stays within [`MAX_LIFT_SPAN`] on every axis,
    /// which makes chart distances equal intrinsic ones.
    pub fn is_isometric_for(&self, c: &PointCloud) -> bool {
        let Ok(pts) = self.lift(c) else {
            return false;
        };
        if matches!(self, Chart::Identity) {
            return true;
        }
        (0..2).all(|a| {
            let lo = pts.iter().map(|p| p.coords()[a]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p.coords()[a]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo <= MAX_LIFT_SPAN
        })
    }
}

pub(crate) fn check_epsilon(c: &PointCloud, epsilon: f64) -> Result<()> {
    let h = c.resolution_h();
    if !(epsilon.is_finite() && epsilon > 4.0 * h) {
        return Err(Error::Precondition(alloc::format!(
            "epsilon = {epsilon} must exceed 4h = {}",
            4.0 * h
        )));
    }
    Ok(())
}
