//! Phase-space geometry: points, metrics, point clouds and the basic
//! set measurements (diameter, Hausdorff distance, chain components).

mod cloud;
pub(crate) mod index;
mod ops;
mod point;
mod solenoid;

pub use cloud::{ContinuumApprox, PointCloud};
pub use ops::{chain_components, diameter, directed_hausdorff, hausdorff_distance};
pub(crate) use index::GridIndex;
pub(crate) use ops::{chain_components_of, diameter_of};
pub use point::{Point, SpaceTag, ANNULUS_SLACK};
pub use solenoid::{solenoid_distance, SolenoidPoint};

use crate::fmath::sqrt;
use crate::{Error, Result};

/// The metrics the catalog systems are measured with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Plane, space and annulus points.
    Euclidean,
    /// Flat metric of `R²/Z²`.
    TorusQuotient,
    /// Arc length on `R/Z`, so the circle has diameter 1/2.
    CircleArc,
    /// Weighted sum over solenoid windows; see [`solenoid_distance`].
    SolenoidWeighted,
}

impl Metric {
    /// The metric a phase space is measured with by default.
    pub const fn natural(tag: SpaceTag) -> Metric {
        match tag {
            SpaceTag::Plane2 | SpaceTag::Plane3 | SpaceTag::Annulus => Metric::Euclidean,
            SpaceTag::Torus2 => Metric::TorusQuotient,
            SpaceTag::Circle => Metric::CircleArc,
        }
    }

    pub const fn accepts(self, tag: SpaceTag) -> bool {
        matches!(
            (self, tag),
            (
                Metric::Euclidean,
                SpaceTag::Plane2 | SpaceTag::Plane3 | SpaceTag::Annulus
            ) | (Metric::TorusQuotient, SpaceTag::Torus2)
                | (Metric::CircleArc, SpaceTag::Circle)
        )
    }

    pub const fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::TorusQuotient => "torus_quotient",
            Metric::CircleArc => "circle_arc",
            Metric::SolenoidWeighted => "solenoid_weighted",
        }
    }

    pub(crate) fn check(self, tag: SpaceTag) -> Result<()> {
        if self.accepts(tag) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(alloc::format!(
                "metric {} does not measure {} points",
                self.name(),
                tag.name()
            )))
        }
    }

    /// Distance without tag checks; callers validated the pairing.
    #[inline]
    pub(crate) fn dist(self, p: &Point, q: &Point) -> f64 {
        let (a, b) = (p.array(), q.array());
        match self {
            Metric::Euclidean | Metric::SolenoidWeighted => {
                let d0 = a[0] - b[0];
                let d1 = a[1] - b[1];
                let d2 = a[2] - b[2];
                sqrt(d0 * d0 + d1 * d1 + d2 * d2)
            }
            Metric::TorusQuotient => {
                let dx = a[0] - b[0];
                let dy = a[1] - b[1];
                let mut best = f64::INFINITY;
                for sx in [-1.0, 0.0, 1.0] {
                    for sy in [-1.0, 0.0, 1.0] {
                        let (u, v) = (dx + sx, dy + sy);
                        let d = u * u + v * v;
                        if d < best {
                            best = d;
                        }
                    }
                }
                sqrt(best)
            }
            Metric::CircleArc => {
                let d = (a[0] - b[0]).abs();
                d.min(1.0 - d)
            }
        }
    }

    /// Checked distance between two points.
    pub fn distance(self, p: &Point, q: &Point) -> Result<f64> {
        if p.tag() != q.tag() {
            return Err(Error::SpaceMismatch(alloc::format!(
                "points live in {} and {}",
                p.tag().name(),
                q.tag().name()
            )));
        }
        self.check(p.tag())?;
        Ok(self.dist(p, q))
    }
}

/// Distance between `p` and `q` under `metric`.
pub fn distance(metric: Metric, p: &Point, q: &Point) -> Result<f64> {
    metric.distance(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_pythagoras() {
        let d = distance(Metric::Euclidean, &Point::plane2(0.0, 0.0), &Point::plane2(3.0, 4.0));
        assert_eq!(d.unwrap(), 5.0);
    }

    #[test]
    fn torus_wraparound() {
        let d = distance(
            Metric::TorusQuotient,
            &Point::torus2(0.1, 0.0),
            &Point::torus2(0.9, 0.0),
        )
        .unwrap();
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn circle_arc_is_short_way() {
        let d = distance(Metric::CircleArc, &Point::circle(0.05), &Point::circle(0.95)).unwrap();
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn mismatched_tags_are_domain_errors() {
        let err = distance(Metric::Euclidean, &Point::plane2(0.0, 0.0), &Point::torus2(0.0, 0.0));
        assert!(matches!(err, Err(Error::SpaceMismatch(_))));
        let err = distance(Metric::TorusQuotient, &Point::plane2(0.0, 0.0), &Point::plane2(0.0, 0.0));
        assert!(matches!(err, Err(Error::SpaceMismatch(_))));
        let err = distance(Metric::SolenoidWeighted, &Point::circle(0.0), &Point::circle(0.1));
        assert!(err.is_err());
    }
}
