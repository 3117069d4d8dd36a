use crate::fmath::{atan2, cos, hypot, sin, wrap01, wrap_half};
use crate::{Error, Result};
use core::f64::consts::PI;

/// Which phase space a point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpaceTag {
    Plane2,
    Plane3,
    /// Two-torus `R²/Z²`, coordinates stored in `[0, 1)²`.
    Torus2,
    /// Circle `R/Z`, angle stored in `[0, 1)`.
    Circle,
    /// Closed annulus `1 ≤ ‖p‖ ≤ 2` in the plane.
    Annulus,
}

/// Slack allowed on the annulus radii when constructing points.
pub const ANNULUS_SLACK: f64 = 1e-9;

impl SpaceTag {
    pub const ALL: [SpaceTag; 5] = [
        SpaceTag::Plane2,
        SpaceTag::Plane3,
        SpaceTag::Torus2,
        SpaceTag::Circle,
        SpaceTag::Annulus,
    ];

    /// Number of stored coordinates.
    pub const fn dim(self) -> usize {
        match self {
            SpaceTag::Circle => 1,
            SpaceTag::Plane3 => 3,
            _ => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            SpaceTag::Plane2 => "plane2",
            SpaceTag::Plane3 => "plane3",
            SpaceTag::Torus2 => "torus2",
            SpaceTag::Circle => "circle",
            SpaceTag::Annulus => "annulus",
        }
    }

    pub fn from_name(name: &str) -> Option<SpaceTag> {
        SpaceTag::ALL.into_iter().find(|t| t.name() == name)
    }

    /// Torus and circle coordinates are taken modulo 1.
    pub const fn is_periodic(self) -> bool {
        matches!(self, SpaceTag::Torus2 | SpaceTag::Circle)
    }
}

/// A point of one of the catalog phase spaces.
///
/// Unused trailing coordinates are zero, so derived equality compares
/// canonical representatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    tag: SpaceTag,
    c: [f64; 3],
}

impl Point {
    /// Builds a point from raw coordinates, canonicalizing periodic ones.
    pub fn new(tag: SpaceTag, coords: &[f64]) -> Result<Point> {
        if coords.len() != tag.dim() {
            return Err(Error::Domain(alloc::format!(
                "{} point needs {} coordinates, got {}",
                tag.name(),
                tag.dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        match tag {
            SpaceTag::Torus2 | SpaceTag::Circle => {
                for v in &mut c[..tag.dim()] {
                    *v = wrap01(*v);
                }
            }
            SpaceTag::Annulus => {
                let r = hypot(c[0], c[1]);
                if !(1.0 - ANNULUS_SLACK..=2.0 + ANNULUS_SLACK).contains(&r) {
                    return Err(Error::Domain(alloc::format!(
                        "annulus point has radius {r}, outside [1, 2]"
                    )));
                }
            }
            _ => {}
        }
        Ok(Point { tag, c })
    }

    pub const fn plane2(x: f64, y: f64) -> Point {
        Point {
            tag: SpaceTag::Plane2,
            c: [x, y, 0.0],
        }
    }

    pub const fn plane3(x: f64, y: f64, z: f64) -> Point {
        Point {
            tag: SpaceTag::Plane3,
            c: [x, y, z],
        }
    }

    pub fn torus2(x: f64, y: f64) -> Point {
        Point {
            tag: SpaceTag::Torus2,
            c: [wrap01(x), wrap01(y), 0.0],
        }
    }

    pub fn circle(theta: f64) -> Point {
        Point {
            tag: SpaceTag::Circle,
            c: [wrap01(theta), 0.0, 0.0],
        }
    }

    pub fn annulus(x: f64, y: f64) -> Result<Point> {
        Point::new(SpaceTag::Annulus, &[x, y])
    }

    /// Annulus point from polar coordinates; `angle` in radians.
    pub fn annulus_polar(radius: f64, angle: f64) -> Result<Point> {
        Point::annulus(radius * cos(angle), radius * sin(angle))
    }

    pub const fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.tag.dim()]
    }

    pub(crate) const fn array(&self) -> [f64; 3] {
        self.c
    }

    pub const fn x(&self) -> f64 {
        self.c[0]
    }

    pub const fn y(&self) -> f64 {
        self.c[1]
    }

    pub const fn z(&self) -> f64 {
        self.c[2]
    }

    /// Circle angle in `[0, 1)`.
    pub const fn theta(&self) -> f64 {
        self.c[0]
    }

    /// Euclidean norm of the stored coordinates.
    pub fn norm(&self) -> f64 {
        crate::fmath::sqrt(self.coords().iter().map(|v| v * v).sum())
    }

    /// Point at parameter `t` along the chart segment from `self` to `other`.
    ///
    /// Periodic coordinates follow the shortest representative and annulus
    /// points are interpolated in polar form, so the result stays in the
    /// phase space.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        debug_assert_eq!(self.tag, other.tag);
        let mut c = self.c;
        match self.tag {
            SpaceTag::Torus2 | SpaceTag::Circle => {
                for i in 0..self.tag.dim() {
                    c[i] = wrap01(self.c[i] + t * wrap_half(other.c[i] - self.c[i]));
                }
            }
            SpaceTag::Annulus => {
                let (r0, a0) = (hypot(self.c[0], self.c[1]), atan2(self.c[1], self.c[0]));
                let (r1, a1) = (hypot(other.c[0], other.c[1]), atan2(other.c[1], other.c[0]));
                let mut da = a1 - a0;
                if da > PI {
                    da -= 2.0 * PI;
                } else if da < -PI {
                    da += 2.0 * PI;
                }
                let r = (1.0 - t) * r0 + t * r1;
                let a = a0 + t * da;
                c[0] = r * cos(a);
                c[1] = r * sin(a);
            }
            SpaceTag::Plane2 | SpaceTag::Plane3 => {
                for i in 0..self.tag.dim() {
                    c[i] = self.c[i] + t * (other.c[i] - self.c[i]);
                }
            }
        }
        Point { tag: self.tag, c }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.lerp(other, 0.5)
    }

    /// Lexicographic order on coordinates.
    pub fn lex_cmp(&self, other: &Point) -> core::cmp::Ordering {
        for i in 0..3 {
            match self.c[i].total_cmp(&other.c[i]) {
                core::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        core::cmp::Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_coordinates_are_canonical() {
        let p = Point::torus2(1.25, -0.25);
        assert_eq!(p.coords(), &[0.25, 0.75]);
        let q = Point::torus2(-1e-18, 0.0);
        assert!(q.x() < 1.0 && q.x() >= 0.0);
    }

    #[test]
    fn annulus_rejects_radius_outside() {
        assert!(Point::annulus(0.5, 0.0).is_err());
        assert!(Point::annulus(2.5, 0.0).is_err());
        assert!(Point::annulus(1.0, 0.0).is_ok());
    }

    #[test]
    fn coordinate_count_checked() {
        assert!(Point::new(SpaceTag::Plane3, &[1.0, 2.0]).is_err());
        assert!(Point::new(SpaceTag::Circle, &[f64::NAN]).is_err());
    }

    #[test]
    fn annulus_lerp_stays_inside() {
        let p = Point::annulus(1.0, 0.0).unwrap();
        let q = Point::annulus(0.0, 1.0).unwrap();
        let m = p.midpoint(&q);
        assert!((m.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torus_lerp_wraps_short_way() {
        let m = Point::torus2(0.9, 0.5).midpoint(&Point::torus2(0.1, 0.5));
        assert!(m.x().abs() < 1e-12 || (m.x() - 1.0).abs() < 1e-12);
    }
}
