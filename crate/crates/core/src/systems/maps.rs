//! Closed-form catalog maps.

use crate::fmath::{cos, sin, sqrt};
use crate::metric::Point;
use crate::{Error, Result};

/// Unstable eigenvalue `(3 + √5)/2` of the cat map.
pub fn cat_lambda() -> f64 {
    0.5 * (3.0 + sqrt(5.0))
}

/// Unit unstable and stable eigenvectors of `[[2, 1], [1, 1]]`.
pub fn cat_eigenvectors() -> ([f64; 2], [f64; 2]) {
    let s5 = sqrt(5.0);
    let norm = |v: [f64; 2]| {
        let n = sqrt(v[0] * v[0] + v[1] * v[1]);
        [v[0] / n, v[1] / n]
    };
    (norm([1.0, 0.5 * (s5 - 1.0)]), norm([1.0, -0.5 * (1.0 + s5)]))
}

pub fn cat_forward(p: &Point) -> Point {
    Point::torus2(2.0 * p.x() + p.y(), p.x() + p.y())
}

pub fn cat_backward(p: &Point) -> Point {
    Point::torus2(p.x() - p.y(), -p.x() + 2.0 * p.y())
}

/// Cat-map matrix (or its inverse) applied to a tangent vector.
pub fn cat_linear(v: [f64; 2], forward: bool) -> [f64; 2] {
    if forward {
        [2.0 * v[0] + v[1], v[0] + v[1]]
    } else {
        [v[0] - v[1], -v[0] + 2.0 * v[1]]
    }
}

/// Time-`t` map of `X = (−y, x)/r`: rotation by angle `t/r`.
pub fn annulus_flow(p: &Point, t: f64) -> Result<Point> {
    let r = p.norm();
    let a = t / r;
    let (c, s) = (cos(a), sin(a));
    Point::annulus(c * p.x() - s * p.y(), s * p.x() + c * p.y())
}

pub fn doubling(p: &Point) -> Point {
    Point::circle(2.0 * p.theta())
}

/// The two preimages `θ/2` and `θ/2 + 1/2`.
pub fn doubling_preimages(p: &Point) -> [Point; 2] {
    let h = 0.5 * p.theta();
    [Point::circle(h), Point::circle(h + 0.5)]
}

/// Length covered by the image of an arc of length `length` after `n`
/// doublings, saturating at the whole circle.
pub fn doubling_arc(length: f64, n: u32) -> Result<f64> {
    if !(length > 0.0 && length < 1.0) {
        return Err(Error::Domain(alloc::format!("arc length must lie in (0, 1), got {length}")));
    }
    let mut l = length;
    for _ in 0..n {
        l *= 2.0;
        if l >= 1.0 {
            return Ok(1.0);
        }
    }
    Ok(l)
}

/// Least `n` with `doubling_arc(length, n) ≥ target`.
pub fn doubling_steps_to(length: f64, target: f64) -> Result<u32> {
    let mut n = 0;
    while doubling_arc(length, n)? < target {
        n += 1;
    }
    Ok(n)
}
