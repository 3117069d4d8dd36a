//! Deterministic seed families.
//!
//! Positions and directions come from additive recurrences with the
//! golden and plastic ratios, so seed sets are reproducible without a
//! random number generator.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{Family, Seed, SolenoidSeed};
use crate::fmath::{ceil, cos, powi, sin, sqrt, wrap01};
use crate::metric::{solenoid_distance, ContinuumApprox, Point, PointCloud, SolenoidPoint, SpaceTag};
use crate::systems::{cat_eigenvectors, DynSystem};
use crate::{Error, Result};

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const PLASTIC_1: f64 = 0.754_877_666_246_692_7;
const PLASTIC_2: f64 = 0.569_840_290_998_053_3;

fn r2(k: usize) -> (f64, f64) {
    let k = k as f64 + 1.0;
    (wrap01(0.5 + k * PLASTIC_1), wrap01(0.5 + k * PLASTIC_2))
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!("{name} must be positive, got {v}")))
    }
}

/// Chain through raw coordinates `start + t·dir`, `t ∈ [0, length]`.
fn straight_chain(tag: SpaceTag, start: &[f64], dir: &[f64], length: f64, gap: f64) -> Result<ContinuumApprox> {
    let n = ceil(length / gap).max(1.0) as usize;
    let mut pts = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = length * i as f64 / n as f64;
        let c: Vec<f64> = start.iter().zip(dir).map(|(s, d)| s + t * d).collect();
        pts.push(Point::new(tag, &c)?);
    }
    ContinuumApprox::new(pts, gap)
}

/// `count` segments of the given length in the phase space of `sys`, with
/// consecutive points at most `gap` apart.
///
/// Torus and circle seeds are spread over the whole space, plane seeds
/// over `[0.05, 0.95]ᵈ` and annulus seeds over radii `[1.1, 1.9]`.
pub fn segment_seeds(sys: &DynSystem, count: usize, length: f64, gap: f64) -> Result<Vec<Seed>> {
    check_positive("length", length)?;
    check_positive("gap", gap)?;
    let tag = sys
        .space()
        .ok_or_else(|| Error::SpaceMismatch("use solenoid_segment for the solenoid".into()))?;
    if tag == SpaceTag::Annulus && length > 0.2 {
        return Err(Error::Domain("annulus segments are limited to length 0.2".into()));
    }
    (0..count)
        .map(|k| {
            let (a, b) = r2(k);
            let phi = TAU * wrap01(k as f64 * GOLDEN);
            let (start, dir): (Vec<f64>, Vec<f64>) = match tag {
                SpaceTag::Torus2 => (alloc::vec![a, b], alloc::vec![cos(phi), sin(phi)]),
                SpaceTag::Circle => (alloc::vec![a], alloc::vec![1.0]),
                SpaceTag::Plane2 => (
                    alloc::vec![0.05 + 0.9 * a, 0.05 + 0.9 * b],
                    alloc::vec![cos(phi), sin(phi)],
                ),
                SpaceTag::Plane3 => {
                    let c = wrap01(0.5 + (k as f64 + 1.0) * GOLDEN);
                    let z = 2.0 * wrap01(k as f64 * PLASTIC_1) - 1.0;
                    let s = sqrt((1.0 - z * z).max(0.0));
                    (
                        alloc::vec![0.05 + 0.9 * a, 0.05 + 0.9 * b, 0.05 + 0.9 * c],
                        alloc::vec![s * cos(phi), s * sin(phi), z],
                    )
                }
                SpaceTag::Annulus => {
                    let r = 1.1 + 0.8 * a;
                    let th = TAU * b;
                    (alloc::vec![r * cos(th), r * sin(th)], alloc::vec![cos(phi), sin(phi)])
                }
            };
            let mut start = start;
            if tag == SpaceTag::Annulus {
                // centre the segment on the sampled point
                for (s, d) in start.iter_mut().zip(&dir) {
                    *s -= 0.5 * length * d;
                }
            }
            Ok(Seed::chain(straight_chain(tag, &start, &dir, length, gap)?))
        })
        .collect()
}

/// Filled disk of `radius` around `center`, sampled with resolution `h`.
/// Dimension 2, anchored at the center.
pub fn disk_seed(center: &Point, radius: f64, h: f64) -> Result<Seed> {
    check_positive("radius", radius)?;
    check_positive("resolution", h)?;
    let tag = center.tag();
    if tag.dim() != 2 {
        return Err(Error::SpaceMismatch(alloc::format!("disks need a 2-dimensional space, not {}", tag.name())));
    }
    if tag == SpaceTag::Annulus {
        let r = center.norm();
        if r - radius < 1.0 || r + radius > 2.0 {
            return Err(Error::Domain("disk leaves the annulus".into()));
        }
    }
    // a point of the disk moved inward by s has a grid corner of the disk
    // within 0.71 s, so spacing h/2 gives resolution h
    let s = h / 2.0;
    let m = ceil(radius / s) as i64;
    let (cx, cy) = (center.x(), center.y());
    let mut pts = Vec::new();
    for i in -m..=m {
        for j in -m..=m {
            let (dx, dy) = (i as f64 * s, j as f64 * s);
            if dx * dx + dy * dy <= radius * radius {
                pts.push(Point::new(tag, &[cx + dx, cy + dy])?);
            }
        }
    }
    Ok(Seed::cloud(PointCloud::new(pts, h)?, 2).with_anchor(*center))
}

/// The closed annulus `r0 ≤ |p| ≤ r1` sampled on concentric rings with
/// resolution `h`. Invariant under the annulus flow.
pub fn thin_annulus_seed(r0: f64, r1: f64, h: f64) -> Result<Seed> {
    check_positive("resolution", h)?;
    if !(1.0 <= r0 && r0 < r1 && r1 <= 2.0) {
        return Err(Error::Domain(alloc::format!("radii [{r0}, {r1}] are not inside [1, 2]")));
    }
    let rings = ceil((r1 - r0) / h) as usize + 1;
    let mut pts = Vec::new();
    for i in 0..rings {
        let r = r0 + (r1 - r0) * i as f64 / (rings - 1) as f64;
        let n = ceil(TAU * r / h) as usize;
        for j in 0..n {
            let a = TAU * j as f64 / n as f64;
            pts.push(Point::annulus_polar(r, a)?);
        }
    }
    Ok(Seed::cloud(PointCloud::new(pts, h)?, 2).with_family(Family::InvariantSet))
}

/// Cat-map parallelogram `center + s·u + t·v`, `|s| ≤ half_u`,
/// `|t| ≤ half_s`, on a grid of pitch at most `h` in eigen coordinates.
pub fn eigen_rectangle_cloud(center: &Point, half_u: f64, half_s: f64, h: f64) -> Result<PointCloud> {
    check_positive("resolution", h)?;
    if !(half_u >= 0.0 && half_s >= 0.0) {
        return Err(Error::Domain("rectangle half sides must be nonnegative".into()));
    }
    let (u, v) = cat_eigenvectors();
    let nu = ceil(2.0 * half_u / h) as usize;
    let ns = ceil(2.0 * half_s / h) as usize;
    let along = |n: usize, half: f64, i: usize| if n == 0 { 0.0 } else { -half + 2.0 * half * i as f64 / n as f64 };
    let mut pts = Vec::with_capacity((nu + 1) * (ns + 1));
    for i in 0..=nu {
        let s = along(nu, half_u, i);
        for j in 0..=ns {
            let t = along(ns, half_s, j);
            pts.push(Point::torus2(
                center.x() + s * u[0] + t * v[0],
                center.y() + s * u[1] + t * v[1],
            ));
        }
    }
    PointCloud::new(pts, h)
}

/// Eigen rectangle seed of dimension 2 with its exact-iterate family.
pub fn eigen_rectangle_seed(center: &Point, half_u: f64, half_s: f64, h: f64) -> Result<Seed> {
    check_positive("unstable half side", half_u)?;
    check_positive("stable half side", half_s)?;
    let cloud = eigen_rectangle_cloud(center, half_u, half_s, h)?;
    Ok(Seed::cloud(cloud, 2)
        .with_family(Family::EigenRectangle {
            center: *center,
            half_unstable: half_u,
            half_stable: half_s,
        })
        .with_anchor(*center))
}

/// Arc in the path component of the solenoid: the windows regenerated
/// from oldest entries in `[a, a + spread·2^{-K}]`, so the middle entry
/// sweeps an arc of length `spread`. Consecutive windows are at most `gap`
/// apart.
pub fn solenoid_segment(a: f64, spread: f64, gap: f64, half_width: usize) -> Result<SolenoidSeed> {
    check_positive("spread", spread)?;
    check_positive("gap", gap)?;
    let k = half_width as i32;
    // solenoid distance per unit change of the oldest entry
    let rate: f64 = (-k..=k).map(|n| powi(2.0, n + k - n.abs())).sum();
    let span = spread * powi(2.0, -k);
    let count = ceil(span * rate / gap).max(1.0) as usize;
    if count > super::MAX_CHAIN_POINTS {
        return Err(Error::Resource(alloc::format!("solenoid segment needs {count} points")));
    }
    let points: Vec<SolenoidPoint> = (0..=count)
        .map(|i| SolenoidPoint::from_anchor(a + span * i as f64 / count as f64, half_width))
        .collect();
    let mut widest = 0.0f64;
    for w in points.windows(2) {
        widest = widest.max(solenoid_distance(&w[0], &w[1])?);
    }
    Ok(SolenoidSeed {
        points,
        gap_bound: gap.max(widest),
    })
}
