//! Stable-set scans and intersection clustering.

use alloc::vec::Vec;

use crate::fmath::{floor, hypot};
use crate::metric::{chain_components_of, ContinuumApprox, GridIndex, Metric, Point, PointCloud, SpaceTag};
use crate::systems::{in_r1, Direction, DynSystem, EGeometry, IntegratorConfig, Saddle};
use crate::{Error, Result};

/// Grid size cap shared by the scans.
pub(crate) const MAX_GRID_POINTS: usize = 1 << 24;

/// Largest number of grid points per axis in a stable-set scan.
pub const MAX_SCAN_AXIS: usize = 1024;

/// Comb levels kept beyond the scan horizon.
const EXTRA_LEVELS: usize = 4;

/// Escape bound of the saddle rule.
const SADDLE_BOUND: f64 = 2.0;

/// Axis-aligned window in raw coordinates. Periodic coordinates are
/// wrapped when grid points are built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanWindow {
    lo: [f64; 3],
    hi: [f64; 3],
    dim: usize,
}

impl ScanWindow {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<ScanWindow> {
        if lo.len() != hi.len() || lo.is_empty() || lo.len() > 3 {
            return Err(Error::Domain("window needs matching bounds in 1 to 3 dimensions".into()));
        }
        let mut w = ScanWindow {
            lo: [0.0; 3],
            hi: [0.0; 3],
            dim: lo.len(),
        };
        for a in 0..lo.len() {
            if !(lo[a].is_finite() && hi[a].is_finite() && lo[a] < hi[a]) {
                return Err(Error::Domain(alloc::format!("empty window axis {a}: [{}, {}]", lo[a], hi[a])));
            }
            w.lo[a] = lo[a];
            w.hi[a] = hi[a];
        }
        Ok(w)
    }

    /// Cube of half side `half` around `center`.
    pub fn around(center: &Point, half: f64) -> Result<ScanWindow> {
        let c = center.coords();
        let lo: Vec<f64> = c.iter().map(|v| v - half).collect();
        let hi: Vec<f64> = c.iter().map(|v| v + half).collect();
        ScanWindow::new(&lo, &hi)
    }

    /// `[0, 1]ᵈ`.
    pub fn unit(dim: usize) -> Result<ScanWindow> {
        ScanWindow::new(&alloc::vec![0.0; dim], &alloc::vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.lo[axis]
    }

    pub fn hi(&self, axis: usize) -> f64 {
        self.hi[axis]
    }

    pub fn contains_box(&self, center: &[f64], r: f64) -> bool {
        (0..self.dim).all(|a| self.lo[a] <= center[a] - r && center[a] + r <= self.hi[a])
    }
}

/// Grid point in `tag`, or `None` off the space (annulus only).
pub(crate) fn grid_point(tag: SpaceTag, c: &[f64]) -> Option<Point> {
    if tag == SpaceTag::Annulus {
        let r = hypot(c[0], c[1]);
        if !(1.0..=2.0).contains(&r) {
            return None;
        }
    }
    Point::new(tag, c).ok()
}

/// When a forward orbit counts as escaped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EscapeRule {
    /// Saddle rule: leaving `[−2, 2]²`, or leaving `R₁` after having been
    /// in it.
    SaddleR1,
    /// Leaving the closed ball of `radius` around `center`.
    Radius { center: Point, radius: f64 },
}

/// Grid points of `window` (spacing `grid_h`, anchored at the lower
/// corner) whose forward orbit does not escape within `horizon` steps.
///
/// The saddle flow is integrated with [`IntegratorConfig::scan`]: only the
/// escape pattern is needed and each grid point costs `horizon` maps. The
/// comb is deepened to `horizon + log₂(1/grid_h) + 4` levels when it is
/// shallower: a comb truncated at `N` levels is carried off itself once
/// its grid-visible teeth have been halved past level `N`.
/// The result has resolution `grid_h`.
pub fn stable_set_scan(
    sys: &DynSystem,
    window: &ScanWindow,
    grid_h: f64,
    horizon: u32,
    rule: &EscapeRule,
) -> Result<PointCloud> {
    let tag = sys
        .space()
        .ok_or_else(|| Error::SpaceMismatch(alloc::format!("{} has no point phase space", sys.id())))?;
    if window.dim() != tag.dim() {
        return Err(Error::SpaceMismatch(alloc::format!(
            "{}-dimensional window for a {}-dimensional space",
            window.dim(),
            tag.dim()
        )));
    }
    if !(grid_h > 0.0 && grid_h.is_finite()) {
        return Err(Error::Domain(alloc::format!("grid spacing must be positive, got {grid_h}")));
    }
    if let EscapeRule::SaddleR1 = rule {
        if sys.saddle().is_none() {
            return Err(Error::Precondition("the R1 escape rule applies to the saddle".into()));
        }
    }
    let metric = Metric::natural(tag);
    let scan_saddle = |s: &Saddle| -> Result<Saddle> {
        let g = &s.geometry;
        // teeth coarser than the grid reach level log2(1/grid_h)
        let mut grid_levels = 0usize;
        while grid_levels < 1000 && crate::fmath::powi(0.5, grid_levels as i32) > grid_h {
            grid_levels += 1;
        }
        let levels = g.levels().max(horizon as usize + grid_levels + EXTRA_LEVELS);
        let geometry = EGeometry::new(levels, g.per_level(), g.include_limit_segments())?;
        Saddle::new(geometry, IntegratorConfig::scan())
    };
    let scan_sys = match sys {
        DynSystem::IrregularSaddle2d(s) => DynSystem::IrregularSaddle2d(scan_saddle(s)?),
        DynSystem::IrregularSaddle3d(s) => DynSystem::IrregularSaddle3d(scan_saddle(s)?),
        other => other.clone(),
    };
    let dim = tag.dim();
    let mut counts = [1usize; 3];
    for (a, count) in counts.iter_mut().enumerate().take(dim) {
        let n = floor((window.hi(a) - window.lo(a)) / grid_h + 1e-9) as usize + 1;
        if n > MAX_SCAN_AXIS + 1 {
            return Err(Error::Precondition(alloc::format!(
                "{n} grid points on axis {a}; at most {} intervals per axis",
                MAX_SCAN_AXIS
            )));
        }
        *count = n;
    }
    let survives = |p: &Point| -> Result<bool> {
        let mut q = *p;
        let mut seen_r1 = in_r1(q.x(), q.y());
        for _ in 0..horizon {
            q = scan_sys.eval(&q, Direction::Forward)?;
            match rule {
                EscapeRule::SaddleR1 => {
                    if q.x().abs() > SADDLE_BOUND || q.y().abs() > SADDLE_BOUND {
                        return Ok(false);
                    }
                    let inside = in_r1(q.x(), q.y());
                    if seen_r1 && !inside {
                        return Ok(false);
                    }
                    seen_r1 |= inside;
                }
                EscapeRule::Radius { center, radius } => {
                    if metric.dist(center, &q) > *radius {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    };
    let mut kept = Vec::new();
    for k in 0..counts[0] * counts[1] * counts[2] {
        let idx = [k % counts[0], (k / counts[0]) % counts[1], k / (counts[0] * counts[1])];
        let mut c = [0.0; 3];
        for a in 0..dim {
            c[a] = window.lo(a) + idx[a] as f64 * grid_h;
        }
        let Some(p) = grid_point(tag, &c[..dim]) else {
            continue;
        };
        if survives(&p)? {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return PointCloud::empty(tag, grid_h);
    }
    PointCloud::new(kept, grid_h)
}

/// Number of `tol`-chain components of `{a ∈ A : dist(a, B) ≤ tol}`.
///
/// Two or more components flag a pair of continua meeting in more than
/// one place.
pub fn cluster_intersections(a: &ContinuumApprox, b: &ContinuumApprox, tol: f64) -> Result<usize> {
    if a.tag() != b.tag() {
        return Err(Error::SpaceMismatch("chains live in different spaces".into()));
    }
    let need = 2.0 * a.gap_bound().max(b.gap_bound());
    if !(tol >= need) {
        return Err(Error::Precondition(alloc::format!(
            "tolerance {tol} is below twice the larger gap bound ({need})"
        )));
    }
    let metric = Metric::natural(a.tag());
    let index = GridIndex::new(b.points(), metric, tol.max(GridIndex::suggested_cell(b.points(), tol)));
    let near: Vec<Point> = a
        .points()
        .iter()
        .filter(|p| index.nearest(p).is_some_and(|(_, d)| d <= tol))
        .copied()
        .collect();
    Ok(chain_components_of(&near, tol, metric).len())
}
