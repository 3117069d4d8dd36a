//! Finite-horizon dynamical balls on a grid.

use alloc::vec::Vec;

use super::scan::{grid_point, ScanWindow, MAX_GRID_POINTS};
use crate::fmath::{ceil, floor};
use crate::metric::{chain_components_of, diameter_of, Point, PointCloud};
use crate::systems::{Direction, DynSystem};
use crate::{Error, Result};

/// Relative slack keeping window faces that sit on the grid.
const GRID_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DynBallResult {
    pub center: Point,
    pub delta: f64,
    pub horizon: u32,
    pub grid_h: f64,
    /// Grid points (spaced `grid_h`, aligned on the center) whose orbit
    /// stays `δ`-close to the center's; the center comes first.
    pub ball: PointCloud,
    pub diameter: f64,
    /// Components of the ball under `2·grid_h`-chains.
    pub component_count: usize,
    /// The ball reaches the outer grid layer, or the window does not
    /// contain the `δ`-box of the center. The ball may then be truncated.
    pub touches_boundary: bool,
    pub grid_points: usize,
}

/// `Γ_δ^H(x)` sampled on the grid `x + grid_h·ℤᵈ` inside `window`: points
/// with `dist(fⁿx, fⁿy) ≤ δ` for all `|n| ≤ horizon` (forward only for
/// non-invertible maps).
pub fn dynamical_ball(
    sys: &DynSystem,
    x: &Point,
    delta: f64,
    horizon: u32,
    grid_h: f64,
    window: &ScanWindow,
) -> Result<DynBallResult> {
    let metric = sys
        .metric()
        .ok_or_else(|| Error::SpaceMismatch(alloc::format!("{} has no point phase space", sys.id())))?;
    let tag = sys.space().expect("metric implies a space");
    if x.tag() != tag {
        return Err(Error::SpaceMismatch(alloc::format!("center is a {} point", x.tag().name())));
    }
    if window.dim() != tag.dim() {
        return Err(Error::SpaceMismatch(alloc::format!(
            "{}-dimensional window for a {}-dimensional space",
            window.dim(),
            tag.dim()
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(alloc::format!("delta must be positive, got {delta}")));
    }
    if !(grid_h > 0.0 && grid_h < delta / 10.0) {
        return Err(Error::Precondition(alloc::format!(
            "grid spacing {grid_h} must be positive and below delta/10"
        )));
    }
    let dim = tag.dim();
    let xc = x.coords();
    let mut kmin = [0i64; 3];
    let mut kmax = [0i64; 3];
    let mut total: usize = 1;
    for a in 0..dim {
        kmin[a] = ceil((window.lo(a) - xc[a]) / grid_h - GRID_SLACK) as i64;
        kmax[a] = floor((window.hi(a) - xc[a]) / grid_h + GRID_SLACK) as i64;
        if kmin[a] > 0 || kmax[a] < 0 {
            return Err(Error::Precondition("window does not contain the center".into()));
        }
        total = total.saturating_mul((kmax[a] - kmin[a] + 1) as usize);
    }
    if total > MAX_GRID_POINTS {
        return Err(Error::Resource(alloc::format!(
            "ball grid of {total} points exceeds {MAX_GRID_POINTS}"
        )));
    }
    let mut touches = !window.contains_box(xc, delta);

    let invertible = sys.is_invertible();
    let mut fwd = Vec::with_capacity(horizon as usize);
    let mut bwd = Vec::with_capacity(horizon as usize);
    let mut q = *x;
    for _ in 0..horizon {
        q = sys.eval(&q, Direction::Forward)?;
        fwd.push(q);
    }
    if invertible {
        let mut q = *x;
        for _ in 0..horizon {
            q = sys.eval(&q, Direction::Backward)?;
            bwd.push(q);
        }
    }
    let stays = |y: &Point| -> Result<bool> {
        if metric.dist(x, y) > delta {
            return Ok(false);
        }
        for (orbit, dir) in [(&fwd, Direction::Forward), (&bwd, Direction::Backward)] {
            let mut q = *y;
            for target in orbit.iter() {
                q = sys.eval(&q, dir)?;
                if metric.dist(target, &q) > delta {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };

    let mut ball = alloc::vec![*x];
    let mut k = kmin;
    let mut scanned = 0usize;
    loop {
        if k[..dim].iter().any(|v| *v != 0) {
            let mut c = [0.0; 3];
            for a in 0..dim {
                c[a] = xc[a] + k[a] as f64 * grid_h;
            }
            if let Some(y) = grid_point(tag, &c[..dim]) {
                scanned += 1;
                if stays(&y)? {
                    if (0..dim).any(|a| k[a] == kmin[a] || k[a] == kmax[a]) {
                        touches = true;
                    }
                    ball.push(y);
                }
            }
        } else {
            scanned += 1;
        }
        // odometer over the index box
        let mut a = 0;
        loop {
            if a == dim {
                let all: Vec<usize> = (0..ball.len()).collect();
                let diameter = diameter_of(&ball, &all, metric).value;
                let component_count = chain_components_of(&ball, 2.0 * grid_h, metric).len();
                return Ok(DynBallResult {
                    center: *x,
                    delta,
                    horizon,
                    grid_h,
                    ball: PointCloud::new(ball, grid_h)?,
                    diameter,
                    component_count,
                    touches_boundary: touches,
                    grid_points: scanned,
                });
            }
            if k[a] < kmax[a] {
                k[a] += 1;
                break;
            }
            k[a] = kmin[a];
            a += 1;
        }
    }
}
