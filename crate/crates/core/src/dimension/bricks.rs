use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{check_epsilon, Chart, Cover, OpenBox};
use crate::fmath::{floor, sqrt};
use crate::metric::{Point, PointCloud};
use crate::{Error, Result};

/// Brick sizes tried by the estimator, as fractions of the largest brick.
pub const BRICK_SCALES: [f64; 3] = [1.0, 0.75, 0.5];

/// Scale and global offset of a staggered brick pattern.
///
/// Bit `a` of `offset_bits` shifts the whole pattern by half a brick along
/// axis `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrickLayout {
    pub scale_index: usize,
    pub offset_bits: u8,
}

impl BrickLayout {
    /// All layouts for an ambient dimension, in a fixed order.
    pub fn all(dim: usize) -> impl Iterator<Item = BrickLayout> {
        (0..BRICK_SCALES.len()).flat_map(move |scale_index| {
            (0..1u8 << dim).map(move |offset_bits| BrickLayout {
                scale_index,
                offset_bits,
            })
        })
    }
}

pub(crate) fn margin(epsilon: f64, h: f64) -> f64 {
    (epsilon / 20.0).max(1.05 * h)
}

/// Staggered brick cover of `c` with the default layout.
pub fn brick_cover(c: &PointCloud, epsilon: f64) -> Result<Cover> {
    brick_cover_with(c, epsilon, BrickLayout { scale_index: 0, offset_bits: 0 })
}

/// Staggered brick cover of `c`; bricks not meeting the cloud are dropped.
///
/// Rows along `y` are shifted by half a brick in `x` on odd rows; in 3D odd
/// layers along `z` are further shifted by a quarter brick in `x` and half
/// a brick in `y`. Each brick is enlarged by a margin of
/// `max(λε/20, 1.05 h)`, `λ` the layout scale, so every sample ball sits
/// inside one box.
///
/// The order is at most the ambient dimension while the margin is λε/20,
/// that is for `h ≤ λε/21`. Coarser clouds still get a valid cover, possibly
/// of higher order.
pub fn brick_cover_with(c: &PointCloud, epsilon: f64, layout: BrickLayout) -> Result<Cover> {
    check_epsilon(c, epsilon)?;
    let chart = Chart::for_cloud(c, epsilon)?;
    let pts = chart.lift(c)?;
    let dim = chart.target_dim(c.tag());
    let scale = *BRICK_SCALES
        .get(layout.scale_index)
        .ok_or_else(|| Error::Domain(alloc::format!("no brick scale {}", layout.scale_index)))?;
    let boxes = bricks(&pts, dim, c.resolution_h(), epsilon, scale, layout.offset_bits).ok_or_else(|| {
        Error::Precondition(alloc::format!("epsilon = {epsilon} leaves no room for bricks at scale {scale}"))
    })?;
    Cover::new(boxes, chart)
}

struct Pattern {
    dim: usize,
    side: f64,
    origin: [f64; 3],
}

impl Pattern {
    /// Lower corner of brick `(l, j, i)` (layer, row, column).
    fn corner(&self, key: [i64; 3]) -> [f64; 3] {
        let s = self.side;
        let [l, j, i] = key;
        let lodd = l.rem_euclid(2) as f64;
        let jodd = j.rem_euclid(2) as f64;
        let mut lo = [0.0; 3];
        if self.dim == 3 {
            lo[2] = self.origin[2] + l as f64 * s;
        }
        lo[1] = self.origin[1] + lodd * 0.5 * s + j as f64 * s;
        lo[0] = self.origin[0] + jodd * 0.5 * s + lodd * 0.25 * s + i as f64 * s;
        lo
    }

    fn span(&self, lo: f64, hi: f64, origin: f64) -> core::ops::RangeInclusive<i64> {
        (floor((lo - origin) / self.side) as i64)..=(floor((hi - origin) / self.side) as i64)
    }

    /// Keys of bricks whose closed cell meets `[x − r, x + r]`.
    fn touching(&self, x: &[f64], r: f64, out: &mut BTreeSet<[i64; 3]>) {
        let s = self.side;
        let layers = if self.dim == 3 {
            self.span(x[2] - r, x[2] + r, self.origin[2])
        } else {
            0..=0
        };
        for l in layers {
            let lodd = l.rem_euclid(2) as f64;
            for j in self.span(x[1] - r, x[1] + r, self.origin[1] + lodd * 0.5 * s) {
                let jodd = j.rem_euclid(2) as f64;
                let ox = self.origin[0] + jodd * 0.5 * s + lodd * 0.25 * s;
                for i in self.span(x[0] - r, x[0] + r, ox) {
                    out.insert([l, j, i]);
                }
            }
        }
    }
}

pub(crate) fn bricks(
    pts: &[Point],
    dim: usize,
    h: f64,
    epsilon: f64,
    scale: f64,
    offset_bits: u8,
) -> Option<Vec<OpenBox>> {
    let m = margin(scale * epsilon, h);
    let side = scale * epsilon / sqrt(dim as f64) * (1.0 - 1e-9) - 2.0 * m;
    // reduced scales only help while bricks are wider than their margins
    if !(side > 0.0) || (scale < 1.0 && side < m) {
        return None;
    }
    let mut origin = [0.0; 3];
    for (a, o) in origin.iter_mut().enumerate().take(dim) {
        if offset_bits >> a & 1 == 1 {
            *o = 0.5 * side;
        }
    }
    let pattern = Pattern { dim, side, origin };
    let mut keys = BTreeSet::new();
    for p in pts {
        pattern.touching(p.coords(), h + m, &mut keys);
    }
    let boxes = keys
        .into_iter()
        .map(|k| {
            let lo = pattern.corner(k);
            let mut blo = [0.0; 3];
            let mut bhi = [0.0; 3];
            for a in 0..dim {
                blo[a] = lo[a] - m;
                bhi[a] = lo[a] + side + m;
            }
            OpenBox::from_bounds(dim, blo, bhi)
        })
        .collect();
    Some(boxes)
}
