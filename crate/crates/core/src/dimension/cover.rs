use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::Chart;
use crate::fmath::{floor, sqrt};
use crate::metric::PointCloud;
use crate::{Error, Result};

/// Axis-aligned open box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenBox {
    dim: usize,
    center: [f64; 3],
    half: [f64; 3],
}

impl OpenBox {
    pub fn new(center: &[f64], half_extents: &[f64]) -> Result<OpenBox> {
        let dim = center.len();
        if !(1..=3).contains(&dim) || half_extents.len() != dim {
            return Err(Error::Domain(alloc::format!(
                "box needs matching center/half-extent lengths in 1..=3, got {} and {}",
                center.len(),
                half_extents.len()
            )));
        }
        if half_extents.iter().any(|h| !(h.is_finite() && *h > 0.0)) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("box extents must be positive and finite".into()));
        }
        let mut c = [0.0; 3];
        let mut h = [0.0; 3];
        c[..dim].copy_from_slice(center);
        h[..dim].copy_from_slice(half_extents);
        Ok(OpenBox {
            dim,
            center: c,
            half: h,
        })
    }

    pub(crate) fn from_bounds(dim: usize, lo: [f64; 3], hi: [f64; 3]) -> OpenBox {
        let mut center = [0.0; 3];
        let mut half = [0.0; 3];
        for a in 0..dim {
            center[a] = 0.5 * (lo[a] + hi[a]);
            half[a] = 0.5 * (hi[a] - lo[a]);
        }
        OpenBox { dim, center, half }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self) -> &[f64] {
        &self.center[..self.dim]
    }

    pub fn half_extents(&self) -> &[f64] {
        &self.half[..self.dim]
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.center[axis] - self.half[axis]
    }

    pub fn hi(&self, axis: usize) -> f64 {
        self.center[axis] + self.half[axis]
    }

    /// `2 ‖half_extents‖`.
    pub fn diameter(&self) -> f64 {
        2.0 * sqrt(self.half_extents().iter().map(|h| h * h).sum())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.dim).all(|a| (x[a] - self.center[a]).abs() < self.half[a])
    }

    /// Whether the closed Euclidean ball of radius `r` around `x` lies inside.
    pub fn contains_ball(&self, x: &[f64], r: f64) -> bool {
        (0..self.dim).all(|a| (x[a] - self.center[a]).abs() + r < self.half[a])
    }

    pub fn intersects(&self, other: &OpenBox) -> bool {
        (0..self.dim).all(|a| (self.center[a] - other.center[a]).abs() < self.half[a] + other.half[a])
    }

    /// Intersection with `other`, if nonempty.
    pub fn clip(&self, other: &OpenBox) -> Option<OpenBox> {
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for a in 0..self.dim {
            lo[a] = self.lo(a).max(other.lo(a));
            hi[a] = self.hi(a).min(other.hi(a));
            if !(lo[a] < hi[a]) {
                return None;
            }
        }
        Some(OpenBox::from_bounds(self.dim, lo, hi))
    }
}

/// Finite family of open boxes in the coordinates of a [`Chart`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    boxes: Vec<OpenBox>,
    chart: Chart,
}

impl Cover {
    pub fn new(boxes: Vec<OpenBox>, chart: Chart) -> Result<Cover> {
        if let Some(b) = boxes.first() {
            if boxes.iter().any(|x| x.dim != b.dim) {
                return Err(Error::Domain("cover mixes box dimensions".into()));
            }
        }
        Ok(Cover { boxes, chart })
    }

    /// Boxes in the identity chart.
    pub fn from_boxes(boxes: Vec<OpenBox>) -> Result<Cover> {
        Cover::new(boxes, Chart::Identity)
    }

    pub fn boxes(&self) -> &[OpenBox] {
        &self.boxes
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn mesh(&self) -> f64 {
        mesh(self)
    }

    pub fn order(&self) -> usize {
        cover_order(self)
    }

    /// Every sample lies in some box.
    pub fn covers(&self, cloud: &PointCloud) -> bool {
        self.covers_balls(cloud, None)
    }

    /// Every closed `h`-ball around a sample lies in a single box, so the
    /// cover contains the whole represented set.
    pub fn covers_with_resolution(&self, cloud: &PointCloud) -> bool {
        self.covers_balls(cloud, Some(cloud.resolution_h()))
    }

    fn covers_balls(&self, cloud: &PointCloud, r: Option<f64>) -> bool {
        let Ok(pts) = self.chart.lift(cloud) else {
            return false;
        };
        if pts.is_empty() {
            return true;
        }
        if self.boxes.first().map(|b| b.dim) != pts.first().map(|p| p.tag().dim()) {
            return false;
        }
        let index = BoxIndex::new(&self.boxes);
        pts.iter().all(|p| {
            index.any(p.coords(), |b| match r {
                Some(r) => b.contains_ball(p.coords(), r),
                None => b.contains(p.coords()),
            })
        })
    }
}

/// Boxes bucketed on a grid whose cell is at least the widest box, so a
/// point only needs the boxes registered in its own cell.
struct BoxIndex<'a> {
    boxes: &'a [OpenBox],
    cell: f64,
    cells: BTreeMap<[i64; 3], Vec<u32>>,
}

impl<'a> BoxIndex<'a> {
    fn new(boxes: &'a [OpenBox]) -> BoxIndex<'a> {
        let widest = boxes
            .iter()
            .flat_map(|b| b.half_extents().iter().map(|h| 2.0 * h))
            .fold(0.0, f64::max);
        let cell = if widest > 0.0 { widest } else { 1.0 };
        let mut cells: BTreeMap<[i64; 3], Vec<u32>> = BTreeMap::new();
        for (i, b) in boxes.iter().enumerate() {
            let mut lo = [0i64; 3];
            let mut hi = [0i64; 3];
            for a in 0..b.dim {
                lo[a] = floor(b.lo(a) / cell) as i64;
                hi[a] = floor(b.hi(a) / cell) as i64;
            }
            for k0 in lo[0]..=hi[0] {
                for k1 in lo[1]..=hi[1] {
                    for k2 in lo[2]..=hi[2] {
                        cells.entry([k0, k1, k2]).or_default().push(i as u32);
                    }
                }
            }
        }
        BoxIndex { boxes, cell, cells }
    }

    fn any(&self, x: &[f64], mut f: impl FnMut(&OpenBox) -> bool) -> bool {
        let mut key = [0i64; 3];
        for (a, v) in x.iter().enumerate() {
            key[a] = floor(v / self.cell) as i64;
        }
        self.cells
            .get(&key)
            .is_some_and(|list| list.iter().any(|&i| f(&self.boxes[i as usize])))
    }
}

/// Largest box diameter; an empty cover has mesh 0.
pub fn mesh(cover: &Cover) -> f64 {
    cover.boxes.iter().map(OpenBox::diameter).fold(0.0, f64::max)
}

/// Order of the cover: maximum number of boxes sharing a point, minus one.
///
/// Computed exactly on the arrangement induced by the box faces: along
/// each axis the distinct face coordinates cut space into cells and the
/// depth is evaluated at one interior probe per cell. An empty cover has
/// order 0.
pub fn cover_order(cover: &Cover) -> usize {
    let refs: Vec<&OpenBox> = cover.boxes.iter().collect();
    let dim = cover.boxes.first().map(|b| b.dim).unwrap_or(1);
    max_depth(&refs, 0, dim).saturating_sub(1)
}

pub(crate) fn max_depth(boxes: &[&OpenBox], axis: usize, dim: usize) -> usize {
    if boxes.len() <= 1 {
        return boxes.len();
    }
    if axis + 1 == dim {
        // ends sort before starts at equal coordinates: boxes are open
        let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * boxes.len());
        for b in boxes {
            events.push((b.lo(axis), 1));
            events.push((b.hi(axis), -1));
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut depth = 0i32;
        let mut best = 0i32;
        for (_, d) in events {
            depth += d;
            best = best.max(depth);
        }
        return best as usize;
    }
    let n = boxes.len();
    let mut by_lo: Vec<usize> = (0..n).collect();
    by_lo.sort_by(|&x, &y| boxes[x].lo(axis).total_cmp(&boxes[y].lo(axis)));
    let mut by_hi: Vec<usize> = (0..n).collect();
    by_hi.sort_by(|&x, &y| boxes[x].hi(axis).total_cmp(&boxes[y].hi(axis)));
    let mut cuts: Vec<f64> = Vec::with_capacity(2 * n);
    for b in boxes {
        cuts.push(b.lo(axis));
        cuts.push(b.hi(axis));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut best = 0;
    let mut active: Vec<usize> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    let (mut next_lo, mut next_hi) = (0, 0);
    let mut slab: Vec<&OpenBox> = Vec::new();
    for w in cuts.windows(2) {
        let probe = 0.5 * (w[0] + w[1]);
        while next_lo < n && boxes[by_lo[next_lo]].lo(axis) < probe {
            let b = by_lo[next_lo];
            slot[b] = active.len();
            active.push(b);
            next_lo += 1;
        }
        while next_hi < n && boxes[by_hi[next_hi]].hi(axis) <= probe {
            let b = by_hi[next_hi];
            if slot[b] != usize::MAX {
                let k = slot[b];
                active.swap_remove(k);
                if k < active.len() {
                    slot[active[k]] = k;
                }
                slot[b] = usize::MAX;
            }
            next_hi += 1;
        }
        if active.len() > best {
            slab.clear();
            slab.extend(active.iter().map(|&b| boxes[b]));
            best = best.max(max_depth(&slab, axis + 1, dim));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2(cx: f64, cy: f64, hx: f64, hy: f64) -> OpenBox {
        OpenBox::new(&[cx, cy], &[hx, hy]).unwrap()
    }

    #[test]
    fn unit_cube_mesh() {
        let c = Cover::from_boxes(vec![OpenBox::new(&[0.0; 3], &[0.5; 3]).unwrap()]).unwrap();
        assert!((mesh(&c) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mesh_is_max_diameter() {
        let c = Cover::from_boxes(vec![
            OpenBox::new(&[0.0], &[0.05]).unwrap(),
            OpenBox::new(&[2.0], &[0.15]).unwrap(),
        ])
        .unwrap();
        assert!((mesh(&c) - 0.3).abs() < 1e-12);
        assert_eq!(mesh(&Cover::from_boxes(vec![]).unwrap()), 0.0);
    }

    #[test]
    fn order_examples() {
        let disjoint = Cover::from_boxes(vec![b2(0.0, 0.0, 0.5, 0.5), b2(1.0, 0.0, 0.5, 0.5)]).unwrap();
        assert_eq!(cover_order(&disjoint), 0, "touching open boxes do not overlap");
        let two = Cover::from_boxes(vec![b2(0.0, 0.0, 0.6, 0.5), b2(1.0, 0.0, 0.6, 0.5)]).unwrap();
        assert_eq!(cover_order(&two), 1);
        let k = 7;
        let star = Cover::from_boxes(
            (0..k)
                .map(|i| b2(0.1 * i as f64, -0.05 * i as f64, 0.1 * i as f64 + 0.01, 1.0))
                .collect(),
        )
        .unwrap();
        assert_eq!(cover_order(&star), k - 1);
    }

    #[test]
    fn ball_containment_is_strict() {
        let b = b2(0.0, 0.0, 1.0, 1.0);
        assert!(b.contains_ball(&[0.5, 0.0], 0.49));
        assert!(!b.contains_ball(&[0.5, 0.0], 0.5));
    }
}
