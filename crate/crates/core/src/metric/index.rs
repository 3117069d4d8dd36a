//! Uniform bucket grid for exact nearest-neighbour and fixed-radius
//! queries on point sets.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Metric, Point};
use crate::fmath::floor;

/// Above this many rings a query falls back to a linear scan.
const MAX_RINGS: i64 = 48;

pub(crate) struct GridIndex<'a> {
    points: &'a [Point],
    metric: Metric,
    dim: usize,
    cell: f64,
    /// Cells per axis for periodic spaces.
    period: Option<i64>,
    cells: BTreeMap<[i64; 3], Vec<u32>>,
    lo: [i64; 3],
    hi: [i64; 3],
}

impl<'a> GridIndex<'a> {
    pub fn new(points: &'a [Point], metric: Metric, cell_hint: f64) -> GridIndex<'a> {
        let tag = points.first().map(|p| p.tag()).unwrap_or(super::SpaceTag::Plane2);
        let dim = tag.dim();
        let (cell, period) = if tag.is_periodic() {
            let m = floor(1.0 / cell_hint).clamp(1.0, 1e6) as i64;
            (1.0 / m as f64, Some(m))
        } else {
            (cell_hint.max(1e-300), None)
        };
        let mut index = GridIndex {
            points,
            metric,
            dim,
            cell,
            period,
            cells: BTreeMap::new(),
            lo: [i64::MAX; 3],
            hi: [i64::MIN; 3],
        };
        for (i, p) in points.iter().enumerate() {
            let k = index.key(p);
            for a in 0..dim {
                index.lo[a] = index.lo[a].min(k[a]);
                index.hi[a] = index.hi[a].max(k[a]);
            }
            index.cells.entry(k).or_default().push(i as u32);
        }
        index
    }

    /// Typical spacing for `n` points spread over their bounding box.
    pub fn suggested_cell(points: &[Point], floor_value: f64) -> f64 {
        let Some(first) = points.first() else {
            return floor_value;
        };
        let dim = first.tag().dim();
        if first.tag().is_periodic() {
            let per_axis = libm::pow(points.len() as f64, 1.0 / dim as f64);
            return (1.0 / per_axis).max(floor_value);
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in points {
            for a in 0..dim {
                lo[a] = lo[a].min(p.coords()[a]);
                hi[a] = hi[a].max(p.coords()[a]);
            }
        }
        let extent = (0..dim).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);
        let per_axis = libm::pow(points.len() as f64, 1.0 / dim as f64).max(1.0);
        (extent / per_axis).max(floor_value).max(1e-12)
    }

    fn key(&self, p: &Point) -> [i64; 3] {
        let mut k = [0i64; 3];
        let c = p.coords();
        for a in 0..self.dim {
            k[a] = match self.period {
                Some(m) => (floor(c[a] * m as f64) as i64).clamp(0, m - 1),
                None => floor(c[a] / self.cell) as i64,
            };
        }
        k
    }

    fn wrap(&self, mut k: [i64; 3]) -> [i64; 3] {
        if let Some(m) = self.period {
            for v in k.iter_mut().take(self.dim) {
                *v = v.rem_euclid(m);
            }
        }
        k
    }

    /// Visits every cell at Chebyshev key distance exactly `ring` from `center`.
    fn visit_ring(&self, center: [i64; 3], ring: i64, mut f: impl FnMut(&[u32])) {
        let span = |a: usize| if a < self.dim { ring } else { 0 };
        for dx in -span(0)..=span(0) {
            for dy in -span(1)..=span(1) {
                for dz in -span(2)..=span(2) {
                    if dx.abs().max(dy.abs()).max(dz.abs()) != ring {
                        continue;
                    }
                    let k = self.wrap([center[0] + dx, center[1] + dy, center[2] + dz]);
                    if let Some(v) = self.cells.get(&k) {
                        f(v);
                    }
                }
            }
        }
    }

    fn ring_covers_all(&self, center: [i64; 3], ring: i64) -> bool {
        match self.period {
            Some(m) => 2 * ring + 1 >= m,
            None => (0..self.dim).all(|a| center[a] - ring <= self.lo[a] && center[a] + ring >= self.hi[a]),
        }
    }

    /// Exact nearest sample to `q` (lowest index on ties).
    pub fn nearest(&self, q: &Point) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let center = self.key(q);
        let mut best = (usize::MAX, f64::INFINITY);
        let consider = |idx: &[u32], best: &mut (usize, f64)| {
            for &i in idx {
                let d = self.metric.dist(q, &self.points[i as usize]);
                if d < best.1 || (d == best.1 && (i as usize) < best.0) {
                    *best = (i as usize, d);
                }
            }
        };
        let mut ring = 0i64;
        loop {
            if ring > MAX_RINGS || (self.period.is_some() && 2 * ring + 1 >= self.period.unwrap_or(0)) {
                let all: Vec<u32> = (0..self.points.len() as u32).collect();
                consider(&all, &mut best);
                return Some(best);
            }
            self.visit_ring(center, ring, |v| consider(v, &mut best));
            if best.1 <= ring as f64 * self.cell || self.ring_covers_all(center, ring) {
                return Some(best);
            }
            ring += 1;
        }
    }

    /// Calls `f(index, distance)` for every sample within distance `r` of `q`.
    pub fn for_each_within(&self, q: &Point, r: f64, mut f: impl FnMut(usize, f64)) {
        let rings = libm::ceil(r / self.cell) as i64;
        let center = self.key(q);
        let wraps = self.period.map(|m| 2 * rings + 1 >= m).unwrap_or(false);
        if wraps || rings > MAX_RINGS {
            for (i, p) in self.points.iter().enumerate() {
                let d = self.metric.dist(q, p);
                if d <= r {
                    f(i, d);
                }
            }
            return;
        }
        for ring in 0..=rings {
            self.visit_ring(center, ring, |v| {
                for &i in v {
                    let d = self.metric.dist(q, &self.points[i as usize]);
                    if d <= r {
                        f(i as usize, d);
                    }
                }
            });
        }
    }
}
