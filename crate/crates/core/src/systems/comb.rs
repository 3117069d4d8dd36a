//! The comb continuum `E` and the distance function `ρ = dist(·, E)`.

use alloc::vec::Vec;

use crate::fmath::{hypot, powi};
use crate::metric::{Point, PointCloud};
use crate::{Error, Result};

/// Truncation parameters of `E`.
///
/// Level 1 consists of the vertical segments `C(a) = {a} × [0, a]` with
/// `a = 1/2 + 2^{-i}`, `i = 1..=I`; level `n + 1` is level `n` scaled by
/// one half. The limit segments `C(2^{-n})` are the accumulation segments
/// of each level, and the base `[0, 1] × {0}` is always present.
#[derive(Clone, Debug, PartialEq)]
pub struct EGeometry {
    levels: usize,
    per_level: usize,
    include_limit_segments: bool,
    /// Sorted, deduplicated abscissas of all vertical segments.
    abscissas: Vec<f64>,
}

/// Which part of `E` a segment belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    Base,
    Tooth { level: usize, index: usize },
    Limit { level: usize },
}

/// A segment of `E` from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ESegment {
    pub kind: SegmentKind,
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl Default for EGeometry {
    fn default() -> Self {
        EGeometry::new(40, 40, true).expect("default geometry is valid")
    }
}

impl EGeometry {
    pub fn new(levels: usize, per_level: usize, include_limit_segments: bool) -> Result<EGeometry> {
        if levels == 0 || per_level == 0 {
            return Err(Error::Domain("E needs at least one level and one tooth per level".into()));
        }
        if levels > 1000 || per_level > 1000 {
            return Err(Error::Resource(alloc::format!(
                "E with {levels} levels of {per_level} teeth is beyond double precision"
            )));
        }
        let mut abscissas = Vec::with_capacity(levels * (per_level + 1));
        for n in 1..=levels {
            let scale = powi(0.5, n as i32 - 1);
            for i in 1..=per_level {
                abscissas.push(scale * (0.5 + powi(0.5, i as i32)));
            }
            if include_limit_segments {
                abscissas.push(scale * 0.5);
            }
        }
        abscissas.sort_by(f64::total_cmp);
        abscissas.dedup();
        Ok(EGeometry {
            levels,
            per_level,
            include_limit_segments,
            abscissas,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn per_level(&self) -> usize {
        self.per_level
    }

    pub fn include_limit_segments(&self) -> bool {
        self.include_limit_segments
    }

    /// Abscissas (equal to heights) of the vertical segments, ascending.
    pub fn abscissas(&self) -> &[f64] {
        &self.abscissas
    }

    /// Level-`n` abscissas `2^{1-n} (1/2 + 2^{-i})`, `i = 1..=I`.
    pub fn level_abscissas(&self, n: usize) -> Vec<f64> {
        let scale = powi(0.5, n as i32 - 1);
        (1..=self.per_level).map(|i| scale * (0.5 + powi(0.5, i as i32))).collect()
    }

    /// Distance from the omitted teeth `i > I` of level `n` to the kept
    /// segments: `2^{-n-I}`.
    pub fn truncation_bound(&self, n: usize) -> f64 {
        powi(0.5, (n + self.per_level) as i32)
    }

    /// Bound on `|ρ_truncated − ρ|` over the plane, covering omitted teeth
    /// and omitted levels (which lie in `[0, 2^{-N}]²`).
    pub fn total_truncation_bound(&self) -> f64 {
        let teeth = if self.include_limit_segments {
            self.truncation_bound(1)
        } else {
            powi(0.5, self.per_level as i32 + 1)
        };
        teeth.max(powi(0.5, self.levels as i32))
    }

    /// Explicit segment list: base, then teeth level by level, then limits.
    pub fn segments(&self) -> Vec<ESegment> {
        let mut out = Vec::with_capacity(self.abscissas.len() + 1);
        out.push(ESegment {
            kind: SegmentKind::Base,
            start: [0.0, 0.0],
            end: [1.0, 0.0],
        });
        for n in 1..=self.levels {
            for (k, a) in self.level_abscissas(n).into_iter().enumerate() {
                out.push(ESegment {
                    kind: SegmentKind::Tooth { level: n, index: k + 1 },
                    start: [a, 0.0],
                    end: [a, a],
                });
            }
        }
        if self.include_limit_segments {
            for n in 1..=self.levels {
                let a = powi(0.5, n as i32);
                out.push(ESegment {
                    kind: SegmentKind::Limit { level: n },
                    start: [a, 0.0],
                    end: [a, a],
                });
            }
        }
        out
    }

    /// Whether `p` lies on one of the listed segments (exact test).
    pub fn contains(&self, p: &Point) -> bool {
        self.rho(p) == 0.0
    }

    /// `ρ(p) = dist(p, E)` over the listed segments.
    pub fn rho(&self, p: &Point) -> f64 {
        self.fiber(p.x()).rho(p.y())
    }

    pub(crate) fn fiber(&self, x: f64) -> Fiber<'_> {
        let split = self.abscissas.partition_point(|&a| a <= x);
        Fiber {
            x,
            base_dx: (-x).max(x - 1.0).max(0.0),
            left: split.checked_sub(1).map(|k| self.abscissas[k]),
            right: &self.abscissas[split..],
        }
    }

    /// Samples of every segment at spacing at most `h`, as a plane cloud
    /// with resolution `h` (plus the truncation bound).
    pub fn sample(&self, h: f64) -> Result<PointCloud> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(alloc::format!("sampling resolution must be positive, got {h}")));
        }
        let mut pts = Vec::new();
        let mut push_segment = |s: [f64; 2], e: [f64; 2]| {
            let len = hypot(e[0] - s[0], e[1] - s[1]);
            let k = crate::fmath::ceil(len / h).max(1.0) as usize;
            for j in 0..=k {
                let t = j as f64 / k as f64;
                pts.push(Point::plane2(s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])));
            }
        };
        push_segment([0.0, 0.0], [1.0, 0.0]);
        for &a in &self.abscissas {
            push_segment([a, 0.0], [a, a]);
        }
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts.dedup();
        if pts.len() > 10_000_000 {
            return Err(Error::Resource(alloc::format!("E sample of {} points", pts.len())));
        }
        PointCloud::new(pts, h + self.total_truncation_bound())
    }
}

/// `ρ` restricted to the vertical line through `x`.
///
/// Of the teeth left of `x` only the nearest matters: it is both closer
/// horizontally and at least as tall. To the right, among teeth of height
/// at least `y` the nearest one wins; among shorter ones the squared
/// distance `(a − x)² + (y − a)²` is convex in `a`, so only the neighbours
/// of `a = (x + y)/2` need checking.
pub(crate) struct Fiber<'a> {
    x: f64,
    base_dx: f64,
    left: Option<f64>,
    right: &'a [f64],
}

#[inline]
fn tooth(dx: f64, a: f64, y: f64) -> f64 {
    let dy = if y < 0.0 {
        -y
    } else if y > a {
        y - a
    } else {
        0.0
    };
    if dy == 0.0 {
        dx
    } else if dx == 0.0 {
        dy
    } else {
        hypot(dx, dy)
    }
}

impl Fiber<'_> {
    pub fn rho(&self, y: f64) -> f64 {
        let mut best = if self.base_dx == 0.0 { y.abs() } else { hypot(self.base_dx, y) };
        if let Some(a) = self.left {
            best = best.min(tooth(self.x - a, a, y));
        }
        let r = self.right;
        if let Some(&a) = r.first() {
            best = best.min(tooth(a - self.x, a, y));
            if y > a {
                let tall = r.partition_point(|&b| b < y);
                if let Some(&b) = r.get(tall) {
                    best = best.min(tooth(b - self.x, b, y));
                }
                let k = r[..tall].partition_point(|&b| b < 0.5 * (self.x + y));
                for &b in &r[k.saturating_sub(1)..(k + 1).min(tall)] {
                    best = best.min(tooth(b - self.x, b, y));
                }
            }
        }
        best
    }
}
