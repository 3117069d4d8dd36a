use alloc::vec::Vec;

use super::{Metric, Point, SpaceTag};
use crate::{Error, Result, ABS_TOL};

/// Finite sample of a compact set.
///
/// `resolution_h` is the sampling claim: every point of the represented set
/// lies within `h` of some sample.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    tag: SpaceTag,
    points: Vec<Point>,
    resolution_h: f64,
}

fn check_h(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!("resolution must be positive, got {h}")))
    }
}

impl PointCloud {
    /// Nonempty cloud of points sharing one space tag.
    pub fn new(points: Vec<Point>, resolution_h: f64) -> Result<PointCloud> {
        check_h(resolution_h)?;
        let tag = points.first().ok_or(Error::Empty)?.tag();
        if let Some(p) = points.iter().find(|p| p.tag() != tag) {
            return Err(Error::SpaceMismatch(alloc::format!(
                "cloud mixes {} and {} points",
                tag.name(),
                p.tag().name()
            )));
        }
        Ok(PointCloud {
            tag,
            points,
            resolution_h,
        })
    }

    /// An explicitly empty cloud.
    pub fn empty(tag: SpaceTag, resolution_h: f64) -> Result<PointCloud> {
        check_h(resolution_h)?;
        Ok(PointCloud {
            tag,
            points: Vec::new(),
            resolution_h,
        })
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn resolution_h(&self) -> f64 {
        self.resolution_h
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::Empty)
        } else {
            Ok(())
        }
    }
}

impl<'a> IntoIterator for &'a PointCloud {
    type Item = &'a Point;
    type IntoIter = core::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Ordered chain of points with bounded consecutive gaps, standing in for
/// a continuum.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumApprox {
    chain: Vec<Point>,
    gap_bound: f64,
}

impl ContinuumApprox {
    /// Validates that consecutive points are at most `gap_bound` apart in
    /// the natural metric of their space.
    pub fn new(chain: Vec<Point>, gap_bound: f64) -> Result<ContinuumApprox> {
        check_h(gap_bound)?;
        let tag = chain.first().ok_or(Error::Empty)?.tag();
        let metric = Metric::natural(tag);
        for w in chain.windows(2) {
            if w[1].tag() != tag {
                return Err(Error::SpaceMismatch("chain mixes spaces".into()));
            }
            let d = metric.dist(&w[0], &w[1]);
            if d > gap_bound + ABS_TOL {
                return Err(Error::Precondition(alloc::format!(
                    "chain gap {d} exceeds bound {gap_bound}"
                )));
            }
        }
        Ok(ContinuumApprox { chain, gap_bound })
    }

    pub(crate) fn from_parts_unchecked(chain: Vec<Point>, gap_bound: f64) -> ContinuumApprox {
        ContinuumApprox { chain, gap_bound }
    }

    /// Chart segment from `p` to `q` sampled so that gaps are at most `max_gap`.
    pub fn segment(p: Point, q: Point, max_gap: f64) -> Result<ContinuumApprox> {
        check_h(max_gap)?;
        if p.tag() != q.tag() {
            return Err(Error::SpaceMismatch("segment endpoints in different spaces".into()));
        }
        let len = Metric::natural(p.tag()).dist(&p, &q);
        let n = crate::fmath::ceil(len / max_gap).max(1.0) as usize;
        let mut chain = Vec::with_capacity(n + 1);
        for i in 0..=n {
            chain.push(p.lerp(&q, i as f64 / n as f64));
        }
        // annulus lerp is polar, so recheck rather than trust the chord length
        let gap = chain
            .windows(2)
            .map(|w| Metric::natural(p.tag()).dist(&w[0], &w[1]))
            .fold(0.0, f64::max);
        Ok(ContinuumApprox {
            chain,
            gap_bound: max_gap.max(gap),
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.chain
    }

    pub fn into_points(self) -> Vec<Point> {
        self.chain
    }

    pub fn gap_bound(&self) -> f64 {
        self.gap_bound
    }

    pub fn tag(&self) -> SpaceTag {
        self.chain[0].tag()
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Largest consecutive distance actually present.
    pub fn max_gap(&self) -> f64 {
        let m = Metric::natural(self.tag());
        self.chain
            .windows(2)
            .map(|w| m.dist(&w[0], &w[1]))
            .fold(0.0, f64::max)
    }

    /// The chain as a cloud. A chain with gaps `g` represents its continuum
    /// with resolution `g / 2`.
    pub fn to_cloud(&self) -> PointCloud {
        PointCloud {
            tag: self.tag(),
            points: self.chain.clone(),
            resolution_h: (self.gap_bound / 2.0).max(f64::MIN_POSITIVE),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cloud_rejects_mixed_tags() {
        let r = PointCloud::new(vec![Point::plane2(0.0, 0.0), Point::torus2(0.0, 0.0)], 0.1);
        assert!(matches!(r, Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn empty_cloud_must_be_explicit() {
        assert_eq!(PointCloud::new(vec![], 0.1), Err(Error::Empty));
        assert!(PointCloud::empty(SpaceTag::Plane2, 0.1).unwrap().is_empty());
    }

    #[test]
    fn chain_gap_checked() {
        let pts = vec![Point::plane2(0.0, 0.0), Point::plane2(0.5, 0.0)];
        assert!(ContinuumApprox::new(pts.clone(), 0.1).is_err());
        assert!(ContinuumApprox::new(pts, 0.5).is_ok());
    }

    #[test]
    fn segment_respects_gap() {
        let c = ContinuumApprox::segment(Point::plane2(0.0, 0.0), Point::plane2(1.0, 0.0), 0.01)
            .unwrap();
        assert_eq!(c.len(), 101);
        assert!(c.max_gap() <= 0.01 + 1e-12);
    }
}
