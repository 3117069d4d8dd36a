use alloc::vec;
use alloc::vec::Vec;

use super::index::GridIndex;
use super::{Metric, Point, PointCloud, SpaceTag};
use crate::{Error, Result};

/// Sizes up to which Hausdorff distance uses the exhaustive double loop.
const HAUSDORFF_BRUTE_LIMIT: usize = 5_000;
const CHAIN_BRUTE_LIMIT: usize = 1_500;
const DIAMETER_BRUTE_LIMIT: usize = 2_000;

fn check_cloud(c: &PointCloud, metric: Metric) -> Result<()> {
    c.require_nonempty()?;
    metric.check(c.tag())
}

/// `sup_{a ∈ A} inf_{b ∈ B} d(a, b)`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud, metric: Metric) -> Result<f64> {
    check_cloud(a, metric)?;
    check_cloud(b, metric)?;
    if a.tag() != b.tag() {
        return Err(Error::SpaceMismatch("clouds live in different spaces".into()));
    }
    Ok(directed_of(a.points(), b.points(), metric))
}

fn directed_of(a: &[Point], b: &[Point], metric: Metric) -> f64 {
    if a.len().max(b.len()) <= HAUSDORFF_BRUTE_LIMIT {
        a.iter()
            .map(|p| b.iter().map(|q| metric.dist(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    } else {
        let cell = GridIndex::suggested_cell(b, 0.0) * 2.0;
        let index = GridIndex::new(b, metric, cell);
        a.iter()
            .map(|p| index.nearest(p).map(|(_, d)| d).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Hausdorff distance: the larger of the two directed distances.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud, metric: Metric) -> Result<f64> {
    Ok(directed_hausdorff(a, b, metric)?.max(directed_hausdorff(b, a, metric)?))
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so the labelling is order independent
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Maximal `delta`-chain components of `points` as sorted index lists,
/// ordered by their smallest index.
pub(crate) fn chain_components_of(points: &[Point], delta: f64, metric: Metric) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut sets = DisjointSets::new(n);
    if n <= CHAIN_BRUTE_LIMIT {
        for i in 0..n {
            for j in i + 1..n {
                if metric.dist(&points[i], &points[j]) <= delta {
                    sets.union(i, j);
                }
            }
        }
    } else {
        let index = GridIndex::new(points, metric, delta);
        for (i, p) in points.iter().enumerate() {
            index.for_each_within(p, delta, |j, _| {
                if j > i {
                    sets.union(i, j);
                }
            });
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = sets.find(i);
        if label[r] == usize::MAX {
            label[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[label[r]].push(i);
    }
    comps
}

/// Partition of `c` into maximal `delta`-connected components.
pub fn chain_components(c: &PointCloud, delta: f64, metric: Metric) -> Result<Vec<Vec<usize>>> {
    if !(delta > 0.0) {
        return Err(Error::Precondition(alloc::format!("delta must be positive, got {delta}")));
    }
    check_cloud(c, metric)?;
    Ok(chain_components_of(c.points(), delta, metric))
}

/// Diameter together with a pair of indices realizing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DiameterPair {
    pub value: f64,
    pub i: usize,
    pub j: usize,
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
}

/// Indices of the convex hull of planar points (monotone chain).
fn hull_indices(points: &[Point], subset: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_by(|&a, &b| points[a].lex_cmp(&points[b]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: alloc::boxed::Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            alloc::boxed::Box::new(idx.iter())
        } else {
            alloc::boxed::Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && cross(&points[hull[hull.len() - 2]], &points[hull[hull.len() - 1]], &points[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Diameter of the sub-collection `subset` of `points`.
pub(crate) fn diameter_of(points: &[Point], subset: &[usize], metric: Metric) -> DiameterPair {
    let mut best = DiameterPair {
        value: 0.0,
        i: subset.first().copied().unwrap_or(0),
        j: subset.first().copied().unwrap_or(0),
    };
    let planar = metric == Metric::Euclidean
        && matches!(points.first().map(|p| p.tag()), Some(SpaceTag::Plane2 | SpaceTag::Annulus));
    let candidates: Vec<usize> = if planar && subset.len() > DIAMETER_BRUTE_LIMIT {
        hull_indices(points, subset)
    } else {
        subset.to_vec()
    };
    for (a, &i) in candidates.iter().enumerate() {
        for &j in &candidates[a + 1..] {
            let d = metric.dist(&points[i], &points[j]);
            if d > best.value {
                best = DiameterPair { value: d, i, j };
            }
        }
    }
    best
}

/// Largest pairwise distance in a nonempty cloud.
pub fn diameter(c: &PointCloud, metric: Metric) -> Result<f64> {
    check_cloud(c, metric)?;
    let all: Vec<usize> = (0..c.len()).collect();
    Ok(diameter_of(c.points(), &all, metric).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmath::{cos, sin};

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::new(xs.iter().map(|&x| Point::plane2(x, 0.0)).collect(), 0.01).unwrap()
    }

    #[test]
    fn hausdorff_identity_and_directed_example() {
        let a = line(&[0.0]);
        let b = line(&[0.0, 1.0]);
        assert_eq!(hausdorff_distance(&b, &b, Metric::Euclidean).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &b, Metric::Euclidean).unwrap(), 1.0);
        assert_eq!(directed_hausdorff(&a, &b, Metric::Euclidean).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_rejects_empty() {
        let e = PointCloud::empty(SpaceTag::Plane2, 0.1).unwrap();
        assert_eq!(hausdorff_distance(&e, &line(&[0.0]), Metric::Euclidean), Err(Error::Empty));
    }

    #[test]
    fn components_by_gap() {
        let c = line(&[0.0, 0.05, 0.1, 0.5]);
        let comps = chain_components(&c, 0.06, Metric::Euclidean).unwrap();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(chain_components(&line(&[3.0]), 0.1, Metric::Euclidean).unwrap().len(), 1);
    }

    #[test]
    fn diameter_examples() {
        let c = PointCloud::new(vec![Point::plane2(0.0, 0.0), Point::plane2(1.0, 1.0)], 0.1).unwrap();
        assert!((diameter(&c, Metric::Euclidean).unwrap() - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(diameter(&line(&[2.0]), Metric::Euclidean).unwrap(), 0.0);
    }

    #[test]
    fn hull_diameter_agrees_with_pairs() {
        let pts: Vec<Point> = (0..3000)
            .map(|i| {
                let t = i as f64 * 0.002_094_395;
                let r = 1.0 + 0.3 * sin(7.0 * t);
                Point::plane2(r * cos(t), r * sin(t))
            })
            .collect();
        let all: Vec<usize> = (0..pts.len()).collect();
        let fast = diameter_of(&pts, &all, Metric::Euclidean).value;
        let mut brute: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                brute = brute.max(Metric::Euclidean.dist(&pts[i], &pts[j]));
            }
        }
        assert_eq!(fast, brute);
    }
}
