//! Local model of a stable/unstable contact of finite order.
//!
//! In a chart around a contact point the stable and unstable sets are the
//! graphs of `g^s` and `g^u`. Points of a small dynamical ball are taken to
//! be the intersections of these graphs, i.e. the roots of `g^u − g^s`
//! near 0. This identification is a modelling assumption: it is what makes
//! the order of contact bound the size of local dynamical balls.

mod poly;

pub use poly::{sturm_root_count, Polynomial};

use crate::{Error, Result, ABS_TOL};

/// Degree-`r` jets of the two graphs on the window `[−δ₁, δ₁]`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPair {
    pub stable: Polynomial,
    pub unstable: Polynomial,
    pub r: usize,
    pub half_window: f64,
}

impl JetPair {
    pub fn new(stable: Polynomial, unstable: Polynomial, r: usize, half_window: f64) -> Result<JetPair> {
        if r == 0 {
            return Err(Error::Domain("jet order r must be at least 1".into()));
        }
        if !(half_window.is_finite() && half_window > 0.0) {
            return Err(Error::Domain(alloc::format!("window half width must be positive, got {half_window}")));
        }
        Ok(JetPair {
            stable,
            unstable,
            r,
            half_window,
        })
    }

    /// `g^u − g^s`.
    pub fn difference(&self) -> Polynomial {
        &self.unstable - &self.stable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangencyOrder {
    /// Lowest degree at which the jets differ.
    Order(usize),
    /// The jets agree through degree `r`.
    ExceedsR,
}

/// Smallest `k ≤ r` whose degree-`k` coefficients differ.
pub fn tangency_order(jp: &JetPair) -> Result<TangencyOrder> {
    let (s0, u0) = (jp.stable.coefficient(0), jp.unstable.coefficient(0));
    if s0.abs() > ABS_TOL || u0.abs() > ABS_TOL {
        return Err(Error::Precondition(alloc::format!(
            "graphs must pass through the origin (g^s(0) = {s0}, g^u(0) = {u0})"
        )));
    }
    Ok((1..=jp.r)
        .find(|&k| jp.stable.coefficient(k) != jp.unstable.coefficient(k))
        .map_or(TangencyOrder::ExceedsR, TangencyOrder::Order))
}

/// Local bound on dynamical-ball size with the root count backing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalBound {
    pub bound: usize,
    /// Distinct roots of `g^u − g^s` in the window.
    pub roots: usize,
}

impl LocalBound {
    pub fn holds(&self) -> bool {
        self.roots <= self.bound
    }
}

/// The contact order `k` as a bound on local dynamical balls, with the
/// Sturm count of `g^u − g^s` on the window. A window wider than the
/// region where the jet dominates may report more roots than `k`.
pub fn local_ball_cardinality_bound(jp: &JetPair) -> Result<LocalBound> {
    let k = match tangency_order(jp)? {
        TangencyOrder::Order(k) => k,
        TangencyOrder::ExceedsR => return Err(Error::Unbounded(jp.r)),
    };
    let roots = sturm_root_count(&jp.difference(), -jp.half_window, jp.half_window)?;
    Ok(LocalBound { bound: k, roots })
}
