use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// Real polynomial with ascending coefficients; trailing zeros are
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Result<Polynomial> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite polynomial coefficient".into()));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Ok(Polynomial { coeffs })
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: Vec::new() }
    }

    /// `c · Π (x − rᵢ)`.
    pub fn from_roots(c: f64, roots: &[f64]) -> Result<Polynomial> {
        let mut p = Polynomial::new(vec![c])?;
        for r in roots {
            p = &p * &Polynomial::new(vec![-r, 1.0])?;
        }
        Ok(p)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `xᵏ` (zero beyond the degree).
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        Polynomial { coeffs }
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect()).unwrap_or_else(|_| Polynomial::zero())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coefficient(k) - rhs.coefficient(k)).collect();
        Polynomial::new(coeffs).unwrap_or_else(|_| Polynomial::zero())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs).unwrap_or_else(|_| Polynomial::zero())
    }
}

/// Exact polynomial over ℚ, ascending and trimmed.
#[derive(Clone, Debug)]
struct QPoly(Vec<BigRational>);

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(alloc::format!("{x} is not a finite number")))
}

impl QPoly {
    fn from_poly(p: &Polynomial) -> Result<QPoly> {
        Ok(QPoly(p.coeffs.iter().map(|c| rational(*c)).collect::<Result<_>>()?))
    }

    fn trim(mut self) -> QPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn derivative(&self) -> QPoly {
        QPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
        .trim()
    }

    /// Remainder of division by a nonzero `d`.
    fn rem(&self, d: &QPoly) -> QPoly {
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = d.0.last().expect("nonzero divisor");
        while r.len() >= dl {
            let q = r.last().expect("nonempty") / lead;
            let shift = r.len() - dl;
            for (k, c) in d.0.iter().enumerate() {
                r[shift + k] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        QPoly(r).trim()
    }

    /// Quotient by `x − a`, assuming `a` is a root.
    fn deflate(&self, a: &BigRational) -> QPoly {
        let n = self.0.len();
        let mut q = vec![BigRational::zero(); n - 1];
        let mut carry = BigRational::zero();
        for k in (1..n).rev() {
            carry = &self.0[k] + carry * a;
            q[k - 1] = carry.clone();
        }
        QPoly(q).trim()
    }

    fn neg(self) -> QPoly {
        QPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain[chain.len() - 1].is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain.retain(|q| !q.is_zero());
    chain
}

fn sign_changes(chain: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots of `p` in the closed interval `[a, b]`,
/// computed exactly.
///
/// Coefficients and endpoints are taken as the rationals they represent.
/// Endpoint roots are divided out before the Sturm count and added back,
/// so no perturbation is needed.
pub fn sturm_root_count(p: &Polynomial, a: f64, b: f64) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial has infinitely many roots".into()));
    }
    if !(a <= b) {
        return Err(Error::Domain(alloc::format!("empty interval [{a}, {b}]")));
    }
    let (ra, rb) = (rational(a)?, rational(b)?);
    let mut q = QPoly::from_poly(p)?;
    let mut at_ends = 0;
    for e in [&ra, &rb] {
        if q.0.len() > 1 && q.eval(e).is_zero() {
            at_ends += 1;
            while q.0.len() > 1 && q.eval(e).is_zero() {
                q = q.deflate(e);
            }
        }
        if ra == rb {
            return Ok(at_ends);
        }
    }
    let chain = sturm_chain(&q);
    Ok(sign_changes(&chain, &ra) - sign_changes(&chain, &rb) + at_ends)
}
