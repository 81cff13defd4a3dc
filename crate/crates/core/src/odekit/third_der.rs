//! m·x + ḃ·x − b·ẋ = g with x quadratic, for the three shapes λt, λt+1, t².

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::series::{Scalar, TSeries};

/// The admissible shapes of b.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ThirdDerShape {
    /// λ·t with λ ≠ 0.
    Linear(Scalar),
    /// λ·t + 1.
    LinearPlusOne(Scalar),
    /// t².
    Square,
}

impl ThirdDerShape {
    /// Recognizes b among the three shapes.
    pub fn recognize(b: &TSeries) -> Result<Self> {
        let deg = b.degree();
        let c = |k| b.coeff(k).clone();
        let unsupported = || Error::UnsupportedShape(format!("b = {:?} is not λt, λt+1 or t²", b.coeffs()));
        if deg.is_none_or(|d| d > 2) {
            return Err(unsupported());
        }
        if c(2).is_one() && c(1).is_zero() && c(0).is_zero() {
            return Ok(ThirdDerShape::Square);
        }
        if !c(2).is_zero() {
            return Err(unsupported());
        }
        if c(0).is_one() {
            return Ok(ThirdDerShape::LinearPlusOne(c(1)));
        }
        if c(0).is_zero() && !c(1).is_zero() {
            return Ok(ThirdDerShape::Linear(c(1)));
        }
        Err(unsupported())
    }

    pub fn to_series(&self, order: usize) -> TSeries {
        match self {
            ThirdDerShape::Linear(l) => TSeries::monomial(l.clone(), 1, order),
            ThirdDerShape::LinearPlusOne(l) => {
                &TSeries::monomial(l.clone(), 1, order) + &TSeries::one(order)
            }
            ThirdDerShape::Square => TSeries::monomial(Scalar::one(), 2, order),
        }
    }

    /// Coefficients of the map x ↦ m·x + ḃ·x − b·ẋ on (x₀, x₁, x₂).
    fn matrix(&self, m: &Scalar) -> Vec<Vec<Scalar>> {
        let z = Scalar::zero;
        match self {
            ThirdDerShape::Linear(l) => vec![
                vec![m + l, z(), z()],
                vec![z(), m.clone(), z()],
                vec![z(), z(), m - l],
            ],
            ThirdDerShape::LinearPlusOne(l) => vec![
                vec![m + l, Scalar::int(-1), z()],
                vec![z(), m.clone(), Scalar::int(-2)],
                vec![z(), z(), m - l],
            ],
            ThirdDerShape::Square => vec![
                vec![m.clone(), z(), z()],
                vec![Scalar::int(2), m.clone(), z()],
                vec![z(), Scalar::one(), m.clone()],
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ThirdDerVerdict {
    Unique,
    /// Resonant case; solvable because the named condition on g holds.
    SolvableUnderCondition(&'static str),
    /// Resonant case; the named condition fails.
    NoSolution(&'static str),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThirdDerResult {
    pub verdict: ThirdDerVerdict,
    /// (x₀, x₁, x₂); free coordinates set to zero.
    pub x: Option<[Scalar; 3]>,
}

/// Solves the system for quadratic g = g₀ + g₁t + g₂t².
pub fn solve_third_der(m: &Scalar, b: &ThirdDerShape, g: &[Scalar; 3]) -> Result<ThirdDerResult> {
    if m.is_zero() {
        return Err(Error::Precondition("m must be nonzero".into()));
    }
    let cond = match b {
        ThirdDerShape::Square => None,
        ThirdDerShape::Linear(l) if l.is_zero() => {
            return Err(Error::UnsupportedShape("λt needs λ ≠ 0".into()))
        }
        ThirdDerShape::Linear(l) | ThirdDerShape::LinearPlusOne(l) => {
            let linear = matches!(b, ThirdDerShape::Linear(_));
            if m == l {
                Some(("g2 = 0", g[2].is_zero()))
            } else if *m == -l {
                if linear {
                    Some(("g0 = 0", g[0].is_zero()))
                } else {
                    let v = &(&(&(m * m) * &g[0]) + &(m * &g[1])) + &g[2];
                    Some(("m^2 g0 + m g1 + g2 = 0", v.is_zero()))
                }
            } else {
                None
            }
        }
    };
    let sol = linalg::solve(&b.matrix(m), g);
    let (verdict, x) = match (cond, sol) {
        (None, Some(s)) => (ThirdDerVerdict::Unique, Some(s.particular)),
        (Some((c, true)), Some(s)) => (ThirdDerVerdict::SolvableUnderCondition(c), Some(s.particular)),
        (Some((c, false)), None) => (ThirdDerVerdict::NoSolution(c), None),
        (c, s) => unreachable!("case analysis disagrees with elimination: {c:?} vs {:?}", s.is_some()),
    };
    Ok(ThirdDerResult { verdict, x: x.map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]) })
}

/// m·x + ḃ·x − b·ẋ for a residual check.
pub fn third_der_lhs(m: &Scalar, b: &TSeries, x: &TSeries) -> TSeries {
    let n = b.order().min(x.order()).saturating_sub(1);
    let lhs = &(&x.scale(m) + &(&b.derive() * x)) - &(b * &x.derive());
    lhs.truncate(n)
}
