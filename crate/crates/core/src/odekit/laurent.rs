//! Truncated Laurent series z^shift·s(z), used for valuations in the Fuchs test.

use crate::error::{Error, Result};
use crate::series::{Scalar, TSeries};

/// z^shift · Σ sₖ zᵏ; exact modulo z^(shift + s.order()).
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub shift: i64,
    pub s: TSeries,
}

impl Laurent {
    pub fn new(shift: i64, s: TSeries) -> Self {
        Laurent { shift, s }
    }

    pub fn from_series(s: TSeries) -> Self {
        Laurent { shift: 0, s }
    }

    pub fn zero(precision: i64) -> Self {
        Laurent { shift: 0, s: TSeries::zero(precision.max(0) as usize) }
    }

    /// Absolute precision: terms below z^precision are known.
    pub fn precision(&self) -> i64 {
        self.shift + self.s.order() as i64
    }

    /// Exact valuation, or `None` when zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        self.s.valuation().map(|v| self.shift + v as i64)
    }

    /// Coefficient of zᵏ.
    pub fn coeff(&self, k: i64) -> Scalar {
        if k < self.shift {
            return Scalar::zero();
        }
        self.s.coeff((k - self.shift) as usize).clone()
    }

    /// Re-expand with a smaller shift.
    fn lowered(&self, shift: i64, precision: i64) -> TSeries {
        let n = (precision - shift).max(0) as usize;
        TSeries::from_coeffs((0..n).map(|k| self.coeff(shift + k as i64)).collect(), n)
    }

    pub fn add(&self, o: &Self) -> Self {
        let shift = self.shift.min(o.shift);
        let prec = self.precision().min(o.precision());
        Laurent { shift, s: &self.lowered(shift, prec) + &o.lowered(shift, prec) }
    }

    pub fn neg(&self) -> Self {
        Laurent { shift: self.shift, s: -&self.s }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = self.normalized();
        let b = o.normalized();
        Laurent { shift: a.shift + b.shift, s: &a.s * &b.s }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Laurent { shift: self.shift, s: self.s.scale(c) }
    }

    /// Strip leading zeros so that s(0) ≠ 0 (unless zero).
    pub fn normalized(&self) -> Self {
        match self.s.valuation() {
            Some(v) if v > 0 => Laurent { shift: self.shift + v as i64, s: self.s.unshift(v).expect("valuation") },
            _ => self.clone(),
        }
    }

    pub fn derive(&self) -> Self {
        let n = self.s.order();
        let s = TSeries::from_coeffs(
            (0..n).map(|k| self.s.coeff(k) * &Scalar::int(self.shift + k as i64)).collect(),
            n,
        );
        Laurent { shift: self.shift - 1, s }
    }

    pub fn inv(&self) -> Result<Self> {
        let a = self.normalized();
        if a.s.valuation().is_none() {
            return Err(Error::NotAUnit("Laurent series vanishes to known precision".into()));
        }
        Ok(Laurent { shift: -a.shift, s: a.s.invert_unit()? })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }
}
