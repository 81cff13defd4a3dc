//! Truncated power series in one variable with exact coefficients.
//!
//! Used for series in t₂ and, where no t-dependence is involved, in z.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::series::Scalar;

/// Σ aₖ tᵏ known modulo t^order. `coeffs.len() == order` always.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TSeries {
    coeffs: Vec<Scalar>,
}

fn zero_ref() -> &'static Scalar {
    static Z: OnceLock<Scalar> = OnceLock::new();
    Z.get_or_init(Scalar::zero)
}

impl TSeries {
    pub fn zero(order: usize) -> Self {
        TSeries { coeffs: vec![Scalar::zero(); order] }
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        Self::monomial(c, 0, order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    /// c·tᵏ (dropped when k ≥ order).
    pub fn monomial(c: Scalar, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The coordinate t itself.
    pub fn var(order: usize) -> Self {
        Self::monomial(Scalar::one(), 1, order)
    }

    /// Pads with zeros or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.resize(order, Scalar::zero());
        TSeries { coeffs }
    }

    /// Polynomial with small integer coefficients, lowest degree first.
    pub fn from_ints(cs: &[i64], order: usize) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| Scalar::int(c)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of tᵏ; zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> &Scalar {
        self.coeffs.get(k).unwrap_or_else(|| zero_ref())
    }

    pub fn set_coeff(&mut self, k: usize, c: Scalar) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Least index with a nonzero coefficient; `None` for the zero truncation.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Highest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Same coefficients, new truncation order (pads with zeros when growing).
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.with_order(order.min(self.order()))
    }

    /// Equality of the first `n` coefficients.
    pub fn eq_to_order(&self, other: &Self, n: usize) -> bool {
        (0..n).all(|k| self.coeff(k) == other.coeff(k))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::OrderMismatch { left: (self.order(), 0), right: (o.order(), 0) });
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self + o)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self - o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self * o)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.order());
        }
        TSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by tᵏ at the same truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for j in 0..n.saturating_sub(k) {
            out.coeffs[j + k] = self.coeffs[j].clone();
        }
        out
    }

    /// Division by tᵏ; the truncation order drops by k.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::Domain(format!("series not divisible by t^{k}")));
        }
        Ok(TSeries { coeffs: self.coeffs.iter().skip(k).cloned().collect() })
    }

    /// Formal derivative; the order drops by one.
    pub fn derive(&self) -> Self {
        TSeries {
            coeffs: (1..self.order()).map(|k| &self.coeffs[k] * &Scalar::int(k as i64)).collect(),
        }
    }

    /// t·d/dt, order preserved.
    pub fn euler_op(&self) -> Self {
        TSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| c * &Scalar::int(k as i64)).collect(),
        }
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![Scalar::zero()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / &Scalar::int(k as i64 + 1)));
        TSeries { coeffs }
    }

    /// Value of the polynomial truncation at a scalar point.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Multiplicative inverse of a unit.
    pub fn invert_unit(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let u0 = self.coeffs[0]
            .inv()
            .map_err(|_| Error::NotAUnit("series constant term is zero".into()))?;
        let mut u: Vec<Scalar> = Vec::with_capacity(n);
        u.push(u0.clone());
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !u[k - j].is_zero() {
                    acc += &(&self.coeffs[j] * &u[k - j]);
                }
            }
            u.push(-(&u0 * &acc));
        }
        Ok(TSeries { coeffs: u })
    }

    /// self / o, for o a unit. Order: the minimum of both.
    pub fn div_unit(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.invert_unit()?)
    }

    /// f∘λ for λ(0) = 0, Horner scheme.
    pub fn compose_aut(&self, lam: &Self) -> Result<Self> {
        if !lam.coeff(0).is_zero() {
            return Err(Error::CompositionUndefined);
        }
        let n = self.order().min(lam.order());
        let lam = lam.truncate(n);
        let mut acc = Self::zero(n);
        for k in (0..n).rev() {
            acc = &acc * &lam;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse μ with λ∘μ = t.
    pub fn reverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::CompositionUndefined);
        }
        let l1 = self
            .coeff(1)
            .inv()
            .map_err(|_| Error::NotInvertible("λ'(0) = 0".into()))?;
        let n = self.order();
        let mut mu = Self::monomial(l1.clone(), 1, n);
        for k in 2..n {
            let err = self.compose_aut(&mu)?.coeff(k).clone();
            if !err.is_zero() {
                mu.coeffs[k] -= &(&err * &l1);
            }
        }
        Ok(mu)
    }

    /// exp(s) for s(0) = 0, from E' = s'E.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::Domain("exp needs a series without constant term".into()));
        }
        let n = self.order();
        let mut e: Vec<Scalar> = Vec::with_capacity(n);
        if n > 0 {
            e.push(Scalar::one());
        }
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&(&self.coeffs[j] * &Scalar::int(j as i64)) * &e[k - j]);
                }
            }
            e.push(&acc / &Scalar::int(k as i64));
        }
        Ok(TSeries { coeffs: e })
    }

    /// sᵖ for a unit with s(0) = 1 and any exponent p ∈ Q(i), from s·w' = p·s'·w.
    pub fn pow_scalar(&self, p: &Scalar) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeff(0).is_one() {
            if let Some(k) = p.to_i64() {
                return self.pow_int(k);
            }
            return Err(Error::ExactField("non-integer power of a series with s(0) ≠ 1".into()));
        }
        let mut w: Vec<Scalar> = vec![Scalar::one()];
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    let f = &(p * &Scalar::int(j as i64)) - &Scalar::int((k - j) as i64);
                    acc += &(&(&f * &self.coeffs[j]) * &w[k - j]);
                }
            }
            w.push(&acc / &Scalar::int(k as i64));
        }
        Ok(TSeries { coeffs: w })
    }

    /// sᵏ for integer k (negative powers need a unit).
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert_unit()? } else { self.clone() };
        let mut acc = Self::one(self.order());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    /// Sum at the smaller of the two truncation orders.
    fn add(self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        TSeries { coeffs: (0..n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect() }
    }
}

impl<'a> Sub<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    fn sub(self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        TSeries { coeffs: (0..n).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect() }
    }
}

impl<'a> Mul<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    /// Cauchy product at the smaller truncation order; zero coefficients are skipped.
    fn mul(self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        let mut out = TSeries::zero(n);
        for i in 0..n {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..n - i {
                let b = &o.coeffs[j];
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_series_binop {
    ($ty:ident, $tr:ident, $m:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, o: &$ty) -> $ty {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty {
                self.$m(&o)
            }
        }
    };
}
pub(crate) use owned_series_binop;

owned_series_binop!(TSeries, Add, add);
owned_series_binop!(TSeries, Sub, sub);
owned_series_binop!(TSeries, Mul, mul);

impl Neg for TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 8;

    fn ints(cs: &[i64]) -> TSeries {
        TSeries::from_ints(cs, N)
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&ints(&[1, 1]) * &ints(&[1, -1]), ints(&[1, 0, -1]));
    }

    #[test]
    fn geometric_series_times_one_minus_t() {
        let geo = ints(&[1; N]);
        assert_eq!(&geo * &ints(&[1, -1]), ints(&[1]));
        assert_eq!(ints(&[1, -1]).invert_unit().unwrap(), geo);
    }

    #[test]
    fn inverse_of_quadratic_unit() {
        // long division of 1 by 1+t+t²: period-3 pattern 1,-1,0
        let inv = ints(&[1, 1, 1]).invert_unit().unwrap();
        assert_eq!(inv, ints(&[1, -1, 0, 1, -1, 0, 1, -1]));
        assert_eq!(ints(&[2]).invert_unit().unwrap(), TSeries::constant(Scalar::frac(1, 2), N));
        assert!(ints(&[0, 1]).invert_unit().is_err());
    }

    #[test]
    fn composition_examples() {
        let f = ints(&[0, 0, 1]);
        let lam = ints(&[0, 1, 1]);
        assert_eq!(f.compose_aut(&lam).unwrap(), ints(&[0, 0, 1, 2, 1]));
        assert_eq!(f.compose_aut(&TSeries::var(N)).unwrap(), f);
        assert_eq!(TSeries::var(N).compose_aut(&lam).unwrap(), lam);
        assert_eq!(f.compose_aut(&ints(&[1, 1])), Err(Error::CompositionUndefined));
    }

    #[test]
    fn reversion_matches_catalan_numbers() {
        // inverse of t+t² has coefficients (-1)^(k-1) Catalan(k-1)
        let r = ints(&[0, 1, 1]).reverse().unwrap();
        assert_eq!(r, ints(&[0, 1, -1, 2, -5, 14, -42, 132]));
        assert_eq!(ints(&[0, 2]).reverse().unwrap(), TSeries::monomial(Scalar::frac(1, 2), 1, N));
        assert!(ints(&[0, 0, 1]).reverse().is_err());
    }

    #[test]
    fn derivative_and_order() {
        let d = ints(&[0, 0, 0, 1]).derive();
        assert_eq!(d.order(), N - 1);
        assert_eq!(d, TSeries::from_ints(&[0, 0, 3], N - 1));
        assert!(ints(&[5]).derive().is_zero());
    }

    #[test]
    fn exp_of_t_has_factorial_denominators() {
        let e = TSeries::var(6).exp().unwrap();
        let fact = [1, 1, 2, 6, 24, 120];
        for (k, f) in fact.iter().enumerate() {
            assert_eq!(e.coeff(k), &Scalar::frac(1, *f));
        }
    }

    #[test]
    fn fractional_power_is_binomial() {
        // (1+t)^(1/2) = 1 + t/2 - t²/8 + t³/16
        let w = ints(&[1, 1]).pow_scalar(&Scalar::frac(1, 2)).unwrap();
        assert_eq!(&w.coeffs()[..4], &[Scalar::one(), Scalar::frac(1, 2), Scalar::frac(-1, 8), Scalar::frac(1, 16)]);
        assert_eq!(&w * &w, ints(&[1, 1]));
    }

    #[test]
    fn mismatched_orders_are_reported() {
        let a = TSeries::zero(3);
        let b = TSeries::zero(4);
        assert!(matches!(a.try_add(&b), Err(Error::OrderMismatch { .. })));
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn valuation_of_zero_is_none() {
        assert_eq!(TSeries::zero(4).valuation(), None);
        assert_eq!(ints(&[0, 0, 3]).valuation(), Some(2));
    }
}
