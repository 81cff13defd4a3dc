//! Constant 2×2 matrices in the basis C₁, C₂, D, E.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::connmat::Mat2;
use crate::error::{Error, Result};
use crate::series::{Scalar, ZTSeries};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CMat {
    pub c1: Scalar,
    pub c2: Scalar,
    pub d: Scalar,
    pub e: Scalar,
}

impl CMat {
    pub fn new(c1: Scalar, c2: Scalar, d: Scalar, e: Scalar) -> Self {
        CMat { c1, c2, d, e }
    }

    pub fn zero() -> Self {
        CMat::new(Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero())
    }

    pub fn identity() -> Self {
        CMat::new(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero())
    }

    pub fn from_coords(c: [Scalar; 4]) -> Self {
        let [a, b, d, e] = c;
        CMat::new(a, b, d, e)
    }

    pub fn coords(&self) -> [Scalar; 4] {
        [self.c1.clone(), self.c2.clone(), self.d.clone(), self.e.clone()]
    }

    /// [m11, m12, m21, m22].
    pub fn entries(&self) -> [Scalar; 4] {
        [&self.c1 + &self.d, self.e.clone(), self.c2.clone(), &self.c1 - &self.d]
    }

    pub fn from_entries(m11: &Scalar, m12: &Scalar, m21: &Scalar, m22: &Scalar) -> Self {
        let h = Scalar::frac(1, 2);
        CMat::new(&(m11 + m22) * &h, m21.clone(), &(m11 - m22) * &h, m12.clone())
    }

    pub fn diag(a: &Scalar, b: &Scalar) -> Self {
        Self::from_entries(a, &Scalar::zero(), &Scalar::zero(), b)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        CMat::new(&self.c1 * c, &self.c2 * c, &self.d * c, &self.e * c)
    }

    pub fn det(&self) -> Scalar {
        let [a, b, c, d] = self.entries();
        &(&a * &d) - &(&b * &c)
    }

    pub fn trace(&self) -> Scalar {
        &self.c1 * &Scalar::int(2)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.det().inv().map_err(|_| Error::NotInvertible("singular constant matrix".into()))?;
        Ok(CMat::new(self.c1.clone(), -&self.c2, -&self.d, -&self.e).scale(&inv))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn conjugate_by(&self, t: &Self) -> Result<Self> {
        Ok(&(&t.inverse()? * self) * t)
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(Scalar::is_zero)
    }

    pub fn to_mat2(&self, nz: usize, nt: usize) -> Mat2 {
        Mat2::constant(self.coords(), nz, nt)
    }

    /// c·zᵏ·self as a Mat2.
    pub fn to_mat2_at(&self, k: usize, nz: usize, nt: usize) -> Mat2 {
        let f = |s: &Scalar| ZTSeries::z_monomial(s.clone(), k, nz, nt);
        Mat2::new(f(&self.c1), f(&self.c2), f(&self.d), f(&self.e))
    }
}

impl fmt::Display for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})C1 + ({})C2 + ({})D + ({})E", self.c1, self.c2, self.d, self.e)
    }
}

impl<'a> Add<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn add(self, o: &CMat) -> CMat {
        CMat::new(&self.c1 + &o.c1, &self.c2 + &o.c2, &self.d + &o.d, &self.e + &o.e)
    }
}

impl<'a> Sub<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn sub(self, o: &CMat) -> CMat {
        CMat::new(&self.c1 - &o.c1, &self.c2 - &o.c2, &self.d - &o.d, &self.e - &o.e)
    }
}

impl<'a> Mul<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn mul(self, o: &CMat) -> CMat {
        let [a11, a12, a21, a22] = self.entries();
        let [b11, b12, b21, b22] = o.entries();
        CMat::from_entries(
            &(&(&a11 * &b11) + &(&a12 * &b21)),
            &(&(&a11 * &b12) + &(&a12 * &b22)),
            &(&(&a21 * &b11) + &(&a22 * &b21)),
            &(&(&a21 * &b12) + &(&a22 * &b22)),
        )
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale(&Scalar::int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_and_inverse() {
        let d = CMat::diag(&Scalar::int(1), &Scalar::int(-1));
        assert_eq!(d, CMat::new(Scalar::zero(), Scalar::zero(), Scalar::one(), Scalar::zero()));
        let m = CMat::new(Scalar::int(2), Scalar::int(1), Scalar::frac(1, 2), Scalar::i());
        assert_eq!(&m * &m.inverse().unwrap(), CMat::identity());
    }
}
