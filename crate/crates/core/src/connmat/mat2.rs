//! 2×2 matrices over ZTSeries in the basis C₁ = Id, C₂ = E₂₁, D = diag(1,−1), E = E₁₂.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::series::tseries::owned_series_binop;
use crate::series::{Scalar, TSeries, ZTSeries};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2 {
    pub c1: ZTSeries,
    pub c2: ZTSeries,
    pub d: ZTSeries,
    pub e: ZTSeries,
}

/// Names of the basis elements in storage order.
pub const BASIS: [&str; 4] = ["C1", "C2", "D", "E"];

fn half() -> Scalar {
    Scalar::frac(1, 2)
}

impl Mat2 {
    pub fn new(c1: ZTSeries, c2: ZTSeries, d: ZTSeries, e: ZTSeries) -> Self {
        Mat2 { c1, c2, d, e }
    }

    pub fn zero(nz: usize, nt: usize) -> Self {
        let z = ZTSeries::zero(nz, nt);
        Mat2 { c1: z.clone(), c2: z.clone(), d: z.clone(), e: z }
    }

    /// s·X for X one of the basis elements (index into [`BASIS`]).
    pub fn basis_times(k: usize, s: ZTSeries) -> Self {
        let (nz, nt) = s.orders();
        let mut m = Self::zero(nz, nt);
        *m.component_mut(k) = s;
        m
    }

    pub fn identity(nz: usize, nt: usize) -> Self {
        Self::basis_times(0, ZTSeries::one(nz, nt))
    }

    /// Constant matrix from basis coordinates.
    pub fn constant(coords: [Scalar; 4], nz: usize, nt: usize) -> Self {
        let [a, b, c, d] = coords;
        Mat2 {
            c1: ZTSeries::constant(a, nz, nt),
            c2: ZTSeries::constant(b, nz, nt),
            d: ZTSeries::constant(c, nz, nt),
            e: ZTSeries::constant(d, nz, nt),
        }
    }

    pub fn components(&self) -> [&ZTSeries; 4] {
        [&self.c1, &self.c2, &self.d, &self.e]
    }

    pub fn component_mut(&mut self, k: usize) -> &mut ZTSeries {
        match k {
            0 => &mut self.c1,
            1 => &mut self.c2,
            2 => &mut self.d,
            3 => &mut self.e,
            _ => panic!("basis index out of range"),
        }
    }

    pub fn orders(&self) -> (usize, usize) {
        let nz = self.components().iter().map(|s| s.nz()).min().unwrap_or(0);
        let nt = self.components().iter().map(|s| s.nt()).min().unwrap_or(0);
        (nz, nt)
    }

    /// Entries [m11, m12, m21, m22].
    pub fn entries(&self) -> [ZTSeries; 4] {
        [&self.c1 + &self.d, self.e.clone(), self.c2.clone(), &self.c1 - &self.d]
    }

    pub fn from_entries(m11: &ZTSeries, m12: &ZTSeries, m21: &ZTSeries, m22: &ZTSeries) -> Self {
        Mat2 {
            c1: (m11 + m22).scale(&half()),
            c2: m21.clone(),
            d: (m11 - m22).scale(&half()),
            e: m12.clone(),
        }
    }

    fn map(&self, f: impl Fn(&ZTSeries) -> ZTSeries) -> Self {
        Mat2 { c1: f(&self.c1), c2: f(&self.c2), d: f(&self.d), e: f(&self.e) }
    }

    fn try_map(&self, f: impl Fn(&ZTSeries) -> Result<ZTSeries>) -> Result<Self> {
        Ok(Mat2 { c1: f(&self.c1)?, c2: f(&self.c2)?, d: f(&self.d)?, e: f(&self.e)? })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|s| s.scale(c))
    }

    /// Multiplication by a scalar function.
    pub fn mul_series(&self, s: &ZTSeries) -> Self {
        self.map(|x| x * s)
    }

    pub fn mul_t(&self, s: &TSeries) -> Self {
        self.map(|x| x.mul_t(s))
    }

    pub fn mul_z_pow(&self, m: usize) -> Self {
        self.map(|x| x.mul_z_pow(m))
    }

    pub fn derive_t1(&self) -> Self {
        self.map(ZTSeries::derive_t1)
    }

    pub fn derive_t2(&self) -> Self {
        self.map(ZTSeries::derive_t2)
    }

    pub fn derive_z(&self) -> Self {
        self.map(ZTSeries::derive_z)
    }

    /// Derivatives of the stored polynomial, orders preserved (used for gauges).
    pub fn derive_t2_poly(&self) -> Self {
        self.map(ZTSeries::derive_t2_poly)
    }

    pub fn derive_z_poly(&self) -> Self {
        self.map(ZTSeries::derive_z_poly)
    }

    pub fn compose_t2(&self, lam: &TSeries) -> Result<Self> {
        self.try_map(|x| x.compose_t2(lam))
    }

    pub fn truncate(&self, nz: usize, nt: usize) -> Self {
        self.map(|x| x.truncate(nz, nt))
    }

    pub fn with_orders(&self, nz: usize, nt: usize) -> Self {
        self.map(|x| x.with_orders(nz, nt))
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|s| s.is_zero())
    }

    pub fn has_t1(&self) -> bool {
        self.components().iter().any(|s| s.has_t1())
    }

    pub fn eq_to_order(&self, o: &Self, nz: usize, nt: usize) -> bool {
        self.components().iter().zip(o.components()).all(|(a, b)| a.eq_to_order(b, nz, nt))
    }

    pub fn trace(&self) -> ZTSeries {
        self.c1.scale(&Scalar::int(2))
    }

    pub fn det(&self) -> ZTSeries {
        let [m11, m12, m21, m22] = self.entries();
        &(&m11 * &m22) - &(&m12 * &m21)
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    /// Inverse via the adjugate, for a t₁-free matrix whose determinant is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let det_inv = self
            .det()
            .invert_unit()
            .map_err(|_| Error::NotInvertible("matrix constant term is singular".into()))?;
        let adj = Mat2 { c1: self.c1.clone(), c2: -&self.c2, d: -&self.d, e: -&self.e };
        Ok(adj.mul_series(&det_inv))
    }

    /// Coefficient matrix of zᵏ at t₁ = t₂ = 0.
    pub fn origin_coeff(&self, k: usize) -> [Scalar; 4] {
        self.components().map(|s| s.zcoeff(k).const_part.coeff(0).clone())
    }
}

impl<'a> Add<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn add(self, o: &Mat2) -> Mat2 {
        Mat2 { c1: &self.c1 + &o.c1, c2: &self.c2 + &o.c2, d: &self.d + &o.d, e: &self.e + &o.e }
    }
}

impl<'a> Sub<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn sub(self, o: &Mat2) -> Mat2 {
        Mat2 { c1: &self.c1 - &o.c1, c2: &self.c2 - &o.c2, d: &self.d - &o.d, e: &self.e - &o.e }
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        let [a11, a12, a21, a22] = self.entries();
        let [b11, b12, b21, b22] = o.entries();
        Mat2::from_entries(
            &(&(&a11 * &b11) + &(&a12 * &b21)),
            &(&(&a11 * &b12) + &(&a12 * &b22)),
            &(&(&a21 * &b11) + &(&a22 * &b21)),
            &(&(&a21 * &b12) + &(&a22 * &b22)),
        )
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(&Scalar::int(-1))
    }
}

owned_series_binop!(Mat2, Add, add);
owned_series_binop!(Mat2, Sub, sub);
owned_series_binop!(Mat2, Mul, mul);

/// mat_mul in the basis; same as `a * b`.
pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    a * b
}
