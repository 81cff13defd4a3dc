//! Series in z whose coefficients are affine in t₁ and power series in t₂.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::series::tseries::owned_series_binop;
use crate::series::{Scalar, TSeries};

/// p(t₁,t₂) = const_part(t₂) + t₁·t1_coeff(t₂).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffinePoly1 {
    pub const_part: TSeries,
    pub t1_coeff: TSeries,
}

impl AffinePoly1 {
    pub fn zero(nt: usize) -> Self {
        AffinePoly1 { const_part: TSeries::zero(nt), t1_coeff: TSeries::zero(nt) }
    }

    pub fn from_t(s: TSeries) -> Self {
        let nt = s.order();
        AffinePoly1 { const_part: s, t1_coeff: TSeries::zero(nt) }
    }

    pub fn order(&self) -> usize {
        self.const_part.order().min(self.t1_coeff.order())
    }

    pub fn is_zero(&self) -> bool {
        self.const_part.is_zero() && self.t1_coeff.is_zero()
    }

    pub fn has_t1(&self) -> bool {
        !self.t1_coeff.is_zero()
    }

    fn map(&self, f: impl Fn(&TSeries) -> TSeries) -> Self {
        AffinePoly1 { const_part: f(&self.const_part), t1_coeff: f(&self.t1_coeff) }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|s| s.scale(c))
    }

    pub fn mul_t(&self, s: &TSeries) -> Self {
        self.map(|x| x * s)
    }

    pub fn with_order(&self, nt: usize) -> Self {
        self.map(|s| s.with_order(nt))
    }

    pub fn derive_t2(&self) -> Self {
        self.map(TSeries::derive)
    }

    /// ∂/∂t₁.
    pub fn derive_t1(&self) -> Self {
        AffinePoly1::from_t(self.t1_coeff.clone())
    }

    pub fn compose_t2(&self, lam: &TSeries) -> Result<Self> {
        Ok(AffinePoly1 {
            const_part: self.const_part.compose_aut(lam)?,
            t1_coeff: self.t1_coeff.compose_aut(lam)?,
        })
    }
}

impl<'a> Add<&'a AffinePoly1> for &'a AffinePoly1 {
    type Output = AffinePoly1;
    fn add(self, o: &AffinePoly1) -> AffinePoly1 {
        AffinePoly1 { const_part: &self.const_part + &o.const_part, t1_coeff: &self.t1_coeff + &o.t1_coeff }
    }
}

impl<'a> Sub<&'a AffinePoly1> for &'a AffinePoly1 {
    type Output = AffinePoly1;
    fn sub(self, o: &AffinePoly1) -> AffinePoly1 {
        AffinePoly1 { const_part: &self.const_part - &o.const_part, t1_coeff: &self.t1_coeff - &o.t1_coeff }
    }
}

impl<'a> Mul<&'a AffinePoly1> for &'a AffinePoly1 {
    type Output = AffinePoly1;
    /// Panics if the product has a t₁² term: every structure in scope is affine in t₁.
    fn mul(self, o: &AffinePoly1) -> AffinePoly1 {
        let (a1, b1) = (self.has_t1(), o.has_t1());
        assert!(!(a1 && b1), "product of two t1-dependent entries leaves the affine ring");
        let n = self.order().min(o.order());
        let const_part = &self.const_part * &o.const_part;
        let t1_coeff = match (a1, b1) {
            (true, false) => &self.t1_coeff * &o.const_part,
            (false, true) => &self.const_part * &o.t1_coeff,
            _ => TSeries::zero(n),
        };
        AffinePoly1 { const_part, t1_coeff }
    }
}

/// Σ_k p_k(t₁,t₂) zᵏ, known modulo z^nz and t₂^nt.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZTSeries {
    z: Vec<AffinePoly1>,
    nt: usize,
}

impl ZTSeries {
    pub fn zero(nz: usize, nt: usize) -> Self {
        ZTSeries { z: vec![AffinePoly1::zero(nt); nz], nt }
    }

    /// Coefficients given per z-power; padded or truncated to (nz, nt).
    pub fn from_zcoeffs(mut z: Vec<AffinePoly1>, nz: usize, nt: usize) -> Self {
        z.resize(nz, AffinePoly1::zero(nt));
        let z = z.into_iter().map(|p| p.with_order(nt)).collect();
        ZTSeries { z, nt }
    }

    /// Σ s_k(t₂) zᵏ without t₁.
    pub fn from_t_coeffs(cs: Vec<TSeries>, nz: usize, nt: usize) -> Self {
        Self::from_zcoeffs(cs.into_iter().map(AffinePoly1::from_t).collect(), nz, nt)
    }

    /// s(t₂)·zᵏ.
    pub fn t_monomial(s: TSeries, k: usize, nz: usize, nt: usize) -> Self {
        let mut out = Self::zero(nz, nt);
        if k < nz {
            out.z[k] = AffinePoly1::from_t(s.with_order(nt));
        }
        out
    }

    /// c·zᵏ.
    pub fn z_monomial(c: Scalar, k: usize, nz: usize, nt: usize) -> Self {
        Self::t_monomial(TSeries::constant(c, nt), k, nz, nt)
    }

    pub fn constant(c: Scalar, nz: usize, nt: usize) -> Self {
        Self::z_monomial(c, 0, nz, nt)
    }

    pub fn one(nz: usize, nt: usize) -> Self {
        Self::constant(Scalar::one(), nz, nt)
    }

    /// The coordinate t₁.
    pub fn t1(nz: usize, nt: usize) -> Self {
        let mut out = Self::zero(nz, nt);
        if nz > 0 {
            out.z[0].t1_coeff = TSeries::one(nt);
        }
        out
    }

    /// A z-only series Σ s_k zᵏ.
    pub fn from_z_series(s: &TSeries, nt: usize) -> Self {
        let nz = s.order();
        let cs = (0..nz).map(|k| TSeries::constant(s.coeff(k).clone(), nt)).collect();
        Self::from_t_coeffs(cs, nz, nt)
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.z.len(), self.nt)
    }

    pub fn nz(&self) -> usize {
        self.z.len()
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn zcoeffs(&self) -> &[AffinePoly1] {
        &self.z
    }

    /// Coefficient of zᵏ (zero beyond the stored range).
    pub fn zcoeff(&self, k: usize) -> AffinePoly1 {
        self.z.get(k).cloned().unwrap_or_else(|| AffinePoly1::zero(self.nt))
    }

    /// t₁-free part of the zᵏ coefficient.
    pub fn tcoeff(&self, k: usize) -> TSeries {
        self.z.get(k).map(|p| p.const_part.clone()).unwrap_or_else(|| TSeries::zero(self.nt))
    }

    pub fn set_zcoeff(&mut self, k: usize, p: AffinePoly1) {
        if k < self.z.len() {
            self.z[k] = p.with_order(self.nt);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.z.iter().all(AffinePoly1::is_zero)
    }

    pub fn has_t1(&self) -> bool {
        self.z.iter().any(AffinePoly1::has_t1)
    }

    /// Least z-power with a nonzero coefficient.
    pub fn z_valuation(&self) -> Option<usize> {
        self.z.iter().position(|p| !p.is_zero())
    }

    /// Reshape to (nz, nt), padding with zeros when growing.
    pub fn with_orders(&self, nz: usize, nt: usize) -> Self {
        Self::from_zcoeffs(self.z.clone(), nz, nt)
    }

    /// Reshape to the minimum of current and requested orders.
    pub fn truncate(&self, nz: usize, nt: usize) -> Self {
        self.with_orders(nz.min(self.nz()), nt.min(self.nt))
    }

    pub fn eq_to_order(&self, o: &Self, nz: usize, nt: usize) -> bool {
        (0..nz).all(|k| {
            let (a, b) = (self.zcoeff(k), o.zcoeff(k));
            a.const_part.eq_to_order(&b.const_part, nt) && a.t1_coeff.eq_to_order(&b.t1_coeff, nt)
        })
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.orders() != o.orders() {
            return Err(Error::OrderMismatch { left: self.orders(), right: o.orders() });
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

    fn map(&self, f: impl Fn(&AffinePoly1) -> AffinePoly1) -> Self {
        let z: Vec<AffinePoly1> = self.z.iter().map(f).collect();
        let nt = z.first().map(AffinePoly1::order).unwrap_or(self.nt);
        ZTSeries { z, nt }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Multiply by a function of t₂ alone.
    pub fn mul_t(&self, s: &TSeries) -> Self {
        let nt = self.nt.min(s.order());
        let mut out = self.map(|p| p.mul_t(s));
        out.nt = nt;
        out
    }

    /// Multiply by zᵐ; the z-order grows by m since the low coefficients are exact zeros.
    pub fn mul_z_pow(&self, m: usize) -> Self {
        let mut z = vec![AffinePoly1::zero(self.nt); m];
        z.extend(self.z.iter().cloned());
        ZTSeries { z, nt: self.nt }
    }

    /// Multiply by zᵐ keeping the z-order.
    pub fn shift_z(&self, m: usize) -> Self {
        self.mul_z_pow(m).truncate(self.nz(), self.nt)
    }

    /// ∂/∂t₂; the t-order drops by one.
    pub fn derive_t2(&self) -> Self {
        let mut out = self.map(AffinePoly1::derive_t2);
        out.nt = self.nt.saturating_sub(1);
        out
    }

    /// ∂/∂t₁.
    pub fn derive_t1(&self) -> Self {
        self.map(AffinePoly1::derive_t1)
    }

    /// ∂/∂t₂ of the polynomial given by the stored coefficients; orders preserved.
    pub fn derive_t2_poly(&self) -> Self {
        self.derive_t2().with_orders(self.nz(), self.nt)
    }

    /// ∂/∂z of the stored polynomial; orders preserved.
    pub fn derive_z_poly(&self) -> Self {
        self.derive_z().with_orders(self.nz(), self.nt)
    }

    /// ∂/∂z; the z-order drops by one.
    pub fn derive_z(&self) -> Self {
        let z = (1..self.nz()).map(|k| self.z[k].scale(&Scalar::int(k as i64))).collect();
        ZTSeries { z, nt: self.nt }
    }

    /// z·∂/∂z, orders preserved.
    pub fn z_dz(&self) -> Self {
        let z = self.z.iter().enumerate().map(|(k, p)| p.scale(&Scalar::int(k as i64))).collect();
        ZTSeries { z, nt: self.nt }
    }

    /// Substitute t₂ ↦ λ(t₂) in every coefficient.
    pub fn compose_t2(&self, lam: &TSeries) -> Result<Self> {
        let nt = self.nt.min(lam.order());
        let z = self.z.iter().map(|p| p.compose_t2(lam)).collect::<Result<Vec<_>>>()?;
        Ok(ZTSeries { z, nt })
    }

    /// Value at t₁ = t₂ = 0, as a series in z.
    pub fn at_origin(&self) -> TSeries {
        TSeries::from_coeffs(self.z.iter().map(|p| p.const_part.coeff(0).clone()).collect(), self.nz())
    }

    /// Coefficient of t₂ʲ (t₁-free part), as a series in z.
    pub fn t2_coeff_series(&self, j: usize) -> TSeries {
        TSeries::from_coeffs(self.z.iter().map(|p| p.const_part.coeff(j).clone()).collect(), self.nz())
    }

    /// Multiplicative inverse for a t₁-free unit, via the z-recursion.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.has_t1() {
            return Err(Error::NotAUnit("t1-dependent series".into()));
        }
        let (nz, nt) = self.orders();
        if nz == 0 {
            return Ok(self.clone());
        }
        let u0 = self.z[0].const_part.invert_unit()?;
        let mut u: Vec<TSeries> = vec![u0.clone()];
        for k in 1..nz {
            let mut acc = TSeries::zero(nt);
            for j in 1..=k {
                let s = &self.z[j].const_part;
                if !s.is_zero() && !u[k - j].is_zero() {
                    acc = &acc + &(s * &u[k - j]);
                }
            }
            u.push(-(&u0 * &acc));
        }
        Ok(Self::from_t_coeffs(u, nz, nt))
    }
}

impl<'a> Add<&'a ZTSeries> for &'a ZTSeries {
    type Output = ZTSeries;
    fn add(self, o: &ZTSeries) -> ZTSeries {
        let nz = self.nz().min(o.nz());
        let nt = self.nt.min(o.nt);
        let z = (0..nz).map(|k| &self.z[k] + &o.z[k]).collect();
        ZTSeries { z, nt }
    }
}

impl<'a> Sub<&'a ZTSeries> for &'a ZTSeries {
    type Output = ZTSeries;
    fn sub(self, o: &ZTSeries) -> ZTSeries {
        let nz = self.nz().min(o.nz());
        let nt = self.nt.min(o.nt);
        let z = (0..nz).map(|k| &self.z[k] - &o.z[k]).collect();
        ZTSeries { z, nt }
    }
}

impl<'a> Mul<&'a ZTSeries> for &'a ZTSeries {
    type Output = ZTSeries;
    fn mul(self, o: &ZTSeries) -> ZTSeries {
        let nz = self.nz().min(o.nz());
        let nt = self.nt.min(o.nt);
        let mut z = vec![AffinePoly1::zero(nt); nz];
        for i in 0..nz {
            if self.z[i].is_zero() {
                continue;
            }
            for j in 0..nz - i {
                if !o.z[j].is_zero() {
                    z[i + j] = &z[i + j] + &(&self.z[i] * &o.z[j]);
                }
            }
        }
        ZTSeries { z, nt }
    }
}

impl Neg for &ZTSeries {
    type Output = ZTSeries;
    fn neg(self) -> ZTSeries {
        self.scale(&Scalar::int(-1))
    }
}

impl Neg for ZTSeries {
    type Output = ZTSeries;
    fn neg(self) -> ZTSeries {
        -&self
    }
}

owned_series_binop!(ZTSeries, Add, add);
owned_series_binop!(ZTSeries, Sub, sub);
owned_series_binop!(ZTSeries, Mul, mul);
