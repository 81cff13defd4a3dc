//! Pre-normal data (f, b₂, c, α), the reduction to it, and the b₂-extension problem.

use serde::Serialize;

use crate::connmat::{apply_gauge, GaugeMap, Kind, Mat2, TEStruct};
use crate::error::{Error, Result};
use crate::series::{AffinePoly1, Scalar, TSeries, ZTSeries};

/// A₁ = C₁, A₂ = C₂ + z·f·E, B = (−t₁ + c + αz)C₁ + b₂C₂ + z·b₃D + z·b₄E.
///
/// Derivatives of b₂ are taken on the stored polynomial, which is exact for every b₂ of
/// t₂-degree below the truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct PreNormalForm {
    pub f: ZTSeries,
    pub b2: ZTSeries,
    pub c: Scalar,
    pub alpha: Scalar,
}

impl PreNormalForm {
    pub fn new(f: ZTSeries, b2: ZTSeries, c: Scalar, alpha: Scalar) -> Result<Self> {
        if f.has_t1() || b2.has_t1() {
            return Err(Error::Shape("f and b2 must not depend on t1".into()));
        }
        if f.orders() != b2.orders() {
            return Err(Error::OrderMismatch { left: f.orders(), right: b2.orders() });
        }
        Ok(PreNormalForm { f, b2, c, alpha })
    }

    pub fn orders(&self) -> (usize, usize) {
        self.b2.orders()
    }

    /// b₃ = −(∂₂b₂ + 1)/2.
    pub fn b3(&self) -> ZTSeries {
        let (nz, nt) = self.orders();
        (&self.b2.derive_t2_poly() + &ZTSeries::one(nz, nt)).scale(&Scalar::frac(-1, 2))
    }

    /// b₄ = −(z/2)∂₂²b₂ + f·b₂.
    pub fn b4(&self) -> ZTSeries {
        let d2 = self.b2.derive_t2_poly().derive_t2_poly();
        &d2.shift_z(1).scale(&Scalar::frac(-1, 2)) + &(&self.f * &self.b2)
    }

    /// −(z/2)∂₂³b₂ + (∂₂f)b₂ + 2f∂₂b₂ − z∂_zf + f, valid to t-order N_t − 1.
    pub fn master_residual(&self) -> ZTSeries {
        let (nz, nt) = self.orders();
        let db = self.b2.derive_t2_poly();
        let d3 = db.derive_t2_poly().derive_t2_poly().shift_z(1).scale(&Scalar::frac(-1, 2));
        let df = self.f.derive_t2();
        let r = &(&d3 + &(&df * &self.b2)) + &(&self.f * &db).scale(&Scalar::int(2));
        (&(&r - &self.f.z_dz()) + &self.f).truncate(nz, nt - 1)
    }

    pub fn is_consistent(&self) -> bool {
        self.master_residual().is_zero()
    }

    /// The (TE)-structure these data determine, at the same orders.
    pub fn to_structure(&self) -> TEStruct {
        let (nz, nt) = self.orders();
        let mut b1 = &ZTSeries::z_monomial(self.alpha.clone(), 1, nz, nt) - &ZTSeries::t1(nz, nt);
        b1 = &b1 + &ZTSeries::constant(self.c.clone(), nz, nt);
        let b = Mat2::new(b1, self.b2.clone(), self.b3().shift_z(1), self.b4().shift_z(1));
        let a2 = Mat2::new(
            ZTSeries::zero(nz, nt),
            ZTSeries::one(nz, nt),
            ZTSeries::zero(nz, nt),
            self.f.shift_z(1),
        );
        TEStruct::new(Mat2::identity(nz, nt), a2, b, Kind::TE)
    }

    /// Reads (f, b₂, c, α) off a structure that is already pre-normal; no gauge is applied.
    pub fn from_structure(s: &TEStruct) -> Result<Self> {
        let (nz, nt) = s.orders();
        let s = s.truncate(nz, nt);
        let (f, b1) = check_shape(&s)?;
        if (2..nz).any(|k| !b1.coeff(k).is_zero()) {
            return Err(Error::Shape("C1-coefficient of B has z-terms beyond z^1".into()));
        }
        let p = PreNormalForm::new(f, s.b.c2.clone(), b1.coeff(0).clone(), b1.coeff(1).clone())?;
        if !s.b.eq_to_order(&p.to_structure().b, nz, nt) {
            return Err(Error::Shape("b3, b4 do not match the values forced by b2 and f".into()));
        }
        Ok(p)
    }
}

/// Checks A₁ = C₁, A₂ = C₂ + zfE, B = (−t₁ + b₁(z))C₁ + … and returns (f, b₁).
fn check_shape(s: &TEStruct) -> Result<(ZTSeries, TSeries)> {
    let (nz, nt) = s.orders();
    let shape = |m: &str| Error::Shape(m.to_string());
    if s.kind != Kind::TE {
        return Err(shape("a (TE)-structure is required"));
    }
    if !s.a1.eq_to_order(&Mat2::identity(nz, nt), nz, nt) {
        return Err(shape("A1 must equal C1"));
    }
    let a2 = &s.a2;
    if !a2.c1.is_zero() || !a2.d.is_zero() || !a2.c2.eq_to_order(&ZTSeries::one(nz, nt), nz, nt) {
        return Err(shape("A2 must be C2 + z f E"));
    }
    if a2.e.has_t1() || !a2.e.zcoeff(0).is_zero() {
        return Err(shape("the E-coefficient of A2 must be z times a t1-free series"));
    }
    let mut fz = a2.e.zcoeffs()[1.min(nz)..].to_vec();
    fz.push(AffinePoly1::zero(nt));
    let f = ZTSeries::from_zcoeffs(fz, nz, nt);
    let b = &s.b;
    let t1_part = &b.c1 + &ZTSeries::t1(nz, nt);
    if t1_part.has_t1() || b.c2.has_t1() || b.d.has_t1() || b.e.has_t1() {
        return Err(shape("B must satisfy d/dt1 B = -C1"));
    }
    if !b.d.zcoeff(0).is_zero() || !b.e.zcoeff(0).is_zero() {
        return Err(shape("B(0) must be a combination of C1 and C2"));
    }
    let mut b1 = Vec::with_capacity(nz);
    for k in 0..nz {
        let p = t1_part.zcoeff(k).const_part;
        if (1..nt).any(|j| !p.coeff(j).is_zero()) {
            return Err(shape("the C1-coefficient of B depends on t2"));
        }
        b1.push(p.coeff(0).clone());
    }
    Ok((f, TSeries::from_coeffs(b1, nz)))
}

/// Reduces a structure with A₁ = C₁, A₂ = C₂ + zfE to pre-normal form.
///
/// The returned gauge is exp(−Σ_{k≥2} b₁⁽ᵏ⁾z^{k−1}/(k−1))·C₁.
pub fn to_prenormal(s: &TEStruct) -> Result<(PreNormalForm, GaugeMap)> {
    let (nz, nt) = s.orders();
    let s = s.truncate(nz, nt);
    let (_, b1) = check_shape(&s)?;
    let mut expo = TSeries::zero(nz);
    for k in 2..nz {
        let v = b1.coeff(k).clone() * Scalar::frac(-1, k as i64 - 1);
        expo.set_coeff(k - 1, v);
    }
    let scalar = expo.exp()?;
    let t = Mat2::basis_times(0, ZTSeries::from_z_series(&scalar, nt));
    let out = apply_gauge(&s, &t)?;
    let p = PreNormalForm::from_structure(&out)?;
    if !p.is_consistent() {
        return Err(Error::NonFlat("the b2 master equation has a nonzero residual".into()));
    }
    Ok((p, GaugeMap::gauge(t)))
}

/// The four (T)-normal-form shapes of f.
#[derive(Clone, Debug, PartialEq)]
pub enum FKind {
    One,
    T2,
    /// t₂ʳ + Σ_{k≥1} P_k(t₂)zᵏ with r ≥ 2; `p[k-1]` holds P_k.
    T2Pow { r: usize, p: Vec<TSeries> },
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Extension {
    /// b₂ = −t₂/2 + Σ c_k zᵏ with arbitrary c_k.
    FreeConstants,
    /// b₂ is forced to −t₂/(r+2).
    Unique { r: usize },
    /// Every b₂ with ∂₂³b₂⁽ⁿ⁾ = 0.
    ThirdDerivativeFree,
}

impl Extension {
    /// b₂⁽⁰⁾ of the extension, when determined.
    pub fn b2_zero(&self, nt: usize) -> Option<TSeries> {
        match self {
            Extension::FreeConstants => Some(TSeries::monomial(Scalar::frac(-1, 2), 1, nt)),
            Extension::Unique { r } => Some(TSeries::monomial(Scalar::frac(-1, *r as i64 + 2), 1, nt)),
            Extension::ThirdDerivativeFree => None,
        }
    }

    /// Whether b₂ belongs to the extension family.
    pub fn admits(&self, b2: &ZTSeries) -> bool {
        let (nz, nt) = b2.orders();
        let linear_part = |k: usize| b2.tcoeff(k).truncate(nt);
        match self {
            Extension::FreeConstants => {
                let lead = self.b2_zero(nt).unwrap();
                let l0 = &linear_part(0) - &lead;
                l0.degree().is_none_or(|d| d == 0) && (1..nz).all(|k| linear_part(k).degree().is_none_or(|d| d == 0))
            }
            Extension::Unique { .. } => {
                let lead = self.b2_zero(nt).unwrap();
                linear_part(0) == lead && (1..nz).all(|k| linear_part(k).is_zero())
            }
            Extension::ThirdDerivativeFree => (0..nz).all(|k| linear_part(k).degree().is_none_or(|d| d <= 2)),
        }
    }
}

/// Which b₂ extend the (T)-structure with the given f.
pub fn solve_b2_extensions(f: &FKind) -> Result<Extension> {
    match f {
        FKind::One => Ok(Extension::FreeConstants),
        FKind::T2 => Ok(Extension::Unique { r: 1 }),
        FKind::Zero => Ok(Extension::ThirdDerivativeFree),
        FKind::T2Pow { r, p } => {
            if *r < 2 {
                return Err(Error::Precondition("t2^r shape needs r >= 2".into()));
            }
            if let Some(k) = p.iter().position(|q| !q.is_zero()) {
                return Err(Error::NoExtension(format!("P_{} is nonzero", k + 1)));
            }
            Ok(Extension::Unique { r: *r })
        }
    }
}

/// Recognizes f among the four shapes, exactly at the stored orders.
pub fn classify_f(f: &ZTSeries) -> Result<FKind> {
    let (nz, nt) = f.orders();
    let f0 = f.tcoeff(0);
    let higher_zero = (1..nz).all(|k| f.tcoeff(k).is_zero());
    let unsupported = |m: &str| Error::RequiresTNormalization(m.to_string());
    if f.is_zero() {
        return Ok(FKind::Zero);
    }
    if f0.valuation() == Some(0) {
        return if f0 == TSeries::one(nt) && higher_zero {
            Ok(FKind::One)
        } else {
            Err(unsupported("f(z=0) is a unit but f differs from 1"))
        };
    }
    let r = f0.valuation().ok_or_else(|| unsupported("f(z=0) vanishes but f does not"))?;
    if f0 != TSeries::monomial(Scalar::one(), r, nt) {
        return Err(unsupported("f(z=0) is not a monomial t2^r"));
    }
    if r == 1 {
        return if higher_zero { Ok(FKind::T2) } else { Err(unsupported("f = t2 + higher z-terms")) };
    }
    let p: Vec<TSeries> = (1..nz).map(|k| f.tcoeff(k)).collect();
    if p.iter().any(|q| q.degree().is_some_and(|d| d + 2 > r)) {
        return Err(unsupported("P_k of degree above r - 2"));
    }
    Ok(FKind::T2Pow { r, p })
}
