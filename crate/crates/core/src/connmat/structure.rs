//! (TE)-structures over N₂: flatness, gauge and base-change actions, induced Euler field.

use serde::{Deserialize, Serialize};

use crate::connmat::Mat2;
use crate::error::{Error, Result};
use crate::euler::EulerField;
use crate::series::{AffinePoly1, Scalar, TSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    /// Only the base directions; the z-direction relations are not imposed.
    #[serde(rename = "T")]
    TOnly,
    #[serde(rename = "TE")]
    TE,
}

/// Connection matrices A₁, A₂, B of ∇ = d + z⁻¹(A₁dt₁ + A₂dt₂) + z⁻²B dz.
#[derive(Clone, Debug, PartialEq)]
pub struct TEStruct {
    pub a1: Mat2,
    pub a2: Mat2,
    pub b: Mat2,
    pub kind: Kind,
}

/// T(z,t) together with the covered base map (t₁, t₂) ↦ (t₁, λ(t₂)); `None` means identity.
///
/// T and λ are the polynomials given by their stored coefficients, so acting with them
/// costs no truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeMap {
    pub t: Mat2,
    pub h_lambda: Option<TSeries>,
}

impl GaugeMap {
    pub fn gauge(t: Mat2) -> Self {
        GaugeMap { t, h_lambda: None }
    }

    pub fn with_base(t: Mat2, lam: TSeries) -> Self {
        GaugeMap { t, h_lambda: Some(lam) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub rt: Mat2,
    pub rz1: Option<Mat2>,
    pub rz2: Option<Mat2>,
}

impl Residuals {
    pub fn is_zero(&self) -> bool {
        self.rt.is_zero()
            && self.rz1.as_ref().is_none_or(Mat2::is_zero)
            && self.rz2.as_ref().is_none_or(Mat2::is_zero)
    }

    /// Orders (z, t) to which the vanishing has been checked.
    pub fn certified_orders(&self) -> (usize, usize) {
        [Some(&self.rt), self.rz1.as_ref(), self.rz2.as_ref()]
            .into_iter()
            .flatten()
            .map(Mat2::orders)
            .fold((usize::MAX, usize::MAX), |(a, b), (c, d)| (a.min(c), b.min(d)))
    }
}

impl TEStruct {
    pub fn new(a1: Mat2, a2: Mat2, b: Mat2, kind: Kind) -> Self {
        TEStruct { a1, a2, b, kind }
    }

    pub fn orders(&self) -> (usize, usize) {
        let (a, b, c) = (self.a1.orders(), self.a2.orders(), self.b.orders());
        (a.0.min(b.0).min(c.0), a.1.min(b.1).min(c.1))
    }

    pub fn truncate(&self, nz: usize, nt: usize) -> Self {
        TEStruct {
            a1: self.a1.truncate(nz, nt),
            a2: self.a2.truncate(nz, nt),
            b: self.b.truncate(nz, nt),
            kind: self.kind,
        }
    }

    pub fn eq_to_order(&self, o: &Self, nz: usize, nt: usize) -> bool {
        self.a1.eq_to_order(&o.a1, nz, nt) && self.a2.eq_to_order(&o.a2, nz, nt) && self.b.eq_to_order(&o.b, nz, nt)
    }

    /// Equality at the common truncation order of both structures.
    pub fn eq_at_common_order(&self, o: &Self) -> bool {
        let (a, b) = (self.orders(), o.orders());
        self.eq_to_order(o, a.0.min(b.0), a.1.min(b.1))
    }
}

/// Rt = z∂₁A₂ − z∂₂A₁ + [A₁,A₂] and Rzᵢ = z∂ᵢB − z²∂_zAᵢ + zAᵢ + [Aᵢ,B].
pub fn flatness_residuals(s: &TEStruct) -> Residuals {
    let rt = &(&s.a2.derive_t1().mul_z_pow(1) - &s.a1.derive_t2().mul_z_pow(1)) + &s.a1.commutator(&s.a2);
    let rz = |a: &Mat2, db: Mat2| -> Mat2 {
        let lhs = &db.mul_z_pow(1) - &a.derive_z().mul_z_pow(2);
        &(&lhs + &a.mul_z_pow(1)) + &a.commutator(&s.b)
    };
    let (rz1, rz2) = match s.kind {
        Kind::TOnly => (None, None),
        Kind::TE => (Some(rz(&s.a1, s.b.derive_t1())), Some(rz(&s.a2, s.b.derive_t2()))),
    };
    Residuals { rt, rz1, rz2 }
}

pub fn is_flat(s: &TEStruct) -> bool {
    flatness_residuals(s).is_zero()
}

/// Ãᵢ = T⁻¹(z∂ᵢT + AᵢT), B̃ = T⁻¹(z²∂_zT + BT).
pub fn apply_gauge(s: &TEStruct, t: &Mat2) -> Result<TEStruct> {
    let ti = t.inverse()?;
    let a1 = &ti * &(&t.derive_t1().mul_z_pow(1) + &(&s.a1 * t));
    let a2 = &ti * &(&t.derive_t2_poly().mul_z_pow(1) + &(&s.a2 * t));
    let b = &ti * &(&t.derive_z_poly().mul_z_pow(2) + &(&s.b * t));
    Ok(TEStruct { a1, a2, b, kind: s.kind })
}

/// Pull back along h = (t₁, λ(t₂)) and gauge by T∘h; T lives on the target of h.
pub fn apply_isomorphism(s: &TEStruct, g: &GaugeMap) -> Result<TEStruct> {
    let Some(lam) = &g.h_lambda else { return apply_gauge(s, &g.t) };
    if !lam.coeff(0).is_zero() || lam.coeff(1).is_zero() {
        return Err(Error::NotInvertible("base map must fix 0 with λ'(0) ≠ 0".into()));
    }
    let pulled = TEStruct {
        a1: s.a1.compose_t2(lam)?,
        a2: s.a2.compose_t2(lam)?.mul_t(&lam.derive().with_order(lam.order())),
        b: s.b.compose_t2(lam)?,
        kind: s.kind,
    };
    apply_gauge(&pulled, &g.t.compose_t2(lam)?)
}

/// Solves e₁A₁⁽⁰⁾ + e₂A₂⁽⁰⁾ = −B⁽⁰⁾ and reads off E = e₁∂₁ + e₂∂₂.
pub fn induced_euler(s: &TEStruct) -> Result<EulerField> {
    let at0 = |m: &Mat2| m.components().map(|c| c.zcoeff(0));
    let (a1, a2, b) = (at0(&s.a1), at0(&s.a2), at0(&s.b));
    let nt = s.orders().1;
    let rhs: Vec<AffinePoly1> = b.iter().map(|p| p.scale(&Scalar::int(-1))).collect();
    let unfolding = |m: &str| Error::Unfolding(m.to_string());
    if a1.iter().chain(a2.iter()).any(AffinePoly1::has_t1) {
        return Err(unfolding("A1, A2 must not depend on t1"));
    }
    let coef = |p: &AffinePoly1| p.const_part.clone();
    // pick two rows whose 2x2 minor is a unit
    let mut chosen = None;
    'outer: for i in 0..4 {
        for j in i + 1..4 {
            let det = &(&coef(&a1[i]) * &coef(&a2[j])) - &(&coef(&a1[j]) * &coef(&a2[i]));
            if let Ok(inv) = det.invert_unit() {
                chosen = Some((i, j, inv));
                break 'outer;
            }
        }
    }
    let (i, j, inv) = chosen.ok_or_else(|| unfolding("A1(0), A2(0) are not independent at the origin"))?;
    // Cramer's rule
    let e1 = (&rhs[i].mul_t(&coef(&a2[j])) - &rhs[j].mul_t(&coef(&a2[i]))).mul_t(&inv);
    let e2 = (&rhs[j].mul_t(&coef(&a1[i])) - &rhs[i].mul_t(&coef(&a1[j]))).mul_t(&inv);
    let n = e1.order().min(e2.order()).min(nt);
    for k in 0..4 {
        let lhs = &e1.mul_t(&coef(&a1[k])) + &e2.mul_t(&coef(&a2[k]));
        let diff = &lhs - &rhs[k];
        if !diff.const_part.truncate(n).is_zero() || !diff.t1_coeff.truncate(n).is_zero() {
            return Err(unfolding("-B(0) is not in the span of A1(0), A2(0)"));
        }
    }
    if e2.has_t1() {
        return Err(unfolding("the d/dt2 coefficient depends on t1"));
    }
    let slope = &e1.t1_coeff;
    let c = e1.const_part.coeff(0).clone();
    let shape_ok = slope.coeff(0).is_one()
        && (1..slope.order()).all(|k| slope.coeff(k).is_zero())
        && (1..e1.const_part.order()).all(|k| e1.const_part.coeff(k).is_zero());
    if !shape_ok {
        return Err(unfolding("the d/dt1 coefficient is not t1 + const"));
    }
    Ok(EulerField::new(c, e2.const_part.truncate(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalnf::{Family, NormalFormId};
    use crate::series::ZTSeries;

    fn f1(nz: usize, nt: usize) -> TEStruct {
        NormalFormId::f1(Scalar::int(2), Scalar::frac(1, 3), Scalar::int(-1)).to_structure(nz, nt).unwrap()
    }

    fn z_gauge(nz: usize, nt: usize) -> Mat2 {
        // C1 + z(t C2 + D) + z²E
        let mut t = Mat2::identity(nz, nt);
        t.c2 = ZTSeries::t_monomial(TSeries::var(nt), 1, nz, nt);
        t.d = ZTSeries::z_monomial(Scalar::one(), 1, nz, nt);
        t.e = ZTSeries::z_monomial(Scalar::one(), 2, nz, nt);
        t
    }

    #[test]
    fn normal_forms_are_flat_and_perturbations_are_not() {
        let s = f1(5, 5);
        assert!(is_flat(&s));
        let mut bent = s.clone();
        bent.b.d = &bent.b.d + &ZTSeries::t_monomial(TSeries::var(5), 2, 5, 5);
        let r = flatness_residuals(&bent);
        assert!(!r.is_zero());
        assert!(r.rt.is_zero(), "A1, A2 untouched");
    }

    #[test]
    fn gauges_preserve_flatness_and_compose_with_their_inverse() {
        let (nz, nt) = (5, 6);
        let s = f1(nz, nt);
        let t = z_gauge(nz, nt);
        let moved = apply_gauge(&s, &t).unwrap();
        let r = flatness_residuals(&moved);
        assert!(r.is_zero());
        let back = apply_gauge(&moved, &t.inverse().unwrap()).unwrap();
        assert!(back.eq_to_order(&s, nz, nt - 1));
    }

    #[test]
    fn identity_base_map_is_a_plain_gauge() {
        let (nz, nt) = (4, 5);
        let s = f1(nz, nt);
        let t = z_gauge(nz, nt);
        let a = apply_isomorphism(&s, &GaugeMap::with_base(t.clone(), TSeries::var(nt + 1))).unwrap();
        let b = apply_isomorphism(&s, &GaugeMap::gauge(t)).unwrap();
        assert!(a.eq_at_common_order(&b));
        let bad = GaugeMap::with_base(Mat2::identity(nz, nt), TSeries::from_ints(&[1, 1], nt));
        assert!(apply_isomorphism(&s, &bad).is_err());
    }

    #[test]
    fn induced_euler_of_normal_forms() {
        // NF3-1: B(0) = (−t1 + c)C1, so E = (t1 − c)∂1
        let s = NormalFormId::nf3(Family::Nf3_1, Scalar::int(2), Scalar::zero(), None, None).unwrap().to_structure(3, 4).unwrap();
        let e = induced_euler(&s).unwrap();
        assert_eq!(e.c, Scalar::int(-2));
        assert!(e.g.is_zero());
        let mut degenerate = s.clone();
        degenerate.a2 = degenerate.a1.clone();
        assert!(matches!(induced_euler(&degenerate), Err(Error::Unfolding(_))));
    }
}
