//! Recognition, normal forms, orbit decision and (TE)-realizability of Euler fields.

use std::fmt;

use serde::Serialize;

use crate::connmat::{induced_euler, TEStruct};
use crate::error::{Error, Result};
use crate::euler::EulerField;
use crate::odekit::{solve_riccati_unique_c, solve_scalar};
use crate::series::{Scalar, TSeries};

/// A vector field f∂₁ + g∂₂ with f, g polynomial in t₁; entry k is the t₁ᵏ coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub f: Vec<TSeries>,
    pub g: Vec<TSeries>,
}

fn is_constant(s: &TSeries) -> bool {
    s.coeffs().iter().skip(1).all(Scalar::is_zero)
}

/// Some(E) iff f = t₁ + c and g depends on t₂ only.
pub fn is_euler(vf: &VectorField) -> Option<EulerField> {
    let zero = |s: &TSeries| s.is_zero();
    let f0 = vf.f.first()?;
    let f1 = vf.f.get(1)?;
    let shape_f = is_constant(f0) && is_constant(f1) && f1.coeff(0).is_one() && vf.f.iter().skip(2).all(zero);
    if !shape_f || !vf.g.iter().skip(1).all(zero) {
        return None;
    }
    let n = f0.order();
    let g = vf.g.first().cloned().unwrap_or_else(|| TSeries::zero(n));
    Some(EulerField::new(f0.coeff(0).clone(), g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family")]
pub enum EulerNormalForm {
    /// (t₁ + c)∂₁ + ∂₂
    E1 { c: Scalar },
    /// (t₁ + c)∂₁
    E2 { c: Scalar },
    /// (t₁ + c)∂₁ + c₀t₂∂₂
    E3 { c: Scalar, c0: Scalar },
    /// (t₁ + c)∂₁ + t₂ʳ(1 + c₁t₂ʳ⁻¹)∂₂
    E4 { c: Scalar, r: u32, c1: Scalar },
}

impl fmt::Display for EulerNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerNormalForm::E1 { c } => write!(f, "E1(c={c})"),
            EulerNormalForm::E2 { c } => write!(f, "E2(c={c})"),
            EulerNormalForm::E3 { c, c0 } => write!(f, "E3(c={c}, c0={c0})"),
            EulerNormalForm::E4 { c, r, c1 } => write!(f, "E4(c={c}, r={r}, c1={c1})"),
        }
    }
}

impl EulerNormalForm {
    pub fn c(&self) -> &Scalar {
        match self {
            EulerNormalForm::E1 { c } | EulerNormalForm::E2 { c } => c,
            EulerNormalForm::E3 { c, .. } | EulerNormalForm::E4 { c, .. } => c,
        }
    }

    /// The field itself, g truncated at order n.
    pub fn field(&self, n: usize) -> EulerField {
        let g = match self {
            EulerNormalForm::E1 { .. } => TSeries::one(n),
            EulerNormalForm::E2 { .. } => TSeries::zero(n),
            EulerNormalForm::E3 { c0, .. } => TSeries::monomial(c0.clone(), 1, n),
            EulerNormalForm::E4 { r, c1, .. } => {
                let r = *r as usize;
                &TSeries::monomial(Scalar::one(), r, n) + &TSeries::monomial(c1.clone(), 2 * r - 1, n)
            }
        };
        EulerField::new(self.c().clone(), g)
    }

    /// Checks c₀ ≠ 0 for E3 and r ≥ 2 for E4.
    pub fn validate(&self) -> Result<()> {
        match self {
            EulerNormalForm::E3 { c0, .. } if c0.is_zero() => Err(Error::Domain("E3 needs c0 != 0".into())),
            EulerNormalForm::E4 { r, .. } if *r < 2 => Err(Error::Domain("E4 needs r >= 2".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerNormalization {
    pub normal: EulerNormalForm,
    /// λ with λ_*E equal to the normal form; `None` when λ̃(0) would need an (r−1)-th root
    /// outside Q(i).
    #[serde(serialize_with = "ser_opt_tseries")]
    pub lam: Option<TSeries>,
    /// t-order to which λ and the push-forward identity are exact.
    pub order: usize,
    pub notices: Vec<String>,
}

fn ser_opt_tseries<S: serde::Serializer>(s: &Option<TSeries>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match s {
        Some(t) => crate::cli::report::ser_tseries(t, ser),
        None => ser.serialize_none(),
    }
}

/// t·λ̃ as a series one order longer.
fn times_t(s: &TSeries) -> TSeries {
    let mut cs = vec![Scalar::zero()];
    cs.extend(s.coeffs().iter().cloned());
    let n = cs.len();
    TSeries::from_coeffs(cs, n)
}

/// Normal form of `e` under Aut(N₂) and the automorphism reaching it.
pub fn euler_normal_form(e: &EulerField) -> Result<EulerNormalization> {
    let c = e.c.clone();
    let n = e.g.order();
    let Some(r) = e.g.valuation() else {
        let lam = TSeries::var(n.max(2));
        return Ok(EulerNormalization { normal: EulerNormalForm::E2 { c }, lam: Some(lam), order: n, notices: vec![] });
    };
    match r {
        0 => {
            // t·λ̃' + λ̃ = 1/g
            let sol = solve_scalar(&TSeries::one(n), &e.g.invert_unit()?, None)?;
            let lam = times_t(&sol.u[0]);
            Ok(EulerNormalization { normal: EulerNormalForm::E1 { c }, lam: Some(lam), order: n, notices: vec![] })
        }
        1 => {
            // g = t/f, c₀ = 1/f(0); t·λ̃' + (1 − c₀f)λ̃ = 0 with λ̃(0) = 1
            let u = e.g.unshift(1)?;
            let f = u.invert_unit()?;
            let c0 = u.coeff(0).clone();
            let a = &TSeries::one(f.order()) - &f.scale(&c0);
            let sol = solve_scalar(&a, &TSeries::zero(f.order()), Some(Scalar::one()))?;
            let lam = times_t(&sol.u[0]);
            let order = lam.order().min(n) - 1;
            Ok(EulerNormalization { normal: EulerNormalForm::E3 { c, c0 }, lam: Some(lam), order, notices: vec![] })
        }
        r => {
            // g = tʳf; τ = (1−r)λ̃^{r−1} solves the Riccati equation with F = −1/f, r − 1
            let f = e.g.unshift(r)?;
            let big_f = -f.invert_unit()?;
            let sol = solve_riccati_unique_c(&big_f, r - 1, &Scalar::zero())?;
            let one_minus_r = Scalar::int(1 - r as i64);
            let c1 = &sol.c * &one_minus_r;
            let f0 = f.coeff(0).clone();
            let normal = EulerNormalForm::E4 { c, r: r as u32, c1 };
            let mut notices = vec![];
            let lam = match f0.nth_root(r as u32 - 1) {
                Some(root) => {
                    let unit = sol.tau.scale(&(&one_minus_r * &f0).inv()?);
                    let tl = unit.pow_scalar(&Scalar::frac(1, r as i64 - 1))?.scale(&root);
                    Some(times_t(&tl))
                }
                None => {
                    notices.push(format!("f(0) = {f0} has no exact {}-th root in Q(i); automorphism omitted", r - 1));
                    None
                }
            };
            let order = lam.as_ref().map_or(f.order(), |l| l.order().min(n) - 1).min(f.order() + r - 1);
            Ok(EulerNormalization { normal, lam, order, notices })
        }
    }
}

/// Two normal forms lie in one orbit iff they coincide.
pub fn euler_orbit_decision(n1: &EulerNormalForm, n2: &EulerNormalForm) -> bool {
    n1 == n2
}

/// Induced by some (TE)-structure over N₂.
pub fn realizable_by_te(n: &EulerNormalForm) -> bool {
    match n {
        EulerNormalForm::E4 { r, c1, .. } => *r == 2 && c1.is_zero(),
        _ => true,
    }
}

/// Induced by a Frobenius manifold structure; only the realizable E4 case fails.
pub fn frobenius_realizable(n: &EulerNormalForm) -> bool {
    !matches!(n, EulerNormalForm::E4 { .. })
}

/// Normal form of the Euler field a (TE)-structure induces.
pub fn induced_normal_form(s: &TEStruct) -> Result<EulerNormalization> {
    euler_normal_form(&induced_euler(s)?)
}
