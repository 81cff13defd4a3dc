//! The one-variable connection obtained by restricting to t₁ = t₂ = 0.

use serde::Serialize;

use crate::connmat::{CMat, TEStruct};
use crate::error::Result;
use crate::formalnf::PreNormalForm;
use crate::series::{Scalar, TSeries};

/// η = b₂, λ = ∂₂b₂, β = ∂₂²b₂, γ = f at t = 0, as series in z.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OriginRestriction {
    #[serde(serialize_with = "crate::cli::report::ser_tseries")]
    pub eta: TSeries,
    #[serde(serialize_with = "crate::cli::report::ser_tseries")]
    pub lam: TSeries,
    #[serde(serialize_with = "crate::cli::report::ser_tseries")]
    pub beta: TSeries,
    #[serde(serialize_with = "crate::cli::report::ser_tseries")]
    pub gam: TSeries,
    pub c: Scalar,
    pub alpha: Scalar,
}

impl OriginRestriction {
    pub fn from_prenormal(p: &PreNormalForm) -> Self {
        OriginRestriction {
            eta: p.b2.t2_coeff_series(0),
            lam: p.b2.t2_coeff_series(1),
            beta: p.b2.t2_coeff_series(2).scale(&Scalar::int(2)),
            gam: p.f.t2_coeff_series(0),
            c: p.c.clone(),
            alpha: p.alpha.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.eta.order()
    }

    /// z-coefficients of (c + zα)C₁ + ηC₂ − z(λ+1)/2·D + z(−zβ/2 + γη)E.
    pub fn matrix_coeffs(&self) -> Vec<CMat> {
        let n = self.order();
        let ge = &self.gam * &self.eta;
        let half = Scalar::frac(1, 2);
        (0..n)
            .map(|k| {
                let c1 = match k {
                    0 => self.c.clone(),
                    1 => self.alpha.clone(),
                    _ => Scalar::zero(),
                };
                let d = if k == 0 {
                    Scalar::zero()
                } else {
                    let l = self.lam.coeff(k - 1) + &if k == 1 { Scalar::one() } else { Scalar::zero() };
                    -(&l * &half)
                };
                let mut e = if k >= 1 { ge.coeff(k - 1).clone() } else { Scalar::zero() };
                if k >= 2 {
                    e -= &(self.beta.coeff(k - 2) * &half);
                }
                CMat::new(c1, self.eta.coeff(k).clone(), d, e)
            })
            .collect()
    }
}

/// Restriction of a pre-normal structure to the slice t = 0.
pub fn restrict_origin(s: &TEStruct) -> Result<OriginRestriction> {
    Ok(OriginRestriction::from_prenormal(&PreNormalForm::from_structure(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalnf::NormalFormId;

    #[test]
    fn restriction_of_f1_and_fr() {
        let (c0, c) = (Scalar::int(3), Scalar::int(2));
        let s = NormalFormId::f1(c.clone(), Scalar::int(1), c0.clone()).to_structure(4, 4).unwrap();
        let r = restrict_origin(&s).unwrap();
        assert_eq!(r.eta, TSeries::constant(c0.clone(), 4));
        assert_eq!(r.lam, TSeries::constant(Scalar::frac(-1, 2), 4));
        let m = r.matrix_coeffs();
        // B(z) at the origin: cC₁ + c₀C₂ + z(αC₁ − D/4 + c₀E)
        assert_eq!(m[0], CMat::new(c, c0.clone(), Scalar::zero(), Scalar::zero()));
        assert_eq!(m[1], CMat::new(Scalar::int(1), Scalar::zero(), Scalar::frac(-1, 4), c0));
        let fr = NormalFormId::fr(Scalar::zero(), Scalar::zero(), 2).unwrap().to_structure(3, 5).unwrap();
        let r = restrict_origin(&fr).unwrap();
        assert!(r.eta.is_zero() && r.gam.is_zero());
        assert_eq!(r.lam, TSeries::constant(Scalar::frac(-1, 4), 3));
    }

    #[test]
    fn matrix_matches_structure_at_origin() {
        let id = NormalFormId::new(
            crate::formalnf::Family::HnfMal2,
            Scalar::int(1),
            Scalar::int(2),
            &[("c0", Scalar::int(3)), ("lambda", Scalar::frac(1, 2))],
        )
        .unwrap();
        let s = id.to_structure(5, 5).unwrap();
        let r = restrict_origin(&s).unwrap();
        for (k, m) in r.matrix_coeffs().iter().enumerate() {
            let mut want = s.b.origin_coeff(k);
            if k == 0 {
                // t₁ = 0 already; nothing to remove
                want[0] = want[0].clone();
            }
            assert_eq!(m.coords(), want, "z^{k}");
        }
    }
}
