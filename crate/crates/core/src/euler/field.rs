//! Euler fields E = (t₁ + c)∂₁ + g(t₂)∂₂.

use serde::Serialize;

use crate::error::Result;
use crate::series::{Scalar, TSeries};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerField {
    pub c: Scalar,
    #[serde(serialize_with = "crate::cli::report::ser_tseries")]
    pub g: TSeries,
}

impl EulerField {
    pub fn new(c: Scalar, g: TSeries) -> Self {
        EulerField { c, g }
    }

    /// Image under the automorphism (t₁, t₂) ↦ (t₁, λ(t₂)): g ↦ (λ'·g)∘λ⁻¹.
    pub fn push_forward(&self, lam: &TSeries) -> Result<EulerField> {
        let moved = &lam.derive() * &self.g;
        let g = moved.compose_aut(&lam.reverse()?.truncate(moved.order()))?;
        Ok(EulerField { c: self.c.clone(), g })
    }

    /// Pull-back along λ: g ↦ (g∘λ)/λ'.
    pub fn pull_back(&self, lam: &TSeries) -> Result<EulerField> {
        let g = self.g.compose_aut(lam)?.div_unit(&lam.derive())?;
        Ok(EulerField { c: self.c.clone(), g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cs: &[i64], n: usize) -> TSeries {
        TSeries::from_ints(cs, n)
    }

    #[test]
    fn scaling_acts_on_monomials() {
        // λ = 2t: g = t is fixed, g = t² becomes t²/2
        let lam = ints(&[0, 2], 6);
        let e = EulerField::new(Scalar::one(), ints(&[0, 1], 6));
        assert_eq!(e.push_forward(&lam).unwrap().g, ints(&[0, 1], 5));
        let e = EulerField::new(Scalar::one(), ints(&[0, 0, 1], 6));
        let pushed = e.push_forward(&lam).unwrap();
        assert_eq!(pushed.g.coeff(2), &Scalar::frac(1, 2));
        assert_eq!(pushed.c, Scalar::one());
    }

    #[test]
    fn pull_back_inverts_push_forward() {
        let lam = ints(&[0, 1, 3, -1], 8);
        let e = EulerField::new(Scalar::int(2), ints(&[0, 0, 1, 1, 5], 8));
        let back = e.push_forward(&lam).unwrap().pull_back(&lam).unwrap();
        let n = back.g.order().min(e.g.order());
        assert_eq!(back.g.truncate(n), e.g.truncate(n));
    }

    #[test]
    fn base_map_must_be_invertible() {
        let e = EulerField::new(Scalar::zero(), ints(&[1], 4));
        assert!(e.push_forward(&ints(&[0, 0, 1], 4)).is_err());
    }
}
