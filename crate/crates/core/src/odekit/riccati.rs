//! t·τ' + r·τ = τ²·f·(1 + c·tʳ·τ): the constant c is forced by solvability at order r.
//!
//! The Euler-field normalization uses the same equation with r ↦ r−1, f ↦ −1/f and
//! c ↦ c₁/(1−r); see `euler::normal_form`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{Scalar, TSeries};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiccatiSolution {
    pub c: Scalar,
    #[serde(skip)]
    pub tau: TSeries,
    pub r: usize,
    pub free_index_value: Scalar,
}

/// [Σ_{j+k+p=n} f_j τ_k τ_p] restricted to k, p < n.
fn cubic_sum(f: &TSeries, tau: &[Scalar], n: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for k in 0..n.min(tau.len()) {
        for p in 0..(n - k + 1).min(tau.len()) {
            if k + p > n || k >= n || p >= n {
                continue;
            }
            let j = n - k - p;
            let fj = f.coeff(j);
            if !fj.is_zero() && !tau[k].is_zero() && !tau[p].is_zero() {
                acc += &(&(fj * &tau[k]) * &tau[p]);
            }
        }
    }
    acc
}

/// Σ_{j+k+p+s=m} τ_j τ_k τ_p f_s.
fn quartic_sum(f: &TSeries, tau: &[Scalar], m: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for j in 0..=m {
        for k in 0..=m - j {
            for p in 0..=m - j - k {
                let s = m - j - k - p;
                let fs = f.coeff(s);
                if fs.is_zero() {
                    continue;
                }
                acc += &(&(&(&tau[j] * &tau[k]) * &tau[p]) * fs);
            }
        }
    }
    acc
}

/// Solves the equation to the order of `f`, fixing τ_r = `tau_r`.
pub fn solve_riccati_unique_c(f: &TSeries, r: usize, tau_r: &Scalar) -> Result<RiccatiSolution> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let f0 = f.coeff(0).inv().map_err(|_| Error::NotAUnit("f(0) = 0".into()))?;
    let n_ord = f.order();
    let rs = Scalar::int(r as i64);
    let tau0 = &rs * &f0;
    let mut tau: Vec<Scalar> = vec![tau0.clone()];
    let mut c = Scalar::zero();
    for n in 1..n_ord.max(r + 1) {
        if n == r {
            let denom = &(&(&tau0 * &tau0) * &tau0) * f.coeff(0);
            c = -(&cubic_sum(f, &tau, n) / &denom);
            tau.push(tau_r.clone());
            continue;
        }
        let mut rhs = cubic_sum(f, &tau, n);
        if n > r {
            rhs += &(&c * &quartic_sum(f, &tau, n - r));
        }
        tau.push(&rhs / &Scalar::int(n as i64 - r as i64));
    }
    tau.truncate(n_ord);
    Ok(RiccatiSolution { c, tau: TSeries::from_coeffs(tau, n_ord), r, free_index_value: tau_r.clone() })
}

/// t·τ' + r·τ − τ²·f·(1 + c·tʳ·τ).
pub fn riccati_residual(f: &TSeries, r: usize, c: &Scalar, tau: &TSeries) -> TSeries {
    let n = f.order().min(tau.order());
    let tau2 = tau * tau;
    let bracket = &TSeries::one(n) + &(&tau.shift(r) * &TSeries::constant(c.clone(), n));
    let rhs = &(&tau2 * f) * &bracket;
    &(&tau.euler_op() + &tau.scale(&Scalar::int(r as i64))) - &rhs
}
