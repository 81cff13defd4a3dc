//! Linear systems t·u' + A(t)·u = b(t) solved by coefficient recursion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::series::{Scalar, TSeries};

/// A resonant step: at tⁿ the matrix n·Id + A(0) is singular and `count` directions were free.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeParameter {
    pub order: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearOdeSolution {
    pub u: Vec<TSeries>,
    pub free: Vec<FreeParameter>,
}

/// Solves t·u̇ + A u = b to the common truncation order.
///
/// At resonant orders the free directions take the weights in `pins[n]` (zero by default);
/// their number is reported in [`LinearOdeSolution::free`].
pub fn solve_linear_t_ode(
    a: &[Vec<TSeries>],
    b: &[TSeries],
    pins: &BTreeMap<usize, Vec<Scalar>>,
) -> Result<LinearOdeSolution> {
    let d = b.len();
    if a.len() != d || a.iter().any(|row| row.len() != d) {
        return Err(Error::Shape("matrix and vector sizes differ".into()));
    }
    let n_ord = a
        .iter()
        .flatten()
        .map(TSeries::order)
        .chain(b.iter().map(TSeries::order))
        .min()
        .unwrap_or(0);
    let mut u: Vec<Vec<Scalar>> = vec![Vec::with_capacity(n_ord); d];
    let mut free = Vec::new();
    for n in 0..n_ord {
        let m: Vec<Vec<Scalar>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut x = a[i][j].coeff(0).clone();
                        if i == j {
                            x += &Scalar::int(n as i64);
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<Scalar> = (0..d)
            .map(|i| {
                let mut acc = b[i].coeff(n).clone();
                for k in 1..=n {
                    for j in 0..d {
                        let ak = a[i][j].coeff(k);
                        if !ak.is_zero() {
                            acc -= &(ak * &u[j][n - k]);
                        }
                    }
                }
                acc
            })
            .collect();
        let sol = linalg::solve(&m, &rhs).ok_or(Error::NoFormalSolution { order: n })?;
        let x = if sol.is_unique() {
            sol.particular
        } else {
            free.push(FreeParameter { order: n, count: sol.free_vars.len() });
            let w = pins.get(&n).cloned().unwrap_or_default();
            let mut weights = vec![Scalar::zero(); sol.free_vars.len()];
            for (slot, v) in weights.iter_mut().zip(w) {
                *slot = v;
            }
            sol.with_free(&weights)
        };
        for (uj, xj) in u.iter_mut().zip(x) {
            uj.push(xj);
        }
    }
    let u = u.into_iter().map(|c| TSeries::from_coeffs(c, n_ord)).collect();
    Ok(LinearOdeSolution { u, free })
}

/// Scalar convenience form: t·u̇ + a·u = b.
pub fn solve_scalar(a: &TSeries, b: &TSeries, pin: Option<Scalar>) -> Result<LinearOdeSolution> {
    let mut pins = BTreeMap::new();
    if let Some(p) = pin {
        // a resonance can only occur at the single n with n + a(0) = 0
        if let Some(n) = (-a.coeff(0)).to_i64().filter(|n| *n >= 0) {
            pins.insert(n as usize, vec![p]);
        }
    }
    solve_linear_t_ode(&[vec![a.clone()]], std::slice::from_ref(b), &pins)
}

/// t·u̇ + A u − b, for residual checks.
pub fn linear_residual(a: &[Vec<TSeries>], b: &[TSeries], u: &[TSeries]) -> Vec<TSeries> {
    (0..b.len())
        .map(|i| {
            let mut r = &u[i].euler_op() - &b[i];
            for j in 0..u.len() {
                r = &r + &(&a[i][j] * &u[j]);
            }
            r
        })
        .collect()
}
