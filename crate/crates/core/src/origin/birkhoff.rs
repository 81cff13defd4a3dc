//! Birkhoff normal forms z⁻²(B₀ + zB_∞)dz of the restricted connection and their isomorphism classes.

use std::fmt;

use serde::Serialize;

use crate::connmat::CMat;
use crate::error::{Error, Result};
use crate::linalg;
use crate::series::Scalar;

/// (c, α, c₀, c₁): B₀ᵒ = cC₁ + c₀C₂, B_∞ = αC₁ + c₁C₂ − D/4 + c₀E.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BirkhoffData {
    pub c: Scalar,
    pub alpha: Scalar,
    pub c0: Scalar,
    pub c1: Scalar,
}

impl BirkhoffData {
    pub fn new(c: Scalar, alpha: Scalar, c0: Scalar, c1: Scalar) -> Result<Self> {
        if c0.is_zero() {
            return Err(Error::Precondition("c0 must be nonzero".into()));
        }
        Ok(BirkhoffData { c, alpha, c0, c1 })
    }

    pub fn b0(&self) -> CMat {
        CMat::new(self.c.clone(), self.c0.clone(), Scalar::zero(), Scalar::zero())
    }

    pub fn binf(&self) -> CMat {
        CMat::new(self.alpha.clone(), self.c1.clone(), Scalar::frac(-1, 4), self.c0.clone())
    }
}

impl fmt::Display for BirkhoffData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c={}, alpha={}, c0={}, c1={})", self.c, self.alpha, self.c0, self.c1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BirkhoffReduction {
    pub b0: CMat,
    pub binf: CMat,
    /// T₀ = Id, T₁, …; the gauge is Σ Tₖzᵏ.
    pub t: Vec<CMat>,
    /// z-orders k at which Tₖ had free directions (set to zero).
    pub resonances: Vec<usize>,
}

impl BirkhoffReduction {
    /// Highest k with Tₖ ≠ 0.
    pub fn gauge_degree(&self) -> usize {
        self.t.iter().rposition(|m| !m.is_zero()).unwrap_or(0)
    }
}

/// z^k coefficient of z²∂_zT + BT − T(B₀ + zB_∞).
fn gauge_equation(b: &[CMat], t: &[CMat], binf: &CMat, k: usize) -> CMat {
    let mut acc = CMat::zero();
    if k >= 1 {
        acc = &acc + &t[k - 1].scale(&Scalar::int(k as i64 - 1));
        acc = &acc - &(&t[k - 1] * binf);
    }
    for l in 0..=k.min(b.len() - 1) {
        acc = &acc + &(&b[l] * &t[k - l]);
    }
    &acc - &(&t[k] * &b[0])
}

fn solve_up_to(b: &[CMat], binf: &CMat, m: usize) -> Option<(Vec<CMat>, Vec<usize>)> {
    let build = |x: &[Scalar]| -> Vec<CMat> {
        let mut t = vec![CMat::identity()];
        t.extend(x.chunks(4).map(|c| CMat::from_coords([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()])));
        t
    };
    let (a, off) = linalg::matrix_of(4 * m, |x| {
        let t = build(x);
        (1..=m).flat_map(|k| gauge_equation(b, &t, binf, k).coords()).collect()
    });
    let rhs: Vec<Scalar> = off.iter().map(|s| -s.clone()).collect();
    let sol = linalg::solve(&a, &rhs)?;
    let mut res: Vec<usize> = sol.free_vars.iter().map(|v| v / 4 + 1).collect();
    res.dedup();
    Some((build(&sol.particular), res))
}

/// Solves z²∂_zT + B(z)T − T(B₀ + zB_∞) = 0 term by term with T₀ = Id, B₀ = B⁽⁰⁾, B_∞ = B⁽¹⁾.
///
/// The linear system for T₁, …, T_{N−1} is solved jointly, so a free direction of Tₖ can be
/// used to clear an obstruction at a later order.
pub fn birkhoff_reduce(b: &[CMat]) -> Result<BirkhoffReduction> {
    let n = b.len();
    if n == 0 {
        return Err(Error::Precondition("empty z-series".into()));
    }
    let b0 = b[0].clone();
    let binf = b.get(1).cloned().unwrap_or_else(CMat::zero);
    // residue must be cC₁ + c₀C₂ up to conjugacy: one eigenvalue, not scalar
    let tr_half = &b0.trace() * &Scalar::frac(1, 2);
    let nilp = &b0 - &CMat::identity().scale(&tr_half);
    if nilp.is_zero() || !nilp.det().is_zero() {
        return Err(Error::Precondition("residue must be a single Jordan block".into()));
    }
    let m = n - 1;
    if m == 0 {
        return Ok(BirkhoffReduction { b0, binf, t: vec![CMat::identity()], resonances: vec![] });
    }
    match solve_up_to(b, &binf, m) {
        Some((t, resonances)) => Ok(BirkhoffReduction { b0, binf, t, resonances }),
        None => {
            let order = (1..=m).find(|&k| solve_up_to(b, &binf, k).is_none()).unwrap_or(m);
            Err(Error::ReductionFailed { order })
        }
    }
}

/// Residual of the reduction at every order below the input length.
pub fn reduction_residual(b: &[CMat], red: &BirkhoffReduction) -> Vec<CMat> {
    let mut t = red.t.clone();
    t.resize(b.len(), CMat::zero());
    (0..b.len()).map(|k| gauge_equation(b, &t, &red.binf, k)).collect()
}

/// Brings (B₀ᵒ, B_∞) into the shape of [`BirkhoffData`] by constant gauges; returns the
/// data and the product gauge T (acting by B ↦ T⁻¹BT).
pub fn normalize_birkhoff(b0: &CMat, binf: &CMat) -> Result<(BirkhoffData, CMat)> {
    if !b0.d.is_zero() || !b0.e.is_zero() || b0.c2.is_zero() {
        return Err(Error::Precondition("B0 must be cC1 + c0C2 with c0 != 0".into()));
    }
    if binf.e.is_zero() {
        return Err(Error::Precondition("the E-coefficient of B_inf must be nonzero".into()));
    }
    let (c, c0) = (b0.c1.clone(), b0.c2.clone());
    let quarter = Scalar::frac(1, 4);
    let s = -(&(&binf.d + &quarter) / &binf.e);
    let t1 = CMat::new(Scalar::one(), s, Scalar::zero(), Scalar::zero());
    let mut t = t1.clone();
    let mut bi = binf.conjugate_by(&t1)?;
    let mut c0_new = c0.clone();
    if bi.e != c0 {
        let prod = &c0 * &bi.e;
        let ct = prod.sqrt().ok_or_else(|| Error::ExactField(format!("c0*f = {prod} has no square root in Q(i)")))?;
        let den = (&c0 - &ct).inv()?;
        let m2 = Scalar::int(-2);
        let t2 = CMat::diag(&(&(&m2 * &ct) * &den), &(&(&m2 * &c0) * &den));
        bi = bi.conjugate_by(&t2)?;
        t = &t * &t2;
        c0_new = ct;
    }
    let b0_new = b0.conjugate_by(&t)?;
    debug_assert_eq!(b0_new, CMat::new(c.clone(), c0_new.clone(), Scalar::zero(), Scalar::zero()));
    debug_assert_eq!(bi.d, -quarter.clone());
    debug_assert_eq!(bi.e, c0_new);
    Ok((BirkhoffData::new(c, bi.c1.clone(), c0_new, bi.c2.clone())?, t))
}

/// Which clause decided a Birkhoff isomorphism question.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum BirkhoffClause {
    /// c, α or c₀² differ.
    Invariants,
    Identical,
    /// The constant gauge diag(1, −1).
    SignFlip,
    /// gen-c01 and gen-cc hold for this n.
    Resonance { n: u64, epsilon: i8 },
    /// No n ≤ n_max satisfies both conditions.
    NoResonance { epsilon: i8 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirkhoffDecision {
    pub isomorphic: bool,
    pub certificate: BirkhoffClause,
    pub n_max: u64,
    /// Any admissible n is at most this, from a root bound on the quartic in n.
    pub n_bound: u64,
    /// Set when two criteria disagree on the same pair.
    pub flags: Vec<String>,
}

impl BirkhoffDecision {
    pub fn has_inconsistency_flag(&self) -> bool {
        !self.flags.is_empty()
    }
}

/// (2n−1)(2n−3)(n−1)².
fn q(n: i64) -> Scalar {
    Scalar::int((2 * n - 1) * (2 * n - 3) * (n - 1) * (n - 1))
}

fn gen_c01(c0: &Scalar, c1: &Scalar, c1t: &Scalar, eps: &Scalar, n: i64) -> bool {
    let minus = c1 - &(eps * c1t);
    let plus = c1 + &(eps * c1t);
    let t1 = &(&(&Scalar::int(4) * c0) * c0) * &(&minus * &minus);
    let t2 = &(&Scalar::int(8 * (n - 1) * (n - 1)) * c0) * &plus;
    (&(&t1 - &t2) + &q(n)).is_zero()
}

fn gen_cc(c0: &Scalar, c1: &Scalar, c1t: &Scalar, eps: &Scalar, n: i64) -> bool {
    let lhs = c0 * &(c1 + &(eps * c1t));
    (2..n).all(|r| {
        let rhs = &(&q(n) - &q(r)) / &Scalar::int(8 * (n - r) * (n - 2 + r));
        lhs != rhs
    })
}

/// Upper bound for admissible n: with m = n − 1 and u = m², gen-c01 reads
/// 4u² − (1 + 8P)u + 4Q = 0, so |u| ≤ 1 + max(|1 + 8P|, 4|Q|)/4.
fn n_root_bound(c0: &Scalar, c1: &Scalar, c1t: &Scalar, eps: &Scalar) -> u64 {
    let p = c0 * &(c1 + &(eps * c1t));
    let diff = c1 - &(eps * c1t);
    let qq = &(c0 * c0) * &(&diff * &diff);
    let abs = |s: &Scalar| -> f64 {
        let n = s.norm_sqr();
        let f = num_traits::ToPrimitive::to_f64(&n).unwrap_or(f64::INFINITY);
        f.sqrt()
    };
    let a = abs(&(&Scalar::one() + &(&Scalar::int(8) * &p)));
    let b = 4.0 * abs(&qq);
    let u = 1.0 + a.max(b) / 4.0;
    let m = u.sqrt().ceil();
    if m.is_finite() && m < 1e15 {
        m as u64 + 2
    } else {
        u64::MAX
    }
}

/// Decides whether the Birkhoff forms of `d1` and `d2` are holomorphically isomorphic.
pub fn birkhoff_iso_decision(d1: &BirkhoffData, d2: &BirkhoffData, n_max: u64) -> Result<BirkhoffDecision> {
    if d1.c0.is_zero() || d2.c0.is_zero() {
        return Err(Error::Precondition("c0 and c0~ must be nonzero".into()));
    }
    let mk = |isomorphic, certificate, n_bound, flags| BirkhoffDecision { isomorphic, certificate, n_max, n_bound, flags };
    let eps = if d1.c0 == d2.c0 {
        Scalar::one()
    } else if d1.c0 == -d2.c0.clone() {
        Scalar::int(-1)
    } else {
        return Ok(mk(false, BirkhoffClause::Invariants, 0, vec![]));
    };
    if d1.c != d2.c || d1.alpha != d2.alpha {
        return Ok(mk(false, BirkhoffClause::Invariants, 0, vec![]));
    }
    let eps_i: i8 = if eps.is_one() { 1 } else { -1 };
    let (c0, c1, c1t) = (&d1.c0, &d1.c1, &d2.c1);
    let bound = n_root_bound(c0, c1, c1t, &eps);
    let search = || {
        (2..=n_max.min(bound).max(1) as i64).find(|&n| gen_c01(c0, c1, c1t, &eps, n) && gen_cc(c0, c1, c1t, &eps, n))
    };
    if d1 == d2 {
        return Ok(mk(true, BirkhoffClause::Identical, bound, vec![]));
    }
    if eps_i == -1 && *c1t == -c1.clone() {
        let mut flags = vec![];
        if search().is_none() {
            flags.push(format!(
                "diag(1,-1) maps one form to the other, but no n in [2, {}] satisfies the general resonance condition",
                n_max.min(bound)
            ));
        }
        return Ok(mk(true, BirkhoffClause::SignFlip, bound, flags));
    }
    Ok(match search() {
        Some(n) => mk(true, BirkhoffClause::Resonance { n: n as u64, epsilon: eps_i }, bound, vec![]),
        None => mk(false, BirkhoffClause::NoResonance { epsilon: eps_i }, bound, vec![]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    fn data(c0: Scalar, c1: Scalar) -> BirkhoffData {
        BirkhoffData::new(s(1), s(2), c0, c1).unwrap()
    }

    #[test]
    fn sign_flip_and_flag() {
        let d = birkhoff_iso_decision(&data(s(3), s(0)), &data(s(-3), s(0)), 64).unwrap();
        assert!(d.isomorphic);
        assert_eq!(d.certificate, BirkhoffClause::SignFlip);
        assert!(d.has_inconsistency_flag());
    }

    #[test]
    fn resonance_values() {
        let c0 = s(2);
        let c1 = &Scalar::frac(3, 2) / &c0;
        let d = birkhoff_iso_decision(&data(c0.clone(), c1), &data(c0.clone(), s(0)), 64).unwrap();
        assert_eq!(d.certificate, BirkhoffClause::Resonance { n: 2, epsilon: 1 });
        let d = birkhoff_iso_decision(&data(c0.clone(), Scalar::frac(1, 2)), &data(c0, s(0)), 64).unwrap();
        assert!(!d.isomorphic);
    }

    #[test]
    fn almost_fin_is_fixed_by_normalization() {
        let d = data(s(3), Scalar::frac(1, 5));
        let (out, t) = normalize_birkhoff(&d.b0(), &d.binf()).unwrap();
        assert_eq!(out, d);
        assert_eq!(t, CMat::identity());
    }

    #[test]
    fn normalization_moves_y_and_f() {
        // y = 1/4, f = 12, c0 = 3: c0 f = 36
        let b0 = CMat::new(s(1), s(3), s(0), s(0));
        let binf = CMat::new(s(2), s(5), Scalar::frac(1, 4), s(12));
        let (out, t) = normalize_birkhoff(&b0, &binf).unwrap();
        assert_eq!(out.binf(), binf.conjugate_by(&t).unwrap());
        assert_eq!(out.b0(), b0.conjugate_by(&t).unwrap());
        assert_eq!(&out.c0 * &out.c0, s(36));
        assert!(matches!(normalize_birkhoff(&b0, &CMat::new(s(2), s(5), s(0), s(2))), Err(Error::ExactField(_))));
    }

    #[test]
    fn polynomial_input_is_already_reduced() {
        let d = data(s(3), Scalar::frac(1, 5));
        let r = birkhoff_reduce(&[d.b0(), d.binf(), CMat::zero(), CMat::zero()]).unwrap();
        assert_eq!(r.gauge_degree(), 0);
        assert_eq!((r.b0, r.binf), (d.b0(), d.binf()));
    }

    #[test]
    fn reduction_of_a_gauged_form() {
        // X commutes with B₀, so the gauged form keeps B⁽¹⁾ = B_∞
        let d = data(s(3), Scalar::frac(1, 5));
        let x = CMat::new(s(2), s(1), s(0), s(0));
        let n = 6;
        // B̃ = T⁻¹(B + z²∂_z)T computed order by order: (Id + zX)B̃ = B(Id + zX) + z²X
        let bpoly = [d.b0(), d.binf()];
        let mut bt: Vec<CMat> = Vec::new();
        for k in 0..n {
            let mut rhs = CMat::zero();
            for l in 0..=k.min(1) {
                if k - l == 0 {
                    rhs = &rhs + &bpoly[l];
                } else if k - l == 1 {
                    rhs = &rhs + &(&bpoly[l] * &x);
                }
            }
            if k == 2 {
                rhs = &rhs + &x;
            }
            if k >= 1 {
                rhs = &rhs - &(&x * &bt[k - 1]);
            }
            bt.push(rhs);
        }
        let red = birkhoff_reduce(&bt).unwrap();
        assert!(reduction_residual(&bt, &red).iter().all(CMat::is_zero));
        assert_eq!((red.b0.clone(), red.binf.clone()), (d.b0(), d.binf()));
        assert!(red.gauge_degree() >= 1);
    }
}
