//! Order-by-order solver for gauge automorphisms of the (T)-structures A₂ = C₂ + zE and
//! A₂ = C₂, with prescribed slots of the target b̃₂ left free to absorb obstructions.
//!
//! The z^r coefficient of z²∂_zT + BT − TB̃ is
//! (r−1)T⁽ʳ⁻¹⁾ + Σ_l (B⁽ˡ⁾T⁽ʳ⁻ˡ⁾ − T⁽ʳ⁻ˡ⁾B̃⁽ˡ⁾); it is affine in the parameters of T⁽ʳ⁻¹⁾
//! and in the absorber slot at order r, and independent of the parameters of T⁽ʳ⁾.

use crate::connmat::Mat2;
use crate::error::{Error, Result};
use crate::linalg;
use crate::series::{AffinePoly1, Scalar, TSeries, ZTSeries};

/// Which automorphism group the gauge is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Template {
    /// T⁽ⁿ⁾ = τ₁⁽ⁿ⁾C₁ + τ₂⁽ⁿ⁾C₂ + τ₂⁽ⁿ⁻¹⁾E with constant τ's.
    FOne,
    /// T⁽ⁿ⁾ = τ₁⁽ⁿ⁾C₁ + τ₂⁽ⁿ⁾C₂ − ½∂τ₂⁽ⁿ⁻¹⁾D − ½∂²τ₂⁽ⁿ⁻²⁾E with τ₂⁽ⁿ⁾ quadratic.
    FZero,
}

impl Template {
    fn width(self) -> usize {
        match self {
            Template::FOne => 2,
            Template::FZero => 4,
        }
    }
}

/// Basis coordinates over t₂-series.
#[derive(Clone, Debug, PartialEq)]
struct TMat([TSeries; 4]);

impl TMat {
    fn zero(nt: usize) -> Self {
        TMat(std::array::from_fn(|_| TSeries::zero(nt)))
    }

    fn add(&self, o: &Self) -> Self {
        TMat(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }

    fn sub(&self, o: &Self) -> Self {
        TMat(std::array::from_fn(|k| &self.0[k] - &o.0[k]))
    }

    fn scale(&self, c: &Scalar) -> Self {
        TMat(std::array::from_fn(|k| self.0[k].scale(c)))
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(TSeries::is_zero)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return TMat::zero(self.0[0].order().min(o.0[0].order()));
        }
        let [c1, c2, d, e] = &self.0;
        let (a11, a12, a21, a22) = (c1 + d, e.clone(), c2.clone(), c1 - d);
        let [c1, c2, d, e] = &o.0;
        let (b11, b12, b21, b22) = (c1 + d, e.clone(), c2.clone(), c1 - d);
        let m11 = &(&a11 * &b11) + &(&a12 * &b21);
        let m12 = &(&a11 * &b12) + &(&a12 * &b22);
        let m21 = &(&a21 * &b11) + &(&a22 * &b21);
        let m22 = &(&a21 * &b12) + &(&a22 * &b22);
        let h = Scalar::frac(1, 2);
        TMat([(&m11 + &m22).scale(&h), m21, (&m11 - &m22).scale(&h), m12])
    }

    fn flatten(&self) -> Vec<Scalar> {
        self.0.iter().flat_map(|s| s.coeffs().iter().cloned()).collect()
    }
}

/// The non-scalar part of B⁽ˡ⁾ for pre-normal data: b₂⁽ˡ⁾C₂ + b₃⁽ˡ⁻¹⁾D + b₄⁽ˡ⁻¹⁾E.
fn b_coeff(b2: &[TSeries], f: &[TSeries], l: usize, nt: usize) -> TMat {
    let d = |s: &TSeries| s.derive().with_order(nt);
    let mut m = TMat::zero(nt);
    if let Some(s) = b2.get(l) {
        m.0[1] = s.clone();
    }
    if l >= 1 {
        let j = l - 1;
        let mut b3 = d(&b2[j]);
        if j == 0 {
            b3 = &b3 + &TSeries::one(nt);
        }
        m.0[2] = b3.scale(&Scalar::frac(-1, 2));
        let mut b4 = if j >= 1 { d(&d(&b2[j - 1])).scale(&Scalar::frac(-1, 2)) } else { TSeries::zero(nt) };
        for i in 0..=j {
            if !f[i].is_zero() && !b2[j - i].is_zero() {
                b4 = &b4 + &(&f[i] * &b2[j - i]);
            }
        }
        m.0[3] = b4;
    }
    m
}

fn t_coeff(tpl: Template, params: &[Vec<Scalar>], n: isize, nt: usize) -> TMat {
    let get = |k: isize| -> Option<&Vec<Scalar>> { (k >= 0).then(|| params.get(k as usize)).flatten() };
    let mut m = TMat::zero(nt);
    let Some(p) = get(n) else {
        // D/E parts of T⁽ⁿ⁾ can still be nonzero through lower orders
        return with_lower(tpl, m, get(n - 1), get(n - 2), nt);
    };
    m.0[0] = TSeries::constant(p[0].clone(), nt);
    m.0[1] = match tpl {
        Template::FOne => TSeries::constant(p[1].clone(), nt),
        Template::FZero => TSeries::from_coeffs(p[1..4].to_vec(), nt),
    };
    with_lower(tpl, m, get(n - 1), get(n - 2), nt)
}

fn with_lower(tpl: Template, mut m: TMat, p1: Option<&Vec<Scalar>>, p2: Option<&Vec<Scalar>>, nt: usize) -> TMat {
    match tpl {
        Template::FOne => {
            if let Some(p) = p1 {
                m.0[3] = TSeries::constant(p[1].clone(), nt);
            }
        }
        Template::FZero => {
            if let Some(p) = p1 {
                // −½ ∂(q₀ + q₁t + q₂t²)
                m.0[2] = TSeries::from_coeffs(vec![-(&p[2] * &Scalar::frac(1, 2)), -p[3].clone()], nt);
            }
            if let Some(p) = p2 {
                m.0[3] = TSeries::constant(-p[3].clone(), nt);
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub(crate) struct EngineOutput {
    /// The gauge, a polynomial in z of degree < N_z.
    pub t: Mat2,
    /// (order r, t-power, value) of every absorber slot reached within the truncation.
    pub absorbed: Vec<(usize, usize, Scalar)>,
}

/// Solves for T with τ₁⁽⁰⁾ = 1 mapping (f, b₂) to (f, b̃₂) where b̃₂⁽⁰⁾ = b₂⁽⁰⁾ and b̃₂⁽ʳ⁾
/// vanishes except at the slot `absorber(r)` (a t-power).
pub(crate) fn solve_gauge(
    tpl: Template,
    f: &ZTSeries,
    b2: &ZTSeries,
    absorber: impl Fn(usize) -> Option<usize>,
) -> Result<EngineOutput> {
    let (nz, nt) = b2.orders();
    let fz: Vec<TSeries> = (0..nz).map(|k| f.tcoeff(k)).collect();
    let bz: Vec<TSeries> = (0..nz).map(|k| b2.tcoeff(k)).collect();
    let src: Vec<TMat> = (0..nz).map(|l| b_coeff(&bz, &fz, l, nt)).collect();
    let w = tpl.width();
    let mut params: Vec<Vec<Scalar>> = Vec::new();
    let mut tb2: Vec<TSeries> = vec![bz[0].clone()];
    let mut absorbed = Vec::new();
    for r in 1..nz {
        let slot = absorber(r);
        let nvars = w + usize::from(slot.is_some());
        let relation = |x: &[Scalar]| -> Vec<Scalar> {
            let mut ps = params.clone();
            ps.push(x[..w].to_vec());
            if r == 1 {
                // τ₁⁽⁰⁾ multiplies the absorber at r = 1; fixing it keeps the relation affine
                ps[0][0] = Scalar::one();
            }
            let mut target = tb2.clone();
            let mut top = TSeries::zero(nt);
            if let Some(k) = slot {
                top.set_coeff(k, x[w].clone());
            }
            target.push(top);
            let tc: Vec<TMat> = (0..=r).map(|j| t_coeff(tpl, &ps, j as isize, nt)).collect();
            let mut acc = tc[r - 1].scale(&Scalar::int(r as i64 - 1));
            for l in 0..=r {
                let tl = &tc[r - l];
                let bt = b_coeff(&target, &fz, l, nt);
                acc = acc.add(&src[l].mul(tl)).sub(&tl.mul(&bt));
            }
            let mut v = acc.flatten();
            if r == 1 {
                v.push(&x[0] - &Scalar::one());
            }
            v
        };
        let (a, off) = linalg::matrix_of(nvars, relation);
        let rhs: Vec<Scalar> = off.iter().map(|s| -s.clone()).collect();
        let sol = linalg::solve(&a, &rhs).ok_or(Error::NoFormalSolution { order: r })?;
        let x = sol.particular;
        params.push(x[..w].to_vec());
        let mut top = TSeries::zero(nt);
        if let Some(k) = slot {
            top.set_coeff(k, x[w].clone());
            absorbed.push((r, k, x[w].clone()));
        }
        tb2.push(top);
    }
    let mut comps: [Vec<AffinePoly1>; 4] = Default::default();
    for n in 0..nz {
        let tn = t_coeff(tpl, &params, n as isize, nt);
        for (k, c) in comps.iter_mut().enumerate() {
            c.push(AffinePoly1::from_t(tn.0[k].clone()));
        }
    }
    let [c1, c2, d, e] = comps.map(|c| ZTSeries::from_zcoeffs(c, nz, nt));
    if nz == 1 {
        // only τ₁⁽⁰⁾ = 1 is meaningful
        return Ok(EngineOutput { t: Mat2::identity(nz, nt), absorbed });
    }
    Ok(EngineOutput { t: Mat2::new(c1, c2, d, e), absorbed })
}
