//! Elementary test, Fuchs criterion on the restricted connection, and the eigen-section search.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::formalnf::PreNormalForm;
use crate::odekit::{fuchs_regular_singular, FuchsProblem, Laurent};
use crate::origin::OriginRestriction;
use crate::series::{Scalar, TSeries};

/// f(0,0)·b₂(0,0) = 0.
pub fn is_elementary(p: &PreNormalForm) -> bool {
    let f00 = p.f.tcoeff(0).coeff(0).clone();
    let b00 = p.b2.tcoeff(0).coeff(0).clone();
    (&f00 * &b00).is_zero()
}

/// Ω(z) = z⁻²M(z) as Laurent entries (Ω₁₁, Ω₁₂, Ω₂₁, Ω₂₂).
fn omega_entries(r: &OriginRestriction, twist: bool) -> [Laurent; 4] {
    let n = r.order();
    let coeffs = r.matrix_coeffs();
    let entry = |k: usize| -> Laurent {
        let s = TSeries::from_coeffs(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let mut m = m.clone();
                    if twist && j <= 1 {
                        m.c1 = Scalar::zero();
                    }
                    m.entries()[k].clone()
                })
                .collect(),
            n,
        );
        Laurent::new(-2, s)
    };
    [entry(0), entry(1), entry(2), entry(3)]
}

/// Regular-singularity test of the restriction; with `twist` the scalar part (c + zα)C₁ is removed.
///
/// With v₁ cyclic, ∇ṽ₂ = a₀v₁ + a₁ṽ₂ for ṽ₂ = ∇v₁, where a₁ = p + s + u̇/u and
/// a₀ = ṗ + uq − p·u̇/u − ps in terms of Ω = [[p, q], [u, s]].
pub fn cyclic_fuchs(r: &OriginRestriction, twist: bool) -> bool {
    let [p, q, u, s] = omega_entries(r, twist);
    if u.valuation().is_none() {
        // triangular: an extension of rank-one connections, regular iff both diagonal terms are
        return [&p, &s].iter().all(|d| d.valuation().is_none_or(|v| v >= -1));
    }
    let du_over_u = u.derive().div(&u).expect("u has a valuation");
    let a1 = p.add(&s).add(&du_over_u);
    let a0 = p.derive().add(&u.mul(&q)).sub(&p.mul(&du_over_u)).sub(&p.mul(&s));
    let problem = FuchsProblem { a_coeffs: vec![a0, a1], d: 2, cyclic_vector: vec![Laurent::from_series(TSeries::one(1)), Laurent::zero(1)] };
    fuchs_regular_singular(&problem)
}

/// Outcome of the search for w with ∇_∂z w = h·w.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Irreducibility {
    /// No eigen-section with k in the searched range; w = v₁ and w = v₂ also fail.
    Irreducible { k_min: i64, k_max: i64 },
    /// w = v₁ when `g` is `None`, otherwise w = g·v₁ + v₂ with g = z^k·Σ rⱼzʲ known to `order` terms.
    Reducible {
        k: Option<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        r: Option<Vec<String>>,
        order: usize,
    },
    /// A candidate needed a choice the exact search cannot make.
    Inconclusive { k: i64, reason: String },
}

/// Coefficients of g·(λ+1) etc. below; all series are in z with the restriction's order.
struct Eq1<'a> {
    k: i64,
    eta: &'a TSeries,
    lam1: TSeries,
    t4: TSeries,
    veta: Option<usize>,
}

impl Eq1<'_> {
    /// Lowest exponent contributed by each term family.
    fn exponents(&self) -> (i64, Option<i64>, Option<i64>) {
        let a = self.k + 1;
        let b = self.veta.map(|v| 2 * self.k + v as i64);
        let c = self.t4.valuation().map(|v| v as i64);
        (a, b, c)
    }

    /// Coefficient of z^m in z²ġ − (λ+1)zg − ηg² + T₄ for g = z^k Σ rⱼzʲ.
    fn coeff(&self, r: &[Scalar], m: i64) -> Scalar {
        let k = self.k;
        let mut acc = Scalar::zero();
        // z²ġ − (λ+1)zg: exponent k + 1 + j
        let j = m - k - 1;
        if j >= 0 {
            let j = j as usize;
            if let Some(rj) = r.get(j) {
                acc += &(rj * &Scalar::int(k + j as i64));
            }
            for i in 0..=j.min(r.len().saturating_sub(1)) {
                let l = self.lam1.coeff(j - i);
                if !l.is_zero() {
                    acc -= &(&r[i] * l);
                }
            }
        }
        // −η g²: exponent 2k + n
        let n = m - 2 * k;
        if n >= 0 {
            let n = n as usize;
            for a in 0..=n {
                let e = self.eta.coeff(a);
                if e.is_zero() {
                    continue;
                }
                for i in 0..=(n - a) {
                    if let (Some(ri), Some(rl)) = (r.get(i), r.get(n - a - i)) {
                        acc -= &(&(e * ri) * rl);
                    }
                }
            }
        }
        if m >= 0 {
            acc += self.t4.coeff(m as usize);
        }
        acc
    }
}

/// Searches g = z^k·r(z), r(0) ≠ 0, solving z²ġ − ((λ+1)z + ηg)g − βz²/2 + ηγz = 0 term by term.
///
/// Free coefficients met at resonant steps are set to zero; a later contradiction after such a
/// choice is reported as inconclusive rather than as a proof of irreducibility.
pub fn irreducibility_check(r: &OriginRestriction, k_range: RangeInclusive<i64>) -> Irreducibility {
    let n = r.order();
    if r.eta.is_zero() {
        return Irreducibility::Reducible { k: None, r: None, order: n };
    }
    let half = Scalar::frac(1, 2);
    // −βz²/2 + ηγz
    let t4 = &r.beta.scale(&-half.clone()).shift(2) + &(&r.eta * &r.gam).shift(1);
    if t4.is_zero() {
        // g = 0, i.e. w = v₂
        return Irreducibility::Reducible { k: None, r: Some(vec![]), order: n };
    }
    let lam1 = &r.lam + &TSeries::one(n);
    let mut inconclusive = None;
    for k in k_range.clone() {
        let eq = Eq1 { k, eta: &r.eta, lam1: lam1.clone(), t4: t4.clone(), veta: r.eta.valuation() };
        match solve_for_k(&eq, n) {
            Search::Found(rs) => {
                return Irreducibility::Reducible {
                    k: Some(k),
                    r: Some(rs.iter().map(Scalar::to_string).collect()),
                    order: rs.len(),
                }
            }
            Search::None => {}
            Search::Unknown(reason) => {
                inconclusive.get_or_insert(Irreducibility::Inconclusive { k, reason });
            }
        }
    }
    inconclusive.unwrap_or(Irreducibility::Irreducible { k_min: *k_range.start(), k_max: *k_range.end() })
}

enum Search {
    Found(Vec<Scalar>),
    None,
    Unknown(String),
}

fn solve_for_k(eq: &Eq1, n: usize) -> Search {
    let (a, b, c) = eq.exponents();
    let m0 = [Some(a), b, c].into_iter().flatten().min().expect("a is always present");
    // leading equation: lin·r₀ − η_v·r₀²·[b = m0] + t4_c·[c = m0] = 0
    let lin = if a == m0 { eq.lam1.coeff(0).clone() * Scalar::int(-1) + Scalar::int(eq.k) } else { Scalar::zero() };
    let quad = if b == Some(m0) { -eq.eta.coeff(eq.veta.unwrap()).clone() } else { Scalar::zero() };
    let cst = if c == Some(m0) { eq.t4.coeff(m0 as usize).clone() } else { Scalar::zero() };
    // candidate leading coefficients, flagged when r₀ was a free choice
    let candidates: Vec<(Scalar, bool)> = if !quad.is_zero() {
        // quad·r² + lin·r + cst = 0 with r ≠ 0
        if cst.is_zero() {
            if lin.is_zero() {
                return Search::None;
            }
            vec![(-(&lin / &quad), false)]
        } else {
            let disc = &(&lin * &lin) - &(&(&quad * &cst) * &Scalar::int(4));
            let Some(sq) = disc.sqrt() else {
                return Search::Unknown(format!("leading coefficient needs sqrt({disc})"));
            };
            let den = &quad * &Scalar::int(2);
            let mut v = vec![(&(&(-lin.clone()) + &sq) / &den, false)];
            if !sq.is_zero() {
                v.push((&(&(-lin.clone()) - &sq) / &den, false));
            }
            v
        }
    } else if !lin.is_zero() {
        let v = -(&cst / &lin);
        if v.is_zero() {
            return Search::None;
        }
        vec![(v, false)]
    } else if cst.is_zero() {
        vec![(Scalar::one(), true)]
    } else {
        return Search::None;
    };
    let mut unknown = None;
    for (r0, free) in candidates {
        match extend(eq, n, m0, a, b, r0, free) {
            Search::Found(rs) => return Search::Found(rs),
            Search::Unknown(msg) => unknown = Some(msg),
            Search::None => {}
        }
    }
    unknown.map_or(Search::None, Search::Unknown)
}

fn extend(eq: &Eq1, n: usize, m0: i64, a: i64, b: Option<i64>, r0: Scalar, mut free_used: bool) -> Search {
    // coefficient of rⱼ at exponent m0 + j
    let lin_j = |j: usize, r0: &Scalar| -> Scalar {
        let mut v = Scalar::zero();
        if a == m0 {
            v += &(Scalar::int(eq.k + j as i64) - eq.lam1.coeff(0).clone());
        }
        if b == Some(m0) {
            v -= &(&(eq.eta.coeff(eq.veta.unwrap()) * r0) * &Scalar::int(2));
        }
        v
    };
    // exponents m0 + j are reliable while every series index used stays below n
    let reach = n.saturating_sub(1).max(1);
    let mut rs = vec![r0.clone()];
    for j in 1..reach {
        let m = m0 + j as i64;
        let mut trial = rs.clone();
        trial.push(Scalar::zero());
        let rest = eq.coeff(&trial, m);
        let l = lin_j(j, &r0);
        if l.is_zero() {
            if !rest.is_zero() {
                return if free_used { Search::Unknown(format!("contradiction at z^{m} after a free choice")) } else { Search::None };
            }
            free_used = true;
            rs.push(Scalar::zero());
        } else {
            rs.push(-(&rest / &l));
        }
    }
    // the leading relation itself must hold
    if !eq.coeff(&rs, m0).is_zero() {
        return Search::None;
    }
    Search::Found(rs)
}
