//! The acceptance criteria as runnable checks, plus the random generators they share.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::commands::{holo_from_data, Options};
use crate::cli::fixtures::{load_fixture, FIXTURE_NAMES};
use crate::connmat::{apply_gauge, is_flat, GaugeMap, Mat2};
use crate::error::Result;
use crate::euler::{euler_normal_form, induced_normal_form, realizable_by_te, EulerField, EulerNormalForm};
use crate::formalnf::{formal_iso_decision, formal_normal_form, replay, to_prenormal, Family, LoggedStep, NormalFormId, PreNormalForm};
use crate::malgrange::{classify_holomorphic, dx_residual, malgrange_xy, CrossCheck, RootOrder};
use crate::odekit::{check_convolution_inequality, riccati_residual, solve_riccati_unique_c, solve_third_der, ThirdDerShape, ThirdDerVerdict};
use crate::origin::{birkhoff_iso_decision, cyclic_fuchs, is_elementary, BirkhoffData, OriginRestriction};
use crate::series::{Scalar, TSeries, ZTSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionOutcome {
    pub id: String,
    pub name: String,
    pub passed: bool,
    /// Number of individual cases checked.
    pub checked: usize,
    pub detail: String,
}

/// Deterministic generator of scalars, normal forms and shape-preserving isomorphisms.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn rational(&mut self) -> Scalar {
        Scalar::frac(self.range(-6, 6), self.range(1, 4))
    }

    /// A small element of Q(i); the imaginary part vanishes half the time.
    pub fn scalar(&mut self) -> Scalar {
        let re = self.rational();
        if self.rng.gen_bool(0.5) {
            re
        } else {
            &re + &(&self.rational() * &Scalar::i())
        }
    }

    pub fn nonzero(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A random polynomial c₀ + c₁z + … + c_d z^d with c₀ ≠ 0 when `unit`.
    fn z_poly(&mut self, d: usize, unit: bool, nz: usize, nt: usize) -> ZTSeries {
        let mut cs: Vec<Scalar> = (0..=d).map(|_| self.scalar()).collect();
        if unit {
            cs[0] = self.nonzero();
        }
        ZTSeries::from_z_series(&TSeries::from_coeffs(cs, nz), nt)
    }

    /// A gauge of z-degree ≤ 4 keeping A₁ = C₁ and A₂ = C₂ + zfE for the f of `id`.
    ///
    /// Always p(z)C₁; for f = 0 also r(z)C₂ and the t-dependent solution
    /// ρ[[−z²t, −z³], [zt², z²t]]; for f = 1 also r(z)(C₂ + zE).
    pub fn shape_gauge(&mut self, id: &NormalFormId, nz: usize, nt: usize) -> Mat2 {
        let mut t = Mat2::basis_times(0, self.z_poly(4, true, nz, nt));
        if id.family.is_nf3() {
            t.c2 = self.z_poly(4, false, nz, nt);
            let rho = self.scalar();
            let zt = |c: Scalar, zk: usize, tk: usize| ZTSeries::t_monomial(TSeries::monomial(c, tk, nt), zk, nz, nt);
            t.d = &t.d + &zt(-rho.clone(), 2, 1);
            t.e = &t.e + &zt(-rho.clone(), 3, 0);
            t.c2 = &t.c2 + &zt(rho, 1, 2);
        } else if id.family == Family::F1 {
            let r = self.z_poly(3, false, nz, nt);
            t.e = r.mul_z_pow(1);
            t.c2 = r;
        }
        t
    }

    /// t₂ ↦ kt₂ covered by diag(1, k), which keeps the shape of A₂.
    pub fn linear_base_change(&mut self, nz: usize, nt: usize) -> GaugeMap {
        let k = self.nonzero();
        let half = Scalar::frac(1, 2);
        let one = Scalar::one();
        let t = Mat2::constant([&(&one + &k) * &half, Scalar::zero(), &(&one - &k) * &half, Scalar::zero()], nz, nt);
        GaugeMap::with_base(t, TSeries::monomial(k, 1, nt))
    }

    /// A random isomorphism that keeps the input of the pre-normal reduction admissible.
    pub fn shape_isomorphism(&mut self, id: &NormalFormId, nz: usize, nt: usize) -> Vec<LoggedStep> {
        let mut log = vec![LoggedStep { label: "random gauge".into(), map: GaugeMap::gauge(self.shape_gauge(id, nz, nt)) }];
        if self.rng.gen_bool(0.5) {
            log.push(LoggedStep { label: "random linear base change".into(), map: self.linear_base_change(nz, nt) });
        }
        log
    }

    /// Every formal normal-form shape of the flatness sweep, with random c, α (and c₀).
    pub fn formal_sweep(&mut self) -> Vec<NormalFormId> {
        let mut out = Vec::new();
        let (c, a) = (self.scalar(), self.scalar());
        out.push(NormalFormId::f1(c, a, self.scalar()));
        for r in 1..=5 {
            out.push(NormalFormId::fr(self.scalar(), self.scalar(), r).expect("r >= 1"));
        }
        for fam in [Family::Nf3_1, Family::Nf3_2] {
            out.push(NormalFormId::nf3(fam, self.scalar(), self.scalar(), None, None).expect("no constraints"));
        }
        for fam in [Family::Nf3_3, Family::Nf3_4, Family::Nf3_6, Family::Nf3_7, Family::Nf3_8, Family::Nf3_9] {
            for l in -3..=3 {
                if let Ok(id) = NormalFormId::nf3(fam, self.scalar(), self.scalar(), Some(Scalar::int(l)), None) {
                    out.push(id);
                }
            }
        }
        for l in 1..=3 {
            for g in 0..=1 {
                let id = NormalFormId::nf3(Family::Nf3_5, self.scalar(), self.scalar(), Some(Scalar::int(l)), Some(Scalar::int(g)));
                out.push(id.expect("valid NF3-5"));
            }
        }
        out
    }

    pub fn formal_id(&mut self) -> NormalFormId {
        let all = self.formal_sweep();
        let k = self.rng.gen_range(0..all.len());
        all[k].clone()
    }

    /// A formal or holomorphic normal form (HNF families included).
    pub fn any_id(&mut self) -> NormalFormId {
        let c0 = self.nonzero();
        let (c, a) = (self.scalar(), self.scalar());
        match self.range(0, 5) {
            0 => NormalFormId::new(Family::HnfMal1, c, a, &[("c0", c0)]).expect("c0 != 0"),
            1 => NormalFormId::new(Family::HnfMal3, c, a, &[("c0", c0)]).expect("c0 != 0"),
            2 => {
                let l = self.nonzero();
                NormalFormId::new(Family::HnfMal2, c, a, &[("c0", c0), ("lambda", l)]).expect("lambda != 0")
            }
            _ => self.formal_id(),
        }
    }

    /// A pre-normal form obtained from a random normal form by a random isomorphism.
    pub fn prenormal(&mut self, nz: usize, nt: usize) -> Result<(NormalFormId, PreNormalForm)> {
        let id = self.any_id();
        let s = id.to_structure(nz, nt)?;
        let moved = replay(&s, &self.shape_isomorphism(&id, nz, nt))?;
        Ok((id, to_prenormal(&moved)?.0))
    }
}

fn outcome(id: &str, name: &str, checked: usize, failures: Vec<String>) -> CriterionOutcome {
    let detail = if failures.is_empty() {
        format!("{checked} cases")
    } else {
        format!("{} of {checked} cases failed; first: {}", failures.len(), failures[0])
    };
    CriterionOutcome { id: id.to_string(), name: name.to_string(), passed: failures.is_empty() && checked > 0, checked, detail }
}

/// Records `Err` as a failure with its message.
fn check(failures: &mut Vec<String>, label: impl FnOnce() -> String, r: Result<bool>) {
    match r {
        Ok(true) => {}
        Ok(false) => failures.push(label()),
        Err(e) => failures.push(format!("{}: {e}", label())),
    }
}

pub fn normal_form_flatness(seed: u64, tuples: usize, nz: usize, nt: usize) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let (mut n, mut fails) = (0, Vec::new());
    for _ in 0..tuples {
        for id in s.formal_sweep() {
            n += 1;
            check(&mut fails, || id.to_string(), id.to_structure(nz, nt).map(|st| is_flat(&st)));
        }
    }
    outcome("c1", "normal-form flatness sweep", n, fails)
}

pub fn round_trip_normalization(seed: u64, count: usize, nz: usize, nt: usize) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let mut fails = Vec::new();
    for _ in 0..count {
        let id = s.formal_id();
        let gauge = s.shape_gauge(&id, nz, nt);
        let r = (|| -> Result<bool> {
            let input = apply_gauge(&id.to_structure(nz, nt)?, &gauge)?;
            let (p, g) = to_prenormal(&input)?;
            let nf = formal_normal_form(&p)?;
            let mut log = vec![LoggedStep { label: "to pre-normal form".into(), map: g }];
            log.extend(nf.log.iter().cloned());
            let out = replay(&input, &log)?;
            let (oz, ot) = out.orders();
            let replays = out.eq_at_common_order(&nf.id.to_structure(oz, ot)?);
            Ok(replays && formal_iso_decision(&nf.id, &id)?.isomorphic)
        })();
        check(&mut fails, || id.to_string(), r);
    }
    outcome("c2", "round-trip normalization", count, fails)
}

/// Restriction data with prescribed η(0), γ(0) and random higher terms.
pub fn restriction_case(s: &mut Sampler, eta0: Scalar, gam0: Scalar, n: usize) -> OriginRestriction {
    let mut series = |head: Option<Scalar>| {
        let mut cs: Vec<Scalar> = (0..n).map(|_| s.scalar()).collect();
        if let Some(h) = head {
            cs[0] = h;
        }
        TSeries::from_coeffs(cs, n)
    };
    OriginRestriction {
        eta: series(Some(eta0)),
        lam: series(None),
        beta: series(None),
        gam: series(Some(gam0)),
        c: s.scalar(),
        alpha: s.scalar(),
    }
}

pub fn elementary_dichotomy(seed: u64, count: usize, nz: usize, nt: usize) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let mut fails = Vec::new();
    let mut n = 0;
    for _ in 0..count {
        n += 1;
        match s.prenormal(nz, nt) {
            Ok((id, p)) => {
                let fuchs = cyclic_fuchs(&OriginRestriction::from_prenormal(&p), true);
                if fuchs != is_elementary(&p) {
                    fails.push(format!("{id}: is_elementary = {}, twisted Fuchs = {fuchs}", is_elementary(&p)));
                }
            }
            Err(e) => fails.push(e.to_string()),
        }
    }
    // η(0) = 0; η(0) ≠ 0 = γ(0); η(0)γ(0) ≠ 0
    for (case, want) in [(0, true), (1, true), (2, false)] {
        for _ in 0..5 {
            n += 1;
            let (eta0, gam0) = match case {
                0 => (Scalar::zero(), s.scalar()),
                1 => (s.nonzero(), Scalar::zero()),
                _ => (s.nonzero(), s.nonzero()),
            };
            let r = restriction_case(&mut s, eta0, gam0, nz);
            if cyclic_fuchs(&r, true) != want {
                fails.push(format!("closed case {case}: expected {want}"));
            }
        }
    }
    outcome("c3", "elementary dichotomy", n, fails)
}

/// (n−1)(2n−1)/2 and (n−1)(2n−3)/2 for 2 ≤ n ≤ 10.
pub fn birkhoff_table() -> Vec<Scalar> {
    (2..=10).flat_map(|n: i64| [Scalar::frac((n - 1) * (2 * n - 1), 2), Scalar::frac((n - 1) * (2 * n - 3), 2)]).collect()
}

pub fn birkhoff_decision_table(seed: u64, outside: usize, n_max: u64) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let table = birkhoff_table();
    let mut fails = Vec::new();
    let mut n = 0;
    let decide = |s: &mut Sampler, prod: &Scalar| -> Result<bool> {
        let (c, a, c0) = (s.scalar(), s.scalar(), s.nonzero());
        let c1 = prod / &c0;
        let d1 = BirkhoffData::new(c.clone(), a.clone(), c0.clone(), c1)?;
        let d2 = BirkhoffData::new(c, a, c0, Scalar::zero())?;
        Ok(birkhoff_iso_decision(&d1, &d2, n_max)?.isomorphic)
    };
    for v in &table {
        n += 1;
        check(&mut fails, || format!("c0c1 = {v} should be isomorphic"), decide(&mut s, v));
    }
    let mut m = 0;
    while m < outside {
        let v = s.nonzero();
        if table.contains(&v) {
            continue;
        }
        m += 1;
        n += 1;
        check(&mut fails, || format!("c0c1 = {v} should not be isomorphic"), decide(&mut s, &v).map(|b| !b));
    }
    outcome("c4", "Birkhoff decision table", n, fails)
}

pub fn malgrange_fidelity(seed: u64, count: usize, order: usize, closed_order: usize) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let mut fails = Vec::new();
    for _ in 0..count {
        let binf = crate::connmat::CMat::new(s.scalar(), s.scalar(), s.scalar(), s.scalar());
        let c0 = s.nonzero();
        let r = malgrange_xy(&binf, &c0, order + 1).map(|st| {
            let (rx, ry) = dx_residual(&st);
            rx.is_zero() && ry.is_zero() && rx.order() >= order
        });
        check(&mut fails, || format!("B_inf = {binf:?}, c0 = {c0}"), r);
    }
    let mut n = count;
    for special in 0..2 {
        for _ in 0..5 {
            n += 1;
            let c0 = s.nonzero();
            let c1 = if special == 0 { &Scalar::frac(-1, 16) / &c0 } else { Scalar::zero() };
            let d = BirkhoffData::new(s.scalar(), s.scalar(), c0.clone(), c1).expect("c0 != 0");
            let r = malgrange_xy(&d.binf(), &c0, closed_order + 1).map(|st| matches!(st.cross_check, CrossCheck::Matched { .. }));
            check(&mut fails, || format!("closed form for {d}"), r);
        }
    }
    outcome("c5", "Malgrange ODE fidelity", n, fails)
}

pub fn non_elementary_replay(nz: usize, nt: usize) -> CriterionOutcome {
    let c0 = Scalar::int(2);
    let cases = [
        ("HNF-Mal1", Scalar::frac(-1, 16) / Scalar::int(2)),
        ("HNF-Mal2", &Scalar::frac(15, 16) / &c0),
        ("HNF-Mal3", &Scalar::frac(3, 16) / &c0),
        ("F1", Scalar::zero()),
    ];
    let mut fails = Vec::new();
    for (name, c1) in &cases {
        let r = (|| -> Result<bool> {
            let d = BirkhoffData::new(Scalar::int(1), Scalar::frac(1, 3), c0.clone(), c1.clone())?;
            let h = holo_from_data(&d, nz, nt)?;
            Ok(h.replay_matches && h.id.family.name() == *name)
        })();
        check(&mut fails, || (*name).to_string(), r);
    }
    let swapped = crate::malgrange::holo_normal_form_second_type(
        &Scalar::zero(),
        &BirkhoffData::new(Scalar::zero(), Scalar::zero(), c0.clone(), &Scalar::frac(15, 16) / &c0).expect("c0 != 0").binf(),
        RootOrder::Swapped,
        nz.min(6),
        nt.min(6),
    )
    .map(|h| h.replay_matches);
    check(&mut fails, || "HNF-Mal2 with swapped roots".into(), swapped);
    outcome("c6", "non-elementary replay", cases.len() + 1, fails)
}

/// (g, expected family name, expected E3 c₀ or E4 r).
pub fn euler_cases() -> Vec<(&'static str, &'static str, Option<i64>)> {
    vec![("2", "E1", None), ("3t", "E3", Some(3)), ("t^2*(1+t)", "E4", Some(2)), ("t^3 + t^4", "E4", Some(3))]
}

pub fn euler_suite(order: usize) -> CriterionOutcome {
    let mut fails = Vec::new();
    let n = order + 4;
    for (g, fam, k) in euler_cases() {
        let r = (|| -> Result<bool> {
            let e = EulerField::new(Scalar::zero(), crate::cli::expr::parse_series(g, n)?);
            let out = euler_normal_form(&e)?;
            let shape = match (&out.normal, k) {
                (EulerNormalForm::E1 { .. }, None) => fam == "E1",
                (EulerNormalForm::E3 { c0, .. }, Some(v)) => fam == "E3" && *c0 == Scalar::int(v),
                (EulerNormalForm::E4 { r, .. }, Some(v)) => fam == "E4" && i64::from(*r) == v,
                _ => false,
            };
            let replay = match &out.lam {
                Some(lam) => out.order >= order && e.push_forward(lam)?.g.eq_to_order(&out.normal.field(order).g, order),
                None => false,
            };
            let realizable = realizable_by_te(&out.normal);
            let expected = match &out.normal {
                EulerNormalForm::E4 { r: 2, c1, .. } => c1.is_zero(),
                EulerNormalForm::E4 { .. } => false,
                _ => true,
            };
            Ok(shape && replay && realizable == expected)
        })();
        check(&mut fails, || format!("g = {g}"), r);
    }
    outcome("c7", "Euler suite", 4, fails)
}

pub fn composition_sum_suite(seed: u64, max_b: usize, riccati_cases: usize) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let mut fails = Vec::new();
    let mut n = 0;
    for b in 2..=max_b {
        for l in 2..=b {
            n += 1;
            if !check_convolution_inequality(l, b).holds {
                fails.push(format!("convolution inequality at l = {l}, b = {b}"));
            }
        }
    }
    for _ in 0..riccati_cases {
        n += 1;
        let r = s.range(1, 4) as usize;
        let cs: Vec<Scalar> = (0..r + 4).map(|k| if k == 0 { s.nonzero() } else { s.scalar() }).collect();
        let f = TSeries::from_coeffs(cs, r + 4);
        let res = solve_riccati_unique_c(&f, r, &s.scalar()).map(|sol| {
            [Scalar::one(), Scalar::i(), Scalar::frac(1, 2)].iter().all(|delta| {
                let res = riccati_residual(&f, r, &(&sol.c + delta), &sol.tau);
                riccati_residual(&f, r, &sol.c, &sol.tau).is_zero()
                    && (0..r).all(|k| res.coeff(k).is_zero())
                    && !res.coeff(r).is_zero()
            })
        });
        check(&mut fails, || format!("riccati perturbation r = {r}"), res);
    }
    for (shape, m, g, want) in third_der_cases() {
        n += 1;
        let r = solve_third_der(&m, &shape, &g).map(|out| out.verdict == want);
        check(&mut fails, || format!("third-der {shape:?} m = {m}"), r);
    }
    outcome("c8", "composition-sum suite", n, fails)
}

/// One constructed instance per verdict branch.
pub fn third_der_cases() -> Vec<(ThirdDerShape, Scalar, [Scalar; 3], ThirdDerVerdict)> {
    let s = Scalar::int;
    let l = Scalar::frac(3, 2);
    vec![
        (ThirdDerShape::Square, s(2), [s(1), s(2), s(3)], ThirdDerVerdict::Unique),
        (ThirdDerShape::Linear(l.clone()), s(5), [s(1), s(2), s(3)], ThirdDerVerdict::Unique),
        (ThirdDerShape::Linear(l.clone()), l.clone(), [s(1), s(2), s(0)], ThirdDerVerdict::SolvableUnderCondition("g2 = 0")),
        (ThirdDerShape::Linear(l.clone()), l.clone(), [s(1), s(2), s(1)], ThirdDerVerdict::NoSolution("g2 = 0")),
        (ThirdDerShape::Linear(l.clone()), -l.clone(), [s(0), s(2), s(3)], ThirdDerVerdict::SolvableUnderCondition("g0 = 0")),
        (ThirdDerShape::Linear(l.clone()), -l.clone(), [s(1), s(2), s(3)], ThirdDerVerdict::NoSolution("g0 = 0")),
        (
            ThirdDerShape::LinearPlusOne(l.clone()),
            -l.clone(),
            // m²g₀ + mg₁ + g₂ = 9/4 − 3/2·1 − 3/4 = 0
            [s(1), s(1), Scalar::frac(-3, 4)],
            ThirdDerVerdict::SolvableUnderCondition("m^2 g0 + m g1 + g2 = 0"),
        ),
        (
            ThirdDerShape::LinearPlusOne(l.clone()),
            -l,
            [s(1), s(1), s(1)],
            ThirdDerVerdict::NoSolution("m^2 g0 + m g1 + g2 = 0"),
        ),
    ]
}

pub fn cross_module_coherence(seed: u64, fixtures: Option<&std::path::Path>, isos: usize, n_max: u64) -> CriterionOutcome {
    let mut s = Sampler::new(seed);
    let mut fails = Vec::new();
    let mut n = 0;
    for name in FIXTURE_NAMES {
        n += 1;
        let r = (|| -> Result<bool> {
            let doc = load_fixture(fixtures, name)?;
            let (nz, nt) = doc.structure.orders();
            let hr = classify_holomorphic(&doc.structure, n_max)?;
            let normal = hr.normal_form().to_structure(nz, nt)?;
            let realizable = realizable_by_te(&induced_normal_form(&normal)?.normal);
            let elementary = is_elementary(&hr.prenormal);
            let id = hr.normal_form().clone();
            let mut invariant = true;
            for _ in 0..isos {
                let moved = replay(&doc.structure, &s.shape_isomorphism(&id, nz, nt))?;
                invariant &= is_elementary(&to_prenormal(&moved)?.0) == elementary;
            }
            Ok(realizable && invariant)
        })();
        check(&mut fails, || name.to_string(), r);
    }
    outcome("c9", "cross-module coherence", n, fails)
}

/// All criteria at the sizes the acceptance suite uses.
pub fn run_all(opts: &Options) -> Vec<CriterionOutcome> {
    vec![
        normal_form_flatness(1, 20, 16, 16),
        round_trip_normalization(2, 50, 6, 6),
        elementary_dichotomy(3, 200, 6, 6),
        birkhoff_decision_table(4, 50, opts.n_max.max(64)),
        malgrange_fidelity(5, 30, 15, 12),
        non_elementary_replay(12, 12),
        euler_suite(14),
        composition_sum_suite(8, 30, 20),
        cross_module_coherence(9, opts.fixtures.as_deref(), 10, opts.n_max),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_gauges_keep_the_prenormal_input_admissible() {
        let mut s = Sampler::new(11);
        for _ in 0..30 {
            let id = s.any_id();
            let st = id.to_structure(5, 5).unwrap();
            let moved = replay(&st, &s.shape_isomorphism(&id, 5, 5)).unwrap();
            assert!(is_flat(&moved), "{id}");
            to_prenormal(&moved).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn small_criteria_pass() {
        assert!(normal_form_flatness(1, 1, 5, 5).passed);
        let r = round_trip_normalization(2, 6, 5, 5);
        assert!(r.passed, "{}", r.detail);
        let r = elementary_dichotomy(3, 10, 5, 5);
        assert!(r.passed, "{}", r.detail);
        let r = birkhoff_decision_table(4, 5, 64);
        assert!(r.passed, "{}", r.detail);
        let r = malgrange_fidelity(5, 3, 8, 8);
        assert!(r.passed, "{}", r.detail);
        let r = non_elementary_replay(4, 5);
        assert!(r.passed, "{}", r.detail);
        let r = euler_suite(8);
        assert!(r.passed, "{}", r.detail);
        let r = composition_sum_suite(8, 6, 3);
        assert!(r.passed, "{}", r.detail);
        let r = cross_module_coherence(9, None, 2, 64);
        assert!(r.passed, "{}", r.detail);
    }
}
