//! Holomorphic normal forms of non-elementary structures and the full holomorphic classification.

use serde::Serialize;

use crate::connmat::{CMat, GaugeMap, Mat2, TEStruct};
use crate::error::{Error, Result};
use crate::formalnf::{formal_normal_form, replay, to_prenormal, Family, FormalNormalForm, LoggedStep, NormalFormId, PreNormalForm};
use crate::malgrange::{malgrange_connection, malgrange_roots, malgrange_xy, RootOrder};
use crate::origin::{
    birkhoff_iso_decision, birkhoff_reduce, is_elementary, normalize_birkhoff, restrict_origin, BirkhoffData,
    BirkhoffDecision, BirkhoffReduction,
};
use crate::series::{Scalar, TSeries, ZTSeries};

/// Constants of the gauge T = [[k₀k, k₁x/(k−x)], [k₀, k₁/(k−x)]].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeConstants {
    pub k: Scalar,
    pub k0: Scalar,
    pub k1: Scalar,
}

/// A holomorphic normal form reached from a Malgrange deformation by a logged isomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloNormalForm {
    pub id: NormalFormId,
    /// The normal-form matrices at the requested orders.
    pub structure: TEStruct,
    /// The Malgrange connection the log starts from (one t-order of slack per gauge derivative).
    pub malgrange: TEStruct,
    pub log: Vec<LoggedStep>,
    pub constants: Option<GaugeConstants>,
    /// Base change t ↦ μ₂(t) pushed forward in the log.
    pub mu2: TSeries,
    /// Structure after the first logged step.
    pub intermediate: TEStruct,
    /// Replaying `log` on `malgrange` gives `structure` at the requested orders.
    pub replay_matches: bool,
}

struct Binf {
    alpha: Scalar,
    c0: Scalar,
    c1: Scalar,
}

/// Checks B₁₂ = c₀ ≠ 0 and B₁₁ − B₂₂ = −1/2.
fn binf_shape(binf: &CMat) -> Result<Binf> {
    if binf.e.is_zero() {
        return Err(Error::Precondition("B12 = c0 must be nonzero".into()));
    }
    if binf.d != Scalar::frac(-1, 4) {
        return Err(Error::Precondition("B11 - B22 must equal -1/2".into()));
    }
    Ok(Binf { alpha: binf.c1.clone(), c0: binf.e.clone(), c1: binf.c2.clone() })
}

fn lift(s: TSeries, nz: usize) -> ZTSeries {
    let nt = s.order();
    ZTSeries::t_monomial(s, 0, nz, nt)
}

fn finish(
    id: NormalFormId,
    malgrange: TEStruct,
    log: Vec<LoggedStep>,
    constants: Option<GaugeConstants>,
    mu2: TSeries,
    nz: usize,
    nt: usize,
) -> Result<HoloNormalForm> {
    let structure = id.to_structure(nz, nt)?;
    let intermediate = replay(&malgrange, &log[..1])?;
    let out = replay(&intermediate, &log[1..])?;
    let replay_matches = out.eq_to_order(&structure, nz, nt);
    Ok(HoloNormalForm { id, structure, malgrange, log, constants, mu2, intermediate, replay_matches })
}

/// Normal form of the Malgrange deformation with B₂₁ ≠ 0: HNF-Mal1, -Mal2 or -Mal3.
///
/// `order` picks the root used as k; the swapped order turns λ into −λ − 2.
pub fn holo_normal_form_second_type(c: &Scalar, binf: &CMat, order: RootOrder, nz: usize, nt: usize) -> Result<HoloNormalForm> {
    let Binf { alpha, c0, c1 } = binf_shape(binf)?;
    if c1.is_zero() {
        return Err(Error::Precondition("B21 = 0: use the first-type normal form".into()));
    }
    let w = nt + 2;
    let st = malgrange_xy(binf, &c0, w)?;
    let mal = malgrange_connection(&st, c, nz)?;
    let t = TSeries::var(w);
    let (id, consts, mu2) = if &c0 * &c1 == Scalar::frac(-1, 16) {
        let consts = GaugeConstants { k: &Scalar::int(4) * &c0, k0: c0.pow(-3)? * Scalar::frac(1, 16), k1: Scalar::one() };
        let mu2 = &TSeries::one(w) - &TSeries::monomial(Scalar::int(-1), 1, w).exp()?;
        (NormalFormId::new(Family::HnfMal1, c.clone(), alpha, &[("c0", c0.clone())])?, consts, mu2)
    } else {
        let (a, b) = st
            .ordered_roots(order)
            .ok_or_else(|| Error::ExactField(format!("1 + 16 c0 c1 = {} has no square root in Q(i)", &Scalar::one() + &(&Scalar::int(16) * &(&c0 * &c1)))))?;
        let lambda = &(&c1 * &(&b - &a)) - &Scalar::one();
        if lambda.is_zero() {
            let consts = GaugeConstants { k: a.clone(), k0: Scalar::one(), k1: &(&a * &a) * &c0 };
            (NormalFormId::new(Family::HnfMal3, c.clone(), alpha, &[("c0", c0.clone())])?, consts, t)
        } else {
            let consts = GaugeConstants { k: a.clone(), k0: Scalar::one(), k1: &a * &a };
            let e = TSeries::monomial(lambda.clone(), 1, w).exp()?;
            let mu2 = (&e - &TSeries::one(w)).scale(&(&c0 / &lambda));
            let id = NormalFormId::new(Family::HnfMal2, c.clone(), alpha, &[("c0", c0.clone()), ("lambda", lambda)])?;
            (id, consts, mu2)
        }
    };
    let GaugeConstants { k, k0, k1 } = &consts;
    let kx = &TSeries::constant(k.clone(), w) - &st.x;
    let inv = kx.invert_unit()?;
    let gauge = Mat2::from_entries(
        &lift(TSeries::constant(k0 * k, w), nz),
        &lift((&st.x * &inv).scale(k1), nz),
        &lift(TSeries::constant(k0.clone(), w), nz),
        &lift(inv.scale(k1), nz),
    );
    let log = vec![
        LoggedStep { label: "gauge (expr-for-t)".into(), map: GaugeMap::gauge(gauge) },
        LoggedStep { label: "push forward by mu2".into(), map: GaugeMap::with_base(Mat2::identity(nz, w), mu2.reverse()?) },
    ];
    finish(id, mal, log, Some(consts), mu2, nz, nt)
}

/// Normal form of the Malgrange deformation with B₂₁ = 0: F1 with the same (c, α, c₀).
pub fn first_type_normal_form(c: &Scalar, binf: &CMat, nz: usize, nt: usize) -> Result<HoloNormalForm> {
    let Binf { alpha, c0, c1 } = binf_shape(binf)?;
    if !c1.is_zero() {
        return Err(Error::Precondition("B21 must vanish for the first type".into()));
    }
    let w = nt + 2;
    let st = malgrange_xy(binf, &c0, w)?;
    let mal = malgrange_connection(&st, c, nz)?;
    let lam = st.x.reverse()?;
    let t = lift(TSeries::var(w), nz);
    let gauge = Mat2::new(ZTSeries::one(nz, w), ZTSeries::zero(nz, w), ZTSeries::zero(nz, w), t);
    let log = vec![
        LoggedStep { label: "push forward by x".into(), map: GaugeMap::with_base(Mat2::identity(nz, w), lam) },
        LoggedStep { label: "gauge C1 + t2 E".into(), map: GaugeMap::gauge(gauge) },
    ];
    let id = NormalFormId::new(Family::F1, c.clone(), alpha, &[("c0", c0)])?;
    finish(id, mal, log, None, st.x.clone(), nz, nt)
}

/// The constant c₁ attached to a non-elementary holomorphic normal form.
pub fn assign_c1(id: &NormalFormId) -> Result<Scalar> {
    let c0 = id.param("c0")?;
    let over = |num: Scalar| -> Result<Scalar> { Ok(&num / &(&Scalar::int(16) * c0)) };
    match id.family {
        Family::HnfMal1 => over(Scalar::int(-1)),
        Family::HnfMal3 => over(Scalar::int(3)),
        Family::HnfMal2 => {
            let l = id.param("lambda")?;
            over(&(&(&Scalar::int(4) * &(l * l)) + &(&Scalar::int(8) * l)) + &Scalar::int(3))
        }
        Family::F1 if !c0.is_zero() => Ok(Scalar::zero()),
        _ => Err(Error::Domain(format!("{id} is elementary"))),
    }
}

/// Birkhoff data of a non-elementary holomorphic normal form.
pub fn birkhoff_data_of(id: &NormalFormId) -> Result<BirkhoffData> {
    BirkhoffData::new(id.c().clone(), id.alpha().clone(), id.param("c0")?.clone(), assign_c1(id)?)
}

/// The holomorphic normal form with invariants `d`; HNF-Mal2 takes the λ with λ + 1 lex-positive.
pub fn holomorphic_id(d: &BirkhoffData) -> Result<NormalFormId> {
    let (c, alpha, c0) = (d.c.clone(), d.alpha.clone(), ("c0", d.c0.clone()));
    if d.c1.is_zero() {
        return NormalFormId::new(Family::F1, c, alpha, &[c0]);
    }
    if &d.c0 * &d.c1 == Scalar::frac(-1, 16) {
        return NormalFormId::new(Family::HnfMal1, c, alpha, &[c0]);
    }
    let (a, b) = malgrange_roots(&d.c1, &d.c0)
        .ok_or_else(|| Error::ExactField("1 + 16 c0 c1 has no square root in Q(i)".into()))?;
    let lambda = &(&d.c1 * &(&b - &a)) - &Scalar::one();
    if lambda.is_zero() {
        NormalFormId::new(Family::HnfMal3, c, alpha, &[c0])
    } else {
        NormalFormId::new(Family::HnfMal2, c, alpha, &[c0, ("lambda", lambda)])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonElementaryClass {
    pub reduction: BirkhoffReduction,
    /// Constant gauge bringing (B₀, B_∞) to the shape of [`BirkhoffData`].
    pub constant_gauge: CMat,
    pub data: BirkhoffData,
    pub normal_form: NormalFormId,
    /// F1 with the same (c, α, c₀): the formal normal form.
    pub formal_normal_form: NormalFormId,
    pub iso_to_formal: BirkhoffDecision,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HolomorphicClass {
    /// Holomorphic and formal classes coincide.
    Elementary(Box<FormalNormalForm>),
    NonElementary(Box<NonElementaryClass>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicReport {
    pub prenormal: PreNormalForm,
    pub prenormal_gauge: GaugeMap,
    pub class: HolomorphicClass,
}

impl HolomorphicReport {
    pub fn normal_form(&self) -> &NormalFormId {
        match &self.class {
            HolomorphicClass::Elementary(f) => &f.id,
            HolomorphicClass::NonElementary(n) => &n.normal_form,
        }
    }
}

/// Classifies a structure with A₁ = C₁, A₂ = C₂ + zfE up to holomorphic isomorphism.
pub fn classify_holomorphic(s: &TEStruct, n_max: u64) -> Result<HolomorphicReport> {
    let (prenormal, prenormal_gauge) = to_prenormal(s)?;
    let class = if is_elementary(&prenormal) {
        HolomorphicClass::Elementary(Box::new(formal_normal_form(&prenormal)?))
    } else {
        let r = restrict_origin(&prenormal.to_structure())?;
        let reduction = birkhoff_reduce(&r.matrix_coeffs())?;
        let (data, constant_gauge) = normalize_birkhoff(&reduction.b0, &reduction.binf)?;
        let normal_form = holomorphic_id(&data)?;
        let formal = BirkhoffData::new(data.c.clone(), data.alpha.clone(), data.c0.clone(), Scalar::zero())?;
        let iso_to_formal = birkhoff_iso_decision(&data, &formal, n_max)?;
        let formal_normal_form = holomorphic_id(&formal)?;
        HolomorphicClass::NonElementary(Box::new(NonElementaryClass {
            reduction,
            constant_gauge,
            data,
            normal_form,
            formal_normal_form,
            iso_to_formal,
        }))
    };
    Ok(HolomorphicReport { prenormal, prenormal_gauge, class })
}
