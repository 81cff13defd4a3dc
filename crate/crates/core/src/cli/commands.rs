//! Command implementations. Each returns a [`Report`] (or a document) and never prints.

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::cli::document::{read_document, StructureDocument};
use crate::cli::expr::parse_series;
use crate::cli::report::{log_records, Report, ResidualSummary};
use crate::cli::selftest;
use crate::connmat::{flatness_residuals, CMat, GaugeMap, Mat2, TEStruct};
use crate::error::{Error, Result};
use crate::euler::{euler_normal_form, frobenius_realizable, induced_normal_form, realizable_by_te, EulerField};
use crate::formalnf::{
    conformal_map, formal_iso_decision, formal_normal_form, replay, to_prenormal, FormalNormalForm, IsoWitness,
    LoggedStep, NormalFormId,
};
use crate::malgrange::{
    assign_c1, classify_holomorphic, first_type_normal_form, holo_normal_form_second_type, malgrange_connection,
    malgrange_xy, HolomorphicClass, HoloNormalForm, RootOrder,
};
use crate::origin::{birkhoff_iso_decision, irreducibility_check, is_elementary, restrict_origin, BirkhoffData};
use crate::series::{Scalar, TSeries};

/// Settings shared by the commands.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub order_z: usize,
    pub order_t: usize,
    /// Search bound for the Birkhoff resonance n.
    pub n_max: u64,
    /// Search bound for the irreducibility eigen-section k.
    pub k_max: i64,
    pub fixtures: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options { order_z: 8, order_t: 8, n_max: 64, k_max: 16, fixtures: None }
    }
}

fn parse_param(name: &str, text: &str) -> Result<Scalar> {
    text.parse().map_err(|_| Error::parse(name, format!("invalid scalar {text:?}")))
}

/// Parses "c,alpha,c0,c1".
pub fn parse_birkhoff_tuple(name: &str, text: &str) -> Result<BirkhoffData> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::parse(name, format!("expected c,alpha,c0,c1; found {} fields", parts.len())));
    }
    let field = |k: usize, f: &str| parse_param(&format!("{name}.{f}"), parts[k]);
    BirkhoffData::new(field(0, "c")?, field(1, "alpha")?, field(2, "c0")?, field(3, "c1")?)
}

fn load(path: &Path) -> Result<StructureDocument> {
    read_document(path)
}

pub fn cmd_verify(path: &Path) -> Result<Report> {
    let doc = load(path)?;
    let r = flatness_residuals(&doc.structure);
    let mut rep = Report::new("verify");
    rep.verdict("flat", r.is_zero()).residuals_of("", &r);
    rep.detail("orders", json!({"nz": doc.orders.nz, "nt": doc.orders.nt, "t1_degree": doc.orders.t1_degree}))
        .detail("kind", doc.structure.kind)
        .detail("certified_orders", r.certified_orders());
    Ok(rep)
}

pub fn cmd_prenormal(path: &Path) -> Result<Report> {
    let doc = load(path)?;
    let (p, gauge) = to_prenormal(&doc.structure)?;
    let mut rep = Report::new("prenormal");
    let step = LoggedStep { label: "to pre-normal form".into(), map: gauge };
    let mut master = Mat2::zero(1, 1);
    master.c1 = p.master_residual();
    rep.verdict("consistent", p.is_consistent()).verdict("elementary", is_elementary(&p));
    rep.residuals.insert("master_equation".into(), ResidualSummary::of(&master));
    rep.transformation_logs.insert("input_to_prenormal".into(), log_records(&[step]));
    rep.detail("c", &p.c)
        .detail("alpha", &p.alpha)
        .detail("f", crate::cli::report::mat2_to_json(&Mat2::basis_times(0, p.f.clone()))["C1"].clone())
        .detail("b2", crate::cli::report::mat2_to_json(&Mat2::basis_times(0, p.b2.clone()))["C1"].clone());
    Ok(rep)
}

/// Pre-normal reduction followed by the formal pipeline; the log starts at `s`.
fn formal_of(s: &TEStruct) -> Result<(FormalNormalForm, Vec<LoggedStep>, bool)> {
    let (p, gauge) = to_prenormal(s)?;
    let nf = formal_normal_form(&p)?;
    let mut log = vec![LoggedStep { label: "to pre-normal form".into(), map: gauge }];
    log.extend(nf.log.iter().cloned());
    let matches = replays_to(s, &log, &nf.id)?;
    Ok((nf, log, matches))
}

fn replays_to(s: &TEStruct, log: &[LoggedStep], id: &NormalFormId) -> Result<bool> {
    let out = replay(s, log)?;
    let (nz, nt) = out.orders();
    Ok(out.eq_at_common_order(&id.to_structure(nz, nt)?))
}

pub fn cmd_formal_nf(path: &Path) -> Result<Report> {
    let doc = load(path)?;
    let (nf, log, matches) = formal_of(&doc.structure)?;
    let mut rep = Report::new("formal-nf");
    rep.verdict("replay_matches", matches).verdict("elementary", is_elementary(&nf.normal));
    rep.normal_forms.insert("formal".into(), nf.id.clone());
    rep.transformation_logs.insert("input_to_normal_form".into(), log_records(&log));
    rep.detail("isomorphic_normal_forms", &nf.isomorphic);
    rep.warnings.extend(nf.warnings.iter().cloned());
    Ok(rep)
}

/// An isomorphism from the structure of `n1` to that of `n2` realizing the witness.
pub fn witness_map(n1: &NormalFormId, witness: IsoWitness, nz: usize, nt: usize) -> Result<Option<GaugeMap>> {
    let w = nt + 1;
    match witness {
        IsoWitness::Equal => Ok(Some(GaugeMap::gauge(Mat2::identity(nz, nt)))),
        IsoWitness::F1SignFlip => {
            let d = Mat2::constant([Scalar::zero(), Scalar::zero(), Scalar::one(), Scalar::zero()], nz, w);
            Ok(Some(GaugeMap::with_base(d, TSeries::monomial(Scalar::int(-1), 1, w))))
        }
        IsoWitness::Nf34SignFlip => {
            let l = n1.param("lambda")?;
            Ok(Some(conformal_map(&Scalar::one(), &Scalar::one(), &-l.clone(), nz, nt)?))
        }
        IsoWitness::NotIsomorphic => Ok(None),
    }
}

pub fn cmd_formal_iso(a: &Path, b: &Path) -> Result<Report> {
    let (da, db) = (load(a)?, load(b)?);
    let (na, la, ma) = formal_of(&da.structure)?;
    let (nb, lb, mb) = formal_of(&db.structure)?;
    let dec = formal_iso_decision(&na.id, &nb.id)?;
    let mut rep = Report::new("formal-iso");
    rep.verdict("isomorphic", dec.isomorphic)
        .verdict("gauge_isomorphic", matches!(dec.witness, IsoWitness::Equal))
        .verdict("a_replay_matches", ma)
        .verdict("b_replay_matches", mb);
    rep.normal_forms.insert("a".into(), na.id.clone());
    rep.normal_forms.insert("b".into(), nb.id.clone());
    rep.transformation_logs.insert("a_to_normal_form".into(), log_records(&la));
    rep.transformation_logs.insert("b_to_normal_form".into(), log_records(&lb));
    let (nz, nt) = na.normal.orders();
    if let Some(map) = witness_map(&na.id, dec.witness, nz, nt)? {
        let step = LoggedStep { label: format!("{:?}", dec.witness), map };
        let out = replay(&na.id.to_structure(nz, nt)?, std::slice::from_ref(&step))?;
        let (oz, ot) = out.orders();
        rep.verdict("witness_replay_matches", out.eq_at_common_order(&nb.id.to_structure(oz, ot)?));
        rep.transformation_logs.insert("normal_form_a_to_normal_form_b".into(), log_records(&[step]));
    }
    rep.detail("witness", dec.witness);
    rep.flags.extend(dec.flags);
    rep.warnings.extend(na.warnings.into_iter().chain(nb.warnings));
    Ok(rep)
}

/// The holomorphic normal form reached from the Malgrange deformation of `d`.
pub fn holo_from_data(d: &BirkhoffData, nz: usize, nt: usize) -> Result<HoloNormalForm> {
    if d.c1.is_zero() {
        first_type_normal_form(&d.c, &d.binf(), nz, nt)
    } else {
        holo_normal_form_second_type(&d.c, &d.binf(), RootOrder::Canonical, nz, nt)
    }
}

pub fn cmd_classify(path: &Path, opts: &Options) -> Result<Report> {
    let doc = load(path)?;
    let s = &doc.structure;
    let hr = classify_holomorphic(s, opts.n_max)?;
    let mut rep = Report::new("classify");
    let prenormal_step = LoggedStep { label: "to pre-normal form".into(), map: hr.prenormal_gauge.clone() };
    match &hr.class {
        HolomorphicClass::Elementary(nf) => {
            let mut log = vec![prenormal_step];
            log.extend(nf.log.iter().cloned());
            rep.verdict("elementary", true).verdict("replay_matches", replays_to(s, &log, &nf.id)?);
            rep.normal_forms.insert("holomorphic".into(), nf.id.clone());
            rep.normal_forms.insert("formal".into(), nf.id.clone());
            rep.transformation_logs.insert("input_to_normal_form".into(), log_records(&log));
            rep.warnings.extend(nf.warnings.iter().cloned());
        }
        HolomorphicClass::NonElementary(ne) => {
            let (nz, nt) = s.orders();
            let h = holo_from_data(&ne.data, nz, nt)?;
            rep.verdict("elementary", false)
                .verdict("isomorphic_to_formal_normal_form", ne.iso_to_formal.isomorphic)
                .verdict("replay_matches", h.replay_matches);
            rep.normal_forms.insert("holomorphic".into(), ne.normal_form.clone());
            rep.normal_forms.insert("formal".into(), ne.formal_normal_form.clone());
            rep.transformation_logs.insert("input_to_prenormal".into(), log_records(&[prenormal_step]));
            rep.transformation_logs.insert("malgrange_to_normal_form".into(), log_records(&h.log));
            rep.detail("c1", assign_c1(&ne.normal_form)?)
                .detail("birkhoff_data", &ne.data)
                .detail(
                    "origin_reduction",
                    json!({
                        "b0": ne.reduction.b0,
                        "binf": ne.reduction.binf,
                        "gauge": ne.reduction.t,
                        "resonances": ne.reduction.resonances,
                        "constant_gauge": ne.constant_gauge,
                    }),
                )
                .detail("iso_to_formal", &ne.iso_to_formal);
            if let Some(k) = &h.constants {
                rep.detail("gauge_constants", k);
            }
            rep.flags.extend(ne.iso_to_formal.flags.iter().cloned());
        }
    }
    let restriction = restrict_origin(&hr.prenormal.to_structure())?;
    rep.detail("irreducibility", irreducibility_check(&restriction, -opts.k_max..=opts.k_max));
    match induced_normal_form(&hr.normal_form().to_structure(opts.order_z.min(4), opts.order_t)?) {
        Ok(e) => {
            rep.detail("induced_euler", &e.normal);
        }
        Err(e) => rep.warnings.push(format!("induced Euler field: {e}")),
    }
    Ok(rep)
}

pub fn cmd_birkhoff_iso(a: &str, b: &str, opts: &Options) -> Result<Report> {
    let (da, db) = (parse_birkhoff_tuple("a", a)?, parse_birkhoff_tuple("b", b)?);
    let dec = birkhoff_iso_decision(&da, &db, opts.n_max)?;
    let mut rep = Report::new("birkhoff-iso");
    rep.verdict("isomorphic", dec.isomorphic);
    rep.detail("a", &da).detail("b", &db).detail("decision", &dec);
    rep.flags.extend(dec.flags.iter().cloned());
    Ok(rep)
}

/// Parameters of the Malgrange deformation: B₀ᵒ = cC₁ + c₀C₂ and B_∞.
#[derive(Clone, Debug, PartialEq)]
pub struct MalgrangeParams {
    pub c: Scalar,
    pub c0: Scalar,
    pub binf: CMat,
}

impl MalgrangeParams {
    /// B_∞ = αC₁ + c₁C₂ − D/4 + c₀E.
    pub fn normalized(c: Scalar, alpha: Scalar, c0: Scalar, c1: Scalar) -> Self {
        let binf = CMat::new(alpha, c1, Scalar::frac(-1, 4), c0.clone());
        MalgrangeParams { c, c0, binf }
    }
}

pub fn cmd_malgrange(p: &MalgrangeParams, opts: &Options) -> Result<StructureDocument> {
    let st = malgrange_xy(&p.binf, &p.c0, opts.order_t)?;
    Ok(StructureDocument::from_structure(&malgrange_connection(&st, &p.c, opts.order_z)?))
}

fn euler_field(c: &str, g: &str, order: usize) -> Result<EulerField> {
    Ok(EulerField::new(parse_param("c", c)?, parse_series(g, order).map_err(|e| match e {
        Error::Parse { location, message } => Error::parse(format!("g: {location}"), message),
        other => other,
    })?))
}

pub fn cmd_euler_nf(c: &str, g: &str, opts: &Options) -> Result<Report> {
    let e = euler_field(c, g, opts.order_t)?;
    let n = euler_normal_form(&e)?;
    let mut rep = Report::new("euler-nf");
    rep.detail("normal_form", &n.normal).detail("normalization", &n);
    if let Some(lam) = &n.lam {
        let pushed = e.push_forward(lam)?;
        let target = n.normal.field(n.order);
        rep.verdict("push_forward_matches", pushed.g.eq_to_order(&target.g, n.order) && pushed.c == target.c);
    }
    rep.warnings.extend(n.notices.iter().cloned());
    Ok(rep)
}

pub fn cmd_euler_realizable(c: &str, g: &str, opts: &Options) -> Result<Report> {
    let e = euler_field(c, g, opts.order_t)?;
    let n = euler_normal_form(&e)?;
    let mut rep = Report::new("euler-realizable");
    rep.verdict("te_realizable", realizable_by_te(&n.normal))
        .verdict("frobenius_realizable", frobenius_realizable(&n.normal));
    rep.detail("normal_form", &n.normal);
    rep.warnings.extend(n.notices.iter().cloned());
    Ok(rep)
}

/// Runs the acceptance criteria; a failed criterion is a `false` verdict, not an error.
pub fn cmd_selftest(opts: &Options) -> Result<Report> {
    let mut rep = Report::new("selftest");
    for outcome in selftest::run_all(opts) {
        rep.verdict(&outcome.id, outcome.passed);
        rep.detail(&outcome.id, json!({"name": outcome.name, "checked": outcome.checked, "detail": outcome.detail}));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures::{fixture_document, fixture_id};
    use crate::connmat::apply_isomorphism;
    use crate::formalnf::Family;

    fn write_tmp(name: &str, doc: &StructureDocument) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("connexa-cmd-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(format!("{name}.json"));
        std::fs::write(&p, doc.to_text()).unwrap();
        p
    }

    #[test]
    fn verify_fixture_is_flat() {
        let p = write_tmp("f1_r2", &fixture_document("f1_r2").unwrap());
        let r = cmd_verify(&p).unwrap();
        assert!(r.verdicts["flat"]);
        assert!(r.residuals.values().all(|s| s.zero));
        assert_eq!(r.residuals.len(), 3);
    }

    #[test]
    fn classify_mal2_reports_c1() {
        let p = write_tmp("mal2", &fixture_document("mal2_lambda1").unwrap());
        let r = cmd_classify(&p, &Options::default()).unwrap();
        assert_eq!(r.normal_forms["holomorphic"].family, Family::HnfMal2);
        // c₁ = (4λ² + 8λ + 3)/(16c₀) at λ = 1, c₀ = 2
        let c0 = Scalar::int(2);
        let want = &Scalar::int(15) / &(&Scalar::int(16) * &c0);
        assert_eq!(r.details["c1"], json!(want.to_string()));
        assert!(r.verdicts["replay_matches"]);
    }

    #[test]
    fn formal_nf_replays_on_fixtures() {
        for name in ["f1", "f1_r2", "nf3_2", "nf3_4"] {
            let p = write_tmp(name, &fixture_document(name).unwrap());
            let r = cmd_formal_nf(&p).unwrap();
            assert!(r.verdicts["replay_matches"], "{name}");
            assert_eq!(r.normal_forms["formal"], fixture_id(name).unwrap(), "{name}");
        }
    }

    #[test]
    fn witness_maps_replay() {
        let (nz, nt) = (4, 6);
        let h = Scalar::frac(1, 2);
        let pairs = [
            (NormalFormId::f1(Scalar::int(1), h.clone(), Scalar::int(3)), NormalFormId::f1(Scalar::int(1), h.clone(), Scalar::int(-3))),
            (
                NormalFormId::nf3(Family::Nf3_4, Scalar::int(0), h.clone(), Some(Scalar::frac(2, 3)), None).unwrap(),
                NormalFormId::nf3(Family::Nf3_4, Scalar::int(0), h.clone(), Some(Scalar::frac(-2, 3)), None).unwrap(),
            ),
        ];
        for (a, b) in pairs {
            let dec = formal_iso_decision(&a, &b).unwrap();
            assert!(dec.isomorphic);
            let map = witness_map(&a, dec.witness, nz, nt).unwrap().unwrap();
            let out = apply_isomorphism(&a.to_structure(nz, nt).unwrap(), &map).unwrap();
            let (oz, ot) = out.orders();
            assert!(out.eq_at_common_order(&b.to_structure(oz, ot).unwrap()), "{a} -> {b}");
        }
    }

    #[test]
    fn formal_iso_between_fixture_and_gauged_copy() {
        let a = write_tmp("iso_a", &fixture_document("nf3_4").unwrap());
        let r = cmd_formal_iso(&a, &a).unwrap();
        assert!(r.verdicts["isomorphic"]);
        assert!(r.verdicts["witness_replay_matches"]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn birkhoff_tuples() {
        let opts = Options::default();
        // c₀c₁ = (n−1)(2n−1)/2 at n = 2 with c₀ = 1
        let r = cmd_birkhoff_iso("0,0,1,3/2", "0,0,1,0", &opts).unwrap();
        assert!(r.verdicts["isomorphic"]);
        let r = cmd_birkhoff_iso("0,0,1,1", "0,0,1,0", &opts).unwrap();
        assert!(!r.verdicts["isomorphic"]);
        assert!(matches!(cmd_birkhoff_iso("0,0,1", "0,0,1,0", &opts), Err(Error::Parse { .. })));
        assert!(matches!(cmd_birkhoff_iso("0,0,0,1", "0,0,1,0", &opts), Err(Error::Precondition(_))));
    }

    #[test]
    fn euler_commands() {
        let opts = Options::default();
        let r = cmd_euler_nf("0", "2", &opts).unwrap();
        assert_eq!(r.details["normal_form"]["family"], json!("E1"));
        assert!(r.verdicts["push_forward_matches"]);
        let r = cmd_euler_realizable("0", "t^3 + t^4", &opts).unwrap();
        assert!(!r.verdicts["te_realizable"]);
        assert!(matches!(cmd_euler_nf("0", "2 +", &opts), Err(Error::Parse { .. })));
    }

    #[test]
    fn malgrange_document_is_flat() {
        let p = MalgrangeParams::normalized(Scalar::int(1), Scalar::zero(), Scalar::int(2), Scalar::frac(15, 32));
        let opts = Options { order_z: 4, order_t: 6, ..Options::default() };
        let d = cmd_malgrange(&p, &opts).unwrap();
        assert!(crate::connmat::is_flat(&d.structure));
        assert_eq!((d.orders.nz, d.orders.nt, d.orders.t1_degree), (4, 6, 1));
    }
}
