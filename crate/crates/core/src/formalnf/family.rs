//! Normal-form families and their parameters.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::connmat::TEStruct;
use crate::error::{Error, Result};
use crate::formalnf::PreNormalForm;
use crate::series::{Scalar, TSeries, ZTSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    F1,
    Fr,
    #[serde(rename = "NF3-1")]
    Nf3_1,
    #[serde(rename = "NF3-2")]
    Nf3_2,
    #[serde(rename = "NF3-3")]
    Nf3_3,
    #[serde(rename = "NF3-4")]
    Nf3_4,
    #[serde(rename = "NF3-5")]
    Nf3_5,
    #[serde(rename = "NF3-6")]
    Nf3_6,
    #[serde(rename = "NF3-7")]
    Nf3_7,
    #[serde(rename = "NF3-8")]
    Nf3_8,
    #[serde(rename = "NF3-9")]
    Nf3_9,
    #[serde(rename = "HNF-Mal1")]
    HnfMal1,
    #[serde(rename = "HNF-Mal2")]
    HnfMal2,
    #[serde(rename = "HNF-Mal3")]
    HnfMal3,
}

impl Family {
    pub const ALL: [Family; 14] = [
        Family::F1,
        Family::Fr,
        Family::Nf3_1,
        Family::Nf3_2,
        Family::Nf3_3,
        Family::Nf3_4,
        Family::Nf3_5,
        Family::Nf3_6,
        Family::Nf3_7,
        Family::Nf3_8,
        Family::Nf3_9,
        Family::HnfMal1,
        Family::HnfMal2,
        Family::HnfMal3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::F1 => "F1",
            Family::Fr => "Fr",
            Family::Nf3_1 => "NF3-1",
            Family::Nf3_2 => "NF3-2",
            Family::Nf3_3 => "NF3-3",
            Family::Nf3_4 => "NF3-4",
            Family::Nf3_5 => "NF3-5",
            Family::Nf3_6 => "NF3-6",
            Family::Nf3_7 => "NF3-7",
            Family::Nf3_8 => "NF3-8",
            Family::Nf3_9 => "NF3-9",
            Family::HnfMal1 => "HNF-Mal1",
            Family::HnfMal2 => "HNF-Mal2",
            Family::HnfMal3 => "HNF-Mal3",
        }
    }

    /// Parameter names the family carries, besides c and α.
    pub fn extra_params(&self) -> &'static [&'static str] {
        match self {
            Family::F1 | Family::HnfMal1 | Family::HnfMal3 => &["c0"],
            Family::Fr => &["r"],
            Family::Nf3_1 | Family::Nf3_2 => &[],
            Family::Nf3_3 | Family::Nf3_4 | Family::Nf3_6 | Family::Nf3_7 | Family::Nf3_8 | Family::Nf3_9 => {
                &["lambda"]
            }
            Family::Nf3_5 => &["lambda", "gamma"],
            Family::HnfMal2 => &["c0", "lambda"],
        }
    }

    /// Families whose underlying (T)-structure is A₂ = C₂.
    pub fn is_nf3(&self) -> bool {
        matches!(
            self,
            Family::Nf3_1
                | Family::Nf3_2
                | Family::Nf3_3
                | Family::Nf3_4
                | Family::Nf3_5
                | Family::Nf3_6
                | Family::Nf3_7
                | Family::Nf3_8
                | Family::Nf3_9
        )
    }

    pub fn is_holomorphic_only(&self) -> bool {
        matches!(self, Family::HnfMal1 | Family::HnfMal2 | Family::HnfMal3)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::parse("family", format!("unknown normal-form family {s:?}")))
    }
}

/// A normal-form class with its parameters (c, α and the family-specific ones).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormId {
    pub family: Family,
    pub params: BTreeMap<String, Scalar>,
}

impl fmt::Display for NormalFormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family)?;
        for (k, (name, v)) in self.params.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        write!(f, ")")
    }
}

fn positive_integer(s: &Scalar) -> bool {
    s.is_nonneg_integer() && !s.is_zero()
}

impl NormalFormId {
    /// Builds and validates an identifier.
    pub fn new(family: Family, c: Scalar, alpha: Scalar, extra: &[(&str, Scalar)]) -> Result<Self> {
        let mut params = BTreeMap::new();
        params.insert("c".to_string(), c);
        params.insert("alpha".to_string(), alpha);
        for (k, v) in extra {
            params.insert(k.to_string(), v.clone());
        }
        let id = NormalFormId { family, params };
        id.validate()?;
        Ok(id)
    }

    pub fn f1(c: Scalar, alpha: Scalar, c0: Scalar) -> Self {
        Self::new(Family::F1, c, alpha, &[("c0", c0)]).expect("F1 has no constraints")
    }

    pub fn fr(c: Scalar, alpha: Scalar, r: usize) -> Result<Self> {
        Self::new(Family::Fr, c, alpha, &[("r", Scalar::int(r as i64))])
    }

    pub fn nf3(family: Family, c: Scalar, alpha: Scalar, lambda: Option<Scalar>, gamma: Option<Scalar>) -> Result<Self> {
        let mut extra = Vec::new();
        if let Some(l) = lambda {
            extra.push(("lambda", l));
        }
        if let Some(g) = gamma {
            extra.push(("gamma", g));
        }
        Self::new(family, c, alpha, &extra)
    }

    /// NF3-3 at λ = 0 is the same structure as NF3-1; maps it there.
    pub fn canonical(&self) -> NormalFormId {
        match (self.family, self.params.get("lambda")) {
            (Family::Nf3_3, Some(l)) if l.is_zero() => {
                NormalFormId::nf3(Family::Nf3_1, self.c().clone(), self.alpha().clone(), None, None).expect("NF3-1 has no constraints")
            }
            _ => self.clone(),
        }
    }

    pub fn param(&self, name: &str) -> Result<&Scalar> {
        self.params
            .get(name)
            .ok_or_else(|| Error::Domain(format!("{} has no parameter {name}", self.family)))
    }

    pub fn c(&self) -> &Scalar {
        &self.params["c"]
    }

    pub fn alpha(&self) -> &Scalar {
        &self.params["alpha"]
    }

    /// Exactly the required parameters, with the integrality constraints of each family.
    pub fn validate(&self) -> Result<()> {
        let mut want: Vec<&str> = vec!["alpha", "c"];
        want.extend(self.family.extra_params());
        want.sort_unstable();
        let have: Vec<&str> = self.params.keys().map(String::as_str).collect();
        if have != want {
            return Err(Error::Domain(format!("{} expects parameters {want:?}, got {have:?}", self.family)));
        }
        let bad = |m: &str| Err(Error::Domain(format!("{}: {m}", self.family)));
        let lam = self.params.get("lambda");
        let nonzero_int = |l: &Scalar| l.is_integer() && !l.is_zero();
        match self.family {
            Family::Fr if !positive_integer(&self.params["r"]) => bad("r must be a positive integer"),
            Family::Nf3_3 | Family::Nf3_4 if nonzero_int(lam.unwrap()) => bad("lambda must lie outside Z minus {0}"),
            Family::Nf3_5 | Family::Nf3_6 | Family::Nf3_7 if !positive_integer(lam.unwrap()) => {
                bad("lambda must be a positive integer")
            }
            Family::Nf3_8 | Family::Nf3_9 if !(lam.unwrap().is_integer() && (-lam.unwrap()).is_nonneg_integer() && !lam.unwrap().is_zero()) => {
                bad("lambda must be a negative integer")
            }
            Family::HnfMal1 | Family::HnfMal2 | Family::HnfMal3 if self.params["c0"].is_zero() => bad("c0 must be nonzero"),
            Family::HnfMal2 if lam.unwrap().is_zero() => bad("lambda = 0 belongs to HNF-Mal3"),
            _ => Ok(()),
        }
    }

    fn int_param(&self, name: &str) -> Result<i64> {
        self.param(name)?.to_i64().ok_or_else(|| Error::Domain(format!("{name} is not an integer")))
    }

    /// The pre-normal data (f, b₂, c, α) of the normal form at orders (N_z, N_t).
    pub fn prenormal(&self, nz: usize, nt: usize) -> Result<PreNormalForm> {
        self.validate()?;
        let w = nt + 3;
        let t = |k: usize, s: Scalar| TSeries::monomial(s, k, w);
        let one = || TSeries::one(w);
        let zero = || TSeries::zero(w);
        let mono = |s: TSeries, k: usize| ZTSeries::t_monomial(s, k, nz, w);
        let p = |name: &str| self.param(name).cloned();
        let (f, b2): (ZTSeries, ZTSeries) = match self.family {
            Family::F1 => (mono(one(), 0), mono(&t(1, Scalar::frac(-1, 2)) + &TSeries::constant(p("c0")?, w), 0)),
            Family::Fr => {
                let r = self.int_param("r")? as usize;
                (mono(t(r, Scalar::one()), 0), mono(t(1, Scalar::frac(-1, r as i64 + 2)), 0))
            }
            Family::Nf3_1 => (mono(zero(), 0), mono(zero(), 0)),
            Family::Nf3_2 => (mono(zero(), 0), mono(t(2, Scalar::one()), 0)),
            Family::Nf3_3 | Family::Nf3_7 | Family::Nf3_9 => (mono(zero(), 0), mono(t(1, p("lambda")?), 0)),
            Family::Nf3_4 => (mono(zero(), 0), mono(&t(1, p("lambda")?) + &one(), 0)),
            Family::Nf3_5 | Family::Nf3_6 => {
                let l = self.int_param("lambda")? as usize;
                let (base, g) = if self.family == Family::Nf3_5 {
                    (&t(1, p("lambda")?) + &one(), p("gamma")?)
                } else {
                    (t(1, p("lambda")?), Scalar::one())
                };
                (mono(zero(), 0), &mono(base, 0) + &mono(t(2, g), l))
            }
            Family::Nf3_8 => {
                let l = (-self.int_param("lambda")?) as usize;
                (mono(zero(), 0), &mono(t(1, p("lambda")?), 0) + &mono(one(), l))
            }
            Family::HnfMal1 => {
                let c0sq = p("c0")?.pow(2)?;
                let u = TSeries::from_coeffs(vec![Scalar::one(), Scalar::int(-1)], w);
                (mono(u.invert_unit()?.scale(&c0sq), 0), mono(u, 0))
            }
            Family::HnfMal2 => {
                let (c0, l) = (p("c0")?, p("lambda")?);
                let u = TSeries::from_coeffs(vec![Scalar::one(), &l / &c0], w);
                let ex = &Scalar::int(-2) - &l.inv()?;
                (mono(u.pow_scalar(&ex)?, 0), mono(u.scale(&c0), 0))
            }
            Family::HnfMal3 => {
                let c0sq = p("c0")?.pow(2)?;
                let e = TSeries::monomial(Scalar::int(-1), 1, w).exp()?;
                (mono(e.scale(&c0sq), 0), mono(one(), 0))
            }
        };
        PreNormalForm::new(f.truncate(nz, nt), b2.truncate(nz, nt), self.c().clone(), self.alpha().clone())
    }

    pub fn to_structure(&self, nz: usize, nt: usize) -> Result<TEStruct> {
        let mut s = self.prenormal(nz, nt)?.to_structure();
        if self.family.is_nf3() {
            // A₂ = C₂ exactly: f vanishes identically.
            s.a2.e = ZTSeries::zero(nz, nt);
        }
        Ok(s)
    }
}
