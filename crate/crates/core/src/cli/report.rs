//! Machine-readable reports and their serialization helpers.

use std::collections::BTreeMap;

use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::connmat::{GaugeMap, Mat2, Residuals, BASIS};
use crate::error::{Error, Result};
use crate::formalnf::{LoggedStep, NormalFormId};
use crate::series::{AffinePoly1, Scalar, TSeries, ZTSeries};

pub const REPORT_FORMAT: &str = "connexa-report/1";

/// A series as its coefficient list with trailing zeros trimmed.
pub fn ser_tseries<S: Serializer>(s: &TSeries, ser: S) -> std::result::Result<S::Ok, S::Error> {
    let cs = trimmed(s.coeffs());
    let mut seq = ser.serialize_seq(Some(cs.len()))?;
    for c in cs {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

pub(crate) fn trimmed<T: IsZeroLike>(cs: &[T]) -> &[T] {
    let n = cs.iter().rposition(|c| !c.zero_like()).map_or(0, |k| k + 1);
    &cs[..n]
}

pub(crate) trait IsZeroLike {
    fn zero_like(&self) -> bool;
}

impl IsZeroLike for Scalar {
    fn zero_like(&self) -> bool {
        self.is_zero()
    }
}

/// Exact-zero summary of one residual matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualSummary {
    pub zero: bool,
    pub nonzero_coefficients: usize,
    pub orders: (usize, usize),
}

impl ResidualSummary {
    pub fn of(m: &Mat2) -> Self {
        let nonzero_coefficients = m
            .components()
            .iter()
            .flat_map(|c| c.zcoeffs())
            .flat_map(|p| p.const_part.coeffs().iter().chain(p.t1_coeff.coeffs()))
            .filter(|c| !c.is_zero())
            .count();
        ResidualSummary { zero: nonzero_coefficients == 0, nonzero_coefficients, orders: m.orders() }
    }
}

/// A logged isomorphism: pull back by λ (identity when absent), then gauge by T∘λ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub label: String,
    pub t: Value,
    pub lambda: Option<Vec<String>>,
}

impl StepRecord {
    pub fn of(step: &LoggedStep) -> Self {
        StepRecord {
            label: step.label.clone(),
            t: mat2_to_json(&step.map.t),
            lambda: step.map.h_lambda.as_ref().map(|l| l.coeffs().iter().map(Scalar::to_string).collect()),
        }
    }

    /// Rebuilds the step so the log can be replayed.
    pub fn to_step(&self) -> Result<LoggedStep> {
        let t = mat2_from_json(&self.t, "t")?;
        let map = match &self.lambda {
            None => GaugeMap::gauge(t),
            Some(cs) => {
                let cs = cs.iter().map(|c| c.parse()).collect::<Result<Vec<Scalar>>>()?;
                let n = cs.len();
                GaugeMap::with_base(t, TSeries::from_coeffs(cs, n))
            }
        };
        Ok(LoggedStep { label: self.label.clone(), map })
    }
}

pub fn log_records(log: &[LoggedStep]) -> Vec<StepRecord> {
    log.iter().map(StepRecord::of).collect()
}

/// Dense {basis: [z][t₁-degree][t₂-power]} arrays; the t₁ row is present only when used.
pub fn mat2_to_json(m: &Mat2) -> Value {
    let rows = if m.has_t1() { 2 } else { 1 };
    let mut obj = serde_json::Map::new();
    for (name, comp) in BASIS.iter().zip(m.components()) {
        let zs: Vec<Value> = comp
            .zcoeffs()
            .iter()
            .map(|p| {
                let parts = [&p.const_part, &p.t1_coeff];
                Value::Array(
                    parts[..rows]
                        .iter()
                        .map(|s| Value::Array(s.coeffs().iter().map(|c| Value::String(c.to_string())).collect()))
                        .collect(),
                )
            })
            .collect();
        obj.insert((*name).to_string(), Value::Array(zs));
    }
    Value::Object(obj)
}

pub fn mat2_from_json(v: &Value, path: &str) -> Result<Mat2> {
    let bad = |p: String, m: &str| Error::parse(p, m.to_string());
    let obj = v.as_object().ok_or_else(|| bad(path.into(), "expected an object"))?;
    let mut comps = Vec::with_capacity(4);
    let mut dims: Option<(usize, usize)> = None;
    for name in BASIS {
        let p = format!("{path}.{name}");
        let zs = obj.get(name).and_then(Value::as_array).ok_or_else(|| bad(p.clone(), "missing array"))?;
        let mut polys = Vec::with_capacity(zs.len());
        for (k, z) in zs.iter().enumerate() {
            let rows = z.as_array().ok_or_else(|| bad(format!("{p}[{k}]"), "expected an array"))?;
            let mut parts = Vec::with_capacity(2);
            for (d, row) in rows.iter().enumerate() {
                let rp = format!("{p}[{k}][{d}]");
                let cs = row
                    .as_array()
                    .ok_or_else(|| bad(rp.clone(), "expected an array"))?
                    .iter()
                    .map(|c| c.as_str().ok_or_else(|| bad(rp.clone(), "expected strings"))?.parse())
                    .collect::<Result<Vec<Scalar>>>()?;
                let n = cs.len();
                parts.push(TSeries::from_coeffs(cs, n));
            }
            if parts.is_empty() || parts.len() > 2 {
                return Err(bad(format!("{p}[{k}]"), "expected one or two rows"));
            }
            let nt = parts[0].order();
            let t1_coeff = parts.get(1).cloned().unwrap_or_else(|| TSeries::zero(nt));
            polys.push(AffinePoly1 { const_part: parts.swap_remove(0), t1_coeff });
        }
        let nz = polys.len();
        let nt = polys.first().map_or(0, |p| p.order());
        if *dims.get_or_insert((nz, nt)) != (nz, nt) || polys.iter().any(|q| q.order() != nt) {
            return Err(bad(p, "inconsistent orders"));
        }
        comps.push(ZTSeries::from_zcoeffs(polys, nz, nt));
    }
    let mut it = comps.into_iter();
    let mut next = || it.next().expect("four components");
    Ok(Mat2::new(next(), next(), next(), next()))
}

/// Result of one command. Maps are ordered, so serialization is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub command: String,
    pub verdicts: BTreeMap<String, bool>,
    pub normal_forms: BTreeMap<String, NormalFormId>,
    pub transformation_logs: BTreeMap<String, Vec<StepRecord>>,
    pub residuals: BTreeMap<String, ResidualSummary>,
    pub details: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    /// Cases the classification leaves implicit; any entry makes the exit code 4.
    pub flags: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { format: REPORT_FORMAT, command: command.to_string(), ..Default::default() }
    }

    pub fn verdict(&mut self, name: &str, v: bool) -> &mut Self {
        self.verdicts.insert(name.to_string(), v);
        self
    }

    pub fn detail(&mut self, name: &str, v: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(v).unwrap_or_else(|e| json!({ "serialization_error": e.to_string() }));
        self.details.insert(name.to_string(), v);
        self
    }

    pub fn residuals_of(&mut self, prefix: &str, r: &Residuals) -> &mut Self {
        self.residuals.insert(format!("{prefix}rt"), ResidualSummary::of(&r.rt));
        for (name, m) in [("rz1", &r.rz1), ("rz2", &r.rz2)] {
            if let Some(m) = m {
                self.residuals.insert(format!("{prefix}{name}"), ResidualSummary::of(m));
            }
        }
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.flags.is_empty() {
            0
        } else {
            4
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connmat::apply_isomorphism;
    use crate::formalnf::NormalFormId;

    #[test]
    fn step_records_replay() {
        let nt = 5;
        let lam = TSeries::from_ints(&[0, 2, 1], nt);
        let t = Mat2::identity(3, nt).scale(&Scalar::int(3));
        let step = LoggedStep { label: "x".into(), map: GaugeMap::with_base(t, lam) };
        let rec = StepRecord::of(&step);
        let json = serde_json::to_string(&rec).unwrap();
        let back: Value = serde_json::from_str(&json).unwrap();
        let rec2 = StepRecord {
            label: back["label"].as_str().unwrap().into(),
            t: back["t"].clone(),
            lambda: serde_json::from_value(back["lambda"].clone()).unwrap(),
        };
        assert_eq!(rec2.to_step().unwrap(), step);
        let s = NormalFormId::f1(Scalar::int(1), Scalar::zero(), Scalar::int(2)).to_structure(3, nt).unwrap();
        assert_eq!(apply_isomorphism(&s, &step.map).unwrap(), apply_isomorphism(&s, &rec2.to_step().unwrap().map).unwrap());
    }

    #[test]
    fn residual_counts() {
        let mut m = Mat2::zero(2, 3);
        assert!(ResidualSummary::of(&m).zero);
        m.c2 = ZTSeries::one(2, 3);
        let r = ResidualSummary::of(&m);
        assert_eq!((r.zero, r.nonzero_coefficients, r.orders), (false, 1, (2, 3)));
    }

    #[test]
    fn exit_code_follows_flags() {
        let mut r = Report::new("x");
        assert_eq!(r.exit_code(), 0);
        r.flags.push("f".into());
        assert_eq!(r.exit_code(), 4);
    }
}
