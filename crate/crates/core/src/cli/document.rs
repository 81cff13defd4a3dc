//! The structure document: a JSON tree holding A₁, A₂, B in the {C₁, C₂, D, E} basis.
//!
//! Layout (format tag `connexa-structure/1`):
//!
//! ```text
//! {
//!   "format": "connexa-structure/1",
//!   "kind": "TE",
//!   "orders": {"nz": 3, "nt": 4, "t1_degree": 0},
//!   "matrices": {
//!     "A1": {"C1": [...], "C2": [...], "D": [...], "E": [...]},
//!     "A2": {...},
//!     "B": {...}
//!   }
//! }
//! ```
//!
//! Each component is `nz` entries (z-powers), each holding `t1_degree + 1` entries
//! (t₁-powers), each holding `nt` scalar strings (t₂-powers). Serialization writes every
//! coefficient, so `parse_document(&to_text(d)) == d` and the text round-trips byte for byte.

use serde::Deserialize;

use crate::connmat::{Kind, Mat2, TEStruct, BASIS};
use crate::error::{Error, Result};
use crate::series::{AffinePoly1, Scalar, TSeries, ZTSeries};

pub const FORMAT: &str = "connexa-structure/1";

const MATRICES: [&str; 3] = ["A1", "A2", "B"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orders {
    pub nz: usize,
    pub nt: usize,
    pub t1_degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureDocument {
    pub orders: Orders,
    pub structure: TEStruct,
}

impl StructureDocument {
    /// Wraps a structure; `t1_degree` is 1 exactly when some entry depends on t₁.
    pub fn from_structure(s: &TEStruct) -> Self {
        let (nz, nt) = s.orders();
        let structure = TEStruct::new(s.a1.with_orders(nz, nt), s.a2.with_orders(nz, nt), s.b.with_orders(nz, nt), s.kind);
        let has_t1 = [&structure.a1, &structure.a2, &structure.b].iter().any(|m| m.has_t1());
        StructureDocument { orders: Orders { nz, nt, t1_degree: usize::from(has_t1) }, structure }
    }

    pub fn to_text(&self) -> String {
        let Orders { nz, nt, t1_degree } = self.orders;
        let kind = match self.structure.kind {
            Kind::TE => "TE",
            Kind::TOnly => "T",
        };
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"format\": \"{FORMAT}\",\n"));
        out.push_str(&format!("  \"kind\": \"{kind}\",\n"));
        out.push_str(&format!("  \"orders\": {{\"nz\": {nz}, \"nt\": {nt}, \"t1_degree\": {t1_degree}}},\n"));
        out.push_str("  \"matrices\": {\n");
        let mats = [&self.structure.a1, &self.structure.a2, &self.structure.b];
        for (mi, (name, m)) in MATRICES.iter().zip(mats).enumerate() {
            out.push_str(&format!("    \"{name}\": {{\n"));
            for (ci, (basis, comp)) in BASIS.iter().zip(m.components()).enumerate() {
                out.push_str(&format!("      \"{basis}\": ["));
                for k in 0..nz {
                    out.push_str(if k == 0 { "\n" } else { ",\n" });
                    let p = comp.zcoeff(k);
                    let rows: Vec<String> = [&p.const_part, &p.t1_coeff]
                        .into_iter()
                        .take(t1_degree + 1)
                        .map(|s| {
                            let cs: Vec<String> = s.coeffs().iter().map(|c| format!("\"{c}\"")).collect();
                            format!("[{}]", cs.join(", "))
                        })
                        .collect();
                    out.push_str(&format!("        [{}]", rows.join(", ")));
                }
                out.push_str(if nz == 0 { "]" } else { "\n      ]" });
                out.push_str(if ci + 1 < BASIS.len() { ",\n" } else { "\n" });
            }
            out.push_str(if mi + 1 < MATRICES.len() { "    },\n" } else { "    }\n" });
        }
        out.push_str("  }\n}\n");
        out
    }
}

/// Parses one scalar in the "p/q+r/s*i" text form.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    text.parse()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrders {
    nz: usize,
    nt: usize,
    t1_degree: usize,
}

type RawComponent = Vec<Vec<Vec<String>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    #[serde(rename = "C1")]
    c1: RawComponent,
    #[serde(rename = "C2")]
    c2: RawComponent,
    #[serde(rename = "D")]
    d: RawComponent,
    #[serde(rename = "E")]
    e: RawComponent,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrices {
    #[serde(rename = "A1")]
    a1: RawMatrix,
    #[serde(rename = "A2")]
    a2: RawMatrix,
    #[serde(rename = "B")]
    b: RawMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    format: String,
    kind: Kind,
    orders: RawOrders,
    matrices: RawMatrices,
}

fn check_len(path: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::parse(path, format!("expected {want} entries, found {got}")));
    }
    Ok(())
}

fn component(path: &str, raw: &RawComponent, o: Orders) -> Result<ZTSeries> {
    check_len(path, raw.len(), o.nz)?;
    let mut zs = Vec::with_capacity(o.nz);
    for (k, per_t1) in raw.iter().enumerate() {
        let zpath = format!("{path}[{k}]");
        check_len(&zpath, per_t1.len(), o.t1_degree + 1)?;
        let mut parts = Vec::with_capacity(2);
        for (d, coeffs) in per_t1.iter().enumerate() {
            let dpath = format!("{zpath}[{d}]");
            check_len(&dpath, coeffs.len(), o.nt)?;
            let cs = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    parse_scalar(c).map_err(|_| Error::parse(format!("{dpath}[{j}]"), format!("invalid scalar {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            parts.push(TSeries::from_coeffs(cs, o.nt));
        }
        let t1_coeff = parts.get(1).cloned().unwrap_or_else(|| TSeries::zero(o.nt));
        zs.push(AffinePoly1 { const_part: parts.swap_remove(0), t1_coeff });
    }
    Ok(ZTSeries::from_zcoeffs(zs, o.nz, o.nt))
}

fn matrix(name: &str, raw: &RawMatrix, o: Orders) -> Result<Mat2> {
    let at = |b: &str| format!("matrices.{name}.{b}");
    Ok(Mat2::new(
        component(&at("C1"), &raw.c1, o)?,
        component(&at("C2"), &raw.c2, o)?,
        component(&at("D"), &raw.d, o)?,
        component(&at("E"), &raw.e, o)?,
    ))
}

/// Parses a structure document. Syntax errors report `line:column`; shape and scalar
/// errors report the field path.
pub fn parse_document(text: &str) -> Result<StructureDocument> {
    let raw: RawDocument = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    if raw.format != FORMAT {
        return Err(Error::parse("format", format!("expected {FORMAT:?}, found {:?}", raw.format)));
    }
    let RawOrders { nz, nt, t1_degree } = raw.orders;
    if t1_degree > 1 {
        return Err(Error::parse("orders.t1_degree", format!("must be 0 or 1, found {t1_degree}")));
    }
    if nz == 0 || nt == 0 {
        return Err(Error::parse("orders", "nz and nt must be positive"));
    }
    let orders = Orders { nz, nt, t1_degree };
    let m = &raw.matrices;
    let structure = TEStruct::new(matrix("A1", &m.a1, orders)?, matrix("A2", &m.a2, orders)?, matrix("B", &m.b, orders)?, raw.kind);
    Ok(StructureDocument { orders, structure })
}

pub fn read_document(path: &std::path::Path) -> Result<StructureDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalnf::NormalFormId;

    fn sample() -> StructureDocument {
        let id = NormalFormId::f1(Scalar::frac(1, 2), Scalar::int(-1), "1+2*i".parse().unwrap());
        StructureDocument::from_structure(&id.to_structure(3, 4).unwrap())
    }

    #[test]
    fn round_trip_is_exact() {
        let d = sample();
        let text = d.to_text();
        let back = parse_document(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_text(), text);
        assert_eq!(d.orders, Orders { nz: 3, nt: 4, t1_degree: 1 });
    }

    #[test]
    fn diagnostics_name_the_field() {
        let text = sample().to_text().replacen("\"1\"", "\"1/0\"", 1);
        match parse_document(&text) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("matrices.A1.C1[0][0]"), "{location}"),
            other => panic!("{other:?}"),
        }
        let text = sample().to_text().replacen("\"nz\": 3", "\"nz\": 2", 1);
        match parse_document(&text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "matrices.A1.C1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let text = sample().to_text().replacen("\"kind\"", "kind", 1);
        match parse_document(&text) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 3"), "{location}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_format_and_degree() {
        let t = sample().to_text();
        assert!(parse_document(&t.replace(FORMAT, "other/1")).is_err());
        assert!(parse_document(&t.replacen("\"t1_degree\": 1", "\"t1_degree\": 2", 1)).is_err());
        assert!(parse_document("").is_err());
    }
}
