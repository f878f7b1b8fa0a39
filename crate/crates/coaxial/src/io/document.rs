//! JSON documents for tuples and polyhedra.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Error;
use crate::exact::Rational;
use crate::smoothing::CombPolyhedron3;
use crate::tuple::Tuple;

pub const SCHEMA_VERSION: u32 = 1;

fn current_version() -> u32 {
    SCHEMA_VERSION
}

/// A rational written as `"p/q"`, or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Scalar::Int(v) => Ok(Rational::from_integer(BigInt::from(*v))),
            Scalar::Text(s) => {
                let s = s.trim();
                if s.ends_with("/0") {
                    return Err(format!("zero denominator in `{s}`"));
                }
                Rational::from_str(s).map_err(|_| format!("`{s}` is not a rational"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDocument {
    #[serde(default = "current_version")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    /// Number of vectors after expanding multiplicities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub vectors: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<usize>>,
}

impl TupleDocument {
    pub fn to_tuple(&self) -> Result<Tuple, Error> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::UnknownVersion(self.version));
        }
        let mult = match &self.multiplicities {
            Some(k) if k.len() != self.vectors.len() => {
                return Err(Error::Field {
                    field: "multiplicities".into(),
                    message: format!("{} entries for {} vectors", k.len(), self.vectors.len()),
                })
            }
            Some(k) => k.clone(),
            None => vec![1; self.vectors.len()],
        };
        let mut groups = Vec::with_capacity(self.vectors.len());
        for (i, (v, &k)) in self.vectors.iter().zip(&mult).enumerate() {
            if v.len() != self.m {
                return Err(Error::Field {
                    field: format!("vectors[{i}]"),
                    message: format!("has {} entries, m = {}", v.len(), self.m),
                });
            }
            if k == 0 {
                return Err(Error::Field { field: format!("multiplicities[{i}]"), message: "must be positive".into() });
            }
            let row = v
                .iter()
                .enumerate()
                .map(|(j, x)| x.to_rational().map_err(|message| Error::Field { field: format!("vectors[{i}][{j}]"), message }))
                .collect::<Result<Vec<_>, _>>()?;
            groups.push((row, k));
        }
        let t = Tuple::with_multiplicities(self.m, &groups)?;
        if let Some(n) = self.n {
            if n != t.n() {
                return Err(Error::Field { field: "n".into(), message: format!("declared {n}, found {}", t.n()) });
            }
        }
        Ok(t)
    }
}

/// Document for `t`, with runs of equal vectors folded into multiplicities.
pub fn tuple_document(t: &Tuple, name: Option<&str>) -> TupleDocument {
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    let mut last: Option<&Vec<Rational>> = None;
    for v in t.vectors() {
        if last == Some(v) {
            *mult.last_mut().expect("run") += 1;
        } else {
            vectors.push(v.iter().map(|x| Scalar::Text(x.to_string())).collect());
            mult.push(1);
            last = Some(v);
        }
    }
    TupleDocument {
        version: SCHEMA_VERSION,
        name: name.map(str::to_string),
        m: t.m(),
        n: Some(t.n()),
        vectors,
        multiplicities: mult.iter().any(|&k| k > 1).then_some(mult),
    }
}

pub fn parse_tuple_document(text: &str) -> Result<(Tuple, Option<String>), Error> {
    let doc: TupleDocument = serde_json::from_str(text)?;
    Ok((doc.to_tuple()?, doc.name))
}

/// Facets as cyclic vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronDocument {
    #[serde(default = "current_version")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub facets: Vec<Vec<usize>>,
}

pub fn parse_polyhedron_document(text: &str) -> Result<(CombPolyhedron3, Option<String>), Error> {
    let doc: PolyhedronDocument = serde_json::from_str(text)?;
    if doc.version != SCHEMA_VERSION {
        return Err(Error::UnknownVersion(doc.version));
    }
    Ok((CombPolyhedron3::new(doc.facets)?, doc.name))
}

pub fn polyhedron_document(p: &CombPolyhedron3, name: Option<&str>) -> PolyhedronDocument {
    PolyhedronDocument { version: SCHEMA_VERSION, name: name.map(str::to_string), facets: p.facets().to_vec() }
}
