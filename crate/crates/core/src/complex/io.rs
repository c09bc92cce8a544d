//! JSON complex files: `vertices`, maximal `facets`, `named` facet lists and
//! optional rational vertex `fields` written as `"p/q"` strings.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{maximal_simplices, ComplexBuilder, ComplexError, SimplicialComplex, VertexId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<VertexId>,
    pub facets: Vec<Vec<VertexId>>,
    #[serde(default)]
    pub named: BTreeMap<String, Vec<Vec<VertexId>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fields: BTreeMap<String, Vec<String>>,
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, ComplexError> {
    s.trim().parse::<BigRational>().map_err(|_| ComplexError::InvalidField(format!("`{s}` is not a rational p/q")))
}

impl ComplexFile {
    pub fn from_complex(c: &SimplicialComplex) -> Self {
        let facets = c.facets().iter().map(|f| c.simplex_ids(f)).collect();
        let named = c
            .named
            .iter()
            .map(|(label, set)| {
                let tops = maximal_simplices(set.iter());
                (label.clone(), tops.iter().map(|f| c.simplex_ids(f)).collect())
            })
            .collect();
        let fields =
            c.fields.iter().map(|(k, vals)| (k.clone(), vals.iter().map(ToString::to_string).collect())).collect();
        ComplexFile { vertices: c.vertices().to_vec(), facets, named, fields }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex, ComplexError> {
        let mut b = ComplexBuilder::new();
        for v in &self.vertices {
            b.vertex(v.clone());
        }
        for f in &self.facets {
            if f.is_empty() {
                return Err(ComplexError::Format("empty facet".into()));
            }
            b.add_simplex(f.iter().cloned())?;
        }
        for (label, list) in &self.named {
            b.declare_name(label);
            for f in list {
                b.add_named(label, f.iter().cloned())?;
            }
        }
        for (name, values) in &self.fields {
            if values.len() != self.vertices.len() {
                return Err(ComplexError::InvalidField(format!(
                    "`{name}` has {} values for {} listed vertices",
                    values.len(),
                    self.vertices.len()
                )));
            }
            let parsed = values.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
            b.set_field(name, parsed);
        }
        let c = b.build()?;
        if c.num_vertices() != self.vertices.len() && !self.fields.is_empty() {
            return Err(ComplexError::Format("facets use vertices missing from `vertices`".into()));
        }
        Ok(c)
    }
}

impl SimplicialComplex {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ComplexFile::from_complex(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let file: ComplexFile = serde_json::from_str(text).map_err(|e| ComplexError::Format(e.to_string()))?;
        file.to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::models;

    #[test]
    fn round_trip_is_exact() {
        for c in [
            models::sphere(2).unwrap(),
            models::annulus(3).unwrap(),
            models::torus_grid(3, 4).unwrap(),
            models::tripod(),
            SimplicialComplex::from_facets(&[vec![0], vec![1]], &[]).unwrap(),
        ] {
            let text = c.to_json();
            let back = SimplicialComplex::from_json(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn mixed_identifiers_parse() {
        let c =
            SimplicialComplex::from_json(r#"{"vertices":[0,"a"],"facets":[[0,"a"]],"named":{"end":[["a"]]}}"#).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
        assert_eq!(c.subcomplex("end").unwrap().num_vertices(), 1);
    }

    #[test]
    fn rational_fields() {
        assert_eq!(parse_rational("3/6").unwrap().to_string(), "1/2");
        assert!(parse_rational("x").is_err());
    }
}
