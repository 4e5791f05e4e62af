//! The JSON input document: field, poset, an optional representation and an
//! optional morphism out of it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::exactla::{Field, Matrix, PrimeField, Rationals};
use crate::poset::{PosetError, PosetInv};
use crate::rep::{Rep, RepError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("poset: {0}")]
    Poset(#[from] PosetError),
    #[error("representation: {0}")]
    Rep(#[from] RepError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Gf { p: u64 },
    Rational,
}

impl FieldSpec {
    /// `gf:P` or `q`.
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        if s == "q" {
            return Ok(FieldSpec::Rational);
        }
        let p = s
            .strip_prefix("gf:")
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| format!("expected gf:P or q, got {s:?}"))?;
        Ok(FieldSpec::Gf { p })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
    pub involution: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub dim: usize,
    #[serde(default)]
    pub subspaces: BTreeMap<String, Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub target: RepSpec,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub field: FieldSpec,
    pub poset: PosetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismSpec>,
}

pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            InputError::Schema(format!("{e}"))
        } else {
            InputError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
        }
    })
}

impl PosetSpec {
    pub fn build(&self) -> Result<PosetInv, InputError> {
        Ok(PosetInv::build(&self.elements, &self.relations, &self.involution)?)
    }

    pub fn from_poset(p: &PosetInv) -> Self {
        PosetSpec {
            elements: p.elements().to_vec(),
            relations: p.cover_pairs(),
            involution: p.class_labels(),
        }
    }
}

fn scalar<F: Field>(field: &F, v: &Value, at: &str) -> Result<F::Elem, InputError> {
    let text = match v {
        Value::Number(n) if n.is_i64() => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(InputError::Schema(format!("{at}: expected an integer or \"num/den\", got {other}"))),
    };
    field.parse(&text).map_err(|e| InputError::Schema(format!("{at}: {e}")))
}

fn scalar_value<F: Field>(field: &F, x: &F::Elem) -> Value {
    let s = field.format(x);
    match s.parse::<i64>() {
        Ok(i) => Value::from(i),
        Err(_) => Value::from(s),
    }
}

impl RepSpec {
    pub fn build<F: Field>(&self, poset: &Arc<PosetInv>, field: &F) -> Result<Rep<F>, InputError> {
        let mut cols = vec![Vec::new(); poset.num_classes()];
        for (key, vectors) in &self.subspaces {
            let z: usize = key
                .parse()
                .ok()
                .filter(|&z| z < poset.num_classes())
                .ok_or_else(|| InputError::Schema(format!("subspaces: unknown class index {key:?}")))?;
            let amb = self.dim * poset.class_size(z);
            for (k, v) in vectors.iter().enumerate() {
                if v.len() != amb {
                    return Err(InputError::Schema(format!(
                        "subspaces.{key}[{k}]: expected {amb} entries, got {}",
                        v.len()
                    )));
                }
                let col = v
                    .iter()
                    .enumerate()
                    .map(|(i, x)| scalar(field, x, &format!("subspaces.{key}[{k}][{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                cols[z].push(col);
            }
        }
        let sub = cols
            .iter()
            .enumerate()
            .map(|(z, c)| crate::exactla::Subspace::from_vectors(field, self.dim * poset.class_size(z), c))
            .collect();
        Ok(Rep::unchecked(poset.clone(), field.clone(), self.dim, sub)?)
    }

    /// The canonical spec: echelon bases, empty classes omitted.
    pub fn from_rep<F: Field>(v: &Rep<F>) -> Self {
        let mut subspaces = BTreeMap::new();
        for (z, s) in v.subs().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let cols = s
                .basis()
                .columns()
                .iter()
                .map(|c| c.iter().map(|x| scalar_value(v.field(), x)).collect())
                .collect();
            subspaces.insert(z.to_string(), cols);
        }
        RepSpec { dim: v.d0(), subspaces }
    }
}

pub fn parse_matrix<F: Field>(field: &F, rows: usize, cols: usize, m: &[Vec<Value>]) -> Result<Matrix<F>, InputError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(InputError::Schema(format!("morphism.matrix: expected {rows}x{cols}")));
    }
    let data = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, x)| scalar(field, x, &format!("morphism.matrix[{r}][{c}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(field, data).map_err(|e| InputError::Schema(e.to_string()))
}

pub fn matrix_value<F: Field>(m: &Matrix<F>) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| scalar_value(m.field(), x)).collect())
        .collect()
}

/// A parsed document over a concrete field.
pub struct Loaded<F: Field> {
    pub field: F,
    pub poset: Arc<PosetInv>,
    pub rep: Option<Rep<F>>,
    pub morphism: Option<(Rep<F>, Matrix<F>)>,
}

impl InputDocument {
    pub fn load<F: Field>(&self, field: F) -> Result<Loaded<F>, InputError> {
        let poset = Arc::new(self.poset.build()?);
        let rep = self.representation.as_ref().map(|r| r.build(&poset, &field)).transpose()?;
        let morphism = match (&self.morphism, &rep) {
            (Some(m), Some(src)) => {
                let tgt = m.target.build(&poset, &field)?;
                let f0 = parse_matrix(&field, tgt.d0(), src.d0(), &m.matrix)?;
                Some((tgt, f0))
            }
            (Some(_), None) => return Err(InputError::Schema("morphism given without representation".into())),
            _ => None,
        };
        Ok(Loaded { field, poset, rep, morphism })
    }

    /// Re-emits the document in canonical form: cover relations only,
    /// echelon bases, canonical scalars.
    pub fn canonicalize(&self) -> Result<InputDocument, InputError> {
        match &self.field {
            FieldSpec::Gf { p } => {
                let f = PrimeField::new(*p).map_err(|e| InputError::Schema(format!("field.p: {e}")))?;
                self.canonical_over(f)
            }
            FieldSpec::Rational => self.canonical_over(Rationals),
        }
    }

    fn canonical_over<F: Field>(&self, field: F) -> Result<InputDocument, InputError> {
        let l = self.load(field)?;
        Ok(InputDocument {
            field: self.field.clone(),
            poset: PosetSpec::from_poset(&l.poset),
            representation: l.rep.as_ref().map(RepSpec::from_rep),
            morphism: l.morphism.as_ref().map(|(t, m)| MorphismSpec { target: RepSpec::from_rep(t), matrix: matrix_value(m) }),
        })
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U2: &str = r#"{
        "field": {"type": "gf", "p": 101},
        "poset": {"elements": ["a1","a2","b1","b2"],
                  "relations": [["a2","a1"],["a1","b1"],["b1","b2"]],
                  "involution": [["a1","b1"],["a2","b2"]]}
    }"#;

    #[test]
    fn minimal_document_parses() {
        let d = parse_input(U2).unwrap();
        assert_eq!(d.poset.build().unwrap().as_un().unwrap().n, 2);
    }

    #[test]
    fn unknown_keys_and_bad_classes_are_rejected() {
        let bad = U2.replace("\"involution\"", "\"involutions\"");
        assert!(matches!(parse_input(&bad), Err(InputError::Schema(m)) if m.contains("involutions")));
        let triple = U2.replace(r#"[["a1","b1"],["a2","b2"]]"#, r#"[["a1","b1","a2"],["b2"]]"#);
        let d = parse_input(&triple).unwrap();
        assert!(d.poset.build().is_err());
        assert!(matches!(parse_input("{\"field\": "), Err(InputError::Parse { line: 1, .. })));
    }

    #[test]
    fn rational_entries_and_round_trip() {
        let text = r#"{
            "field": {"type": "rational"},
            "poset": {"elements": ["a","a*","b","b*"],
                      "relations": [["a","b*"],["a*","b"],["a*","b*"]],
                      "involution": [["a","a*"],["b","b*"]]},
            "representation": {"dim": 3, "subspaces": {
                "0": [["2/2",0,0,0,1,0]],
                "1": [[0,1,0,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,"1/2",0,0,"1/2"]]}}
        }"#;
        let d = parse_input(text).unwrap();
        let l = d.load(Rationals).unwrap();
        assert!(l.rep.unwrap().is_valid());
        let once = d.canonicalize().unwrap().emit();
        let twice = parse_input(&once).unwrap().canonicalize().unwrap().emit();
        assert_eq!(once, twice);
    }
}
