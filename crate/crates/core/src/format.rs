//! JSON documents for posets and maps, and DOT export of Hasse diagrams.
//!
//! Poset document:
//!
//! ```json
//! {
//!   "name": "DIAMOND",
//!   "elements": ["bot", "l", "r", "top"],
//!   "relation_kind": "cover",
//!   "pairs": [["bot", "l"], ["bot", "r"], ["l", "top"], ["r", "top"]]
//! }
//! ```
//!
//! `relation_kind` is `"cover"` (closed reflexively and transitively on
//! load) or `"leq"` (validated as given, reflexive pairs optional). `name`
//! may be omitted. Labels are nonempty and contain no whitespace.
//!
//! Map document: `{"name": "f", "assignment": {"bot": "l", ...}}`, total
//! over the poset it is applied to; `name` may be omitted.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::map::{MapError, TableMap};
use crate::poset::{close_covers, validate_poset, FinitePoset, PosetError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema { path: path.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Cover,
    Leq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDocument {
    #[serde(default)]
    pub name: String,
    pub elements: Vec<String>,
    pub relation_kind: RelationKind,
    pub pairs: Vec<[String; 2]>,
}

impl PosetDocument {
    pub fn from_poset(p: &FinitePoset) -> Self {
        Self {
            name: p.name().to_owned(),
            elements: p.labels().iter().map(ToString::to_string).collect(),
            relation_kind: RelationKind::Leq,
            pairs: p
                .strict_pairs_ix()
                .into_iter()
                .map(|(i, j)| [p.label(i).to_string(), p.label(j).to_string()])
                .collect(),
        }
    }

    pub fn to_poset(&self) -> Result<FinitePoset, FormatError> {
        let pairs: Vec<(&str, &str)> = self.pairs.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let p = match self.relation_kind {
            RelationKind::Cover => close_covers(&self.elements, &pairs)?,
            RelationKind::Leq => validate_poset(&self.elements, &pairs)?,
        };
        Ok(p.with_name(self.name.clone()))
    }
}

fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))
}

fn label_at(v: &Value, path: &str) -> Result<String, FormatError> {
    match v.as_str() {
        Some(s) if s.is_empty() => Err(schema(path, "label must be nonempty")),
        Some(s) if s.chars().any(char::is_whitespace) => Err(schema(path, "label must not contain whitespace")),
        Some(s) => Ok(s.to_owned()),
        None => Err(schema(path, "expected a string label")),
    }
}

fn object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn optional_name(obj: &Map<String, Value>) -> Result<Option<String>, FormatError> {
    match obj.get("name") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(schema("/name", "expected a string")),
    }
}

/// Reads a poset document, reporting schema problems with a JSON-pointer path.
pub fn parse_poset_document(text: &str) -> Result<PosetDocument, FormatError> {
    let v = parse_json(text)?;
    let obj = object(&v, "")?;
    let name = optional_name(obj)?.unwrap_or_default();
    let elements = obj
        .get("elements")
        .ok_or_else(|| schema("/elements", "missing required key"))?
        .as_array()
        .ok_or_else(|| schema("/elements", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, e)| label_at(e, &format!("/elements/{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let relation_kind = match obj.get("relation_kind") {
        None => return Err(schema("/relation_kind", "missing required key")),
        Some(v) => match v.as_str() {
            Some("cover") => RelationKind::Cover,
            Some("leq") => RelationKind::Leq,
            _ => return Err(schema("/relation_kind", "expected \"cover\" or \"leq\"")),
        },
    };
    let pairs = obj
        .get("pairs")
        .ok_or_else(|| schema("/pairs", "missing required key"))?
        .as_array()
        .ok_or_else(|| schema("/pairs", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let path = format!("/pairs/{i}");
            match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok([label_at(a, &format!("{path}/0"))?, label_at(b, &format!("{path}/1"))?]),
                _ => Err(schema(path, "expected a two-element array")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PosetDocument { name, elements, relation_kind, pairs })
}

pub fn parse_poset_doc(text: &str) -> Result<FinitePoset, FormatError> {
    parse_poset_document(text)?.to_poset()
}

/// Writes `p` as a `"leq"` document listing every strict pair.
pub fn serialize_poset(p: &FinitePoset) -> String {
    serde_json::to_string_pretty(&PosetDocument::from_poset(p)).expect("documents serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub assignment: Map<String, Value>,
}

pub fn parse_map_doc(text: &str, poset: &FinitePoset) -> Result<TableMap, FormatError> {
    let v = parse_json(text)?;
    let obj = object(&v, "")?;
    let name = optional_name(obj)?;
    let assignment = object(
        obj.get("assignment").ok_or_else(|| schema("/assignment", "missing required key"))?,
        "/assignment",
    )?;
    let pairs = assignment
        .iter()
        .map(|(k, v)| Ok((k.clone(), label_at(v, &format!("/assignment/{k}"))?)))
        .collect::<Result<Vec<(String, String)>, FormatError>>()?;
    let f = TableMap::from_labels(poset, &pairs)?;
    Ok(match name {
        Some(n) => f.with_name(n),
        None => f,
    })
}

pub fn serialize_map(f: &TableMap, poset: &FinitePoset) -> String {
    let assignment = f
        .label_pairs(poset)
        .into_iter()
        .map(|(a, b)| (a.to_owned(), Value::String(b.to_owned())))
        .collect();
    let doc = MapDocument { name: f.name().map(str::to_owned), assignment };
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The Hasse diagram of `p` in DOT syntax: one node per element, one edge per cover pair.
pub fn export_dot(p: &FinitePoset) -> String {
    let name = if p.name().is_empty() { "poset" } else { p.name() };
    let mut s = format!("digraph {} {{\n    rankdir=BT;\n", quote(name));
    for l in p.labels() {
        s.push_str(&format!("    {};\n", quote(l.as_str())));
    }
    for (i, j) in p.cover_pairs_ix() {
        s.push_str(&format!("    {} -> {};\n", quote(p.label(i).as_str()), quote(p.label(j).as_str())));
    }
    s.push_str("}\n");
    s
}
