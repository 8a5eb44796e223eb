//! Versioned JSON documents `{"kind", "version", "payload"}`.
//!
//! Payloads are validated against their kind before anything is computed;
//! validation errors carry a field path rooted at `payload`. Canonical output
//! sorts object keys and writes floats in shortest round-trip form.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::reductions::{LocalHamInstance, QSatInstance, ReductionReport, Sat24Instance};
use crate::zero_error::{ClassicalChannel, CliqueInstance, Graph};

pub const VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Graph,
    ClassicalChannel,
    Channel,
    Localham,
    Qsat,
    Sat24,
    Clique,
    Report,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Graph => "graph",
            Kind::ClassicalChannel => "classical_channel",
            Kind::Channel => "channel",
            Kind::Localham => "localham",
            Kind::Qsat => "qsat",
            Kind::Sat24 => "sat24",
            Kind::Clique => "clique",
            Kind::Report => "report",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Graph(Graph),
    ClassicalChannel(ClassicalChannel),
    Channel(Channel),
    Localham(LocalHamInstance),
    Qsat(QSatInstance),
    Sat24(Sat24Instance),
    Clique(CliqueInstance),
    Report(Box<ReductionReport>),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Graph(_) => Kind::Graph,
            Payload::ClassicalChannel(_) => Kind::ClassicalChannel,
            Payload::Channel(_) => Kind::Channel,
            Payload::Localham(_) => Kind::Localham,
            Payload::Qsat(_) => Kind::Qsat,
            Payload::Sat24(_) => Kind::Sat24,
            Payload::Clique(_) => Kind::Clique,
            Payload::Report(_) => Kind::Report,
        }
    }

    fn to_value(&self) -> Result<Value> {
        Ok(match self {
            Payload::Graph(x) => serde_json::to_value(x)?,
            Payload::ClassicalChannel(x) => serde_json::to_value(x)?,
            Payload::Channel(x) => serde_json::to_value(x)?,
            Payload::Localham(x) => serde_json::to_value(x)?,
            Payload::Qsat(x) => serde_json::to_value(x)?,
            Payload::Sat24(x) => serde_json::to_value(x)?,
            Payload::Clique(x) => serde_json::to_value(x)?,
            Payload::Report(x) => serde_json::to_value(x)?,
        })
    }
}

/// A validated document. `raw` keeps the payload exactly as read so that
/// saving a loaded document reproduces its canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub payload: Payload,
    raw: Value,
}

impl Document {
    pub fn new(payload: Payload) -> Result<Self> {
        let raw = payload.to_value()?;
        Ok(Document { payload, raw })
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    pub fn to_value(&self) -> Value {
        serde_json::json!({ "kind": self.kind().name(), "version": VERSION, "payload": self.raw })
    }

    pub fn to_canonical_string(&self) -> Result<String> {
        canonical_json(&self.to_value())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::Schema { path: "$".into(), message: e.to_string() })?;
        Document::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let Value::Object(mut map) = value else {
            return schema("$", "document must be a JSON object");
        };
        let kind: Kind = match map.remove("kind") {
            Some(k) => serde_json::from_value(k).map_err(|e| Error::Schema { path: "kind".into(), message: e.to_string() })?,
            None => return schema("kind", "missing field"),
        };
        match map.remove("version") {
            Some(Value::String(v)) if v == VERSION => {}
            Some(other) => return schema("version", format!("unsupported version {other}, expected \"{VERSION}\"")),
            None => return schema("version", "missing field"),
        }
        let raw = map.remove("payload").ok_or_else(|| Error::Schema { path: "payload".into(), message: "missing field".into() })?;
        if let Some(extra) = map.keys().next() {
            return schema(extra.as_str(), "unknown top-level field");
        }
        let payload = match kind {
            Kind::Graph => Payload::Graph(typed(&raw)?),
            Kind::ClassicalChannel => Payload::ClassicalChannel(typed(&raw)?),
            Kind::Channel => Payload::Channel(typed(&raw)?),
            Kind::Localham => Payload::Localham(typed(&raw)?),
            Kind::Qsat => Payload::Qsat(typed(&raw)?),
            Kind::Sat24 => Payload::Sat24(typed(&raw)?),
            Kind::Clique => Payload::Clique(typed(&raw)?),
            Kind::Report => Payload::Report(Box::new(typed(&raw)?)),
        };
        Ok(Document { payload, raw })
    }
}

fn schema<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T> {
    Err(Error::Schema { path: path.into(), message: message.into() })
}

const SCHEMA_PREFIX: &str = "schema violation at ";

/// Deserializes a payload, reporting the failing field as `payload.<path>`.
fn typed<T: DeserializeOwned>(raw: &Value) -> Result<T> {
    serde_path_to_error::deserialize(raw).map_err(|e| {
        let outer = e.path().to_string();
        let message = e.inner().to_string();
        let mut path = String::from("payload");
        if outer != "." {
            path.push('.');
            path.push_str(&outer);
        }
        // Validation inside a value reports its own relative path.
        if let Some(rest) = message.strip_prefix(SCHEMA_PREFIX) {
            if let Some((inner, msg)) = rest.split_once(": ") {
                path.push('.');
                path.push_str(inner);
                return Error::Schema { path, message: msg.to_string() };
            }
        }
        Error::Schema { path, message }
    })
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize + ?Sized>(x: &T) -> Result<String> {
    let value = serde_json::to_value(x)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

pub fn load(path: impl AsRef<Path>) -> Result<Document> {
    Document::parse(&std::fs::read_to_string(path)?)
}

pub fn save(doc: &Document, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, doc.to_canonical_string()?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_and_paths() {
        let text = r#"{"version":"1","kind":"graph","payload":{"n":3,"edges":[[0,1]]}}"#;
        let doc = Document::parse(text).unwrap();
        assert!(matches!(doc.payload, Payload::Graph(_)));
        let again = Document::parse(&doc.to_canonical_string().unwrap()).unwrap();
        assert_eq!(again.to_canonical_string().unwrap(), doc.to_canonical_string().unwrap());

        let bad = r#"{"version":"1","kind":"graph","payload":{"n":3,"edges":[[0,1],[2,5]]}}"#;
        match Document::parse(bad) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "payload.edges[1]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn broken_povm_reports_effects_path() {
        let text = r#"{"kind":"channel","version":"1","payload":{"form":"meas_prep","dim_in":1,"dim_out":1,
            "effects":[[[[0.5,0.0]]]],"preps":[[[[1.0,0.0]]]]}}"#;
        match Document::parse(text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "payload.effects"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_and_kind_are_checked() {
        assert!(Document::parse(r#"{"kind":"graph","version":"2","payload":{"n":1,"edges":[]}}"#).is_err());
        assert!(Document::parse(r#"{"kind":"nope","version":"1","payload":{}}"#).is_err());
    }
}
