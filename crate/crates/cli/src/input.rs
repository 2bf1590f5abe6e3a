//! Graph input: graph6 text, named graphs, edge lists, or JSON reports.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};
use twofold::graph::named;
use twofold::{graph6, Error, Graph};

use crate::CliError;

/// Raw bytes of an input argument.
pub struct RawInput {
    pub bytes: Vec<u8>,
}

impl RawInput {
    /// `None` or `-` reads stdin, an existing path reads the file, anything
    /// else is taken literally.
    pub fn resolve(arg: Option<&str>) -> Result<Self, CliError> {
        match arg {
            None | Some("-") => {
                let mut bytes = Vec::new();
                std::io::stdin()
                    .read_to_end(&mut bytes)
                    .map_err(|e| CliError::input(format!("reading stdin: {e}")))?;
                Ok(RawInput { bytes })
            }
            Some(a) if Path::new(a).is_file() => {
                let bytes = fs::read(a).map_err(|e| CliError::input(format!("reading {a}: {e}")))?;
                Ok(RawInput { bytes })
            }
            Some(a) => Ok(RawInput { bytes: a.as_bytes().to_vec() }),
        }
    }

    pub fn digest(&self) -> String {
        digest_of(&self.bytes)
    }

    pub fn text(&self) -> Result<&str, CliError> {
        std::str::from_utf8(&self.bytes).map_err(|e| CliError::input(format!("input is not UTF-8: {e}")))
    }
}

pub fn digest_of(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Graph6,
    Edges,
    Dot,
}

/// A parsed graph and, for JSON input, the construction metadata it carried.
pub struct GraphInput {
    pub graph: Graph,
    pub metadata: Option<Value>,
}

pub fn parse_graph(raw: &RawInput, format: Option<Format>) -> Result<GraphInput, CliError> {
    let text = raw.text()?.trim();
    match format {
        Some(Format::Edges) => return Ok(GraphInput { graph: Graph::from_edge_list(text)?, metadata: None }),
        Some(Format::Dot) => return Err(CliError::input("dot is an output format only")),
        Some(Format::Graph6) => return Ok(GraphInput { graph: decode_first_line(text)?, metadata: None }),
        None => {}
    }
    if text.starts_with('{') {
        return from_json(text);
    }
    if let Some(g) = named::by_name(text) {
        return Ok(GraphInput { graph: g?, metadata: None });
    }
    Ok(GraphInput { graph: decode_first_line(text)?, metadata: None })
}

fn decode_first_line(text: &str) -> Result<Graph, CliError> {
    let line = text.lines().map(str::trim).find(|l| !l.is_empty()).ok_or_else(|| CliError::input("empty input"))?;
    Ok(graph6::decode(line)?)
}

/// Accept a full report (`result.graph6`) or a bare object with `graph6`.
fn from_json(text: &str) -> Result<GraphInput, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        CliError::from(Error::Parse { offset: e.column().saturating_sub(1), message: format!("JSON: {e}") })
    })?;
    let body = v.get("result").unwrap_or(&v);
    let g6 = body
        .get("graph6")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::input("JSON input has no graph6 field"))?;
    Ok(GraphInput { graph: graph6::decode(g6)?, metadata: Some(body.clone()) })
}
