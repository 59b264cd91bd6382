//! Line-oriented network documents.
//!
//! ```text
//! format: 1
//! kind: directed
//! # comment
//! vertex a
//! vertex b boundary
//! edge a b 1/2
//! ```
//!
//! Vertex ids follow declaration order and edge ids follow edge order, so
//! both survive a parse/emit round trip unchanged.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_traits::Signed;
use thiserror::Error;
use tpwalk::resistor::ConductivityNetwork;
use tpwalk::{DirectedNetwork, Rational, VertexId};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Directed,
    Conductivity,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Directed => "directed",
            Kind::Conductivity => "conductivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDecl {
    pub name: String,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub tail: String,
    pub head: String,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkDocument {
    pub kind: Kind,
    pub vertices: Vec<VertexDecl>,
    pub edges: Vec<EdgeDecl>,
}

/// Names are nonempty and free of whitespace, commas and `#`.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == ',' || c == '#')
}

/// Integer or `num/den`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    Rational::from_str(s).ok()
}

impl NetworkDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let mut format = None;
        let mut kind = None;
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut names: HashMap<String, usize> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("format:") {
                if format.is_some() {
                    return fail(line, "duplicate format header");
                }
                match rest.trim().parse::<u32>() {
                    Ok(FORMAT_VERSION) => format = Some(FORMAT_VERSION),
                    _ => return fail(line, format!("unsupported format {:?}", rest.trim())),
                }
                continue;
            }
            if format.is_none() {
                return fail(line, "document must start with `format: 1`");
            }
            if let Some(rest) = content.strip_prefix("kind:") {
                if kind.is_some() {
                    return fail(line, "duplicate kind");
                }
                kind = Some(match rest.trim() {
                    "directed" => Kind::Directed,
                    "conductivity" => Kind::Conductivity,
                    other => return fail(line, format!("unknown kind {other:?}")),
                });
                continue;
            }
            let Some(kind) = kind else {
                return fail(line, "`kind:` must precede vertices and edges");
            };
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                ["vertex", name, flags @ ..] => {
                    let boundary = match flags {
                        [] => false,
                        ["boundary"] => true,
                        _ => return fail(line, format!("unexpected vertex flags {flags:?}")),
                    };
                    if !is_valid_name(name) {
                        return fail(line, format!("invalid vertex name {name:?}"));
                    }
                    if names.insert(name.to_string(), vertices.len()).is_some() {
                        return fail(line, format!("duplicate vertex {name:?}"));
                    }
                    vertices.push(VertexDecl {
                        name: name.to_string(),
                        boundary,
                    });
                }
                ["edge", tail, head, weight] => {
                    for v in [tail, head] {
                        if !names.contains_key(*v) {
                            return fail(line, format!("undeclared vertex {v:?}"));
                        }
                    }
                    let Some(w) = parse_rational(weight) else {
                        return fail(line, format!("invalid weight {weight:?}"));
                    };
                    if kind == Kind::Conductivity {
                        if !w.is_positive() {
                            return fail(line, format!("conductivity {w} is not positive"));
                        }
                        if tail == head {
                            return fail(line, format!("loop at {tail:?}"));
                        }
                    }
                    edges.push(EdgeDecl {
                        tail: tail.to_string(),
                        head: head.to_string(),
                        weight: w,
                    });
                }
                _ => return fail(line, format!("cannot parse {content:?}")),
            }
        }
        let Some(kind) = kind else {
            return fail(text.lines().count().max(1), "missing `kind:`");
        };
        Ok(NetworkDocument { kind, vertices, edges })
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        writeln!(out, "format: {FORMAT_VERSION}").unwrap();
        writeln!(out, "kind: {}", self.kind).unwrap();
        for v in &self.vertices {
            if v.boundary {
                writeln!(out, "vertex {} boundary", v.name).unwrap();
            } else {
                writeln!(out, "vertex {}", v.name).unwrap();
            }
        }
        for e in &self.edges {
            writeln!(out, "edge {} {} {}", e.tail, e.head, e.weight).unwrap();
        }
        out
    }

    pub fn from_directed(net: &DirectedNetwork, names: &[String]) -> Self {
        let vertices = (0..net.vertex_count())
            .map(|v| VertexDecl {
                name: names[v].clone(),
                boundary: net.is_boundary(VertexId(v)),
            })
            .collect();
        let edges = net
            .edges()
            .iter()
            .map(|e| EdgeDecl {
                tail: names[e.tail.0].clone(),
                head: names[e.head.0].clone(),
                weight: e.weight.clone(),
            })
            .collect();
        NetworkDocument {
            kind: Kind::Directed,
            vertices,
            edges,
        }
    }

    pub fn from_conductivity(net: &ConductivityNetwork, names: &[String]) -> Self {
        let vertices = (0..net.vertex_count())
            .map(|v| VertexDecl {
                name: names[v].clone(),
                boundary: net.is_boundary(VertexId(v)),
            })
            .collect();
        let edges = net
            .edges()
            .iter()
            .map(|(a, b, g)| EdgeDecl {
                tail: names[a.0].clone(),
                head: names[b.0].clone(),
                weight: g.clone(),
            })
            .collect();
        NetworkDocument {
            kind: Kind::Conductivity,
            vertices,
            edges,
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.name.clone()).collect()
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name).map(VertexId)
    }

    fn triples(&self) -> Vec<(usize, usize, Rational)> {
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        self.edges
            .iter()
            .map(|e| (index[e.tail.as_str()], index[e.head.as_str()], e.weight.clone()))
            .collect()
    }

    fn boundary_ids(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.boundary)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_directed(&self) -> tpwalk::Result<DirectedNetwork> {
        DirectedNetwork::new(self.vertices.len(), self.triples(), self.boundary_ids())
    }

    pub fn to_conductivity(&self) -> tpwalk::Result<ConductivityNetwork> {
        ConductivityNetwork::new(self.vertices.len(), self.triples(), self.boundary_ids())
    }
}
