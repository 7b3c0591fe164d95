//! Canonical JSON documents and SVG figures.
//!
//! Every document is an object `{"v": "v1", "<kind>": {...}}` written with
//! sorted keys and no insignificant whitespace, so equal objects give equal
//! bytes.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colourers::{verify_colouring, Colouring, TableRef, Target};
use crate::planargraph::TilingGraph;
use crate::substitution::Patch;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed {kind} document at line {line}, column {column}: {msg}")]
    Parse {
        kind: &'static str,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("unsupported schema version {0:?}, expected \"v1\"")]
    Version(String),
    #[error("colouring entry for element {id} is out of range ({elements} elements)")]
    BadElement { id: u32, elements: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Objects that have a JSON document form.
pub trait Document: Sized {
    const KIND: &'static str;
    fn to_json(&self) -> serde_json::Value;
    fn from_json_str(s: &str) -> Result<Self, IoError>;
}

macro_rules! envelope {
    ($name:ident, $field:ident, $ty:ty) => {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct $name {
            v: String,
            $field: $ty,
        }
    };
}

envelope!(PatchEnvelope, patch, Patch);
envelope!(GraphEnvelope, graph, TilingGraph);
envelope!(ColouringEnvelope, colouring, ColouringFile);

fn parse<E: DeserializeOwned>(kind: &'static str, s: &str) -> Result<E, IoError> {
    serde_json::from_str(s).map_err(|e| IoError::Parse {
        kind,
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

fn check_version(v: String) -> Result<(), IoError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(IoError::Version(v))
    }
}

fn envelope(kind: &str, body: serde_json::Value) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    m.insert("v".into(), SCHEMA_VERSION.into());
    m.insert(kind.into(), body);
    serde_json::Value::Object(m)
}

impl Document for Patch {
    const KIND: &'static str = "patch";
    fn to_json(&self) -> serde_json::Value {
        envelope(
            Self::KIND,
            serde_json::to_value(self).expect("patches serialise"),
        )
    }
    fn from_json_str(s: &str) -> Result<Self, IoError> {
        let e: PatchEnvelope = parse(Self::KIND, s)?;
        check_version(e.v)?;
        Ok(e.patch)
    }
}

impl Document for TilingGraph {
    const KIND: &'static str = "graph";
    fn to_json(&self) -> serde_json::Value {
        envelope(
            Self::KIND,
            serde_json::to_value(self).expect("graphs serialise"),
        )
    }
    fn from_json_str(s: &str) -> Result<Self, IoError> {
        let e: GraphEnvelope = parse(Self::KIND, s)?;
        check_version(e.v)?;
        Ok(e.graph)
    }
}

/// File form of a colouring: only assigned elements are listed.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColouringFile {
    target: Target,
    palette: u32,
    elements: usize,
    assignment: Vec<(u32, u32)>,
    tables_used: Vec<TableRef>,
}

impl Document for Colouring {
    const KIND: &'static str = "colouring";
    fn to_json(&self) -> serde_json::Value {
        let file = ColouringFile {
            target: self.target,
            palette: self.palette,
            elements: self.assignment.len(),
            assignment: self
                .assignment
                .iter()
                .enumerate()
                .filter_map(|(i, c)| c.map(|c| (i as u32, c)))
                .collect(),
            tables_used: self.tables_used.clone(),
        };
        envelope(
            Self::KIND,
            serde_json::to_value(file).expect("colourings serialise"),
        )
    }
    fn from_json_str(s: &str) -> Result<Self, IoError> {
        let e: ColouringEnvelope = parse(Self::KIND, s)?;
        check_version(e.v)?;
        let file = e.colouring;
        let mut assignment = vec![None; file.elements];
        for (id, c) in file.assignment {
            let slot = assignment.get_mut(id as usize).ok_or(IoError::BadElement {
                id,
                elements: file.elements,
            })?;
            *slot = Some(c);
        }
        Ok(Colouring {
            target: file.target,
            palette: file.palette,
            assignment,
            tables_used: file.tables_used,
        })
    }
}

/// Canonical text: sorted keys, compact, trailing newline.
pub fn to_canonical_string<D: Document>(d: &D) -> String {
    let mut s = serde_json::to_string(&d.to_json()).expect("values serialise");
    s.push('\n');
    s
}

pub fn write_document<D: Document>(path: &std::path::Path, d: &D) -> Result<(), IoError> {
    write_atomic(path, &to_canonical_string(d))
}

/// Writes next to the target and renames, so readers never see half a file.
pub fn write_atomic(path: &std::path::Path, text: &str) -> Result<(), IoError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_document<D: Document>(path: &std::path::Path) -> Result<D, IoError> {
    D::from_json_str(&std::fs::read_to_string(path)?)
}

/// Appearance of an SVG figure.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub target: Target,
    /// CSS colours by colour index.
    pub palette: Vec<String>,
    pub stroke_width: f64,
    /// Pixels per unit length (in level-0 coordinates).
    pub scale: f64,
    /// Blank border around the drawing, in pixels.
    pub margin: f64,
    pub vertex_radius: f64,
    pub highlight_conflicts: bool,
}

pub const DEFAULT_PALETTE: [&str; 8] = [
    "#d7301f", "#2b6cb0", "#2f9e44", "#7b3294", "#f08c00", "#8c564b", "#e377c2", "#6c757d",
];

impl RenderSpec {
    pub fn new(target: Target) -> RenderSpec {
        RenderSpec {
            target,
            palette: DEFAULT_PALETTE.iter().map(|s| s.to_string()).collect(),
            stroke_width: 1.0,
            scale: 1.0,
            margin: 10.0,
            vertex_radius: 2.5,
            highlight_conflicts: true,
        }
    }

    /// Scale chosen so the longer side of the drawing is about `px` pixels.
    pub fn fit(mut self, g: &TilingGraph, px: f64) -> RenderSpec {
        if let Some((x0, y0, x1, y1)) = bounds(g) {
            let side = (x1 - x0).max(y1 - y0);
            if side > 0.0 {
                self.scale = px / side;
            }
        }
        self
    }

    fn fill(&self, c: Option<u32>) -> &str {
        match c {
            Some(c) => self
                .palette
                .get(c as usize)
                .map_or("#000000", String::as_str),
            None => "#ffffff",
        }
    }
}

fn bounds(g: &TilingGraph) -> Option<(f64, f64, f64, f64)> {
    let mut it = g.vertices.iter().map(|p| p.to_f64());
    let (x, y) = it.next()?;
    Some(it.fold((x, y, x, y), |(a, b, c, d), (x, y)| {
        (a.min(x), b.min(y), c.max(x), d.max(y))
    }))
}

/// Renders a coloured patch. Conflicting pairs are outlined in black when
/// highlighting is on.
pub fn render_svg(
    patch: &Patch,
    g: &TilingGraph,
    colouring: &Colouring,
    spec: &RenderSpec,
) -> String {
    let mut out = String::new();
    let Some((x0, y0, x1, y1)) = bounds(g) else {
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"0\" height=\"0\" viewBox=\"0 0 0 0\"></svg>\n");
        return out;
    };
    let m = spec.margin;
    let w = (x1 - x0) * spec.scale + 2.0 * m;
    let h = (y1 - y0) * spec.scale + 2.0 * m;
    // SVG's y axis points down.
    let px = |p: &crate::exactgeom::Point| {
        let (x, y) = p.to_f64();
        ((x - x0) * spec.scale + m, (y1 - y) * spec.scale + m)
    };
    let pts = |vs: &[u32]| {
        let mut s = String::new();
        for (i, &v) in vs.iter().enumerate() {
            let (x, y) = px(&g.vertices[v as usize]);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.6},{y:.6}");
        }
        s
    };
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.6}\" height=\"{h:.6}\" viewBox=\"0 0 {w:.6} {h:.6}\">"
    );
    let _ = writeln!(
        out,
        "<title>{} level {} {} colouring</title>",
        patch.tiling, patch.level, colouring.target
    );
    let conflicts = if spec.highlight_conflicts {
        verify_colouring(g, colouring)
            .map(|r| r.conflicts)
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    let sw = spec.stroke_width;
    match colouring.target {
        Target::Face => {
            for (f, face) in g.faces.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "<polygon points=\"{}\" fill=\"{}\" stroke=\"#000000\" stroke-width=\"{sw:.6}\"/>",
                    pts(&face.vertices),
                    spec.fill(colouring.colour(f as u32))
                );
            }
            for &(a, b) in &conflicts {
                for f in [a, b] {
                    let _ = writeln!(
                        out,
                        "<polygon class=\"conflict\" points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{:.6}\"/>",
                        pts(&g.faces[f as usize].vertices),
                        3.0 * sw
                    );
                }
            }
        }
        Target::Edge => {
            for &(a, b) in &conflicts {
                for e in [a, b] {
                    let e = &g.edges[e as usize];
                    let _ = writeln!(
                        out,
                        "<polyline class=\"conflict\" points=\"{}\" stroke=\"#000000\" stroke-width=\"{:.6}\" fill=\"none\"/>",
                        pts(&[e.a, e.b]),
                        4.0 * sw
                    );
                }
            }
            for (i, e) in g.edges.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" stroke=\"{}\" stroke-width=\"{:.6}\" fill=\"none\"/>",
                    pts(&[e.a, e.b]),
                    spec.fill(colouring.colour(i as u32)),
                    2.0 * sw
                );
            }
        }
        Target::Vertex => {
            for e in &g.edges {
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" stroke=\"#808080\" stroke-width=\"{sw:.6}\" fill=\"none\"/>",
                    pts(&[e.a, e.b])
                );
            }
            let mut conflicted = vec![false; g.vertices.len()];
            for &(a, b) in &conflicts {
                conflicted[a as usize] = true;
                conflicted[b as usize] = true;
            }
            for (v, p) in g.vertices.iter().enumerate() {
                let (x, y) = px(p);
                let (stroke, width) = if conflicted[v] {
                    ("#000000", 2.0 * sw)
                } else {
                    ("#404040", 0.5 * sw)
                };
                let _ = writeln!(
                    out,
                    "<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"{:.6}\" fill=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width:.6}\"/>",
                    spec.vertex_radius,
                    spec.fill(colouring.colour(v as u32))
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
