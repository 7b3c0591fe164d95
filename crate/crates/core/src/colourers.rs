//! Constructive colourings and the properness checker.
//!
//! Colour indices 0, 1 and 2 are red, blue and green.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::{direction_class, rotation_classify, Scalar, Vec2};
use crate::planargraph::{
    components, dual_graph, edge_partition_by_length, GraphError, SimpleGraph, TilingGraph,
};
use crate::schemes::{apply_table, ColourTable};
use crate::substitution::{Patch, ProtoKind, SubstError, Tiling};

pub const RED: u32 = 0;
pub const BLUE: u32 = 1;
pub const GREEN: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColourError {
    #[error("colouring is partial: {missing} of {total} elements unassigned (first: {first})")]
    Partial {
        missing: usize,
        total: usize,
        first: u32,
    },
    #[error("colouring has {got} entries but the graph has {want} {target:?} elements")]
    SizeMismatch {
        got: usize,
        want: usize,
        target: Target,
    },
    #[error("odd cycle of length {}: {cycle:?}", cycle.len())]
    OddCycle { cycle: Vec<u32> },
    #[error("edge {0} is parallel to none of the directions")]
    UnmatchedDirection(u32),
    #[error("{scheme} expects {expected} patches, got {got}")]
    WrongTiling {
        scheme: &'static str,
        expected: Tiling,
        got: Tiling,
    },
    #[error("edges {0} and {1} meet at an angle outside the twelve turn classes")]
    UnknownAngle(u32, u32),
    #[error("turn parity contradiction at edge {0}")]
    ParityContradiction(u32),
    #[error("vertex {0} has {1} edges of one coset")]
    CosetDegree(u32, usize),
    #[error("coset contains a cycle through edge {0}")]
    CosetCycle(u32),
    #[error("no table entry for key {0}")]
    MissingKey(String),
    #[error("boundary completion failed: {0}")]
    Completion(String),
    #[error("colour table unavailable: {0}")]
    Table(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Vertex,
    Edge,
    Face,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Target::Vertex => "vertex",
            Target::Edge => "edge",
            Target::Face => "face",
        })
    }
}

impl std::str::FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vertex" => Ok(Target::Vertex),
            "edge" => Ok(Target::Edge),
            "face" => Ok(Target::Face),
            _ => Err(format!("unknown mode {s:?} (vertex|edge|face)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperGiven,
    Derived,
}

/// A colour table used to build a colouring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableRef {
    pub scheme: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub target: Target,
    pub palette: u32,
    /// Colour of each element id; `None` marks an unassigned element.
    pub assignment: Vec<Option<u32>>,
    pub tables_used: Vec<TableRef>,
}

impl Colouring {
    pub fn total(target: Target, palette: u32, colours: Vec<u32>) -> Colouring {
        Colouring {
            target,
            palette,
            assignment: colours.into_iter().map(Some).collect(),
            tables_used: Vec::new(),
        }
    }

    pub fn with_table(mut self, t: TableRef) -> Colouring {
        self.tables_used.push(t);
        self
    }

    /// Number of distinct colours actually used.
    pub fn colours_used(&self) -> usize {
        let mut seen: Vec<u32> = self.assignment.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn colour(&self, id: u32) -> Option<u32> {
        self.assignment.get(id as usize).copied().flatten()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Adjacent pairs sharing a colour.
    pub conflicts: Vec<(u32, u32)>,
    /// Elements whose colour is outside the palette.
    pub out_of_palette: Vec<u32>,
}

impl VerifyReport {
    pub fn is_proper(&self) -> bool {
        self.conflicts.is_empty() && self.out_of_palette.is_empty()
    }
}

/// The adjacency a colouring of `target` must respect.
pub fn target_graph(g: &TilingGraph, target: Target) -> SimpleGraph {
    match target {
        Target::Vertex => g.vertex_graph(),
        Target::Edge => g.line_graph(),
        Target::Face => dual_graph(g),
    }
}

pub fn verify_colouring(g: &TilingGraph, c: &Colouring) -> Result<VerifyReport, ColourError> {
    verify_on(&target_graph(g, c.target), c)
}

/// Checks a colouring against an arbitrary simple graph.
pub fn verify_on(adj: &SimpleGraph, c: &Colouring) -> Result<VerifyReport, ColourError> {
    if c.assignment.len() != adj.len() {
        return Err(ColourError::SizeMismatch {
            got: c.assignment.len(),
            want: adj.len(),
            target: c.target,
        });
    }
    let missing: Vec<u32> = (0..adj.len() as u32)
        .filter(|&i| c.assignment[i as usize].is_none())
        .collect();
    if let Some(&first) = missing.first() {
        return Err(ColourError::Partial {
            missing: missing.len(),
            total: adj.len(),
            first,
        });
    }
    let col = |i: u32| c.assignment[i as usize].unwrap();
    Ok(VerifyReport {
        conflicts: adj.edges().filter(|&(a, b)| col(a) == col(b)).collect(),
        out_of_palette: (0..adj.len() as u32)
            .filter(|&i| col(i) >= c.palette)
            .collect(),
    })
}

/// Breadth-first 2-colouring; each component is rooted at its smallest
/// vertex and coloured by layer parity.
pub fn bipartite_2colour(g: &SimpleGraph) -> Result<Vec<u32>, ColourError> {
    let n = g.len();
    let mut colour = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if colour[root] != u32::MAX {
            continue;
        }
        colour[root] = 0;
        let mut q = VecDeque::from([root as u32]);
        while let Some(v) = q.pop_front() {
            for &w in &g.adj[v as usize] {
                let wi = w as usize;
                if colour[wi] == u32::MAX {
                    colour[wi] = 1 - colour[v as usize];
                    parent[wi] = v;
                    depth[wi] = depth[v as usize] + 1;
                    q.push_back(w);
                } else if colour[wi] == colour[v as usize] {
                    return Err(ColourError::OddCycle {
                        cycle: tree_cycle(&parent, &depth, v, w),
                    });
                }
            }
        }
    }
    Ok(colour)
}

/// Cycle closed by the non-tree edge `(u, w)`.
fn tree_cycle(parent: &[u32], depth: &[usize], u: u32, w: u32) -> Vec<u32> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a as usize] > depth[b as usize] {
        a = parent[a as usize];
        left.push(a);
    }
    while depth[b as usize] > depth[a as usize] {
        b = parent[b as usize];
        right.push(b);
    }
    while a != b {
        a = parent[a as usize];
        b = parent[b as usize];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Proper vertex 2-colouring of a bipartite tiling graph.
pub fn bipartite_vertex_colouring(g: &TilingGraph) -> Result<Colouring, ColourError> {
    Ok(Colouring::total(
        Target::Vertex,
        2,
        bipartite_2colour(&g.vertex_graph())?,
    ))
}

/// Groups edges by supporting line and alternates two colours per
/// direction along each line.
pub fn directional_edge_colour(
    g: &TilingGraph,
    directions: &[Vec2],
) -> Result<Colouring, ColourError> {
    let mut lines: HashMap<(usize, Scalar), Vec<(Scalar, u32)>> = HashMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        let (pa, pb) = (g.vertices[e.a as usize], g.vertices[e.b as usize]);
        let j = direction_class(pb - pa, directions)
            .map_err(GraphError::from)?
            .ok_or(ColourError::UnmatchedDirection(i as u32))?;
        let u = directions[j];
        let offset = u.cross(pa.to_vec());
        let mid = u.dot(pa.to_vec() + pb.to_vec());
        lines.entry((j, offset)).or_default().push((mid, i as u32));
    }
    let mut colours = vec![0u32; g.edges.len()];
    for ((j, _), mut es) in lines {
        es.sort();
        for (rank, (_, e)) in es.into_iter().enumerate() {
            colours[e as usize] = 2 * j as u32 + (rank % 2) as u32;
        }
    }
    Ok(
        Colouring::total(Target::Edge, 2 * directions.len() as u32, colours).with_table(TableRef {
            scheme: "directional-alternating".into(),
            provenance: Provenance::PaperGiven,
        }),
    )
}

/// Whether an AB triangle orientation code is red under the face rule;
/// `code13_red` settles the one code the rule leaves open.
pub fn ab_triangle_is_red(code: u8, code13_red: bool) -> bool {
    match code {
        13 => code13_red,
        1 | 4 | 5 | 8 | 9 | 12 | 16 => true,
        _ => false,
    }
}

pub fn ab_rhombus_is_red(code: u8) -> bool {
    matches!(code, 2 | 4)
}

/// The orientation rule for AB faces with an explicit choice for code 13.
pub fn ab_face_2colour_with(patch: &Patch, code13_red: bool) -> Result<Colouring, ColourError> {
    if patch.tiling != Tiling::Ab {
        return Err(ColourError::WrongTiling {
            scheme: "ab-face",
            expected: Tiling::Ab,
            got: patch.tiling,
        });
    }
    let mut colours = Vec::with_capacity(patch.tiles.len());
    for t in &patch.tiles {
        let code = crate::substitution::orientation_code(t)?;
        let red = match t.kind {
            ProtoKind::AbRhombus => ab_rhombus_is_red(code),
            _ => ab_triangle_is_red(code, code13_red),
        };
        colours.push(if red { RED } else { BLUE });
    }
    Ok(
        Colouring::total(Target::Face, 2, colours).with_table(TableRef {
            scheme: format!(
                "ab-face-orientation(code13={})",
                if code13_red { "red" } else { "blue" }
            ),
            provenance: Provenance::PaperGiven,
        }),
    )
}

/// The AB orientation rule, with code 13 coloured as the oracle's
/// properness search decides.
pub fn ab_face_2colour(patch: &Patch) -> Result<Colouring, ColourError> {
    ab_face_2colour_with(patch, crate::oracle::ab_code13_red()?)
}

/// Face colouring from a hierarchical table.
pub fn hierarchical_face_colour(
    patch: &Patch,
    g: &TilingGraph,
    table: &ColourTable,
) -> Result<Colouring, ColourError> {
    if table.spec.target != Target::Face {
        return Err(ColourError::Unsupported(format!(
            "{} is not a face scheme",
            table.spec.name
        )));
    }
    apply_table(table, patch, g)
}

/// Vertex colouring with red/blue unit borders and table-coloured interiors.
pub fn supertile_border_vertex_colour(
    patch: &Patch,
    g: &TilingGraph,
    table: &ColourTable,
) -> Result<Colouring, ColourError> {
    if table.spec.target != Target::Vertex || !table.spec.labelled {
        return Err(ColourError::Unsupported(format!(
            "{} is not a border scheme",
            table.spec.name
        )));
    }
    apply_table(table, patch, g)
}

/// The constructive colouring for a tiling and target.
pub fn standard_colouring(
    patch: &Patch,
    g: &TilingGraph,
    target: Target,
) -> Result<Colouring, ColourError> {
    let table = |t: Target| {
        crate::oracle::standard_table(patch.tiling, t)
            .map_err(|e| ColourError::Table(e.to_string()))
    };
    match (patch.tiling, target) {
        (Tiling::Chair, Target::Vertex) => bipartite_vertex_colouring(g),
        (_, Target::Vertex) => supertile_border_vertex_colour(patch, g, &table(target)?),
        (Tiling::Pinwheel, Target::Edge) => Ok(pinwheel_coset_edge_colour(g)?.0),
        (t, Target::Edge) => {
            let dirs = t
                .edge_directions()
                .expect("polygonal tilings have finitely many edge directions");
            directional_edge_colour(g, &dirs)
        }
        (Tiling::Ab, Target::Face) => ab_face_2colour(patch),
        (_, Target::Face) => hierarchical_face_colour(patch, g, &table(target)?),
    }
}

/// Per-subgraph structure found by the coset method.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetStats {
    pub edges: usize,
    /// Connected components with at least one edge.
    pub components: usize,
    /// Number of cosets in each component, in component order.
    pub cosets_per_component: Vec<usize>,
    pub max_coset_degree: usize,
    pub paths: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetReport {
    /// Legs (lengths 1 and 2) first, hypotenuses second.
    pub subgraphs: [CosetStats; 2],
}

/// Edge 8-colouring of a pinwheel graph from the turn-parity cosets of
/// the leg and hypotenuse subgraphs.
pub fn pinwheel_coset_edge_colour(
    g: &TilingGraph,
) -> Result<(Colouring, CosetReport), ColourError> {
    let (legs, hyps) = edge_partition_by_length(g)?;
    let mut colours = vec![u32::MAX; g.edges.len()];
    let mut report = CosetReport::default();
    for (sub, set) in [legs, hyps].into_iter().enumerate() {
        report.subgraphs[sub] = coset_colour(g, &set, sub as u32, &mut colours)?;
    }
    Ok((
        Colouring::total(Target::Edge, 8, colours).with_table(TableRef {
            scheme: "pinwheel-turn-cosets".into(),
            provenance: Provenance::PaperGiven,
        }),
        report,
    ))
}

/// Whether moving from edge `e` to edge `f` (sharing vertex `v`) is a turn.
pub fn is_turn(g: &TilingGraph, e: u32, f: u32, v: u32) -> Result<bool, ColourError> {
    let p = g.vertices[v as usize];
    let d1 = g.vertices[g.other_end(e, v) as usize] - p;
    let d2 = g.vertices[g.other_end(f, v) as usize] - p;
    rotation_classify(d1, d2)
        .map(|t| t.is_turn())
        .ok_or(ColourError::UnknownAngle(e, f))
}

fn coset_colour(
    g: &TilingGraph,
    set: &[u32],
    sub: u32,
    colours: &mut [u32],
) -> Result<CosetStats, ColourError> {
    let mut stats = CosetStats {
        edges: set.len(),
        ..Default::default()
    };
    let mut in_set = vec![false; g.edges.len()];
    for &e in set {
        in_set[e as usize] = true;
    }
    let inc: Vec<Vec<u32>> = g
        .vertex_edges
        .iter()
        .map(|l| l.iter().copied().filter(|&e| in_set[e as usize]).collect())
        .collect();

    // Turn parity propagation from the smallest edge of each component.
    let mut label = vec![u8::MAX; g.edges.len()];
    let mut comp_of = vec![usize::MAX; g.edges.len()];
    for &start in set {
        if label[start as usize] != u8::MAX {
            continue;
        }
        let comp = stats.components;
        stats.components += 1;
        label[start as usize] = 0;
        comp_of[start as usize] = comp;
        let mut seen = [false; 2];
        seen[0] = true;
        let mut q = VecDeque::from([start]);
        while let Some(e) = q.pop_front() {
            let ed = &g.edges[e as usize];
            for v in [ed.a, ed.b] {
                for &f in &inc[v as usize] {
                    if f == e {
                        continue;
                    }
                    let want = label[e as usize] ^ u8::from(is_turn(g, e, f, v)?);
                    match label[f as usize] {
                        u8::MAX => {
                            label[f as usize] = want;
                            comp_of[f as usize] = comp;
                            seen[want as usize] = true;
                            q.push_back(f);
                        }
                        l if l != want => return Err(ColourError::ParityContradiction(f)),
                        _ => {}
                    }
                }
            }
        }
        stats
            .cosets_per_component
            .push(seen.iter().filter(|&&s| s).count());
    }

    // Within a coset every vertex has at most two edges, so each coset is a
    // union of paths; alternate along each path from its smaller end.
    let coset_inc = |v: u32, e: u32| -> Vec<u32> {
        inc[v as usize]
            .iter()
            .copied()
            .filter(|&f| {
                label[f as usize] == label[e as usize] && comp_of[f as usize] == comp_of[e as usize]
            })
            .collect()
    };
    for (v, l) in inc.iter().enumerate() {
        for &e in l {
            let d = coset_inc(v as u32, e).len();
            stats.max_coset_degree = stats.max_coset_degree.max(d);
            if d > 2 {
                return Err(ColourError::CosetDegree(v as u32, d));
            }
        }
    }
    let mut done = vec![false; g.edges.len()];
    // Path ends: vertices where some edge's coset has degree 1.
    let mut ends: Vec<(u32, u32)> = Vec::new();
    for (v, l) in inc.iter().enumerate() {
        for &e in l {
            if coset_inc(v as u32, e).len() == 1 {
                ends.push((v as u32, e));
            }
        }
    }
    ends.sort();
    for (v, e) in ends {
        if done[e as usize] {
            continue;
        }
        stats.paths += 1;
        let (mut cur_v, mut cur_e, mut parity) = (v, e, 0u32);
        loop {
            done[cur_e as usize] = true;
            colours[cur_e as usize] = 4 * sub + 2 * u32::from(label[cur_e as usize]) + parity;
            let next_v = g.other_end(cur_e, cur_v);
            let next = coset_inc(next_v, cur_e).into_iter().find(|&f| f != cur_e);
            match next {
                Some(f) if !done[f as usize] => {
                    cur_v = next_v;
                    cur_e = f;
                    parity ^= 1;
                }
                Some(f) => return Err(ColourError::CosetCycle(f)),
                None => break,
            }
        }
    }
    if let Some(&e) = set.iter().find(|&&e| !done[e as usize]) {
        return Err(ColourError::CosetCycle(e));
    }
    Ok(stats)
}

/// Vertex ids of each component of a graph, for reporting.
pub fn component_sizes(g: &SimpleGraph) -> Vec<usize> {
    let comp = components(g);
    let mut sizes = vec![0; comp.iter().map(|&c| c as usize + 1).max().unwrap_or(0)];
    for c in comp {
        sizes[c as usize] += 1;
    }
    sizes
}
