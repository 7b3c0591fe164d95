//! Planar graph of a patch: deduplicated vertices, sides split at every
//! vertex lying inside them, faces bound to tiles, and the derived dual,
//! line and boundary graphs.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::{direction_class, segment_relations, GeomError, Point, SegmentRelation};
use crate::substitution::{prototile_ref, Patch, SideKind, SubstError, Tiling};
use crate::{map_range, Exec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("tiles {0} and {1} overlap along edge ({2}, {3})")]
    Overlap(usize, usize, u32, u32),
    #[error("edge ({0}, {1}) is shared by more than two tiles")]
    NonManifold(u32, u32),
    #[error("edge {0} matches none of the given directions")]
    UnmatchedDirection(u32),
    #[error("operation needs a pinwheel graph, got {0}")]
    NotPinwheel(Tiling),
    #[error("edge {0} is a hypotenuse piece on one side only")]
    SideConflict(u32),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Endpoints with `a < b`.
    pub a: u32,
    pub b: u32,
    /// Index into [`Tiling::edge_directions`], where defined.
    pub direction: Option<u32>,
    /// Kind of the tile side this edge lies on (first incident face).
    pub side: SideKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Index of the tile in the patch.
    pub tile: u32,
    /// Boundary vertices, counterclockwise.
    pub vertices: Vec<u32>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub edges: Vec<u32>,
    /// Kind of the tile side each edge lies on.
    pub sides: Vec<SideKind>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingGraph {
    pub tiling: Tiling,
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    /// One face per tile, in tile order.
    pub faces: Vec<Face>,
    /// Faces incident to each edge (one or two).
    pub edge_faces: Vec<Vec<u32>>,
    /// Edges incident to each vertex, sorted.
    pub vertex_edges: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub max_degree: usize,
    pub max_interior_degree: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Includes the outer face.
    pub faces: usize,
}

/// An undirected simple graph on `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    pub adj: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> SimpleGraph {
        SimpleGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for (a, b) in edges {
            if a != b {
                g.adj[a as usize].push(b);
                g.adj[b as usize].push(a);
            }
        }
        for l in &mut g.adj {
            l.sort_unstable();
            l.dedup();
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, l)| {
            l.iter()
                .filter(move |&&b| (a as u32) < b)
                .map(move |&b| (a as u32, b))
        })
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Induced subgraph on `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[u32]) -> SimpleGraph {
        let pos: HashMap<u32, u32> = keep
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        SimpleGraph::from_edges(
            keep.len(),
            self.edges()
                .filter_map(|(a, b)| Some((*pos.get(&a)?, *pos.get(&b)?))),
        )
    }
}

struct Side {
    from: u32,
    to: u32,
    kind: SideKind,
    inner: Vec<u32>,
}

/// Builds the planar graph of a patch.
pub fn build_graph(patch: &Patch) -> Result<TilingGraph, GraphError> {
    build_graph_with(patch, Exec::default())
}

pub fn build_graph_with(patch: &Patch, exec: Exec) -> Result<TilingGraph, GraphError> {
    let polys: Vec<Vec<(usize, Point)>> = patch.tiles.iter().map(|t| t.polygon_indexed()).collect();

    let mut ids: HashMap<Point, u32> = HashMap::new();
    let mut vertices = Vec::new();
    let corner_ids: Vec<Vec<u32>> = polys
        .iter()
        .map(|poly| {
            poly.iter()
                .map(|&(_, p)| {
                    *ids.entry(p).or_insert_with(|| {
                        vertices.push(p);
                        (vertices.len() - 1) as u32
                    })
                })
                .collect()
        })
        .collect();

    let grid = Grid::new(&vertices, &polys);
    let sides: Vec<Result<Vec<Side>, GraphError>> = map_range(exec, polys.len(), |t| {
        let tile = &patch.tiles[t];
        let proto = prototile_ref(tile.kind);
        let poly = &polys[t];
        let n = poly.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            let (ci, p) = poly[i];
            let (cj, q) = poly[j];
            // Side kind follows the prototile side joining these corners.
            let side_idx = if (ci + 1) % n == cj { ci } else { cj };
            let mut inner: Vec<(crate::Scalar, u32)> = Vec::new();
            for v in grid.candidates(p, q) {
                if segment_relations(vertices[v as usize], p, q)? == SegmentRelation::Interior {
                    inner.push(((vertices[v as usize] - p).dot(q - p), v));
                }
            }
            inner.sort();
            out.push(Side {
                from: corner_ids[t][i],
                to: corner_ids[t][j],
                kind: proto.sides[side_idx],
                inner: inner.into_iter().map(|(_, v)| v).collect(),
            });
        }
        Ok(out)
    });

    let directions = patch.tiling.edge_directions();
    let mut edge_ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut edge_faces: Vec<Vec<u32>> = Vec::new();
    // Direction each face traverses its edges, to catch overlaps.
    let mut edge_forward: Vec<Vec<bool>> = Vec::new();
    let mut faces = Vec::with_capacity(polys.len());
    for (t, sides) in sides.into_iter().enumerate() {
        let mut fv = Vec::new();
        let mut fe = Vec::new();
        let mut fs = Vec::new();
        for side in sides? {
            let mut chain = vec![side.from];
            chain.extend(side.inner);
            chain.push(side.to);
            for w in chain.windows(2) {
                let (u, v) = (w[0], w[1]);
                fv.push(u);
                let key = (u.min(v), u.max(v));
                let id = match edge_ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = edges.len() as u32;
                        let direction = match &directions {
                            Some(dirs) => {
                                let d = vertices[key.1 as usize] - vertices[key.0 as usize];
                                Some(
                                    direction_class(d, dirs)?
                                        .ok_or(GraphError::UnmatchedDirection(id))?
                                        as u32,
                                )
                            }
                            None => None,
                        };
                        edges.push(Edge {
                            a: key.0,
                            b: key.1,
                            direction,
                            side: side.kind,
                        });
                        edge_faces.push(Vec::new());
                        edge_forward.push(Vec::new());
                        edge_ids.insert(key, id);
                        id
                    }
                };
                let fwd = u < v;
                let i = id as usize;
                if let Some(k) = edge_forward[i].iter().position(|&f| f == fwd) {
                    return Err(GraphError::Overlap(
                        edge_faces[i][k] as usize,
                        t,
                        key.0,
                        key.1,
                    ));
                }
                if edge_faces[i].len() == 2 {
                    return Err(GraphError::NonManifold(key.0, key.1));
                }
                edge_faces[i].push(t as u32);
                edge_forward[i].push(fwd);
                fe.push(id);
                fs.push(side.kind);
            }
        }
        faces.push(Face {
            tile: t as u32,
            vertices: fv,
            edges: fe,
            sides: fs,
        });
    }

    let mut vertex_edges = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        vertex_edges[e.a as usize].push(i as u32);
        vertex_edges[e.b as usize].push(i as u32);
    }
    Ok(TilingGraph {
        tiling: patch.tiling,
        vertices,
        edges,
        faces,
        edge_faces,
        vertex_edges,
    })
}

/// Uniform bucket grid over vertex positions, used only to shortlist
/// candidates for the exact tests.
struct Grid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl Grid {
    fn new(vertices: &[Point], polys: &[Vec<(usize, Point)>]) -> Grid {
        let mut cell = f64::INFINITY;
        for poly in polys {
            for i in 0..poly.len() {
                let (x0, y0) = poly[i].1.to_f64();
                let (x1, y1) = poly[(i + 1) % poly.len()].1.to_f64();
                cell = cell.min(((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt());
            }
        }
        if !cell.is_finite() || cell <= 0.0 {
            cell = 1.0;
        }
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, p) in vertices.iter().enumerate() {
            let (x, y) = p.to_f64();
            buckets
                .entry(((x / cell).floor() as i64, (y / cell).floor() as i64))
                .or_default()
                .push(i as u32);
        }
        Grid { cell, buckets }
    }

    fn candidates(&self, p: Point, q: Point) -> Vec<u32> {
        let (x0, y0) = p.to_f64();
        let (x1, y1) = q.to_f64();
        let c = |v: f64| (v / self.cell).floor() as i64;
        let (cx0, cx1) = (c(x0.min(x1)) - 1, c(x0.max(x1)) + 1);
        let (cy0, cy1) = (c(y0.min(y1)) - 1, c(y0.max(y1)) + 1);
        let mut out = Vec::new();
        for cx in cx0..=cx1 {
            for cy in cy0..=cy1 {
                if let Some(b) = self.buckets.get(&(cx, cy)) {
                    out.extend_from_slice(b);
                }
            }
        }
        out
    }
}

impl TilingGraph {
    pub fn degree(&self, v: u32) -> usize {
        self.vertex_edges[v as usize].len()
    }

    pub fn other_end(&self, e: u32, v: u32) -> u32 {
        let ed = &self.edges[e as usize];
        if ed.a == v {
            ed.b
        } else {
            ed.a
        }
    }

    /// Edges with a single incident face.
    pub fn boundary_edges(&self) -> Vec<u32> {
        (0..self.edges.len() as u32)
            .filter(|&e| self.edge_faces[e as usize].len() == 1)
            .collect()
    }

    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut on = vec![false; self.vertices.len()];
        for e in self.boundary_edges() {
            let ed = &self.edges[e as usize];
            on[ed.a as usize] = true;
            on[ed.b as usize] = true;
        }
        on
    }

    /// The vertex graph.
    pub fn vertex_graph(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.vertices.len(), self.edges.iter().map(|e| (e.a, e.b)))
    }

    /// Vertex graph restricted to some edges; vertex ids are unchanged.
    pub fn edge_subgraph(&self, edges: &[u32]) -> SimpleGraph {
        SimpleGraph::from_edges(
            self.vertices.len(),
            edges
                .iter()
                .map(|&e| (self.edges[e as usize].a, self.edges[e as usize].b)),
        )
    }

    /// Line graph: edges adjacent when they share a vertex.
    pub fn line_graph(&self) -> SimpleGraph {
        let mut pairs = Vec::new();
        for inc in &self.vertex_edges {
            for (i, &e) in inc.iter().enumerate() {
                for &f in &inc[i + 1..] {
                    pairs.push((e, f));
                }
            }
        }
        SimpleGraph::from_edges(self.edges.len(), pairs)
    }

    /// True when the vertex graph has one component (or none).
    pub fn is_connected(&self) -> bool {
        components(&self.vertex_graph())
            .iter()
            .max()
            .is_none_or(|&c| c == 0)
    }
}

/// Component index of each vertex, numbered in order of smallest member.
pub fn components(g: &SimpleGraph) -> Vec<u32> {
    let mut comp = vec![u32::MAX; g.len()];
    let mut next = 0;
    for s in 0..g.len() {
        if comp[s] != u32::MAX {
            continue;
        }
        comp[s] = next;
        let mut q = VecDeque::from([s as u32]);
        while let Some(v) = q.pop_front() {
            for &w in &g.adj[v as usize] {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = next;
                    q.push_back(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Faces adjacent when they share at least one edge.
pub fn dual_graph(g: &TilingGraph) -> SimpleGraph {
    SimpleGraph::from_edges(
        g.faces.len(),
        g.edge_faces
            .iter()
            .filter(|f| f.len() == 2)
            .map(|f| (f[0], f[1])),
    )
}

/// Degree statistics; the interior maximum only counts vertices whose
/// graph distance to the patch boundary exceeds `margin`.
pub fn degree_stats(g: &TilingGraph, margin: usize) -> GraphStats {
    let vg = g.vertex_graph();
    let on = g.boundary_vertices();
    let mut dist = vec![usize::MAX; g.vertices.len()];
    let mut q = VecDeque::new();
    for (v, &b) in on.iter().enumerate() {
        if b {
            dist[v] = 0;
            q.push_back(v);
        }
    }
    while let Some(v) = q.pop_front() {
        for &w in &vg.adj[v] {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[v] + 1;
                q.push_back(w as usize);
            }
        }
    }
    let degs: Vec<usize> = (0..g.vertices.len()).map(|v| g.degree(v as u32)).collect();
    GraphStats {
        max_degree: degs.iter().copied().max().unwrap_or(0),
        max_interior_degree: degs
            .iter()
            .zip(&dist)
            .filter(|(_, &d)| d > margin)
            .map(|(&d, _)| d)
            .max()
            .unwrap_or(0),
        vertices: g.vertices.len(),
        edges: g.edges.len(),
        faces: g.faces.len() + 1,
    }
}

/// Edges separating faces in different groups, plus the patch boundary.
pub fn group_boundary(g: &TilingGraph, group_of_face: &[usize]) -> Vec<u32> {
    (0..g.edges.len() as u32)
        .filter(|&e| match g.edge_faces[e as usize].as_slice() {
            [f, h] => group_of_face[*f as usize] != group_of_face[*h as usize],
            _ => true,
        })
        .collect()
}

/// Edges on the boundaries of level-k supertiles.
pub fn boundary_subgraph(g: &TilingGraph, patch: &Patch, k: u32) -> Result<Vec<u32>, GraphError> {
    let (_, anc) = patch.ancestor_indices(k)?;
    Ok(group_boundary(g, &anc))
}

/// Splits pinwheel edges into pieces of legs and pieces of hypotenuses.
pub fn edge_partition_by_length(g: &TilingGraph) -> Result<(Vec<u32>, Vec<u32>), GraphError> {
    if g.tiling != Tiling::Pinwheel {
        return Err(GraphError::NotPinwheel(g.tiling));
    }
    let mut legs = Vec::new();
    let mut hyps = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.side == SideKind::Hypotenuse {
            hyps.push(i as u32);
        } else {
            legs.push(i as u32);
        }
    }
    // Both incident tiles must agree on the side kind.
    for f in &g.faces {
        for (&e, &kind) in f.edges.iter().zip(&f.sides) {
            if (kind == SideKind::Hypotenuse) != (g.edges[e as usize].side == SideKind::Hypotenuse)
            {
                return Err(GraphError::SideConflict(e));
            }
        }
    }
    Ok((legs, hyps))
}
