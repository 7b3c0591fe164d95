//! Hierarchical colouring schemes: colour tables keyed by a tile's place
//! inside a level-k supertile, or inside a pair of level-k triangles
//! joined along their hypotenuses (rectangles, kites, squares).
//!
//! For vertex schemes the unit borders are 2-coloured red/blue and only
//! interior vertices are looked up. The tables themselves are found by
//! [`crate::oracle::derive_colour_table`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::colourers::{
    bipartite_2colour, target_graph, ColourError, Colouring, Provenance, TableRef, Target,
};
use crate::exactgeom::{Point, Transform};
use crate::oracle::{complete_partial, Completion};
use crate::planargraph::{group_boundary, TilingGraph};
use crate::substitution::{seed_tile, Patch, ProtoKind, TileInstance, Tiling};

/// Static description of a scheme's key structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub name: String,
    pub tiling: Tiling,
    pub target: Target,
    /// Supertile level the keys refer to.
    pub level: u32,
    /// Pair triangle supertiles sharing a whole hypotenuse into one unit.
    pub pair_hypotenuses: bool,
    /// Key on the red/blue pattern of the unit border.
    pub labelled: bool,
    /// Key on the orientation code of the unit's reference supertile.
    pub orientation_keyed: bool,
    pub palette: u32,
    pub train_level: u32,
    pub verify_level: u32,
}

impl SchemeSpec {
    pub fn table_ref(&self, provenance: Provenance) -> TableRef {
        TableRef {
            scheme: format!("{}@level{}", self.name, self.level),
            provenance,
        }
    }
}

/// The scheme used for a tiling's vertex or face colouring.
pub fn standard_scheme(tiling: Tiling, target: Target) -> Option<SchemeSpec> {
    let s = |name: &str, level, pair, labelled, orient, train, verify| SchemeSpec {
        name: name.to_string(),
        tiling,
        target,
        level,
        pair_hypotenuses: pair,
        labelled,
        orientation_keyed: orient,
        palette: 3,
        train_level: train,
        verify_level: verify,
    };
    match (tiling, target) {
        (Tiling::Chair, Target::Face) => Some(s("chair-face", 1, false, false, true, 3, 5)),
        (Tiling::Ab, Target::Vertex) => Some(s("ab-vertex", 2, true, true, false, 4, 6)),
        (Tiling::Rp, Target::Vertex) => Some(s("rp-vertex", 1, true, true, false, 4, 6)),
        (Tiling::Rp, Target::Face) => Some(s("rp-face", 2, true, false, true, 4, 6)),
        (Tiling::Pinwheel, Target::Vertex) => {
            Some(s("pinwheel-vertex", 1, true, true, false, 4, 6))
        }
        (Tiling::Pinwheel, Target::Face) => Some(s("pinwheel-face", 1, true, true, false, 4, 6)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitType {
    Single {
        kind: ProtoKind,
        reflected: bool,
    },
    /// Two triangles of the same chirality (a rectangle).
    SamePair {
        reflected: bool,
    },
    /// Two mirror-image triangles (a kite, or an AB square).
    MirrorPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Position {
    /// Child path below the level-k supertile.
    Path(Vec<u8>),
    /// Exact coordinates in the frame of the unit's reference supertile.
    Local(Point),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableKey {
    pub unit: UnitType,
    pub orientation: u8,
    /// Border labels of the unit's own border corners, in local order.
    pub pattern: Vec<u8>,
    /// 0 for the reference supertile of the unit, 1 for its partner.
    pub half: u8,
    pub position: Position,
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pat: String = self
            .pattern
            .iter()
            .map(|&l| ['A', 'B', '-'][l.min(2) as usize])
            .collect();
        write!(
            f,
            "{:?}/o{}/{}/h{}/{:?}",
            self.unit, self.orientation, pat, self.half, self.position
        )
    }
}

/// What an element's colour comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    Fixed(u32),
    /// Table lookup; the flag marks a swapped unit, whose colour is read
    /// through [`swap_colour`].
    Key(TableKey, bool),
    /// Part of an incomplete unit at the patch boundary; filled in by
    /// exact completion.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourTable {
    pub spec: SchemeSpec,
    pub provenance: Provenance,
    pub entries: Vec<(TableKey, u32)>,
}

impl ColourTable {
    pub fn lookup(&self) -> BTreeMap<&TableKey, u32> {
        self.entries.iter().map(|(k, c)| (k, *c)).collect()
    }
}

#[derive(Clone, Debug)]
struct Unit {
    /// Reference supertile first.
    members: Vec<usize>,
    unit: UnitType,
    orientation: u8,
    pattern: Vec<u8>,
    /// The pattern was stored with A and B exchanged.
    swapped: bool,
}

/// Units, border labels and the unit of each face.
#[derive(Clone, Debug)]
pub struct Layout {
    pub supertiles: Vec<TileInstance>,
    pub face_supertile: Vec<usize>,
    pub face_unit: Vec<usize>,
    /// Fixed border label per vertex (`None` inside units and next to
    /// incomplete units).
    pub border_label: Vec<Option<u32>>,
    units: Vec<Unit>,
    unit_of_supertile: Vec<usize>,
    complete: Vec<bool>,
    divisor: i128,
}

/// `|det L| * L^-1 (p - t)`: coordinates in a supertile's frame, scaled by
/// its determinant so they stay exact.
pub fn local_coords(t: &Transform, p: Point) -> Point {
    let v = t.linear.adjugate().apply(p - t.translation.to_point());
    if t.det().signum() < 0 {
        (-v).to_point()
    } else {
        v.to_point()
    }
}

/// Ratio of a level-k supertile's `|det|` in this patch to its `|det|` in a
/// level-k patch (1 except for the pinwheel, whose scale depends on L).
fn frame_divisor(sup: &TileInstance, level: u32) -> Result<i128, ColourError> {
    let here = sup.transform.det().abs();
    let canon = seed_tile(sup.kind, level, 0)?.transform.det().abs();
    if here == canon {
        return Ok(1);
    }
    match (here.as_integer(), canon.as_integer()) {
        (Some(h), Some(c)) if c != 0 && h % c == 0 => Ok(h / c),
        _ => Err(ColourError::MissingKey(format!(
            "no exact frame scale for {here} / {canon}"
        ))),
    }
}

/// Exchanges A and B when needed so the first labelled entry is A.
fn canonical_pattern(mut p: Vec<u8>) -> (Vec<u8>, bool) {
    let swapped = p.iter().find(|&&l| l < 2) == Some(&1);
    if swapped {
        for l in &mut p {
            if *l < 2 {
                *l ^= 1;
            }
        }
    }
    (p, swapped)
}

/// Colour exchange applied to lookups in swapped units: red and blue trade
/// places, everything else is fixed.
pub fn swap_colour(c: u32) -> u32 {
    match c {
        0 => 1,
        1 => 0,
        c => c,
    }
}

fn hyp_key(t: &TileInstance) -> Option<(Point, Point)> {
    let (a, b) = t.hypotenuse()?;
    Some(if a < b { (a, b) } else { (b, a) })
}

pub fn layout(spec: &SchemeSpec, patch: &Patch, g: &TilingGraph) -> Result<Layout, ColourError> {
    if patch.tiling != spec.tiling {
        return Err(ColourError::WrongTiling {
            scheme: "hierarchical",
            expected: spec.tiling,
            got: patch.tiling,
        });
    }
    let (sup, anc) = patch.ancestor_indices(spec.level)?;
    let divisor = match sup.first() {
        Some(s) => frame_divisor(s, spec.level)?,
        None => 1,
    };
    let local = |s: usize, p: Point| -> Point {
        let q = local_coords(&sup[s].transform, p);
        if divisor == 1 {
            q
        } else {
            Point::new(
                q.x.div_int(divisor).expect("exact frame scale"),
                q.y.div_int(divisor).expect("exact frame scale"),
            )
        }
    };

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut unit_of = vec![usize::MAX; sup.len()];
    if spec.pair_hypotenuses {
        let mut by_hyp: HashMap<(Point, Point), Vec<usize>> = HashMap::new();
        for (i, s) in sup.iter().enumerate() {
            if let Some(h) = hyp_key(s) {
                by_hyp.entry(h).or_default().push(i);
            }
        }
        for (i, s) in sup.iter().enumerate() {
            if unit_of[i] != usize::MAX {
                continue;
            }
            let members = match hyp_key(s).and_then(|h| by_hyp.get(&h)) {
                Some(m) if m.len() == 2 => m.clone(),
                _ => vec![i],
            };
            for &m in &members {
                unit_of[m] = groups.len();
            }
            groups.push(members);
        }
    } else {
        for (i, u) in unit_of.iter_mut().enumerate() {
            *u = i;
            groups.push(vec![i]);
        }
    }

    let face_unit: Vec<usize> = anc.iter().map(|&s| unit_of[s]).collect();
    // A unit is complete unless it is a triangle missing its hypotenuse
    // partner (which happens only at the patch boundary). Only borders of
    // complete units are labelled; the rest is keyed like an interior.
    let complete: Vec<bool> = groups
        .iter()
        .map(|m| !spec.pair_hypotenuses || m.len() == 2 || sup[m[0]].hypotenuse().is_none())
        .collect();
    let border: Vec<u32> = group_boundary(g, &face_unit)
        .into_iter()
        .filter(|&e| {
            g.edge_faces[e as usize]
                .iter()
                .any(|&f| complete[face_unit[f as usize]])
        })
        .collect();
    let mut on_border = vec![false; g.vertices.len()];
    for &e in &border {
        on_border[g.edges[e as usize].a as usize] = true;
        on_border[g.edges[e as usize].b as usize] = true;
    }
    // Labels of the whole border; patterns read these.
    let raw_label: Vec<Option<u32>> = if spec.labelled {
        let lab = bipartite_2colour(&g.edge_subgraph(&border))?;
        (0..g.vertices.len())
            .map(|v| on_border[v].then_some(lab[v]))
            .collect()
    } else {
        vec![None; g.vertices.len()]
    };
    // Vertices touching an incomplete unit are left to completion.
    let mut touches_incomplete = vec![false; g.vertices.len()];
    for (f, face) in g.faces.iter().enumerate() {
        if !complete[face_unit[f]] {
            for &v in &face.vertices {
                touches_incomplete[v as usize] = true;
            }
        }
    }
    let border_label: Vec<Option<u32>> = raw_label
        .iter()
        .zip(&touches_incomplete)
        .map(|(l, &t)| if t { None } else { *l })
        .collect();

    // Labelled supertile corners each unit's pattern is read from.
    let vertex_at: HashMap<Point, u32> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, i as u32))
        .collect();
    let mut unit_border: Vec<Vec<u32>> = groups
        .iter()
        .map(|members| {
            members
                .iter()
                .flat_map(|&m| sup[m].polygon())
                .filter_map(|p| vertex_at.get(&p).copied())
                .filter(|&v| on_border[v as usize])
                .collect()
        })
        .collect();
    for vs in &mut unit_border {
        vs.sort_unstable();
        vs.dedup();
    }

    // Labels in local coordinate order.
    let pattern_for = |s: usize, verts: &[u32]| -> Vec<u8> {
        if !spec.labelled {
            return Vec::new();
        }
        let mut pts: Vec<(Point, u8)> = verts
            .iter()
            .map(|&v| {
                (
                    local(s, g.vertices[v as usize]),
                    raw_label[v as usize].map_or(2, |l| l as u8),
                )
            })
            .collect();
        pts.sort();
        pts.into_iter().map(|(_, l)| l).collect()
    };

    let units = groups
        .into_iter()
        .enumerate()
        .map(|(u, members)| {
            let verts = &unit_border[u];
            let (members, unit) = match members.as_slice() {
                [s] => (
                    vec![*s],
                    UnitType::Single {
                        kind: sup[*s].kind,
                        reflected: sup[*s].is_reflected(),
                    },
                ),
                [a, b] => {
                    let (a, b) = (*a, *b);
                    if sup[a].is_reflected() != sup[b].is_reflected() {
                        let (c, o) = if sup[a].is_reflected() {
                            (b, a)
                        } else {
                            (a, b)
                        };
                        (vec![c, o], UnitType::MirrorPair)
                    } else if spec.orientation_keyed {
                        let oa = sup[a].orientation.unwrap_or(0);
                        let ob = sup[b].orientation.unwrap_or(0);
                        let (c, o) = if ob < oa { (b, a) } else { (a, b) };
                        (
                            vec![c, o],
                            UnitType::SamePair {
                                reflected: sup[c].is_reflected(),
                            },
                        )
                    } else {
                        let pa = canonical_pattern(pattern_for(a, verts)).0;
                        let pb = canonical_pattern(pattern_for(b, verts)).0;
                        let (c, o) = if pb < pa { (b, a) } else { (a, b) };
                        (
                            vec![c, o],
                            UnitType::SamePair {
                                reflected: sup[c].is_reflected(),
                            },
                        )
                    }
                }
                _ => unreachable!("units have one or two members"),
            };
            let r = members[0];
            let (pattern, swapped) = canonical_pattern(pattern_for(r, verts));
            Unit {
                orientation: if spec.orientation_keyed {
                    sup[r].orientation.unwrap_or(0)
                } else {
                    0
                },
                pattern,
                swapped,
                members,
                unit,
            }
        })
        .collect();

    Ok(Layout {
        supertiles: sup,
        face_supertile: anc,
        face_unit,
        border_label,
        units,
        unit_of_supertile: unit_of,
        complete,
        divisor,
    })
}

impl Layout {
    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn unit_types(&self) -> Vec<UnitType> {
        self.units.iter().map(|u| u.unit.clone()).collect()
    }

    /// Members of each unit, reference supertile first.
    pub fn unit_members(&self) -> Vec<Vec<usize>> {
        self.units.iter().map(|u| u.members.clone()).collect()
    }

    /// Normalised local coordinates of `p` in supertile `s`.
    pub fn local(&self, s: usize, p: Point) -> Point {
        let q = local_coords(&self.supertiles[s].transform, p);
        if self.divisor == 1 {
            return q;
        }
        Point::new(
            q.x.div_int(self.divisor).expect("exact frame scale"),
            q.y.div_int(self.divisor).expect("exact frame scale"),
        )
    }

    fn key(&self, unit: usize, half: u8, position: Position) -> TableKey {
        let u = &self.units[unit];
        TableKey {
            unit: u.unit.clone(),
            orientation: u.orientation,
            pattern: u.pattern.clone(),
            half,
            position,
        }
    }
}

/// Where each element of the scheme's target takes its colour from.
pub fn element_slots(
    spec: &SchemeSpec,
    patch: &Patch,
    g: &TilingGraph,
    lay: &Layout,
) -> Result<Vec<Slot>, ColourError> {
    let depth = (patch.level - spec.level) as usize;
    match spec.target {
        Target::Face => Ok((0..g.faces.len())
            .map(|f| {
                let s = lay.face_supertile[f];
                let u = lay.unit_of_supertile[s];
                if !lay.complete[u] {
                    return Slot::Free;
                }
                let half = u8::from(lay.units[u].members[0] != s);
                let path = patch.tiles[g.faces[f].tile as usize].path[depth..].to_vec();
                Slot::Key(lay.key(u, half, Position::Path(path)), lay.units[u].swapped)
            })
            .collect()),
        Target::Vertex => {
            let mut units_of_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
            for (f, face) in g.faces.iter().enumerate() {
                for &v in &face.vertices {
                    units_of_vertex[v as usize].push(lay.face_unit[f]);
                }
            }
            Ok((0..g.vertices.len())
                .map(|v| {
                    if let Some(l) = lay.border_label[v] {
                        return Slot::Fixed(l);
                    }
                    let units = &units_of_vertex[v];
                    if units.iter().any(|&u| !lay.complete[u])
                        || units.iter().any(|&u| u != units[0])
                    {
                        return Slot::Free;
                    }
                    let u = units[0];
                    let p = lay.local(lay.units[u].members[0], g.vertices[v]);
                    Slot::Key(lay.key(u, 0, Position::Local(p)), lay.units[u].swapped)
                })
                .collect())
        }
        Target::Edge => unreachable!("no hierarchical edge schemes"),
    }
}

/// Colours a patch with a table. Elements of incomplete boundary units
/// are filled in by [`crate::oracle::complete_partial`].
pub fn apply_table(
    table: &ColourTable,
    patch: &Patch,
    g: &TilingGraph,
) -> Result<Colouring, ColourError> {
    Ok(apply_table_stats(table, patch, g)?.0)
}

/// [`apply_table`], also returning how much was left to completion.
pub fn apply_table_stats(
    table: &ColourTable,
    patch: &Patch,
    g: &TilingGraph,
) -> Result<(Colouring, Completion), ColourError> {
    let spec = &table.spec;
    if patch.tiling != spec.tiling || patch.level < spec.level {
        return Err(ColourError::Unsupported(format!(
            "scheme {} needs a {} patch of level >= {}, got {} level {}",
            spec.name, spec.tiling, spec.level, patch.tiling, patch.level
        )));
    }
    let lay = layout(spec, patch, g)?;
    let slots = element_slots(spec, patch, g, &lay)?;
    let map = table.lookup();
    let partial = slots
        .into_iter()
        .map(|s| match s {
            Slot::Fixed(c) => Ok(Some(c)),
            Slot::Free => Ok(None),
            Slot::Key(k, swapped) => match map.get(&k) {
                Some(&c) => Ok(Some(if swapped { swap_colour(c) } else { c })),
                None => Err(ColourError::MissingKey(k.to_string())),
            },
        })
        .collect::<Result<Vec<Option<u32>>, _>>()?;
    let tg = target_graph(g, spec.target);
    let done = complete_partial(&tg, &partial, spec.palette)
        .map_err(|e| ColourError::Completion(e.to_string()))?;
    let c = Colouring::total(spec.target, spec.palette, done.colours.clone())
        .with_table(spec.table_ref(table.provenance));
    Ok((c, done))
}
