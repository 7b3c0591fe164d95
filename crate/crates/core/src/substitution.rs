//! Prototiles, substitution rules and level-L patch generation.
//!
//! Patches are generated top-down: a level-L supertile (the seed) is
//! subdivided L times. Every tile keeps the child indices that lead from
//! the seed to it, which is what the hierarchical colouring schemes key on.
//!
//! Scale conventions, chosen so every vertex stays in the exact ring:
//! * chair: unit edges, the seed is `2^L` times a prototile;
//! * Ammann-Beenker: edge length 2, seed scaled by `(1+√2)^L`;
//! * rational pinwheel: base triangle with legs 2 and 4, seed `5^(L/2)`
//!   (odd L: a reflected, tilted supertile) so every tile is an integer
//!   rotation of the base triangle;
//! * pinwheel: legs 1 and 2 at the seed scale, seed `5^L`, which keeps all
//!   coordinates integral.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::{polygon_area, GeomError, Mat2, Point, Scalar, Transform, Vec2};
use crate::{map_slice, Exec};

pub const DEFAULT_MAX_LEVEL: u32 = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelTooHigh { level: u32, max: u32 },
    #[error("level {k} out of range 0..={level}")]
    LevelOutOfRange { k: u32, level: u32 },
    #[error("{0} tiles have no finite orientation code")]
    NoOrientation(ProtoKind),
    #[error("transform is not one of the {0} orientations")]
    BadOrientation(ProtoKind),
    #[error("tile path {0:?} does not belong to this patch")]
    PathMismatch(Vec<u8>),
    #[error("patch has no seed supertile")]
    NoSeed,
    #[error("{kind} is not a prototile of {tiling}")]
    WrongKind { tiling: Tiling, kind: ProtoKind },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tiling {
    Chair,
    Ab,
    Rp,
    Pinwheel,
}

impl Tiling {
    pub const ALL: [Tiling; 4] = [Tiling::Chair, Tiling::Ab, Tiling::Rp, Tiling::Pinwheel];

    pub fn name(self) -> &'static str {
        match self {
            Tiling::Chair => "chair",
            Tiling::Ab => "ab",
            Tiling::Rp => "rp",
            Tiling::Pinwheel => "pinwheel",
        }
    }

    pub fn kinds(self) -> &'static [ProtoKind] {
        match self {
            Tiling::Chair => &[ProtoKind::ChairL],
            Tiling::Ab => &[ProtoKind::AbTriangle, ProtoKind::AbRhombus],
            Tiling::Rp => &[ProtoKind::RpTriangle],
            Tiling::Pinwheel => &[ProtoKind::PinwheelTriangle],
        }
    }

    pub fn default_seed_kind(self) -> ProtoKind {
        match self {
            Tiling::Ab => ProtoKind::AbRhombus,
            t => t.kinds()[0],
        }
    }

    /// Maximum vertex degree the tiling can have.
    pub fn degree_bound(self) -> usize {
        match self {
            Tiling::Chair => 4,
            _ => 8,
        }
    }

    /// Edge directions for the directional alternating colouring, if the
    /// tiling admits one.
    pub fn edge_directions(self) -> Option<Vec<Vec2>> {
        match self {
            Tiling::Chair => Some(vec![Vec2::int(1, 0), Vec2::int(0, 1)]),
            Tiling::Ab => Some(vec![
                Vec2::int(1, 0),
                Vec2::int(1, 1),
                Vec2::int(0, 1),
                Vec2::int(-1, 1),
            ]),
            Tiling::Rp => Some(vec![
                Vec2::int(1, 0),
                Vec2::int(0, 1),
                Vec2::int(2, 1),
                Vec2::int(-1, 2),
            ]),
            Tiling::Pinwheel => None,
        }
    }
}

impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tiling {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "chair" => Ok(Tiling::Chair),
            "ab" => Ok(Tiling::Ab),
            "rp" => Ok(Tiling::Rp),
            "pinwheel" => Ok(Tiling::Pinwheel),
            _ => Err(format!("unknown tiling {s:?} (chair|ab|rp|pinwheel)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtoKind {
    ChairL,
    AbTriangle,
    AbRhombus,
    RpTriangle,
    PinwheelTriangle,
}

impl ProtoKind {
    pub fn tiling(self) -> Tiling {
        match self {
            ProtoKind::ChairL => Tiling::Chair,
            ProtoKind::AbTriangle | ProtoKind::AbRhombus => Tiling::Ab,
            ProtoKind::RpTriangle => Tiling::Rp,
            ProtoKind::PinwheelTriangle => Tiling::Pinwheel,
        }
    }

    pub fn is_triangle(self) -> bool {
        !matches!(self, ProtoKind::ChairL | ProtoKind::AbRhombus)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ProtoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProtoKind::ChairL => "chair-l",
            ProtoKind::AbTriangle => "ab-triangle",
            ProtoKind::AbRhombus => "ab-rhombus",
            ProtoKind::RpTriangle => "rp-triangle",
            ProtoKind::PinwheelTriangle => "pinwheel-triangle",
        };
        f.write_str(s)
    }
}

/// Which side of a prototile is which; used to classify edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideKind {
    /// Chair unit sides, rhombus sides and the short leg of right triangles.
    Short,
    /// Long leg of the (1, 2, √5) triangles.
    Long,
    Hypotenuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Marker {
    None,
    /// The hypotenuse arrow runs from corner `tail` to corner `head`.
    Arrow {
        tail: usize,
        head: usize,
    },
    /// Chirality is the sign of the placement's determinant.
    ReflectionFlag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrototileDef {
    pub tiling: Tiling,
    pub kind: ProtoKind,
    /// Counterclockwise; corner 0 is the origin and corner 1 lies on the
    /// positive x axis.
    pub polygon: Vec<Point>,
    /// `sides[i]` describes the side from corner `i` to corner `i + 1`.
    pub sides: Vec<SideKind>,
    pub marker: Marker,
    /// Corner at the right angle, for triangles.
    pub right_angle: Option<usize>,
}

fn sc(a: i128, b: i128) -> Scalar {
    Scalar::new(a, b, 0)
}

fn pt(a1: i128, b1: i128, a2: i128, b2: i128) -> Point {
    Point::new(sc(a1, b1), sc(a2, b2))
}

pub fn prototile(kind: ProtoKind) -> PrototileDef {
    use SideKind::*;
    let (polygon, sides, marker, right_angle) = match kind {
        ProtoKind::ChairL => (
            [
                (0, 0),
                (1, 0),
                (2, 0),
                (2, 1),
                (1, 1),
                (1, 2),
                (0, 2),
                (0, 1),
            ]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect(),
            vec![Short; 8],
            Marker::None,
            None,
        ),
        ProtoKind::AbTriangle => (
            vec![pt(0, 0, 0, 0), pt(0, 2, 0, 0), pt(0, 1, 0, 1)],
            vec![Hypotenuse, Short, Short],
            Marker::Arrow { tail: 0, head: 1 },
            Some(2),
        ),
        ProtoKind::AbRhombus => (
            vec![
                pt(0, 0, 0, 0),
                pt(2, 0, 0, 0),
                pt(2, 1, 0, 1),
                pt(0, 1, 0, 1),
            ],
            vec![Short; 4],
            Marker::None,
            None,
        ),
        ProtoKind::RpTriangle => (
            vec![Point::int(0, 0), Point::int(2, 0), Point::int(0, 4)],
            vec![Short, Hypotenuse, Long],
            Marker::ReflectionFlag,
            Some(0),
        ),
        ProtoKind::PinwheelTriangle => (
            vec![Point::int(0, 0), Point::int(1, 0), Point::int(0, 2)],
            vec![Short, Hypotenuse, Long],
            Marker::ReflectionFlag,
            Some(0),
        ),
    };
    PrototileDef {
        tiling: kind.tiling(),
        kind,
        polygon,
        sides,
        marker,
        right_angle,
    }
}

fn prototiles() -> &'static [PrototileDef; 5] {
    static P: OnceLock<[PrototileDef; 5]> = OnceLock::new();
    P.get_or_init(|| {
        [
            prototile(ProtoKind::ChairL),
            prototile(ProtoKind::AbTriangle),
            prototile(ProtoKind::AbRhombus),
            prototile(ProtoKind::RpTriangle),
            prototile(ProtoKind::PinwheelTriangle),
        ]
    })
}

pub fn prototile_ref(kind: ProtoKind) -> &'static PrototileDef {
    &prototiles()[kind.index()]
}

/// `(1 + √2)`, the Ammann-Beenker inflation factor.
pub fn silver() -> Scalar {
    sc(1, 1)
}

/// `[[2, -1], [1, 2]]`: √5 times the rotation by `arctan(1/2)`.
pub fn pinwheel_matrix() -> Mat2 {
    Mat2::int([[2, -1], [1, 2]])
}

/// Rotation by `45° * steps`.
pub fn rot45(steps: u32) -> Mat2 {
    let h = Scalar::new(0, 1, 1);
    let r = Mat2([[h, -h], [h, h]]);
    let mut m = Mat2::IDENTITY;
    for _ in 0..steps % 8 {
        m = r.mul(&m);
    }
    m
}

pub fn rot90(steps: u32) -> Mat2 {
    match steps % 4 {
        0 => Mat2::int([[1, 0], [0, 1]]),
        1 => Mat2::int([[0, -1], [1, 0]]),
        2 => Mat2::int([[-1, 0], [0, -1]]),
        _ => Mat2::int([[0, 1], [-1, 0]]),
    }
}

/// A child placement in the parent's own frame, before division by
/// `divisor`.
#[derive(Clone, Debug)]
struct ChildRule {
    kind: ProtoKind,
    place: Transform,
}

#[derive(Clone, Debug)]
struct Rule {
    children: Vec<ChildRule>,
    divisor: i128,
}

/// Transform taking prototile `kind` onto a copy whose corner 0 is `q0`
/// and corner 1 is `q1`, with positive determinant iff `positive`.
fn frame(kind: ProtoKind, q0: Point, q1: Point, positive: bool) -> Result<Transform, GeomError> {
    let p = prototile_ref(kind);
    let len = p.polygon[1].x;
    let d = q1 - q0;
    // Divide by the side length; it is 1, 2 or 2√2 here.
    let inv = if len == Scalar::int(1) {
        Scalar::ONE
    } else if len == Scalar::int(2) {
        Scalar::HALF
    } else if len == sc(0, 2) {
        Scalar::new(0, 1, 2)
    } else {
        unreachable!("unsupported prototile side length {len}")
    };
    let c0 = d.scale(inv);
    let c1 = if positive { c0.perp() } else { -c0.perp() };
    Ok(Transform::new(Mat2::from_cols(c0, c1), q0.to_vec()))
}

/// Finds the placement of a rhombus with exactly the given corners,
/// trying cyclic starts and both orientations in a fixed order.
fn fit_rhombus(corners: [Point; 4]) -> Transform {
    let proto = prototile_ref(ProtoKind::AbRhombus);
    for start in 0..4 {
        for positive in [true, false] {
            let q0 = corners[start];
            let q1 = corners[(start + 1) % 4];
            let q1b = corners[(start + 3) % 4];
            for q in [q1, q1b] {
                let t = frame(ProtoKind::AbRhombus, q0, q, positive).unwrap();
                let mut img: Vec<Point> = proto.polygon.iter().map(|&p| t.apply(p)).collect();
                let mut want = corners.to_vec();
                img.sort();
                want.sort();
                if img == want {
                    return t;
                }
            }
        }
    }
    panic!("rhombus corners {corners:?} do not fit the prototile")
}

fn ab_triangle(tail: Point, head: Point, apex: Point) -> ChildRule {
    let d = head - tail;
    let positive = d.cross(apex - tail).signum() > 0;
    let place = frame(ProtoKind::AbTriangle, tail, head, positive).unwrap();
    debug_assert_eq!(
        place.apply(prototile_ref(ProtoKind::AbTriangle).polygon[2]),
        apex
    );
    ChildRule {
        kind: ProtoKind::AbTriangle,
        place,
    }
}

fn ab_rhombus(c: [Point; 4]) -> ChildRule {
    ChildRule {
        kind: ProtoKind::AbRhombus,
        place: fit_rhombus(c),
    }
}

fn int_child(kind: ProtoKind, m: [[i128; 2]; 2], t: (i128, i128)) -> ChildRule {
    ChildRule {
        kind,
        place: Transform::new(Mat2::int(m), Vec2::int(t.0, t.1)),
    }
}

fn build_rule(kind: ProtoKind) -> Rule {
    match kind {
        ProtoKind::ChairL => {
            // Placements inside the doubled L, then scaled by 1/2.
            let half = Transform::linear(Mat2::scalar(Scalar::HALF));
            let ch = |m, t| {
                let c = int_child(ProtoKind::ChairL, m, t);
                ChildRule {
                    kind: c.kind,
                    place: half.compose(&c.place),
                }
            };
            Rule {
                children: vec![
                    ch([[1, 0], [0, 1]], (0, 0)),
                    ch([[0, -1], [1, 0]], (4, 0)),
                    ch([[1, 0], [0, 1]], (1, 1)),
                    ch([[0, 1], [-1, 0]], (0, 4)),
                ],
                divisor: 1,
            }
        }
        ProtoKind::AbTriangle | ProtoKind::AbRhombus => {
            let shrink = Transform::linear(Mat2::scalar(sc(-1, 1)));
            let children = if kind == ProtoKind::AbTriangle {
                vec![
                    ab_triangle(pt(2, 0, 2, 0), pt(0, 0, 0, 0), pt(2, 0, 0, 0)),
                    ab_rhombus([
                        pt(2, 0, 0, 0),
                        pt(2, 1, 0, 1),
                        pt(2, 1, 2, 1),
                        pt(2, 0, 2, 0),
                    ]),
                    ab_triangle(pt(2, 2, 0, 0), pt(2, 0, 0, 0), pt(2, 1, 0, 1)),
                    ab_rhombus([
                        pt(2, 2, 0, 0),
                        pt(4, 2, 0, 0),
                        pt(4, 1, 0, 1),
                        pt(2, 1, 0, 1),
                    ]),
                    ab_triangle(pt(4, 1, 0, 1), pt(2, 1, 2, 1), pt(2, 1, 0, 1)),
                ]
            } else {
                vec![
                    ab_rhombus([
                        pt(0, 0, 0, 0),
                        pt(2, 0, 0, 0),
                        pt(2, 1, 0, 1),
                        pt(0, 1, 0, 1),
                    ]),
                    ab_triangle(pt(0, 1, 0, 1), pt(2, 1, 2, 1), pt(2, 1, 0, 1)),
                    ab_triangle(pt(2, 0, 0, 0), pt(2, 2, 0, 0), pt(2, 1, 0, 1)),
                    ab_rhombus([
                        pt(2, 1, 0, 1),
                        pt(2, 2, 0, 0),
                        pt(2, 2, 2, 0),
                        pt(2, 1, 2, 1),
                    ]),
                    ab_triangle(pt(4, 2, 2, 0), pt(2, 2, 0, 0), pt(2, 2, 2, 0)),
                    ab_rhombus([
                        pt(2, 2, 2, 0),
                        pt(4, 2, 2, 0),
                        pt(4, 3, 2, 1),
                        pt(2, 3, 2, 1),
                    ]),
                    ab_triangle(pt(2, 3, 2, 1), pt(2, 1, 2, 1), pt(2, 2, 2, 0)),
                ]
            };
            Rule {
                children: children
                    .into_iter()
                    .map(|c| ChildRule {
                        kind: c.kind,
                        place: shrink.compose(&c.place),
                    })
                    .collect(),
                divisor: 1,
            }
        }
        ProtoKind::RpTriangle | ProtoKind::PinwheelTriangle => {
            // Placements inside the triangle M^T * P, pre-multiplied by M;
            // the rule divides by 5 afterwards since M * M^T = 5.
            let raw = if kind == ProtoKind::RpTriangle {
                vec![
                    int_child(kind, [[0, -1], [-1, 0]], (4, 0)),
                    int_child(kind, [[-1, 0], [0, 1]], (2, 0)),
                    int_child(kind, [[-1, 0], [0, 1]], (4, 0)),
                    int_child(kind, [[1, 0], [0, -1]], (2, 4)),
                    int_child(kind, [[-1, 0], [0, 1]], (4, 4)),
                ]
            } else {
                vec![
                    int_child(kind, [[0, -1], [-1, 0]], (2, 0)),
                    int_child(kind, [[-1, 0], [0, 1]], (1, 0)),
                    int_child(kind, [[1, 0], [0, 1]], (1, 0)),
                    int_child(kind, [[-1, 0], [0, -1]], (2, 2)),
                    int_child(kind, [[-1, 0], [0, 1]], (2, 2)),
                ]
            };
            let m = Transform::linear(pinwheel_matrix());
            Rule {
                children: raw
                    .into_iter()
                    .map(|c| ChildRule {
                        kind: c.kind,
                        place: m.compose(&c.place),
                    })
                    .collect(),
                divisor: 5,
            }
        }
    }
}

fn rules() -> &'static [Rule; 5] {
    static R: OnceLock<[Rule; 5]> = OnceLock::new();
    R.get_or_init(|| {
        [
            build_rule(ProtoKind::ChairL),
            build_rule(ProtoKind::AbTriangle),
            build_rule(ProtoKind::AbRhombus),
            build_rule(ProtoKind::RpTriangle),
            build_rule(ProtoKind::PinwheelTriangle),
        ]
    })
}

/// Number of children produced by subdividing one tile of `kind`.
pub fn child_count(kind: ProtoKind) -> usize {
    rules()[kind.index()].children.len()
}

/// A placed tile or supertile.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TileInstance {
    pub kind: ProtoKind,
    pub transform: Transform,
    /// Orientation code where the tiling has finitely many orientations.
    pub orientation: Option<u8>,
    /// Child indices from the seed down to this tile.
    pub path: Vec<u8>,
}

impl TileInstance {
    pub fn new(kind: ProtoKind, transform: Transform, path: Vec<u8>) -> TileInstance {
        let orientation = orientation_code_of(kind, &transform).ok();
        TileInstance {
            kind,
            transform,
            orientation,
            path,
        }
    }

    /// Image of prototile corner `i`.
    pub fn corner(&self, i: usize) -> Point {
        self.transform.apply(prototile_ref(self.kind).polygon[i])
    }

    /// Corners in counterclockwise order, paired with the prototile corner
    /// index each came from.
    pub fn polygon_indexed(&self) -> Vec<(usize, Point)> {
        let n = prototile_ref(self.kind).polygon.len();
        if self.transform.is_reflection() {
            (0..n)
                .map(|j| (n - j) % n)
                .map(|i| (i, self.corner(i)))
                .collect()
        } else {
            (0..n).map(|i| (i, self.corner(i))).collect()
        }
    }

    /// Corners in counterclockwise order.
    pub fn polygon(&self) -> Vec<Point> {
        self.polygon_indexed().into_iter().map(|(_, p)| p).collect()
    }

    pub fn area(&self) -> Scalar {
        polygon_area(&self.polygon())
    }

    pub fn is_reflected(&self) -> bool {
        self.transform.is_reflection()
    }

    pub fn level_below_seed(&self) -> usize {
        self.path.len()
    }

    /// Endpoints of the hypotenuse, for triangles.
    pub fn hypotenuse(&self) -> Option<(Point, Point)> {
        let p = prototile_ref(self.kind);
        let i = p.sides.iter().position(|s| *s == SideKind::Hypotenuse)?;
        Some((self.corner(i), self.corner((i + 1) % p.polygon.len())))
    }

    pub fn right_angle_corner(&self) -> Option<Point> {
        prototile_ref(self.kind).right_angle.map(|i| self.corner(i))
    }

    /// Exact centroid of the corners (not of the area).
    pub fn corner_centroid(&self) -> (f64, f64) {
        let poly = self.polygon();
        let n = poly.len() as f64;
        let (sx, sy) = poly.iter().fold((0.0, 0.0), |(a, b), p| {
            let (x, y) = p.to_f64();
            (a + x, b + y)
        });
        (sx / n, sy / n)
    }
}

/// Subdivides a tile into its children; the children exactly cover the
/// tile's region.
pub fn substitute_once(tile: &TileInstance) -> Result<Vec<TileInstance>, SubstError> {
    let rule = &rules()[tile.kind.index()];
    rule.children
        .iter()
        .enumerate()
        .map(|(i, c)| child_of(tile, rule, i, c))
        .collect()
}

fn child_of(
    tile: &TileInstance,
    rule: &Rule,
    i: usize,
    c: &ChildRule,
) -> Result<TileInstance, SubstError> {
    let pl = &tile.transform.linear;
    let linear = pl.mul(&c.place.linear);
    let trans = pl.apply(c.place.translation);
    let (linear, trans) = if rule.divisor == 1 {
        (linear, trans)
    } else {
        (linear.div_int(rule.divisor)?, trans.div_int(rule.divisor)?)
    };
    let mut path = tile.path.clone();
    path.push(i as u8);
    Ok(TileInstance::new(
        c.kind,
        Transform::new(linear, trans + tile.transform.translation),
        path,
    ))
}

/// The `i`-th child only.
pub fn nth_child(tile: &TileInstance, i: usize) -> Result<TileInstance, SubstError> {
    let rule = &rules()[tile.kind.index()];
    let c = rule
        .children
        .get(i)
        .ok_or_else(|| SubstError::PathMismatch(vec![i as u8]))?;
    child_of(tile, rule, i, c)
}

/// Level-L supertile used as the seed of a patch.
pub fn seed_tile(kind: ProtoKind, level: u32, rotation: u32) -> Result<TileInstance, SubstError> {
    let linear = match kind.tiling() {
        Tiling::Chair => rot90(rotation).scale(pow(Scalar::int(2), level)?),
        Tiling::Ab => rot45(rotation).scale(pow(silver(), level)?),
        Tiling::Rp => {
            let s = pow(Scalar::int(5), level / 2)?;
            let base = if level.is_multiple_of(2) {
                Mat2::IDENTITY
            } else {
                // Reflected and tilted, so that the level-0 tiles are plain
                // rotations of the base triangle.
                Mat2::int([[1, 0], [0, -1]]).mul(&Mat2::int([[2, 1], [-1, 2]]))
            };
            rot90(rotation).mul(&base).scale(s)
        }
        Tiling::Pinwheel => rot90(rotation).scale(pow(Scalar::int(5), level)?),
    };
    Ok(TileInstance::new(
        kind,
        Transform::linear(linear),
        Vec::new(),
    ))
}

fn pow(x: Scalar, n: u32) -> Result<Scalar, GeomError> {
    let mut r = Scalar::ONE;
    for _ in 0..n {
        r = r.checked_mul(x)?;
    }
    Ok(r)
}

/// A finite region tiled by level-0 tiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Patch {
    pub tiling: Tiling,
    pub level: u32,
    /// The level-L supertile the patch subdivides; absent for hand-built
    /// patches.
    pub seed: Option<TileInstance>,
    pub tiles: Vec<TileInstance>,
}

pub fn generate_patch(
    tiling: Tiling,
    level: u32,
    seed: &TileInstance,
) -> Result<Patch, SubstError> {
    generate_patch_with(tiling, level, seed, DEFAULT_MAX_LEVEL, Exec::default())
}

/// Default seed for a tiling: the default prototile, unrotated.
pub fn default_patch(tiling: Tiling, level: u32) -> Result<Patch, SubstError> {
    let seed = seed_tile(tiling.default_seed_kind(), level, 0)?;
    generate_patch(tiling, level, &seed)
}

pub fn generate_patch_with(
    tiling: Tiling,
    level: u32,
    seed: &TileInstance,
    max_level: u32,
    exec: Exec,
) -> Result<Patch, SubstError> {
    if level > max_level {
        return Err(SubstError::LevelTooHigh {
            level,
            max: max_level,
        });
    }
    if seed.kind.tiling() != tiling {
        return Err(SubstError::WrongKind {
            tiling,
            kind: seed.kind,
        });
    }
    let tiles = expand(seed, level, exec)?;
    Ok(Patch {
        tiling,
        level,
        seed: Some(seed.clone()),
        tiles,
    })
}

/// All descendants `depth` levels below `tile`, in path order.
pub fn expand(
    tile: &TileInstance,
    depth: u32,
    exec: Exec,
) -> Result<Vec<TileInstance>, SubstError> {
    if depth == 0 {
        return Ok(vec![tile.clone()]);
    }
    let children = substitute_once(tile)?;
    let parts = if depth >= 3 {
        map_slice(exec, &children, |c| expand(c, depth - 1, exec))
    } else {
        children
            .iter()
            .map(|c| expand(c, depth - 1, Exec::Sequential))
            .collect()
    };
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// A tile's ancestor at some level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ancestor {
    pub supertile: TileInstance,
    /// Index of the child of the ancestor on the way down to the tile
    /// (`None` when the ancestor is the tile itself).
    pub child_index: Option<u8>,
}

impl Patch {
    pub fn seed(&self) -> Result<&TileInstance, SubstError> {
        self.seed.as_ref().ok_or(SubstError::NoSeed)
    }

    /// Follows `path` down from the seed.
    pub fn supertile_at(&self, path: &[u8]) -> Result<TileInstance, SubstError> {
        let mut t = self.seed()?.clone();
        for &i in path {
            if i as usize >= child_count(t.kind) {
                return Err(SubstError::PathMismatch(path.to_vec()));
            }
            t = nth_child(&t, i as usize)?;
        }
        Ok(t)
    }

    /// All level-k supertiles, in path order.
    pub fn supertiles(&self, k: u32) -> Result<Vec<TileInstance>, SubstError> {
        if k > self.level {
            return Err(SubstError::LevelOutOfRange {
                k,
                level: self.level,
            });
        }
        if k == 0 {
            return Ok(self.tiles.clone());
        }
        expand(self.seed()?, self.level - k, Exec::default())
    }

    /// For each tile, the index into [`Patch::supertiles`] of its level-k
    /// ancestor.
    pub fn ancestor_indices(&self, k: u32) -> Result<(Vec<TileInstance>, Vec<usize>), SubstError> {
        let sup = self.supertiles(k)?;
        let depth = (self.level - k) as usize;
        let index: HashMap<&[u8], usize> = sup
            .iter()
            .enumerate()
            .map(|(i, s)| (s.path.as_slice(), i))
            .collect();
        let map = self
            .tiles
            .iter()
            .map(|t| {
                t.path
                    .get(..depth)
                    .and_then(|p| index.get(p).copied())
                    .ok_or_else(|| SubstError::PathMismatch(t.path.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((sup, map))
    }

    /// Restricts the patch to the tiles under one supertile, which becomes
    /// the new seed.
    pub fn restrict(&self, prefix: &[u8]) -> Result<Patch, SubstError> {
        let seed = self.supertile_at(prefix)?;
        let n = prefix.len();
        let tiles = self
            .tiles
            .iter()
            .filter(|t| t.path.starts_with(prefix))
            .map(|t| TileInstance {
                path: t.path[n..].to_vec(),
                ..t.clone()
            })
            .collect();
        Ok(Patch {
            tiling: self.tiling,
            level: self.level - n as u32,
            seed: Some(TileInstance {
                path: Vec::new(),
                ..seed
            }),
            tiles,
        })
    }

    pub fn area(&self) -> Scalar {
        self.tiles
            .iter()
            .fold(Scalar::ZERO, |acc, t| acc + t.area())
    }
}

/// Ancestor of `tile` at level `k` (the tile itself for `k = 0`, the seed
/// for `k = L`).
pub fn ancestor_at_level(
    patch: &Patch,
    tile: &TileInstance,
    k: u32,
) -> Result<Ancestor, SubstError> {
    if k > patch.level {
        return Err(SubstError::LevelOutOfRange {
            k,
            level: patch.level,
        });
    }
    if tile.path.len() != patch.level as usize {
        return Err(SubstError::PathMismatch(tile.path.clone()));
    }
    if k == 0 {
        return Ok(Ancestor {
            supertile: tile.clone(),
            child_index: None,
        });
    }
    let depth = (patch.level - k) as usize;
    Ok(Ancestor {
        supertile: patch.supertile_at(&tile.path[..depth])?,
        child_index: Some(tile.path[depth]),
    })
}

/// Index `k` in `0..8` with `v` pointing at `45° * k`.
pub fn octant(v: Vec2) -> Option<u32> {
    let (sx, sy) = (v.x.signum(), v.y.signum());
    let diag = v.x.abs() == v.y.abs();
    Some(match (sx, sy) {
        (0, 0) => return None,
        (1, 0) => 0,
        (0, 1) => 2,
        (-1, 0) => 4,
        (0, -1) => 6,
        (1, 1) if diag => 1,
        (-1, 1) if diag => 3,
        (-1, -1) if diag => 5,
        (1, -1) if diag => 7,
        _ => return None,
    })
}

fn orientation_code_of(kind: ProtoKind, t: &Transform) -> Result<u8, SubstError> {
    let bad = || SubstError::BadOrientation(kind);
    match kind {
        ProtoKind::ChairL => {
            let k = octant(t.linear.col(0)).ok_or_else(bad)?;
            if k % 2 != 0 || t.is_reflection() {
                return Err(bad());
            }
            Ok(1 + (k / 2) as u8)
        }
        ProtoKind::AbRhombus => {
            let a = octant(t.linear.col(0)).ok_or_else(bad)? % 4;
            let diag = t.apply_vec(Vec2::int(1, 1));
            let b = octant(diag).ok_or_else(bad)? % 4;
            let low = if (a + 1) % 4 == b {
                a
            } else if (b + 1) % 4 == a {
                b
            } else {
                return Err(bad());
            };
            Ok([3, 4, 1, 2][low as usize])
        }
        ProtoKind::AbTriangle => {
            let k = octant(t.linear.col(0)).ok_or_else(bad)?;
            let s = u32::from(t.is_reflection());
            Ok(((4 + 2 * k + s) % 16 + 1) as u8)
        }
        ProtoKind::RpTriangle => {
            let k = octant(t.linear.col(0)).ok_or_else(bad)?;
            if k % 2 != 0 {
                return Err(bad());
            }
            Ok(1 + (k / 2) as u8 + 4 * u8::from(t.is_reflection()))
        }
        ProtoKind::PinwheelTriangle => Err(SubstError::NoOrientation(kind)),
    }
}

/// Orientation code of a tile (chair 1-4, AB rhombus 1-4, AB triangle
/// 1-16, RP 1-8 with 5-8 reflected).
pub fn orientation_code(tile: &TileInstance) -> Result<u8, SubstError> {
    orientation_code_of(tile.kind, &tile.transform)
}

/// The mirror image of a triangle across the line of its hypotenuse.
pub fn mirror_across_hypotenuse(tile: &TileInstance) -> Result<TileInstance, SubstError> {
    let (a, b) = tile
        .hypotenuse()
        .ok_or(SubstError::BadOrientation(tile.kind))?;
    mirror_across_line(tile, a, b)
}

/// The mirror image of a tile across the line through `a` and `b`.
pub fn mirror_across_line(
    tile: &TileInstance,
    a: Point,
    b: Point,
) -> Result<TileInstance, SubstError> {
    let d = b - a;
    let n = d.dot(d);
    // Reflection across direction d is (1/|d|^2) [[dx²-dy², 2dxdy], [2dxdy, dy²-dx²]].
    let refl = Mat2([
        [d.x * d.x - d.y * d.y, Scalar::int(2) * d.x * d.y],
        [Scalar::int(2) * d.x * d.y, d.y * d.y - d.x * d.x],
    ]);
    let lin = div_scalar(refl.mul(&tile.transform.linear), n)?;
    let trans = a.to_vec() + div_vec(refl.apply(tile.transform.translation - a.to_vec()), n)?;
    let t = Transform::new(lin, trans);
    Ok(TileInstance::new(tile.kind, t, tile.path.clone()))
}

fn div_scalar(m: Mat2, n: Scalar) -> Result<Mat2, SubstError> {
    let k = n
        .as_integer()
        .ok_or(SubstError::Geom(GeomError::NotDivisible(n, 0)))?;
    Ok(m.div_int(k)?)
}

fn div_vec(v: Vec2, n: Scalar) -> Result<Vec2, SubstError> {
    let k = n
        .as_integer()
        .ok_or(SubstError::Geom(GeomError::NotDivisible(n, 0)))?;
    Ok(v.div_int(k)?)
}

/// Two level-1 pinwheel supertiles mirrored across their common long leg,
/// subdivided once: the configuration with a degree-8 vertex at the
/// midpoint of that leg.
pub fn pinwheel_mirror_pair() -> Result<Patch, SubstError> {
    let mut s = seed_tile(ProtoKind::PinwheelTriangle, 1, 0)?;
    s.path = vec![0];
    let poly = s.polygon();
    let len2 = |i: usize| {
        let d = poly[(i + 1) % 3] - poly[i];
        d.dot(d)
    };
    // Sides by length: short leg, long leg, hypotenuse.
    let mut sides = [0, 1, 2];
    sides.sort_by_key(|&i| len2(i));
    let i = sides[1];
    let mut m = mirror_across_line(&s, poly[i], poly[(i + 1) % 3])?;
    m.path = vec![1];
    let mut tiles = substitute_once(&s)?;
    tiles.extend(substitute_once(&m)?);
    Ok(Patch {
        tiling: Tiling::Pinwheel,
        level: 1,
        seed: None,
        tiles,
    })
}
