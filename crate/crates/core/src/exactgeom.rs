//! Exact arithmetic over the ring `(a + b√2) / 2^k` and the planar
//! predicates built on top of it.
//!
//! Arithmetic is done in `i128` with every intermediate checked. The
//! `checked_*` methods report overflow as [`GeomError::Overflow`]; the
//! operator impls panic with the same message instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("non-canonical scalar (a={a}, b={b}, k={k})")]
    NonCanonical { a: i128, b: i128, k: u32 },
    #[error("bad integer literal {0:?}")]
    BadInteger(String),
    #[error("{0} is not divisible by {1} in the coordinate ring")]
    NotDivisible(Scalar, i128),
}

fn overflow<T>(r: Result<T, GeomError>) -> T {
    match r {
        Ok(v) => v,
        Err(e) => panic!("{e}"),
    }
}

/// The number `(a + b√2) / 2^k`, always stored in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub struct Scalar {
    a: i128,
    b: i128,
    k: u32,
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: String,
    b: String,
    k: u32,
}

impl From<Scalar> for ScalarRepr {
    fn from(s: Scalar) -> Self {
        ScalarRepr {
            a: s.a.to_string(),
            b: s.b.to_string(),
            k: s.k,
        }
    }
}

impl TryFrom<ScalarRepr> for Scalar {
    type Error = GeomError;
    fn try_from(r: ScalarRepr) -> Result<Self, GeomError> {
        let a =
            r.a.parse()
                .map_err(|_| GeomError::BadInteger(r.a.clone()))?;
        let b =
            r.b.parse()
                .map_err(|_| GeomError::BadInteger(r.b.clone()))?;
        Scalar::from_canonical(a, b, r.k)
    }
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { a: 0, b: 0, k: 0 };
    pub const ONE: Scalar = Scalar { a: 1, b: 0, k: 0 };
    pub const SQRT2: Scalar = Scalar { a: 0, b: 1, k: 0 };
    pub const HALF: Scalar = Scalar { a: 1, b: 0, k: 1 };

    /// Builds and canonicalizes `(a + b√2) / 2^k`.
    pub fn new(mut a: i128, mut b: i128, mut k: u32) -> Scalar {
        if a == 0 && b == 0 {
            return Scalar::ZERO;
        }
        while k > 0 && a % 2 == 0 && b % 2 == 0 {
            a /= 2;
            b /= 2;
            k -= 1;
        }
        Scalar { a, b, k }
    }

    /// Accepts only triples that are already canonical.
    pub fn from_canonical(a: i128, b: i128, k: u32) -> Result<Scalar, GeomError> {
        let s = Scalar::new(a, b, k);
        if (s.a, s.b, s.k) != (a, b, k) {
            return Err(GeomError::NonCanonical { a, b, k });
        }
        Ok(s)
    }

    pub const fn int(n: i128) -> Scalar {
        Scalar { a: n, b: 0, k: 0 }
    }

    pub fn a(&self) -> i128 {
        self.a
    }
    pub fn b(&self) -> i128 {
        self.b
    }
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    /// Returns the integer value if this scalar is one.
    pub fn as_integer(&self) -> Option<i128> {
        (self.b == 0 && self.k == 0).then_some(self.a)
    }

    fn lift(&self, k: u32) -> Result<(i128, i128), GeomError> {
        let shift = k - self.k;
        let f = 1i128.checked_shl(shift).ok_or(GeomError::Overflow)?;
        if shift >= 126 {
            return Err(GeomError::Overflow);
        }
        Ok((
            self.a.checked_mul(f).ok_or(GeomError::Overflow)?,
            self.b.checked_mul(f).ok_or(GeomError::Overflow)?,
        ))
    }

    pub fn checked_add(self, o: Scalar) -> Result<Scalar, GeomError> {
        let k = self.k.max(o.k);
        let (a1, b1) = self.lift(k)?;
        let (a2, b2) = o.lift(k)?;
        Ok(Scalar::new(
            a1.checked_add(a2).ok_or(GeomError::Overflow)?,
            b1.checked_add(b2).ok_or(GeomError::Overflow)?,
            k,
        ))
    }

    pub fn checked_neg(self) -> Result<Scalar, GeomError> {
        Ok(Scalar {
            a: self.a.checked_neg().ok_or(GeomError::Overflow)?,
            b: self.b.checked_neg().ok_or(GeomError::Overflow)?,
            k: self.k,
        })
    }

    pub fn checked_sub(self, o: Scalar) -> Result<Scalar, GeomError> {
        self.checked_add(o.checked_neg()?)
    }

    pub fn checked_mul(self, o: Scalar) -> Result<Scalar, GeomError> {
        let m = |x: i128, y: i128| x.checked_mul(y).ok_or(GeomError::Overflow);
        let ac = m(self.a, o.a)?;
        let bd2 = m(m(self.b, o.b)?, 2)?;
        let ad = m(self.a, o.b)?;
        let bc = m(self.b, o.a)?;
        let k = self.k.checked_add(o.k).ok_or(GeomError::Overflow)?;
        Ok(Scalar::new(
            ac.checked_add(bd2).ok_or(GeomError::Overflow)?,
            ad.checked_add(bc).ok_or(GeomError::Overflow)?,
            k,
        ))
    }

    /// Exact division by a nonzero integer, if the quotient stays in the ring.
    pub fn div_int(self, n: i128) -> Result<Scalar, GeomError> {
        assert!(n != 0, "division by zero");
        let mut m = n;
        let mut k = self.k;
        while m % 2 == 0 {
            m /= 2;
            k = k.checked_add(1).ok_or(GeomError::Overflow)?;
        }
        if self.a % m != 0 || self.b % m != 0 {
            return Err(GeomError::NotDivisible(self, n));
        }
        Ok(Scalar::new(self.a / m, self.b / m, k))
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        if sa >= 0 && sb >= 0 {
            return (sa | sb) as i32;
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        // Opposite signs: compare a^2 with 2 b^2.
        let a2 = self.a.unsigned_abs().checked_mul(self.a.unsigned_abs());
        let b2 = self
            .b
            .unsigned_abs()
            .checked_mul(self.b.unsigned_abs())
            .and_then(|v| v.checked_mul(2));
        match (a2, b2) {
            (Some(a2), Some(b2)) => {
                if a2 > b2 {
                    sa as i32
                } else {
                    sb as i32
                }
            }
            _ => panic!("{}", GeomError::Overflow),
        }
    }

    pub fn abs(self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / 2f64.powi(self.k as i32)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        overflow(self.checked_add(o))
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        overflow(self.checked_sub(o))
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        overflow(self.checked_mul(o))
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        overflow(self.checked_neg())
    }
}

impl From<i128> for Scalar {
    fn from(n: i128) -> Scalar {
        Scalar::int(n)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.a, self.b) {
            (a, 0) => format!("{a}"),
            (0, b) => format!("{b}√2"),
            (a, b) if b < 0 => format!("{a}-{}√2", -b),
            (a, b) => format!("{a}+{b}√2"),
        };
        if self.k == 0 {
            f.write_str(&num)
        } else if self.b == 0 {
            write!(f, "{num}/{}", 1u128 << self.k)
        } else {
            write!(f, "({num})/{}", 1u128 << self.k)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A position in the plane.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

/// A displacement in the plane.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x: Scalar::ZERO,
        y: Scalar::ZERO,
    };

    pub fn new(x: Scalar, y: Scalar) -> Point {
        Point { x, y }
    }

    pub fn int(x: i128, y: i128) -> Point {
        Point::new(Scalar::int(x), Scalar::int(y))
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 {
        x: Scalar::ZERO,
        y: Scalar::ZERO,
    };

    pub fn new(x: Scalar, y: Scalar) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn int(x: i128, y: i128) -> Vec2 {
        Vec2::new(Scalar::int(x), Scalar::int(y))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(self, o: Vec2) -> Scalar {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> Scalar {
        self.x * o.y - self.y * o.x
    }

    pub fn scale(self, s: Scalar) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn div_int(self, n: i128) -> Result<Vec2, GeomError> {
        Ok(Vec2::new(self.x.div_int(n)?, self.y.div_int(n)?))
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn to_point(self) -> Point {
        Point::new(self.x, self.y)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

impl Sub for Point {
    type Output = Vec2;
    fn sub(self, o: Point) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Add<Vec2> for Point {
    type Output = Point;
    fn add(self, v: Vec2) -> Point {
        Point::new(self.x + v.x, self.y + v.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Row-major 2x2 matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[Scalar::ONE, Scalar::ZERO], [Scalar::ZERO, Scalar::ONE]]);

    pub fn int(m: [[i128; 2]; 2]) -> Mat2 {
        Mat2([
            [Scalar::int(m[0][0]), Scalar::int(m[0][1])],
            [Scalar::int(m[1][0]), Scalar::int(m[1][1])],
        ])
    }

    /// Matrix with the given columns.
    pub fn from_cols(c0: Vec2, c1: Vec2) -> Mat2 {
        Mat2([[c0.x, c1.x], [c0.y, c1.y]])
    }

    pub fn col(&self, j: usize) -> Vec2 {
        Vec2::new(self.0[0][j], self.0[1][j])
    }

    pub fn scalar(s: Scalar) -> Mat2 {
        Mat2([[s, Scalar::ZERO], [Scalar::ZERO, s]])
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let m = &self.0;
        Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::from_cols(self.apply(o.col(0)), self.apply(o.col(1)))
    }

    pub fn det(&self) -> Scalar {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: Scalar) -> Mat2 {
        Mat2::from_cols(self.col(0).scale(s), self.col(1).scale(s))
    }

    pub fn div_int(&self, n: i128) -> Result<Mat2, GeomError> {
        Ok(Mat2::from_cols(
            self.col(0).div_int(n)?,
            self.col(1).div_int(n)?,
        ))
    }

    /// Adjugate; equals `det * inverse`.
    pub fn adjugate(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }
}

/// Affine map `p -> linear * p + translation`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Transform {
    pub linear: Mat2,
    pub translation: Vec2,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        linear: Mat2::IDENTITY,
        translation: Vec2::ZERO,
    };

    pub fn new(linear: Mat2, translation: Vec2) -> Transform {
        Transform {
            linear,
            translation,
        }
    }

    pub fn linear(linear: Mat2) -> Transform {
        Transform::new(linear, Vec2::ZERO)
    }

    pub fn apply(&self, p: Point) -> Point {
        (self.linear.apply(p.to_vec()) + self.translation).to_point()
    }

    pub fn apply_vec(&self, v: Vec2) -> Vec2 {
        self.linear.apply(v)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Transform) -> Transform {
        Transform::new(
            self.linear.mul(&inner.linear),
            self.linear.apply(inner.translation) + self.translation,
        )
    }

    pub fn det(&self) -> Scalar {
        self.linear.det()
    }

    pub fn is_reflection(&self) -> bool {
        self.det().signum() < 0
    }
}

/// Where a point sits relative to a closed segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentRelation {
    Off,
    Endpoint,
    Interior,
}

pub fn segment_relations(p: Point, a: Point, b: Point) -> Result<SegmentRelation, GeomError> {
    if a == b {
        return Err(GeomError::DegenerateSegment);
    }
    if p == a || p == b {
        return Ok(SegmentRelation::Endpoint);
    }
    let d = b - a;
    let w = p - a;
    if !d.cross(w).is_zero() {
        return Ok(SegmentRelation::Off);
    }
    let t = d.dot(w);
    if t.signum() > 0 && t < d.dot(d) {
        Ok(SegmentRelation::Interior)
    } else {
        Ok(SegmentRelation::Off)
    }
}

/// Index of the direction `v` is parallel to (either sense).
pub fn direction_class(v: Vec2, directions: &[Vec2]) -> Result<Option<usize>, GeomError> {
    if v.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    Ok(directions.iter().position(|u| u.cross(v).is_zero()))
}

/// Twice the signed area of a polygon.
pub fn signed_area2(poly: &[Point]) -> Scalar {
    let n = poly.len();
    let mut s = Scalar::ZERO;
    for i in 0..n {
        s = s + poly[i].to_vec().cross(poly[(i + 1) % n].to_vec());
    }
    s
}

pub fn polygon_area(poly: &[Point]) -> Scalar {
    signed_area2(poly).abs() * Scalar::HALF
}

/// Angle classes between adjacent pinwheel edges, with `α = arctan(1/2)`
/// and `β = 90° - α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TurnClass {
    D0,
    D90,
    D180,
    D270,
    TwoAlpha,
    TwoBeta,
    FourAlpha,
    FourBeta,
    TwoAlphaPlus90,
    TwoBetaPlus90,
    TwoAlphaPlus180,
    TwoBetaPlus180,
}

impl TurnClass {
    pub const ALL: [TurnClass; 12] = [
        TurnClass::D0,
        TurnClass::D90,
        TurnClass::D180,
        TurnClass::D270,
        TurnClass::TwoAlpha,
        TurnClass::TwoBeta,
        TurnClass::FourAlpha,
        TurnClass::FourBeta,
        TurnClass::TwoAlphaPlus90,
        TurnClass::TwoBetaPlus90,
        TurnClass::TwoAlphaPlus180,
        TurnClass::TwoBetaPlus180,
    ];

    /// Rotation `(cos, sin)` as integers over a common positive denominator.
    pub fn rotation(self) -> (i128, i128, i128) {
        use TurnClass::*;
        match self {
            D0 => (1, 0, 1),
            D90 => (0, 1, 1),
            D180 => (-1, 0, 1),
            D270 => (0, -1, 1),
            TwoAlpha => (3, 4, 5),
            TwoBeta => (-3, 4, 5),
            FourAlpha => (-7, 24, 25),
            FourBeta => (-7, -24, 25),
            TwoAlphaPlus90 => (-4, 3, 5),
            TwoBetaPlus90 => (-4, -3, 5),
            TwoAlphaPlus180 => (-3, -4, 5),
            TwoBetaPlus180 => (3, -4, 5),
        }
    }

    pub fn degrees(self) -> f64 {
        let (c, s, _) = self.rotation();
        let d = (s as f64).atan2(c as f64).to_degrees();
        if d < 0.0 {
            d + 360.0
        } else {
            d
        }
    }

    /// Whether moving between two edges at this angle counts as a turn.
    pub fn is_turn(self) -> bool {
        use TurnClass::*;
        matches!(
            self,
            D90 | D270 | TwoAlpha | TwoBeta | TwoAlphaPlus180 | TwoBetaPlus180
        )
    }
}

/// The class whose rotation carries `d1` onto a positive multiple of `d2`.
pub fn rotation_classify(d1: Vec2, d2: Vec2) -> Option<TurnClass> {
    if d1.is_zero() || d2.is_zero() {
        return None;
    }
    TurnClass::ALL.into_iter().find(|t| {
        let (c, s, _) = t.rotation();
        let (c, s) = (Scalar::int(c), Scalar::int(s));
        let r = Vec2::new(c * d1.x - s * d1.y, s * d1.x + c * d1.y);
        r.cross(d2).is_zero() && r.dot(d2).signum() > 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: i128, b: i128, k: u32) -> Scalar {
        Scalar::new(a, b, k)
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(Scalar::SQRT2 * Scalar::SQRT2, Scalar::int(2));
        assert_eq!(s(1, 0, 1) + s(1, 0, 1), Scalar::ONE);
        assert_eq!(s(1, 1, 0) * s(1, -1, 0), Scalar::int(-1));
        assert_eq!(Scalar::int(3).cmp(&s(0, 2, 0)), Ordering::Greater);
        assert_eq!(s(1, 0, 1).cmp(&s(0, 1, 1)), Ordering::Less);
        assert_eq!(s(5, -3, 2).cmp(&s(5, -3, 2)), Ordering::Equal);
    }

    #[test]
    fn canonical_form() {
        let x = Scalar::new(4, 2, 3);
        assert_eq!((x.a(), x.b(), x.k()), (2, 1, 2));
        assert_eq!(Scalar::new(0, 0, 5), Scalar::ZERO);
        assert!(Scalar::from_canonical(2, 0, 1).is_err());
        assert!(Scalar::from_canonical(3, -1, 2).is_ok());
    }

    #[test]
    fn overflow_is_reported() {
        let big = Scalar::int(i128::MAX / 2);
        assert_eq!(big.checked_mul(big), Err(GeomError::Overflow));
        assert_eq!(big.checked_add(big).map(|_| ()), Ok(()));
        assert_eq!(
            Scalar::int(i128::MAX).checked_add(Scalar::ONE),
            Err(GeomError::Overflow)
        );
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn operator_overflow_panics() {
        let big = Scalar::int(i128::MAX / 2);
        let _ = big * big;
    }

    #[test]
    fn div_int() {
        assert_eq!(Scalar::int(10).div_int(5), Ok(Scalar::int(2)));
        assert_eq!(Scalar::int(3).div_int(2), Ok(s(3, 0, 1)));
        assert!(Scalar::int(3).div_int(5).is_err());
    }

    #[test]
    fn transform_examples() {
        let p = Point::int(4, -7);
        assert_eq!(Transform::IDENTITY.apply(p), p);
        let rot = Transform::linear(Mat2::int([[0, -1], [1, 0]]));
        assert_eq!(rot.apply(Point::int(1, 0)), Point::int(0, 1));
        let infl = Transform::linear(Mat2::int([[2, -1], [1, 2]]));
        assert_eq!(infl.apply(Point::int(1, 0)), Point::int(2, 1));
    }

    #[test]
    fn compose_matches_sequential_application() {
        let t1 = Transform::new(Mat2::int([[0, -1], [1, 0]]), Vec2::int(3, 1));
        let t2 = Transform::new(
            Mat2::int([[2, 0], [0, -2]]),
            Vec2::new(Scalar::HALF, Scalar::SQRT2),
        );
        let p = Point::new(s(3, 1, 1), Scalar::int(-2));
        assert_eq!(t1.compose(&t2).apply(p), t1.apply(t2.apply(p)));
    }

    #[test]
    fn segment_examples() {
        let (a, b) = (Point::int(0, 0), Point::int(2, 0));
        assert_eq!(
            segment_relations(Point::int(1, 0), a, b),
            Ok(SegmentRelation::Interior)
        );
        assert_eq!(segment_relations(a, a, b), Ok(SegmentRelation::Endpoint));
        assert_eq!(
            segment_relations(Point::int(1, 1), a, b),
            Ok(SegmentRelation::Off)
        );
        assert_eq!(
            segment_relations(Point::int(3, 0), a, b),
            Ok(SegmentRelation::Off)
        );
        assert_eq!(
            segment_relations(a, a, a),
            Err(GeomError::DegenerateSegment)
        );
    }

    #[test]
    fn direction_examples() {
        let axes = [Vec2::int(1, 0), Vec2::int(0, 1)];
        assert_eq!(direction_class(Vec2::int(3, 0), &axes), Ok(Some(0)));
        assert_eq!(direction_class(Vec2::int(1, 1), &axes), Ok(None));
        let rp = [
            Vec2::int(1, 0),
            Vec2::int(0, 1),
            Vec2::int(2, 1),
            Vec2::int(-1, 2),
        ];
        assert_eq!(direction_class(Vec2::int(-2, -1), &rp), Ok(Some(2)));
        assert_eq!(direction_class(Vec2::ZERO, &rp), Err(GeomError::ZeroVector));
    }

    #[test]
    fn rotation_examples() {
        let x = Vec2::int(1, 0);
        assert_eq!(rotation_classify(x, Vec2::int(0, 1)), Some(TurnClass::D90));
        assert_eq!(
            rotation_classify(x, Vec2::int(3, 4)),
            Some(TurnClass::TwoAlpha)
        );
        assert_eq!(
            rotation_classify(x, Vec2::int(-7, 24)),
            Some(TurnClass::FourAlpha)
        );
        assert_eq!(rotation_classify(x, Vec2::int(1, 1)), None);
    }

    #[test]
    fn turn_class_angles_match_floats() {
        let alpha = 0.5f64.atan().to_degrees();
        let beta = 90.0 - alpha;
        let want = [
            0.0,
            90.0,
            180.0,
            270.0,
            2.0 * alpha,
            2.0 * beta,
            4.0 * alpha,
            360.0 - 4.0 * alpha,
            2.0 * alpha + 90.0,
            2.0 * beta + 90.0,
            2.0 * alpha + 180.0,
            2.0 * beta + 180.0,
        ];
        for (t, w) in TurnClass::ALL.iter().zip(want) {
            assert!(
                (t.degrees() - w).abs() < 1e-9,
                "{t:?}: {} vs {w}",
                t.degrees()
            );
        }
    }

    #[test]
    fn scalar_json() {
        let x = s(3, -1, 2);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"a":"3","b":"-1","k":2}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), x);
        assert!(serde_json::from_str::<Scalar>(r#"{"a":"2","b":"0","k":1}"#).is_err());
    }

    #[test]
    fn area() {
        let sq = [
            Point::int(0, 0),
            Point::int(2, 0),
            Point::int(2, 2),
            Point::int(0, 2),
        ];
        assert_eq!(polygon_area(&sq), Scalar::int(4));
        let tri = [Point::int(0, 0), Point::int(1, 0), Point::int(0, 1)];
        assert_eq!(polygon_area(&tri), Scalar::HALF);
    }
}
