//! Exact planar primitives over the rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Canonical `p/q` string (integers print without a denominator).
pub fn format_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_abs = int.trim_start_matches(['-', '+']);
        let whole: BigInt = if int_abs.is_empty() {
            BigInt::zero()
        } else {
            int_abs.parse().ok()?
        };
        let f: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(whole * &scale + f, scale);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Floor of a rational as a machine integer.
pub fn floor_i64(v: &Q) -> i64 {
    let f = v.numer().div_floor(v.denom());
    i64::try_from(f).expect("coordinate fits in i64")
}

pub fn ceil_i64(v: &Q) -> i64 {
    -floor_i64(&-v)
}

/// Fractional part in `[0, 1)`.
pub fn frac(v: &Q) -> Q {
    v - Q::from_integer(v.numer().div_floor(v.denom()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(qi(x), qi(y))
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Self {
        Self::new(&self.x + qi(dx), &self.y + qi(dy))
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(&self.x * s, &self.y * s)
    }

    /// Representative in the unit square `[0,1)^2`.
    pub fn reduce_mod_one(&self) -> Self {
        Self::new(frac(&self.x), frac(&self.y))
    }

    pub fn lerp(&self, other: &Point, t: &Q) -> Point {
        Point::new(&self.x + (&other.x - &self.x) * t, &self.y + (&other.y - &self.y) * t)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.x), format_q(&self.y))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_q(&self.x), format_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let px = parse_q(&x).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{x}`")))?;
        let py = parse_q(&y).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{y}`")))?;
        Ok(Point::new(px, py))
    }
}

pub fn cross(a: &Point, b: &Point) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

pub fn dot(a: &Point, b: &Point) -> Q {
    &a.x * &b.x + &a.y * &b.y
}

/// Cross product of `b - a` and `c - a`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Q {
    cross(&(b - a), &(c - a))
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentHit {
    None,
    /// A single crossing strictly inside both segments, at parameters `(t, u)`.
    Proper {
        t: Q,
        u: Q,
    },
    /// A single common point at an endpoint of at least one segment.
    Touch {
        t: Q,
        u: Q,
    },
    /// Collinear with a common sub-segment or point.
    Overlap,
}

/// Intersect `p0 p1` with `q0 q1`.
pub fn intersect_segments(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> SegmentHit {
    if !boxes_overlap(p0, p1, q0, q1) {
        return SegmentHit::None;
    }
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = cross(&r, &s);
    let qp = q0 - p0;
    if denom.is_zero() {
        if !cross(&qp, &r).is_zero() {
            return SegmentHit::None;
        }
        // collinear: compare projections onto r (or s if r is degenerate)
        let axis = if r.x.is_zero() && r.y.is_zero() {
            s.clone()
        } else {
            r.clone()
        };
        if axis.x.is_zero() && axis.y.is_zero() {
            return if p0 == q0 {
                SegmentHit::Overlap
            } else {
                SegmentHit::None
            };
        }
        let proj = |p: &Point| dot(&(p - p0), &axis);
        let (a0, a1) = minmax(proj(p0), proj(p1));
        let (b0, b1) = minmax(proj(q0), proj(q1));
        if a1 < b0 || b1 < a0 {
            return SegmentHit::None;
        }
        if a1 == b0 || b1 == a0 {
            // end to end: the common point is an endpoint of both
            let zero = Q::zero();
            let one = Q::one();
            for (pt, t) in [(p0, &zero), (p1, &one)] {
                for (qt, u) in [(q0, &zero), (q1, &one)] {
                    if pt == qt {
                        return SegmentHit::Touch {
                            t: t.clone(),
                            u: u.clone(),
                        };
                    }
                }
            }
        }
        return SegmentHit::Overlap;
    }
    let t = cross(&qp, &s) / &denom;
    let u = cross(&qp, &r) / &denom;
    let zero = Q::zero();
    let one = Q::one();
    if t < zero || t > one || u < zero || u > one {
        return SegmentHit::None;
    }
    if t > zero && t < one && u > zero && u < one {
        SegmentHit::Proper { t, u }
    } else {
        SegmentHit::Touch { t, u }
    }
}

fn minmax(a: Q, b: Q) -> (Q, Q) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn boxes_overlap(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> bool {
    let (px0, px1) = minmax(p0.x.clone(), p1.x.clone());
    let (py0, py1) = minmax(p0.y.clone(), p1.y.clone());
    let (qx0, qx1) = minmax(q0.x.clone(), q1.x.clone());
    let (qy0, qy1) = minmax(q0.y.clone(), q1.y.clone());
    !(px1 < qx0 || qx1 < px0 || py1 < qy0 || qy1 < py0)
}

/// Whether `p` lies on the closed segment `a b`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let d = dot(&(p - a), &(b - a));
    d >= Q::zero() && d <= dot(&(b - a), &(b - a))
}

/// Winding number of the closed polygon `poly` around `p`; `p` must not lie on it.
pub fn winding_number(poly: &[Point], p: &Point) -> i64 {
    let n = poly.len();
    let mut w = 0;
    for k in 0..n {
        let a = &poly[k];
        let b = &poly[(k + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p).is_positive() {
                w += 1;
            }
        } else if b.y <= p.y && orient(a, b, p).is_negative() {
            w -= 1;
        }
    }
    w
}

/// Twice the signed area of a closed polygon.
pub fn doubled_area(poly: &[Point]) -> Q {
    let n = poly.len();
    (0..n).fold(Q::zero(), |acc, k| acc + cross(&poly[k], &poly[(k + 1) % n]))
}

/// Axis-aligned bounding box `(min, max)` of a nonempty point set.
pub fn bounding_box<'a, I: IntoIterator<Item = &'a Point>>(pts: I) -> (Point, Point) {
    let mut it = pts.into_iter();
    let first = it.next().expect("nonempty point set").clone();
    let (mut lo, mut hi) = (first.clone(), first);
    for p in it {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    (lo, hi)
}

/// Exact comparison of direction angles in `[0, 2π)`.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    let half = |v: &Point| -> u8 {
        if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Drop vertices where the boundary goes straight on, leaving a polygon with
/// the same interior.
fn drop_collinear(poly: &[Point]) -> Vec<Point> {
    let mut v: Vec<Point> = poly.to_vec();
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let bad = (0..n).find(|&k| orient(&v[(k + n - 1) % n], &v[k], &v[(k + 1) % n]).is_zero());
        match bad {
            Some(k) => {
                v.remove(k);
            }
            None => return v,
        }
    }
}

/// A point strictly inside a simple counter-clockwise polygon: the centroid of
/// an ear.
pub fn interior_point(poly: &[Point]) -> Option<Point> {
    let v = drop_collinear(poly);
    let n = v.len();
    if n < 3 {
        return None;
    }
    let third = q(1, 3);
    for k in 0..n {
        let a = &v[(k + n - 1) % n];
        let b = &v[k];
        let c = &v[(k + 1) % n];
        if !orient(a, b, c).is_positive() {
            continue;
        }
        let blocked = v.iter().enumerate().any(|(j, p)| {
            j != k
                && j != (k + n - 1) % n
                && j != (k + 1) % n
                && !orient(a, b, p).is_negative()
                && !orient(b, c, p).is_negative()
                && !orient(c, a, p).is_negative()
        });
        if !blocked {
            let s = &(a + b) + c;
            return Some(s.scale(&third));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
        assert_eq!(format_q(&q(2, 4)), "1/2");
        assert_eq!(format_q(&qi(-3)), "-3");
        assert_eq!(frac(&q(-1, 4)), q(3, 4));
    }

    #[test]
    fn segment_cases() {
        assert!(matches!(
            intersect_segments(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)),
            SegmentHit::Proper { .. }
        ));
        assert!(matches!(
            intersect_segments(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 5)),
            SegmentHit::Touch { .. }
        ));
        assert_eq!(
            intersect_segments(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)),
            SegmentHit::Overlap
        );
        assert_eq!(
            intersect_segments(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)),
            SegmentHit::None
        );
        assert_eq!(
            intersect_segments(&p(0, 0), &p(1, 1), &p(0, 1), &p(1, 2)),
            SegmentHit::None
        );
    }

    #[test]
    fn winding_and_area() {
        let sq = vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)];
        let inside = Point::new(q(1, 2), q(1, 2));
        assert_eq!(winding_number(&sq, &inside), 1);
        let rev: Vec<_> = sq.iter().rev().cloned().collect();
        assert_eq!(winding_number(&rev, &inside), -1);
        assert_eq!(winding_number(&sq, &p(3, 1)), 0);
        assert_eq!(doubled_area(&sq), qi(8));
    }

    #[test]
    fn ear_centroid_inside_concave_polygon() {
        // an L shape with a collinear vertex on its bottom edge
        let poly = vec![p(0, 0), p(1, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)];
        let s = interior_point(&poly).unwrap();
        assert_eq!(winding_number(&poly, &s), 1);
    }

    #[test]
    fn angles_sort_counter_clockwise() {
        let mut dirs = vec![p(0, -1), p(-1, 0), p(1, 0), p(0, 1), p(1, 1)];
        dirs.sort_by(angle_cmp);
        assert_eq!(dirs, vec![p(1, 0), p(1, 1), p(0, 1), p(-1, 0), p(0, -1)]);
    }
}
