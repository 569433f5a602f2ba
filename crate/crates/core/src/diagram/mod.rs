//! Doubly pointed genus-one Heegaard diagrams on the flat torus `R^2 / Z^2`.
//!
//! Each attaching curve is a piecewise-linear loop given by its vertices in the
//! plane and the integer translation that closes it up on the torus. All
//! coordinates are exact rationals.

pub mod geometry;

use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry::{Named, Registry};
use geometry::{bounding_box, ceil_i64, floor_i64, intersect_segments, on_segment, SegmentHit};
pub use geometry::{Point, Q};

/// A point of the torus, stored by its representative in `[0,1)^2`.
pub type RationalPoint = Point;

/// A closed piecewise-linear curve on the torus, lifted to the plane.
///
/// The lifted curve visits `vertices[0], ..., vertices[n-1]` and then
/// `vertices[0] + period`, repeating with period `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLLoop {
    pub vertices: Vec<Point>,
    pub period: (i64, i64),
}

impl PLLoop {
    pub fn new(vertices: Vec<Point>, period: (i64, i64)) -> Self {
        Self { vertices, period }
    }

    /// The `k`-th vertex of the infinite lift, for any integer `k`.
    pub fn vertex(&self, k: i64) -> Point {
        let n = self.vertices.len() as i64;
        let (m, r) = k.div_mod_floor(&n);
        self.vertices[r as usize].translate(m * self.period.0, m * self.period.1)
    }

    /// Segments of one fundamental period: `vertex(k) -> vertex(k+1)`.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        (0..self.vertices.len() as i64)
            .map(|k| (self.vertex(k), self.vertex(k + 1)))
            .collect()
    }

    /// Vertices of the lift from period `-periods` up to and including the
    /// first vertex of period `periods`.
    pub fn lift(&self, periods: i64) -> Vec<Point> {
        let n = self.vertices.len() as i64;
        (-periods * n..=periods * n).map(|k| self.vertex(k)).collect()
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Self {
        Self::new(self.vertices.iter().map(|v| v.translate(dx, dy)).collect(), self.period)
    }

    fn reflect(&self) -> Self {
        Self::new(
            self.vertices.iter().map(|v| Point::new(v.x.clone(), -&v.y)).collect(),
            (self.period.0, -self.period.1),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub alpha: PLLoop,
    pub beta: PLLoop,
    pub w: RationalPoint,
    pub z: RationalPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationCode {
    SelfIntersecting,
    NotTransverse,
    BasepointOnCurve,
    IntersectionNumberNotUnit,
    NullHomotopicCurve,
    CoincidentBasepoints,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    /// The offending elements, e.g. `alpha[2] x alpha[0]+(1,0)`.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown diagram `{0}`")]
    UnknownDiagram(String),
}

/// One transverse crossing of the two curves on the torus: segment
/// `alpha_segment` of alpha meets segment `beta_segment` of beta translated by
/// `shift`, at parameters `t` (along alpha) and `u` (along beta).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusCrossing {
    pub alpha_segment: usize,
    pub beta_segment: usize,
    pub shift: (i64, i64),
    pub t: Q,
    pub u: Q,
    pub point: Point,
}

/// Integer translates `(a, b)` for which `moving + (a, b)` can meet `fixed`.
fn shifts_between(fixed: (&Point, &Point), moving: (&Point, &Point)) -> Vec<(i64, i64)> {
    let (flo, fhi) = bounding_box([fixed.0, fixed.1]);
    let (mlo, mhi) = bounding_box([moving.0, moving.1]);
    let ax = floor_i64(&(&flo.x - &mhi.x));
    let bx = ceil_i64(&(&fhi.x - &mlo.x));
    let ay = floor_i64(&(&flo.y - &mhi.y));
    let by = ceil_i64(&(&fhi.y - &mlo.y));
    let mut out = Vec::new();
    for a in ax..=bx {
        for b in ay..=by {
            out.push((a, b));
        }
    }
    out
}

fn shifted(seg: &(Point, Point), (a, b): (i64, i64)) -> (Point, Point) {
    (seg.0.translate(a, b), seg.1.translate(a, b))
}

fn fmt_shift((a, b): (i64, i64)) -> String {
    if (a, b) == (0, 0) {
        String::new()
    } else {
        format!("+({a},{b})")
    }
}

fn is_primitive((p, q): (i64, i64)) -> bool {
    p.gcd(&q) == 1
}

fn loop_violations(name: &str, c: &PLLoop, out: &mut Vec<Violation>) {
    if c.vertices.is_empty() {
        out.push(Violation {
            code: ViolationCode::NullHomotopicCurve,
            detail: format!("{name} has no vertices"),
        });
        return;
    }
    if c.period == (0, 0) {
        out.push(Violation {
            code: ViolationCode::NullHomotopicCurve,
            detail: format!("{name} has period (0,0)"),
        });
        return;
    }
    if !is_primitive(c.period) {
        out.push(Violation {
            code: ViolationCode::SelfIntersecting,
            detail: format!("{name} period ({},{}) is not primitive", c.period.0, c.period.1),
        });
    }
    let segs = c.segments();
    let n = segs.len();
    for (k, s) in segs.iter().enumerate() {
        if s.0 == s.1 {
            out.push(Violation {
                code: ViolationCode::SelfIntersecting,
                detail: format!("{name}[{k}] has repeated vertices"),
            });
            return;
        }
    }
    for i in 0..n {
        for j in i..n {
            for sh in shifts_between((&segs[i].0, &segs[i].1), (&segs[j].0, &segs[j].1)) {
                if i == j && sh == (0, 0) {
                    continue;
                }
                let other = shifted(&segs[j], sh);
                let ok = match intersect_segments(&segs[i].0, &segs[i].1, &other.0, &other.1) {
                    SegmentHit::None => true,
                    SegmentHit::Touch { .. } => {
                        (segs[i].1 == other.0 && (i + 1) % n == j) || (segs[i].0 == other.1 && (j + 1) % n == i)
                    }
                    _ => false,
                };
                if !ok {
                    out.push(Violation {
                        code: ViolationCode::SelfIntersecting,
                        detail: format!("{name}[{i}] x {name}[{j}]{}", fmt_shift(sh)),
                    });
                    return;
                }
            }
        }
    }
}

impl Diagram {
    /// All transverse crossings of alpha and beta on the torus, each listed once.
    pub fn torus_crossings(&self) -> Vec<TorusCrossing> {
        let asegs = self.alpha.segments();
        let bsegs = self.beta.segments();
        let mut out = Vec::new();
        for (i, a) in asegs.iter().enumerate() {
            for (j, b) in bsegs.iter().enumerate() {
                for sh in shifts_between((&a.0, &a.1), (&b.0, &b.1)) {
                    let bs = shifted(b, sh);
                    if let SegmentHit::Proper { t, u } = intersect_segments(&a.0, &a.1, &bs.0, &bs.1) {
                        let point = a.0.lerp(&a.1, &t);
                        out.push(TorusCrossing {
                            alpha_segment: i,
                            beta_segment: j,
                            shift: sh,
                            t,
                            u,
                            point,
                        });
                    }
                }
            }
        }
        out
    }

    /// Algebraic intersection number of the two homology classes.
    pub fn intersection_number(&self) -> i64 {
        let (p, q) = self.alpha.period;
        let (r, s) = self.beta.period;
        p * s - q * r
    }

    /// Mirror image: negate every `y` coordinate and swap the basepoints.
    pub fn reflect(&self) -> Diagram {
        let flip = |p: &Point| Point::new(p.x.clone(), -&p.y).reduce_mod_one();
        Diagram {
            alpha: self.alpha.reflect(),
            beta: self.beta.reflect(),
            w: flip(&self.z),
            z: flip(&self.w),
        }
    }

    /// JSON in the diagram file format, one point per line.
    pub fn to_json(&self) -> String {
        let point = |p: &Point| serde_json::to_string(p).expect("point serializes");
        let points = |c: &PLLoop| {
            let rows: Vec<String> = c.vertices.iter().map(|p| format!("    {}", point(p))).collect();
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        format!(
            "{{\n  \"alpha\": {},\n  \"alpha_period\": [{}, {}],\n  \"beta\": {},\n  \"beta_period\": [{}, {}],\n  \"w\": {},\n  \"z\": {}\n}}\n",
            points(&self.alpha),
            self.alpha.period.0,
            self.alpha.period.1,
            points(&self.beta),
            self.beta.period.0,
            self.beta.period.1,
            point(&self.w),
            point(&self.z)
        )
    }
}

/// Every violated diagram invariant; empty iff the diagram is valid.
pub fn validate(d: &Diagram) -> Vec<Violation> {
    let mut out = Vec::new();
    loop_violations("alpha", &d.alpha, &mut out);
    loop_violations("beta", &d.beta, &mut out);
    let null = out.iter().any(|v| v.code == ViolationCode::NullHomotopicCurve);
    if !null {
        let n = d.intersection_number();
        if n.abs() != 1 {
            out.push(Violation {
                code: ViolationCode::IntersectionNumberNotUnit,
                detail: format!("alpha . beta = {n}"),
            });
        }
    }
    if d.alpha.vertices.is_empty() || d.beta.vertices.is_empty() {
        return out;
    }
    let asegs = d.alpha.segments();
    let bsegs = d.beta.segments();
    'outer: for (i, a) in asegs.iter().enumerate() {
        for (j, b) in bsegs.iter().enumerate() {
            for sh in shifts_between((&a.0, &a.1), (&b.0, &b.1)) {
                let bs = shifted(b, sh);
                match intersect_segments(&a.0, &a.1, &bs.0, &bs.1) {
                    SegmentHit::None | SegmentHit::Proper { .. } => {}
                    _ => {
                        out.push(Violation {
                            code: ViolationCode::NotTransverse,
                            detail: format!("alpha[{i}] x beta[{j}]{}", fmt_shift(sh)),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    for (bp_name, bp) in [("w", &d.w), ("z", &d.z)] {
        for (cname, segs) in [("alpha", &asegs), ("beta", &bsegs)] {
            for (k, s) in segs.iter().enumerate() {
                let hit = shifts_between((bp, bp), (&s.0, &s.1)).into_iter().find(|&sh| {
                    let t = shifted(s, sh);
                    on_segment(bp, &t.0, &t.1)
                });
                if let Some(sh) = hit {
                    out.push(Violation {
                        code: ViolationCode::BasepointOnCurve,
                        detail: format!("{bp_name} on {cname}[{k}]{}", fmt_shift(sh)),
                    });
                }
            }
        }
    }
    if d.w.reduce_mod_one() == d.z.reduce_mod_one() {
        out.push(Violation {
            code: ViolationCode::CoincidentBasepoints,
            detail: "w = z".into(),
        });
    }
    out
}

/// On-disk form of a diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub alpha: Vec<Point>,
    pub alpha_period: [i64; 2],
    pub beta: Vec<Point>,
    pub beta_period: [i64; 2],
    pub w: Point,
    pub z: Point,
}

impl From<&Diagram> for DiagramFile {
    fn from(d: &Diagram) -> Self {
        Self {
            alpha: d.alpha.vertices.clone(),
            alpha_period: [d.alpha.period.0, d.alpha.period.1],
            beta: d.beta.vertices.clone(),
            beta_period: [d.beta.period.0, d.beta.period.1],
            w: d.w.clone(),
            z: d.z.clone(),
        }
    }
}

impl From<DiagramFile> for Diagram {
    fn from(f: DiagramFile) -> Self {
        Diagram {
            alpha: PLLoop::new(f.alpha, (f.alpha_period[0], f.alpha_period[1])),
            beta: PLLoop::new(f.beta, (f.beta_period[0], f.beta_period[1])),
            w: f.w.reduce_mod_one(),
            z: f.z.reduce_mod_one(),
        }
    }
}

/// Parse a JSON diagram and validate it.
pub fn parse_diagram(text: &[u8]) -> Result<Diagram, DiagramError> {
    let text = std::str::from_utf8(text).map_err(|e| DiagramError::Parse(e.to_string()))?;
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| DiagramError::Parse(e.to_string()))?;
    let d = Diagram::from(file);
    let violations = validate(&d);
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(DiagramError::Invalid(violations))
    }
}

/// A diagram shipped with the library.
pub struct BuiltinDiagram {
    name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
}

impl Named for BuiltinDiagram {
    fn name(&self) -> &'static str {
        self.name
    }
}

impl BuiltinDiagram {
    pub fn diagram(&self) -> Result<Diagram, DiagramError> {
        parse_diagram(self.source.as_bytes())
    }
}

pub fn builtins() -> &'static Registry<BuiltinDiagram> {
    static REG: OnceLock<Registry<BuiltinDiagram>> = OnceLock::new();
    REG.get_or_init(|| {
        let entries = [
            (
                "unknot",
                "meridian against longitude",
                include_str!("../../diagrams/unknot.json"),
            ),
            (
                "trefoil_left",
                "left-handed trefoil",
                include_str!("../../diagrams/trefoil_left.json"),
            ),
            (
                "trefoil_right",
                "right-handed trefoil",
                include_str!("../../diagrams/trefoil_right.json"),
            ),
            (
                "figure_eight",
                "figure-eight knot",
                include_str!("../../diagrams/figure_eight.json"),
            ),
            (
                "knot_9_42",
                "the knot 9_42",
                include_str!("../../diagrams/knot_9_42.json"),
            ),
        ];
        let mut reg = Registry::new();
        for (name, description, source) in entries {
            reg.register(Box::new(BuiltinDiagram {
                name,
                description,
                source,
            }));
        }
        reg
    })
}

/// Look up and parse a built-in diagram.
pub fn builtin(name: &str) -> Result<Diagram, DiagramError> {
    builtins()
        .get(name)
        .ok_or_else(|| DiagramError::UnknownDiagram(name.to_string()))?
        .diagram()
}

#[cfg(test)]
mod tests {
    use super::geometry::q;
    use super::*;

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point {
        Point::new(q(x.0, x.1), q(y.0, y.1))
    }

    fn grid() -> Diagram {
        Diagram {
            alpha: PLLoop::new(vec![pt((1, 2), (0, 1))], (0, 1)),
            beta: PLLoop::new(vec![pt((0, 1), (1, 2))], (1, 0)),
            w: pt((1, 4), (1, 4)),
            z: pt((3, 4), (3, 4)),
        }
    }

    #[test]
    fn grid_is_valid_with_one_crossing() {
        let d = grid();
        assert_eq!(validate(&d), vec![]);
        assert_eq!(d.torus_crossings().len(), 1);
        assert_eq!(d.intersection_number(), -1);
    }

    #[test]
    fn coincident_basepoints_rejected() {
        let mut d = grid();
        d.z = d.w.clone();
        let codes: Vec<_> = validate(&d).into_iter().map(|v| v.code).collect();
        assert_eq!(codes, vec![ViolationCode::CoincidentBasepoints]);
    }

    #[test]
    fn parallel_curves_rejected() {
        let mut d = grid();
        d.alpha = PLLoop::new(vec![pt((0, 1), (1, 4))], (1, 0));
        let codes: Vec<_> = validate(&d).into_iter().map(|v| v.code).collect();
        assert!(codes.contains(&ViolationCode::IntersectionNumberNotUnit));
    }

    #[test]
    fn self_crossing_rejected() {
        let mut d = grid();
        // a vertical curve with a zig-zag that crosses itself
        d.alpha = PLLoop::new(
            vec![
                pt((1, 2), (0, 1)),
                pt((7, 10), (3, 10)),
                pt((3, 10), (3, 10)),
                pt((1, 2), (0, 1)),
            ],
            (0, 1),
        );
        let codes: Vec<_> = validate(&d).into_iter().map(|v| v.code).collect();
        assert!(codes.contains(&ViolationCode::SelfIntersecting));
        d.alpha = PLLoop::new(
            vec![
                pt((1, 2), (0, 1)),
                pt((7, 10), (4, 10)),
                pt((3, 10), (2, 10)),
                pt((6, 10), (1, 10)),
            ],
            (0, 1),
        );
        let codes: Vec<_> = validate(&d).into_iter().map(|v| v.code).collect();
        assert!(codes.contains(&ViolationCode::SelfIntersecting));
    }

    #[test]
    fn basepoint_on_curve_rejected() {
        let mut d = grid();
        d.w = pt((1, 2), (1, 3));
        let codes: Vec<_> = validate(&d).into_iter().map(|v| v.code).collect();
        assert_eq!(codes, vec![ViolationCode::BasepointOnCurve]);
    }

    #[test]
    fn vertex_on_other_curve_rejected() {
        let mut d = grid();
        d.alpha = PLLoop::new(vec![pt((1, 2), (0, 1)), pt((1, 2), (1, 2))], (0, 1));
        let codes: Vec<_> = validate(&d).into_iter().map(|v| v.code).collect();
        assert!(codes.contains(&ViolationCode::NotTransverse));
    }

    #[test]
    fn non_primitive_and_null_periods() {
        let mut d = grid();
        d.alpha.period = (0, 2);
        assert!(validate(&d).iter().any(|v| v.code == ViolationCode::SelfIntersecting));
        d.alpha.period = (0, 0);
        assert!(validate(&d).iter().any(|v| v.code == ViolationCode::NullHomotopicCurve));
    }

    #[test]
    fn json_roundtrip_and_parse_errors() {
        let d = grid();
        let back = parse_diagram(d.to_json().as_bytes()).unwrap();
        assert_eq!(back, d);
        assert!(matches!(parse_diagram(b"{"), Err(DiagramError::Parse(_))));
        assert!(matches!(parse_diagram(&[0xff, 0xfe]), Err(DiagramError::Parse(_))));
    }

    #[test]
    fn reflection_is_an_involution() {
        let d = grid();
        assert_eq!(d.reflect().reflect(), d);
        assert_eq!(validate(&d.reflect()), vec![]);
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(builtin("nope"), Err(DiagramError::UnknownDiagram("nope".into())));
    }
}
