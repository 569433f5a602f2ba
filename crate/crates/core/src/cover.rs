//! The two attaching curves lifted to the universal cover of the torus.
//!
//! Because `alpha . beta = ±1`, one lift of each curve meets the other in
//! exactly as many points as the curves meet on the torus, so every generator
//! appears once. Bounded complementary regions of the two lifts are the faces
//! of a planar graph whose vertices are the intersection points; a Whitney disk
//! between two points is the region bounded by the alpha arc from one to the
//! other followed by the beta arc back, weighted by winding number.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::diagram::geometry::{
    angle_cmp, bounding_box, ceil_i64, doubled_area, floor_i64, interior_point, intersect_segments, winding_number,
    Point, SegmentHit, Q,
};
use crate::diagram::{validate, Diagram, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid diagram: {0:?}")]
    InvalidDiagram(Vec<Violation>),
    #[error("window too small: found {found} of {expected} intersection points")]
    WindowTooSmall { found: usize, expected: usize },
    #[error("no stable window after {doublings} doublings")]
    StabilizationLimitExceeded { doublings: u32 },
    #[error("the chosen lifts meet in {found} points but the curves meet in {expected} on the torus")]
    DuplicateLift { found: usize, expected: usize },
    #[error("Maslov index of the class {from} -> {to} is not an integer")]
    NonIntegralMaslov { from: usize, to: usize },
    #[error("degenerate arrangement: {0}")]
    Degenerate(String),
}

/// A point of `alpha~ ∩ beta~`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionPoint {
    pub position: Point,
    /// Image on the torus, in `[0,1)^2`.
    pub torus: Point,
    /// Sign of the crossing (alpha direction, beta direction).
    pub sign: i8,
    /// Position in the order along beta~ (the order along alpha~ is the index).
    pub beta_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Counter-clockwise boundary polygon.
    pub boundary: Vec<Point>,
    pub sample: Point,
    /// Intersection points on the boundary, in boundary order.
    pub corners: Vec<usize>,
    pub w_count: i64,
    pub z_count: i64,
}

/// Intersection points and bounded faces of the two lifts.
#[derive(Debug, Clone, Serialize)]
pub struct Arrangement {
    /// alpha~ from its first to its last intersection point, with every
    /// intersection point inserted as a vertex.
    pub alpha_lift: Vec<Point>,
    pub beta_lift: Vec<Point>,
    pub alpha_period: (i64, i64),
    pub beta_period: (i64, i64),
    /// Points in the order met along alpha~.
    pub points: Vec<IntersectionPoint>,
    pub faces: Vec<Face>,
    pub window: (Point, Point),
    pub window_scale: u32,
    #[serde(skip)]
    alpha_vertex: Vec<usize>,
    #[serde(skip)]
    beta_vertex: Vec<usize>,
    /// Bounded face in each quadrant around each point (counter-clockwise).
    #[serde(skip)]
    quadrants: Vec<[Option<usize>; 4]>,
    #[serde(skip)]
    w: Point,
    #[serde(skip)]
    z: Point,
}

/// A Whitney disk class between two intersection points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskClass {
    pub from: usize,
    pub to: usize,
    /// Multiplicity of each bounded face.
    pub multiplicities: Vec<i64>,
    pub n_w: i64,
    pub n_z: i64,
    pub maslov: i64,
}

impl DiskClass {
    pub fn is_nonnegative(&self) -> bool {
        self.multiplicities.iter().all(|&m| m >= 0)
    }
}

struct RawCrossing {
    alpha_seg: usize,
    t: Q,
    beta_seg: usize,
    u: Q,
    position: Point,
    sign: i8,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Curve {
    Alpha,
    Beta,
}

struct Edge {
    from: usize,
    to: usize,
    path: Vec<Point>,
}

impl Arrangement {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Closed loop: alpha arc `from -> to`, then beta arc `to -> from`.
    fn boundary_loop(&self, from: usize, to: usize) -> Vec<Point> {
        let arc = |line: &[Point], a: usize, b: usize| -> Vec<Point> {
            if a <= b {
                line[a..=b].to_vec()
            } else {
                line[b..=a].iter().rev().cloned().collect()
            }
        };
        let mut out = arc(&self.alpha_lift, self.alpha_vertex[from], self.alpha_vertex[to]);
        let back = arc(&self.beta_lift, self.beta_vertex[to], self.beta_vertex[from]);
        out.pop();
        out.extend(back);
        out.pop();
        out
    }

    /// Average of the four face multiplicities around point `p`.
    pub fn corner_multiplicity(&self, class: &DiskClass, p: usize) -> BigRational {
        let sum: i64 = self.quadrants[p]
            .iter()
            .map(|f| f.map(|f| class.multiplicities[f]).unwrap_or(0))
            .sum();
        BigRational::new(sum.into(), 4.into())
    }

    /// `2 (corner at from + corner at to)`.
    pub fn maslov_index(&self, class: &DiskClass) -> Result<i64, CoverError> {
        let total = (self.corner_multiplicity(class, class.from) + self.corner_multiplicity(class, class.to))
            * Q::from_integer(2.into());
        if !total.is_integer() {
            return Err(CoverError::NonIntegralMaslov {
                from: class.from,
                to: class.to,
            });
        }
        Ok(total.to_integer().to_i64().expect("small Maslov index"))
    }

    /// The class from `from` to `to` with multiplicities, basepoint counts and
    /// Maslov index.
    pub fn disk_class(&self, from: usize, to: usize) -> Result<DiskClass, CoverError> {
        let lp = self.boundary_loop(from, to);
        let multiplicities: Vec<i64> = self
            .faces
            .iter()
            .map(|f| {
                if lp.len() < 3 {
                    0
                } else {
                    winding_number(&lp, &f.sample)
                }
            })
            .collect();
        let n_w = multiplicities.iter().zip(&self.faces).map(|(m, f)| m * f.w_count).sum();
        let n_z = multiplicities.iter().zip(&self.faces).map(|(m, f)| m * f.z_count).sum();
        let mut class = DiskClass {
            from,
            to,
            multiplicities,
            n_w,
            n_z,
            maslov: 0,
        };
        class.maslov = self.maslov_index(&class)?;
        Ok(class)
    }

    /// `(n_w, n_z)` of a class by summing winding numbers over basepoint
    /// lattices directly, bypassing the face decomposition.
    pub fn direct_basepoint_counts(&self, from: usize, to: usize) -> (i64, i64) {
        let lp = self.boundary_loop(from, to);
        if lp.len() < 3 {
            return (0, 0);
        }
        let count = |bp: &Point| lattice_translates(bp, &lp).iter().map(|p| winding_number(&lp, p)).sum();
        (count(&self.w), count(&self.z))
    }

    /// Every ordered pair whose class has Maslov index one and nonnegative
    /// multiplicities.
    pub fn positive_mu1_classes(&self) -> Result<Vec<DiskClass>, CoverError> {
        let mut out = Vec::new();
        for from in 0..self.points.len() {
            for to in 0..self.points.len() {
                if from == to {
                    continue;
                }
                let c = self.disk_class(from, to)?;
                if c.maslov == 1 && c.is_nonnegative() {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("arrangement serializes")
    }
}

/// Translates of `bp` by integer vectors that land in the bounding box of `poly`.
fn lattice_translates(bp: &Point, poly: &[Point]) -> Vec<Point> {
    let (lo, hi) = bounding_box(poly);
    let mut out = Vec::new();
    for a in floor_i64(&(&lo.x - &bp.x))..=ceil_i64(&(&hi.x - &bp.x)) {
        for b in floor_i64(&(&lo.y - &bp.y))..=ceil_i64(&(&hi.y - &bp.y)) {
            out.push(bp.translate(a, b));
        }
    }
    out
}

fn sign_of(v: &Q) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Insert intersection points into a polyline and cut it to the span between
/// the first and last of them. Returns the pruned polyline and the vertex
/// index of each point.
fn prune(line: &[Point], hits: &[(usize, usize, Q, Point)]) -> (Vec<Point>, Vec<usize>) {
    // hits: (point id, segment, parameter, position), sorted along the line
    let mut out = Vec::new();
    let mut index = vec![0; hits.len()];
    for (k, (id, seg, _, pos)) in hits.iter().enumerate() {
        if k > 0 {
            let prev_seg = hits[k - 1].1;
            for v in &line[prev_seg + 1..=*seg] {
                if out.last() != Some(v) {
                    out.push(v.clone());
                }
            }
        }
        index[*id] = out.len();
        out.push(pos.clone());
    }
    (out, index)
}

/// Lift the diagram with each curve truncated to `window_scale` periods on
/// either side of its base vertex.
pub fn lift(d: &Diagram, window_scale: u32) -> Result<Arrangement, CoverError> {
    let violations = validate(d);
    if !violations.is_empty() {
        return Err(CoverError::InvalidDiagram(violations));
    }
    let crossings = d.torus_crossings();
    let expected = crossings.len();
    // alpha through the crossing closest to the origin on beta~
    let base = crossings
        .iter()
        .min_by(|a, b| {
            let pa = a.point.translate(-a.shift.0, -a.shift.1);
            let pb = b.point.translate(-b.shift.0, -b.shift.1);
            let na = &pa.x * &pa.x + &pa.y * &pa.y;
            let nb = &pb.x * &pb.x + &pb.y * &pb.y;
            na.cmp(&nb)
        })
        .ok_or_else(|| CoverError::Degenerate("curves do not meet".into()))?;
    let alpha = d.alpha.translate(-base.shift.0, -base.shift.1);
    let k = i64::from(window_scale);
    let aline = alpha.lift(k);
    let bline = d.beta.lift(k);

    let mut raw = Vec::new();
    for i in 0..aline.len() - 1 {
        for j in 0..bline.len() - 1 {
            match intersect_segments(&aline[i], &aline[i + 1], &bline[j], &bline[j + 1]) {
                SegmentHit::None => {}
                SegmentHit::Proper { t, u } => {
                    let position = aline[i].lerp(&aline[i + 1], &t);
                    let da = &aline[i + 1] - &aline[i];
                    let db = &bline[j + 1] - &bline[j];
                    let sign = sign_of(&crate::diagram::geometry::cross(&da, &db));
                    raw.push(RawCrossing {
                        alpha_seg: i,
                        t,
                        beta_seg: j,
                        u,
                        position,
                        sign,
                    });
                }
                _ => return Err(CoverError::Degenerate("non-transverse lift".into())),
            }
        }
    }
    if raw.len() > expected {
        return Err(CoverError::DuplicateLift {
            found: raw.len(),
            expected,
        });
    }
    if raw.len() < expected {
        return Err(CoverError::WindowTooSmall {
            found: raw.len(),
            expected,
        });
    }
    raw.sort_by(|a, b| a.alpha_seg.cmp(&b.alpha_seg).then_with(|| a.t.cmp(&b.t)));
    let n = raw.len();
    let mut by_beta: Vec<usize> = (0..n).collect();
    by_beta.sort_by(|&a, &b| {
        raw[a]
            .beta_seg
            .cmp(&raw[b].beta_seg)
            .then_with(|| raw[a].u.cmp(&raw[b].u))
    });
    let mut beta_order = vec![0; n];
    for (ord, &p) in by_beta.iter().enumerate() {
        beta_order[p] = ord;
    }

    let ahits: Vec<_> = raw
        .iter()
        .enumerate()
        .map(|(p, c)| (p, c.alpha_seg, c.t.clone(), c.position.clone()))
        .collect();
    let bhits: Vec<_> = by_beta
        .iter()
        .map(|&p| (p, raw[p].beta_seg, raw[p].u.clone(), raw[p].position.clone()))
        .collect();
    let (alpha_lift, alpha_vertex) = prune(&aline, &ahits);
    let (beta_lift, beta_vertex) = prune(&bline, &bhits);

    let points: Vec<IntersectionPoint> = raw
        .iter()
        .enumerate()
        .map(|(p, c)| IntersectionPoint {
            position: c.position.clone(),
            torus: c.position.reduce_mod_one(),
            sign: c.sign,
            beta_order: beta_order[p],
        })
        .collect();

    // directions at each point: alpha forward/back, beta forward/back
    let directions: Vec<[Point; 4]> = raw
        .iter()
        .map(|c| {
            let da = &aline[c.alpha_seg + 1] - &aline[c.alpha_seg];
            let db = &bline[c.beta_seg + 1] - &bline[c.beta_seg];
            let na = Point::new(-&da.x, -&da.y);
            let nb = Point::new(-&db.x, -&db.y);
            [da, na, db, nb]
        })
        .collect();

    let mut edges: Vec<Edge> = Vec::new();
    // half-edge slot at each point: [alpha fwd, alpha back, beta fwd, beta back]
    let mut slots: Vec<[Option<usize>; 4]> = vec![[None; 4]; n];
    for (curve, line, vertex, order) in [
        (Curve::Alpha, &alpha_lift, &alpha_vertex, (0..n).collect::<Vec<_>>()),
        (Curve::Beta, &beta_lift, &beta_vertex, by_beta.clone()),
    ] {
        let base_slot = if curve == Curve::Alpha { 0 } else { 2 };
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            let e = edges.len();
            edges.push(Edge {
                from: a,
                to: b,
                path: line[vertex[a]..=vertex[b]].to_vec(),
            });
            slots[a][base_slot] = Some(2 * e);
            slots[b][base_slot + 1] = Some(2 * e + 1);
        }
    }
    let he_count = 2 * edges.len();
    let he_source = |h: usize| {
        if h.is_multiple_of(2) {
            edges[h / 2].from
        } else {
            edges[h / 2].to
        }
    };
    let he_target = |h: usize| {
        if h.is_multiple_of(2) {
            edges[h / 2].to
        } else {
            edges[h / 2].from
        }
    };
    let he_path = |h: usize| -> Vec<Point> {
        let p = &edges[h / 2].path;
        if h.is_multiple_of(2) {
            p.clone()
        } else {
            p.iter().rev().cloned().collect()
        }
    };

    // outgoing half-edges at each point in counter-clockwise order
    let mut around: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (slot, half-edge)
    for p in 0..n {
        let mut v: Vec<(usize, usize)> = (0..4).filter_map(|s| slots[p][s].map(|h| (s, h))).collect();
        v.sort_by(|a, b| angle_cmp(&directions[p][a.0], &directions[p][b.0]));
        around[p] = v;
    }
    let next = |h: usize| -> usize {
        let v = he_target(h);
        let twin = h ^ 1;
        let ring = &around[v];
        let pos = ring
            .iter()
            .position(|&(_, g)| g == twin)
            .expect("twin is outgoing at its source");
        ring[(pos + ring.len() - 1) % ring.len()].1
    };

    let mut left_face: Vec<Option<usize>> = vec![None; he_count];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; he_count];
    for start in 0..he_count {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cyc.push(h);
            h = next(h);
        }
        cycles.push(cyc);
    }
    let mut faces = Vec::new();
    let mut outer = 0;
    for cyc in cycles {
        let mut boundary = Vec::new();
        for &h in &cyc {
            let mut p = he_path(h);
            p.pop();
            boundary.extend(p);
        }
        let area = doubled_area(&boundary);
        if !area.is_positive() {
            outer += 1;
            continue;
        }
        let sample = interior_point(&boundary).ok_or_else(|| CoverError::Degenerate("face without an ear".into()))?;
        let id = faces.len();
        for &h in &cyc {
            left_face[h] = Some(id);
        }
        let corners = cyc.iter().map(|&h| he_source(h)).collect();
        let count = |bp: &Point| {
            lattice_translates(bp, &boundary)
                .iter()
                .filter(|p| winding_number(&boundary, p) != 0)
                .count() as i64
        };
        let w_count = count(&d.w);
        let z_count = count(&d.z);
        faces.push(Face {
            boundary,
            sample,
            corners,
            w_count,
            z_count,
        });
    }
    if n > 1 && (outer != 1 || faces.len() != n - 1) {
        return Err(CoverError::Degenerate(format!(
            "{} bounded and {outer} unbounded faces for {n} points",
            faces.len()
        )));
    }

    let quadrants = (0..n)
        .map(|p| {
            let mut dirs: Vec<usize> = (0..4).collect();
            dirs.sort_by(|&a, &b| angle_cmp(&directions[p][a], &directions[p][b]));
            let mut q = [None; 4];
            for (k, &s) in dirs.iter().enumerate() {
                q[k] = slots[p][s].and_then(|h| left_face[h]);
            }
            q
        })
        .collect();

    let window = bounding_box(aline.iter().chain(bline.iter()));
    Ok(Arrangement {
        alpha_lift,
        beta_lift,
        alpha_period: alpha.period,
        beta_period: d.beta.period,
        points,
        faces,
        window,
        window_scale,
        alpha_vertex,
        beta_vertex,
        quadrants,
        w: d.w.clone(),
        z: d.z.clone(),
    })
}

/// Signature used to compare consecutive window scales.
fn signature(a: &Arrangement) -> Result<(usize, Vec<(usize, usize, i64, i64, i64)>), CoverError> {
    let classes = a.positive_mu1_classes()?;
    Ok((
        a.len(),
        classes.iter().map(|c| (c.from, c.to, c.n_w, c.n_z, c.maslov)).collect(),
    ))
}

pub const DEFAULT_MAX_DOUBLINGS: u32 = 8;

/// Double the window until two consecutive scales agree on the points and the
/// positive Maslov-one classes.
pub fn stabilize(d: &Diagram) -> Result<Arrangement, CoverError> {
    stabilize_with_limit(d, DEFAULT_MAX_DOUBLINGS)
}

pub fn stabilize_with_limit(d: &Diagram, max_doublings: u32) -> Result<Arrangement, CoverError> {
    let mut previous: Option<(usize, Vec<(usize, usize, i64, i64, i64)>)> = None;
    let mut scale = 1u32;
    for _ in 0..=max_doublings {
        match lift(d, scale) {
            Ok(a) => {
                let sig = signature(&a)?;
                if previous.as_ref() == Some(&sig) {
                    return Ok(a);
                }
                previous = Some(sig);
            }
            Err(CoverError::WindowTooSmall { .. }) => previous = None,
            Err(e) => return Err(e),
        }
        scale *= 2;
    }
    Err(CoverError::StabilizationLimitExceeded {
        doublings: max_doublings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::builtin;

    fn arrangement(name: &str) -> Arrangement {
        stabilize(&builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn unknot_has_one_point_and_no_faces() {
        let a = arrangement("unknot");
        assert_eq!(a.len(), 1);
        assert!(a.faces.is_empty());
        assert!(a.positive_mu1_classes().unwrap().is_empty());
    }

    #[test]
    fn trefoil_has_two_positive_bigons() {
        let a = arrangement("trefoil_right");
        assert_eq!(a.len(), 3);
        let classes = a.positive_mu1_classes().unwrap();
        assert_eq!(classes.len(), 2);
        let mut counts: Vec<(i64, i64)> = classes.iter().map(|c| (c.n_w, c.n_z)).collect();
        counts.sort();
        assert_eq!(counts, [(0, 1), (1, 0)]);
    }

    #[test]
    fn face_counts_agree_with_direct_counts() {
        for name in ["trefoil_right", "figure_eight", "knot_9_42"] {
            let a = arrangement(name);
            for from in 0..a.len() {
                for to in 0..a.len() {
                    if from != to {
                        let c = a.disk_class(from, to).unwrap();
                        assert_eq!(
                            (c.n_w, c.n_z),
                            a.direct_basepoint_counts(from, to),
                            "{name} {from}->{to}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn classes_are_additive_and_antisymmetric() {
        let a = arrangement("knot_9_42");
        let n = a.len();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let xy = a.disk_class(x, y).unwrap();
                let yx = a.disk_class(y, x).unwrap();
                assert_eq!(xy.maslov, -yx.maslov);
                assert!(xy.multiplicities.iter().zip(&yx.multiplicities).all(|(p, q)| p == &-q));
                for z in 0..n {
                    if z == x || z == y {
                        continue;
                    }
                    let yz = a.disk_class(y, z).unwrap();
                    let xz = a.disk_class(x, z).unwrap();
                    assert_eq!(xz.n_w, xy.n_w + yz.n_w);
                    assert_eq!(xz.n_z, xy.n_z + yz.n_z);
                    assert_eq!(xz.maslov, xy.maslov + yz.maslov);
                }
            }
        }
    }

    #[test]
    fn single_face_bigon_has_maslov_one() {
        let a = arrangement("trefoil_right");
        for c in a.positive_mu1_classes().unwrap() {
            assert_eq!(c.multiplicities.iter().sum::<i64>(), 1);
            let mut corners = Q::from_integer(0.into());
            corners += a.corner_multiplicity(&c, c.from);
            corners += a.corner_multiplicity(&c, c.to);
            assert_eq!(corners, BigRational::new(1.into(), 2.into()));
        }
    }

    #[test]
    fn larger_window_gives_same_points() {
        let d = builtin("figure_eight").unwrap();
        let a = stabilize(&d).unwrap();
        let b = lift(&d, 2 * a.window_scale).unwrap();
        assert_eq!(a.len(), b.len());
        let tori = |x: &Arrangement| x.points.iter().map(|p| p.torus.clone()).collect::<Vec<_>>();
        assert_eq!(tori(&a), tori(&b));
    }

    #[test]
    fn stabilization_limit_is_reported() {
        let d = builtin("knot_9_42").unwrap();
        assert_eq!(
            stabilize_with_limit(&d, 0).unwrap_err(),
            CoverError::StabilizationLimitExceeded { doublings: 0 }
        );
    }
}
