//! Exact homology of finite bigraded chain complexes.
//!
//! Complexes are given by generators carrying an (Alexander, Maslov) bigrading
//! and a sparse list of arrows, each lowering the Maslov grading by one.
//! Homology is computed either over F2 (sparse column reduction) or over the
//! integers (sparse Smith normal form with arbitrary-precision entries); the
//! two are interchangeable [`HomologyBackend`]s looked up by name.

pub mod laurent;
pub mod mod2;
pub mod snf;

/// Serde for `BigInt` as a JSON integer when it fits in `i64`, else a string.
pub mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(i) => Ok(BigInt::from(i)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry::{Named, Registry};
pub use laurent::LaurentPolynomial;
use snf::SparseIntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("differential does not square to zero")]
    DifferentialNotSquareZero,
    #[error("arrow {from} -> {to} does not lower the Maslov grading by one")]
    ArrowDegree { from: usize, to: usize },
    #[error("arrow {from} -> {to} refers to a missing generator")]
    ArrowOutOfRange { from: usize, to: usize },
    #[error("arrow {from} -> {to} changes the Alexander grading")]
    InhomogeneousArrow { from: usize, to: usize },
    #[error("homology summary has infinite towers")]
    TowersPresent,
    #[error("unknown coefficient ring `{0}`")]
    UnknownCoefficients(String),
}

/// Coefficient ring for homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[default]
    Mod2,
    Integer,
}

impl Coefficients {
    pub fn name(self) -> &'static str {
        match self {
            Coefficients::Mod2 => "mod2",
            Coefficients::Integer => "int",
        }
    }

    pub fn parse(s: &str) -> Result<Self, AlgebraError> {
        match s {
            "mod2" | "f2" | "z2" => Ok(Coefficients::Mod2),
            "int" | "integer" | "z" => Ok(Coefficients::Integer),
            other => Err(AlgebraError::UnknownCoefficients(other.to_string())),
        }
    }

    /// Whether `c` is zero in this ring.
    pub fn is_zero(self, c: &BigInt) -> bool {
        match self {
            Coefficients::Mod2 => c.is_even(),
            Coefficients::Integer => c.is_zero(),
        }
    }

    pub fn backend(self) -> &'static dyn HomologyBackend {
        backends()
            .get(self.name())
            .expect("both coefficient backends are registered")
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub alexander: i64,
    pub maslov: i64,
}

impl Generator {
    pub fn new(label: impl Into<String>, alexander: i64, maslov: i64) -> Self {
        Self {
            label: label.into(),
            alexander,
            maslov,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    #[serde(with = "bigint_json")]
    pub coefficient: BigInt,
}

impl Arrow {
    pub fn new(from: usize, to: usize, coefficient: impl Into<BigInt>) -> Self {
        Self {
            from,
            to,
            coefficient: coefficient.into(),
        }
    }
}

/// A finitely generated bigraded chain complex with a sparse differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedComplex {
    generators: Vec<Generator>,
    arrows: Vec<Arrow>,
    coefficients: Coefficients,
}

impl BigradedComplex {
    /// Validates arrow endpoints and that every arrow lowers Maslov by one.
    pub fn new(
        generators: Vec<Generator>,
        arrows: Vec<Arrow>,
        coefficients: Coefficients,
    ) -> Result<Self, AlgebraError> {
        for a in &arrows {
            let (Some(s), Some(t)) = (generators.get(a.from), generators.get(a.to)) else {
                return Err(AlgebraError::ArrowOutOfRange { from: a.from, to: a.to });
            };
            if s.maslov - t.maslov != 1 {
                return Err(AlgebraError::ArrowDegree { from: a.from, to: a.to });
            }
        }
        Ok(Self {
            generators,
            arrows,
            coefficients,
        })
    }

    pub fn empty(coefficients: Coefficients) -> Self {
        Self {
            generators: Vec::new(),
            arrows: Vec::new(),
            coefficients,
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn with_coefficients(mut self, coefficients: Coefficients) -> Self {
        self.coefficients = coefficients;
        self
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `d(d(x))` for every generator, as sparse maps, over `coefficients`.
    fn d_squared_nonzero(&self, coefficients: Coefficients) -> bool {
        let mut out: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); self.generators.len()];
        for a in &self.arrows {
            if !coefficients.is_zero(&a.coefficient) {
                out[a.from].push((a.to, &a.coefficient));
            }
        }
        for x in 0..self.generators.len() {
            let mut acc: HashMap<usize, BigInt> = HashMap::new();
            for (y, c1) in &out[x] {
                for (z, c2) in &out[*y] {
                    *acc.entry(*z).or_insert_with(BigInt::zero) += *c1 * *c2;
                }
            }
            if acc.values().any(|v| !coefficients.is_zero(v)) {
                return true;
            }
        }
        false
    }
}

/// True iff the differential squares to zero over the complex's coefficients.
pub fn verify_d_squared(complex: &BigradedComplex) -> bool {
    !complex.d_squared_nonzero(complex.coefficients)
}

/// Torsion summand `Z/order` in a given bigrading.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionSummand {
    pub alexander: i64,
    pub maslov: i64,
    #[serde(with = "bigint_json")]
    pub order: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerDirection {
    /// `F[U^{-1}]`-like tail, unbounded above (quotient regions).
    Up,
    /// `F[U]`-like tail, unbounded below (sub regions).
    Down,
}

/// An infinite U-tail in the homology of a region complex.
///
/// `maslov` is the grading of the finite end: the bottom of an upward tower or
/// the top of a downward one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tower {
    pub alexander: i64,
    pub maslov: i64,
    pub direction: TowerDirection,
}

impl Tower {
    pub fn bottom_maslov(&self) -> Option<i64> {
        (self.direction == TowerDirection::Up).then_some(self.maslov)
    }
}

/// Ranks (and torsion) indexed by (Alexander, Maslov).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologySummary {
    pub free_ranks: BTreeMap<(i64, i64), usize>,
    pub torsion: Vec<TorsionSummand>,
    pub towers: Vec<Tower>,
}

impl HomologySummary {
    /// Build from `(alexander, maslov, rank)` triples, dropping zero ranks.
    pub fn from_ranks<I: IntoIterator<Item = (i64, i64, usize)>>(ranks: I) -> Self {
        let mut s = Self::default();
        for (a, m, r) in ranks {
            s.add_rank(a, m, r);
        }
        s
    }

    pub fn add_rank(&mut self, alexander: i64, maslov: i64, rank: usize) {
        if rank == 0 {
            return;
        }
        *self.free_ranks.entry((alexander, maslov)).or_insert(0) += rank;
    }

    pub fn rank(&self, alexander: i64, maslov: i64) -> usize {
        self.free_ranks.get(&(alexander, maslov)).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.free_ranks.values().sum()
    }

    /// Total rank in one Alexander grading.
    pub fn rank_at_alexander(&self, alexander: i64) -> usize {
        self.free_ranks
            .iter()
            .filter(|((a, _), _)| *a == alexander)
            .map(|(_, r)| r)
            .sum()
    }

    /// Total rank in one Maslov grading.
    pub fn rank_at_maslov(&self, maslov: i64) -> usize {
        self.free_ranks
            .iter()
            .filter(|((_, m), _)| *m == maslov)
            .map(|(_, r)| r)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.free_ranks.is_empty() && self.torsion.is_empty() && self.towers.is_empty()
    }

    /// Bigraded convolution of free ranks (the Künneth formula over a field).
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((a1, m1), r1) in &self.free_ranks {
            for ((a2, m2), r2) in &other.free_ranks {
                out.add_rank(a1 + a2, m1 + m2, r1 * r2);
            }
        }
        out
    }

    /// Apply `(A, M) -> f(A, M)` to every free rank.
    pub fn map_gradings(&self, f: impl Fn(i64, i64) -> (i64, i64)) -> Self {
        let mut out = Self::default();
        for ((a, m), r) in &self.free_ranks {
            let (a2, m2) = f(*a, *m);
            out.add_rank(a2, m2, *r);
        }
        out.torsion = self
            .torsion
            .iter()
            .map(|t| {
                let (a2, m2) = f(t.alexander, t.maslov);
                TorsionSummand {
                    alexander: a2,
                    maslov: m2,
                    order: t.order.clone(),
                }
            })
            .collect();
        out.torsion.sort();
        out.towers = self.towers.clone();
        out
    }
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    alexander: i64,
    maslov: i64,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct SummaryRepr {
    ranks: Vec<RankEntry>,
    torsion: Vec<TorsionSummand>,
    towers: Vec<Tower>,
}

impl Serialize for HomologySummary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SummaryRepr {
            ranks: self
                .free_ranks
                .iter()
                .map(|((a, m), r)| RankEntry {
                    alexander: *a,
                    maslov: *m,
                    rank: *r,
                })
                .collect(),
            torsion: self.torsion.clone(),
            towers: self.towers.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomologySummary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SummaryRepr::deserialize(d)?;
        let mut out = HomologySummary::from_ranks(repr.ranks.into_iter().map(|e| (e.alexander, e.maslov, e.rank)));
        out.torsion = repr.torsion;
        out.towers = repr.towers;
        Ok(out)
    }
}

/// A strategy for computing homology over some coefficient ring.
pub trait HomologyBackend: Named + Send + Sync {
    fn coefficients(&self) -> Coefficients;

    /// Homology of a complex whose differential squares to zero over this ring.
    fn homology(&self, complex: &BigradedComplex) -> Result<HomologySummary, AlgebraError>;
}

/// Generators grouped by bigrading, with each generator's position in its block.
struct Blocks {
    index: HashMap<(i64, i64), Vec<usize>>,
    position: Vec<usize>,
}

impl Blocks {
    fn new(c: &BigradedComplex) -> Self {
        let mut index: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut position = vec![0; c.generators.len()];
        for (k, g) in c.generators.iter().enumerate() {
            let v = index.entry((g.alexander, g.maslov)).or_default();
            position[k] = v.len();
            v.push(k);
        }
        Self { index, position }
    }

    fn dim(&self, key: (i64, i64)) -> usize {
        self.index.get(&key).map(Vec::len).unwrap_or(0)
    }
}

fn check_homogeneous(c: &BigradedComplex, coefficients: Coefficients) -> Result<(), AlgebraError> {
    for a in &c.arrows {
        if !coefficients.is_zero(&a.coefficient) && c.generators[a.from].alexander != c.generators[a.to].alexander {
            return Err(AlgebraError::InhomogeneousArrow { from: a.from, to: a.to });
        }
    }
    Ok(())
}

/// F2 homology by sparse column reduction.
pub struct Mod2Backend;

impl Named for Mod2Backend {
    fn name(&self) -> &'static str {
        "mod2"
    }
}

impl HomologyBackend for Mod2Backend {
    fn coefficients(&self) -> Coefficients {
        Coefficients::Mod2
    }

    fn homology(&self, c: &BigradedComplex) -> Result<HomologySummary, AlgebraError> {
        if c.d_squared_nonzero(Coefficients::Mod2) {
            return Err(AlgebraError::DifferentialNotSquareZero);
        }
        check_homogeneous(c, Coefficients::Mod2)?;
        let blocks = Blocks::new(c);
        // columns of d restricted to each source block
        let mut cols: HashMap<(i64, i64), Vec<Vec<usize>>> = HashMap::new();
        for (key, gens) in &blocks.index {
            cols.insert(*key, vec![Vec::new(); gens.len()]);
        }
        for a in &c.arrows {
            if a.coefficient.is_even() {
                continue;
            }
            let g = &c.generators[a.from];
            let col = &mut cols.get_mut(&(g.alexander, g.maslov)).expect("block exists")[blocks.position[a.from]];
            col.push(blocks.position[a.to]);
        }
        let ranks: HashMap<(i64, i64), usize> = cols
            .into_iter()
            .map(|(k, v)| {
                let v: Vec<_> = v.into_iter().map(mod2::column_from_indices).collect();
                (k, mod2::rank(&v))
            })
            .collect();
        let mut out = HomologySummary::default();
        for (&(a, m), gens) in &blocks.index {
            let out_rank = ranks.get(&(a, m)).copied().unwrap_or(0);
            let in_rank = ranks.get(&(a, m + 1)).copied().unwrap_or(0);
            out.add_rank(a, m, gens.len() - out_rank - in_rank);
        }
        Ok(out)
    }
}

/// Integral homology by sparse Smith normal form.
pub struct IntegerBackend;

impl Named for IntegerBackend {
    fn name(&self) -> &'static str {
        "int"
    }
}

impl HomologyBackend for IntegerBackend {
    fn coefficients(&self) -> Coefficients {
        Coefficients::Integer
    }

    fn homology(&self, c: &BigradedComplex) -> Result<HomologySummary, AlgebraError> {
        if c.d_squared_nonzero(Coefficients::Integer) {
            return Err(AlgebraError::DifferentialNotSquareZero);
        }
        check_homogeneous(c, Coefficients::Integer)?;
        let blocks = Blocks::new(c);
        let mut mats: HashMap<(i64, i64), SparseIntMatrix> = HashMap::new();
        for a in &c.arrows {
            if a.coefficient.is_zero() {
                continue;
            }
            let g = &c.generators[a.from];
            let key = (g.alexander, g.maslov);
            let m = mats
                .entry(key)
                .or_insert_with(|| SparseIntMatrix::new(blocks.dim((key.0, key.1 - 1)), blocks.dim(key)));
            m.add(blocks.position[a.to], blocks.position[a.from], &a.coefficient);
        }
        let factors: HashMap<(i64, i64), Vec<BigInt>> =
            mats.into_iter().map(|(k, m)| (k, m.invariant_factors())).collect();
        let mut out = HomologySummary::default();
        for (&(a, m), gens) in &blocks.index {
            let out_rank = factors.get(&(a, m)).map(Vec::len).unwrap_or(0);
            let incoming = factors.get(&(a, m + 1));
            let in_rank = incoming.map(Vec::len).unwrap_or(0);
            out.add_rank(a, m, gens.len() - out_rank - in_rank);
            for d in incoming.into_iter().flatten() {
                if !d.abs().is_one() {
                    out.torsion.push(TorsionSummand {
                        alexander: a,
                        maslov: m,
                        order: d.abs(),
                    });
                }
            }
        }
        out.torsion.sort();
        Ok(out)
    }
}

/// The registered homology backends, keyed by coefficient name.
pub fn backends() -> &'static Registry<dyn HomologyBackend> {
    static REG: OnceLock<Registry<dyn HomologyBackend>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new()
            .with(Box::new(Mod2Backend) as Box<dyn HomologyBackend>)
            .with(Box::new(IntegerBackend))
    })
}

/// Homology of `complex` over `coefficients`, per (Alexander, Maslov).
pub fn homology(complex: &BigradedComplex, coefficients: Coefficients) -> Result<HomologySummary, AlgebraError> {
    coefficients.backend().homology(complex)
}

/// Tensor product with the graded Leibniz differential.
///
/// The Koszul sign is `(-1)^{maslov}` of the first factor. If either input is
/// over F2 the result is over F2.
pub fn tensor_complex(c1: &BigradedComplex, c2: &BigradedComplex) -> BigradedComplex {
    let coefficients = if c1.coefficients == Coefficients::Mod2 || c2.coefficients == Coefficients::Mod2 {
        Coefficients::Mod2
    } else {
        Coefficients::Integer
    };
    let n2 = c2.generators.len();
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut generators = Vec::with_capacity(c1.generators.len() * n2);
    for g1 in &c1.generators {
        for g2 in &c2.generators {
            generators.push(Generator::new(
                format!("{}*{}", g1.label, g2.label),
                g1.alexander + g2.alexander,
                g1.maslov + g2.maslov,
            ));
        }
    }
    let mut arrows = Vec::new();
    for a in &c1.arrows {
        for b in 0..n2 {
            arrows.push(Arrow::new(idx(a.from, b), idx(a.to, b), a.coefficient.clone()));
        }
    }
    for (a, g1) in c1.generators.iter().enumerate() {
        let sign = if g1.maslov.rem_euclid(2) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        for b in &c2.arrows {
            arrows.push(Arrow::new(idx(a, b.from), idx(a, b.to), &sign * &b.coefficient));
        }
    }
    BigradedComplex {
        generators,
        arrows,
        coefficients,
    }
}

/// `sum_{A,M} (-1)^M rank(A,M) T^A`.
pub fn euler_characteristic(h: &HomologySummary) -> Result<LaurentPolynomial, AlgebraError> {
    if !h.towers.is_empty() {
        return Err(AlgebraError::TowersPresent);
    }
    let mut p = LaurentPolynomial::zero();
    for ((a, m), r) in &h.free_ranks {
        let sign: i64 = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(2 * a, BigInt::from(sign * *r as i64));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(spec: &[(i64, i64)]) -> Vec<Generator> {
        spec.iter()
            .enumerate()
            .map(|(k, (a, m))| Generator::new(format!("g{k}"), *a, *m))
            .collect()
    }

    #[test]
    fn single_generator() {
        let c = BigradedComplex::new(gens(&[(0, 0)]), vec![], Coefficients::Mod2).unwrap();
        let h = homology(&c, Coefficients::Mod2).unwrap();
        assert_eq!(h.rank(0, 0), 1);
        assert_eq!(h.total_rank(), 1);
    }

    #[test]
    fn acyclic_pair() {
        let c = BigradedComplex::new(gens(&[(0, 1), (0, 0)]), vec![Arrow::new(0, 1, 1)], Coefficients::Mod2).unwrap();
        assert!(homology(&c, Coefficients::Mod2).unwrap().is_zero());
        assert!(homology(&c, Coefficients::Integer).unwrap().is_zero());
    }

    #[test]
    fn d_squared_checks() {
        assert!(verify_d_squared(&BigradedComplex::empty(Coefficients::Mod2)));
        let one = BigradedComplex::new(gens(&[(0, 1), (0, 0)]), vec![Arrow::new(0, 1, 1)], Coefficients::Mod2).unwrap();
        assert!(verify_d_squared(&one));
        let chain = BigradedComplex::new(
            gens(&[(0, 2), (0, 1), (0, 0)]),
            vec![Arrow::new(0, 1, 1), Arrow::new(1, 2, 1)],
            Coefficients::Mod2,
        )
        .unwrap();
        assert!(!verify_d_squared(&chain));
        assert_eq!(
            homology(&chain, Coefficients::Mod2),
            Err(AlgebraError::DifferentialNotSquareZero)
        );
    }

    #[test]
    fn mod2_versus_integer_cancellation() {
        // d a = b + b' , d b = c, d b' = c: squares to 2c, zero only mod 2
        let c = BigradedComplex::new(
            gens(&[(0, 2), (0, 1), (0, 1), (0, 0)]),
            vec![
                Arrow::new(0, 1, 1),
                Arrow::new(0, 2, 1),
                Arrow::new(1, 3, 1),
                Arrow::new(2, 3, 1),
            ],
            Coefficients::Mod2,
        )
        .unwrap();
        assert!(verify_d_squared(&c));
        assert!(!verify_d_squared(&c.clone().with_coefficients(Coefficients::Integer)));
        // signed version is a chain complex over Z
        let signed = BigradedComplex::new(
            gens(&[(0, 2), (0, 1), (0, 1), (0, 0)]),
            vec![
                Arrow::new(0, 1, 1),
                Arrow::new(0, 2, 1),
                Arrow::new(1, 3, 1),
                Arrow::new(2, 3, -1),
            ],
            Coefficients::Integer,
        )
        .unwrap();
        assert!(verify_d_squared(&signed));
        assert!(homology(&signed, Coefficients::Integer).unwrap().is_zero());
    }

    #[test]
    fn integer_torsion() {
        // d a = 2 b: H = Z/2 in degree 0
        let c = BigradedComplex::new(
            gens(&[(0, 1), (0, 0)]),
            vec![Arrow::new(0, 1, 2)],
            Coefficients::Integer,
        )
        .unwrap();
        let hz = homology(&c, Coefficients::Integer).unwrap();
        assert_eq!(hz.total_rank(), 0);
        assert_eq!(
            hz.torsion,
            vec![TorsionSummand {
                alexander: 0,
                maslov: 0,
                order: BigInt::from(2)
            }]
        );
        let h2 = homology(&c, Coefficients::Mod2).unwrap();
        assert_eq!(h2.rank(0, 0), 1);
        assert_eq!(h2.rank(0, 1), 1);
    }

    #[test]
    fn bad_arrow_degree_rejected() {
        let err = BigradedComplex::new(gens(&[(0, 0), (0, 0)]), vec![Arrow::new(0, 1, 1)], Coefficients::Mod2);
        assert_eq!(err, Err(AlgebraError::ArrowDegree { from: 0, to: 1 }));
    }

    #[test]
    fn tensor_with_unit() {
        let unit = BigradedComplex::new(gens(&[(0, 0)]), vec![], Coefficients::Mod2).unwrap();
        let c = BigradedComplex::new(
            gens(&[(1, 1), (1, 0), (0, 0)]),
            vec![Arrow::new(0, 1, 1)],
            Coefficients::Mod2,
        )
        .unwrap();
        let t = tensor_complex(&unit, &c);
        assert_eq!(
            homology(&t, Coefficients::Mod2).unwrap(),
            homology(&c, Coefficients::Mod2).unwrap()
        );
    }

    #[test]
    fn tensor_of_trefoil_tables() {
        let tref = BigradedComplex::new(gens(&[(1, 0), (0, -1), (-1, -2)]), vec![], Coefficients::Mod2).unwrap();
        let t = tensor_complex(&tref, &tref);
        assert_eq!(t.len(), 9);
        let h = homology(&t, Coefficients::Mod2).unwrap();
        assert_eq!(h.rank(2, 0), 1);
        let top = h.free_ranks.keys().map(|k| k.0).max().unwrap();
        assert_eq!(top, 2);
    }

    #[test]
    fn euler_of_trefoil() {
        let h = HomologySummary::from_ranks([(1, 0, 1), (0, -1, 1), (-1, -2, 1)]);
        let chi = euler_characteristic(&h).unwrap();
        assert_eq!(chi, LaurentPolynomial::from_terms([(1, 1), (0, -1), (-1, 1)]));
    }

    #[test]
    fn summary_json_roundtrip() {
        let mut h = HomologySummary::from_ranks([(1, 0, 2), (0, -1, 1)]);
        h.towers.push(Tower {
            alexander: 0,
            maslov: 0,
            direction: TowerDirection::Up,
        });
        let s = serde_json::to_string(&h).unwrap();
        let back: HomologySummary = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
