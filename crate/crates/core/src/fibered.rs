//! Exterior-algebra models for Σ_g × S¹, the mapping torus of one Dehn
//! twist, Borromean knots and symmetric products.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::snf::SparseIntMatrix;
use crate::algebra::HomologySummary;
use crate::floer::GradedGroups;
use crate::registry::{Named, Registry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberedError {
    #[error("gamma must be a single basis class of the first handle")]
    GammaNotInHandle,
    #[error("gamma has {found} coordinates, expected {expected}")]
    GammaDimension { found: usize, expected: usize },
    #[error("the Spin^c class k must be nonzero")]
    ZeroClass,
    #[error("parameter must be nonnegative, got {0}")]
    NegativeParameter(i64),
    #[error("genus {0} is too large for the exterior basis encoding")]
    GenusTooLarge(u32),
}

/// Largest genus whose 2g basis classes fit in the bitmask.
pub const MAX_GENUS: u32 = 15;

/// A wedge of distinct basis classes of H¹(Σ_g), in the order
/// a₁, b₁, a₂, b₂, ..., stored as a bitmask (bit 2k is a_{k+1}, bit 2k+1 is
/// b_{k+1}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExteriorBasis {
    pub genus: u32,
    pub mask: u32,
}

impl ExteriorBasis {
    pub fn degree(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn contains(&self, class: u32) -> bool {
        self.mask & (1 << class) != 0
    }

    /// Number of factors listed before `class`.
    fn preceding(&self, class: u32) -> u32 {
        (self.mask & ((1 << class) - 1)).count_ones()
    }

    /// `e_class ∧ self` as a sign and a basis element, or `None` when zero.
    pub fn wedge(&self, class: u32) -> Option<(i64, ExteriorBasis)> {
        if self.contains(class) {
            return None;
        }
        let sign = if self.preceding(class).is_multiple_of(2) { 1 } else { -1 };
        Some((
            sign,
            ExteriorBasis {
                genus: self.genus,
                mask: self.mask | (1 << class),
            },
        ))
    }

    /// Contraction removing the dual of `class`.
    pub fn contract(&self, class: u32) -> Option<(i64, ExteriorBasis)> {
        if !self.contains(class) {
            return None;
        }
        let sign = if self.preceding(class).is_multiple_of(2) { 1 } else { -1 };
        Some((
            sign,
            ExteriorBasis {
                genus: self.genus,
                mask: self.mask & !(1 << class),
            },
        ))
    }

    /// Holds exactly one of a₁, b₁.
    pub fn in_odd_handle_part(&self) -> bool {
        self.contains(0) != self.contains(1)
    }

    pub fn label(&self) -> String {
        if self.mask == 0 {
            return "1".to_string();
        }
        (0..2 * self.genus)
            .filter(|&k| self.contains(k))
            .map(class_name)
            .collect::<Vec<_>>()
            .join("^")
    }
}

fn class_name(k: u32) -> String {
    format!("{}{}", if k.is_multiple_of(2) { 'a' } else { 'b' }, k / 2 + 1)
}

/// All basis elements of Λ^degree H¹(Σ_g), ordered by mask.
pub fn exterior_basis(genus: u32, degree: u32) -> Vec<ExteriorBasis> {
    (0u32..1 << (2 * genus))
        .filter(|m| m.count_ones() == degree)
        .map(|mask| ExteriorBasis { genus, mask })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XBasisElement {
    pub form: ExteriorBasis,
    pub u_power: u32,
}

/// X(g,d) = ⊕_{i=0}^{d} Λ^{2g−i} ⊗ Z[U]/U^{d−i+1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XgdModule {
    pub genus: u32,
    pub depth: u32,
    pub basis: Vec<XBasisElement>,
    #[serde(skip)]
    index: HashMap<(u32, u32), usize>,
}

impl XgdModule {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Relative grading with the top form at U⁰ in degree 0.
    pub fn grading(&self, k: usize) -> i64 {
        let e = &self.basis[k];
        let codegree = 2 * self.genus - e.form.degree();
        -(codegree as i64) - 2 * e.u_power as i64
    }

    fn position(&self, form: ExteriorBasis, u_power: u32) -> Option<usize> {
        let codegree = 2 * self.genus - form.degree();
        if codegree > self.depth || u_power > self.depth - codegree {
            return None;
        }
        self.index.get(&(form.mask, u_power)).copied()
    }

    /// Σ_{i=0}^{d} C(2g, i)·(d − i + 1).
    pub fn expected_rank(genus: u32, depth: u32) -> usize {
        (0..=depth.min(2 * genus))
            .map(|i| binomial(2 * genus as u64, i as u64) as usize * (depth - i + 1) as usize)
            .sum()
    }
}

pub fn build_x(genus: u32, depth: u32) -> XgdModule {
    let mut basis = Vec::new();
    for i in 0..=depth.min(2 * genus) {
        for form in exterior_basis(genus, 2 * genus - i) {
            for u_power in 0..=depth - i {
                basis.push(XBasisElement { form, u_power });
            }
        }
    }
    let index = basis
        .iter()
        .enumerate()
        .map(|(k, e)| ((e.form.mask, e.u_power), k))
        .collect();
    XgdModule {
        genus,
        depth,
        basis,
        index,
    }
}

/// Integer combination of a₁, b₁, ..., a_g, b_g in H₁(Σ_g).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClassGamma {
    pub genus: u32,
    pub coefficients: Vec<i64>,
}

impl HomologyClassGamma {
    pub fn new(genus: u32, coefficients: Vec<i64>) -> Result<Self, FiberedError> {
        if coefficients.len() != 2 * genus as usize {
            return Err(FiberedError::GammaDimension {
                found: coefficients.len(),
                expected: 2 * genus as usize,
            });
        }
        let gamma = Self { genus, coefficients };
        debug_assert_eq!(gamma.self_intersection(), 0);
        Ok(gamma)
    }

    /// The basis class with index `class` (a₁ = 0, b₁ = 1, ...).
    pub fn basis(genus: u32, class: u32) -> Self {
        let mut coefficients = vec![0; 2 * genus as usize];
        coefficients[class as usize] = 1;
        Self { genus, coefficients }
    }

    /// Symplectic pairing with a_i·b_i = 1.
    pub fn intersection(&self, other: &Self) -> i64 {
        self.coefficients
            .chunks(2)
            .zip(other.coefficients.chunks(2))
            .map(|(x, y)| x[0] * y[1] - x[1] * y[0])
            .sum()
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersection(self)
    }

    /// Poincaré dual in H¹ as coefficients on the dual basis:
    /// PD(a_i) = b_i*, PD(b_i) = −a_i*.
    fn poincare_dual(&self) -> Vec<i64> {
        self.coefficients.chunks(2).flat_map(|c| [-c[1], c[0]]).collect()
    }

    fn single_class(&self) -> Option<u32> {
        let mut nonzero = self.coefficients.iter().enumerate().filter(|(_, &c)| c != 0);
        match (nonzero.next(), nonzero.next()) {
            (Some((k, &c)), None) if c.abs() == 1 => Some(k as u32),
            _ => None,
        }
    }
}

/// Dense integer matrix acting on column vectors: `entries[row][col]`.
pub type Matrix = Vec<Vec<i64>>;

pub fn matrix_product(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let inner = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0; m]; n];
    for (r, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate().take(inner) {
            if x == 0 {
                continue;
            }
            for c in 0..m {
                out[r][c] += x * b[k][c];
            }
        }
    }
    out
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// Matrix of D_γ(ω⊗U^j) = ι_γ ω ⊗ U^j + PD(γ)∧ω ⊗ U^{j+1}, dropping terms
/// outside the module.
pub fn d_gamma(x: &XgdModule, gamma: &HomologyClassGamma) -> Matrix {
    assert_eq!(gamma.genus, x.genus, "gamma lives in a different genus");
    let n = x.len();
    let mut m = vec![vec![0; n]; n];
    let dual = gamma.poincare_dual();
    for (col, e) in x.basis.iter().enumerate() {
        for class in 0..2 * x.genus {
            let contract = gamma.coefficients[class as usize];
            if contract != 0 {
                if let Some((sign, form)) = e.form.contract(class) {
                    if let Some(row) = x.position(form, e.u_power) {
                        m[row][col] += sign * contract;
                    }
                }
            }
            let wedge = dual[class as usize];
            if wedge != 0 {
                if let Some((sign, form)) = e.form.wedge(class) {
                    if let Some(row) = x.position(form, e.u_power + 1) {
                        m[row][col] += sign * wedge;
                    }
                }
            }
        }
    }
    m
}

/// D′_γ: zero on forms with neither or both of a₁, b₁ and equal to D_γ on
/// forms with exactly one.
pub fn d_gamma_prime(x: &XgdModule, gamma: &HomologyClassGamma) -> Result<Matrix, FiberedError> {
    match gamma.single_class() {
        Some(0 | 1) => {}
        _ => return Err(FiberedError::GammaNotInHandle),
    }
    let mut m = d_gamma(x, gamma);
    for (col, e) in x.basis.iter().enumerate() {
        if !e.form.in_odd_handle_part() {
            for row in m.iter_mut() {
                row[col] = 0;
            }
        }
    }
    Ok(m)
}

/// Ranks by degree of a graded module, with notes on how they were obtained.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RankSummary {
    pub ranks: BTreeMap<i64, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RankSummary {
    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    fn add(&mut self, degree: i64, rank: usize) {
        if rank > 0 {
            *self.ranks.entry(degree).or_insert(0) += rank;
        }
    }
}

/// Rational Betti numbers of (x, matrix) where the matrix lowers degree by one.
pub fn graded_homology(x: &XgdModule, matrix: &Matrix) -> RankSummary {
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for k in 0..x.len() {
        by_degree.entry(x.grading(k)).or_default().push(k);
    }
    let block_rank = |source: i64| -> usize {
        let (Some(cols), Some(rows)) = (by_degree.get(&source), by_degree.get(&(source - 1))) else {
            return 0;
        };
        let mut s = SparseIntMatrix::new(rows.len(), cols.len());
        for (r, &row) in rows.iter().enumerate() {
            for (c, &col) in cols.iter().enumerate() {
                s.add(r, c, &BigInt::from(matrix[row][col]));
            }
        }
        s.invariant_factors().len()
    };
    let mut out = RankSummary::default();
    for (&d, cells) in &by_degree {
        out.add(d, cells.len() - block_rank(d) - block_rank(d + 1));
    }
    out
}

fn module_ranks(x: &XgdModule) -> RankSummary {
    let mut out = RankSummary::default();
    for k in 0..x.len() {
        out.add(x.grading(k), 1);
    }
    out
}

fn depth_for(genus: u32, k: i64) -> Result<Option<u32>, FiberedError> {
    if k == 0 {
        return Err(FiberedError::ZeroClass);
    }
    if genus > MAX_GENUS {
        return Err(FiberedError::GenusTooLarge(genus));
    }
    let d = genus as i64 - 1 - k.abs();
    Ok((d >= 0).then_some(d as u32))
}

/// HF⁺(Σ_g × S¹, k) ≅ X(g, g−1−|k|), trivial when |k| > g − 1.
pub fn hf_sigma_times_s1(genus: u32, k: i64) -> Result<RankSummary, FiberedError> {
    Ok(match depth_for(genus, k)? {
        Some(d) => module_ranks(&build_x(genus, d)),
        None => RankSummary::default(),
    })
}

/// HF⁺ of the mapping torus of a negative Dehn twist along a₁.
pub fn hf_dehn_twist(genus: u32, k: i64) -> Result<RankSummary, FiberedError> {
    let Some(d) = depth_for(genus, k)? else {
        return Ok(RankSummary::default());
    };
    let x = build_x(genus, d);
    let gamma = HomologyClassGamma::basis(genus, 0);
    let mut out = graded_homology(&x, &d_gamma_prime(&x, &gamma)?);
    if 3 * d >= 2 * genus - 1 {
        out.warnings.push(format!(
            "3d = {} is not below 2g - 1 = {}; ranks hold as groups, the module structure is not asserted",
            3 * d,
            2 * genus - 1
        ));
    }
    Ok(out)
}

/// ĤFK of #^g B(0,0): rank C(2g, g+j) at (A, M) = (j, j).
pub fn borromean_hfk(genus: u32) -> GradedGroups {
    let g = genus as i64;
    HomologySummary::from_ranks((-g..=g).map(|j| (j, j, binomial(2 * genus as u64, (g + j) as u64) as usize)))
}

/// Betti numbers of Sym^d(Σ_g) from the series (1+tq)^{2g} / ((1−q)(1−t²q)),
/// graded so that the fundamental class sits in degree 0.
pub fn macdonald_oracle(genus: u32, depth: u32) -> RankSummary {
    let d = depth as usize;
    // series[q][t]
    let mut series = vec![vec![0i64; 2 * d + 1]; d + 1];
    series[0][0] = 1;
    let times = |s: &Vec<Vec<i64>>, q_step: usize, t_step: usize| -> Vec<Vec<i64>> {
        let mut out = s.clone();
        for q in q_step..=d {
            for t in t_step..=2 * d {
                out[q][t] += s[q - q_step][t - t_step];
            }
        }
        out
    };
    for _ in 0..2 * genus {
        series = times(&series, 1, 1);
    }
    // 1/(1−q) and 1/(1−t²q) as running sums
    for (q_step, t_step) in [(1, 0), (1, 2)] {
        for q in q_step..=d {
            for t in t_step..=2 * d {
                let prev = series[q - q_step][t - t_step];
                series[q][t] += prev;
            }
        }
    }
    let mut out = RankSummary::default();
    for (t, &b) in series[d].iter().enumerate() {
        out.add(t as i64 - 2 * depth as i64, b as usize);
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A named model producing ranks from a genus and one integer parameter.
pub trait FiberedModel: Named + Send + Sync {
    /// Meaning of the integer parameter.
    fn parameter(&self) -> &'static str;
    fn evaluate(&self, genus: u32, parameter: i64) -> Result<RankSummary, FiberedError>;
}

fn nonnegative(p: i64) -> Result<u32, FiberedError> {
    u32::try_from(p).map_err(|_| FiberedError::NegativeParameter(p))
}

struct SigmaTimesCircle;
struct DehnTwist;
struct XModule;
struct MacDonald;

impl Named for SigmaTimesCircle {
    fn name(&self) -> &'static str {
        "sigma_s1"
    }
}

impl FiberedModel for SigmaTimesCircle {
    fn parameter(&self) -> &'static str {
        "k"
    }

    fn evaluate(&self, genus: u32, k: i64) -> Result<RankSummary, FiberedError> {
        hf_sigma_times_s1(genus, k)
    }
}

impl Named for DehnTwist {
    fn name(&self) -> &'static str {
        "dehn_twist"
    }
}

impl FiberedModel for DehnTwist {
    fn parameter(&self) -> &'static str {
        "k"
    }

    fn evaluate(&self, genus: u32, k: i64) -> Result<RankSummary, FiberedError> {
        hf_dehn_twist(genus, k)
    }
}

impl Named for XModule {
    fn name(&self) -> &'static str {
        "x_module"
    }
}

impl FiberedModel for XModule {
    fn parameter(&self) -> &'static str {
        "d"
    }

    fn evaluate(&self, genus: u32, d: i64) -> Result<RankSummary, FiberedError> {
        if genus > MAX_GENUS {
            return Err(FiberedError::GenusTooLarge(genus));
        }
        Ok(module_ranks(&build_x(genus, nonnegative(d)?)))
    }
}

impl Named for MacDonald {
    fn name(&self) -> &'static str {
        "macdonald"
    }
}

impl FiberedModel for MacDonald {
    fn parameter(&self) -> &'static str {
        "d"
    }

    fn evaluate(&self, genus: u32, d: i64) -> Result<RankSummary, FiberedError> {
        Ok(macdonald_oracle(genus, nonnegative(d)?))
    }
}

pub fn models() -> &'static Registry<dyn FiberedModel> {
    static MODELS: OnceLock<Registry<dyn FiberedModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        Registry::<dyn FiberedModel>::new()
            .with(Box::new(SigmaTimesCircle))
            .with(Box::new(DehnTwist))
            .with(Box::new(XModule))
            .with(Box::new(MacDonald))
    })
}
