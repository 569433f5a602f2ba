//! Invariants read off a knot complex: region homology, Alexander polynomial,
//! genus bound, connected sums and the skein relations of Euler characteristics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::mod2::{self, Column};
use crate::algebra::{
    euler_characteristic, AlgebraError, Coefficients, HomologySummary, LaurentPolynomial, Tower, TowerDirection,
};
use crate::floer::{GradedGroups, KnotArrow, KnotComplex, KnotGenerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("tower detection differs between truncation {truncation} and {}", truncation + 1)]
    TruncationUnstable { truncation: u64 },
    #[error("truncation {given} is below the minimum {required}")]
    TruncationTooSmall { required: u64, given: u64 },
    #[error("Euler characteristic {0} is not the polynomial of a knot")]
    NotAKnotPolynomial(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A region of the (i, j) plane cutting a sub-, quotient or subquotient
/// complex out of CFK∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    /// `max(i, j) < 0`
    MaxNeg,
    /// `min(i, j) < 0`
    MinNeg,
    /// `min(i, j) >= 0`
    QuotMinNonneg,
    /// `max(i, j) >= 0`
    QuotMaxNonneg,
    /// `i >= 0 or j >= -m`
    IOrJ { m: i64 },
    /// `i >= 0 and j >= -m`
    IAndJ { m: i64 },
    /// `i < 0 and j >= t`
    Box { t: i64 },
}

/// Which way the infinite part of a region runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionShape {
    /// Unbounded towards large `i` (quotient complexes).
    Up,
    /// Unbounded towards small `i` (subcomplexes).
    Down,
    Bounded,
}

impl RegionSpec {
    pub fn contains(&self, i: i64, j: i64) -> bool {
        match *self {
            RegionSpec::MaxNeg => i.max(j) < 0,
            RegionSpec::MinNeg => i.min(j) < 0,
            RegionSpec::QuotMinNonneg => i.min(j) >= 0,
            RegionSpec::QuotMaxNonneg => i.max(j) >= 0,
            RegionSpec::IOrJ { m } => i >= 0 || j >= -m,
            RegionSpec::IAndJ { m } => i >= 0 && j >= -m,
            RegionSpec::Box { t } => i < 0 && j >= t,
        }
    }

    pub fn shape(&self) -> RegionShape {
        match self {
            RegionSpec::MaxNeg | RegionSpec::MinNeg => RegionShape::Down,
            RegionSpec::Box { .. } => RegionShape::Bounded,
            _ => RegionShape::Up,
        }
    }

    /// Integer parameter of the region (0 when it has none).
    pub fn parameter(&self) -> i64 {
        match *self {
            RegionSpec::IOrJ { m } | RegionSpec::IAndJ { m } => m,
            RegionSpec::Box { t } => t,
            _ => 0,
        }
    }

    /// Alexander class attached to towers and reduced groups of this region.
    pub fn alexander_class(&self) -> i64 {
        match *self {
            RegionSpec::IOrJ { m } | RegionSpec::IAndJ { m } => m,
            _ => 0,
        }
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegionSpec::MaxNeg => write!(f, "max(i,j)<0"),
            RegionSpec::MinNeg => write!(f, "min(i,j)<0"),
            RegionSpec::QuotMinNonneg => write!(f, "min(i,j)>=0"),
            RegionSpec::QuotMaxNonneg => write!(f, "max(i,j)>=0"),
            RegionSpec::IOrJ { m } => write!(f, "i>=0 or j>={}", -m),
            RegionSpec::IAndJ { m } => write!(f, "i>=0 and j>={}", -m),
            RegionSpec::Box { t } => write!(f, "i<0 and j>={t}"),
        }
    }
}

/// Homology of a region complex: infinite U-tails plus the finite remainder.
///
/// The reduced part is singly graded; its Alexander key is the region's
/// Alexander class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSummary {
    pub towers: Vec<Tower>,
    pub reduced: HomologySummary,
}

impl TowerSummary {
    pub fn reduced_rank(&self) -> usize {
        self.reduced.total_rank()
    }
}

/// Smallest truncation accepted by [`region_homology`].
pub fn minimum_truncation(c: &KnotComplex, r: &RegionSpec) -> u64 {
    let (lo, hi) = c.alexander_range();
    c.len() as u64 + (hi - lo) as u64 + r.parameter().unsigned_abs()
}

pub fn default_truncation(c: &KnotComplex, r: &RegionSpec) -> u64 {
    minimum_truncation(c, r) + 4
}

/// Homology over F2 of the region complex, with towers detected at two
/// consecutive truncation depths.
pub fn region_homology(c: &KnotComplex, r: &RegionSpec, truncation: u64) -> Result<TowerSummary, InvariantError> {
    let required = minimum_truncation(c, r);
    if truncation < required {
        return Err(InvariantError::TruncationTooSmall {
            required,
            given: truncation,
        });
    }
    let first = region_at_depth(c, r, truncation).ok_or(InvariantError::TruncationUnstable { truncation })?;
    let second = region_at_depth(c, r, truncation + 1).ok_or(InvariantError::TruncationUnstable { truncation })?;
    if first != second {
        return Err(InvariantError::TruncationUnstable { truncation });
    }
    Ok(first)
}

pub fn region_homology_default(c: &KnotComplex, r: &RegionSpec) -> Result<TowerSummary, InvariantError> {
    region_homology(c, r, default_truncation(c, r))
}

/// The truncated region complex over F2.
struct Truncated {
    /// (generator, i) per basis element.
    cells: Vec<(usize, i64)>,
    index: BTreeMap<(usize, i64), usize>,
    grading: Vec<i64>,
    boundary: Vec<Column>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl Truncated {
    fn build(c: &KnotComplex, r: &RegionSpec, depth: i64) -> Self {
        let mut cells = Vec::new();
        let mut index = BTreeMap::new();
        let mut grading = Vec::new();
        for (x, g) in c.generators.iter().enumerate() {
            for i in -depth..=depth {
                if r.contains(i, i + g.alexander) {
                    index.insert((x, i), cells.len());
                    cells.push((x, i));
                    grading.push(g.maslov + 2 * i);
                }
            }
        }
        let mut outgoing: Vec<Vec<&KnotArrow>> = vec![Vec::new(); c.len()];
        for a in &c.arrows {
            if a.coefficient.is_odd() {
                outgoing[a.from].push(a);
            }
        }
        let boundary = cells
            .iter()
            .map(|&(x, i)| {
                let targets = outgoing[x]
                    .iter()
                    .filter_map(|a| index.get(&(a.to, i - a.n_w)).copied())
                    .collect();
                mod2::column_from_indices(targets)
            })
            .collect();
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (k, &d) in grading.iter().enumerate() {
            by_degree.entry(d).or_default().push(k);
        }
        Truncated {
            cells,
            index,
            grading,
            boundary,
            by_degree,
        }
    }

    fn degree_cells(&self, d: i64) -> &[usize] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    fn cycles(&self, d: i64) -> Vec<Column> {
        let cells = self.degree_cells(d);
        let cols: Vec<Column> = cells.iter().map(|&k| self.boundary[k].clone()).collect();
        mod2::reduce(&cols)
            .kernel()
            .into_iter()
            .map(|combo| mod2::column_from_indices(combo.into_iter().map(|p| cells[p]).collect()))
            .collect()
    }

    fn boundaries(&self, d: i64) -> Vec<Column> {
        let cols: Vec<Column> = self
            .degree_cells(d + 1)
            .iter()
            .map(|&k| self.boundary[k].clone())
            .collect();
        mod2::reduce(&cols).image()
    }

    fn rank(&self, d: i64) -> usize {
        self.cycles(d).len() - self.boundaries(d).len()
    }

    /// Rank of `U^n : H_d -> H_{d-2n}`.
    fn u_power_rank(&self, d: i64, n: i64) -> usize {
        let target = self.boundaries(d - 2 * n);
        let base = target.len();
        let mut cols = target;
        for z in self.cycles(d) {
            let image = z
                .iter()
                .filter_map(|&k| {
                    let (x, i) = self.cells[k];
                    self.index.get(&(x, i - n)).copied()
                })
                .collect();
            cols.push(mod2::column_from_indices(image));
        }
        mod2::rank(&cols) - base
    }
}

/// Ranks by degree of the finite complex `r ∩ {|i| <= depth}`.
pub fn truncated_homology(c: &KnotComplex, r: &RegionSpec, depth: u64) -> BTreeMap<i64, usize> {
    let complex = Truncated::build(c, r, depth as i64);
    complex
        .by_degree
        .keys()
        .map(|&d| (d, complex.rank(d)))
        .filter(|&(_, rank)| rank > 0)
        .collect()
}

fn region_at_depth(c: &KnotComplex, r: &RegionSpec, truncation: u64) -> Option<TowerSummary> {
    let t = truncation as i64;
    let depth = 2 * t;
    let complex = Truncated::build(c, r, depth);
    let class = r.alexander_class();
    let mut reduced = HomologySummary::default();
    let mut towers = Vec::new();
    let (Some(&lowest), Some(&highest)) = (complex.grading.iter().min(), complex.grading.iter().max()) else {
        return Some(TowerSummary { towers, reduced });
    };
    let (min_m, max_m) = c.maslov_range();
    match r.shape() {
        RegionShape::Bounded => {
            for d in lowest..=highest {
                reduced.add_rank(class, d, complex.rank(d));
            }
        }
        RegionShape::Up => {
            let top = min_m + 2 * t;
            let mut count: BTreeMap<i64, usize> = BTreeMap::new();
            for d in lowest..=top {
                let alive = complex.u_power_rank(d + 2 * t, t);
                let below = count.get(&(d - 2)).copied().unwrap_or(0);
                if alive < below {
                    return None;
                }
                for _ in below..alive {
                    towers.push(Tower {
                        alexander: class,
                        maslov: d,
                        direction: TowerDirection::Up,
                    });
                }
                count.insert(d, alive);
                reduced.add_rank(class, d, complex.rank(d).checked_sub(alive)?);
            }
        }
        RegionShape::Down => {
            let bottom = max_m - 2 * t + 2;
            let mut count: BTreeMap<i64, usize> = BTreeMap::new();
            for d in (bottom..=highest).rev() {
                let alive = complex.u_power_rank(d, t);
                let above = count.get(&(d + 2)).copied().unwrap_or(0);
                if alive < above {
                    return None;
                }
                for _ in above..alive {
                    towers.push(Tower {
                        alexander: class,
                        maslov: d,
                        direction: TowerDirection::Down,
                    });
                }
                count.insert(d, alive);
                reduced.add_rank(class, d, complex.rank(d).checked_sub(alive)?);
            }
        }
    }
    towers.sort();
    Some(TowerSummary { towers, reduced })
}

/// Euler characteristic of ĤFK, checked to be a knot's Alexander polynomial.
pub fn alexander_polynomial(g: &GradedGroups) -> Result<LaurentPolynomial, InvariantError> {
    let chi = euler_characteristic(g)?;
    if !chi.is_symmetric() || chi.min_doubled().is_some_and(|d| d % 2 != 0) || chi.eval_one().abs() != BigInt::one() {
        return Err(InvariantError::NotAKnotPolynomial(chi.to_string()));
    }
    Ok(chi)
}

/// Largest |A| carrying homology.
pub fn genus_lower_bound(g: &GradedGroups) -> u64 {
    let free = g.free_ranks.keys().map(|&(a, _)| a);
    let torsion = g.torsion.iter().map(|t| t.alexander);
    free.chain(torsion).map(i64::unsigned_abs).max().unwrap_or(0)
}

/// Tensor product of two U-model complexes.
pub fn connected_sum(c1: &KnotComplex, c2: &KnotComplex) -> KnotComplex {
    let coefficients = if c1.coefficients == Coefficients::Mod2 || c2.coefficients == Coefficients::Mod2 {
        Coefficients::Mod2
    } else {
        Coefficients::Integer
    };
    let n2 = c2.len();
    let pair = |a: usize, b: usize| a * n2 + b;
    let generators = c1
        .generators
        .iter()
        .flat_map(|x| c2.generators.iter().map(move |y| (x, y)))
        .enumerate()
        .map(|(id, (x, y))| KnotGenerator {
            id,
            label: format!("{}*{}", x.label, y.label),
            alexander: x.alexander + y.alexander,
            maslov: x.maslov + y.maslov,
        })
        .collect();
    let coefficient = |c: &BigInt, negate: bool| match coefficients {
        Coefficients::Mod2 => BigInt::one(),
        Coefficients::Integer if negate => -c,
        Coefficients::Integer => c.clone(),
    };
    let mut arrows = Vec::new();
    for a in &c1.arrows {
        for b in 0..n2 {
            arrows.push(KnotArrow {
                from: pair(a.from, b),
                to: pair(a.to, b),
                n_w: a.n_w,
                n_z: a.n_z,
                coefficient: coefficient(&a.coefficient, false),
            });
        }
    }
    for (x, g) in c1.generators.iter().enumerate() {
        for b in &c2.arrows {
            arrows.push(KnotArrow {
                from: pair(x, b.from),
                to: pair(x, b.to),
                n_w: b.n_w,
                n_z: b.n_z,
                coefficient: coefficient(&b.coefficient, g.maslov.rem_euclid(2) == 1),
            });
        }
    }
    arrows.sort();
    KnotComplex::new(generators, arrows, coefficients).expect("tensor of valid complexes is valid")
}

/// Checks the skein relation between Euler characteristics of `L-`, `L0` and
/// `L+`. With `merges_components` the resolution `L0` has fewer components
/// than `L+` and carries the factor `(T^{1/2} - T^{-1/2})^2`; otherwise
/// `χ(L-) - χ(L0) - χ(L+) = 0`.
pub fn skein_chi_check(
    chi_minus: &LaurentPolynomial,
    chi_zero: &LaurentPolynomial,
    chi_plus: &LaurentPolynomial,
    merges_components: bool,
) -> bool {
    let middle = if merges_components {
        &LaurentPolynomial::half_difference().pow(2) * chi_zero
    } else {
        chi_zero.clone()
    };
    (&(chi_minus - &middle) - chi_plus).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::builtin;
    use crate::floer::{cfk_from_diagram, hfk_hat};

    fn complex(name: &str) -> KnotComplex {
        cfk_from_diagram(&builtin(name).unwrap(), Coefficients::Mod2).unwrap()
    }

    fn unknot() -> KnotComplex {
        KnotComplex::new(
            vec![KnotGenerator {
                id: 0,
                label: "x0".into(),
                alexander: 0,
                maslov: 0,
            }],
            vec![],
            Coefficients::Mod2,
        )
        .unwrap()
    }

    #[test]
    fn unknot_region_towers() {
        let c = unknot();
        let up = region_homology_default(&c, &RegionSpec::IAndJ { m: 0 }).unwrap();
        assert_eq!(
            up.towers,
            vec![Tower {
                alexander: 0,
                maslov: 0,
                direction: TowerDirection::Up
            }]
        );
        assert!(up.reduced.is_zero());
        let down = region_homology_default(&c, &RegionSpec::MaxNeg).unwrap();
        assert_eq!(
            down.towers,
            vec![Tower {
                alexander: 0,
                maslov: -2,
                direction: TowerDirection::Down
            }]
        );
        assert!(down.reduced.is_zero());
    }

    #[test]
    fn trefoil_large_surgery() {
        let c = complex("trefoil_right");
        for m in [1, 2, 3, -2, -3] {
            let s = region_homology_default(&c, &RegionSpec::IAndJ { m }).unwrap();
            assert_eq!(s.towers.len(), 1, "m = {m}");
            assert!(s.reduced.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn trefoil_small_region_has_reduced_part() {
        // i>=0 and j>=0 on the right trefoil picks up one extra class.
        let c = complex("trefoil_right");
        let s = region_homology_default(&c, &RegionSpec::IAndJ { m: 0 }).unwrap();
        assert_eq!(s.towers.len(), 1);
        assert_eq!(s.reduced_rank(), 1);
    }

    #[test]
    fn box_region_of_9_42() {
        let c = complex("knot_9_42");
        let s = region_homology_default(&c, &RegionSpec::Box { t: 1 }).unwrap();
        assert!(s.towers.is_empty());
        assert_eq!(s.reduced_rank(), 1);
    }

    #[test]
    fn truncation_precondition() {
        let c = complex("trefoil_right");
        assert!(matches!(
            region_homology(&c, &RegionSpec::MaxNeg, 1),
            Err(InvariantError::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn polynomials_and_genus() {
        let tref = hfk_hat(&complex("trefoil_right")).unwrap();
        assert_eq!(
            alexander_polynomial(&tref).unwrap(),
            LaurentPolynomial::from_terms([(1, 1), (0, -1), (-1, 1)])
        );
        assert_eq!(genus_lower_bound(&tref), 1);
        let fig8 = hfk_hat(&complex("figure_eight")).unwrap();
        assert_eq!(
            alexander_polynomial(&fig8).unwrap(),
            LaurentPolynomial::from_terms([(1, -1), (0, 3), (-1, -1)])
        );
        assert_eq!(genus_lower_bound(&hfk_hat(&complex("knot_9_42")).unwrap()), 2);
        assert_eq!(genus_lower_bound(&hfk_hat(&unknot()).unwrap()), 0);
    }

    #[test]
    fn split_polynomial_rejected() {
        let g = HomologySummary::from_ranks([(0, 0, 2)]);
        assert!(matches!(
            alexander_polynomial(&g),
            Err(InvariantError::NotAKnotPolynomial(_))
        ));
    }

    #[test]
    fn connected_sum_of_trefoils() {
        let t = complex("trefoil_right");
        let sum = connected_sum(&t, &t);
        let h = hfk_hat(&sum).unwrap();
        assert_eq!(h.rank(2, 0), 1);
        assert_eq!(h, hfk_hat(&t).unwrap().convolve(&hfk_hat(&t).unwrap()));
        let with_unknot = connected_sum(&unknot(), &t);
        assert_eq!(hfk_hat(&with_unknot).unwrap(), hfk_hat(&t).unwrap());
    }

    #[test]
    fn skein_relations() {
        let delta = LaurentPolynomial::half_difference();
        let trefoil = LaurentPolynomial::from_terms([(1, 1), (0, -1), (-1, 1)]);
        let hopf = -(&delta * &delta);
        // trefoil / unknot with the Hopf link as resolution
        assert!(skein_chi_check(&LaurentPolynomial::one(), &hopf, &trefoil, false));
        // Hopf link / two-component unlink with the unknot as resolution
        assert!(skein_chi_check(
            &LaurentPolynomial::zero(),
            &LaurentPolynomial::one(),
            &hopf,
            true
        ));
        let zero = LaurentPolynomial::zero();
        assert!(skein_chi_check(&zero, &zero, &zero, true));
        let one = LaurentPolynomial::one();
        assert!(!skein_chi_check(&one, &one, &one, false));
    }
}
