//! The knot complex `CFK^∞` in its finite U-model.
//!
//! Generators are intersection points with absolute (Alexander, Maslov)
//! gradings; an arrow `x -> y` labelled `(n_w, n_z)` stands for the
//! differential term `[x, i, j] -> [y, i - n_w, j - n_z]`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    self, bigint_json, AlgebraError, Arrow, BigradedComplex, Coefficients, Generator, HomologySummary,
    LaurentPolynomial,
};
use crate::cover::{stabilize, Arrangement, CoverError};
use crate::diagram::Diagram;

/// Ranks of the associated graded homology.
pub type GradedGroups = HomologySummary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloerError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("vertical homology has total rank {rank}, expected 1")]
    NormalizationAmbiguous { rank: usize },
    #[error("no Alexander shift makes the Euler characteristic symmetric")]
    AsymmetricEuler,
    #[error("no sign assignment makes the differential square to zero")]
    SignAssignmentFailed,
    #[error("the U-model differential does not square to zero")]
    DifferentialNotSquareZero,
    #[error("arrow {from} -> {to} violates the grading constraints")]
    InconsistentGrading { from: usize, to: usize },
    #[error("integer and mod 2 homology disagree")]
    CoefficientMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotGenerator {
    /// Index of the intersection point (order along alpha~).
    pub id: usize,
    pub label: String,
    pub alexander: i64,
    pub maslov: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KnotArrow {
    pub from: usize,
    pub to: usize,
    pub n_w: i64,
    pub n_z: i64,
    #[serde(with = "bigint_json")]
    pub coefficient: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotComplex {
    pub generators: Vec<KnotGenerator>,
    pub arrows: Vec<KnotArrow>,
    pub coefficients: Coefficients,
}

impl KnotComplex {
    /// Validates the grading constraints of every arrow and `d^2 = 0` on the
    /// U-model.
    pub fn new(
        generators: Vec<KnotGenerator>,
        arrows: Vec<KnotArrow>,
        coefficients: Coefficients,
    ) -> Result<Self, FloerError> {
        let c = Self {
            generators,
            arrows,
            coefficients,
        };
        c.check_gradings()?;
        if !c.d_squared_zero() {
            return Err(FloerError::DifferentialNotSquareZero);
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `ΔA = n_z - n_w` and `ΔM = 1 - 2 n_w`, with nonnegative labels.
    pub fn check_gradings(&self) -> Result<(), FloerError> {
        for a in &self.arrows {
            let (Some(x), Some(y)) = (self.generators.get(a.from), self.generators.get(a.to)) else {
                return Err(FloerError::InconsistentGrading { from: a.from, to: a.to });
            };
            let ok = a.n_w >= 0
                && a.n_z >= 0
                && x.alexander - y.alexander == a.n_z - a.n_w
                && x.maslov - y.maslov == 1 - 2 * a.n_w;
            if !ok {
                return Err(FloerError::InconsistentGrading { from: a.from, to: a.to });
            }
        }
        Ok(())
    }

    /// `d^2 = 0` for the full differential over `Z[U]`-style labels.
    pub fn d_squared_zero(&self) -> bool {
        let mut out: Vec<Vec<&KnotArrow>> = vec![Vec::new(); self.generators.len()];
        for a in &self.arrows {
            if !self.coefficients.is_zero(&a.coefficient) {
                out[a.from].push(a);
            }
        }
        for x in 0..self.generators.len() {
            let mut acc: HashMap<(usize, i64, i64), BigInt> = HashMap::new();
            for a in &out[x] {
                for b in &out[a.to] {
                    *acc.entry((b.to, a.n_w + b.n_w, a.n_z + b.n_z))
                        .or_insert_with(BigInt::zero) += &a.coefficient * &b.coefficient;
                }
            }
            if acc.values().any(|v| !self.coefficients.is_zero(v)) {
                return false;
            }
        }
        true
    }

    fn graded_generators(&self, alexander: impl Fn(&KnotGenerator) -> i64) -> Vec<Generator> {
        self.generators
            .iter()
            .map(|g| Generator::new(g.label.clone(), alexander(g), g.maslov))
            .collect()
    }

    fn filtered(&self, keep: impl Fn(&KnotArrow) -> bool) -> Vec<Arrow> {
        self.arrows
            .iter()
            .filter(|a| keep(a))
            .map(|a| Arrow::new(a.from, a.to, a.coefficient.clone()))
            .collect()
    }

    /// The associated graded complex: arrows with `n_w = n_z = 0`.
    pub fn associated_graded(&self) -> BigradedComplex {
        BigradedComplex::new(
            self.graded_generators(|g| g.alexander),
            self.filtered(|a| a.n_w == 0 && a.n_z == 0),
            self.coefficients,
        )
        .expect("associated graded arrows drop Maslov by one")
    }

    /// The column `i = 0`: arrows with `n_w = 0`, singly graded by Maslov.
    pub fn vertical_complex(&self) -> BigradedComplex {
        BigradedComplex::new(
            self.graded_generators(|_| 0),
            self.filtered(|a| a.n_w == 0),
            self.coefficients,
        )
        .expect("vertical arrows drop Maslov by one")
    }

    /// `Σ (-1)^M T^A` over generators.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for g in &self.generators {
            let s = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(2 * g.alexander, BigInt::from(s));
        }
        p
    }

    /// Alexander and Maslov ranges over generators.
    pub fn alexander_range(&self) -> (i64, i64) {
        let it = self.generators.iter().map(|g| g.alexander);
        (it.clone().min().unwrap_or(0), it.max().unwrap_or(0))
    }

    pub fn maslov_range(&self) -> (i64, i64) {
        let it = self.generators.iter().map(|g| g.maslov);
        (it.clone().min().unwrap_or(0), it.max().unwrap_or(0))
    }

    /// Same complex read over F2.
    pub fn to_mod2(&self) -> KnotComplex {
        KnotComplex {
            generators: self.generators.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| KnotArrow {
                    coefficient: BigInt::one(),
                    ..a.clone()
                })
                .collect(),
            coefficients: Coefficients::Mod2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let c: KnotComplex = serde_json::from_str(text).map_err(|e| e.to_string())?;
        KnotComplex::new(c.generators, c.arrows, c.coefficients).map_err(|e| e.to_string())
    }
}

/// Complex with relative gradings measured from the first generator.
pub fn relative_complex(a: &Arrangement) -> Result<KnotComplex, FloerError> {
    let n = a.len();
    let mut generators = Vec::with_capacity(n);
    for x in 0..n {
        let (alexander, maslov) = if x == 0 {
            (0, 0)
        } else {
            let c = a.disk_class(0, x)?;
            (c.n_w - c.n_z, 2 * c.n_w - c.maslov)
        };
        generators.push(KnotGenerator {
            id: x,
            label: format!("x{}", x + 1),
            alexander,
            maslov,
        });
    }
    let arrows = a
        .positive_mu1_classes()?
        .into_iter()
        .map(|c| KnotArrow {
            from: c.from,
            to: c.to,
            n_w: c.n_w,
            n_z: c.n_z,
            coefficient: BigInt::one(),
        })
        .collect();
    KnotComplex::new(generators, arrows, Coefficients::Mod2)
}

/// Shift Alexander gradings to make `χ` symmetric and Maslov gradings so the
/// vertical homology sits in degree zero.
pub fn normalize_gradings(c: &KnotComplex) -> Result<KnotComplex, FloerError> {
    let chi = c.euler_characteristic();
    let (Some(lo), Some(hi)) = (chi.min_doubled(), chi.max_doubled()) else {
        return Err(FloerError::AsymmetricEuler);
    };
    // doubled exponents are even here, so the shift is -(lo + hi) / 4 in T
    let sum = lo + hi;
    if sum % 4 != 0 {
        return Err(FloerError::AsymmetricEuler);
    }
    let a_shift = -sum / 4;
    if !chi.shift_doubled(2 * a_shift).is_symmetric() {
        return Err(FloerError::AsymmetricEuler);
    }
    let vertical = algebra::homology(&c.vertical_complex(), c.coefficients)?;
    let rank = vertical.total_rank() + vertical.torsion.len();
    if rank != 1 || vertical.total_rank() != 1 {
        return Err(FloerError::NormalizationAmbiguous { rank });
    }
    let (&(_, degree), _) = vertical.free_ranks.iter().next().expect("rank one");
    let mut out = c.clone();
    for g in &mut out.generators {
        g.alexander += a_shift;
        g.maslov -= degree;
    }
    Ok(out)
}

/// Search for `±1` arrow coefficients making `d^2 = 0` over the integers.
pub fn assign_signs(c: &KnotComplex) -> Result<KnotComplex, FloerError> {
    let m = c.arrows.len();
    // composable pairs grouped by (source, target, n_w, n_z)
    let mut groups: BTreeMap<(usize, usize, i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for (i, a) in c.arrows.iter().enumerate() {
        for (j, b) in c.arrows.iter().enumerate() {
            if a.to == b.from {
                groups
                    .entry((a.from, b.to, a.n_w + b.n_w, a.n_z + b.n_z))
                    .or_default()
                    .push((i, j));
            }
        }
    }
    // each group becomes checkable once its largest arrow index is assigned
    let mut due: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); m];
    for pairs in groups.into_values() {
        let last = pairs.iter().map(|&(i, j)| i.max(j)).max().expect("nonempty group");
        due[last].push(pairs);
    }
    let mut signs = vec![0i8; m];
    fn search(k: usize, signs: &mut Vec<i8>, due: &[Vec<Vec<(usize, usize)>>]) -> bool {
        if k == signs.len() {
            return true;
        }
        for s in [1i8, -1] {
            signs[k] = s;
            let ok = due[k]
                .iter()
                .all(|pairs| pairs.iter().map(|&(i, j)| i64::from(signs[i] * signs[j])).sum::<i64>() == 0);
            if ok && search(k + 1, signs, due) {
                return true;
            }
        }
        signs[k] = 0;
        false
    }
    if !search(0, &mut signs, &due) {
        return Err(FloerError::SignAssignmentFailed);
    }
    let arrows = c
        .arrows
        .iter()
        .zip(&signs)
        .map(|(a, &s)| KnotArrow {
            coefficient: BigInt::from(s),
            ..a.clone()
        })
        .collect();
    KnotComplex::new(c.generators.clone(), arrows, Coefficients::Integer)
}

/// Ranks over F2 predicted from integral homology by universal coefficients.
pub fn mod2_from_integral(h: &HomologySummary) -> HomologySummary {
    let mut out = HomologySummary::default();
    for (&(a, m), &r) in &h.free_ranks {
        out.add_rank(a, m, r);
    }
    for t in &h.torsion {
        if (&t.order % 2u32).is_zero() {
            out.add_rank(t.alexander, t.maslov, 1);
            out.add_rank(t.alexander, t.maslov + 1, 1);
        }
    }
    out
}

/// The normalized knot complex of a diagram.
pub fn cfk_from_diagram(d: &Diagram, coefficients: Coefficients) -> Result<KnotComplex, FloerError> {
    let arrangement = stabilize(d)?;
    cfk_from_arrangement(&arrangement, coefficients)
}

pub fn cfk_from_arrangement(a: &Arrangement, coefficients: Coefficients) -> Result<KnotComplex, FloerError> {
    let c = normalize_gradings(&relative_complex(a)?)?;
    match coefficients {
        Coefficients::Mod2 => Ok(c),
        Coefficients::Integer => {
            let signed = assign_signs(&c)?;
            let over_z = algebra::homology(&signed.associated_graded(), Coefficients::Integer)?;
            let over_f2 = algebra::homology(&c.associated_graded(), Coefficients::Mod2)?;
            if mod2_from_integral(&over_z).free_ranks != over_f2.free_ranks {
                return Err(FloerError::CoefficientMismatch);
            }
            Ok(signed)
        }
    }
}

/// Homology of the associated graded complex.
pub fn hfk_hat(c: &KnotComplex) -> Result<GradedGroups, FloerError> {
    Ok(algebra::homology(&c.associated_graded(), c.coefficients)?)
}

/// Homology of the `n_w = 0` column, graded by Maslov (Alexander reported as 0).
pub fn vertical_homology(c: &KnotComplex) -> Result<HomologySummary, FloerError> {
    Ok(algebra::homology(&c.vertical_complex(), c.coefficients)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn gen(id: usize, a: i64, m: i64) -> KnotGenerator {
        KnotGenerator {
            id,
            label: format!("x{}", id + 1),
            alexander: a,
            maslov: m,
        }
    }

    fn arrow(from: usize, to: usize, n_w: i64, n_z: i64) -> KnotArrow {
        KnotArrow {
            from,
            to,
            n_w,
            n_z,
            coefficient: BigInt::one(),
        }
    }

    fn right_trefoil() -> KnotComplex {
        KnotComplex::new(
            vec![gen(0, 1, 0), gen(1, 0, -1), gen(2, -1, -2)],
            vec![arrow(1, 0, 1, 0), arrow(1, 2, 0, 1)],
            Coefficients::Mod2,
        )
        .unwrap()
    }

    #[test]
    fn grading_constraints_checked() {
        let bad = KnotComplex::new(
            vec![gen(0, 0, 1), gen(1, 0, 0)],
            vec![arrow(0, 1, 0, 1)],
            Coefficients::Mod2,
        );
        assert!(matches!(bad, Err(FloerError::InconsistentGrading { .. })));
    }

    #[test]
    fn trefoil_hat_and_vertical() {
        let c = right_trefoil();
        let h = hfk_hat(&c).unwrap();
        assert_eq!(h, HomologySummary::from_ranks([(1, 0, 1), (0, -1, 1), (-1, -2, 1)]));
        let v = vertical_homology(&c).unwrap();
        assert_eq!(v, HomologySummary::from_ranks([(0, 0, 1)]));
    }

    #[test]
    fn normalization_recovers_absolute_gradings() {
        let c = right_trefoil();
        let mut shifted = c.clone();
        for g in &mut shifted.generators {
            g.alexander += 3;
            g.maslov -= 5;
        }
        assert_eq!(normalize_gradings(&shifted).unwrap(), c);
    }

    #[test]
    fn signs_for_a_square() {
        // x -> a, x -> b, a -> y, b -> y, all with the same total labels
        let c = KnotComplex::new(
            vec![gen(0, 0, 2), gen(1, 0, 1), gen(2, 0, 1), gen(3, 0, 0)],
            vec![
                arrow(0, 1, 0, 0),
                arrow(0, 2, 0, 0),
                arrow(1, 3, 0, 0),
                arrow(2, 3, 0, 0),
            ],
            Coefficients::Mod2,
        )
        .unwrap();
        let s = assign_signs(&c).unwrap();
        assert!(s.d_squared_zero());
        let product: i64 = s
            .arrows
            .iter()
            .map(|a| i64::try_from(&a.coefficient).unwrap())
            .product();
        assert_eq!(product, -1);
    }

    #[test]
    fn odd_cycle_of_signs_fails() {
        // three paths into the same target cannot cancel over Z
        let c = KnotComplex {
            generators: vec![gen(0, 0, 2), gen(1, 0, 1), gen(2, 0, 1), gen(3, 0, 1), gen(4, 0, 0)],
            arrows: vec![
                arrow(0, 1, 0, 0),
                arrow(0, 2, 0, 0),
                arrow(0, 3, 0, 0),
                arrow(1, 4, 0, 0),
                arrow(2, 4, 0, 0),
                arrow(3, 4, 0, 0),
            ],
            coefficients: Coefficients::Mod2,
        };
        assert_eq!(assign_signs(&c), Err(FloerError::SignAssignmentFailed));
    }

    #[test]
    fn json_roundtrip() {
        let c = right_trefoil();
        assert_eq!(KnotComplex::from_json(&c.to_json()).unwrap(), c);
    }
}
