use std::collections::BTreeMap;

use knotfloer::algebra::{
    euler_characteristic, homology, tensor_complex, Arrow, BigradedComplex, Coefficients, Generator, HomologySummary,
};
use knotfloer::cover::{stabilize, Arrangement};
use knotfloer::diagram::geometry::{q, Point, Q};
use knotfloer::diagram::{builtin, Diagram, PLLoop};
use knotfloer::fibered::{
    build_x, d_gamma, hf_dehn_twist, hf_sigma_times_s1, is_zero_matrix, macdonald_oracle, matrix_product,
    HomologyClassGamma, XgdModule,
};
use knotfloer::floer::{cfk_from_diagram, hfk_hat, KnotComplex};
use knotfloer::invariants::{connected_sum, default_truncation, region_homology, truncated_homology, RegionSpec};
use num_traits::Zero;
use proptest::prelude::*;

const KNOTS: [&str; 5] = ["unknot", "trefoil_right", "trefoil_left", "figure_eight", "knot_9_42"];

fn mod2_complex(name: &str) -> KnotComplex {
    cfk_from_diagram(&builtin(name).unwrap(), Coefficients::Mod2).unwrap()
}

/// Summands of a complex with known homology: a free class, or `x -> y`
/// with coefficient `k` (torsion Z/k over the integers).
#[derive(Debug, Clone)]
enum Block {
    Free { alexander: i64, maslov: i64 },
    Pair { alexander: i64, maslov: i64, k: i64 },
}

fn block() -> impl Strategy<Value = Block> {
    prop_oneof![
        (-2i64..=2, -2i64..=2).prop_map(|(alexander, maslov)| Block::Free { alexander, maslov }),
        (-2i64..=2, -2i64..=2, 1i64..=4).prop_map(|(alexander, maslov, k)| Block::Pair { alexander, maslov, k }),
    ]
}

/// A complex built from blocks and then scrambled by grading-preserving
/// elementary changes of basis, so the arrows no longer show the splitting.
fn scrambled(blocks: &[Block], moves: &[(usize, usize, bool)], coefficients: Coefficients) -> BigradedComplex {
    let mut gens = Vec::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for b in blocks {
        match *b {
            Block::Free { alexander, maslov } => gens.push((alexander, maslov)),
            Block::Pair { alexander, maslov, k } => {
                gens.push((alexander, maslov));
                gens.push((alexander, maslov - 1));
                entries.push((gens.len() - 2, gens.len() - 1, k));
            }
        }
    }
    let n = gens.len();
    let mut d = vec![vec![0i64; n]; n];
    for (from, to, k) in entries {
        d[to][from] = k;
    }
    for &(a, b, negative) in moves {
        let (a, b) = (a % n, b % n);
        if a == b || gens[a] != gens[b] {
            continue;
        }
        let c = if negative { -1 } else { 1 };
        // D <- P D P^{-1} with P = I + c E_ab
        for col in 0..n {
            let v = d[b][col];
            d[a][col] += c * v;
        }
        for row in 0..n {
            let v = d[row][a];
            d[row][b] -= c * v;
        }
    }
    let generators = gens
        .iter()
        .enumerate()
        .map(|(k, &(a, m))| Generator::new(format!("g{k}"), a, m))
        .collect();
    let mut arrows = Vec::new();
    for (to, row) in d.iter().enumerate() {
        for (from, &v) in row.iter().enumerate() {
            if v != 0 && (coefficients == Coefficients::Integer || v % 2 != 0) {
                arrows.push(Arrow::new(from, to, v));
            }
        }
    }
    BigradedComplex::new(generators, arrows, coefficients).unwrap()
}

fn expected_free(blocks: &[Block], mod2: bool) -> HomologySummary {
    let mut h = HomologySummary::default();
    for b in blocks {
        match *b {
            Block::Free { alexander, maslov } => h.add_rank(alexander, maslov, 1),
            Block::Pair { alexander, maslov, k } if mod2 && k % 2 == 0 => {
                h.add_rank(alexander, maslov, 1);
                h.add_rank(alexander, maslov - 1, 1);
            }
            Block::Pair { .. } => {}
        }
    }
    h
}

fn shear_and_shift(d: &Diagram, shear: i64, dx: &Q, dy: &Q) -> Diagram {
    let map = |p: &Point| Point::new(&p.x + &(&p.y * Q::from_integer(shear.into())) + dx, &p.y + dy);
    let curve = |c: &PLLoop| {
        PLLoop::new(
            c.vertices.iter().map(map).collect(),
            (c.period.0 + shear * c.period.1, c.period.1),
        )
    };
    Diagram {
        alpha: curve(&d.alpha),
        beta: curve(&d.beta),
        w: map(&d.w).reduce_mod_one(),
        z: map(&d.z).reduce_mod_one(),
    }
}

fn signed_area(poly: &[Point]) -> Q {
    let n = poly.len();
    let mut s = Q::zero();
    for k in 0..n {
        let (a, b) = (&poly[k], &poly[(k + 1) % n]);
        s += &a.x * &b.y - &a.y * &b.x;
    }
    s
}

/// Maslov index by summing the ±1 indices of the canonical disks between
/// consecutive points along alpha~.
fn canonical_maslov(a: &Arrangement, from: usize, to: usize) -> i64 {
    let alpha_at = |p: usize| a.alpha_lift.iter().position(|v| v == &a.points[p].position).unwrap();
    let beta_at = |p: usize| a.beta_lift.iter().position(|v| v == &a.points[p].position).unwrap();
    let step = |x: usize, y: usize| -> i64 {
        let (ax, ay) = (alpha_at(x), alpha_at(y));
        let (bx, by) = (beta_at(x), beta_at(y));
        let mut lp: Vec<Point> = a.alpha_lift[ax..=ay].to_vec();
        let back: Vec<Point> = if by <= bx {
            a.beta_lift[by..=bx].iter().rev().cloned().collect()
        } else {
            a.beta_lift[bx..=by].to_vec()
        };
        lp.pop();
        lp.extend(back);
        lp.pop();
        let s = signed_area(&lp);
        assert!(!s.is_zero());
        if s > Q::zero() {
            1
        } else {
            -1
        }
    };
    if from < to {
        (from..to).map(|i| step(i, i + 1)).sum()
    } else {
        -(to..from).map(|i| step(i, i + 1)).sum::<i64>()
    }
}

/// Prime-power factors of `n`, the primary decomposition of Z/n.
fn prime_powers(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut q = 1;
        while n % p == 0 {
            n /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn universal_coefficients_bound(
        blocks in prop::collection::vec(block(), 1..7),
        moves in prop::collection::vec((0usize..20, 0usize..20, any::<bool>()), 0..12),
    ) {
        let int = homology(&scrambled(&blocks, &moves, Coefficients::Integer), Coefficients::Integer).unwrap();
        let two = homology(&scrambled(&blocks, &moves, Coefficients::Mod2), Coefficients::Mod2).unwrap();
        prop_assert_eq!(&int.free_ranks, &expected_free(&blocks, false).free_ranks);
        prop_assert_eq!(&two.free_ranks, &expected_free(&blocks, true).free_ranks);
        for (&(a, m), &r) in &int.free_ranks {
            prop_assert!(two.rank(a, m) >= r);
        }
        let mut expected = Vec::new();
        for b in &blocks {
            if let Block::Pair { alexander, maslov, k } = *b {
                expected.extend(prime_powers(k).into_iter().map(|q| (alexander, maslov - 1, q)));
            }
        }
        let mut actual = Vec::new();
        for t in &int.torsion {
            let order = i64::try_from(&t.order).unwrap();
            actual.extend(prime_powers(order).into_iter().map(|q| (t.alexander, t.maslov, q)));
        }
        expected.sort();
        actual.sort();
        prop_assert_eq!(actual, expected);
    }

    #[test]
    fn tensor_is_associative_on_ranks(
        a in prop::collection::vec(block(), 1..4),
        b in prop::collection::vec(block(), 1..4),
        c in prop::collection::vec(block(), 1..4),
        moves in prop::collection::vec((0usize..20, 0usize..20, any::<bool>()), 0..6),
        integer in any::<bool>(),
    ) {
        let coeff = if integer { Coefficients::Integer } else { Coefficients::Mod2 };
        let (x, y, z) = (scrambled(&a, &moves, coeff), scrambled(&b, &moves, coeff), scrambled(&c, &moves, coeff));
        let left = homology(&tensor_complex(&tensor_complex(&x, &y), &z), coeff).unwrap();
        let right = homology(&tensor_complex(&x, &tensor_complex(&y, &z)), coeff).unwrap();
        prop_assert_eq!(left.free_ranks, right.free_ranks);
    }

    #[test]
    fn euler_characteristic_is_multiplicative(
        a in prop::collection::vec(block(), 1..5),
        b in prop::collection::vec(block(), 1..5),
        moves in prop::collection::vec((0usize..20, 0usize..20, any::<bool>()), 0..8),
    ) {
        let (x, y) = (scrambled(&a, &moves, Coefficients::Integer), scrambled(&b, &moves, Coefficients::Integer));
        let chi = |c: &BigradedComplex| euler_characteristic(&homology(c, Coefficients::Integer).unwrap()).unwrap();
        prop_assert_eq!(chi(&tensor_complex(&x, &y)), &chi(&x) * &chi(&y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hfk_is_invariant_under_shear_and_translation(
        name in prop::sample::select(vec!["trefoil_right", "figure_eight"]),
        shear in -2i64..=2,
        (xn, yn) in (0i64..7, 0i64..7),
    ) {
        let d = builtin(name).unwrap();
        let moved = shear_and_shift(&d, shear, &q(xn, 7), &q(yn, 11));
        prop_assert!(knotfloer::diagram::validate(&moved).is_empty());
        let original = hfk_hat(&cfk_from_diagram(&d, Coefficients::Mod2).unwrap()).unwrap();
        let sheared = hfk_hat(&cfk_from_diagram(&moved, Coefficients::Mod2).unwrap()).unwrap();
        prop_assert_eq!(original, sheared);
    }

    #[test]
    fn disk_classes_are_additive(
        name in prop::sample::select(vec!["trefoil_right", "figure_eight", "knot_9_42"]),
        picks in (0usize..100, 0usize..100, 0usize..100),
    ) {
        let a = stabilize(&builtin(name).unwrap()).unwrap();
        let n = a.len();
        let (x, y, z) = (picks.0 % n, picks.1 % n, picks.2 % n);
        prop_assume!(x != y && y != z && x != z);
        let (xy, yz, xz) = (a.disk_class(x, y).unwrap(), a.disk_class(y, z).unwrap(), a.disk_class(x, z).unwrap());
        for f in 0..a.faces.len() {
            prop_assert_eq!(xz.multiplicities[f], xy.multiplicities[f] + yz.multiplicities[f]);
        }
        prop_assert_eq!(xz.maslov, xy.maslov + yz.maslov);
        let yx = a.disk_class(y, x).unwrap();
        prop_assert!(xy.multiplicities.iter().zip(&yx.multiplicities).all(|(p, m)| *p == -*m));
    }

    #[test]
    fn region_homology_stable_in_truncation(
        name in prop::sample::select(KNOTS.to_vec()),
        region in prop_oneof![
            Just(RegionSpec::MaxNeg),
            Just(RegionSpec::MinNeg),
            Just(RegionSpec::QuotMinNonneg),
            Just(RegionSpec::QuotMaxNonneg),
            (-3i64..=3).prop_map(|m| RegionSpec::IOrJ { m }),
            (-3i64..=3).prop_map(|m| RegionSpec::IAndJ { m }),
            (-2i64..=3).prop_map(|t| RegionSpec::Box { t }),
        ],
        extra in 0u64..4,
    ) {
        let c = mod2_complex(name);
        let base = default_truncation(&c, &region);
        let first = region_homology(&c, &region, base).unwrap();
        let later = region_homology(&c, &region, base + 1 + extra).unwrap();
        prop_assert_eq!(first, later);
    }

    #[test]
    fn connected_sum_convolves(
        first in prop::sample::select(KNOTS.to_vec()),
        second in prop::sample::select(vec!["unknot", "trefoil_right", "trefoil_left", "figure_eight"]),
    ) {
        let (a, b) = (mod2_complex(first), mod2_complex(second));
        let sum = hfk_hat(&connected_sum(&a, &b)).unwrap();
        prop_assert_eq!(sum, hfk_hat(&a).unwrap().convolve(&hfk_hat(&b).unwrap()));
    }

    #[test]
    fn sub_and_quotient_euler_characteristics_add(
        name in prop::sample::select(KNOTS.to_vec()),
        depth in 3u64..9,
    ) {
        let c = mod2_complex(name);
        let chi = |ranks: &BTreeMap<i64, usize>| -> i64 {
            ranks.iter().map(|(&d, &r)| if d.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }).sum()
        };
        let sub = truncated_homology(&c, &RegionSpec::MaxNeg, depth);
        let quotient = truncated_homology(&c, &RegionSpec::QuotMaxNonneg, depth);
        let per_column: i64 = c.generators.iter().map(|g| if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 }).sum();
        prop_assert_eq!(chi(&sub) + chi(&quotient), (2 * depth as i64 + 1) * per_column);
    }

    #[test]
    fn dehn_twist_rank_bounded_by_product(g in 1u32..6, k in 1i64..5, negative in any::<bool>()) {
        let k = if negative { -k } else { k };
        let twist = hf_dehn_twist(g, k).unwrap();
        let product = hf_sigma_times_s1(g, k).unwrap();
        prop_assert!(twist.total() <= product.total());
    }
}

#[test]
fn maslov_matches_canonical_disk_sum() {
    for name in ["trefoil_right", "trefoil_left", "figure_eight"] {
        let a = stabilize(&builtin(name).unwrap()).unwrap();
        assert!(a.len() <= 5);
        for x in 0..a.len() {
            for y in 0..a.len() {
                if x != y {
                    assert_eq!(
                        a.disk_class(x, y).unwrap().maslov,
                        canonical_maslov(&a, x, y),
                        "{name} {x}->{y}"
                    );
                }
            }
        }
    }
}

#[test]
fn positive_classes_have_nonnegative_basepoint_counts() {
    for name in KNOTS {
        let a = stabilize(&builtin(name).unwrap()).unwrap();
        for c in a.positive_mu1_classes().unwrap() {
            assert!(c.n_w >= 0 && c.n_z >= 0);
        }
    }
}

#[test]
fn d_gamma_squares_to_zero_exhaustively() {
    for g in 1..=3u32 {
        let mut gammas: Vec<HomologyClassGamma> = (0..2 * g).map(|k| HomologyClassGamma::basis(g, k)).collect();
        for a in 0..2 * g as usize {
            for b in a + 1..2 * g as usize {
                let mut v = vec![0; 2 * g as usize];
                v[a] = 1;
                v[b] = 1;
                gammas.push(HomologyClassGamma::new(g, v).unwrap());
            }
        }
        for d in 0..=3 {
            let x: XgdModule = build_x(g, d);
            for gamma in &gammas {
                assert_eq!(gamma.self_intersection(), 0);
                let m = d_gamma(&x, gamma);
                assert!(
                    is_zero_matrix(&matrix_product(&m, &m)),
                    "g={g} d={d} gamma={:?}",
                    gamma.coefficients
                );
            }
        }
    }
}

#[test]
fn module_and_symmetric_product_totals_agree() {
    for g in 0..=4 {
        for d in 0..=4 {
            assert_eq!(build_x(g, d).len(), macdonald_oracle(g, d).total());
        }
    }
}

#[test]
fn borromean_is_iterated_convolution() {
    use knotfloer::fibered::borromean_hfk;
    let mut acc = borromean_hfk(0);
    for g in 1..=4 {
        acc = acc.convolve(&borromean_hfk(1));
        assert_eq!(borromean_hfk(g), acc);
    }
}
