use knotfloer::algebra::{homology, Coefficients, HomologySummary};
use knotfloer::cover::stabilize;
use knotfloer::diagram::{builtin, builtins, parse_diagram, validate, DiagramError, ViolationCode};
use knotfloer::floer::{cfk_from_diagram, hfk_hat, mod2_from_integral, vertical_homology, KnotComplex};
use knotfloer::invariants::{alexander_polynomial, genus_lower_bound};

const KNOTS: [&str; 5] = ["unknot", "trefoil_right", "trefoil_left", "figure_eight", "knot_9_42"];

fn hfk(name: &str, coefficients: Coefficients) -> HomologySummary {
    hfk_hat(&cfk_from_diagram(&builtin(name).unwrap(), coefficients).unwrap()).unwrap()
}

#[test]
fn every_builtin_validates() {
    let mut expected = KNOTS.to_vec();
    expected.sort();
    assert_eq!(builtins().names(), expected);
    for name in KNOTS {
        assert!(validate(&builtin(name).unwrap()).is_empty(), "{name}");
    }
}

#[test]
fn crossing_count_matches_generators() {
    for name in KNOTS {
        let d = builtin(name).unwrap();
        let c = cfk_from_diagram(&d, Coefficients::Mod2).unwrap();
        assert_eq!(d.torus_crossings().len(), c.len(), "{name}");
        assert_eq!(stabilize(&d).unwrap().len(), c.len(), "{name}");
    }
}

#[test]
fn conjugation_symmetry() {
    for name in KNOTS {
        let h = hfk(name, Coefficients::Mod2);
        for (&(a, m), &r) in &h.free_ranks {
            assert_eq!(h.rank(-a, m - 2 * a), r, "{name} at ({a},{m})");
        }
    }
}

#[test]
fn mirror_rule() {
    for name in KNOTS {
        let d = builtin(name).unwrap();
        let h = hfk(name, Coefficients::Mod2);
        let mirrored = hfk_hat(&cfk_from_diagram(&d.reflect(), Coefficients::Mod2).unwrap()).unwrap();
        assert_eq!(mirrored, h.map_gradings(|a, m| (-a, -m)), "{name}");
    }
    assert_eq!(
        hfk("trefoil_left", Coefficients::Mod2),
        hfk("trefoil_right", Coefficients::Mod2).map_gradings(|a, m| (-a, -m))
    );
}

#[test]
fn vertical_homology_is_one_class_in_degree_zero() {
    for name in KNOTS {
        let c = cfk_from_diagram(&builtin(name).unwrap(), Coefficients::Mod2).unwrap();
        let v = vertical_homology(&c).unwrap();
        assert_eq!(v.total_rank(), 1, "{name}");
        assert_eq!(v.rank_at_maslov(0), 1, "{name}");
    }
}

#[test]
fn genus_bounds_and_total_ranks() {
    let known = [
        ("unknot", 0),
        ("trefoil_right", 1),
        ("trefoil_left", 1),
        ("figure_eight", 1),
        ("knot_9_42", 2),
    ];
    for (name, genus) in known {
        let h = hfk(name, Coefficients::Mod2);
        assert_eq!(genus_lower_bound(&h), genus, "{name}");
        assert!(h.total_rank() >= 1);
        assert_eq!(h.total_rank() == 1, name == "unknot", "{name}");
    }
}

#[test]
fn arrows_satisfy_grading_constraints() {
    for name in KNOTS {
        let c = cfk_from_diagram(&builtin(name).unwrap(), Coefficients::Integer).unwrap();
        for a in &c.arrows {
            let (x, y) = (&c.generators[a.from], &c.generators[a.to]);
            assert!(a.n_w >= 0 && a.n_z >= 0);
            assert_eq!(x.alexander - y.alexander, a.n_z - a.n_w);
            assert_eq!(x.maslov - y.maslov, 1 - 2 * a.n_w);
        }
    }
}

#[test]
fn integer_and_mod2_agree() {
    for name in KNOTS {
        let int = hfk(name, Coefficients::Integer);
        assert_eq!(mod2_from_integral(&int), hfk(name, Coefficients::Mod2), "{name}");
        let c = cfk_from_diagram(&builtin(name).unwrap(), Coefficients::Integer).unwrap();
        assert!(c.d_squared_zero());
        assert_eq!(homology(&c.associated_graded(), Coefficients::Integer).unwrap(), int);
    }
}

#[test]
fn alexander_polynomials() {
    for name in KNOTS {
        let p = alexander_polynomial(&hfk(name, Coefficients::Integer)).unwrap();
        assert!(p.is_symmetric());
    }
}

#[test]
fn complex_json_round_trip() {
    for name in KNOTS {
        let c = cfk_from_diagram(&builtin(name).unwrap(), Coefficients::Integer).unwrap();
        assert_eq!(KnotComplex::from_json(&c.to_json()).unwrap(), c);
    }
}

#[test]
fn diagram_json_round_trip() {
    for name in KNOTS {
        let d = builtin(name).unwrap();
        assert_eq!(parse_diagram(d.to_json().as_bytes()).unwrap(), d);
    }
}

#[test]
fn malformed_diagrams_are_rejected() {
    assert!(matches!(parse_diagram(b"{"), Err(DiagramError::Parse(_))));
    let text = builtin("trefoil_right")
        .unwrap()
        .to_json()
        .replace("\"alpha_period\": [1, 1]", "\"alpha_period\": [2, 2]");
    match parse_diagram(text.as_bytes()) {
        Err(DiagramError::Invalid(v)) => assert!(!v.is_empty()),
        Ok(_) => panic!("non-primitive period accepted"),
        Err(e) => panic!("unexpected error {e}"),
    }
    let unknot = builtin("unknot").unwrap();
    let mut clash = unknot.clone();
    clash.z = clash.w.clone();
    assert!(validate(&clash)
        .iter()
        .any(|v| v.code == ViolationCode::CoincidentBasepoints));
}
