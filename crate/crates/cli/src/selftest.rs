//! Named acceptance checks run by `knotfloer selftest`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::path::Path;
use std::thread;
use std::time::Instant;

use knotfloer::algebra::{Coefficients, HomologySummary, LaurentPolynomial};
use knotfloer::diagram::{builtin, builtins, parse_diagram, Diagram};
use knotfloer::fibered::{
    borromean_hfk, build_x, d_gamma, d_gamma_prime, hf_dehn_twist, is_zero_matrix, macdonald_oracle, matrix_product,
    HomologyClassGamma, Matrix,
};
use knotfloer::floer::{cfk_from_diagram, hfk_hat, vertical_homology, KnotComplex};
use knotfloer::invariants::{
    alexander_polynomial, connected_sum, genus_lower_bound, region_homology_default, RegionSpec,
};
use knotfloer::registry::{Named, Registry};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::digest;
use crate::report::Report;

type Ranks = BTreeMap<(i64, i64), usize>;

/// Where the checks read their diagrams from.
struct Diagrams<'a> {
    dir: Option<&'a Path>,
}

impl Diagrams<'_> {
    fn names(&self) -> Vec<&'static str> {
        builtins().names()
    }

    fn load(&self, name: &str) -> Result<Diagram, String> {
        match self.dir {
            None => builtin(name).map_err(|e| format!("{name}: {e}")),
            Some(dir) => {
                let path = dir.join(format!("{name}.json"));
                let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                parse_diagram(&bytes).map_err(|e| format!("{}: {e}", path.display()))
            }
        }
    }

    fn complex(&self, name: &str, coefficients: Coefficients) -> Result<KnotComplex, String> {
        cfk_from_diagram(&self.load(name)?, coefficients).map_err(|e| format!("{name}: {e}"))
    }

    fn hfk(&self, name: &str, coefficients: Coefficients) -> Result<HomologySummary, String> {
        hfk_hat(&self.complex(name, coefficients)?).map_err(|e| format!("{name}: {e}"))
    }
}

struct Outcome {
    pass: bool,
    expected: String,
    actual: String,
}

fn compare<T: PartialEq + std::fmt::Debug>(expected: T, actual: T) -> Outcome {
    Outcome {
        pass: expected == actual,
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    }
}

type CheckFn = fn(&Diagrams) -> Result<Outcome, String>;

struct Check {
    name: &'static str,
    criterion: u32,
    time_limit: Option<f64>,
    run: CheckFn,
}

impl Named for Check {
    fn name(&self) -> &'static str {
        self.name
    }
}

fn checks() -> Registry<Check> {
    let table: [(&'static str, Option<f64>, CheckFn); 14] = [
        ("hfk_trefoil_right_table", Some(1.0), trefoil_table),
        ("cfk_knot_9_42_arrows", Some(10.0), nine_42_arrows),
        ("hfk_knot_9_42_table", None, nine_42_table_check),
        ("euler_trefoil_and_knot_9_42", None, euler),
        ("symmetry_all_builtins", None, symmetry),
        ("vertical_homology_all_builtins", None, vertical),
        ("top_region_knot_9_42", None, top_region),
        ("large_surgery_all_builtins", None, large_surgery),
        ("kunneth_trefoil_sum", None, kunneth),
        ("x_module_vs_macdonald", Some(1.0), x_module),
        ("differentials_square_zero", None, square_zero),
        ("dehn_twist_genus_3", None, dehn_twist),
        ("borromean_sums", None, borromean),
        ("arrow_gradings_all_builtins", None, arrow_gradings),
    ];
    let mut reg = Registry::new();
    for (k, (name, time_limit, run)) in table.into_iter().enumerate() {
        reg.register(Box::new(Check {
            name,
            criterion: k as u32 + 1,
            time_limit,
            run,
        }));
    }
    reg
}

fn ranks(entries: &[(i64, i64, usize)]) -> Ranks {
    entries.iter().map(|&(a, m, r)| ((a, m), r)).collect()
}

fn convolve(x: &Ranks, y: &Ranks) -> Ranks {
    let mut out = Ranks::new();
    for (&(a1, m1), &r1) in x {
        for (&(a2, m2), &r2) in y {
            *out.entry((a1 + a2, m1 + m2)).or_insert(0) += r1 * r2;
        }
    }
    out
}

fn trefoil_table(d: &Diagrams) -> Result<Outcome, String> {
    let h = d.hfk("trefoil_right", Coefficients::Integer)?;
    Ok(compare(
        (ranks(&[(1, 0, 1), (0, -1, 1), (-1, -2, 1)]), 0),
        (h.free_ranks, h.torsion.len()),
    ))
}

const NINE_42_OFFSETS: [(i64, i64); 9] = [
    (1, 0),
    (0, 0),
    (0, -1),
    (1, -1),
    (1, 1),
    (-1, 1),
    (-1, 0),
    (0, 0),
    (0, 1),
];
const NINE_42_DIFFERENTIAL: [(usize, usize); 12] = [
    (1, 2),
    (1, 4),
    (2, 3),
    (4, 3),
    (5, 2),
    (5, 4),
    (5, 6),
    (5, 8),
    (6, 7),
    (8, 7),
    (9, 6),
    (9, 8),
];

type ArrowSet = BTreeSet<(usize, usize, i64, i64)>;

/// Reference 9_42 complex: `(alexander, maslov)` per generator and arrows.
fn nine_42_reference() -> (Vec<(i64, i64)>, ArrowSet) {
    let arrows: ArrowSet = NINE_42_DIFFERENTIAL
        .iter()
        .map(|&(x, y)| {
            let (a, b) = (NINE_42_OFFSETS[x - 1], NINE_42_OFFSETS[y - 1]);
            (x - 1, y - 1, a.0 - b.0, a.1 - b.1)
        })
        .collect();
    let mut maslov: Vec<Option<i64>> = vec![None; 9];
    maslov[5] = Some(3);
    while maslov.iter().any(Option::is_none) {
        for &(x, y, n_w, _) in &arrows {
            match (maslov[x], maslov[y]) {
                (Some(m), None) => maslov[y] = Some(m - 1 + 2 * n_w),
                (None, Some(m)) => maslov[x] = Some(m + 1 - 2 * n_w),
                _ => {}
            }
        }
    }
    let gens = NINE_42_OFFSETS
        .iter()
        .zip(&maslov)
        .map(|(&(i, j), m)| (j - i, m.unwrap()))
        .collect();
    (gens, arrows)
}

fn bijection_exists(
    reference: &[(i64, i64)],
    reference_arrows: &ArrowSet,
    computed: &[(i64, i64)],
    computed_arrows: &ArrowSet,
    assignment: &mut Vec<usize>,
) -> bool {
    if assignment.len() == reference.len() {
        let mapped: ArrowSet = reference_arrows
            .iter()
            .map(|&(x, y, w, z)| (assignment[x], assignment[y], w, z))
            .collect();
        return &mapped == computed_arrows;
    }
    for c in 0..computed.len() {
        if !assignment.contains(&c) && computed[c] == reference[assignment.len()] {
            assignment.push(c);
            if bijection_exists(reference, reference_arrows, computed, computed_arrows, assignment) {
                return true;
            }
            assignment.pop();
        }
    }
    false
}

fn nine_42_arrows(d: &Diagrams) -> Result<Outcome, String> {
    let c = d.complex("knot_9_42", Coefficients::Mod2)?;
    let (gens, arrows) = nine_42_reference();
    let computed: Vec<(i64, i64)> = c.generators.iter().map(|g| (g.alexander, g.maslov)).collect();
    let computed_arrows: ArrowSet = c.arrows.iter().map(|a| (a.from, a.to, a.n_w, a.n_z)).collect();
    let found =
        computed.len() == gens.len() && bijection_exists(&gens, &arrows, &computed, &computed_arrows, &mut Vec::new());
    Ok(Outcome {
        pass: found,
        expected: "9 generators, 12 arrows, grading-preserving bijection".into(),
        actual: format!(
            "{} generators, {} arrows, bijection found: {found}",
            computed.len(),
            computed_arrows.len()
        ),
    })
}

fn nine_42_table() -> Ranks {
    ranks(&[(2, 3, 1), (1, 2, 2), (0, 1, 2), (0, 0, 1), (-1, 0, 2), (-2, -1, 1)])
}

fn nine_42_table_check(d: &Diagrams) -> Result<Outcome, String> {
    let h = d.hfk("knot_9_42", Coefficients::Integer)?;
    Ok(compare((nine_42_table(), 0), (h.free_ranks, h.torsion.len())))
}

fn signed_euler(r: &Ranks) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        r.iter()
            .map(|(&(a, m), &k)| (a, if m % 2 == 0 { k as i64 } else { -(k as i64) })),
    )
}

fn euler(d: &Diagrams) -> Result<Outcome, String> {
    let mut actual = Vec::new();
    for name in ["trefoil_right", "knot_9_42"] {
        let p = alexander_polynomial(&d.hfk(name, Coefficients::Integer)?).map_err(|e| e.to_string())?;
        actual.push((p.to_string(), p.is_symmetric(), p.eval_one().magnitude().to_string()));
    }
    let trefoil = LaurentPolynomial::from_terms([(1, 1), (0, -1), (-1, 1)]);
    let nine = signed_euler(&nine_42_table());
    let expected: Vec<_> = [trefoil, nine]
        .iter()
        .map(|p| (p.to_string(), true, "1".to_string()))
        .collect();
    Ok(compare(expected, actual))
}

fn symmetry(d: &Diagrams) -> Result<Outcome, String> {
    let mut failures = Vec::new();
    for name in d.names() {
        let h = d.hfk(name, Coefficients::Mod2)?;
        if h.free_ranks.iter().any(|(&(a, m), &r)| h.rank(-a, m - 2 * a) != r) {
            failures.push(format!("{name}: conjugation"));
        }
        let mirror =
            hfk_hat(&cfk_from_diagram(&d.load(name)?.reflect(), Coefficients::Mod2).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let flipped: Ranks = h.free_ranks.iter().map(|(&(a, m), &r)| ((-a, -m), r)).collect();
        if mirror.free_ranks != flipped {
            failures.push(format!("{name}: mirror"));
        }
    }
    Ok(compare(Vec::<String>::new(), failures))
}

fn vertical(d: &Diagrams) -> Result<Outcome, String> {
    let mut actual = BTreeMap::new();
    for name in d.names() {
        let v = vertical_homology(&d.complex(name, Coefficients::Mod2)?).map_err(|e| e.to_string())?;
        actual.insert(name, v.free_ranks.values().sum::<usize>() * 10 + v.rank_at_maslov(0));
    }
    let expected = d.names().into_iter().map(|n| (n, 11)).collect::<BTreeMap<_, _>>();
    let mut o = compare(expected, actual);
    o.expected.push_str(" (10 x total rank + rank at Maslov 0)");
    Ok(o)
}

fn top_region(d: &Diagrams) -> Result<Outcome, String> {
    let c = d.complex("knot_9_42", Coefficients::Mod2)?;
    let s = region_homology_default(&c, &RegionSpec::Box { t: 1 }).map_err(|e| e.to_string())?;
    let top = hfk_hat(&c).map_err(|e| e.to_string())?.rank_at_alexander(2);
    Ok(compare((0, 1, 1), (s.towers.len(), s.reduced_rank(), top)))
}

fn large_surgery(d: &Diagrams) -> Result<Outcome, String> {
    let mut failures = Vec::new();
    for name in d.names() {
        let c = d.complex(name, Coefficients::Mod2)?;
        let g = genus_lower_bound(&hfk_hat(&c).map_err(|e| e.to_string())?) as i64;
        for size in g + 1..=g + 6 {
            for m in [size, -size] {
                match region_homology_default(&c, &RegionSpec::IAndJ { m }) {
                    Ok(s) if s.towers.len() == 1 && s.reduced.is_zero() => {}
                    Ok(s) => failures.push(format!(
                        "{name} m={m}: {} towers, reduced {}",
                        s.towers.len(),
                        s.reduced_rank()
                    )),
                    Err(e) => failures.push(format!("{name} m={m}: {e}")),
                }
            }
        }
    }
    Ok(compare(Vec::<String>::new(), failures))
}

fn kunneth(d: &Diagrams) -> Result<Outcome, String> {
    let t = d.complex("trefoil_right", Coefficients::Mod2)?;
    let single = hfk_hat(&t).map_err(|e| e.to_string())?.free_ranks;
    let sum = hfk_hat(&connected_sum(&t, &t)).map_err(|e| e.to_string())?.free_ranks;
    Ok(compare(convolve(&single, &single), sum))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        0
    } else {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }
}

fn x_module(_: &Diagrams) -> Result<Outcome, String> {
    let mut failures = Vec::new();
    for g in 0..=4u32 {
        for depth in 0..=4u32 {
            let module = build_x(g, depth).len() as u64;
            let series = macdonald_oracle(g, depth).total() as u64;
            let formula: u64 = (0..=depth.min(2 * g) as u64)
                .map(|i| binomial(2 * g as u64, i) * (depth as u64 - i + 1))
                .sum();
            if module != series || module != formula {
                failures.push(format!("g={g} d={depth}: {module} vs {series} vs {formula}"));
            }
        }
    }
    Ok(compare((Vec::<String>::new(), 1), (failures, build_x(2, 0).len())))
}

fn square_zero(_: &Diagrams) -> Result<Outcome, String> {
    let mut failures = Vec::new();
    for g in 1..=3u32 {
        for depth in 0..=3u32 {
            let x = build_x(g, depth);
            for class in 0..2 * g {
                let gamma = HomologyClassGamma::basis(g, class);
                let m = d_gamma(&x, &gamma);
                if !is_zero_matrix(&matrix_product(&m, &m)) {
                    failures.push(format!("D g={g} d={depth} class={class}"));
                }
                if class < 2 {
                    let p = d_gamma_prime(&x, &gamma).map_err(|e| e.to_string())?;
                    if !is_zero_matrix(&matrix_product(&p, &p)) {
                        failures.push(format!("D' g={g} d={depth} class={class}"));
                    }
                }
            }
        }
    }
    Ok(compare(Vec::<String>::new(), failures))
}

/// Rank over Q by fraction-free elimination.
fn rational_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let (f, g) = (a[r][c], a[rank][c]);
                for k in 0..cols {
                    a[r][k] = a[r][k] * g - a[rank][k] * f;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn dehn_twist(_: &Diagrams) -> Result<Outcome, String> {
    let x = build_x(3, 1);
    let m = d_gamma_prime(&x, &HomologyClassGamma::basis(3, 0)).map_err(|e| e.to_string())?;
    let library = hf_dehn_twist(3, 1).map_err(|e| e.to_string())?.total();
    Ok(compare((6, 6), (x.len() - 2 * rational_rank(&m), library)))
}

fn borromean(_: &Diagrams) -> Result<Outcome, String> {
    let one = ranks(&[(1, 1, 1), (0, 0, 2), (-1, -1, 1)]);
    let two = convolve(&one, &one);
    Ok(compare(
        (one, two),
        (borromean_hfk(1).free_ranks, borromean_hfk(2).free_ranks),
    ))
}

fn arrow_gradings(d: &Diagrams) -> Result<Outcome, String> {
    let mut failures = Vec::new();
    for name in d.names() {
        let c = d.complex(name, Coefficients::Integer)?;
        for a in &c.arrows {
            let (x, y) = (&c.generators[a.from], &c.generators[a.to]);
            if a.n_w < 0
                || a.n_z < 0
                || x.alexander - y.alexander != a.n_z - a.n_w
                || x.maslov - y.maslov != 1 - 2 * a.n_w
            {
                failures.push(format!("{name} {}->{}", a.from, a.to));
            }
        }
    }
    Ok(compare(Vec::<String>::new(), failures))
}

pub fn run(filter: Option<&str>, dir: Option<&Path>) -> Result<Report, CliError> {
    if let Some(dir) = dir {
        if !dir.is_dir() {
            return Err(CliError::Input(format!("{} is not a directory", dir.display())));
        }
    }
    let registry = checks();
    let mut selected: Vec<&Check> = registry
        .iter()
        .filter(|c| filter.is_none_or(|f| c.name.contains(f)))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Input(format!("no check matches `{}`", filter.unwrap_or(""))));
    }
    selected.sort_by_key(|c| c.criterion);

    let diagrams = Diagrams { dir };
    let outcomes: Vec<(Outcome, f64)> = thread::scope(|s| {
        let handles: Vec<_> = selected
            .iter()
            .map(|check| {
                let diagrams = &diagrams;
                s.spawn(move || {
                    let start = Instant::now();
                    let outcome = (check.run)(diagrams).unwrap_or_else(|e| Outcome {
                        pass: false,
                        expected: "no error".into(),
                        actual: format!("error: {e}"),
                    });
                    (outcome, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join().unwrap_or_else(|_| {
                    (
                        Outcome {
                            pass: false,
                            expected: "no panic".into(),
                            actual: "panicked".into(),
                        },
                        0.0,
                    )
                })
            })
            .collect()
    });

    let mut text = String::new();
    let mut results = Vec::new();
    let mut failed = 0;
    for (check, (outcome, secs)) in selected.iter().zip(outcomes) {
        let in_time = check.time_limit.is_none_or(|limit| secs < limit);
        let pass = outcome.pass && in_time;
        if !pass {
            failed += 1;
        }
        let status = if pass { "PASS" } else { "FAIL" };
        writeln!(text, "{status} [{:>2}] {}", check.criterion, check.name).unwrap();
        if !pass {
            writeln!(text, "    expected: {}", outcome.expected).unwrap();
            writeln!(text, "    actual:   {}", outcome.actual).unwrap();
            if !in_time {
                writeln!(
                    text,
                    "    time limit {}s exceeded",
                    check.time_limit.unwrap_or_default()
                )
                .unwrap();
            }
        }
        // Timings stay out of the JSON so that reports are reproducible.
        results.push(json!({
            "name": check.name,
            "criterion": check.criterion,
            "pass": pass,
            "expected": outcome.expected,
            "actual": outcome.actual,
        }));
    }
    writeln!(text, "{} passed, {failed} failed", results.len() - failed).unwrap();

    let command = json!({
        "name": "selftest",
        "filter": filter,
        "diagram_dir": dir.map(|d| d.display().to_string()),
    });
    let mut sources = String::new();
    for name in builtins().names() {
        let text = match dir {
            None => builtins().get(name).map(|b| b.source.to_string()).unwrap_or_default(),
            Some(dir) => std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap_or_default(),
        };
        sources.push_str(&text);
    }
    let result: Value = json!({"checks": results, "passed": results.len() - failed, "failed": failed});
    let mut report = Report::new(command, digest(sources.as_bytes()), result, text);
    report.failed = failed > 0;
    Ok(report)
}
