use std::fmt::Write;

use knotfloer::algebra::{Coefficients, HomologySummary, TowerDirection};
use knotfloer::diagram::builtins;
use knotfloer::fibered::models;
use knotfloer::floer::{cfk_from_diagram, hfk_hat, KnotComplex};
use knotfloer::invariants::{
    alexander_polynomial, genus_lower_bound, region_homology, region_homology_default, RegionSpec,
};
use knotfloer::registry::Named;
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{digest, DiagramInput};
use crate::report::Report;

fn knot_complex(input: &DiagramInput, coefficients: Coefficients) -> Result<KnotComplex, CliError> {
    Ok(cfk_from_diagram(&input.diagram()?, coefficients)?)
}

fn groups_json(h: &HomologySummary) -> Value {
    let groups: Vec<Value> = h
        .free_ranks
        .iter()
        .rev()
        .map(|(&(a, m), &r)| json!({"alexander": a, "maslov": m, "rank": r}))
        .collect();
    let torsion: Vec<Value> = h
        .torsion
        .iter()
        .map(|t| json!({"alexander": t.alexander, "maslov": t.maslov, "order": t.order.to_string()}))
        .collect();
    json!({"groups": groups, "torsion": torsion})
}

pub fn hfk(input: &DiagramInput, coefficients: Coefficients) -> Result<Report, CliError> {
    let diagram = input.diagram()?;
    let h = hfk_hat(&cfk_from_diagram(&diagram, coefficients)?)?;
    let mirror = hfk_hat(&cfk_from_diagram(&diagram.reflect(), coefficients)?)?;
    let polynomial = alexander_polynomial(&h)?;
    let genus = genus_lower_bound(&h);
    let conjugation = h.free_ranks.iter().all(|(&(a, m), &r)| h.rank(-a, m - 2 * a) == r);
    let mirror_rule = mirror.free_ranks == h.map_gradings(|a, m| (-a, -m)).free_ranks;

    let mut text = String::new();
    for (&(a, m), r) in h.free_ranks.iter().rev() {
        writeln!(text, "({a},{m}): {r}").unwrap();
    }
    for t in &h.torsion {
        writeln!(text, "({},{}): torsion Z/{}", t.alexander, t.maslov, t.order).unwrap();
    }
    writeln!(text, "alexander polynomial: {polynomial}").unwrap();
    writeln!(text, "genus lower bound: {genus}").unwrap();
    writeln!(text, "conjugation symmetry: {}", verdict(conjugation)).unwrap();
    writeln!(text, "mirror rule: {}", verdict(mirror_rule)).unwrap();

    let terms: Vec<Value> = polynomial
        .terms()
        .map(|(doubled, c)| json!({"exponent": doubled / 2, "coefficient": c.to_string()}))
        .collect();
    let mut result = groups_json(&h);
    result["coefficients"] = json!(coefficients.name());
    result["total_rank"] = json!(h.total_rank());
    result["alexander_polynomial"] = json!({"text": polynomial.to_string(), "terms": terms});
    result["genus_lower_bound"] = json!(genus);
    result["symmetry"] = json!({"conjugation": conjugation, "mirror": mirror_rule});
    let command = json!({"name": "hfk", "diagram": input.label, "coefficients": coefficients.name()});
    Ok(Report::new(command, input.digest(), result, text))
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "FAILS"
    }
}

pub fn complex(input: &DiagramInput, coefficients: Coefficients) -> Result<Report, CliError> {
    let c = knot_complex(input, coefficients)?;
    let result: Value = serde_json::to_value(&c).expect("complexes serialize");
    let text = format!("{}\n", c.to_json());
    let command = json!({"name": "complex", "diagram": input.label, "coefficients": coefficients.name()});
    Ok(Report::new(command, input.digest(), result, text))
}

/// Published values for zero surgery on 9_42, shown for comparison only.
fn nine_42_reference() -> Value {
    json!({
        "status": "reference values from the literature, not computed",
        "hf_plus_zero_surgery": {"0": "T_{-1/2} + T_{1/2}", "1": "Z", "-1": "Z", "other": "0"},
        "d_invariants": {"-1/2": "-1/2", "1/2": "1/2"},
    })
}

pub fn surgery(
    input: &DiagramInput,
    p: i64,
    m: i64,
    negative: bool,
    truncation: Option<u64>,
) -> Result<Report, CliError> {
    if p < 1 {
        return Err(CliError::Input(format!("--p must be positive, got {p}")));
    }
    let c = knot_complex(input, Coefficients::Mod2)?;
    let genus = genus_lower_bound(&hfk_hat(&c)?) as i64;
    let mut warnings = Vec::new();
    if p < 2 * genus - 1 {
        warnings.push(format!(
            "p = {p} is below 2g-1 = {}; the identification may not hold",
            2 * genus - 1
        ));
    }
    let region = if negative {
        RegionSpec::IAndJ { m }
    } else {
        RegionSpec::IOrJ { m: -m }
    };
    let summary = match truncation {
        Some(t) => region_homology(&c, &region, t)?,
        None => region_homology_default(&c, &region)?,
    };
    let shift = if negative {
        Ratio::new(p - (2 * m + p).pow(2), 4 * p)
    } else {
        warnings
            .push("positive surgery gradings are relative to the region complex and carry no absolute shift".into());
        Ratio::from_integer(0)
    };
    let grade = |k: i64| (Ratio::from_integer(k) + shift).to_string();

    let side = if negative { "neg" } else { "pos" };
    let mut text = format!("region {region}, grading shift {shift}\n");
    let towers: Vec<Value> = summary
        .towers
        .iter()
        .map(|t| {
            let (direction, end) = match t.direction {
                TowerDirection::Up => ("up", "bottom"),
                TowerDirection::Down => ("down", "top"),
            };
            writeln!(text, "tower ({direction}) with {end} in degree {}", grade(t.maslov)).unwrap();
            json!({"direction": direction, "finite_end": grade(t.maslov)})
        })
        .collect();
    let reduced: Vec<Value> = summary
        .reduced
        .free_ranks
        .iter()
        .rev()
        .map(|(&(_, k), &r)| {
            writeln!(text, "reduced degree {}: {r}", grade(k)).unwrap();
            json!({"degree": grade(k), "rank": r})
        })
        .collect();
    writeln!(text, "reduced rank: {}", summary.reduced_rank()).unwrap();
    if m.abs() > genus {
        writeln!(text, "|m| > genus bound {genus}: agrees with HF+ of the sphere").unwrap();
    }

    let mut result = json!({
        "region": region.to_string(),
        "genus_lower_bound": genus,
        "grading_shift": shift.to_string(),
        "towers": towers,
        "reduced": reduced,
        "reduced_rank": summary.reduced_rank(),
    });
    if input.builtin.as_deref() == Some("knot_9_42") {
        result["reference"] = nine_42_reference();
        text.push_str("reference (not computed): HF+(0-surgery) = T_{-1/2} + T_{1/2} in spin^c 0, Z in spin^c +-1; d_{+-1/2} = +-1/2\n");
    }
    let command = json!({
        "name": "surgery", "diagram": input.label, "p": p, "m": m, "side": side, "truncation": truncation,
    });
    Ok(Report::new(command, input.digest(), result, text).with_warnings(warnings))
}

pub fn fibered(model: &str, genus: u32, k: Option<i64>, d: Option<i64>) -> Result<Report, CliError> {
    let entry = models().get(model).ok_or_else(|| {
        CliError::Input(format!(
            "unknown model `{model}` (available: {})",
            models().names().join(", ")
        ))
    })?;
    let parameter = match (entry.parameter(), k, d) {
        ("k", Some(k), None) => k,
        ("d", None, Some(d)) => d,
        (name, _, _) => return Err(CliError::Input(format!("model `{model}` takes exactly --{name}"))),
    };
    let ranks = entry.evaluate(genus, parameter)?;

    let mut text = String::new();
    for (degree, r) in ranks.ranks.iter().rev() {
        writeln!(text, "degree {degree}: {r}").unwrap();
    }
    writeln!(text, "total: {}", ranks.total()).unwrap();
    let table: Vec<Value> = ranks
        .ranks
        .iter()
        .rev()
        .map(|(deg, r)| json!({"degree": deg, "rank": r}))
        .collect();
    let mut result = json!({"ranks": table, "total": ranks.total()});
    if model == "dehn_twist" {
        let depth = genus as i64 - 1 - parameter.abs();
        let stable = 3 * depth < 2 * genus as i64 - 1;
        writeln!(text, "3d < 2g-1: {stable}").unwrap();
        result["three_d_below_2g_minus_1"] = json!(stable);
    }
    let command = json!({"name": "fibered", "model": model, "g": genus, entry.parameter(): parameter});
    let echo = command.to_string();
    Ok(Report::new(command, digest(echo.as_bytes()), result, text).with_warnings(ranks.warnings))
}

pub fn list_builtins() -> Report {
    let mut text = String::new();
    let mut entries = Vec::new();
    for b in builtins().iter() {
        writeln!(text, "{}: {}", b.name(), b.description).unwrap();
        entries.push(json!({"name": b.name(), "description": b.description, "digest": digest(b.source.as_bytes())}));
    }
    let command = json!({"name": "builtins"});
    let echo = command.to_string();
    Report::new(command, digest(echo.as_bytes()), json!({"builtins": entries}), text)
}
