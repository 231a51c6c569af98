//! Command implementations behind the CLI surface; each returns a
//! `RunReport` whose payload is deterministic for identical inputs.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Deserialize;
use serde_json::{json, Value};

use mol_core::freegroup::{parse as parse_word, Alphabet};
use mol_core::germs::{group_dichotomy, EpsPoly, Germ, GermAssignment};
use mol_core::gv::{casale_verify, gv_sequence, riccati_system, CasaleCase, RatF};
use mol_core::lie::LieAlgebra;
use mol_core::orbit::{orbit_depth, verify_inequalities, Configuration};

use crate::report::{input_error, CliError, RunReport};

/// Default truncation orders for germ computations; they cover the
/// displayed vanishing-cycle computations with margin.
pub const DEFAULT_GERM_Z_ORDER: usize = 12;
pub const DEFAULT_GERM_EPS_ORDER: u32 = 4;
pub const DEFAULT_GERM_BUDGET: usize = 3;
pub const DEFAULT_GV_MAX: usize = 16;

/// Basis-size cap: `MOL_MAX_BASIS` overrides the built-in default.
pub fn basis_cap() -> Result<usize, CliError> {
    match std::env::var("MOL_MAX_BASIS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| input_error(format!("MOL_MAX_BASIS must be an integer, got `{v}`"))),
        Err(_) => Ok(mol_core::lie::DEFAULT_BASIS_CAP),
    }
}

/// `depth`: orbit depth, nilpotence class and derived length for a
/// configuration at a truncation class.
pub fn cmd_depth(config: &str, class: usize, cap: usize) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let cfg = Configuration::load(config)?;
    let algebra = LieAlgebra::new(cfg.alphabet.rank(), class, cap)?;
    let report = orbit_depth(&cfg, &algebra)?;
    let check = verify_inequalities(&report)?;
    let outputs = json!({
        "depth": report.to_json(),
        "inequalities": check.to_json(),
    });
    Ok(RunReport::new(
        "depth",
        json!({"config": config, "class": class}),
        outputs,
        started,
    ))
}

/// `gv`: Godbillon-Vey sequence construction and verification; the
/// first-integral system is included for the degree-2 (Riccati) case.
pub fn cmd_gv(phi_text: &str, max: usize) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let phi = RatF::parse_phi(phi_text)?;
    let seq = gv_sequence(&phi, max)?;
    let riccati = if !phi.is_zero() && phi.deg_f() == 2 {
        Some(riccati_system(&phi)?.to_json())
    } else {
        None
    };
    let outputs = json!({
        "sequence": seq.to_json(),
        "riccati_system": riccati,
    });
    Ok(RunReport::new(
        "gv",
        json!({"phi": phi_text, "max": max}),
        outputs,
        started,
    ))
}

/// `casale`: first-integral identities for the shipped Liouvillian cases.
pub fn cmd_casale(which: &str) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let cases: Vec<CasaleCase> = match which {
        "liouville1" => vec![CasaleCase::Liouville1],
        "liouville2" => vec![CasaleCase::Liouville2],
        "both" => vec![CasaleCase::Liouville1, CasaleCase::Liouville2],
        other => {
            return Err(input_error(format!(
                "unknown case `{other}` (expected liouville1, liouville2 or both)"
            )))
        }
    };
    let records: Vec<Value> = cases
        .into_iter()
        .map(|c| casale_verify(c).to_json())
        .collect();
    Ok(RunReport::new(
        "casale",
        json!({"case": which}),
        json!({"records": records}),
        started,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GermFile {
    z_order: usize,
    eps_order: u32,
    germs: BTreeMap<String, BTreeMap<String, String>>,
}

/// Parses a germ file: named germs with z-power → ε-polynomial coefficient
/// entries.
pub fn load_germ_file(text: &str) -> Result<GermAssignment, CliError> {
    let raw: GermFile =
        serde_json::from_str(text).map_err(|e| input_error(format!("germ file: {e}")))?;
    let mut map = Vec::new();
    for (name, coeffs) in &raw.germs {
        let mut terms = Vec::new();
        for (power, expr) in coeffs {
            let k: usize = power
                .parse()
                .map_err(|_| input_error(format!("germ `{name}`: bad z-power key `{power}`")))?;
            let poly = EpsPoly::parse(expr)
                .map_err(|e| input_error(format!("germ `{name}` coefficient of z^{k}: {e}")))?;
            terms.push((k, poly));
        }
        let germ = Germ::from_terms(raw.z_order, raw.eps_order, terms)
            .map_err(|e| input_error(format!("germ `{name}`: {e}")))?;
        map.push((name.clone(), germ));
    }
    GermAssignment::new(raw.z_order, raw.eps_order, map).map_err(CliError::from)
}

/// The shipped vanishing-cycle assignment over d1..d5.
pub fn shipped_assignment(z_order: usize, eps_order: u32) -> Result<GermAssignment, CliError> {
    GermAssignment::standard_vanishing_cycles(&["d1", "d2", "d3", "d4", "d5"], z_order, eps_order)
        .map_err(CliError::from)
}

/// `germ`: abelian/non-solvable dichotomy on a germ set, with an optional
/// word evaluated through the Poincaré representation.
pub fn cmd_germ(
    gens_path: Option<&str>,
    budget: usize,
    z_order: usize,
    eps_order: u32,
    word_text: Option<&str>,
) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let assignment = match gens_path {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?;
            load_germ_file(&text)?
        }
        None => shipped_assignment(z_order, eps_order)?,
    };

    let gens: Vec<(String, Germ)> = assignment
        .germs()
        .iter()
        .map(|(n, g)| (n.clone(), g.clone()))
        .collect();
    let dichotomy = group_dichotomy(&gens, budget)?;

    let word_report = match word_text {
        None => None,
        Some(text) => {
            let names: Vec<String> = assignment.germs().keys().cloned().collect();
            let alphabet = Alphabet::new(names).map_err(CliError::from)?;
            let word = parse_word(text, &alphabet)?;
            let image = assignment.poincare_rep(&word)?;
            let leading = image.leading().map(|(level, coeff)| {
                json!({
                    "level": level,
                    "z_power": level + 1,
                    "coefficient": coeff.to_string(),
                })
            });
            Some(json!({
                "word": text,
                "image": image.to_string(),
                "leading": leading,
                "identity": image.is_identity(),
            }))
        }
    };

    let outputs = json!({
        "orders": {"z": assignment.z_order(), "eps": assignment.eps_order()},
        "generators": assignment
            .germs()
            .iter()
            .map(|(n, g)| json!({"name": n, "germ": g.to_string()}))
            .collect::<Vec<_>>(),
        "dichotomy": dichotomy.to_json(),
        "word": word_report,
    });
    Ok(RunReport::new(
        "germ",
        json!({
            "gens": gens_path,
            "budget": budget,
            "order": z_order,
            "eps_order": eps_order,
            "word": word_text,
        }),
        outputs,
        started,
    ))
}

/// `config export`: dump an embedded configuration verbatim.
pub fn cmd_config_export(name: &str) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let cfg = Configuration::builtin(name)
        .ok_or_else(|| input_error(format!("unknown built-in configuration `{name}`")))??;
    let text = mol_core::orbit::builtin_config_json(name).expect("validated built-in");
    let raw: Value = serde_json::from_str(text).expect("embedded config is valid JSON");
    Ok(RunReport::new(
        "config export",
        json!({"name": name}),
        json!({"config": raw, "alphabet_rank": cfg.alphabet.rank()}),
        started,
    ))
}

/// `selftest`: run the acceptance suite; the boolean is overall success.
pub fn cmd_selftest(filter: Option<&str>) -> (RunReport, bool) {
    let started = Instant::now();
    let outcomes = crate::acceptance::run(filter);
    let all_passed = outcomes.iter().all(|o| o.passed);
    let outputs = json!({
        "criteria": outcomes.iter().map(|o| json!({
            "name": o.name,
            "passed": o.passed,
            "detail": o.detail,
            "millis": o.millis,
        })).collect::<Vec<_>>(),
        "all_passed": all_passed,
    });
    (
        RunReport::new("selftest", json!({"filter": filter}), outputs, started),
        all_passed,
    )
}
