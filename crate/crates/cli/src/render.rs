//! Human-readable rendering, derived from the JSON payloads (the JSON is
//! the single source of truth; this is a view of it).

use serde_json::Value;

use crate::report::RunReport;

pub fn render(report: &RunReport) -> String {
    let out = &report.outputs;
    match report.command.as_str() {
        "depth" => render_depth(out),
        "gv" => render_gv(out),
        "germ" => render_germ(out),
        "casale" => render_casale(out),
        "selftest" => render_selftest(out),
        "config export" => serde_json::to_string_pretty(&out["config"]).unwrap_or_default(),
        _ => serde_json::to_string_pretty(out).unwrap_or_default(),
    }
}

fn bound(v: &Value) -> String {
    match v["kind"].as_str() {
        Some("certified") => format!("{}", v["value"]),
        Some("at-least") => format!(">= {}", v["value"]),
        Some("trivial-group") => "trivial group".to_string(),
        _ => v.to_string(),
    }
}

fn render_depth(out: &Value) -> String {
    let d = &out["depth"];
    let mut lines = Vec::new();
    lines.push(format!(
        "config {} at class {} ({} computation)",
        d["config"].as_str().unwrap_or("?"),
        d["class"],
        d["qualifier"].as_str().unwrap_or("?")
    ));
    let dims = |v: &Value| -> String {
        v.as_array()
            .map(|a| {
                a.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_default()
    };
    lines.push(format!(
        "ambient dims          [{}]",
        dims(&d["ambient_dimensions"])
    ));
    lines.push(format!(
        "orbit ideal dims      [{}]",
        dims(&d["orbit_ideal_dimensions"])
    ));
    lines.push(format!(
        "commutator ideal dims [{}]",
        dims(&d["commutator_ideal_dimensions"])
    ));
    if let Some(tests) = d["tests"].as_array() {
        for t in tests {
            let j = &t["j"];
            if t["contained"] == Value::Bool(true) {
                lines.push(format!(
                    "  j = {j}: orbit ∩ L_(j+1) ⊆ [orbit, pi1]  (certified-true)"
                ));
            } else {
                let w = &t["witness"];
                lines.push(format!(
                    "  j = {j}: NOT contained; witness at degree {}: {}",
                    w["degree"],
                    w["element"].as_str().unwrap_or("?")
                ));
            }
        }
    }
    lines.push(format!(
        "orbit depth k = {}   nilpotence class n = {}   derived length d = {}",
        bound(&d["k"]),
        bound(&d["n"]),
        bound(&d["d"])
    ));
    let ineq = &out["inequalities"];
    lines.push(format!(
        "inequalities: {}",
        ineq["explanation"].as_str().unwrap_or("?")
    ));
    lines.join("\n")
}

fn render_gv(out: &Value) -> String {
    let s = &out["sequence"];
    let mut lines = Vec::new();
    lines.push(format!(
        "phi = {} (deg_F = {})",
        s["phi"].as_str().unwrap_or("?"),
        s["deg_F"]
    ));
    if let Some(forms) = s["forms"].as_array() {
        for f in forms {
            lines.push(format!(
                "  eta_{} = {}",
                f["index"],
                f["form"].as_str().unwrap_or("?")
            ));
        }
    }
    lines.push(format!(
        "length {} ({}); residuals all zero: {}",
        s["length"],
        s["classification"].as_str().unwrap_or("?"),
        s["residuals_all_zero"]
    ));
    if let Some(note) = s["note"].as_str() {
        lines.push(format!("note: {note}"));
    }
    if !out["riccati_system"].is_null() {
        lines.push("first-integral system (emitted, not solved):".to_string());
        if let Some(eqs) = out["riccati_system"]["equations"].as_array() {
            for e in eqs {
                lines.push(format!("  {}", e.as_str().unwrap_or("?")));
            }
        }
    }
    lines.join("\n")
}

fn render_germ(out: &Value) -> String {
    let mut lines = Vec::new();
    lines.push(format!(
        "truncation: z-order {}, eps-order {}",
        out["orders"]["z"], out["orders"]["eps"]
    ));
    if let Some(gens) = out["generators"].as_array() {
        for g in gens {
            lines.push(format!(
                "  {} = {}",
                g["name"].as_str().unwrap_or("?"),
                g["germ"].as_str().unwrap_or("?")
            ));
        }
    }
    let d = &out["dichotomy"];
    match d["verdict"].as_str() {
        Some("abelian") => lines.push("verdict: abelian (at truncation)".to_string()),
        Some("non-abelian") => {
            lines.push("verdict: non-abelian; non-solvability witness chain:".to_string());
            if let Some(chain) = d["non_solvability_witness"].as_array() {
                for s in chain {
                    lines.push(format!(
                        "  {} : level {}, leading coefficient {}",
                        s["commutator"].as_str().unwrap_or("?"),
                        s["level"],
                        s["leading_coefficient"].as_str().unwrap_or("?")
                    ));
                }
            }
        }
        _ => {}
    }
    if !out["word"].is_null() {
        let w = &out["word"];
        lines.push(format!(
            "word {} maps to {}",
            w["word"].as_str().unwrap_or("?"),
            w["image"].as_str().unwrap_or("?")
        ));
    }
    lines.join("\n")
}

fn render_casale(out: &Value) -> String {
    let mut lines = Vec::new();
    if let Some(records) = out["records"].as_array() {
        for r in records {
            lines.push(format!("case {}:", r["case"].as_str().unwrap_or("?")));
            if let Some(ids) = r["identities"].as_array() {
                for i in ids {
                    lines.push(format!(
                        "  {} = {}  [{}]",
                        i["identity"].as_str().unwrap_or("?"),
                        i["residual"].as_str().unwrap_or("?"),
                        if i["zero"] == Value::Bool(true) {
                            "zero"
                        } else {
                            "NONZERO"
                        }
                    ));
                }
            }
        }
    }
    lines.join("\n")
}

fn render_selftest(out: &Value) -> String {
    let mut lines = Vec::new();
    if let Some(criteria) = out["criteria"].as_array() {
        for c in criteria {
            let status = if c["passed"] == Value::Bool(true) {
                "PASS"
            } else {
                "FAIL"
            };
            lines.push(format!(
                "{status} {} — {}",
                c["name"].as_str().unwrap_or("?"),
                c["detail"].as_str().unwrap_or("")
            ));
        }
    }
    lines.push(format!("all criteria passed: {}", out["all_passed"]));
    lines.join("\n")
}
