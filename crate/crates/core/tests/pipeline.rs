//! Cross-module integration through the public API: configurations flow
//! from JSON through word parsing, the graded Lie machinery and the report
//! serialization surfaces.

use mol_core::freegroup::parse;
use mol_core::lie::{lcs_degree, LcsDegree, LieAlgebra, DEFAULT_BASIS_CAP};
use mol_core::orbit::{orbit_depth, orbit_ideal, verify_inequalities, Bound, Configuration};

fn algebra(rank: usize, class: usize) -> LieAlgebra {
    LieAlgebra::new(rank, class, DEFAULT_BASIS_CAP).unwrap()
}

#[test]
fn family_words_have_expected_lcs_degrees() {
    // [d1 d2, ad(d2)^m(d2 d3)] lies in lower-central degree m + 2.
    let cfg = Configuration::builtin("parallelogram").unwrap().unwrap();
    for m in 0..=3usize {
        let text = format!("[d1 d2, ad(d2)^{m}(d2 d3)]");
        let w = parse(&text, &cfg.alphabet).unwrap();
        assert_eq!(lcs_degree(&w, 6), LcsDegree::Degree(m + 2), "{text}");
    }
}

#[test]
fn graded_subspace_json_uses_bracket_notation() {
    let cfg = Configuration::builtin("generic4").unwrap().unwrap();
    let alg = algebra(4, 3);
    let ideal = orbit_ideal(&cfg, &alg).unwrap();
    let names = |i: usize| cfg.alphabet.name(i).to_string();
    let v = ideal.to_json(&alg, &names);

    assert_eq!(v["rank"], 4);
    assert_eq!(v["class"], 3);
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), 3);
    let degree2 = &degrees[1];
    let trees: Vec<&str> = degree2["hall_basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap())
        .collect();
    assert!(trees.contains(&"[d1,d2]"));
    assert!(trees.contains(&"[d3,d4]"));
    // generic position: the whole degree-2 slice is in the orbit ideal
    assert_eq!(degree2["dimension"], degree2["ambient_dimension"]);
    // rows are rational matrices rendered as strings
    assert!(!degree2["rows"].as_array().unwrap().is_empty());
}

#[test]
fn user_config_file_reproduces_builtin_verdict() {
    let dir = std::env::temp_dir().join(format!("mol-core-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("custom.json");
    std::fs::write(
        &path,
        mol_core::orbit::builtin_config_json("trapezoid").unwrap(),
    )
    .unwrap();

    let cfg = Configuration::load(path.to_str().unwrap()).unwrap();
    let alg = algebra(cfg.alphabet.rank(), 4);
    let report = orbit_depth(&cfg, &alg).unwrap();
    assert_eq!(report.k, Bound::Certified(2));
    assert!(verify_inequalities(&report).unwrap().holds);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generic4_certifies_at_class_five_too() {
    let cfg = Configuration::builtin("generic4").unwrap().unwrap();
    let alg = algebra(4, 5);
    let report = orbit_depth(&cfg, &alg).unwrap();
    assert_eq!(report.k, Bound::Certified(2));
}

#[test]
fn trapezoid_class_six_keeps_quotient_alive() {
    // The quotient survives at every degree through the cutoff while the
    // depth stays certified at 2.
    let cfg = Configuration::builtin("trapezoid").unwrap().unwrap();
    let alg = algebra(5, 6);
    let report = orbit_depth(&cfg, &alg).unwrap();
    assert_eq!(report.k, Bound::Certified(2));
    assert_eq!(report.n, Bound::AtLeast(6));
}

#[test]
fn depth_report_json_lists_all_tested_levels() {
    let cfg = Configuration::builtin("parallelogram").unwrap().unwrap();
    let alg = algebra(4, 5);
    let report = orbit_depth(&cfg, &alg).unwrap();
    let v = report.to_json();
    let tests = v["tests"].as_array().unwrap();
    assert_eq!(tests.len(), 3); // j = 1..=3 at class 5
    assert_eq!(v["undetermined_beyond_j"], 3);
    for t in tests {
        assert!(t["witness"]["element"].as_str().unwrap().contains('['));
    }
}
