use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cohdetect::criteria::{CriterionReport, DETECTION_TOL};
use cohdetect::linalg::hermitian_eigenvalues;
use cohdetect::tripartite::{random_product_ensemble, BipartitionOutcome};
use cohdetect::{Criterion, Party, Verdict};
use cohdetect_cli::analyze::{AnalysisReport, CriterionOutcome, EnsembleAnalysis};
use cohdetect_cli::files::{EnsembleFile, StateFile};
use cohdetect_cli::generate::GgmDocument;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cohdetect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohdetect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = cohdetect(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn analyze_json(path: &Path, criteria: &str) -> AnalysisReport {
    let text = ok_stdout(&[
        "analyze",
        "--state",
        path.to_str().unwrap(),
        "--criteria",
        criteria,
        "--format",
        "json",
    ]);
    serde_json::from_str(&text).unwrap()
}

fn evaluated(report: &AnalysisReport, c: Criterion) -> &CriterionReport {
    report
        .criteria
        .iter()
        .find_map(|o| match o {
            CriterionOutcome::Evaluated(r) if r.criterion == c => Some(r),
            _ => None,
        })
        .unwrap_or_else(|| panic!("{c} not evaluated"))
}

fn ensemble_json(path: &Path, all: bool) -> EnsembleAnalysis {
    let mut args = vec!["ensemble", "--file", path.to_str().unwrap()];
    if all {
        args.push("--all-bipartitions");
    }
    serde_json::from_str(&ok_stdout(&args)).unwrap()
}

fn single_report(a: &EnsembleAnalysis) -> &cohdetect::TripartiteReport {
    match &a.outcomes[..] {
        [BipartitionOutcome::Evaluated(r)] => r,
        other => panic!("expected one evaluated report, got {other:?}"),
    }
}

fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

fn is_ensemble(name: &str) -> bool {
    name.starts_with("illustration")
}

#[test]
fn fixtures_match_generator() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(&["fixtures", "--out", dir.path().to_str().unwrap()]);
    let mut generated: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    generated.sort();
    assert_eq!(generated, fixture_names());
    for name in &generated {
        assert_eq!(
            fs::read(dir.path().join(name)).unwrap(),
            fs::read(fixture(name)).unwrap(),
            "{name} differs from the checked-in fixture"
        );
    }
}

#[test]
fn fixtures_round_trip_byte_identical() {
    for name in fixture_names() {
        let text = fs::read_to_string(fixture(&name)).unwrap();
        let again = if is_ensemble(&name) {
            let f = EnsembleFile::parse(&text, &name).unwrap();
            f.ensemble().unwrap();
            f.to_json()
        } else {
            let f = StateFile::parse(&text, &name).unwrap();
            f.density().unwrap();
            f.to_json()
        };
        assert_eq!(again, text, "{name}");
    }
}

#[test]
fn analyze_phi_plus_corollary1() {
    let r = analyze_json(&fixture("phi_plus.json"), "corollary1");
    let c = evaluated(&r, Criterion::Corollary1);
    assert_eq!((c.lhs, c.rhs, c.verdict), (1.0, 0.0, Verdict::Entangled));
    assert!(!r.ppt_oracle.unwrap().is_ppt);
}

#[test]
fn analyze_maximally_mixed_all() {
    let r = analyze_json(&fixture("max_mixed_2x2.json"), "all");
    assert_eq!(r.criteria.len(), 5);
    for o in &r.criteria {
        let CriterionOutcome::Evaluated(c) = o else {
            panic!("{o:?}")
        };
        assert!(
            matches!(c.verdict, Verdict::Inconclusive | Verdict::SeparabilityConsistent),
            "{}: {}",
            c.criterion,
            c.verdict
        );
    }
    assert!(r.ppt_oracle.unwrap().is_ppt);
}

#[test]
fn analyze_chi2_theorem2() {
    let r = analyze_json(&fixture("chi2_a1.json"), "theorem2");
    let c = evaluated(&r, Criterion::Theorem2);
    assert!((c.lhs - 6.0 / 7.0).abs() < 1e-12);
    assert!((c.rhs - 4.0 / 49.0).abs() < 1e-12);
    assert_eq!(c.verdict, Verdict::Entangled);
    assert!(r.ppt_oracle.is_none());
}

#[test]
fn unsupported_dims_are_inline() {
    let r = analyze_json(&fixture("chi2_a1.json"), "theorem1,result3");
    assert!(matches!(
        &r.criteria[0],
        CriterionOutcome::Unsupported {
            criterion: Criterion::Theorem1,
            ..
        }
    ));
    evaluated(&r, Criterion::Result3);
    let text = ok_stdout(&[
        "analyze",
        "--state",
        fixture("chi2_a1.json").to_str().unwrap(),
        "--criteria",
        "theorem1",
    ]);
    assert!(text.contains("unsupported"), "{text}");
}

#[test]
fn analyze_reports_recompute() {
    for name in fixture_names().iter().filter(|n| !is_ensemble(n)) {
        let text = ok_stdout(&[
            "analyze",
            "--state",
            fixture(name).to_str().unwrap(),
            "--format",
            "json",
        ]);
        let raw: Value = serde_json::from_str(&text).unwrap();
        for c in raw["criteria"].as_array().unwrap() {
            if c["status"] != "evaluated" {
                continue;
            }
            let (lhs, rhs, margin, tol) = (
                c["lhs"].as_f64().unwrap(),
                c["rhs"].as_f64().unwrap(),
                c["margin"].as_f64().unwrap(),
                c["tolerance_used"].as_f64().unwrap(),
            );
            assert!((margin - (lhs - rhs)).abs() <= 1e-12, "{name}: {c}");
            let fired = match c["criterion"].as_str().unwrap() {
                "result4" | "theorem2" => margin >= tol,
                _ => margin > tol,
            };
            assert_eq!(fired, c["verdict"] == "Entangled", "{name}: {c}");
        }
    }
}

#[test]
fn ensemble_illustration2() {
    let a = ensemble_json(&fixture("illustration2_p0.5.json"), false);
    let r = single_report(&a);
    assert!((r.lhs - 2.897056).abs() < 1e-6);
    let rhs = (10.0 + 14.0 * 2f64.sqrt()) / 25.0 + (28.0 - 14.0 * 2f64.sqrt()) / 25.0 * 0.5;
    assert!((r.rhs - rhs).abs() < 1e-9);
    assert!((r.rhs - 1.355980).abs() < 1e-6);
    assert_eq!(r.verdict, Verdict::Entangled);
}

#[test]
fn ensemble_illustration3_equality() {
    let a = ensemble_json(&fixture("illustration3_p0.7.json"), false);
    let r = single_report(&a);
    assert!((r.lhs - 1.4).abs() < 1e-10);
    assert!((r.rhs - 1.4).abs() < 1e-10);
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn ensemble_reports_recompute() {
    for name in fixture_names().iter().filter(|n| is_ensemble(n)) {
        for o in ensemble_json(&fixture(name), true).outcomes {
            let BipartitionOutcome::Evaluated(r) = o else { continue };
            assert!((r.recompute_rhs() - r.rhs).abs() <= 1e-12, "{name}");
            assert!((r.margin - (r.lhs - r.rhs)).abs() <= 1e-12, "{name}");
        }
    }
}

fn write_product_ensemble(dir: &Path, dims: [usize; 3], terms: usize, seed: u64) -> PathBuf {
    let ens = random_product_ensemble(dims, terms, seed, Party::A).unwrap();
    let path = dir.join(format!("product_{seed}.json"));
    fs::write(&path, EnsembleFile::from_ensemble(&ens, None).to_json()).unwrap();
    path
}

#[test]
fn single_product_term_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_product_ensemble(dir.path(), [2, 2, 2], 1, 3);
    for o in ensemble_json(&path, true).outcomes {
        let BipartitionOutcome::Evaluated(r) = o else {
            panic!("{o:?}")
        };
        assert_eq!(
            r.verdict,
            Verdict::Inconclusive,
            "{}: margin {}",
            r.singled_out,
            r.margin
        );
    }
}

#[test]
fn qutrit_pairs_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_product_ensemble(dir.path(), [3, 2, 3], 2, 11);
    let outcomes = ensemble_json(&path, true).outcomes;
    assert_eq!(outcomes.len(), 3);
    let BipartitionOutcome::Evaluated(a) = &outcomes[0] else {
        panic!()
    };
    assert_eq!(a.pair, [Party::B, Party::C]);
    assert!(matches!(
        &outcomes[1],
        BipartitionOutcome::Skipped {
            singled_out: Party::B,
            ..
        }
    ));
    let BipartitionOutcome::Evaluated(c) = &outcomes[2] else {
        panic!()
    };
    assert_eq!(c.pair, [Party::B, Party::A]);
}

fn scan(args: &[&str]) -> Vec<Vec<String>> {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let mut full = vec!["scan"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    ok_stdout(&full);
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,criterion,lhs,rhs,margin,verdict"));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn scan_example2_all_entangled() {
    let rows = scan(&[
        "--family",
        "example2",
        "--param",
        "a",
        "--range",
        "0.01:1:0.01",
        "--criteria",
        "theorem2",
    ]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[5] == "Entangled"));
    assert_eq!(rows[99][0], "1");
}

#[test]
fn scan_illustration3_all_inconclusive() {
    let rows = scan(&[
        "--family",
        "illustration3",
        "--param",
        "p",
        "--range",
        "0:1:0.1",
        "--criteria",
        "corollary2",
    ]);
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert_eq!(r[5], "Inconclusive");
        assert!(r[4].parse::<f64>().unwrap() <= DETECTION_TOL);
    }
}

#[test]
fn scan_example1_flips_at_threshold() {
    let rows = scan(&[
        "--family",
        "example1",
        "--param",
        "c,f",
        "--range",
        "0:0.25:0.001",
        "--criteria",
        "theorem1",
    ]);
    assert_eq!(rows.len(), 251);
    let first = rows.iter().position(|r| r[5] == "Entangled").unwrap();
    assert!(rows[first..].iter().all(|r| r[5] == "Entangled"));
    let c: f64 = rows[first][0].parse().unwrap();
    assert!((c - 1.0 / 16.0).abs() <= 1e-3 + 1e-12, "flip at {c}");
}

#[test]
fn scan_rows_are_grid_times_criteria() {
    let rows = scan(&[
        "--family",
        "example1",
        "--param",
        "c",
        "--range",
        "0:0.2:0.05",
        "--criteria",
        "result3,result4,theorem1,theorem2,corollary1",
        "--set",
        "f=0.1",
    ]);
    assert_eq!(rows.len(), 5 * 5);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[1], Criterion::ALL[i % 5].name());
        let expected = format!("{}", (i / 5) as f64 * 0.05);
        assert!((r[0].parse::<f64>().unwrap() - expected.parse::<f64>().unwrap()).abs() < 1e-12);
    }
    let rows = scan(&[
        "--family",
        "illustration1",
        "--param",
        "p",
        "--range",
        "0:1:0.25",
        "--criteria",
        "corollary2,corollary2:B,corollary2:C",
    ]);
    assert_eq!(rows.len(), 5 * 3);
}

#[test]
fn scan_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    for args in [
        [
            "--family",
            "example2",
            "--param",
            "a",
            "--range",
            "0:1.5:0.5",
            "--criteria",
            "theorem2",
        ],
        [
            "--family",
            "example2",
            "--param",
            "a",
            "--range",
            "1:0:0.5",
            "--criteria",
            "theorem2",
        ],
        [
            "--family",
            "example2",
            "--param",
            "a",
            "--range",
            "0:1:0",
            "--criteria",
            "theorem2",
        ],
        [
            "--family",
            "example2",
            "--param",
            "a",
            "--range",
            "0:1:0.5",
            "--criteria",
            "theorem1",
        ],
        [
            "--family",
            "example9",
            "--param",
            "a",
            "--range",
            "0:1:0.5",
            "--criteria",
            "theorem2",
        ],
    ] {
        let mut full = vec!["scan"];
        full.extend_from_slice(&args);
        full.extend_from_slice(&["--out", out]);
        let o = cohdetect(&full);
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn ggm_export_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (d, counts) in [(2, (1, 1, 1)), (3, (3, 3, 2)), (4, (6, 6, 3))] {
        let out = dir.path().join(format!("ggm{d}.json"));
        ok_stdout(&["ggm", "--dim", &d.to_string(), "--out", out.to_str().unwrap()]);
        let doc: GgmDocument = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(doc.matrices.len(), d * d - 1);
        let c = doc.counts;
        assert_eq!((c.symmetric, c.antisymmetric, c.diagonal), counts);
        let raw: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(raw["matrices"][0]["type"], "symmetric");
        assert_eq!(raw["matrices"][0]["j"], 1);
    }
    assert!(
        !cohdetect(&["ggm", "--dim", "1", "--out", dir.path().join("x").to_str().unwrap()])
            .status
            .success()
    );
}

fn random_file(dir: &Path, kind: &str, dims: &str, seed: &str) -> PathBuf {
    let out = dir.join(format!("{kind}-{dims}-{seed}.json"));
    ok_stdout(&[
        "random",
        "--kind",
        kind,
        "--dims",
        dims,
        "--seed",
        seed,
        "--out",
        out.to_str().unwrap(),
    ]);
    out
}

#[test]
fn random_separable_seed7() {
    let dir = tempfile::tempdir().unwrap();
    let path = random_file(dir.path(), "separable", "2x3", "7");
    let r = analyze_json(&path, "all");
    assert!(r.ppt_oracle.unwrap().is_ppt);
    assert_eq!(
        evaluated(&r, Criterion::Result4).verdict,
        Verdict::SeparabilityConsistent
    );
}

#[test]
fn random_pure_is_rank_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = random_file(dir.path(), "pure", "2x2", "1");
    let rho = StateFile::load(&path).unwrap().density().unwrap();
    let e = hermitian_eigenvalues(rho.matrix()).unwrap();
    assert_eq!(e.eigenvalues.iter().filter(|&&v| v > 1e-10).count(), 1);
    analyze_json(&path, "all");
}

#[test]
fn random_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (kind, dims) in [("generic", "2x3"), ("pure", "2x2"), ("separable", "2x2x2")] {
        let x = fs::read(random_file(a.path(), kind, dims, "42")).unwrap();
        let y = fs::read(random_file(b.path(), kind, dims, "42")).unwrap();
        assert_eq!(x, y, "{kind}");
    }
}

#[test]
fn invalid_state_exits_nonzero_naming_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"dims":[2],"matrix":[[[0.5,0],[0.9,0]],[[0.9,0],[0.5,0]]]}"#).unwrap();
    let o = cohdetect(&["analyze", "--state", path.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("positive semidefinite"), "{err}");

    fs::write(&path, "not json").unwrap();
    let o = cohdetect(&["analyze", "--state", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot parse"));
}

#[test]
fn survey_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("survey.json");
    ok_stdout(&[
        "survey",
        "--dims",
        "2x3",
        "--samples",
        "30",
        "--out",
        out.to_str().unwrap(),
    ]);
    let raw: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(raw["samples"], 30);
    assert_eq!(raw["criteria"].as_array().unwrap().len(), 5);
}
