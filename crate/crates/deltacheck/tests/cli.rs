mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use deltacheck::cli::{run, EXIT_DISAGREEMENT, EXIT_FAILURE, EXIT_INCONSISTENT, EXIT_OK};
use deltacheck::report::JsonReport;
use deltacheck::load_product_line;
use deltacheck_core::{Checker, Strategy};

struct Run {
    code: u8,
    out: String,
    err: String,
}

fn deltacheck(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("deltacheck").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn manifest(id: &str) -> String {
    common::fixtures().join(id).join("manifest.pl").display().to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TOY: &str = "workflow W { initial i; task T { arrival 1; service 2; } final f; transition a: i -> T; transition b: T -> f; }";

fn toy_line(dir: &Path, variants: &str) -> PathBuf {
    fs::write(dir.join("w.wf"), TOY).unwrap();
    let pl = dir.join("pl.pl");
    fs::write(&pl, format!("productline Toy {{ core {{ file \"w.wf\"; }} {variants} }}")).unwrap();
    pl
}

#[test]
fn consistent_toy_line() {
    let dir = tempfile::tempdir().unwrap();
    let pl = toy_line(dir.path(), "");
    let r = deltacheck(&["check", path(&pl)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.ends_with("0 errors, 0 warnings\n"), "{}", r.out);
    assert!(r.out.starts_with("variant core (incremental): 27 checks"), "{}", r.out);
}

#[test]
fn published_scenarios_pass_with_warnings() {
    let r = deltacheck(&["check", &manifest("ppu-published"), "--quiet"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("  M05 warning mapping component PPU.PosSensor: "), "{}", r.out);
    assert!(r.out.ends_with("0 errors, 9 warnings\n"), "{}", r.out);
    assert!(!r.out.contains("variant "));
}

#[test]
fn errors_give_status_1_under_every_strategy() {
    for s in ["product", "incremental", "delta"] {
        let r = deltacheck(&["check", &manifest("seeded/B04"), "--strategy", s]);
        assert_eq!(r.code, EXIT_INCONSISTENT, "{s}");
        assert!(r.out.contains("  B04 error statechart:Crane AtSlide: "), "{}", r.out);
    }
}

#[test]
fn load_failures_give_status_2() {
    let r = deltacheck(&["check", "no/such/manifest.pl"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("no/such/manifest.pl"), "{}", r.err);

    let dir = tempfile::tempdir().unwrap();
    let pl = toy_line(dir.path(), "deltas { delta \"gone.delta\"; }");
    let r = deltacheck(&["check", path(&pl)]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("gone.delta"), "{}", r.err);

    fs::write(dir.path().join("w.wf"), "workflow W { task ; }").unwrap();
    let pl = dir.path().join("pl.pl");
    fs::write(&pl, "productline Toy { core { file \"w.wf\"; } }").unwrap();
    let r = deltacheck(&["check", path(&pl)]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("w.wf:1:19"), "{}", r.err);
}

#[test]
fn usage_errors() {
    assert_eq!(deltacheck(&["check", &manifest("ppu-sc0"), "--strategy", "fast"]).code, EXIT_FAILURE);
    assert_eq!(deltacheck(&["frobnicate"]).code, EXIT_FAILURE);
    assert_eq!(deltacheck(&[]).code, EXIT_FAILURE);
    let help = deltacheck(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("generate"));

    let r = deltacheck(&["check", &manifest("ppu-sc5"), "--variant", "Sc9"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("unknown variant `Sc9`"), "{}", r.err);
    let out = tempfile::tempdir().unwrap();
    assert_eq!(deltacheck(&["generate", &manifest("ppu-sc5"), "Sc9", path(out.path())]).code, EXIT_FAILURE);
}

#[test]
fn variant_flag_keeps_core_and_one_variant() {
    let r = deltacheck(&["check", &manifest("ppu-sc5"), "--variant", "Sc5", "--strategy", "delta"]);
    assert_eq!(r.code, EXIT_OK);
    let headers: Vec<&str> = r.out.lines().filter(|l| l.starts_with("variant ")).collect();
    assert_eq!(headers.len(), 2, "{}", r.out);
    assert!(headers[0].starts_with("variant core (delta)"));
    assert!(headers[1].starts_with("variant Sc5 (delta)"));
}

#[test]
fn json_report_is_stable_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for s in ["product", "incremental", "delta"] {
        assert_eq!(deltacheck(&["check", &manifest("ppu-published"), "--strategy", s, "--json", path(&a)]).code, 0);
        assert_eq!(deltacheck(&["check", &manifest("ppu-published"), "--strategy", s, "--json", path(&b)]).code, 0);
        let text = fs::read_to_string(&a).unwrap();
        assert_eq!(text, fs::read_to_string(&b).unwrap());
        let report: JsonReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report.version, 1);
        assert_eq!(report.strategy, s);
        let names: Vec<&str> = report.variants.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["core", "Sc3", "Sc5"]);
        for v in &report.variants {
            assert_eq!(v.checks_executed, v.per_model_checks.values().sum::<usize>() + v.delta_rule_checks);
        }
    }
}

#[test]
fn json_is_written_even_with_errors() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let r = deltacheck(&["check", &manifest("seeded/D01"), "--json", path(&json)]);
    assert_eq!(r.code, EXIT_INCONSISTENT);
    let report: JsonReport = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let seed = &report.variants[1];
    assert_eq!(seed.delta_rule_checks, 1);
    assert_eq!(seed.diagnostics[0].rule, "D01");
    assert_eq!(seed.diagnostics[0].elements, ["seed"]);
}

#[test]
fn generated_variant_checks_like_the_in_memory_one() {
    let out = tempfile::tempdir().unwrap();
    let r = deltacheck(&["generate", &manifest("ppu-sc3"), "Sc3", path(out.path())]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("wrote 9 files"), "{}", r.out);

    let line = load_product_line(Path::new(&manifest("ppu-sc3"))).unwrap();
    let checker = Checker::default();
    let deltas = line.resolve(&line.variants[0]).unwrap();
    let (in_memory, baseline) = checker.check_variant_product(&line.core, "Sc3", &deltas).unwrap();

    let written = load_product_line(&out.path().join("manifest.pl")).unwrap();
    assert_eq!(written.core, baseline.models);
    let reports = checker.check_product_line(&written, Strategy::Product).unwrap();
    assert_eq!(reports[0].diagnostics, in_memory.diagnostics);
    let again = deltacheck(&["check", path(&out.path().join("manifest.pl"))]);
    assert_eq!(again.code, EXIT_OK);
}

#[test]
fn zero_delta_variant_reproduces_the_core() {
    let dir = tempfile::tempdir().unwrap();
    let pl = toy_line(dir.path(), "variant Plain { }");
    let out = dir.path().join("out");
    assert_eq!(deltacheck(&["generate", path(&pl), "Plain", path(&out)]).code, EXIT_OK);
    let core = load_product_line(&pl).unwrap().core;
    assert_eq!(load_product_line(&out.join("manifest.pl")).unwrap().core, core);
    assert_eq!(fs::read_to_string(out.join("W.wf")).unwrap(), deltacheck_core::dsl::serialize_model(&deltacheck_core::Model::Workflow(core.workflows["W"].clone())));
}

#[test]
fn generate_refuses_inconsistent_variants() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().join("b04");
    let r = deltacheck(&["generate", &manifest("seeded/B04"), "seed", path(&dir)]);
    assert_eq!(r.code, EXIT_INCONSISTENT);
    assert!(r.err.contains("nothing written"), "{}", r.err);
    assert!(!dir.exists());

    let r = deltacheck(&["generate", &manifest("seeded/B04"), "seed", path(&dir), "--force"]);
    assert_eq!(r.code, EXIT_INCONSISTENT);
    assert!(dir.join("Crane.sc").is_file());
    assert!(!fs::read_to_string(dir.join("Crane.sc")).unwrap().contains("back"));

    let r = deltacheck(&["generate", &manifest("seeded/D02"), "seed", path(&out.path().join("d02"))]);
    assert_eq!(r.code, EXIT_INCONSISTENT);
    assert!(r.out.contains("D02 error architecture:Assembly seed"), "{}", r.out);
}

#[test]
fn compare_reports_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let r = deltacheck(&["compare", &manifest("ppu-sc5"), "--csv", path(&csv)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("variant  product  incremental  delta    inc %  delta %  equal\n"), "{}", r.out);
    assert!(r.out.contains("Sc5           97           40     14     58.8     85.6  yes\n"), "{}", r.out);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "variant,strategy,checks,reduction_pct,diagnostics_equal");
    assert_eq!(lines.len(), 1 + 3 * 3);
    assert!(lines.contains(&"Sc3,incremental,64,34.0,true"));

    let r = deltacheck(&["compare", &manifest("ppu-sc0")]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().count(), 3, "{}", r.out);
    assert!(r.out.contains("core          82           82     82      0.0      0.0  yes\n"), "{}", r.out);
}

#[test]
fn broken_impact_table_is_caught_by_compare() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("impact.json");
    fs::write(&table, r#"{"remove state chart transition": []}"#).unwrap();
    let r = deltacheck(&["compare", &manifest("seeded/B04"), "--impact-override", path(&table)]);
    assert_eq!(r.code, EXIT_DISAGREEMENT, "{}", r.err);
    assert!(r.err.contains("strategies disagree on the diagnostics of seed"), "{}", r.err);

    fs::write(&table, r#"{"remove nothing": []}"#).unwrap();
    assert_eq!(deltacheck(&["compare", &manifest("seeded/B04"), "--impact-override", path(&table)]).code, EXIT_FAILURE);
}

#[test]
fn binary_exit_statuses() {
    let bin = env!("CARGO_BIN_EXE_deltacheck");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["check", &manifest("ppu-sc0"), "--quiet"]), Some(0));
    assert_eq!(status(&["check", &manifest("seeded/W01"), "--quiet"]), Some(1));
    assert_eq!(status(&["check", "missing.pl"]), Some(2));
}

/// Variants holding duplicate declarations are written but cannot be read back.
const UNDECLARABLE: [&str; 5] = ["A01", "A02", "A06", "B02", "W18"];

#[test]
fn generate_then_check_matches_in_memory_on_seeded_fixtures() {
    let out = tempfile::tempdir().unwrap();
    let checker = Checker::default();
    for rule in deltacheck_core::RuleId::ALL {
        let id = format!("seeded/{rule}");
        let dir = out.path().join(rule.as_str());
        let r = deltacheck(&["generate", &manifest(&id), "seed", path(&dir), "--force", "--quiet"]);
        assert!(r.code <= EXIT_INCONSISTENT, "{id}: {}", r.err);
        if rule.is_delta_rule() {
            continue;
        }
        let line = load_product_line(Path::new(&manifest(&id))).unwrap();
        let deltas = line.resolve(&line.variants[0]).unwrap();
        let (in_memory, _) = checker.check_variant_product(&line.core, "seed", &deltas).unwrap();
        match load_product_line(&dir.join("manifest.pl")) {
            Ok(written) => {
                assert!(!UNDECLARABLE.contains(&rule.as_str()), "{id} unexpectedly reparses");
                let reports = checker.check_product_line(&written, Strategy::Product).unwrap();
                assert_eq!(reports[0].diagnostics, in_memory.diagnostics, "{id}");
            }
            Err(deltacheck::LoadError::Parse(e)) => {
                assert!(UNDECLARABLE.contains(&rule.as_str()), "{id}: {e}");
                assert!(e.message.starts_with("duplicate"), "{id}: {e}");
            }
            Err(e) => panic!("{id}: {e}"),
        }
    }
}
