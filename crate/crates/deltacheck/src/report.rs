//! JSON, CSV and plain-text renderings of check reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use deltacheck_core::{CheckReport, Comparison, Diagnostic, Strategy};
use serde::{Deserialize, Serialize};

/// Bumped whenever a field is added, renamed or changes meaning.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonReport {
    pub version: u32,
    pub strategy: String,
    pub variants: Vec<JsonVariant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct JsonVariant {
    pub name: String,
    pub checks_executed: usize,
    pub per_model_checks: BTreeMap<String, usize>,
    pub delta_rule_checks: usize,
    pub diagnostics: Vec<JsonDiagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonDiagnostic {
    pub rule: String,
    pub severity: String,
    pub model: String,
    pub elements: Vec<String>,
    pub message: String,
}

impl From<&Diagnostic> for JsonDiagnostic {
    fn from(d: &Diagnostic) -> Self {
        JsonDiagnostic {
            rule: d.rule.to_string(),
            severity: d.severity.to_string(),
            model: d.model.to_string(),
            elements: d.elements.clone(),
            message: d.message.clone(),
        }
    }
}

impl From<&CheckReport> for JsonVariant {
    fn from(r: &CheckReport) -> Self {
        JsonVariant {
            name: r.variant.clone(),
            checks_executed: r.checks_executed,
            per_model_checks: r.per_model_checks.iter().map(|(m, n)| (m.to_string(), *n)).collect(),
            delta_rule_checks: r.delta_rule_checks,
            diagnostics: r.diagnostics.iter().map(JsonDiagnostic::from).collect(),
        }
    }
}

impl JsonReport {
    pub fn new(strategy: Strategy, reports: &[CheckReport]) -> Self {
        JsonReport {
            version: REPORT_VERSION,
            strategy: strategy.as_str().to_string(),
            variants: reports.iter().map(JsonVariant::from).collect(),
        }
    }

    /// Pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Error and warning totals over `reports`.
pub fn totals(reports: &[CheckReport]) -> (usize, usize) {
    reports
        .iter()
        .fold((0, 0), |(e, w), r| (e + r.errors(), w + r.warnings()))
}

/// One header line per variant, one line per diagnostic, and a summary.
pub fn render_text(reports: &[CheckReport], quiet: bool) -> String {
    let mut out = String::new();
    for r in reports {
        if !quiet {
            let _ = writeln!(
                out,
                "variant {} ({}): {} checks, {} errors, {} warnings",
                r.variant,
                r.strategy,
                r.checks_executed,
                r.errors(),
                r.warnings()
            );
        }
        for d in &r.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
    }
    let (errors, warnings) = totals(reports);
    let _ = writeln!(out, "{errors} errors, {warnings} warnings");
    out
}

fn pct(x: f64) -> String {
    format!("{x:.1}")
}

/// Columns: variant, strategy, checks, reduction_pct, diagnostics_equal.
pub fn comparison_csv(rows: &[Comparison]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["variant", "strategy", "checks", "reduction_pct", "diagnostics_equal"])
        .expect("in-memory write");
    for row in rows {
        for s in Strategy::ALL {
            w.write_record([
                row.variant().to_string(),
                s.as_str().to_string(),
                row.checks(s).to_string(),
                pct(row.reduction_pct(s)),
                row.diagnostics_equal().to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Fixed-width table: check counts per strategy, reductions against product, agreement.
pub fn comparison_table(rows: &[Comparison]) -> String {
    let width = rows.iter().map(|r| r.variant().len()).max().unwrap_or(0).max("variant".len());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>7}  {:>11}  {:>5}  {:>7}  {:>7}  equal",
        "variant", "product", "incremental", "delta", "inc %", "delta %"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>7}  {:>11}  {:>5}  {:>7}  {:>7}  {}",
            r.variant(),
            r.checks(Strategy::Product),
            r.checks(Strategy::Incremental),
            r.checks(Strategy::DeltaBased),
            pct(r.reduction_pct(Strategy::Incremental)),
            pct(r.reduction_pct(Strategy::DeltaBased)),
            if r.diagnostics_equal() { "yes" } else { "NO" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use deltacheck_core::{ModelRef, RuleId};

    fn report(strategy: Strategy, checks: usize, diagnostics: Vec<Diagnostic>) -> CheckReport {
        CheckReport {
            variant: "V".into(),
            strategy,
            diagnostics,
            checks_executed: checks,
            per_model_checks: [(ModelRef::Mapping, checks)].into_iter().collect(),
            delta_rule_checks: 0,
        }
    }

    fn finding() -> Diagnostic {
        Diagnostic::new(
            RuleId::M04,
            ModelRef::Mapping,
            vec!["S".into()],
            "state chart `S` is not mapped to any component".into(),
        )
    }

    #[test]
    fn json_field_names_and_order() {
        let json = JsonReport::new(Strategy::Incremental, &[report(Strategy::Incremental, 5, vec![finding()])]).to_json();
        let expected = r#"{
  "version": 1,
  "strategy": "incremental",
  "variants": [
    {
      "name": "V",
      "checksExecuted": 5,
      "perModelChecks": {
        "mapping": 5
      },
      "deltaRuleChecks": 0,
      "diagnostics": [
        {
          "rule": "M04",
          "severity": "error",
          "model": "mapping",
          "elements": [
            "S"
          ],
          "message": "state chart `S` is not mapped to any component"
        }
      ]
    }
  ]
}
"#;
        assert_eq!(json, expected);
        let back: JsonReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.variants[0].diagnostics[0].rule, "M04");
    }

    #[test]
    fn csv_rows_per_strategy() {
        let rows = [Comparison::new([
            report(Strategy::Product, 8, vec![]),
            report(Strategy::Incremental, 6, vec![]),
            report(Strategy::DeltaBased, 1, vec![finding()]),
        ])];
        assert_eq!(
            comparison_csv(&rows),
            "variant,strategy,checks,reduction_pct,diagnostics_equal\n\
             V,product,8,0.0,false\n\
             V,incremental,6,25.0,false\n\
             V,delta,1,87.5,false\n"
        );
        assert!(comparison_table(&rows).contains("NO"));
    }

    #[test]
    fn text_summary() {
        let text = render_text(&[report(Strategy::Product, 5, vec![finding()])], false);
        assert_eq!(
            text,
            "variant V (product): 5 checks, 1 errors, 0 warnings\n  \
             M04 error mapping S: state chart `S` is not mapped to any component\n1 errors, 0 warnings\n"
        );
        assert_eq!(render_text(&[], true), "0 errors, 0 warnings\n");
    }
}
