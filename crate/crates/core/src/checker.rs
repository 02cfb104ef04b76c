//! Consistency checking of product-line variants with three strategies.
//!
//! * [`Strategy::Product`] derives each variant from the core and checks every
//!   rule on every model.
//! * [`Strategy::Incremental`] starts from the closest already-checked variant
//!   and re-checks whole models touched by the remaining deltas.
//! * [`Strategy::DeltaBased`] re-evaluates only the rules the applied
//!   operations can affect, limited to the touched elements where possible.
//!
//! All three produce the same diagnostics for a sound [`ImpactTable`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::delta::{apply_delta, touch_summary, ApplicationError, ApplicationErrorReason, Delta, TouchSet};
use crate::model::{ModelRef, ModelSet, Perspective};
use crate::rules::{
    canonicalize, check_delta_precondition, check_model, evaluate_rule, rules_for_perspective,
    Diagnostic, ImpactTable, RuleId, Severity,
};

/// Name under which the core is reported.
pub const CORE_VARIANT: &str = "core";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Product,
    Incremental,
    DeltaBased,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Product, Strategy::Incremental, Strategy::DeltaBased];

    pub const fn as_str(self) -> &'static str {
        match self {
            Strategy::Product => "product",
            Strategy::Incremental => "incremental",
            Strategy::DeltaBased => "delta",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown strategy `{0}` (expected product, incremental or delta)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownStrategy(s.into()))
    }
}

/// A named, ordered selection of deltas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantSpec {
    pub name: String,
    pub deltas: Vec<String>,
}

impl VariantSpec {
    pub fn new<I, S>(name: impl Into<String>, deltas: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VariantSpec {
            name: name.into(),
            deltas: deltas.into_iter().map(Into::into).collect(),
        }
    }
}

/// Core models, the delta pool and the variants to check.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProductLine {
    pub name: String,
    pub core: ModelSet,
    pub deltas: BTreeMap<String, Delta>,
    pub variants: Vec<VariantSpec>,
}

impl ProductLine {
    /// Resolves the delta names of `variant` against the pool.
    pub fn resolve(&self, variant: &VariantSpec) -> Result<Vec<&Delta>, CheckError> {
        variant
            .deltas
            .iter()
            .map(|name| {
                self.deltas.get(name).ok_or_else(|| CheckError::UnknownDelta {
                    variant: variant.name.clone(),
                    delta: name.clone(),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("variant `{variant}` applies unknown delta `{delta}`")]
    UnknownDelta { variant: String, delta: String },
    #[error("variant `{variant}`: {source}")]
    Application {
        variant: String,
        #[source]
        source: ApplicationError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub variant: String,
    pub strategy: Strategy,
    /// Canonically ordered.
    pub diagnostics: Vec<Diagnostic>,
    /// Rule evaluations on models plus delta-rule checks.
    pub checks_executed: usize,
    /// Rules evaluated per model; zero for models whose findings were reused.
    pub per_model_checks: BTreeMap<ModelRef, usize>,
    pub delta_rule_checks: usize,
}

impl CheckReport {
    pub fn count(&self, severity: Severity) -> usize {
        self.diagnostics.iter().filter(|d| d.severity == severity).count()
    }

    pub fn errors(&self) -> usize {
        self.count(Severity::Error)
    }

    pub fn warnings(&self) -> usize {
        self.count(Severity::Warning)
    }
}

type RuleCache = BTreeMap<RuleId, Vec<Diagnostic>>;

/// A checked variant that later variants sharing a delta prefix can start from.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantBaseline {
    pub variant: String,
    pub delta_names: Vec<String>,
    pub models: ModelSet,
    /// Complete findings of every model rule on every model.
    cache: BTreeMap<ModelRef, RuleCache>,
    /// Delta-rule findings accumulated along `delta_names`.
    delta_findings: Vec<Diagnostic>,
}

impl VariantBaseline {
    fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out: Vec<Diagnostic> = self
            .cache
            .values()
            .flat_map(|rules| rules.values().flatten().cloned())
            .chain(self.delta_findings.iter().cloned())
            .collect();
        canonicalize(&mut out);
        out
    }

    /// Whether this baseline's deltas are a prefix of `deltas`.
    pub fn is_prefix_of(&self, deltas: &[String]) -> bool {
        deltas.starts_with(&self.delta_names)
    }
}

/// Outcome of applying a delta sequence with target preconditions checked.
struct Derivation {
    models: ModelSet,
    touch: TouchSet,
    delta_findings: Vec<Diagnostic>,
    delta_rule_checks: usize,
}

fn derive(variant: &str, start: &ModelSet, deltas: &[&Delta]) -> Result<Derivation, CheckError> {
    let mut models = start.clone();
    let mut touches = Vec::new();
    let mut findings = Vec::new();
    let mut targets = BTreeSet::new();
    for delta in deltas {
        if let Some((_, finding)) = check_delta_precondition(&models, delta) {
            targets.insert(delta.target.model.clone());
            if let Some(d) = finding {
                findings.push(d);
                continue;
            }
        }
        match apply_delta(&models, delta) {
            Ok((next, touch)) => {
                models = next;
                touches.push(touch);
            }
            Err(e) if e.reason == ApplicationErrorReason::TargetModelMissing => {
                unreachable!("missing targets are reported by the delta rules")
            }
            Err(source) => {
                return Err(CheckError::Application {
                    variant: variant.into(),
                    source,
                })
            }
        }
    }
    Ok(Derivation {
        models,
        touch: touch_summary(&touches),
        delta_findings: findings,
        delta_rule_checks: targets.len(),
    })
}

fn full_check(models: &ModelSet, model: &ModelRef) -> (RuleCache, usize) {
    let check = check_model(models, model, None, None).expect("model belongs to the set");
    (check.by_rule, check.checks_executed)
}

fn perspective_rules(perspective: Perspective) -> impl Iterator<Item = RuleId> {
    rules_for_perspective(perspective).iter().copied()
}

#[derive(Debug, Clone, Default)]
pub struct Checker {
    pub impact: ImpactTable,
}

impl Checker {
    pub fn new(impact: ImpactTable) -> Self {
        Checker { impact }
    }

    /// Checks the core with every rule and returns it as the first baseline.
    pub fn check_core(&self, core: &ModelSet, strategy: Strategy) -> (CheckReport, VariantBaseline) {
        let mut cache = BTreeMap::new();
        let mut per_model = BTreeMap::new();
        for model in core.model_refs() {
            let (rules, n) = full_check(core, &model);
            per_model.insert(model.clone(), n);
            cache.insert(model, rules);
        }
        let baseline = VariantBaseline {
            variant: CORE_VARIANT.into(),
            delta_names: Vec::new(),
            models: core.clone(),
            cache,
            delta_findings: Vec::new(),
        };
        let report = report(CORE_VARIANT, strategy, &baseline, per_model, 0);
        (report, baseline)
    }

    /// Derives `variant` from the core and checks everything.
    pub fn check_variant_product(
        &self,
        core: &ModelSet,
        variant: &str,
        deltas: &[&Delta],
    ) -> Result<(CheckReport, VariantBaseline), CheckError> {
        let d = derive(variant, core, deltas)?;
        let mut cache = BTreeMap::new();
        let mut per_model = BTreeMap::new();
        for model in d.models.model_refs() {
            let (rules, n) = full_check(&d.models, &model);
            per_model.insert(model.clone(), n);
            cache.insert(model, rules);
        }
        let baseline = VariantBaseline {
            variant: variant.into(),
            delta_names: deltas.iter().map(|x| x.name.clone()).collect(),
            models: d.models,
            cache,
            delta_findings: d.delta_findings,
        };
        let report = report(variant, Strategy::Product, &baseline, per_model, d.delta_rule_checks);
        Ok((report, baseline))
    }

    /// Applies the deltas following `baseline`'s prefix and re-checks touched models.
    pub fn check_variant_incremental(
        &self,
        baseline: &VariantBaseline,
        variant: &str,
        deltas: &[&Delta],
    ) -> Result<(CheckReport, VariantBaseline), CheckError> {
        self.chained(baseline, variant, deltas, Strategy::Incremental)
    }

    /// Applies the deltas following `baseline`'s prefix and re-evaluates impacted rules.
    pub fn check_variant_delta_based(
        &self,
        baseline: &VariantBaseline,
        variant: &str,
        deltas: &[&Delta],
    ) -> Result<(CheckReport, VariantBaseline), CheckError> {
        self.chained(baseline, variant, deltas, Strategy::DeltaBased)
    }

    fn chained(
        &self,
        baseline: &VariantBaseline,
        variant: &str,
        deltas: &[&Delta],
        strategy: Strategy,
    ) -> Result<(CheckReport, VariantBaseline), CheckError> {
        let names: Vec<String> = deltas.iter().map(|x| x.name.clone()).collect();
        assert!(
            baseline.is_prefix_of(&names),
            "baseline `{}` is not a prefix of variant `{variant}`",
            baseline.variant
        );
        let suffix = &deltas[baseline.delta_names.len()..];
        let d = derive(variant, &baseline.models, suffix)?;

        let mut cache = BTreeMap::new();
        let mut per_model = BTreeMap::new();
        for model in d.models.model_refs() {
            let (rules, n) = match strategy {
                Strategy::Incremental => self.incremental_model(baseline, &d, &model),
                _ => self.delta_based_model(baseline, &d, &model),
            };
            per_model.insert(model.clone(), n);
            cache.insert(model, rules);
        }
        let mut delta_findings = baseline.delta_findings.clone();
        delta_findings.extend(d.delta_findings);
        let next = VariantBaseline {
            variant: variant.into(),
            delta_names: names,
            models: d.models,
            cache,
            delta_findings,
        };
        let report = report(variant, strategy, &next, per_model, d.delta_rule_checks);
        Ok((report, next))
    }

    fn incremental_model(&self, baseline: &VariantBaseline, d: &Derivation, model: &ModelRef) -> (RuleCache, usize) {
        let touch = &d.touch;
        let recheck = if *model == ModelRef::Mapping {
            touch.mapping_touched
                || !touch.created_models.is_empty()
                || touch
                    .touched_models
                    .iter()
                    .any(|m| d.models.mapping.references(m) || baseline.models.mapping.references(m))
                || self
                    .impact
                    .impacted(touch.operation_summary.values().flat_map(|ops| ops.keys().copied()))
                    .iter()
                    .any(|r| r.rule().perspective == Perspective::Mapping)
        } else {
            touch.created_models.contains(model)
                || (touch.touched_models.contains(model)
                    && self
                        .impact
                        .impacted(touch.operations_on(model))
                        .iter()
                        .any(|r| r.rule().perspective == model.perspective()))
        };
        if recheck {
            full_check(&d.models, model)
        } else {
            (baseline.cache[model].clone(), 0)
        }
    }

    /// Rules of `model`'s perspective to re-evaluate under the delta-based strategy.
    fn impacted_on(&self, d: &Derivation, model: &ModelRef) -> BTreeSet<RuleId> {
        let touch = &d.touch;
        let perspective = model.perspective();
        let mut rules = if perspective == Perspective::Mapping {
            let mut r = self
                .impact
                .impacted(touch.operation_summary.values().flat_map(|ops| ops.keys().copied()));
            for created in &touch.created_models {
                r.extend(self.impact.creation(created.perspective()));
            }
            r
        } else {
            self.impact.impacted(touch.operations_on(model))
        };
        rules.retain(|r| r.rule().perspective == perspective);
        rules
    }

    fn delta_based_model(&self, baseline: &VariantBaseline, d: &Derivation, model: &ModelRef) -> (RuleCache, usize) {
        if d.touch.created_models.contains(model) {
            return full_check(&d.models, model);
        }
        let impacted = self.impacted_on(d, model);
        let cached = &baseline.cache[model];
        if impacted.is_empty() {
            return (cached.clone(), 0);
        }
        let empty = BTreeSet::new();
        let scope = d.touch.scope_of(model).unwrap_or(&empty);
        let mut out = RuleCache::new();
        for rule in perspective_rules(model.perspective()) {
            let previous = &cached[&rule];
            let findings = if !impacted.contains(&rule) {
                previous.clone()
            } else if rule.is_scopable() && model.perspective() != Perspective::Mapping {
                let mut keep: Vec<Diagnostic> = previous.iter().filter(|x| !x.touches(scope)).cloned().collect();
                keep.extend(evaluate_rule(rule, &d.models, model, Some(scope)).expect("rule applies to model"));
                canonicalize(&mut keep);
                keep
            } else {
                evaluate_rule(rule, &d.models, model, None).expect("rule applies to model")
            };
            out.insert(rule, findings);
        }
        (out, impacted.len())
    }

    /// Checks the core and every variant of `line` with `strategy`, in order.
    ///
    /// Chained strategies start each variant from the checked variant whose
    /// delta list is the longest prefix of its own.
    pub fn check_product_line(&self, line: &ProductLine, strategy: Strategy) -> Result<Vec<CheckReport>, CheckError> {
        let (core_report, core) = self.check_core(&line.core, strategy);
        let mut reports = alloc::vec![core_report];
        let mut baselines = alloc::vec![core];
        for variant in &line.variants {
            let deltas = line.resolve(variant)?;
            let (report, baseline) = match strategy {
                Strategy::Product => self.check_variant_product(&line.core, &variant.name, &deltas)?,
                _ => {
                    let start = baselines
                        .iter()
                        .filter(|b| b.is_prefix_of(&variant.deltas))
                        .max_by_key(|b| b.delta_names.len())
                        .expect("the core is a prefix of every variant");
                    self.chained(start, &variant.name, &deltas, strategy)?
                }
            };
            reports.push(report);
            baselines.push(baseline);
        }
        Ok(reports)
    }

    /// Runs all three strategies and lines their reports up per variant.
    pub fn compare(&self, line: &ProductLine) -> Result<Vec<Comparison>, CheckError> {
        let product = self.check_product_line(line, Strategy::Product)?;
        let incremental = self.check_product_line(line, Strategy::Incremental)?;
        let delta = self.check_product_line(line, Strategy::DeltaBased)?;
        Ok(compare_reports(product, incremental, delta).expect("same product line"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("reports do not cover the same variants")]
pub struct MismatchedReports;

/// Lines up per-strategy report lists variant by variant.
pub fn compare_reports(
    product: Vec<CheckReport>,
    incremental: Vec<CheckReport>,
    delta: Vec<CheckReport>,
) -> Result<Vec<Comparison>, MismatchedReports> {
    let same = |a: &[CheckReport], b: &[CheckReport]| {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.variant == y.variant)
    };
    if !same(&product, &incremental) || !same(&product, &delta) {
        return Err(MismatchedReports);
    }
    let strategies_ok = product.iter().all(|r| r.strategy == Strategy::Product)
        && incremental.iter().all(|r| r.strategy == Strategy::Incremental)
        && delta.iter().all(|r| r.strategy == Strategy::DeltaBased);
    if !strategies_ok {
        return Err(MismatchedReports);
    }
    Ok(product
        .into_iter()
        .zip(incremental)
        .zip(delta)
        .map(|((p, i), d)| Comparison::new([p, i, d]))
        .collect())
}

fn report(
    variant: &str,
    strategy: Strategy,
    baseline: &VariantBaseline,
    per_model_checks: BTreeMap<ModelRef, usize>,
    delta_rule_checks: usize,
) -> CheckReport {
    let checks_executed = per_model_checks.values().sum::<usize>() + delta_rule_checks;
    CheckReport {
        variant: variant.into(),
        strategy,
        diagnostics: baseline.diagnostics(),
        checks_executed,
        per_model_checks,
        delta_rule_checks,
    }
}

/// The three strategy reports of one variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    /// Indexed in [`Strategy::ALL`] order.
    pub reports: [CheckReport; 3],
}

impl Comparison {
    pub fn new(reports: [CheckReport; 3]) -> Self {
        Comparison { reports }
    }

    pub fn variant(&self) -> &str {
        &self.reports[0].variant
    }

    pub fn report(&self, strategy: Strategy) -> &CheckReport {
        &self.reports[strategy as usize]
    }

    pub fn checks(&self, strategy: Strategy) -> usize {
        self.report(strategy).checks_executed
    }

    /// Percentage of product checks saved by `strategy`.
    pub fn reduction_pct(&self, strategy: Strategy) -> f64 {
        let product = self.checks(Strategy::Product);
        if product == 0 {
            return 0.0;
        }
        100.0 * (1.0 - self.checks(strategy) as f64 / product as f64)
    }

    /// Whether every strategy found exactly the same diagnostics.
    pub fn diagnostics_equal(&self) -> bool {
        let [p, i, d] = &self.reports;
        p.diagnostics == i.diagnostics && p.diagnostics == d.diagnostics
    }
}
