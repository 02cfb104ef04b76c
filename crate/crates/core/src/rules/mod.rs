//! The consistency rule catalog, rule evaluation and the operation impact table.

mod architecture;
mod behavior;
mod catalog;
mod impact;
mod mapping;
mod workflow;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use catalog::{
    rules_for, rules_for_perspective, Level, Rule, RuleGroup, RuleId, Severity, UnknownRule,
};
pub use impact::{impacted_rules, ImpactTable};

use crate::delta::{Delta, TargetMode};
use crate::model::{ModelRef, ModelSet, ModelView};

/// One rule violation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub rule: RuleId,
    pub model: ModelRef,
    /// Offending element ids; empty for model-level findings.
    pub elements: Vec<String>,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn new(rule: RuleId, model: ModelRef, elements: Vec<String>, message: String) -> Self {
        Diagnostic {
            rule,
            model,
            elements,
            severity: rule.severity(),
            message,
        }
    }

    fn same_finding(&self, other: &Diagnostic) -> bool {
        self.rule == other.rule && self.model == other.model && self.elements == other.elements
    }

    /// Whether any named element is in `scope`.
    pub fn touches(&self, scope: &BTreeSet<String>) -> bool {
        self.elements.iter().any(|e| scope.contains(e))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.rule, self.severity, self.model)?;
        if !self.elements.is_empty() {
            write!(f, " {}", self.elements.join(","))?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Sorts canonically and removes repeated (rule, model, elements) findings.
pub fn canonicalize(diagnostics: &mut Vec<Diagnostic>) {
    diagnostics.sort();
    diagnostics.dedup_by(|a, b| a.same_finding(b));
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {rule} does not apply to {model}")]
    PerspectiveMismatch { rule: RuleId, model: ModelRef },
    #[error("{0} is not part of the model set")]
    ModelMissing(ModelRef),
    #[error("rule {0} checks deltas, not models")]
    DeltaRule(RuleId),
}

/// Collects findings of one rule, dropping those outside the element scope.
pub(crate) struct Findings<'s> {
    rule: RuleId,
    model: ModelRef,
    scope: Option<&'s BTreeSet<String>>,
    out: Vec<Diagnostic>,
}

impl<'s> Findings<'s> {
    fn new(rule: RuleId, model: ModelRef, scope: Option<&'s BTreeSet<String>>) -> Self {
        Findings {
            rule,
            model,
            scope,
            out: Vec::new(),
        }
    }

    pub(crate) fn rule(&self) -> RuleId {
        self.rule
    }

    /// Cheap pre-filter for findings naming only `id`.
    pub(crate) fn wants(&self, id: &str) -> bool {
        self.scope.is_none_or(|s| s.contains(id))
    }

    pub(crate) fn push(&mut self, elements: Vec<String>, message: String) {
        if let Some(scope) = self.scope {
            if !elements.iter().any(|e| scope.contains(e)) {
                return;
            }
        }
        self.out
            .push(Diagnostic::new(self.rule, self.model.clone(), elements, message));
    }

    fn finish(mut self) -> Vec<Diagnostic> {
        canonicalize(&mut self.out);
        self.out
    }
}

/// Evaluates one rule against one model of `models`.
///
/// `scope` restricts element-scopable rules to findings naming at least one
/// of the given ids and is ignored by the others.
pub fn evaluate_rule(
    rule: RuleId,
    models: &ModelSet,
    target: &ModelRef,
    scope: Option<&BTreeSet<String>>,
) -> Result<Vec<Diagnostic>, RuleError> {
    if rule.is_delta_rule() {
        return Err(RuleError::DeltaRule(rule));
    }
    if rule.rule().perspective != target.perspective() {
        return Err(RuleError::PerspectiveMismatch {
            rule,
            model: target.clone(),
        });
    }
    let view = models
        .get(target)
        .ok_or_else(|| RuleError::ModelMissing(target.clone()))?;
    let scope = if rule.is_scopable() { scope } else { None };
    let mut findings = Findings::new(rule, target.clone(), scope);
    match view {
        ModelView::Workflow(m) => workflow::evaluate(m, &mut findings),
        ModelView::Architecture(m) => architecture::evaluate(m, &mut findings),
        ModelView::StateChart(m) => behavior::evaluate(m, &mut findings),
        ModelView::Mapping(m) => mapping::evaluate(m, models, &mut findings),
    }
    Ok(findings.finish())
}

/// Result of checking one model: findings and the number of rules evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelCheck {
    pub diagnostics: Vec<Diagnostic>,
    /// Findings grouped per evaluated rule (rules without findings included).
    pub by_rule: BTreeMap<RuleId, Vec<Diagnostic>>,
    pub checks_executed: usize,
}

/// Evaluates every applicable rule passing `filter` on `target`.
pub fn check_model(
    models: &ModelSet,
    target: &ModelRef,
    filter: Option<&BTreeSet<RuleId>>,
    scope: Option<&BTreeSet<String>>,
) -> Result<ModelCheck, RuleError> {
    if !models.contains(target) {
        return Err(RuleError::ModelMissing(target.clone()));
    }
    let mut result = ModelCheck::default();
    for &rule in rules_for_perspective(target.perspective()) {
        if filter.is_some_and(|f| !f.contains(&rule)) {
            continue;
        }
        let found = evaluate_rule(rule, models, target, scope)?;
        result.diagnostics.extend(found.iter().cloned());
        result.by_rule.insert(rule, found);
        result.checks_executed += 1;
    }
    canonicalize(&mut result.diagnostics);
    Ok(result)
}

/// Checks the target-model precondition of `delta` against `models`.
///
/// Returns the rule evaluated (none for mapping deltas) and its finding.
pub fn check_delta_precondition(models: &ModelSet, delta: &Delta) -> Option<(RuleId, Option<Diagnostic>)> {
    let target = &delta.target.model;
    let rule = RuleId::delta_rule_for(target.perspective())?;
    let holds = match delta.target.mode {
        TargetMode::Modify => models.contains(target),
        TargetMode::Create => true,
    };
    let finding = (!holds).then(|| {
        Diagnostic::new(
            rule,
            target.clone(),
            alloc::vec![delta.name.clone()],
            alloc::format!("delta `{}` targets {} which does not exist", delta.name, target),
        )
    });
    Some((rule, finding))
}
