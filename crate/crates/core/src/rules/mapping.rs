use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Findings, RuleId};
use crate::model::{MappingModel, ModelSet};

fn component_exists(models: &ModelSet, architecture: &str, component: &str) -> bool {
    models
        .architectures
        .get(architecture)
        .is_some_and(|a| a.has_component(component))
}

pub(super) fn evaluate(m: &MappingModel, models: &ModelSet, f: &mut Findings<'_>) {
    match f.rule() {
        RuleId::M01 => {
            for e in &m.task_maps {
                let id = e.element_id();
                if !f.wants(&id) {
                    continue;
                }
                let mut missing = Vec::new();
                if !models.workflows.get(&e.workflow).is_some_and(|w| w.has_task(&e.task)) {
                    missing.push(format!("task `{}.{}`", e.workflow, e.task));
                }
                if !component_exists(models, &e.architecture, &e.component) {
                    missing.push(format!("component `{}.{}`", e.architecture, e.component));
                }
                if !missing.is_empty() {
                    f.push(vec![id], format!("task mapping references unknown {}", missing.join(" and ")));
                }
            }
        }
        RuleId::M02 => {
            for e in &m.behavior_maps {
                let id = e.element_id();
                if !f.wants(&id) {
                    continue;
                }
                let mut missing = Vec::new();
                if !component_exists(models, &e.architecture, &e.component) {
                    missing.push(format!("component `{}.{}`", e.architecture, e.component));
                }
                if !models.statecharts.contains_key(&e.statechart) {
                    missing.push(format!("state chart `{}`", e.statechart));
                }
                if !missing.is_empty() {
                    f.push(vec![id], format!("behavior mapping references unknown {}", missing.join(" and ")));
                }
            }
        }
        RuleId::M03 => {
            let mut charts: BTreeMap<(&str, &str), BTreeSet<&str>> = BTreeMap::new();
            for e in &m.behavior_maps {
                charts
                    .entry((e.architecture.as_str(), e.component.as_str()))
                    .or_default()
                    .insert(e.statechart.as_str());
            }
            for ((arch, comp), set) in charts {
                if set.len() > 1 {
                    let names: Vec<&str> = set.into_iter().collect();
                    f.push(
                        vec![format!("{arch}.{comp}")],
                        format!("component `{arch}.{comp}` is described by state charts `{}`", names.join("`, `")),
                    );
                }
            }
        }
        RuleId::M04 => {
            let mapped: BTreeSet<&str> = m.behavior_maps.iter().map(|e| e.statechart.as_str()).collect();
            for name in models.statecharts.keys() {
                if !mapped.contains(name.as_str()) {
                    f.push(vec![name.clone()], format!("state chart `{name}` is not mapped to any component"));
                }
            }
        }
        RuleId::M05 => coverage(m, models, f),
        other => unreachable!("{other} is not a mapping rule"),
    }
}

/// Unmapped components and signals no adjacent component's chart reacts to.
fn coverage(m: &MappingModel, models: &ModelSet, f: &mut Findings<'_>) {
    let executing: BTreeSet<(&str, &str)> = m
        .task_maps
        .iter()
        .map(|e| (e.architecture.as_str(), e.component.as_str()))
        .collect();
    for (arch_name, arch) in &models.architectures {
        let mut seen = BTreeSet::new();
        for c in &arch.components {
            if !executing.contains(&(arch_name.as_str(), c.name.as_str())) && seen.insert(c.name.as_str()) {
                f.push(
                    vec![format!("component {arch_name}.{}", c.name)],
                    format!("component `{arch_name}.{}` is not mapped to any task", c.name),
                );
            }
        }

        let declared: BTreeSet<&str> = arch.signals.iter().map(|s| s.name.as_str()).collect();
        for signal in declared {
            let adjacent: BTreeSet<&str> = arch
                .connectors
                .iter()
                .filter(|k| k.signal == signal)
                .flat_map(|k| [k.source.component.as_str(), k.target.component.as_str()])
                .chain(
                    arch.externals
                        .iter()
                        .filter(|e| e.signal == signal)
                        .map(|e| e.target.component.as_str()),
                )
                .collect();
            let used = m
                .behavior_maps
                .iter()
                .filter(|e| e.architecture == *arch_name && adjacent.contains(e.component.as_str()))
                .filter_map(|e| models.statecharts.get(&e.statechart))
                .any(|chart| chart.transitions.iter().any(|t| t.event.as_deref() == Some(signal)));
            if !used {
                f.push(
                    vec![String::from("signal ") + arch_name + "." + signal],
                    format!("signal `{arch_name}.{signal}` is not used by the state chart of any adjacent component"),
                );
            }
        }
    }
}
