use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Findings, RuleId};
use crate::graph::{co_reachable, reachable};
use crate::model::{ScTransition, StateChartModel, StateKind};

fn ids_of(m: &StateChartModel, kind: StateKind) -> impl Iterator<Item = &str> {
    m.states
        .iter()
        .filter(move |s| s.kind == kind)
        .map(|s| s.id.as_str())
}

fn state_ids(m: &StateChartModel) -> BTreeSet<&str> {
    m.states.iter().map(|s| s.id.as_str()).collect()
}

fn count_by<'a>(keys: impl Iterator<Item = &'a str>) -> BTreeMap<&'a str, usize> {
    let mut count = BTreeMap::new();
    for k in keys {
        *count.entry(k).or_insert(0) += 1;
    }
    count
}

fn opt(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("")
}

/// Findings naming a source state followed by the transitions of one group.
fn grouped<'a, K: Ord>(
    m: &'a StateChartModel,
    f: &mut Findings<'_>,
    key: impl Fn(&'a ScTransition) -> K,
    violated: impl Fn(&[&'a ScTransition]) -> bool,
    message: impl Fn(&'a ScTransition) -> String,
) {
    let mut groups: BTreeMap<K, Vec<&ScTransition>> = BTreeMap::new();
    for t in &m.transitions {
        groups.entry(key(t)).or_default().push(t);
    }
    for group in groups.values() {
        if group.len() < 2 || !violated(group) {
            continue;
        }
        let first = group[0];
        let mut ids: Vec<String> = group.iter().map(|t| t.id.clone()).collect();
        ids.sort();
        let mut elements = vec![first.source.clone()];
        elements.extend(ids);
        f.push(elements, message(first));
    }
}

pub(super) fn evaluate(m: &StateChartModel, f: &mut Findings<'_>) {
    match f.rule() {
        RuleId::B01 => {
            let initial: BTreeSet<&str> = ids_of(m, StateKind::Initial).collect();
            let n = m.states.iter().filter(|s| s.kind == StateKind::Initial).count();
            if n != 1 {
                f.push(
                    initial.iter().map(|s| s.to_string()).collect(),
                    format!("state chart has {n} initial states, expected exactly 1"),
                );
            }
        }
        RuleId::B02 => {
            for (id, n) in count_by(m.states.iter().map(|s| s.id.as_str())) {
                if n > 1 && f.wants(id) {
                    f.push(vec![id.to_string()], format!("state id `{id}` is declared {n} times"));
                }
            }
        }
        RuleId::B03 => {
            let seen = reachable(m.edges(), ids_of(m, StateKind::Initial));
            for id in state_ids(m) {
                if !seen.contains(id) {
                    f.push(vec![id.to_string()], format!("state `{id}` is unreachable from the initial state"));
                }
            }
        }
        RuleId::B04 => {
            let out = count_by(m.transitions.iter().map(|t| t.source.as_str()));
            let mut seen = BTreeSet::new();
            for s in m.states.iter().filter(|s| s.kind != StateKind::Final) {
                if f.wants(&s.id) && !out.contains_key(s.id.as_str()) && seen.insert(s.id.as_str()) {
                    f.push(
                        vec![s.id.clone()],
                        format!("state `{}` has no outgoing transition (deadlock)", s.id),
                    );
                }
            }
        }
        RuleId::B05 => {
            let states = state_ids(m);
            for t in &m.transitions {
                let mut elements = vec![t.id.clone()];
                for end in [&t.source, &t.target] {
                    if !states.contains(end.as_str()) && !elements.contains(end) {
                        elements.push(end.clone());
                    }
                }
                if elements.len() > 1 {
                    let missing = elements[1..].join("`, `");
                    f.push(
                        elements,
                        format!("transition `{}` references undeclared state `{missing}`", t.id),
                    );
                }
            }
        }
        RuleId::B06 => {
            let out = count_by(m.transitions.iter().map(|t| t.source.as_str()));
            let mut seen = BTreeSet::new();
            for id in ids_of(m, StateKind::Final) {
                if let Some(n) = out.get(id) {
                    if f.wants(id) && seen.insert(id) {
                        f.push(vec![id.to_string()], format!("final state `{id}` has {n} outgoing transition(s)"));
                    }
                }
            }
        }
        RuleId::B07 => {
            let inc = count_by(m.transitions.iter().map(|t| t.target.as_str()));
            let mut seen = BTreeSet::new();
            for id in ids_of(m, StateKind::Initial) {
                if let Some(n) = inc.get(id) {
                    if f.wants(id) && seen.insert(id) {
                        f.push(vec![id.to_string()], format!("initial state `{id}` has {n} incoming transition(s)"));
                    }
                }
            }
        }
        RuleId::B08 => grouped(
            m,
            f,
            |t| (t.source.as_str(), t.target.as_str(), t.event.as_deref(), t.guard.as_deref()),
            |_| true,
            |t| {
                format!(
                    "duplicate transitions `{}` -> `{}` on event `{}` with guard `{}`",
                    t.source,
                    t.target,
                    opt(&t.event),
                    opt(&t.guard)
                )
            },
        ),
        RuleId::B09 => grouped(
            m,
            f,
            |t| (t.source.as_str(), t.event.as_deref(), t.guard.as_deref()),
            |g| g.iter().any(|t| t.target != g[0].target),
            |t| {
                format!(
                    "state `{}` has conflicting transitions on event `{}` with guard `{}`",
                    t.source,
                    opt(&t.event),
                    opt(&t.guard)
                )
            },
        ),
        RuleId::B10 => {
            if m.states.iter().all(|s| s.kind == StateKind::Initial) {
                f.push(vec![], "state chart has no state besides initial states".into());
            }
        }
        RuleId::B11 => {
            if ids_of(m, StateKind::Final).next().is_none() {
                return;
            }
            let seen = co_reachable(m.edges(), ids_of(m, StateKind::Final));
            for id in state_ids(m) {
                if !seen.contains(id) {
                    f.push(vec![id.to_string()], format!("state `{id}` cannot reach a final state"));
                }
            }
        }
        other => unreachable!("{other} is not a behavior rule"),
    }
}
