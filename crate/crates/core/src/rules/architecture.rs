use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Findings, RuleId};
use crate::model::{ArchitectureModel, Direction, Endpoint};

fn port_key(component: &str, port: &str) -> String {
    format!("{component}.{port}")
}

fn attached(m: &ArchitectureModel) -> BTreeSet<&Endpoint> {
    m.connectors
        .iter()
        .flat_map(|k| [&k.source, &k.target])
        .chain(m.externals.iter().map(|e| &e.target))
        .collect()
}

fn duplicates<'a>(names: impl Iterator<Item = &'a str>) -> Vec<(&'a str, usize)> {
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for n in names {
        *count.entry(n).or_default() += 1;
    }
    count.into_iter().filter(|(_, n)| *n > 1).collect()
}

pub(super) fn evaluate(m: &ArchitectureModel, f: &mut Findings<'_>) {
    match f.rule() {
        RuleId::A01 => {
            for (name, n) in duplicates(m.components.iter().map(|c| c.name.as_str())) {
                if f.wants(name) {
                    f.push(vec![name.to_string()], format!("component `{name}` is declared {n} times"));
                }
            }
        }
        RuleId::A02 => {
            for c in &m.components {
                for (port, n) in duplicates(c.ports.iter().map(|p| p.name.as_str())) {
                    let key = port_key(&c.name, port);
                    if f.wants(&key) {
                        f.push(vec![key], format!("component `{}` declares port `{port}` {n} times", c.name));
                    }
                }
            }
        }
        RuleId::A03 => {
            let used = attached(m);
            for c in &m.components {
                for p in &c.ports {
                    let ep = Endpoint::new(c.name.clone(), p.name.clone());
                    if !used.contains(&ep) {
                        f.push(vec![ep.to_string()], format!("port `{ep}` has no connector or external signal"));
                    }
                }
            }
        }
        RuleId::A04 => {
            for k in &m.connectors {
                let mut elements = vec![k.id.clone()];
                for ep in [&k.source, &k.target] {
                    let key = ep.to_string();
                    if m.resolve(ep).next().is_none() && !elements.contains(&key) {
                        elements.push(key);
                    }
                }
                if elements.len() > 1 {
                    let missing = elements[1..].join("`, `");
                    f.push(elements, format!("connector `{}` references undeclared port `{missing}`", k.id));
                }
            }
            for e in &m.externals {
                if m.resolve(&e.target).next().is_none() {
                    f.push(
                        vec![e.element_id(), e.target.to_string()],
                        format!("external signal `{}` targets undeclared port `{}`", e.signal, e.target),
                    );
                }
            }
        }
        RuleId::A05 => {
            for k in &m.connectors {
                let mut elements = vec![k.id.clone()];
                for (ep, wanted) in [(&k.source, Direction::Out), (&k.target, Direction::In)] {
                    let mut ports = m.resolve(ep).peekable();
                    if ports.peek().is_some() && !ports.any(|p| p.direction == wanted) {
                        let key = ep.to_string();
                        if !elements.contains(&key) {
                            elements.push(key);
                        }
                    }
                }
                if elements.len() > 1 {
                    f.push(
                        elements,
                        format!(
                            "connector `{}` must run from an out port to an in port ({} -> {})",
                            k.id, k.source, k.target
                        ),
                    );
                }
            }
        }
        RuleId::A06 => {
            for (name, n) in duplicates(m.signals.iter().map(|s| s.name.as_str())) {
                if f.wants(name) {
                    f.push(vec![name.to_string()], format!("signal `{name}` is declared {n} times"));
                }
            }
        }
        RuleId::A07 => {
            let declared: BTreeSet<&str> = m.signals.iter().map(|s| s.name.as_str()).collect();
            for k in &m.connectors {
                if !declared.contains(k.signal.as_str()) {
                    f.push(
                        vec![k.id.clone(), k.signal.clone()],
                        format!("connector `{}` carries undeclared signal `{}`", k.id, k.signal),
                    );
                }
            }
        }
        RuleId::A08 => {
            let carried: BTreeSet<&str> = m
                .connectors
                .iter()
                .map(|k| k.signal.as_str())
                .chain(m.externals.iter().map(|e| e.signal.as_str()))
                .collect();
            let declared: BTreeSet<&str> = m.signals.iter().map(|s| s.name.as_str()).collect();
            for s in declared {
                if !carried.contains(s) {
                    f.push(vec![s.to_string()], format!("signal `{s}` is never transmitted"));
                }
            }
        }
        RuleId::A09 => {
            for k in &m.connectors {
                if k.source.component == k.target.component {
                    f.push(
                        vec![k.id.clone()],
                        format!("connector `{}` links component `{}` to itself", k.id, k.source.component),
                    );
                }
            }
        }
        RuleId::A10 => {
            let mut seen = BTreeSet::new();
            for c in m.components.iter().filter(|c| c.ports.is_empty()) {
                if seen.insert(c.name.as_str()) {
                    f.push(vec![c.name.clone()], format!("component `{}` has no ports", c.name));
                }
            }
        }
        RuleId::A11 => {
            for e in &m.externals {
                if !m.resolve(&e.target).any(|p| p.direction == Direction::In) {
                    f.push(
                        vec![e.element_id(), e.target.to_string()],
                        format!("external signal `{}` does not reach an in port at `{}`", e.signal, e.target),
                    );
                }
            }
        }
        other => unreachable!("{other} is not an architecture rule"),
    }
}
