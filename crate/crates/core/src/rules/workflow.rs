use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Findings, RuleId};
use crate::graph::{co_reachable, reachable};
use crate::model::{NodeKind, WorkflowModel};

const PROBABILITY_EPSILON: f64 = 1e-9;

struct Degrees<'a> {
    incoming: BTreeMap<&'a str, usize>,
    outgoing: BTreeMap<&'a str, usize>,
}

impl<'a> Degrees<'a> {
    fn of(m: &'a WorkflowModel) -> Self {
        let mut incoming = BTreeMap::new();
        let mut outgoing = BTreeMap::new();
        for t in &m.transitions {
            *outgoing.entry(t.source.as_str()).or_insert(0) += 1;
            *incoming.entry(t.target.as_str()).or_insert(0) += 1;
        }
        Degrees { incoming, outgoing }
    }

    fn inc(&self, id: &str) -> usize {
        self.incoming.get(id).copied().unwrap_or(0)
    }

    fn out(&self, id: &str) -> usize {
        self.outgoing.get(id).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy)]
enum Bound {
    AtLeast(usize),
    Exactly(usize),
}

impl Bound {
    fn holds(self, n: usize) -> bool {
        match self {
            Bound::AtLeast(k) => n >= k,
            Bound::Exactly(k) => n == k,
        }
    }

    fn describe(self) -> String {
        match self {
            Bound::AtLeast(k) => format!("at least {k}"),
            Bound::Exactly(k) => format!("exactly {k}"),
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Incoming,
    Outgoing,
}

fn degree_rule(m: &WorkflowModel, f: &mut Findings<'_>, kind: NodeKind, side: Side, bound: Bound) {
    let deg = Degrees::of(m);
    let mut seen = BTreeSet::new();
    for n in m.nodes.iter().filter(|n| n.kind == kind) {
        if !f.wants(&n.id) || !seen.insert(n.id.as_str()) {
            continue;
        }
        let (count, word) = match side {
            Side::Incoming => (deg.inc(&n.id), "incoming"),
            Side::Outgoing => (deg.out(&n.id), "outgoing"),
        };
        if !bound.holds(count) {
            f.push(
                vec![n.id.clone()],
                format!(
                    "{} `{}` has {count} {word} transition(s), expected {}",
                    kind.keyword(),
                    n.id,
                    bound.describe()
                ),
            );
        }
    }
}

fn ids_of(m: &WorkflowModel, kind: NodeKind) -> impl Iterator<Item = &str> {
    m.nodes
        .iter()
        .filter(move |n| n.kind == kind)
        .map(|n| n.id.as_str())
}

fn node_ids(m: &WorkflowModel) -> BTreeSet<&str> {
    m.nodes.iter().map(|n| n.id.as_str()).collect()
}

fn decision_ids(m: &WorkflowModel) -> BTreeSet<&str> {
    ids_of(m, NodeKind::Decision).collect()
}

pub(super) fn evaluate(m: &WorkflowModel, f: &mut Findings<'_>) {
    use Bound::*;
    use NodeKind as K;
    use Side::*;
    match f.rule() {
        RuleId::W01 => {
            if ids_of(m, K::Initial).next().is_none() {
                f.push(vec![], "workflow has no initial node".into());
            }
        }
        RuleId::W02 => {
            if ids_of(m, K::Final).next().is_none() {
                f.push(vec![], "workflow has no final node".into());
            }
        }
        RuleId::W03 => degree_rule(m, f, K::Initial, Incoming, Exactly(0)),
        RuleId::W04 => degree_rule(m, f, K::Final, Outgoing, Exactly(0)),
        RuleId::W05 => degree_rule(m, f, K::Task, Incoming, AtLeast(1)),
        RuleId::W06 => degree_rule(m, f, K::Task, Outgoing, AtLeast(1)),
        RuleId::W07 => degree_rule(m, f, K::Decision, Incoming, Exactly(1)),
        RuleId::W08 => degree_rule(m, f, K::Decision, Outgoing, AtLeast(2)),
        RuleId::W09 => degree_rule(m, f, K::Merge, Incoming, AtLeast(2)),
        RuleId::W10 => degree_rule(m, f, K::Merge, Outgoing, Exactly(1)),
        RuleId::W11 => degree_rule(m, f, K::Fork, Incoming, Exactly(1)),
        RuleId::W12 => degree_rule(m, f, K::Fork, Outgoing, AtLeast(2)),
        RuleId::W13 => degree_rule(m, f, K::Join, Incoming, AtLeast(2)),
        RuleId::W14 => degree_rule(m, f, K::Join, Outgoing, Exactly(1)),
        RuleId::W15 => {
            let seen = reachable(m.edges(), ids_of(m, K::Initial));
            for id in node_ids(m) {
                if !seen.contains(id) {
                    f.push(
                        vec![id.to_string()],
                        format!("node `{id}` is not reachable from an initial node"),
                    );
                }
            }
        }
        RuleId::W16 => {
            let seen = co_reachable(m.edges(), ids_of(m, K::Final));
            for id in node_ids(m) {
                if !seen.contains(id) {
                    f.push(
                        vec![id.to_string()],
                        format!("node `{id}` cannot reach a final node"),
                    );
                }
            }
        }
        RuleId::W17 => {
            let nodes = node_ids(m);
            for t in &m.transitions {
                let mut elements = vec![t.id.clone()];
                for end in [&t.source, &t.target] {
                    if !nodes.contains(end.as_str()) && !elements.contains(end) {
                        elements.push(end.clone());
                    }
                }
                if elements.len() > 1 {
                    let missing = elements[1..].join("`, `");
                    f.push(
                        elements,
                        format!("transition `{}` references undeclared node `{missing}`", t.id),
                    );
                }
            }
        }
        RuleId::W18 => {
            let mut count: BTreeMap<&str, usize> = BTreeMap::new();
            for n in &m.nodes {
                *count.entry(n.id.as_str()).or_default() += 1;
            }
            for (id, n) in count {
                if n > 1 && f.wants(id) {
                    f.push(vec![id.to_string()], format!("node id `{id}` is declared {n} times"));
                }
            }
        }
        RuleId::W19 => {
            let decisions = decision_ids(m);
            for t in &m.transitions {
                if decisions.contains(t.source.as_str()) && t.guard.is_none() && t.probability.is_none() {
                    f.push(
                        vec![t.source.clone(), t.id.clone()],
                        format!(
                            "transition `{}` leaves decision `{}` without guard or probability",
                            t.id, t.source
                        ),
                    );
                }
            }
        }
        RuleId::W20 => {
            for d in decision_ids(m) {
                if !f.wants(d) {
                    continue;
                }
                let probs: Vec<f64> = m
                    .transitions
                    .iter()
                    .filter(|t| t.source == d)
                    .filter_map(|t| t.probability)
                    .collect();
                if probs.is_empty() {
                    continue;
                }
                let sum: f64 = probs.iter().sum();
                if !((sum - 1.0).abs() <= PROBABILITY_EPSILON) {
                    f.push(
                        vec![d.to_string()],
                        format!("probabilities leaving decision `{d}` sum to {sum}, expected 1"),
                    );
                }
            }
        }
        RuleId::W21 => {
            for t in &m.transitions {
                if let Some(p) = t.probability {
                    if !(0.0..=1.0).contains(&p) {
                        f.push(
                            vec![t.id.clone()],
                            format!("transition `{}` has probability {p} outside [0, 1]", t.id),
                        );
                    }
                }
            }
        }
        RuleId::W22 => {
            let mut seen = BTreeSet::new();
            for n in m.nodes.iter().filter(|n| n.kind == K::Task) {
                let bad = [("arrival", n.rates.arrival), ("service", n.rates.service)]
                    .into_iter()
                    .filter_map(|(name, r)| r.filter(|v| !(v.is_finite() && *v > 0.0)).map(|v| (name, v)))
                    .map(|(name, v)| format!("{name} rate {v}"))
                    .collect::<Vec<_>>();
                if !bad.is_empty() && seen.insert(n.id.as_str()) {
                    f.push(
                        vec![n.id.clone()],
                        format!("task `{}` has non-positive or non-finite {}", n.id, bad.join(" and ")),
                    );
                }
            }
        }
        other => unreachable!("{other} is not a workflow rule"),
    }
}
